use super::{FreeComplexS, SqSModule, SqSpaces};
use crate::exactla::{kernel_basis, Field, Matrix};
use crate::grading::{BettiTable, Subset};

/// A minimal free resolution of a squarefree module, in spots `-pd..0`.
#[derive(Clone, Debug)]
pub struct SqResolution<F: Field> {
    pub complex: FreeComplexS<F>,
    pub betti: BettiTable,
}

impl<F: Field> SqResolution<F> {
    pub fn proj_dim(&self) -> Option<usize> {
        self.betti.min_spot().map(|i| (-i) as usize)
    }

    pub fn length(&self) -> usize {
        self.proj_dim().unwrap_or(0)
    }
}

impl<F: Field> SqSModule<F> {
    /// Minimal free resolution by repeated minimal covers. Kernels are taken
    /// subset by subset, since squarefree modules are closed under kernels.
    pub fn min_free_resolution(&self) -> SqResolution<F> {
        let f = self.field();
        let d = self.nvars();
        let mut gens_by_step: Vec<Vec<Subset>> = Vec::new();
        let mut diffs: Vec<Matrix<F::Elem>> = Vec::new();
        let mut cur = self.clone();
        // embedding of `cur` into the previous cover, per subset
        let mut embedding: Option<SqSpaces<F::Elem>> = None;
        while !cur.is_zero() {
            let gens = cur.minimal_generators();
            let degs: Vec<Subset> = gens.iter().map(|(s, _)| *s).collect();
            if let Some(emb) = embedding.take() {
                let prev = gens_by_step.last().expect("previous cover exists");
                let mut m = Matrix::zeros(&f, prev.len(), degs.len());
                for (c, (s, v)) in gens.iter().enumerate() {
                    // coordinates in the previous cover's basis at s
                    let cols = &emb[s.index()];
                    let w = Matrix::from_columns(&f, cols[0].len(), cols).apply(&f, v);
                    let idx: Vec<usize> =
                        (0..prev.len()).filter(|&g| prev[g].is_subset_of(*s)).collect();
                    for (k, g) in idx.iter().enumerate() {
                        m.set(*g, c, w[k].clone());
                    }
                }
                diffs.push(m);
            }
            let (cover, spaces) = cur.cover_kernel(&gens);
            gens_by_step.push(degs);
            cur = cover.submodule(&spaces);
            embedding = Some(spaces);
            assert!(gens_by_step.len() <= d + 1, "resolution longer than d");
        }
        // spot -t holds step t; the complex runs from spot -len+1 up to 0
        let len = gens_by_step.len();
        let gens: Vec<Vec<_>> = gens_by_step
            .iter()
            .rev()
            .map(|g| g.iter().map(|s| s.to_degree(d)).collect())
            .collect();
        let diffs: Vec<Matrix<F::Elem>> = diffs.into_iter().rev().collect();
        let complex = if len == 0 {
            FreeComplexS::zero(f, d)
        } else {
            FreeComplexS::new(f, d, -(len as i32) + 1, gens, diffs)
                .expect("resolution differentials respect degrees")
        };
        let betti = complex.generator_table();
        SqResolution { complex, betti }
    }

    /// The minimal cover on `gens` and its kernel, per subset.
    fn cover_kernel(&self, gens: &[(Subset, Vec<F::Elem>)]) -> (SqSModule<F>, SqSpaces<F::Elem>) {
        let f = self.field();
        let d = self.nvars();
        let degs: Vec<Subset> = gens.iter().map(|(s, _)| *s).collect();
        let cover = SqSModule::free(f, d, &degs);
        let mut spaces: SqSpaces<F::Elem> = vec![Vec::new(); 1 << d];
        for s in Subset::all(d) {
            let n = cover.dim(s);
            if n == 0 {
                continue;
            }
            let cols: Vec<Vec<F::Elem>> = gens
                .iter()
                .filter(|(g, _)| g.is_subset_of(s))
                .map(|(g, v)| self.transport(*g, s, v))
                .collect();
            spaces[s.index()] = if self.dim(s) == 0 {
                (0..n)
                    .map(|k| {
                        let mut e = vec![f.zero(); n];
                        e[k] = f.one();
                        e
                    })
                    .collect()
            } else {
                kernel_basis(&f, &Matrix::from_columns(&f, self.dim(s), &cols))
            };
        }
        (cover, spaces)
    }

    /// First syzygy module: the kernel of the minimal cover.
    pub fn syzygy_module(&self) -> SqSModule<F> {
        let (cover, spaces) = self.cover_kernel(&self.minimal_generators());
        cover.submodule(&spaces)
    }

    /// `Omega_i(M)` with `Omega_0 = M`.
    pub fn nth_syzygy(&self, i: usize) -> SqSModule<F> {
        (0..i).fold(self.clone(), |m, _| {
            if m.is_zero() {
                m
            } else {
                m.syzygy_module()
            }
        })
    }

    pub fn betti(&self) -> BettiTable {
        self.min_free_resolution().betti
    }

    pub fn proj_dim(&self) -> Option<usize> {
        self.min_free_resolution().proj_dim()
    }

    pub fn reg(&self) -> Option<i32> {
        self.betti().reg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::grading::{MonomialIdeal, Multidegree, Side};
    use crate::smod::betti_via_koszul;

    fn all_sq(d: usize) -> Vec<Multidegree> {
        Subset::all(d).map(|s| s.to_degree(d)).collect()
    }

    #[test]
    fn free_module_resolves_trivially() {
        let f = Rationals;
        let r = SqSModule::free(f, 3, &[Subset::EMPTY]).min_free_resolution();
        assert_eq!(r.proj_dim(), Some(0));
        assert_eq!(r.betti.get(0, &Multidegree::zero(3)), 1);
    }

    #[test]
    fn residue_field_gives_koszul() {
        let f = Rationals;
        let r = SqSModule::residue_field(f, 3).min_free_resolution();
        r.complex.check_d2().unwrap();
        for s in Subset::all(3) {
            assert_eq!(r.betti.get(-(s.len() as i32), &s.to_degree(3)), 1);
        }
        assert_eq!(r.proj_dim(), Some(3));
        // Omega_i(K) is generated in degree i with a linear resolution
        let k = SqSModule::residue_field(f, 3);
        for i in 1..=3 {
            let om = k.nth_syzygy(i);
            assert_eq!(om.betti().reg(), Some(i as i32));
            assert_eq!(om.proj_dim(), Some(3 - i));
        }
    }

    #[test]
    fn three_points_matches_koszul_oracle() {
        let f = Rationals;
        let s = |v: &[usize]| Subset::from_indices(v);
        let i = MonomialIdeal::new(Side::S, 3, [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]);
        let m = SqSModule::from_ideal(f, &i, true);
        let r = m.min_free_resolution();
        r.complex.check_d2().unwrap();
        assert_eq!(r.betti, betti_via_koszul(&m, &all_sq(3)).unwrap());
        assert_eq!(r.betti.coarse(-2, 3), 2);
        assert_eq!(r.betti.reg(), Some(1));
        // cohomology of the resolution recovers M
        let (lo, _) = r.complex.spot_range().unwrap();
        for a in all_sq(3) {
            for p in lo..0 {
                assert_eq!(r.complex.cohomology_dim_at(p, &a).unwrap(), 0);
            }
            assert_eq!(r.complex.cohomology_dim_at(0, &a).unwrap(), m.eval_dim(&a));
        }
    }
}
