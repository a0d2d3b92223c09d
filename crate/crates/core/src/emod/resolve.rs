use std::collections::BTreeMap;

use super::{free_basis_index, EModule, Spaces, SubModule};
use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, Field, Matrix};
use crate::grading::{BettiTable, Multidegree, Subset};

/// A minimal cover `P -> N` and its kernel.
#[derive(Clone, Debug)]
pub struct Syzygy<F: Field> {
    /// Degrees of the free generators, i.e. of a basis of `N / mN`.
    pub cover_degrees: Vec<Multidegree>,
    /// Image of each free generator in `N`.
    pub generator_images: Vec<Vec<F::Elem>>,
    pub cover: EModule<F>,
    /// The kernel, embedded in `cover`.
    pub kernel: SubModule<F>,
}

impl<F: Field> EModule<F> {
    /// First syzygy via the minimal cover.
    pub fn syzygy(&self) -> Result<Syzygy<F>> {
        if self.is_zero() {
            return Err(Error::ZeroModule);
        }
        let f = self.field();
        let d = self.nvars();
        let gens = self.minimal_generators();
        let cover_degrees: Vec<Multidegree> = gens.iter().map(|(a, _)| *a).collect();
        let cover = EModule::free(f, d, &cover_degrees);
        let index = free_basis_index(d, &cover_degrees);
        let mut spaces: Spaces<F::Elem> = BTreeMap::new();
        for (a, list) in &index {
            let n = self.dim_at(a);
            let cols: Vec<Vec<F::Elem>> = list
                .iter()
                .map(|&(g, s)| {
                    if n == 0 {
                        Vec::new()
                    } else {
                        self.act_monomial(s, &gens[g].0, &gens[g].1)
                    }
                })
                .collect();
            let ker = if n == 0 {
                identity_columns(&f, list.len())
            } else {
                kernel_basis(&f, &Matrix::from_columns(&f, n, &cols))
            };
            if !ker.is_empty() {
                spaces.insert(*a, ker);
            }
        }
        let kernel = cover.submodule(&spaces);
        Ok(Syzygy {
            cover_degrees,
            generator_images: gens.into_iter().map(|(_, v)| v).collect(),
            cover,
            kernel,
        })
    }

    /// The `i`-th syzygy `Omega_i(N)` (with `Omega_0 = N`).
    pub fn nth_syzygy(&self, i: usize) -> Result<EModule<F>> {
        let mut cur = self.clone();
        for _ in 0..i {
            if cur.is_zero() {
                return Ok(cur);
            }
            cur = cur.syzygy()?.kernel.module;
        }
        Ok(cur)
    }

    /// Minimal free resolution up to homological step `k`.
    pub fn resolution_prefix(&self, k: usize) -> Result<EResolutionPrefix<F>> {
        if self.is_zero() {
            return Err(Error::ZeroModule);
        }
        let d = self.nvars();
        let mut steps = Vec::new();
        let mut differentials = Vec::new();
        let mut betti = BettiTable::new();
        let mut cur = self.clone();
        let mut prev_embedding: Option<Spaces<F::Elem>> = None;
        for t in 0..=k {
            if cur.is_zero() {
                break;
            }
            let syz = cur.syzygy()?;
            for a in &syz.cover_degrees {
                betti.add(-(t as i32), *a, 1);
            }
            if let Some(emb) = prev_embedding.take() {
                // generator images, written in the previous cover's basis
                let images: Vec<(Multidegree, Vec<F::Elem>)> = syz
                    .cover_degrees
                    .iter()
                    .zip(&syz.generator_images)
                    .map(|(a, v)| {
                        let cols = &emb[a];
                        let m = Matrix::from_columns(&self.field(), cols[0].len(), cols);
                        (*a, m.apply(&self.field(), v))
                    })
                    .collect();
                differentials.push(images);
            }
            steps.push(syz.cover_degrees.clone());
            prev_embedding = Some(syz.kernel.basis.clone());
            cur = syz.kernel.module;
        }
        let prefix = EResolutionPrefix {
            f: self.field(),
            d,
            steps,
            differentials,
            betti,
        };
        prefix.check_minimal()?;
        Ok(prefix)
    }
}

impl<F: Field> EModule<F> {
    /// Betti numbers for steps `0..=k` from the dual image:
    /// `beta^{i,a}(N) = dim H^{d-i-|a|}(F(D N))_{a-1}`.
    pub fn betti_closed_form(&self, k: usize) -> Result<BettiTable> {
        if self.is_zero() {
            return Err(Error::ZeroModule);
        }
        let d = self.nvars();
        let t = crate::bgg::functor_f_module(&self.dual())?.complex;
        let mut table = BettiTable::new();
        let (Some((plo, phi)), Some(bx)) = (t.spot_range(), t.generator_box()) else {
            return Ok(table);
        };
        let one = Multidegree::ones(d);
        for step in 0..=k as i32 {
            for p in plo..=phi {
                let extra = step - p - bx.lo.total();
                if extra < 0 {
                    continue;
                }
                for e in compositions(d, extra) {
                    let c = bx.lo + Multidegree::from_slice(&e);
                    let h = t.cohomology_dim_at(p, &c)?;
                    table.add(-step, c + one, h);
                }
            }
        }
        Ok(table)
    }
}

/// All `e ∈ N^d` with `|e| = n`.
fn compositions(d: usize, n: i32) -> Vec<Vec<i32>> {
    if d == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(d - 1, n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn identity_columns<F: Field>(f: &F, n: usize) -> Vec<Vec<F::Elem>> {
    (0..n)
        .map(|k| {
            let mut e = vec![f.zero(); n];
            e[k] = f.one();
            e
        })
        .collect()
}

/// The first steps of a minimal free resolution over `E`.
#[derive(Clone, Debug)]
pub struct EResolutionPrefix<F: Field> {
    f: F,
    pub d: usize,
    /// Generator degrees of `P_t` for `t = 0..`.
    pub steps: Vec<Vec<Multidegree>>,
    /// `differentials[t]` lists, for each generator of `P_{t+1}`, its image
    /// in `P_t` as a coordinate vector in the free basis of that degree.
    pub differentials: Vec<Vec<(Multidegree, Vec<F::Elem>)>>,
    pub betti: BettiTable,
}

impl<F: Field> EResolutionPrefix<F> {
    /// No generator image has a component on a generator of the same degree.
    pub fn check_minimal(&self) -> Result<()> {
        for (t, images) in self.differentials.iter().enumerate() {
            let index = free_basis_index(self.d, &self.steps[t]);
            for (a, v) in images {
                for (pos, &(_, s)) in index[a].iter().enumerate() {
                    if s == Subset::EMPTY && !self.f.is_zero(&v[pos]) {
                        return Err(Error::NotMinimal {
                            spot: -(t as i32) - 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};
    use crate::grading::{MonomialIdeal, Side};

    fn s(v: &[usize]) -> Subset {
        Subset::from_indices(v)
    }

    #[test]
    fn residue_field_resolution() {
        let f = Rationals;
        let k = EModule::residue_field(f, Multidegree::zero(2));
        let r = k.resolution_prefix(3).unwrap();
        // over E the residue field has beta_t = t + 1 in d = 2, all linear
        for t in 0..=3 {
            assert_eq!(r.betti.coarse(-t, t), t as usize + 1);
        }
        assert!(r.betti.is_linear(0));
        assert_eq!(k.betti_closed_form(3).unwrap(), r.betti);
    }

    #[test]
    fn closed_form_matches_resolution() {
        let f = PrimeField::new(32003).unwrap();
        let j = MonomialIdeal::new(Side::E, 3, [s(&[0, 1]), s(&[1, 2])]);
        let n = EModule::from_ideal(f, &j, true);
        let r = n.resolution_prefix(3).unwrap();
        assert_eq!(n.betti_closed_form(3).unwrap(), r.betti);
        let omega = n.nth_syzygy(2).unwrap();
        omega.check_relations().unwrap();
        assert_eq!(
            omega.betti_closed_form(2).unwrap(),
            omega.resolution_prefix(2).unwrap().betti
        );
    }

    #[test]
    fn free_module_has_trivial_resolution() {
        let f = Rationals;
        let e = EModule::free(f, 3, &[Multidegree::zero(3)]);
        let r = e.resolution_prefix(4).unwrap();
        assert_eq!(r.betti.iter().count(), 1);
        assert_eq!(e.betti_closed_form(4).unwrap(), r.betti);
    }
}
