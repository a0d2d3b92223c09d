use std::collections::BTreeMap;

use super::EComplex;
use crate::emod::EModule;
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::grading::{DegreeBox, Multidegree};
use crate::smod::{FreeComplexS, SqSModule};

/// `F(N)`: each basis vector of `N^i_b` becomes a free generator of degree
/// `-b` at spot `i + |b|`.
#[derive(Clone, Debug)]
pub struct BggImageF<F: Field> {
    pub complex: FreeComplexS<F>,
    /// For every spot (from the lowest), the source `(i, b, basis index)` of
    /// each generator.
    pub provenance: Vec<Vec<(i32, Multidegree, usize)>>,
}

/// The differential sends the generator of `v ∈ N^i_b` to
/// `Σ_k x_k ⊗ y_k v + (-1)^{|b|} ⊗ ∂v`; `d^2 = 0` is checked.
pub fn functor_f<F: Field>(n: &EComplex<F>) -> Result<BggImageF<F>> {
    let f = n.field();
    let d = n.nvars();
    let (lo, hi) = n.spot_range();
    let mut by_spot: BTreeMap<i32, Vec<(i32, Multidegree, usize)>> = BTreeMap::new();
    for i in lo..=hi {
        let m = n.module_at(i).expect("spot in range");
        for (b, &dim) in m.dims() {
            for v in 0..dim {
                by_spot.entry(i + b.total()).or_default().push((i, *b, v));
            }
        }
    }
    let Some((&qlo, _)) = by_spot.iter().next() else {
        return Ok(BggImageF {
            complex: FreeComplexS::zero(f, d),
            provenance: Vec::new(),
        });
    };
    let qhi = *by_spot.keys().last().expect("nonempty");
    for list in by_spot.values_mut() {
        list.sort();
    }
    let provenance: Vec<Vec<(i32, Multidegree, usize)>> =
        (qlo..=qhi).map(|q| by_spot.remove(&q).unwrap_or_default()).collect();
    let position: Vec<BTreeMap<(i32, Multidegree, usize), usize>> = provenance
        .iter()
        .map(|l| l.iter().enumerate().map(|(k, g)| (*g, k)).collect())
        .collect();
    let gens: Vec<Vec<Multidegree>> = provenance
        .iter()
        .map(|l| l.iter().map(|(_, b, _)| -*b).collect())
        .collect();
    let mut diffs = Vec::new();
    for k in 0..provenance.len().saturating_sub(1) {
        let mut m = Matrix::zeros(&f, provenance[k + 1].len(), provenance[k].len());
        for (col, &(i, b, v)) in provenance[k].iter().enumerate() {
            let module = n.module_at(i).expect("spot in range");
            for y in 0..d {
                let Some(act) = module.action_ref(y, &b) else { continue };
                let t = b.plus_unit(y);
                for w in 0..act.rows() {
                    let c = act.get(w, v);
                    if !f.is_zero(c) {
                        m.set(position[k + 1][&(i, t, w)], col, c.clone());
                    }
                }
            }
            if i < hi {
                let dm = n.diff_at(i, &b);
                let neg = b.total().rem_euclid(2) == 1;
                for w in 0..dm.rows() {
                    let c = dm.get(w, v);
                    if !f.is_zero(c) {
                        let c = if neg { f.neg(c) } else { c.clone() };
                        m.set(position[k + 1][&(i + 1, b, w)], col, c);
                    }
                }
            }
        }
        diffs.push(m);
    }
    let complex = FreeComplexS::new(f, d, qlo, gens, diffs)?;
    complex
        .check_d2()
        .map_err(|_| Error::DifferentialCheckFailed("image of F".into()))?;
    Ok(BggImageF {
        complex,
        provenance,
    })
}

pub fn functor_f_module<F: Field>(n: &EModule<F>) -> Result<BggImageF<F>> {
    functor_f(&EComplex::single(n.clone(), 0))
}

/// The cohomology modules of `F(N)` read on the degrees `{G - 1}`, each as
/// a squarefree module; `reg(H^p) = reg(realization) - d`.
#[derive(Clone, Debug)]
pub struct FCohomology<F: Field> {
    pub shift: Multidegree,
    pub spots: Vec<(i32, SqSModule<F>)>,
}

impl<F: Field> FCohomology<F> {
    /// `reg(H^p)` for every nonzero `H^p`.
    pub fn regs(&self) -> Vec<(i32, i32)> {
        let d = self.shift.total();
        self.spots
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(p, m)| (*p, m.reg().expect("nonzero module") - d))
            .collect()
    }
}

/// Requires the degrees of `N` to be squarefree, which makes every
/// `H^p(F(N))(-1)` squarefree.
pub fn cohomology_f<F: Field>(n: &EComplex<F>) -> Result<FCohomology<F>> {
    let d = n.nvars();
    if !n.degrees().iter().all(|a| a.is_squarefree()) {
        return Err(Error::NotSquarefree);
    }
    let img = functor_f(n)?;
    let one = Multidegree::ones(d);
    let window = DegreeBox::new(-one, Multidegree::zero(d));
    let mut spots = Vec::new();
    if let Some((lo, hi)) = img.complex.spot_range() {
        for p in lo..=hi {
            let pieces = img.complex.cohomology_pieces(p, window)?;
            spots.push((p, pieces.to_squarefree(one)));
        }
    }
    Ok(FCohomology { shift: one, spots })
}

/// Compares the linear strands of the minimized `F(N)` with
/// `F(H^l(N))` placed at spot `l`: generator data and cohomology dimensions
/// on the generator box.
pub fn strand_identity_check<F: Field>(n: &EComplex<F>) -> Result<bool> {
    let left_full = functor_f(n)?.complex.minimize();
    let (lo, hi) = n.spot_range();
    let mut ls: Vec<i32> = left_full
        .generator_table()
        .iter()
        .map(|(p, a, _)| p + a.total())
        .collect();
    ls.extend(lo..=hi);
    ls.sort_unstable();
    ls.dedup();
    for l in ls {
        let left = left_full.linear_strand(l)?;
        let h = n.cohomology(l);
        let right = if h.is_zero() {
            FreeComplexS::zero(n.field(), n.nvars())
        } else {
            functor_f(&EComplex::single(h, l))?.complex
        };
        if left.generator_table() != right.generator_table() {
            return Ok(false);
        }
        let Some(bx) = left.generator_box() else { continue };
        let (plo, phi) = left.spot_range().expect("nonzero complex");
        for c in bx.points() {
            for p in plo..=phi {
                if left.cohomology_dim_at(p, &c)? != right.cohomology_dim_at(p, &c)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bgg::EMorphism;
    use crate::exactla::{PrimeField, Rationals};
    use crate::grading::{binomial, MonomialIdeal, Side, Subset};

    #[test]
    fn residue_field_goes_to_s() {
        let f = Rationals;
        let k = EModule::residue_field(f, Multidegree::zero(3));
        let img = functor_f_module(&k).unwrap();
        assert_eq!(img.complex.spot_range(), Some((0, 0)));
        assert_eq!(img.complex.gens_at(0), &[Multidegree::zero(3)]);
    }

    #[test]
    fn shifted_residue_field() {
        // K(-1): one generator at spot d, degree -1; H^d is S(1)
        let f = Rationals;
        let d = 3;
        let k = EModule::residue_field(f, Multidegree::ones(d));
        let img = functor_f_module(&k).unwrap();
        assert_eq!(img.complex.spot_range(), Some((3, 3)));
        for j in 0..4 {
            let c = Multidegree::from_slice(&[j - 1, -1, -1]);
            assert_eq!(img.complex.cohomology_dim_at(3, &c).unwrap(), 1);
        }
    }

    #[test]
    fn exterior_algebra_betti() {
        let f = Rationals;
        for d in 1..=4 {
            let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, d), true);
            let img = functor_f_module(&e).unwrap();
            assert!(img.complex.is_minimal());
            let t = img.complex.betti();
            for (i, a, _) in t.iter() {
                assert_eq!(i + a.total(), 0);
            }
            for i in 0..=d as i32 {
                assert_eq!(t.coarse(i, -i) as u64, binomial(d as u64, i as u64));
            }
        }
    }

    #[test]
    fn euler_characteristic_matches() {
        let f = PrimeField::new(32003).unwrap();
        let s = |v: &[usize]| Subset::from_indices(v);
        let j = MonomialIdeal::new(Side::E, 4, [s(&[0, 1]), s(&[1, 2, 3]), s(&[0, 3])]);
        let n = EModule::from_ideal(f, &j, true);
        let img = functor_f_module(&n).unwrap();
        let (lo, hi) = img.complex.spot_range().unwrap();
        let bx = img.complex.generator_box().unwrap();
        for c in bx.points() {
            let mut chi = 0i64;
            for p in lo..=hi {
                let h = img.complex.cohomology_dim_at(p, &c).unwrap() as i64;
                chi += if p % 2 == 0 { h } else { -h };
            }
            assert_eq!(chi, img.complex.euler_characteristic(&c));
        }
    }

    #[test]
    fn cohomology_of_k_and_e() {
        let f = Rationals;
        let d = 3;
        let k = EModule::residue_field(f, Multidegree::zero(d));
        let h = cohomology_f(&EComplex::single(k, 0)).unwrap();
        let nz: Vec<_> = h.spots.iter().filter(|(_, m)| !m.is_zero()).collect();
        assert_eq!(nz.len(), 1);
        assert_eq!(nz[0].0, 0);
        // S(-1) after the shift: rank one, generated at the full set
        let m = &nz[0].1;
        for g in Subset::all(d) {
            assert_eq!(m.dim(g), usize::from(g == Subset::full(d)));
        }
        let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, d), true);
        let h = cohomology_f(&EComplex::single(e, 0)).unwrap();
        assert_eq!(h.regs(), vec![(3, -3)]);
    }

    #[test]
    fn strand_identity_examples() {
        let f = Rationals;
        let s = |v: &[usize]| Subset::from_indices(v);
        let j = MonomialIdeal::new(Side::E, 3, [s(&[0, 1]), s(&[2])]);
        let n = EModule::from_ideal(f, &j, true);
        assert!(strand_identity_check(&EComplex::single(n, 0)).unwrap());
        assert!(strand_identity_check(&crate::bgg::tests::y1_complex()).unwrap());
        // E(-e_1 - e_2) -> E/(y_3), generator to y_1 y_2
        let d = 3;
        let q = EModule::from_ideal(f, &MonomialIdeal::new(Side::E, d, [s(&[2])]), true);
        let g = s(&[0, 1]).to_degree(d);
        let img = q.act_monomial(s(&[0, 1]), &Multidegree::zero(d), &[f.one()]);
        let (src, map) = EMorphism::from_free(&[g], &[img], &q);
        let c = EComplex::two_term(src, q, map, 0).unwrap();
        assert!(strand_identity_check(&c).unwrap());
    }
}
