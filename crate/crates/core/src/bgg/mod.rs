//! The functors between complexes of `E`-modules and complexes of
//! `S`-modules, their cohomology, linear strands, and regularity of
//! complexes.

mod functor_f;
mod functor_g;

use std::collections::{BTreeMap, BTreeSet};

use crate::emod::{EModule, Spaces};
use crate::error::{Error, Result};
use crate::exactla::{greedy_extend, kernel_basis, left_inverse, Field, Matrix};
use crate::grading::Multidegree;

pub use functor_f::{
    cohomology_f, functor_f, functor_f_module, strand_identity_check, BggImageF, FCohomology,
};
pub use functor_g::{
    betti_of_complex_via_g, functor_g, reg_of_complex, reg_of_complex_on, reg_of_dual,
    reg_of_dual_reflection, BggImageG, SpotShift, TruncatedAbove,
};

/// A degree-preserving map of `E`-modules: one matrix per source degree.
#[derive(Clone, Debug)]
pub struct EMorphism<F: Field> {
    pub mats: BTreeMap<Multidegree, Matrix<F::Elem>>,
}

impl<F: Field> EMorphism<F> {
    pub fn zero() -> Self {
        Self {
            mats: BTreeMap::new(),
        }
    }

    /// Matrix on the degree-`a` component (zero when none is stored).
    pub fn at(&self, f: &F, a: &Multidegree, src: &EModule<F>, tgt: &EModule<F>) -> Matrix<F::Elem> {
        match self.mats.get(a) {
            Some(m) => m.clone(),
            None => Matrix::zeros(f, tgt.dim_at(a), src.dim_at(a)),
        }
    }

    /// The map out of `⊕ E(-g_k)` sending generator `k` to `images[k]`,
    /// an element of `tgt` in degree `g_k`.
    pub fn from_free(
        free_gens: &[Multidegree],
        images: &[Vec<F::Elem>],
        tgt: &EModule<F>,
    ) -> (EModule<F>, Self) {
        let f = tgt.field();
        let d = tgt.nvars();
        let src = EModule::free(f, d, free_gens);
        let index = crate::emod::free_basis_index(d, free_gens);
        let mut mats = BTreeMap::new();
        for (a, list) in &index {
            let n = tgt.dim_at(a);
            if n == 0 {
                continue;
            }
            let cols: Vec<Vec<F::Elem>> = list
                .iter()
                .map(|&(g, s)| tgt.act_monomial(s, &free_gens[g], &images[g]))
                .collect();
            let m = Matrix::from_columns(&f, n, &cols);
            if !m.is_zero(&f) {
                mats.insert(*a, m);
            }
        }
        (src, Self { mats })
    }
}

/// A bounded cochain complex of `E`-modules with degree-preserving
/// differentials; spot `lo + k` holds `modules[k]`.
#[derive(Clone, Debug)]
pub struct EComplex<F: Field> {
    f: F,
    d: usize,
    lo: i32,
    modules: Vec<EModule<F>>,
    /// `maps[k]: modules[k] -> modules[k + 1]`.
    maps: Vec<EMorphism<F>>,
}

impl<F: Field> EComplex<F> {
    /// Validates `E`-linearity and `d^2 = 0`.
    pub fn new(lo: i32, modules: Vec<EModule<F>>, maps: Vec<EMorphism<F>>) -> Result<Self> {
        let first = modules
            .first()
            .ok_or_else(|| Error::InvalidInput("a complex needs at least one module".into()))?;
        if maps.len() + 1 != modules.len() {
            return Err(Error::InvalidInput(
                "a complex needs one map between consecutive modules".into(),
            ));
        }
        let c = Self {
            f: first.field(),
            d: first.nvars(),
            lo,
            modules,
            maps,
        };
        c.check()?;
        Ok(c)
    }

    pub fn single(m: EModule<F>, spot: i32) -> Self {
        Self {
            f: m.field(),
            d: m.nvars(),
            lo: spot,
            modules: vec![m],
            maps: Vec::new(),
        }
    }

    pub fn two_term(src: EModule<F>, tgt: EModule<F>, map: EMorphism<F>, lo: i32) -> Result<Self> {
        Self::new(lo, vec![src, tgt], vec![map])
    }

    pub fn field(&self) -> F {
        self.f
    }

    pub fn nvars(&self) -> usize {
        self.d
    }

    pub fn spot_range(&self) -> (i32, i32) {
        (self.lo, self.lo + self.modules.len() as i32 - 1)
    }

    pub fn module_at(&self, p: i32) -> Option<&EModule<F>> {
        let k = p - self.lo;
        if k < 0 {
            None
        } else {
            self.modules.get(k as usize)
        }
    }

    /// Matrix of `d^p` on degree `a`.
    pub fn diff_at(&self, p: i32, a: &Multidegree) -> Matrix<F::Elem> {
        let src = self.module_at(p).map_or(0, |m| m.dim_at(a));
        let tgt = self.module_at(p + 1).map_or(0, |m| m.dim_at(a));
        let k = p - self.lo;
        if k < 0 || k as usize >= self.maps.len() {
            return Matrix::zeros(&self.f, tgt, src);
        }
        match self.maps[k as usize].mats.get(a) {
            Some(m) => m.clone(),
            None => Matrix::zeros(&self.f, tgt, src),
        }
    }

    /// Every degree where some module is nonzero.
    pub fn degrees(&self) -> BTreeSet<Multidegree> {
        self.modules.iter().flat_map(|m| m.degrees()).collect()
    }

    /// Each map commutes with every `y_i`, and consecutive maps compose to zero.
    pub fn check(&self) -> Result<()> {
        let f = &self.f;
        for m in &self.modules {
            m.check_relations()?;
        }
        for (k, map) in self.maps.iter().enumerate() {
            let (src, tgt) = (&self.modules[k], &self.modules[k + 1]);
            let p = self.lo + k as i32;
            for (a, m) in &map.mats {
                if m.rows() != tgt.dim_at(a) || m.cols() != src.dim_at(a) {
                    return Err(Error::InvalidInput(format!(
                        "map at spot {p} has the wrong shape in degree {a}"
                    )));
                }
            }
            for a in src.degrees() {
                for i in 0..self.d {
                    let t = a.plus_unit(i);
                    let lhs = map.at(f, &t, src, tgt).mul(f, &src.action(i, &a));
                    let rhs = tgt.action(i, &a).mul(f, &map.at(f, &a, src, tgt));
                    if lhs != rhs {
                        return Err(Error::DifferentialCheckFailed(format!(
                            "map at spot {p} does not commute with y_{} in degree {a}",
                            i + 1
                        )));
                    }
                }
            }
        }
        for k in 1..self.maps.len() {
            let p = self.lo + k as i32 - 1;
            for a in self.modules[k - 1].degrees() {
                let c = self.diff_at(p + 1, &a).mul(f, &self.diff_at(p, &a));
                if !c.is_zero(f) {
                    return Err(Error::DifferentialCheckFailed(format!(
                        "E-complex at spot {p}, degree {a}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn cohomology_dim(&self, p: i32, a: &Multidegree) -> Result<usize> {
        crate::exactla::cohomology_dim(&self.f, &self.diff_at(p - 1, a), &self.diff_at(p, a))
    }

    /// `H^p` as an `E`-module.
    pub fn cohomology(&self, p: i32) -> EModule<F> {
        let f = self.f;
        let Some(m) = self.module_at(p) else {
            return EModule::zero(f, self.d);
        };
        let mut ker: Spaces<F::Elem> = BTreeMap::new();
        for a in m.degrees() {
            let out = self.diff_at(p, &a);
            let n = m.dim_at(&a);
            let k = if out.rows() == 0 {
                identity_columns(&f, n)
            } else {
                kernel_basis(&f, &out)
            };
            if !k.is_empty() {
                ker.insert(a, k);
            }
        }
        let z = m.submodule(&ker);
        let mut bnd: Spaces<F::Elem> = BTreeMap::new();
        for (a, cols) in &ker {
            let inc = self.diff_at(p - 1, a);
            if inc.cols() == 0 {
                continue;
            }
            let li = left_inverse(&f, &Matrix::from_columns(&f, m.dim_at(a), cols));
            let imgs: Vec<Vec<F::Elem>> = (0..inc.cols()).map(|c| li.apply(&f, &inc.column(c))).collect();
            let picked = greedy_extend(&f, cols.len(), &[], &imgs);
            if !picked.is_empty() {
                bnd.insert(*a, picked.into_iter().map(|c| imgs[c].clone()).collect());
            }
        }
        z.module.quotient(&bnd)
    }

    /// `D(C)`: spot `p` becomes spot `-p`, each module is dualized and each
    /// map transposed.
    pub fn dual(&self) -> Self {
        let one = Multidegree::ones(self.d);
        let (_, hi) = self.spot_range();
        let modules: Vec<EModule<F>> = self.modules.iter().rev().map(|m| m.dual()).collect();
        let maps = self
            .maps
            .iter()
            .rev()
            .map(|m| EMorphism {
                mats: m.mats.iter().map(|(a, x)| (one - *a, x.transpose())).collect(),
            })
            .collect();
        Self {
            f: self.f,
            d: self.d,
            lo: -hi,
            modules,
            maps,
        }
    }

    /// `C[p]`: spot `i` becomes `i - p`, differentials change sign for odd `p`.
    pub fn shift(&self, p: i32) -> Self {
        let mut out = self.clone();
        out.lo -= p;
        if p % 2 != 0 {
            let m1 = self.f.from_i64(-1);
            for m in out.maps.iter_mut() {
                for x in m.mats.values_mut() {
                    *x = x.scale(&self.f, &m1);
                }
            }
        }
        out
    }
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::grading::{MonomialIdeal, Side, Subset};

    /// `E(-e_1) -> E`, generator to `y_1`.
    pub(crate) fn y1_complex() -> EComplex<Rationals> {
        let f = Rationals;
        let d = 3;
        let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, d), true);
        let y1 = Subset::from_indices(&[0]).to_degree(d);
        let (src, map) = EMorphism::from_free(&[y1], &[vec![f.one()]], &e);
        EComplex::two_term(src, e, map, -1).unwrap()
    }

    #[test]
    fn cohomology_of_y1_map() {
        let c = y1_complex();
        // kernel of multiplication by y_1 on E(-e_1) is y_1 E(-e_1) ≅ (E/y1)(-2e1); cokernel E/(y_1)
        let h0 = c.cohomology(0);
        assert_eq!(h0.total_dim(), 4);
        let hm1 = c.cohomology(-1);
        assert_eq!(hm1.total_dim(), 4);
        h0.check_relations().unwrap();
        hm1.check_relations().unwrap();
        let dc = c.dual();
        dc.check().unwrap();
        assert_eq!(dc.cohomology(1).total_dim(), 4);
    }

    #[test]
    fn non_linear_map_rejected() {
        let f = Rationals;
        let d = 2;
        let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, d), true);
        // identity on degree 0 only is not E-linear
        let mut mats = BTreeMap::new();
        mats.insert(Multidegree::zero(d), Matrix::identity(&f, 1));
        let r = EComplex::two_term(e.clone(), e, EMorphism { mats }, 0);
        assert!(matches!(r, Err(Error::DifferentialCheckFailed(_))));
    }
}
