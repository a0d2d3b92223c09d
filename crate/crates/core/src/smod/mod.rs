//! Squarefree modules over `S = K[x1..xd]`, free complexes, Koszul-complex
//! Tor, resolutions, Ext against the dualizing complex, local cohomology data
//! and truncations.

mod ext;
mod free;
mod koszul;
mod resolution;
mod sqcomplex;
mod truncate;
mod wk;

use crate::emod::EModule;
use crate::error::{Error, Result};
use crate::exactla::{greedy_extend, left_inverse, standard_complement, Field, Matrix};
use crate::grading::{alpha_is_negative, MonomialIdeal, Multidegree, Side, Subset};

pub use ext::{DepthDim, LocalCohomology};
pub use free::FreeComplexS;
pub use koszul::{betti_via_koszul, GradedComplex, Pieces};
pub use resolution::SqResolution;
pub use sqcomplex::{SqComplex, SqMorphism};
pub use truncate::Truncation;
pub use wk::WeaklyKoszulCertificate;

/// A squarefree `S`-module: components `M_F` for `F ⊆ [d]` and transition
/// maps `x_i: M_F -> M_{F ∪ i}` for `i ∉ F`. Every other degree is read
/// through `M_a = M_{supp a}` for `a ∈ N^d`, and is zero off `N^d`.
#[derive(Clone, Debug)]
pub struct SqSModule<F: Field> {
    f: F,
    d: usize,
    dims: Vec<usize>,
    /// `maps[F * d + i]`, only for `i ∉ F`; `None` means zero.
    maps: Vec<Option<Matrix<F::Elem>>>,
}

/// Per-subset subspaces (column vectors) of a squarefree module.
pub type SqSpaces<E> = Vec<Vec<Vec<E>>>;

impl<F: Field> SqSModule<F> {
    pub fn zero(f: F, d: usize) -> Self {
        Self {
            f,
            d,
            dims: vec![0; 1 << d],
            maps: vec![None; (1 << d) * d],
        }
    }

    pub fn field(&self) -> F {
        self.f
    }

    pub fn nvars(&self) -> usize {
        self.d
    }

    pub fn dim(&self, set: Subset) -> usize {
        self.dims[set.index()]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&n| n == 0)
    }

    pub fn set_dim(&mut self, set: Subset, n: usize) {
        self.dims[set.index()] = n;
    }

    pub fn set_map(&mut self, i: usize, set: Subset, m: Matrix<F::Elem>) {
        debug_assert!(!set.contains(i));
        debug_assert_eq!(m.cols(), self.dim(set));
        debug_assert_eq!(m.rows(), self.dim(set.with(i)));
        let k = set.index() * self.d + i;
        self.maps[k] = if m.rows() == 0 || m.cols() == 0 || m.is_zero(&self.f) {
            None
        } else {
            Some(m)
        };
    }

    /// Transition `x_i: M_F -> M_{F ∪ i}` for `i ∉ F`.
    pub fn map(&self, i: usize, set: Subset) -> Matrix<F::Elem> {
        match &self.maps[set.index() * self.d + i] {
            Some(m) => m.clone(),
            None => Matrix::zeros(&self.f, self.dim(set.with(i)), self.dim(set)),
        }
    }

    pub fn apply_map(&self, i: usize, set: Subset, v: &[F::Elem]) -> Vec<F::Elem> {
        match &self.maps[set.index() * self.d + i] {
            Some(m) => m.apply(&self.f, v),
            None => vec![self.f.zero(); self.dim(set.with(i))],
        }
    }

    /// Multiplication by `x^{target ∖ source}`, applying variables in increasing order.
    pub fn transport(&self, source: Subset, target: Subset, v: &[F::Elem]) -> Vec<F::Elem> {
        debug_assert!(source.is_subset_of(target));
        let mut cur = v.to_vec();
        let mut set = source;
        for i in target.minus(source).iter() {
            cur = self.apply_map(i, set, &cur);
            set = set.with(i);
        }
        cur
    }

    /// `dim M_a` for any `a ∈ Z^d`.
    pub fn eval_dim(&self, a: &Multidegree) -> usize {
        if !a.is_nonnegative() {
            return 0;
        }
        self.dim(a.support())
    }

    /// `x_i: M_a -> M_{a+e_i}` for any `a ∈ Z^d`.
    pub fn eval_mult(&self, i: usize, a: &Multidegree) -> Matrix<F::Elem> {
        let b = a.plus_unit(i);
        if !a.is_nonnegative() {
            return Matrix::zeros(&self.f, self.eval_dim(&b), 0);
        }
        if a.get(i) >= 1 {
            Matrix::identity(&self.f, self.dim(a.support()))
        } else {
            self.map(i, a.support())
        }
    }

    /// `x_j x_i = x_i x_j` on every component.
    pub fn check_commuting(&self) -> Result<()> {
        let f = &self.f;
        for set in Subset::all(self.d) {
            for i in (0..self.d).filter(|&i| !set.contains(i)) {
                for j in (i + 1..self.d).filter(|&j| !set.contains(j)) {
                    let a = self.map(j, set.with(i)).mul(f, &self.map(i, set));
                    let b = self.map(i, set.with(j)).mul(f, &self.map(j, set));
                    if a != b {
                        return Err(Error::InvalidInput(format!(
                            "x_{} and x_{} do not commute on {:?}",
                            i + 1,
                            j + 1,
                            set
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `S/I` (quotient) or `I` itself.
    pub fn from_ideal(f: F, ideal: &MonomialIdeal, as_quotient: bool) -> Self {
        assert_eq!(ideal.side, Side::S, "expected a polynomial-side ideal");
        let d = ideal.d;
        let keep = |s: Subset| ideal.contains(s) != as_quotient;
        let mut m = Self::zero(f, d);
        for s in Subset::all(d).filter(|&s| keep(s)) {
            m.set_dim(s, 1);
        }
        for s in Subset::all(d).filter(|&s| keep(s)) {
            for i in (0..d).filter(|&i| !s.contains(i) && keep(s.with(i))) {
                m.set_map(i, s, Matrix::identity(&f, 1));
            }
        }
        m
    }

    /// `K` in degree 0.
    pub fn residue_field(f: F, d: usize) -> Self {
        let mut m = Self::zero(f, d);
        m.set_dim(Subset::EMPTY, 1);
        m
    }

    /// `⊕ S(-G)` over the given squarefree generator degrees. The basis of
    /// `M_F` is the generators with `G ⊆ F`, in list order.
    pub fn free(f: F, d: usize, gens: &[Subset]) -> Self {
        let mut m = Self::zero(f, d);
        for s in Subset::all(d) {
            m.set_dim(s, gens.iter().filter(|g| g.is_subset_of(s)).count());
        }
        for s in Subset::all(d) {
            let src: Vec<usize> = (0..gens.len()).filter(|&g| gens[g].is_subset_of(s)).collect();
            for i in (0..d).filter(|&i| !s.contains(i)) {
                let t = s.with(i);
                let tgt: Vec<usize> =
                    (0..gens.len()).filter(|&g| gens[g].is_subset_of(t)).collect();
                let mut mat = Matrix::zeros(&f, tgt.len(), src.len());
                for (c, g) in src.iter().enumerate() {
                    let r = tgt.binary_search(g).expect("generator persists upward");
                    mat.set(r, c, f.one());
                }
                m.set_map(i, s, mat);
            }
        }
        m
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let f = self.f;
        let mut m = Self::zero(f, self.d);
        for s in Subset::all(self.d) {
            m.set_dim(s, self.dim(s) + other.dim(s));
        }
        for s in Subset::all(self.d) {
            for i in (0..self.d).filter(|&i| !s.contains(i)) {
                let t = s.with(i);
                let mut mat = Matrix::zeros(&f, m.dim(t), m.dim(s));
                let a = self.map(i, s);
                let b = other.map(i, s);
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        mat.set(r, c, a.get(r, c).clone());
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        mat.set(a.rows() + r, a.cols() + c, b.get(r, c).clone());
                    }
                }
                m.set_map(i, s, mat);
            }
        }
        m
    }

    /// Identical component dimensions and transition matrices.
    pub fn same_data(&self, other: &Self) -> bool {
        self.d == other.d && self.dims == other.dims && {
            let z = |m: &Option<Matrix<F::Elem>>| m.is_none();
            self.maps.iter().zip(&other.maps).all(|(a, b)| match (a, b) {
                (Some(x), Some(y)) => x == y,
                _ => z(a) && z(b),
            })
        }
    }

    /// Restriction to subspaces closed under the transitions.
    pub fn submodule(&self, spaces: &SqSpaces<F::Elem>) -> Self {
        let f = self.f;
        let mut m = Self::zero(f, self.d);
        let mut inv: Vec<Option<Matrix<F::Elem>>> = vec![None; 1 << self.d];
        for s in Subset::all(self.d) {
            let vs = &spaces[s.index()];
            m.set_dim(s, vs.len());
            if !vs.is_empty() {
                inv[s.index()] =
                    Some(left_inverse(&f, &Matrix::from_columns(&f, self.dim(s), vs)));
            }
        }
        for s in Subset::all(self.d) {
            for i in (0..self.d).filter(|&i| !s.contains(i)) {
                let t = s.with(i);
                let Some(li) = &inv[t.index()] else { continue };
                let cols: Vec<Vec<F::Elem>> = spaces[s.index()]
                    .iter()
                    .map(|v| li.apply(&f, &self.apply_map(i, s, v)))
                    .collect();
                m.set_map(i, s, Matrix::from_columns(&f, m.dim(t), &cols));
            }
        }
        m
    }

    /// Smallest transition-closed subspaces containing the seeds.
    pub fn span_closure(&self, seeds: &SqSpaces<F::Elem>) -> SqSpaces<F::Elem> {
        let f = &self.f;
        let mut out: SqSpaces<F::Elem> = vec![Vec::new(); 1 << self.d];
        let mut order: Vec<Subset> = Subset::all(self.d).collect();
        order.sort_by_key(|s| (s.len(), s.0));
        for s in order {
            let mut cands: Vec<Vec<F::Elem>> = Vec::new();
            for i in s.iter() {
                let src = s.without(i);
                for v in &out[src.index()] {
                    cands.push(self.apply_map(i, src, v));
                }
            }
            cands.extend(seeds[s.index()].iter().cloned());
            let picked = greedy_extend(f, self.dim(s), &[], &cands);
            out[s.index()] = picked.into_iter().map(|k| cands[k].clone()).collect();
        }
        out
    }

    /// Quotient by transition-closed subspaces, with standard-vector complements.
    pub fn quotient(&self, spaces: &SqSpaces<F::Elem>) -> Self {
        let f = self.f;
        let mut m = Self::zero(f, self.d);
        let mut data: Vec<Option<(usize, Vec<usize>, Matrix<F::Elem>)>> = vec![None; 1 << self.d];
        for s in Subset::all(self.d) {
            let n = self.dim(s);
            let sub = &spaces[s.index()];
            let comp = standard_complement(&f, n, sub);
            m.set_dim(s, comp.len());
            if comp.is_empty() {
                continue;
            }
            let mut cols = sub.clone();
            for &k in &comp {
                let mut e = vec![f.zero(); n];
                e[k] = f.one();
                cols.push(e);
            }
            let li = left_inverse(&f, &Matrix::from_columns(&f, n, &cols));
            data[s.index()] = Some((sub.len(), comp, li));
        }
        for s in Subset::all(self.d) {
            let Some((_, comp, _)) = &data[s.index()] else { continue };
            for i in (0..self.d).filter(|&i| !s.contains(i)) {
                let t = s.with(i);
                let Some((ts, tcomp, tli)) = &data[t.index()] else { continue };
                let x = self.map(i, s);
                let mut mat = Matrix::zeros(&f, tcomp.len(), comp.len());
                for (c, &k) in comp.iter().enumerate() {
                    let coords = tli.apply(&f, &x.column(k));
                    for r in 0..tcomp.len() {
                        mat.set(r, c, coords[ts + r].clone());
                    }
                }
                m.set_map(i, s, mat);
            }
        }
        m
    }

    /// `Σ_i x_i M_{F ∖ i}` inside each `M_F`.
    pub fn max_ideal_image(&self) -> SqSpaces<F::Elem> {
        let f = &self.f;
        Subset::all(self.d)
            .map(|s| {
                let mut cands = Vec::new();
                for i in s.iter() {
                    let src = s.without(i);
                    let x = self.map(i, src);
                    for c in 0..x.cols() {
                        cands.push(x.column(c));
                    }
                }
                let p = greedy_extend(f, self.dim(s), &[], &cands);
                p.into_iter().map(|k| cands[k].clone()).collect()
            })
            .collect()
    }

    /// Minimal generators: standard basis vectors completing the image of
    /// the maximal ideal, subset by subset in bitmask order.
    pub fn minimal_generators(&self) -> Vec<(Subset, Vec<F::Elem>)> {
        let f = &self.f;
        let img = self.max_ideal_image();
        let mut out = Vec::new();
        for s in Subset::all(self.d) {
            let n = self.dim(s);
            for k in standard_complement(f, n, &img[s.index()]) {
                let mut e = vec![f.zero(); n];
                e[k] = f.one();
                out.push((s, e));
            }
        }
        out
    }

    /// `S(N)`: the same components, with `x_i = (-1)^{alpha(i,F)} y_i`.
    pub fn from_emodule(n: &EModule<F>) -> Result<Self> {
        if !n.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let d = n.nvars();
        let f = n.field();
        let mut m = Self::zero(f, d);
        for s in Subset::all(d) {
            m.set_dim(s, n.dim_at(&s.to_degree(d)));
        }
        for s in Subset::all(d) {
            for i in (0..d).filter(|&i| !s.contains(i)) {
                let y = n.action(i, &s.to_degree(d));
                let x = if alpha_is_negative(i, s) {
                    y.scale(&f, &f.from_i64(-1))
                } else {
                    y
                };
                m.set_map(i, s, x);
            }
        }
        Ok(m)
    }

    /// `E(M)`: the inverse of [`SqSModule::from_emodule`].
    pub fn to_emodule(&self) -> EModule<F> {
        let f = self.f;
        let d = self.d;
        let mut n = EModule::zero(f, d);
        for s in Subset::all(d) {
            n.set_dim(s.to_degree(d), self.dim(s));
        }
        for s in Subset::all(d) {
            for i in (0..d).filter(|&i| !s.contains(i)) {
                let x = self.map(i, s);
                let y = if alpha_is_negative(i, s) {
                    x.scale(&f, &f.from_i64(-1))
                } else {
                    x
                };
                n.set_action(i, s.to_degree(d), y);
            }
        }
        n
    }

    /// Alexander duality `S ∘ D_E ∘ E`.
    pub fn alexander_dual(&self) -> Self {
        Self::from_emodule(&self.to_emodule().dual()).expect("dual of squarefree is squarefree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;

    fn s(v: &[usize]) -> Subset {
        Subset::from_indices(v)
    }

    #[test]
    fn functor_examples() {
        let f = Rationals;
        let k = EModule::from_ideal(f, &MonomialIdeal::maximal(Side::E, 3), true);
        let sk = SqSModule::from_emodule(&k).unwrap();
        assert!(sk.same_data(&SqSModule::residue_field(f, 3)));
        let j = MonomialIdeal::new(Side::E, 3, [s(&[0, 1])]);
        let q = SqSModule::from_emodule(&EModule::from_ideal(f, &j, true)).unwrap();
        let i = MonomialIdeal::new(Side::S, 3, [s(&[0, 1])]);
        assert!(q.same_data(&SqSModule::from_ideal(f, &i, true)));
        q.check_commuting().unwrap();
        let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, 3), true);
        let se = SqSModule::from_emodule(&e).unwrap();
        assert!(se.same_data(&SqSModule::free(f, 3, &[Subset::EMPTY])));
        assert!(SqSModule::from_emodule(&se.to_emodule()).unwrap().same_data(&se));
    }

    #[test]
    fn alexander_examples() {
        let f = Rationals;
        let k = SqSModule::residue_field(f, 3);
        let ak = k.alexander_dual();
        // the dual of the point is the free module generated in degree [d]
        assert!(ak.same_data(&SqSModule::free(f, 3, &[Subset::full(3)])));
        let i = MonomialIdeal::new(Side::S, 3, [s(&[0, 1])]);
        let m = SqSModule::from_ideal(f, &i, true);
        let am = m.alexander_dual();
        for set in Subset::all(3) {
            assert_eq!(am.dim(set), m.dim(set.complement(3)));
        }
        assert!(am.alexander_dual().same_data(&m));
    }

    #[test]
    fn evaluation() {
        let f = Rationals;
        let m = SqSModule::from_ideal(f, &MonomialIdeal::new(Side::S, 2, [s(&[0, 1])]), true);
        assert_eq!(m.eval_dim(&Multidegree::from_slice(&[3, 0])), 1);
        assert_eq!(m.eval_dim(&Multidegree::from_slice(&[3, 1])), 0);
        assert_eq!(m.eval_dim(&Multidegree::from_slice(&[-1, 0])), 0);
        let x = m.eval_mult(0, &Multidegree::from_slice(&[1, 0]));
        assert_eq!(x, Matrix::identity(&f, 1));
    }

    #[test]
    fn generators_and_quotients() {
        let f = Rationals;
        let free = SqSModule::free(f, 2, &[Subset::EMPTY, s(&[0])]);
        free.check_commuting().unwrap();
        assert_eq!(free.minimal_generators().len(), 2);
        let img = free.max_ideal_image();
        let q = free.quotient(&img);
        assert_eq!(q.total_dim(), 2);
        let k = SqSModule::residue_field(f, 2);
        assert_eq!(k.minimal_generators().len(), 1);
    }
}
