//! Finite-dimensional `Z^d`-graded modules over the exterior algebra.
//!
//! A module stores an ordered basis size for every degree in its support and
//! one matrix per variable and source degree for the action of `y_i`.
//! Products use the basis `y_F`, `F` increasing, with
//! `y_i * y_F = (-1)^{alpha(i,F)} y_{F ∪ i}`.

mod resolve;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::{greedy_extend, left_inverse, standard_complement, Field, Matrix};
use crate::grading::{alpha_is_negative, MonomialIdeal, Multidegree, Side, Subset};

pub use resolve::{EResolutionPrefix, Syzygy};

/// A graded vector space with an anticommuting nilpotent action of `y_1..y_d`.
#[derive(Clone, Debug)]
pub struct EModule<F: Field> {
    f: F,
    d: usize,
    dims: BTreeMap<Multidegree, usize>,
    /// `(source degree, i)` maps to the matrix of `y_i: N_a -> N_{a+e_i}`; missing means zero.
    action: BTreeMap<(Multidegree, usize), Matrix<F::Elem>>,
}

/// Per-degree subspaces of a module, each given by column vectors.
pub type Spaces<E> = BTreeMap<Multidegree, Vec<Vec<E>>>;

/// A submodule together with its embedding (basis vectors per degree).
#[derive(Clone, Debug)]
pub struct SubModule<F: Field> {
    pub module: EModule<F>,
    pub basis: Spaces<F::Elem>,
}

impl<F: Field> EModule<F> {
    pub fn zero(f: F, d: usize) -> Self {
        Self {
            f,
            d,
            dims: BTreeMap::new(),
            action: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> F {
        self.f
    }

    pub fn nvars(&self) -> usize {
        self.d
    }

    pub fn dim_at(&self, a: &Multidegree) -> usize {
        self.dims.get(a).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Degrees with nonzero components, in increasing order.
    pub fn degrees(&self) -> impl Iterator<Item = Multidegree> + '_ {
        self.dims.keys().copied()
    }

    pub fn dims(&self) -> &BTreeMap<Multidegree, usize> {
        &self.dims
    }

    pub fn set_dim(&mut self, a: Multidegree, n: usize) {
        if n == 0 {
            self.dims.remove(&a);
        } else {
            self.dims.insert(a, n);
        }
    }

    /// Sets the matrix of `y_i` on `N_a`. Zero matrices are not stored.
    pub fn set_action(&mut self, i: usize, a: Multidegree, m: Matrix<F::Elem>) {
        debug_assert_eq!(m.cols(), self.dim_at(&a));
        debug_assert_eq!(m.rows(), self.dim_at(&a.plus_unit(i)));
        if m.rows() == 0 || m.cols() == 0 || m.is_zero(&self.f) {
            self.action.remove(&(a, i));
        } else {
            self.action.insert((a, i), m);
        }
    }

    /// Matrix of `y_i` on `N_a` (a zero matrix if none is stored).
    pub fn action(&self, i: usize, a: &Multidegree) -> Matrix<F::Elem> {
        match self.action.get(&(*a, i)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(&self.f, self.dim_at(&a.plus_unit(i)), self.dim_at(a)),
        }
    }

    pub fn action_ref(&self, i: usize, a: &Multidegree) -> Option<&Matrix<F::Elem>> {
        self.action.get(&(*a, i))
    }

    /// `y_i v` for `v` in `N_a`.
    pub fn act(&self, i: usize, a: &Multidegree, v: &[F::Elem]) -> Vec<F::Elem> {
        match self.action.get(&(*a, i)) {
            Some(m) => m.apply(&self.f, v),
            None => vec![self.f.zero(); self.dim_at(&a.plus_unit(i))],
        }
    }

    /// `y_G v = y_{g1}(y_{g2}(... y_{gk} v))` for `v` in `N_a`.
    pub fn act_monomial(&self, set: Subset, a: &Multidegree, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut cur = v.to_vec();
        let mut deg = *a;
        let idx: Vec<usize> = set.iter().collect();
        for &g in idx.iter().rev() {
            cur = self.act(g, &deg, &cur);
            deg = deg.plus_unit(g);
        }
        cur
    }

    /// Checks `y_i^2 = 0` and `y_i y_j + y_j y_i = 0` on every component.
    pub fn check_relations(&self) -> Result<()> {
        let f = &self.f;
        for a in self.degrees() {
            for i in 0..self.d {
                let yi = self.action(i, &a);
                let ai = a.plus_unit(i);
                let sq = self.action(i, &ai).mul(f, &yi);
                if !sq.is_zero(f) {
                    return Err(Error::InvalidInput(format!(
                        "y_{}^2 != 0 at degree {a}",
                        i + 1
                    )));
                }
                for j in i + 1..self.d {
                    let yj = self.action(j, &a);
                    let aj = a.plus_unit(j);
                    let s = self
                        .action(j, &ai)
                        .mul(f, &yi)
                        .add(f, &self.action(i, &aj).mul(f, &yj));
                    if !s.is_zero(f) {
                        return Err(Error::InvalidInput(format!(
                            "y_{} y_{} + y_{} y_{} != 0 at degree {a}",
                            j + 1,
                            i + 1,
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_squarefree(&self) -> bool {
        self.degrees().all(|a| a.is_squarefree())
    }

    /// `E/J` (quotient) or `J` (ideal) for a monomial ideal `J` of `E`.
    pub fn from_ideal(f: F, ideal: &MonomialIdeal, as_quotient: bool) -> Self {
        assert_eq!(ideal.side, Side::E, "expected an exterior-side ideal");
        let d = ideal.d;
        let keep = |s: Subset| ideal.contains(s) != as_quotient;
        let mut m = Self::zero(f, d);
        for s in Subset::all(d).filter(|&s| keep(s)) {
            m.set_dim(s.to_degree(d), 1);
        }
        for s in Subset::all(d).filter(|&s| keep(s)) {
            for i in (0..d).filter(|&i| !s.contains(i)) {
                let t = s.with(i);
                if keep(t) {
                    let sign = if alpha_is_negative(i, s) { -1 } else { 1 };
                    m.set_action(i, s.to_degree(d), Matrix::from_i64_rows(&f, &[vec![sign]]));
                }
            }
        }
        m
    }

    /// The residue field `K` placed in degree `a`.
    pub fn residue_field(f: F, a: Multidegree) -> Self {
        let mut m = Self::zero(f, a.nvars());
        m.set_dim(a, 1);
        m
    }

    /// Free module `⊕ E(-g)` on the given generator degrees. The basis of
    /// degree `a` is the pairs `(g, G)` with `gens[g] + G = a`, ordered by
    /// generator and then by subset bitmask.
    pub fn free(f: F, d: usize, gens: &[Multidegree]) -> Self {
        let index = free_basis_index(d, gens);
        let mut m = Self::zero(f, d);
        for (a, list) in &index {
            m.set_dim(*a, list.len());
        }
        for (a, list) in &index {
            for i in 0..d {
                let target = a.plus_unit(i);
                let Some(tlist) = index.get(&target) else {
                    continue;
                };
                let mut mat = Matrix::zeros(&f, tlist.len(), list.len());
                for (c, &(g, s)) in list.iter().enumerate() {
                    if s.contains(i) {
                        continue;
                    }
                    let r = tlist
                        .binary_search(&(g, s.with(i)))
                        .expect("free basis is closed under y_i");
                    let v = if alpha_is_negative(i, s) { -1 } else { 1 };
                    mat.set(r, c, f.from_i64(v));
                }
                m.set_action(i, *a, mat);
            }
        }
        m
    }

    /// The graded dual `(N_{1-a})^*` in degree `a`; `y_i` acts by the transpose.
    pub fn dual(&self) -> Self {
        let one = Multidegree::ones(self.d);
        let mut m = Self::zero(self.f, self.d);
        for (a, n) in &self.dims {
            m.set_dim(one - *a, *n);
        }
        for ((a, i), mat) in &self.action {
            // y_i: N_a -> N_{a+e_i} dualizes to D_{1-a-e_i} -> D_{1-a}
            let src = one - a.plus_unit(*i);
            m.set_action(*i, src, mat.transpose());
        }
        m
    }

    /// `N(-b)`: every degree moves up by `b`.
    pub fn shifted(&self, b: Multidegree) -> Self {
        Self {
            f: self.f,
            d: self.d,
            dims: self.dims.iter().map(|(a, n)| (*a + b, *n)).collect(),
            action: self
                .action
                .iter()
                .map(|((a, i), m)| ((*a + b, *i), m.clone()))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let f = self.f;
        let mut m = Self::zero(f, self.d);
        let degs: std::collections::BTreeSet<Multidegree> =
            self.degrees().chain(other.degrees()).collect();
        for a in &degs {
            m.set_dim(*a, self.dim_at(a) + other.dim_at(a));
        }
        for a in &degs {
            for i in 0..self.d {
                let t = a.plus_unit(i);
                if m.dim_at(&t) == 0 {
                    continue;
                }
                let (p, q) = (self.dim_at(a), self.dim_at(&t));
                let mut mat = Matrix::zeros(&f, m.dim_at(&t), m.dim_at(a));
                let x = self.action(i, a);
                for r in 0..q {
                    for c in 0..p {
                        mat.set(r, c, x.get(r, c).clone());
                    }
                }
                let y = other.action(i, a);
                for r in 0..y.rows() {
                    for c in 0..y.cols() {
                        mat.set(q + r, p + c, y.get(r, c).clone());
                    }
                }
                m.set_action(i, *a, mat);
            }
        }
        m
    }

    /// Component dimensions and action matrices agree exactly.
    pub fn same_data(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self.action.len() == other.action.len()
            && self
                .action
                .iter()
                .all(|(k, m)| other.action.get(k) == Some(m))
    }

    /// The smallest invariant subspaces containing the given vectors,
    /// filled degree by degree in increasing total degree.
    pub fn span_closure(&self, seeds: &Spaces<F::Elem>) -> Spaces<F::Elem> {
        let f = &self.f;
        let mut out: Spaces<F::Elem> = BTreeMap::new();
        let mut order: Vec<Multidegree> = self.degrees().collect();
        order.sort_by_key(|a| (a.total(), *a));
        for a in order {
            let n = self.dim_at(&a);
            let mut cands: Vec<Vec<F::Elem>> = Vec::new();
            for i in 0..self.d {
                let src = a.minus_unit(i);
                if let Some(vs) = out.get(&src) {
                    for v in vs {
                        cands.push(self.act(i, &src, v));
                    }
                }
            }
            if let Some(vs) = seeds.get(&a) {
                cands.extend(vs.iter().cloned());
            }
            let picked = greedy_extend(f, n, &[], &cands);
            if !picked.is_empty() {
                out.insert(a, picked.iter().map(|&k| cands[k].clone()).collect());
            }
        }
        out
    }

    /// Restriction to invariant subspaces (the caller guarantees invariance;
    /// it is asserted in debug builds through the coordinate solve).
    pub fn submodule(&self, spaces: &Spaces<F::Elem>) -> SubModule<F> {
        let f = self.f;
        let mut m = Self::zero(f, self.d);
        let mut inverses: BTreeMap<Multidegree, Matrix<F::Elem>> = BTreeMap::new();
        for (a, vs) in spaces {
            if vs.is_empty() {
                continue;
            }
            m.set_dim(*a, vs.len());
            let b = Matrix::from_columns(&f, self.dim_at(a), vs);
            inverses.insert(*a, left_inverse(&f, &b));
        }
        for (a, vs) in spaces {
            for i in 0..self.d {
                let t = a.plus_unit(i);
                let Some(inv) = inverses.get(&t) else {
                    continue;
                };
                let cols: Vec<Vec<F::Elem>> = vs
                    .iter()
                    .map(|v| {
                        let w = self.act(i, a, v);
                        let c = inv.apply(&f, &w);
                        debug_assert_eq!(
                            Matrix::from_columns(&f, w.len(), &spaces[&t]).apply(&f, &c),
                            w,
                            "subspaces are not invariant"
                        );
                        c
                    })
                    .collect();
                m.set_action(i, *a, Matrix::from_columns(&f, spaces[&t].len(), &cols));
            }
        }
        SubModule {
            module: m,
            basis: spaces
                .iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(a, v)| (*a, v.clone()))
                .collect(),
        }
    }

    /// Submodule generated by the given vectors.
    pub fn generated_by(&self, seeds: &Spaces<F::Elem>) -> SubModule<F> {
        self.submodule(&self.span_closure(seeds))
    }

    /// Quotient by invariant subspaces; the quotient basis at each degree is
    /// the canonical standard-vector complement.
    pub fn quotient(&self, spaces: &Spaces<F::Elem>) -> Self {
        let f = self.f;
        let mut m = Self::zero(f, self.d);
        // per degree: (complement indices, left inverse of [sub | complement])
        let mut data: BTreeMap<Multidegree, (usize, Vec<usize>, Matrix<F::Elem>)> = BTreeMap::new();
        for a in self.degrees() {
            let n = self.dim_at(&a);
            let sub: Vec<Vec<F::Elem>> = spaces.get(&a).cloned().unwrap_or_default();
            let comp = standard_complement(&f, n, &sub);
            if comp.is_empty() {
                continue;
            }
            let mut cols = sub.clone();
            for &k in &comp {
                let mut e = vec![f.zero(); n];
                e[k] = f.one();
                cols.push(e);
            }
            let inv = left_inverse(&f, &Matrix::from_columns(&f, n, &cols));
            m.set_dim(a, comp.len());
            data.insert(a, (sub.len(), comp, inv));
        }
        for (a, (_, comp, _)) in &data {
            for i in 0..self.d {
                let t = a.plus_unit(i);
                let Some((ts, tcomp, tinv)) = data.get(&t) else {
                    continue;
                };
                let x = self.action(i, a);
                let mut mat = Matrix::zeros(&f, tcomp.len(), comp.len());
                for (c, &k) in comp.iter().enumerate() {
                    let w = x.column(k);
                    let coords = tinv.apply(&f, &w);
                    for r in 0..tcomp.len() {
                        mat.set(r, c, coords[ts + r].clone());
                    }
                }
                m.set_action(i, *a, mat);
            }
        }
        m
    }

    /// Image of the maximal ideal, `m N`, per degree.
    pub fn max_ideal_image(&self) -> Spaces<F::Elem> {
        let mut cands: BTreeMap<Multidegree, Vec<Vec<F::Elem>>> = BTreeMap::new();
        for ((a, i), mat) in &self.action {
            let t = a.plus_unit(*i);
            let entry = cands.entry(t).or_default();
            for c in 0..mat.cols() {
                entry.push(mat.column(c));
            }
        }
        let f = &self.f;
        cands
            .into_iter()
            .map(|(a, vs)| {
                let p = greedy_extend(f, self.dim_at(&a), &[], &vs);
                (a, p.into_iter().map(|k| vs[k].clone()).collect::<Vec<_>>())
            })
            .filter(|(_, v)| !v.is_empty())
            .collect()
    }

    /// Minimal generators: in each degree, standard basis vectors completing
    /// `(m N)_a` to `N_a`.
    pub fn minimal_generators(&self) -> Vec<(Multidegree, Vec<F::Elem>)> {
        let f = &self.f;
        let img = self.max_ideal_image();
        let mut out = Vec::new();
        for a in self.degrees() {
            let n = self.dim_at(&a);
            let sub = img.get(&a).cloned().unwrap_or_default();
            for k in standard_complement(f, n, &sub) {
                let mut e = vec![f.zero(); n];
                e[k] = f.one();
                out.push((a, e));
            }
        }
        out
    }

    /// Total degrees in which minimal generators live.
    pub fn generator_total_degrees(&self) -> Vec<i32> {
        let mut t: Vec<i32> = self
            .minimal_generators()
            .iter()
            .map(|(a, _)| a.total())
            .collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// `N_<i>`: the submodule generated by all components of total degree `i`.
    pub fn degree_part_submodule(&self, i: i32) -> SubModule<F> {
        let f = &self.f;
        let mut seeds: Spaces<F::Elem> = BTreeMap::new();
        for a in self.degrees().filter(|a| a.total() == i) {
            let n = self.dim_at(&a);
            let vs = (0..n)
                .map(|k| {
                    let mut e = vec![f.zero(); n];
                    e[k] = f.one();
                    e
                })
                .collect();
            seeds.insert(a, vs);
        }
        self.generated_by(&seeds)
    }

    /// Splits off free summands: the quotient by the submodule generated by
    /// vectors not killed by `y_{[d]}` is isomorphic to a complement of the
    /// largest free summand. Returns the quotient and the generator degrees
    /// of the free part.
    pub fn strip_free_summands(&self) -> (Self, Vec<Multidegree>) {
        let f = &self.f;
        let full = Subset::full(self.d);
        let mut seeds: Spaces<F::Elem> = BTreeMap::new();
        let mut free_degs = Vec::new();
        for a in self.degrees() {
            let n = self.dim_at(&a);
            let top = a + full.to_degree(self.d);
            if self.dim_at(&top) == 0 {
                continue;
            }
            let cols: Vec<Vec<F::Elem>> = (0..n)
                .map(|k| {
                    let mut e = vec![f.zero(); n];
                    e[k] = f.one();
                    self.act_monomial(full, &a, &e)
                })
                .collect();
            // choose standard vectors whose socle images are independent
            let picked = greedy_extend(f, self.dim_at(&top), &[], &cols);
            if picked.is_empty() {
                continue;
            }
            let vs = picked
                .iter()
                .map(|&k| {
                    let mut e = vec![f.zero(); n];
                    e[k] = f.one();
                    e
                })
                .collect::<Vec<_>>();
            free_degs.extend(std::iter::repeat(a).take(vs.len()));
            seeds.insert(a, vs);
        }
        if seeds.is_empty() {
            return (self.clone(), free_degs);
        }
        let span = self.span_closure(&seeds);
        (self.quotient(&span), free_degs)
    }
}

/// For each degree, the sorted list of `(generator, subset)` pairs spanning
/// that component of the free module.
pub(crate) fn free_basis_index(
    d: usize,
    gens: &[Multidegree],
) -> BTreeMap<Multidegree, Vec<(usize, Subset)>> {
    let mut index: BTreeMap<Multidegree, Vec<(usize, Subset)>> = BTreeMap::new();
    for (g, deg) in gens.iter().enumerate() {
        for s in Subset::all(d) {
            index.entry(*deg + s.to_degree(d)).or_default().push((g, s));
        }
    }
    for list in index.values_mut() {
        list.sort();
    }
    index
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;

    fn s(v: &[usize]) -> Subset {
        Subset::from_indices(v)
    }

    #[test]
    fn ideal_modules() {
        let f = Rationals;
        let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, 3), true);
        assert_eq!(e.total_dim(), 8);
        e.check_relations().unwrap();
        let k = EModule::from_ideal(f, &MonomialIdeal::maximal(Side::E, 3), true);
        assert_eq!(k.total_dim(), 1);
        assert_eq!(k.dim_at(&Multidegree::zero(3)), 1);
        let j = MonomialIdeal::new(Side::E, 3, [s(&[0, 1])]);
        let q = EModule::from_ideal(f, &j, true);
        q.check_relations().unwrap();
        for set in Subset::all(3) {
            let expect = usize::from(!s(&[0, 1]).is_subset_of(set));
            assert_eq!(q.dim_at(&set.to_degree(3)), expect);
        }
    }

    #[test]
    fn dual_examples() {
        let f = Rationals;
        let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, 3), true);
        let de = e.dual();
        de.check_relations().unwrap();
        assert_eq!(de.dims(), e.dims());
        assert!(de.dual().same_data(&e));
        let k = EModule::residue_field(f, Multidegree::zero(2));
        assert_eq!(k.dual().dim_at(&Multidegree::ones(2)), 1);
        let j = MonomialIdeal::new(Side::E, 2, [s(&[0, 1])]);
        let n = EModule::from_ideal(f, &j, true);
        let dn = n.dual();
        for set in Subset::all(2) {
            let a = set.to_degree(2);
            assert_eq!(dn.dim_at(&a), n.dim_at(&(Multidegree::ones(2) - a)));
        }
    }

    #[test]
    fn free_module_relations() {
        let f = Rationals;
        let m = EModule::free(
            f,
            3,
            &[Multidegree::zero(3), Multidegree::from_slice(&[1, 0, 0])],
        );
        m.check_relations().unwrap();
        assert_eq!(m.total_dim(), 16);
        // y_1 on the second generator lands in degree (2,0,0)
        assert_eq!(m.dim_at(&Multidegree::from_slice(&[2, 0, 0])), 1);
    }

    #[test]
    fn degree_parts() {
        let f = Rationals;
        let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, 3), true);
        assert_eq!(e.degree_part_submodule(0).module.total_dim(), 8);
        let m1 = e.degree_part_submodule(1).module;
        assert_eq!(m1.total_dim(), 7);
        m1.check_relations().unwrap();
        assert_eq!(m1.generator_total_degrees(), vec![1]);
    }

    #[test]
    fn quotient_and_strip() {
        let f = Rationals;
        let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, 2), true);
        let k = EModule::residue_field(f, Multidegree::from_slice(&[1, 0]));
        let sum = e.direct_sum(&k);
        sum.check_relations().unwrap();
        let (rest, free) = sum.strip_free_summands();
        assert_eq!(free, vec![Multidegree::zero(2)]);
        assert_eq!(rest.total_dim(), 1);
        rest.check_relations().unwrap();
        let m = e.max_ideal_image();
        let q = e.quotient(&m);
        assert_eq!(q.total_dim(), 1);
    }
}
