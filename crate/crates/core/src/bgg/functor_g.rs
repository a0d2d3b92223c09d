use std::collections::{BTreeMap, BTreeSet};

use super::{EComplex, EMorphism};
use crate::emod::EModule;
use crate::error::{Error, Result};
use crate::exactla::{column_space_basis, left_inverse, rank, Field, Matrix};
use crate::grading::{BettiTable, DegreeBox, Multidegree, Subset};
use crate::smod::{FreeComplexS, GradedComplex, SqSModule};

/// `G(M)` restricted to a box of `E`-degrees. The degree-`c` part at spot
/// `p` is `⊕ M^i_b ⊗ y_L^*` over `b = -c - e_L` and `p = i + |b|`.
#[derive(Clone, Debug)]
pub struct BggImageG<F: Field> {
    pub complex: EComplex<F>,
    pub window: DegreeBox,
}

impl<F: Field> BggImageG<F> {
    pub fn cohomology_dim(&self, p: i32, c: &Multidegree) -> Result<usize> {
        self.complex.cohomology_dim(p, c)
    }

    /// Spots `p` with `H^p` nonzero somewhere in the window.
    pub fn nonzero_spots(&self) -> Result<BTreeSet<i32>> {
        let (lo, hi) = self.complex.spot_range();
        let degs = self.complex.degrees();
        let mut out = BTreeSet::new();
        for p in lo..=hi {
            for c in &degs {
                if self.cohomology_dim(p, c)? > 0 {
                    out.insert(p);
                    break;
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug)]
struct Block {
    i: i32,
    set: Subset,
    offset: usize,
    dim: usize,
}

/// Builds `G(M)` on the `E`-degrees of `window`. The differential sends
/// `m ⊗ y_L^*` to `Σ_{k ∈ L} (-1)^{#{l ∈ L, l < k}} x_k m ⊗ y_{L∖k}^* +
/// (-1)^{|b|} ∂m ⊗ y_L^*`, and `y_k` acts by contraction:
/// `y_k (m ⊗ y_L^*) = (-1)^{#{l ∈ L, l > k}} m ⊗ y_{L∖k}^*`. Both
/// `E`-linearity and `d^2 = 0` are checked.
pub fn functor_g<F: Field, C: GradedComplex<F> + ?Sized>(
    m: &C,
    window: DegreeBox,
) -> Result<BggImageG<F>> {
    let f = m.field();
    let d = m.nvars();
    let cs = window.points();
    let mut missing: Vec<Multidegree> = Vec::new();
    for c in &cs {
        for set in Subset::all(d) {
            let b = -*c - set.to_degree(d);
            if !m.defined_at(&b) {
                missing.push(b);
            }
        }
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(Error::WindowTooSmall { missing });
    }
    let Some((lo, hi)) = m.spot_range() else {
        return Ok(BggImageG {
            complex: EComplex::single(EModule::zero(f, d), 0),
            window,
        });
    };
    let mut blocks: BTreeMap<(i32, Multidegree), Vec<Block>> = BTreeMap::new();
    for c in &cs {
        for i in lo..=hi {
            for set in Subset::all(d) {
                let b = -*c - set.to_degree(d);
                let dim = m.dim(i, &b);
                if dim == 0 {
                    continue;
                }
                let list = blocks.entry((i + b.total(), *c)).or_default();
                let offset = list.iter().map(|x| x.dim).sum();
                list.push(Block { i, set, offset, dim });
            }
        }
    }
    if blocks.is_empty() {
        return Ok(BggImageG {
            complex: EComplex::single(EModule::zero(f, d), 0),
            window,
        });
    }
    let find = |p: i32, c: &Multidegree, i: i32, set: Subset| -> Option<Block> {
        blocks
            .get(&(p, *c))
            .and_then(|l| l.iter().find(|x| x.i == i && x.set == set).copied())
    };
    let size = |p: i32, c: &Multidegree| -> usize {
        blocks.get(&(p, *c)).map_or(0, |l| l.iter().map(|x| x.dim).sum())
    };
    let pmin = blocks.keys().map(|(p, _)| *p).min().expect("nonempty");
    let pmax = blocks.keys().map(|(p, _)| *p).max().expect("nonempty");
    let minus_one = f.from_i64(-1);
    let mut modules = Vec::new();
    for p in pmin..=pmax {
        let mut e = EModule::zero(f, d);
        for c in &cs {
            e.set_dim(*c, size(p, c));
        }
        for c in &cs {
            let Some(list) = blocks.get(&(p, *c)) else { continue };
            for k in 0..d {
                let t = c.plus_unit(k);
                if !window.contains(&t) || size(p, &t) == 0 {
                    continue;
                }
                let mut mat = Matrix::zeros(&f, size(p, &t), size(p, c));
                for blk in list.iter().filter(|x| x.set.contains(k)) {
                    let smaller = blk.set.without(k);
                    let tb = find(p, &t, blk.i, smaller).expect("contraction keeps the block");
                    let above = smaller.iter().filter(|&l| l > k).count();
                    let v = if above % 2 == 1 { minus_one.clone() } else { f.one() };
                    for r in 0..blk.dim {
                        mat.set(tb.offset + r, blk.offset + r, v.clone());
                    }
                }
                e.set_action(k, *c, mat);
            }
        }
        modules.push(e);
    }
    let mut maps = Vec::new();
    for p in pmin..pmax {
        let mut mats = BTreeMap::new();
        for c in &cs {
            let Some(list) = blocks.get(&(p, *c)) else { continue };
            let rows = size(p + 1, c);
            if rows == 0 {
                continue;
            }
            let mut mat = Matrix::zeros(&f, rows, size(p, c));
            for blk in list {
                let b = -*c - blk.set.to_degree(d);
                for k in blk.set.iter() {
                    let Some(tb) = find(p + 1, c, blk.i, blk.set.without(k)) else { continue };
                    let x = m.mult(blk.i, k, &b);
                    let neg = blk.set.count_below(k) % 2 == 1;
                    place(&f, &mut mat, tb.offset, blk.offset, &x, neg);
                }
                if let Some(tb) = find(p + 1, c, blk.i + 1, blk.set) {
                    let dm = m.diff(blk.i, &b);
                    let neg = b.total().rem_euclid(2) == 1;
                    place(&f, &mut mat, tb.offset, blk.offset, &dm, neg);
                }
            }
            if !mat.is_zero(&f) {
                mats.insert(*c, mat);
            }
        }
        maps.push(EMorphism { mats });
    }
    let complex = EComplex::new(pmin, modules, maps).map_err(|e| match e {
        Error::DifferentialCheckFailed(s) => Error::DifferentialCheckFailed(format!("image of G: {s}")),
        e => e,
    })?;
    Ok(BggImageG { complex, window })
}

fn place<F: Field>(f: &F, m: &mut Matrix<F::Elem>, r0: usize, c0: usize, b: &Matrix<F::Elem>, neg: bool) {
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            let v = b.get(r, c);
            if !f.is_zero(v) {
                m.set(r0 + r, c0 + c, if neg { f.neg(v) } else { v.clone() });
            }
        }
    }
}

/// `beta^{i,a} = dim H^{i+|a|}(G(M))_{-a}` for every `a` in `degrees`.
pub fn betti_of_complex_via_g<F: Field, C: GradedComplex<F> + ?Sized>(
    m: &C,
    degrees: &[Multidegree],
) -> Result<BettiTable> {
    let mut table = BettiTable::new();
    let negs: Vec<Multidegree> = degrees.iter().map(|a| -*a).collect();
    let Some(window) = DegreeBox::hull(m.nvars(), negs.iter()) else {
        return Ok(table);
    };
    let g = functor_g(m, window)?;
    let (lo, hi) = g.complex.spot_range();
    for a in degrees {
        for p in lo..=hi {
            let h = g.cohomology_dim(p, &-*a)?;
            table.add(p - a.total(), *a, h);
        }
    }
    Ok(table)
}

fn squarefree_e_window(d: usize) -> DegreeBox {
    DegreeBox::new(-Multidegree::ones(d), Multidegree::zero(d))
}

/// `max { p | H^p(G(M)) ≠ 0 }` on the squarefree window; `None` when all
/// cohomology vanishes.
pub fn reg_of_complex<F: Field, C: GradedComplex<F> + ?Sized>(m: &C) -> Result<Option<i32>> {
    reg_of_complex_on(m, squarefree_e_window(m.nvars()))
}

pub fn reg_of_complex_on<F: Field, C: GradedComplex<F> + ?Sized>(
    m: &C,
    window: DegreeBox,
) -> Result<Option<i32>> {
    Ok(functor_g(m, window)?.nonzero_spots()?.last().copied())
}

/// `reg(D(M)) = -min { p | H^p(G(M)) ≠ 0 }` on the squarefree window.
pub fn reg_of_dual<F: Field, C: GradedComplex<F> + ?Sized>(m: &C) -> Result<Option<i32>> {
    let g = functor_g(m, squarefree_e_window(m.nvars()))?;
    Ok(g.nonzero_spots()?.first().map(|p| -p))
}

/// Regularity of the dual computed from the minimal resolution: spot `i`
/// and degree `a` go to spot `-i - d` and degree `1 - a`.
pub fn reg_of_dual_reflection<F: Field>(m: &SqSModule<F>) -> Option<i32> {
    let d = m.nvars();
    let dual = m
        .min_free_resolution()
        .complex
        .dualize(Multidegree::ones(d), d as i32);
    dual.generator_table().reg()
}

/// `C` moved up by `by` spots: spot `q` holds spot `q - by` of the inner
/// complex, with the differential multiplied by `(-1)^by`.
pub struct SpotShift<'a, C: ?Sized> {
    pub inner: &'a C,
    pub by: i32,
}

impl<F: Field, C: GradedComplex<F> + ?Sized> GradedComplex<F> for SpotShift<'_, C> {
    fn field(&self) -> F {
        self.inner.field()
    }
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }
    fn spot_range(&self) -> Option<(i32, i32)> {
        self.inner.spot_range().map(|(a, b)| (a + self.by, b + self.by))
    }
    fn dim(&self, p: i32, a: &Multidegree) -> usize {
        self.inner.dim(p - self.by, a)
    }
    fn mult(&self, p: i32, i: usize, a: &Multidegree) -> Matrix<F::Elem> {
        self.inner.mult(p - self.by, i, a)
    }
    fn diff(&self, p: i32, a: &Multidegree) -> Matrix<F::Elem> {
        let m = self.inner.diff(p - self.by, a);
        if self.by % 2 == 0 {
            m
        } else {
            let f = self.field();
            m.scale(&f, &f.from_i64(-1))
        }
    }
    fn defined_at(&self, a: &Multidegree) -> bool {
        self.inner.defined_at(a)
    }
}

/// `σ_{>n} T`: `im d^n` at spot `n`, then `T^{n+1}, T^{n+2}, ...`.
pub struct TruncatedAbove<'a, F: Field> {
    pub t: &'a FreeComplexS<F>,
    pub n: i32,
}

impl<F: Field> TruncatedAbove<'_, F> {
    fn image_basis(&self, a: &Multidegree) -> Vec<Vec<F::Elem>> {
        column_space_basis(&self.t.field(), &self.t.eval_diff(self.n, a))
    }
}

impl<F: Field> GradedComplex<F> for TruncatedAbove<'_, F> {
    fn field(&self) -> F {
        self.t.field()
    }
    fn nvars(&self) -> usize {
        self.t.nvars()
    }
    fn spot_range(&self) -> Option<(i32, i32)> {
        let (_, hi) = self.t.spot_range()?;
        (hi > self.n).then_some((self.n, hi))
    }
    fn dim(&self, p: i32, a: &Multidegree) -> usize {
        match p.cmp(&self.n) {
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Equal => rank(&self.t.field(), &self.t.eval_diff(self.n, a)),
            std::cmp::Ordering::Greater => GradedComplex::dim(self.t, p, a),
        }
    }
    fn mult(&self, p: i32, i: usize, a: &Multidegree) -> Matrix<F::Elem> {
        let f = self.t.field();
        match p.cmp(&self.n) {
            std::cmp::Ordering::Less => Matrix::zeros(&f, 0, 0),
            std::cmp::Ordering::Greater => GradedComplex::mult(self.t, p, i, a),
            std::cmp::Ordering::Equal => {
                let t = a.plus_unit(i);
                let src = self.image_basis(a);
                let tgt = self.image_basis(&t);
                if src.is_empty() || tgt.is_empty() {
                    return Matrix::zeros(&f, tgt.len(), src.len());
                }
                let inc = GradedComplex::mult(self.t, self.n + 1, i, a);
                let li = left_inverse(&f, &Matrix::from_columns(&f, inc.rows(), &tgt));
                let cols: Vec<Vec<F::Elem>> =
                    src.iter().map(|v| li.apply(&f, &inc.apply(&f, v))).collect();
                Matrix::from_columns(&f, tgt.len(), &cols)
            }
        }
    }
    fn diff(&self, p: i32, a: &Multidegree) -> Matrix<F::Elem> {
        let f = self.t.field();
        match p.cmp(&self.n) {
            std::cmp::Ordering::Less => Matrix::zeros(&f, self.dim(p + 1, a), 0),
            std::cmp::Ordering::Greater => GradedComplex::diff(self.t, p, a),
            std::cmp::Ordering::Equal => {
                let rows = GradedComplex::dim(self.t, self.n + 1, a);
                Matrix::from_columns(&f, rows, &self.image_basis(a))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::grading::{MonomialIdeal, Side};
    use crate::smod::{betti_via_koszul, SqComplex, SqMorphism};

    fn all_sq(d: usize) -> Vec<Multidegree> {
        Subset::all(d).map(|s| s.to_degree(d)).collect()
    }

    fn s(v: &[usize]) -> Subset {
        Subset::from_indices(v)
    }

    #[test]
    fn reg_of_simple_modules() {
        let f = Rationals;
        let free = SqSModule::free(f, 2, &[Subset::EMPTY]);
        assert_eq!(reg_of_complex(&free).unwrap(), Some(0));
        assert_eq!(reg_of_dual(&free).unwrap(), Some(0));
        assert_eq!(reg_of_dual_reflection(&free), Some(0));
        let k = SqSModule::residue_field(f, 3);
        assert_eq!(reg_of_complex(&k).unwrap(), Some(0));
        assert_eq!(reg_of_dual(&k).unwrap(), Some(0));
        let i = MonomialIdeal::new(Side::S, 3, [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]);
        let m = SqSModule::from_ideal(f, &i, true);
        assert_eq!(reg_of_complex(&m).unwrap(), Some(1));
        assert_eq!(reg_of_dual(&m).unwrap(), reg_of_dual_reflection(&m));
        let g = s(&[0, 2]);
        let sf = SqSModule::free(f, 3, &[g]);
        assert_eq!(reg_of_complex(&sf).unwrap(), Some(2));
        // M[2] sits two spots lower
        let shifted = SpotShift { inner: &m, by: -2 };
        assert_eq!(reg_of_complex(&shifted).unwrap(), Some(1 - 2));
    }

    #[test]
    fn betti_via_g_agrees_with_koszul() {
        let f = Rationals;
        let k = SqSModule::residue_field(f, 3);
        assert_eq!(
            betti_of_complex_via_g(&k, &all_sq(3)).unwrap(),
            betti_via_koszul(&k, &all_sq(3)).unwrap()
        );
        let i = MonomialIdeal::new(Side::S, 4, [s(&[0, 1]), s(&[2, 3])]);
        let m = SqSModule::from_ideal(f, &i, true);
        assert_eq!(
            betti_of_complex_via_g(&m, &all_sq(4)).unwrap(),
            m.min_free_resolution().betti
        );
    }

    /// `[M(-e_1) -> M]` by `x_1`, with `M = S/(x_2)`.
    pub(crate) fn x1_on_quotient(d: usize) -> SqComplex<Rationals> {
        let f = Rationals;
        let m = SqSModule::from_ideal(f, &MonomialIdeal::new(Side::S, d, [s(&[1])]), true);
        let free1 = SqSModule::free(f, d, &[s(&[0])]);
        let mut seeds = vec![Vec::new(); 1 << d];
        seeds[s(&[0, 1]).index()] = vec![vec![f.one()]];
        let src = free1.quotient(&free1.span_closure(&seeds));
        let onto = SqMorphism::from_free(&[s(&[0])], &[vec![f.one()]], &m);
        let mats = Subset::all(d)
            .map(|g| {
                if src.dim(g) == 1 {
                    onto.mats[g.index()].clone()
                } else {
                    Matrix::zeros(&f, m.dim(g), 0)
                }
            })
            .collect();
        SqComplex::two_term(src, m, SqMorphism { mats }, -1)
    }

    #[test]
    fn two_term_complex_via_g() {
        let d = 3;
        let c = x1_on_quotient(d);
        c.check().unwrap();
        let t = betti_via_koszul(&c, &all_sq(d)).unwrap();
        assert_eq!(betti_of_complex_via_g(&c, &all_sq(d)).unwrap(), t);
        // x_1 is a nonzerodivisor on S/(x_2): the complex resolves S/(x_1, x_2)
        assert_eq!(t.coarse(0, 0), 1);
        assert_eq!(t.coarse(-1, 1), 2);
        assert_eq!(t.coarse(-2, 2), 1);
    }

    #[test]
    fn window_errors() {
        let f = Rationals;
        let p = crate::smod::Pieces::<Rationals>::new(f, 2, DegreeBox::squarefree(2));
        let r = functor_g(&p, DegreeBox::new(Multidegree::from_slice(&[-3, 0]), Multidegree::zero(2)));
        assert!(matches!(r, Err(Error::WindowTooSmall { .. })));
    }

    #[test]
    fn g_of_f_image_recovers_module() {
        let f = Rationals;
        let j = MonomialIdeal::new(Side::E, 3, [s(&[0, 1]), s(&[1, 2])]);
        let n = EModule::from_ideal(f, &j, true);
        let t = crate::bgg::functor_f_module(&n).unwrap().complex;
        let g = functor_g(&t, DegreeBox::squarefree(3)).unwrap();
        for c in DegreeBox::squarefree(3).points() {
            assert_eq!(g.cohomology_dim(0, &c).unwrap(), n.dim_at(&c));
        }
        assert_eq!(g.nonzero_spots().unwrap().into_iter().collect::<Vec<_>>(), vec![0]);
        let h0 = g.complex.cohomology(0);
        h0.check_relations().unwrap();
        assert_eq!(h0.dims(), n.dims());
    }
}
