use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::{cohomology_dim, Field, Matrix};
use crate::grading::{BettiTable, DegreeBox, Multidegree, Subset};

/// A bounded complex of `Z^d`-graded `S`-modules that can be evaluated
/// degree by degree.
pub trait GradedComplex<F: Field> {
    fn field(&self) -> F;
    fn nvars(&self) -> usize;
    /// Inclusive range of spots that may be nonzero.
    fn spot_range(&self) -> Option<(i32, i32)>;
    fn dim(&self, p: i32, a: &Multidegree) -> usize;
    /// `x_i: M^p_a -> M^p_{a+e_i}`.
    fn mult(&self, p: i32, i: usize, a: &Multidegree) -> Matrix<F::Elem>;
    /// `d: M^p_a -> M^{p+1}_a`.
    fn diff(&self, p: i32, a: &Multidegree) -> Matrix<F::Elem>;
    /// Whether the evaluator knows the degree-`a` data.
    fn defined_at(&self, _a: &Multidegree) -> bool {
        true
    }
}

/// A single module known on a box of degrees: explicit dimensions and
/// `x_i` matrices. Degrees with a coordinate below the box are zero;
/// degrees above it are unknown.
#[derive(Clone, Debug)]
pub struct Pieces<F: Field> {
    f: F,
    d: usize,
    window: DegreeBox,
    dims: BTreeMap<Multidegree, usize>,
    mults: BTreeMap<(Multidegree, usize), Matrix<F::Elem>>,
}

impl<F: Field> Pieces<F> {
    pub fn new(f: F, d: usize, window: DegreeBox) -> Self {
        Self {
            f,
            d,
            window,
            dims: BTreeMap::new(),
            mults: BTreeMap::new(),
        }
    }

    pub fn window(&self) -> DegreeBox {
        self.window
    }

    pub fn set_dim(&mut self, a: Multidegree, n: usize) {
        if n > 0 {
            self.dims.insert(a, n);
        }
    }

    pub fn set_mult(&mut self, i: usize, a: Multidegree, m: Matrix<F::Elem>) {
        self.mults.insert((a, i), m);
    }

    pub fn dim_at(&self, a: &Multidegree) -> usize {
        self.dims.get(a).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Multidegree, &usize)> {
        self.dims.iter()
    }

    /// Smallest total degree of a nonzero component.
    pub fn initial_degree(&self) -> Option<i32> {
        self.dims.keys().map(|a| a.total()).min()
    }

    /// Reads the box `{F - shift}`, `F ⊆ [d]`, as a squarefree module.
    pub fn to_squarefree(&self, shift: Multidegree) -> super::SqSModule<F> {
        let mut m = super::SqSModule::zero(self.f, self.d);
        for s in Subset::all(self.d) {
            m.set_dim(s, self.dim_at(&(s.to_degree(self.d) - shift)));
        }
        for s in Subset::all(self.d) {
            let a = s.to_degree(self.d) - shift;
            for i in (0..self.d).filter(|&i| !s.contains(i)) {
                m.set_map(i, s, self.mult_matrix(i, &a));
            }
        }
        m
    }

    fn mult_matrix(&self, i: usize, a: &Multidegree) -> Matrix<F::Elem> {
        match self.mults.get(&(*a, i)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(&self.f, self.dim_at(&a.plus_unit(i)), self.dim_at(a)),
        }
    }
}

impl<F: Field> GradedComplex<F> for Pieces<F> {
    fn field(&self) -> F {
        self.f
    }
    fn nvars(&self) -> usize {
        self.d
    }
    fn spot_range(&self) -> Option<(i32, i32)> {
        if self.is_zero() {
            None
        } else {
            Some((0, 0))
        }
    }
    fn dim(&self, p: i32, a: &Multidegree) -> usize {
        if p == 0 {
            self.dim_at(a)
        } else {
            0
        }
    }
    fn mult(&self, p: i32, i: usize, a: &Multidegree) -> Matrix<F::Elem> {
        if p == 0 {
            self.mult_matrix(i, a)
        } else {
            Matrix::zeros(&self.f, 0, 0)
        }
    }
    fn diff(&self, p: i32, a: &Multidegree) -> Matrix<F::Elem> {
        Matrix::zeros(&self.f, self.dim(p + 1, a), self.dim(p, a))
    }
    fn defined_at(&self, a: &Multidegree) -> bool {
        let below = (0..self.d).any(|i| a.get(i) < self.window.lo.get(i));
        below || self.window.contains(a)
    }
}

/// Degrees of `[a - 1, a]` the evaluator cannot supply.
fn missing_for<F: Field, C: GradedComplex<F> + ?Sized>(c: &C, a: &Multidegree) -> Vec<Multidegree> {
    let d = c.nvars();
    Subset::all(d)
        .map(|s| *a - s.to_degree(d))
        .filter(|b| !c.defined_at(b))
        .collect()
}

/// One block `M^p_{a - e_G}` of the Koszul total complex at degree `a`.
#[derive(Clone, Copy)]
struct Block {
    p: i32,
    set: Subset,
    offset: usize,
    dim: usize,
}

/// Betti numbers `beta^{n,a} = dim H^n(M ⊗ Koszul)_a` for every `a` in
/// `degrees`, where the total complex has `M^p ⊗ e_G` in spot `p - |G|` and
/// `D(m ⊗ e_G) = Σ_{g ∈ G} (-1)^{#{h ∈ G, h < g}} x_g m ⊗ e_{G∖g} + (-1)^{|G|} d(m) ⊗ e_G`.
pub fn betti_via_koszul<F: Field, C: GradedComplex<F> + ?Sized>(
    c: &C,
    degrees: &[Multidegree],
) -> Result<BettiTable> {
    let mut missing: Vec<Multidegree> = degrees.iter().flat_map(|a| missing_for(c, a)).collect();
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(Error::WindowTooSmall { missing });
    }
    let mut table = BettiTable::new();
    let Some((lo, hi)) = c.spot_range() else {
        return Ok(table);
    };
    for a in degrees {
        for (n, dim) in koszul_homology_at(c, a, lo, hi)? {
            table.add(n, *a, dim);
        }
    }
    Ok(table)
}

/// Nonzero `(n, dim H^n)` of the Koszul total complex at degree `a`.
pub(crate) fn koszul_homology_at<F: Field, C: GradedComplex<F> + ?Sized>(
    c: &C,
    a: &Multidegree,
    lo: i32,
    hi: i32,
) -> Result<Vec<(i32, usize)>> {
    let f = c.field();
    let d = c.nvars();
    // blocks grouped by total spot
    let mut spots: BTreeMap<i32, Vec<Block>> = BTreeMap::new();
    for p in lo..=hi {
        for set in Subset::all(d) {
            let b = *a - set.to_degree(d);
            let dim = c.dim(p, &b);
            if dim == 0 {
                continue;
            }
            let n = p - set.len() as i32;
            let list = spots.entry(n).or_default();
            let offset = list.iter().map(|x| x.dim).sum();
            list.push(Block {
                p,
                set,
                offset,
                dim,
            });
        }
    }
    let size = |n: i32| -> usize {
        spots
            .get(&n)
            .map_or(0, |l| l.iter().map(|b| b.dim).sum())
    };
    let find = |n: i32, p: i32, set: Subset| -> Option<Block> {
        spots
            .get(&n)
            .and_then(|l| l.iter().find(|b| b.p == p && b.set == set).copied())
    };
    let minus_one = f.from_i64(-1);
    let total_diff = |n: i32| -> Matrix<F::Elem> {
        let mut m = Matrix::zeros(&f, size(n + 1), size(n));
        let Some(list) = spots.get(&n) else { return m };
        for blk in list {
            let src = *a - blk.set.to_degree(d);
            for g in blk.set.iter() {
                let smaller = blk.set.without(g);
                let Some(tb) = find(n + 1, blk.p, smaller) else { continue };
                let x = c.mult(blk.p, g, &src);
                let neg = blk.set.count_below(g) % 2 == 1;
                put_block(&f, &mut m, tb.offset, blk.offset, &x, neg, &minus_one);
            }
            if let Some(tb) = find(n + 1, blk.p + 1, blk.set) {
                let dm = c.diff(blk.p, &src);
                let neg = blk.set.len() % 2 == 1;
                put_block(&f, &mut m, tb.offset, blk.offset, &dm, neg, &minus_one);
            }
        }
        m
    };
    let mut out = Vec::new();
    let ns: Vec<i32> = spots.keys().copied().collect();
    for n in ns {
        let h = cohomology_dim(&f, &total_diff(n - 1), &total_diff(n))
            .map_err(|_| Error::DifferentialCheckFailed(format!("Koszul total complex at {a}")))?;
        if h > 0 {
            out.push((n, h));
        }
    }
    Ok(out)
}

fn put_block<F: Field>(
    f: &F,
    m: &mut Matrix<F::Elem>,
    r0: usize,
    c0: usize,
    b: &Matrix<F::Elem>,
    neg: bool,
    minus_one: &F::Elem,
) {
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            let v = b.get(r, c);
            if f.is_zero(v) {
                continue;
            }
            let v = if neg { f.mul(v, minus_one) } else { v.clone() };
            m.set(r0 + r, c0 + c, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::grading::{binomial, MonomialIdeal, Side};
    use crate::smod::SqSModule;

    fn squarefree_degrees(d: usize) -> Vec<Multidegree> {
        Subset::all(d).map(|s| s.to_degree(d)).collect()
    }

    #[test]
    fn tor_of_free_and_residue() {
        let f = Rationals;
        for d in 1..=4 {
            let s = SqSModule::free(f, d, &[Subset::EMPTY]);
            let t = betti_via_koszul(&s, &squarefree_degrees(d)).unwrap();
            assert_eq!(t.iter().count(), 1);
            assert_eq!(t.get(0, &Multidegree::zero(d)), 1);
            let k = SqSModule::residue_field(f, d);
            let t = betti_via_koszul(&k, &squarefree_degrees(d)).unwrap();
            for j in 0..=d {
                assert_eq!(t.coarse(-(j as i32), j as i32) as u64, binomial(d as u64, j as u64));
            }
        }
    }

    #[test]
    fn tor_of_three_points() {
        let f = Rationals;
        let s = |v: &[usize]| Subset::from_indices(v);
        let i = MonomialIdeal::new(Side::S, 3, [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]);
        let m = SqSModule::from_ideal(f, &i, true);
        let t = betti_via_koszul(&m, &squarefree_degrees(3)).unwrap();
        assert_eq!(t.coarse(0, 0), 1);
        assert_eq!(t.coarse(-1, 2), 3);
        assert_eq!(t.coarse(-2, 3), 2);
        assert_eq!(t.reg(), Some(1));
    }

    #[test]
    fn window_is_checked() {
        let f = Rationals;
        let p = Pieces::<Rationals>::new(f, 2, DegreeBox::squarefree(2));
        let err = betti_via_koszul(&p, &[Multidegree::from_slice(&[2, 0])]).unwrap_err();
        match err {
            Error::WindowTooSmall { missing } => assert!(!missing.is_empty()),
            e => panic!("unexpected {e:?}"),
        }
    }
}
