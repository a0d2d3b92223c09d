use super::koszul::{betti_via_koszul, GradedComplex};
use super::SqSModule;
use crate::error::Result;
use crate::exactla::{Field, Matrix};
use crate::grading::{BettiTable, DegreeBox, Multidegree};

/// `M_{>= r}`: the components of total degree at least `r`.
#[derive(Clone, Debug)]
pub struct Truncation<'a, F: Field> {
    pub module: &'a SqSModule<F>,
    pub r: i32,
}

impl<'a, F: Field> Truncation<'a, F> {
    pub fn new(module: &'a SqSModule<F>, r: i32) -> Self {
        Self { module, r }
    }

    /// Degrees that can carry Betti numbers. With `c = max(r, 1)` the
    /// truncation is positively `c·1`-determined (each `x_i` is an
    /// isomorphism once `a_i >= c`), which confines Betti degrees to
    /// `[0, c·1]`; only `r <= |a| <= max(r, d) + d` can occur.
    pub fn betti_degrees(&self) -> Vec<Multidegree> {
        let d = self.module.nvars();
        let c = self.r.max(1);
        let top = self.r.max(d as i32) + d as i32;
        DegreeBox::new(Multidegree::zero(d), Multidegree::splat(d, c))
            .points()
            .into_iter()
            .filter(|a| a.total() >= self.r && a.total() <= top)
            .collect()
    }

    pub fn betti(&self) -> Result<BettiTable> {
        betti_via_koszul(self, &self.betti_degrees())
    }
}

impl<F: Field> GradedComplex<F> for Truncation<'_, F> {
    fn field(&self) -> F {
        self.module.field()
    }
    fn nvars(&self) -> usize {
        self.module.nvars()
    }
    fn spot_range(&self) -> Option<(i32, i32)> {
        GradedComplex::spot_range(self.module)
    }
    fn dim(&self, p: i32, a: &Multidegree) -> usize {
        if a.total() < self.r {
            0
        } else {
            GradedComplex::dim(self.module, p, a)
        }
    }
    fn mult(&self, p: i32, i: usize, a: &Multidegree) -> Matrix<F::Elem> {
        if a.total() < self.r {
            let f = self.module.field();
            Matrix::zeros(&f, GradedComplex::dim(self, p, &a.plus_unit(i)), 0)
        } else {
            GradedComplex::mult(self.module, p, i, a)
        }
    }
    fn diff(&self, p: i32, a: &Multidegree) -> Matrix<F::Elem> {
        let f = self.module.field();
        Matrix::zeros(&f, GradedComplex::dim(self, p + 1, a), GradedComplex::dim(self, p, a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::grading::{MonomialIdeal, Side, Subset};

    #[test]
    fn truncating_the_ring() {
        let f = Rationals;
        let s = SqSModule::free(f, 2, &[Subset::EMPTY]);
        let t = Truncation::new(&s, 1).betti().unwrap();
        // m = (x1, x2): two generators and one linear syzygy
        assert_eq!(t.coarse(0, 1), 2);
        assert_eq!(t.coarse(-1, 2), 1);
        assert!(t.is_linear(1));
        let t0 = Truncation::new(&s, 0).betti().unwrap();
        assert_eq!(t0, s.betti());
    }

    #[test]
    fn truncation_linear_iff_past_reg() {
        let f = Rationals;
        let sub = |v: &[usize]| Subset::from_indices(v);
        let i = MonomialIdeal::new(Side::S, 3, [sub(&[0, 1]), sub(&[1, 2]), sub(&[0, 2])]);
        let m = SqSModule::from_ideal(f, &i, true);
        assert_eq!(m.reg(), Some(1));
        for r in -1..=3 {
            let b = Truncation::new(&m, r).betti().unwrap();
            assert_eq!(b.is_linear(r) && !b.is_empty(), r >= 1, "r = {r}");
        }
    }
}
