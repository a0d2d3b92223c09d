use std::collections::BTreeMap;

use super::koszul::{GradedComplex, Pieces};
use crate::error::{Error, Result};
use crate::exactla::{cohomology, cohomology_dim, Field, Matrix};
use crate::grading::{BettiTable, DegreeBox, Multidegree};

/// A bounded complex of `Z^d`-graded free `S`-modules.
///
/// Spot `lo + k` carries generators `gens[k]`; `diffs[k]` is the coefficient
/// matrix of the differential from spot `lo + k` to `lo + k + 1` (rows are
/// target generators). An entry at `(r, s)` stands for the coefficient times
/// the monomial `x^{deg s - deg r}`, so it may only be nonzero when
/// `deg r <= deg s`.
#[derive(Clone, Debug)]
pub struct FreeComplexS<F: Field> {
    f: F,
    d: usize,
    lo: i32,
    gens: Vec<Vec<Multidegree>>,
    diffs: Vec<Matrix<F::Elem>>,
}

impl<F: Field> FreeComplexS<F> {
    pub fn zero(f: F, d: usize) -> Self {
        Self {
            f,
            d,
            lo: 0,
            gens: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// Checks matrix shapes and that every nonzero entry has a monomial of
    /// nonnegative degree.
    pub fn new(
        f: F,
        d: usize,
        lo: i32,
        gens: Vec<Vec<Multidegree>>,
        diffs: Vec<Matrix<F::Elem>>,
    ) -> Result<Self> {
        if !gens.is_empty() && diffs.len() + 1 != gens.len() {
            return Err(Error::InvalidInput(
                "free complex needs one differential between consecutive spots".into(),
            ));
        }
        for (k, m) in diffs.iter().enumerate() {
            if m.rows() != gens[k + 1].len() || m.cols() != gens[k].len() {
                return Err(Error::InvalidInput(format!(
                    "differential at spot {} has shape {}x{}",
                    lo + k as i32,
                    m.rows(),
                    m.cols()
                )));
            }
            for r in 0..m.rows() {
                for s in 0..m.cols() {
                    if !f.is_zero(m.get(r, s)) && !gens[k + 1][r].leq(&gens[k][s]) {
                        return Err(Error::InvalidInput(format!(
                            "entry ({r},{s}) at spot {} has no monomial of degree {} - {}",
                            lo + k as i32,
                            gens[k][s],
                            gens[k + 1][r]
                        )));
                    }
                }
            }
        }
        let mut c = Self {
            f,
            d,
            lo,
            gens,
            diffs,
        };
        c.trim();
        Ok(c)
    }

    /// Drops empty spots at both ends.
    fn trim(&mut self) {
        while self.gens.last().is_some_and(|g| g.is_empty()) {
            self.gens.pop();
            self.diffs.pop();
        }
        while self.gens.first().is_some_and(|g| g.is_empty()) {
            self.gens.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        if self.gens.is_empty() {
            self.diffs.clear();
            self.lo = 0;
        }
    }

    pub fn field(&self) -> F {
        self.f
    }

    pub fn nvars(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Inclusive range of occupied spots.
    pub fn spot_range(&self) -> Option<(i32, i32)> {
        if self.gens.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.gens.len() as i32 - 1))
        }
    }

    pub fn gens_at(&self, p: i32) -> &[Multidegree] {
        let k = p - self.lo;
        if k < 0 || k as usize >= self.gens.len() {
            &[]
        } else {
            &self.gens[k as usize]
        }
    }

    pub fn total_rank(&self) -> usize {
        self.gens.iter().map(|g| g.len()).sum()
    }

    /// Coefficient matrix of `d^p`.
    pub fn diff_at(&self, p: i32) -> Matrix<F::Elem> {
        let k = p - self.lo;
        if k >= 0 && (k as usize) < self.diffs.len() {
            self.diffs[k as usize].clone()
        } else {
            Matrix::zeros(&self.f, self.gens_at(p + 1).len(), self.gens_at(p).len())
        }
    }

    /// `d^{p+1} d^p = 0` for every `p`. Because each entry's monomial is
    /// forced by the degrees, this is a product of coefficient matrices.
    pub fn check_d2(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let m = self.diffs[k].mul(&self.f, &self.diffs[k - 1]);
            if !m.is_zero(&self.f) {
                return Err(Error::DifferentialCheckFailed(format!(
                    "free complex at spot {}",
                    self.lo + k as i32 - 1
                )));
            }
        }
        Ok(())
    }

    /// Smallest box containing every generator degree.
    pub fn generator_box(&self) -> Option<DegreeBox> {
        DegreeBox::hull(self.d, self.gens.iter().flatten())
    }

    /// Indices of generators at spot `p` with degree `<= c`.
    pub fn eval_basis(&self, p: i32, c: &Multidegree) -> Vec<usize> {
        self.gens_at(p)
            .iter()
            .enumerate()
            .filter(|(_, g)| g.leq(c))
            .map(|(k, _)| k)
            .collect()
    }

    /// The differential `d^p` on degree-`c` components.
    pub fn eval_diff(&self, p: i32, c: &Multidegree) -> Matrix<F::Elem> {
        let src = self.eval_basis(p, c);
        let tgt = self.eval_basis(p + 1, c);
        self.diff_at(p).select_rows(&tgt).select_cols(&src)
    }

    pub fn cohomology_dim_at(&self, p: i32, c: &Multidegree) -> Result<usize> {
        cohomology_dim(&self.f, &self.eval_diff(p - 1, c), &self.eval_diff(p, c))
    }

    /// `H^p` on every degree of `window`, with the maps induced by `x_i`
    /// between degrees that both lie in the window.
    pub fn cohomology_pieces(&self, p: i32, window: DegreeBox) -> Result<Pieces<F>> {
        let f = self.f;
        let mut data = BTreeMap::new();
        for c in window.points() {
            let h = cohomology(&f, &self.eval_diff(p - 1, &c), &self.eval_diff(p, &c))?;
            data.insert(c, h);
        }
        let mut pieces = Pieces::new(f, self.d, window);
        for (c, h) in &data {
            pieces.set_dim(*c, h.dim());
        }
        for (c, h) in &data {
            if h.dim() == 0 {
                continue;
            }
            let basis = self.eval_basis(p, c);
            for i in 0..self.d {
                let t = c.plus_unit(i);
                let Some(ht) = data.get(&t) else { continue };
                if ht.dim() == 0 {
                    continue;
                }
                let tbasis = self.eval_basis(p, &t);
                let cols: Vec<Vec<F::Elem>> = h
                    .representatives
                    .iter()
                    .map(|v| {
                        // inclusion of the degree-c basis into the degree-(c+e_i) basis
                        let mut w = vec![f.zero(); tbasis.len()];
                        let mut pos = 0;
                        for (k, &g) in basis.iter().enumerate() {
                            while tbasis[pos] != g {
                                pos += 1;
                            }
                            w[pos] = v[k].clone();
                        }
                        ht.class_of(&f, &w)
                    })
                    .collect();
                pieces.set_mult(i, *c, Matrix::from_columns(&f, ht.dim(), &cols));
            }
        }
        Ok(pieces)
    }

    /// True when no differential entry is a nonzero constant.
    pub fn is_minimal(&self) -> bool {
        self.first_unit_entry().is_none()
    }

    fn first_unit_entry(&self) -> Option<(usize, usize, usize)> {
        for (k, m) in self.diffs.iter().enumerate() {
            for r in 0..m.rows() {
                for s in 0..m.cols() {
                    if self.gens[k + 1][r] == self.gens[k][s] && !self.f.is_zero(m.get(r, s)) {
                        return Some((k, r, s));
                    }
                }
            }
        }
        None
    }

    /// Splits off contractible pieces `S(-a) -> S(-a)` one unit entry at a
    /// time (lowest spot first, then row, then column) until none remain.
    pub fn minimize(&self) -> Self {
        let f = self.f;
        let mut gens = self.gens.clone();
        let mut diffs = self.diffs.clone();
        for k in 0..diffs.len() {
            loop {
                let m = &diffs[k];
                let mut hit = None;
                'scan: for r in 0..m.rows() {
                    for s in 0..m.cols() {
                        if gens[k + 1][r] == gens[k][s] && !f.is_zero(m.get(r, s)) {
                            hit = Some((r, s));
                            break 'scan;
                        }
                    }
                }
                let Some((r, s)) = hit else { break };
                let inv = f.inv(m.get(r, s));
                let rows: Vec<usize> = (0..m.rows()).filter(|&x| x != r).collect();
                let cols: Vec<usize> = (0..m.cols()).filter(|&x| x != s).collect();
                let mut nd = Matrix::zeros(&f, rows.len(), cols.len());
                for (ri, &rr) in rows.iter().enumerate() {
                    let left = f.mul(m.get(rr, s), &inv);
                    for (ci, &cc) in cols.iter().enumerate() {
                        let mut v = m.get(rr, cc).clone();
                        if !f.is_zero(&left) {
                            let u = m.get(r, cc);
                            if !f.is_zero(u) {
                                v = f.sub_mul(&v, &left, u);
                            }
                        }
                        nd.set(ri, ci, v);
                    }
                }
                diffs[k] = nd;
                if k > 0 {
                    diffs[k - 1] = diffs[k - 1].select_rows(&cols);
                }
                if k + 1 < diffs.len() {
                    diffs[k + 1] = diffs[k + 1].select_cols(&rows);
                }
                gens[k].remove(s);
                gens[k + 1].remove(r);
            }
        }
        let mut out = Self {
            f,
            d: self.d,
            lo: self.lo,
            gens,
            diffs,
        };
        out.trim();
        out
    }

    /// Generator multiplicities `beta^{p,a}`; meaningful for minimal complexes.
    pub fn generator_table(&self) -> BettiTable {
        let mut t = BettiTable::new();
        for (k, g) in self.gens.iter().enumerate() {
            for a in g {
                t.add(self.lo + k as i32, *a, 1);
            }
        }
        t
    }

    /// Betti table of the complex: generator table after minimization.
    pub fn betti(&self) -> BettiTable {
        if self.is_minimal() {
            self.generator_table()
        } else {
            self.minimize().generator_table()
        }
    }

    /// The `l`-th linear strand: generators at spot `i` with `|deg| = l - i`
    /// and the linear entries between them.
    pub fn linear_strand(&self, l: i32) -> Result<Self> {
        if let Some((k, _, _)) = self.first_unit_entry() {
            return Err(Error::NotMinimal {
                spot: self.lo + k as i32,
            });
        }
        let keep: Vec<Vec<usize>> = self
            .gens
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let i = self.lo + k as i32;
                (0..g.len()).filter(|&x| g[x].total() == l - i).collect()
            })
            .collect();
        let gens = self
            .gens
            .iter()
            .zip(&keep)
            .map(|(g, idx)| idx.iter().map(|&x| g[x]).collect())
            .collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, m)| m.select_rows(&keep[k + 1]).select_cols(&keep[k]))
            .collect();
        Self::new(self.f, self.d, self.lo, gens, diffs)
    }

    /// `C[p]`: spot `i` of the result is spot `i + p` of `self`, with the
    /// differential multiplied by `(-1)^p`.
    pub fn shift(&self, p: i32) -> Self {
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let f = self.f;
        let c = f.from_i64(sign);
        let mut out = self.clone();
        out.lo -= p;
        if sign == -1 {
            out.diffs = out.diffs.iter().map(|m| m.scale(&f, &c)).collect();
        }
        if out.gens.is_empty() {
            out.lo = 0;
        }
        out
    }

    /// Twist all generator degrees by `+b`.
    pub fn twist(&self, b: Multidegree) -> Self {
        let mut out = self.clone();
        for g in out.gens.iter_mut() {
            for a in g.iter_mut() {
                *a = *a + b;
            }
        }
        out
    }

    /// The complex `Hom(C, S(-u))` reindexed so that spot `n` is dual to spot
    /// `-n - shift`; generator `a` becomes `u - a` and differentials are
    /// transposed.
    pub fn dualize(&self, u: Multidegree, shift: i32) -> Self {
        let Some((lo, hi)) = self.spot_range() else {
            return Self::zero(self.f, self.d);
        };
        let mut gens = Vec::new();
        let mut diffs = Vec::new();
        // new spot n corresponds to old spot -n - shift; iterate old spots downward
        for p in (lo..=hi).rev() {
            gens.push(self.gens_at(p).iter().map(|a| u - *a).collect::<Vec<_>>());
        }
        for p in (lo..hi).rev() {
            diffs.push(self.diff_at(p).transpose());
        }
        Self::new(self.f, self.d, -hi - shift, gens, diffs)
            .expect("dual of a free complex is a free complex")
    }

    /// Euler characteristic of the degree-`c` component.
    pub fn euler_characteristic(&self, c: &Multidegree) -> i64 {
        let Some((lo, hi)) = self.spot_range() else {
            return 0;
        };
        (lo..=hi)
            .map(|p| {
                let n = self.eval_basis(p, c).len() as i64;
                if p.rem_euclid(2) == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }
}

impl<F: Field> GradedComplex<F> for FreeComplexS<F> {
    fn field(&self) -> F {
        self.f
    }

    fn nvars(&self) -> usize {
        self.d
    }

    fn spot_range(&self) -> Option<(i32, i32)> {
        FreeComplexS::spot_range(self)
    }

    fn dim(&self, p: i32, a: &Multidegree) -> usize {
        self.eval_basis(p, a).len()
    }

    fn mult(&self, p: i32, i: usize, a: &Multidegree) -> Matrix<F::Elem> {
        let src = self.eval_basis(p, a);
        let tgt = self.eval_basis(p, &a.plus_unit(i));
        let mut m = Matrix::zeros(&self.f, tgt.len(), src.len());
        for (c, g) in src.iter().enumerate() {
            let r = tgt.binary_search(g).expect("basis grows with the degree");
            m.set(r, c, self.f.one());
        }
        m
    }

    fn diff(&self, p: i32, a: &Multidegree) -> Matrix<F::Elem> {
        self.eval_diff(p, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;

    fn md(v: &[i32]) -> Multidegree {
        Multidegree::from_slice(v)
    }

    /// Koszul complex on two variables, spots -2..0.
    fn koszul2() -> FreeComplexS<Rationals> {
        let f = Rationals;
        FreeComplexS::new(
            f,
            2,
            -2,
            vec![
                vec![md(&[1, 1])],
                vec![md(&[1, 0]), md(&[0, 1])],
                vec![md(&[0, 0])],
            ],
            vec![
                Matrix::from_i64_rows(&f, &[vec![-1], vec![1]]),
                Matrix::from_i64_rows(&f, &[vec![1, 1]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn koszul_complex_is_exact_off_the_end() {
        let k = koszul2();
        k.check_d2().unwrap();
        assert!(k.is_minimal());
        assert_eq!(k.cohomology_dim_at(-1, &md(&[1, 1])).unwrap(), 0);
        assert_eq!(k.cohomology_dim_at(0, &md(&[0, 0])).unwrap(), 1);
        assert_eq!(k.cohomology_dim_at(0, &md(&[1, 0])).unwrap(), 0);
        assert_eq!(k.euler_characteristic(&md(&[2, 3])), 0);
    }

    #[test]
    fn minimize_cancels_units() {
        let f = Rationals;
        // S(-e1) --[1]--> S(-e1) --[x1]--> S
        let c = FreeComplexS::new(
            f,
            1,
            -2,
            vec![vec![md(&[1])], vec![md(&[1])], vec![md(&[0])]],
            vec![
                Matrix::from_i64_rows(&f, &[vec![1]]),
                Matrix::from_i64_rows(&f, &[vec![0]]),
            ],
        )
        .unwrap();
        let m = c.minimize();
        assert_eq!(m.total_rank(), 1);
        assert!(m.is_minimal());
    }

    #[test]
    fn strand_and_dual() {
        let k = koszul2();
        let s = k.linear_strand(0).unwrap();
        assert_eq!(s.total_rank(), 4);
        assert!(k.linear_strand(1).unwrap().is_zero());
        let dual = k.dualize(Multidegree::ones(2), 2);
        dual.check_d2().unwrap();
        assert_eq!(dual.spot_range(), Some((-2, 0)));
        assert_eq!(dual.gens_at(-2), &[md(&[1, 1])]);
    }

    #[test]
    fn rejects_bad_entries() {
        let f = Rationals;
        let bad = FreeComplexS::new(
            f,
            1,
            0,
            vec![vec![md(&[0])], vec![md(&[1])]],
            vec![Matrix::from_i64_rows(&f, &[vec![1]])],
        );
        assert!(bad.is_err());
    }
}
