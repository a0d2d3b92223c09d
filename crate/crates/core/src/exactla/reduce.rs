use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Reduced row echelon form with its pivot columns. Zero rows are dropped,
/// so `rref.rows() == pivots.len()`.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub rref: Matrix<E>,
    pub pivots: Vec<usize>,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination, always choosing the first usable row as pivot
/// so the output depends only on the input matrix.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Echelon<F::Elem> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in c..cols {
                let t = a.get(p, j).clone();
                let u = a.get(r, j).clone();
                a.set(p, j, u);
                a.set(r, j, t);
            }
        }
        let inv = f.inv(a.get(r, c));
        if !f.is_one(&inv) {
            for x in a.row_mut(r)[c..].iter_mut() {
                if !f.is_zero(x) {
                    *x = f.mul(x, &inv);
                }
            }
        }
        let pivot_row: Vec<F::Elem> = a.row(r)[c..].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            let row = &mut a.row_mut(i)[c..];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !f.is_zero(p) {
                    *x = f.sub_mul(x, &factor, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let keep: Vec<usize> = (0..r).collect();
    Echelon {
        rref: a.select_rows(&keep),
        pivots,
    }
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    // Eliminating on the shorter side is cheaper and gives the same rank.
    if m.rows() > m.cols() {
        rref(f, &m.transpose()).rank()
    } else {
        rref(f, m).rank()
    }
}

/// Basis of the right null space, one vector per non-pivot column: the free
/// coordinate is 1 and the pivot coordinates are read off the reduced form.
pub fn kernel_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let ech = rref(f, m);
    kernel_from_echelon(f, &ech, m.cols())
}

fn kernel_from_echelon<F: Field>(
    f: &F,
    ech: &Echelon<F::Elem>,
    cols: usize,
) -> Vec<Vec<F::Elem>> {
    let mut is_pivot = vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&j| !is_pivot[j]) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &p) in ech.pivots.iter().enumerate() {
            let e = ech.rref.get(r, free);
            if !f.is_zero(e) {
                v[p] = f.neg(e);
            }
        }
        out.push(v);
    }
    out
}

/// Basis of the column space: the columns of `m` at pivot positions.
pub fn column_space_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let ech = rref(f, m);
    ech.pivots.iter().map(|&j| m.column(j)).collect()
}

/// Indices of the vectors (in order) that are not in the span of `base` plus
/// the earlier chosen vectors. Used to pick canonical complements.
pub fn greedy_extend<F: Field>(
    f: &F,
    dim: usize,
    base: &[Vec<F::Elem>],
    candidates: &[Vec<F::Elem>],
) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    let mut chosen = Vec::new();
    let reduce_in = |v: &[F::Elem], basis: &mut Vec<(usize, Vec<F::Elem>)>| -> bool {
        let mut w = v.to_vec();
        for (p, b) in basis.iter() {
            if !f.is_zero(&w[*p]) {
                let c = w[*p].clone();
                for (x, y) in w.iter_mut().zip(b) {
                    if !f.is_zero(y) {
                        *x = f.sub_mul(x, &c, y);
                    }
                }
            }
        }
        match (0..dim).find(|&i| !f.is_zero(&w[i])) {
            None => false,
            Some(p) => {
                let inv = f.inv(&w[p]);
                for x in w.iter_mut() {
                    *x = f.mul(x, &inv);
                }
                // keep the stored vectors reduced against each other at pivots
                for (_, b) in basis.iter_mut() {
                    if !f.is_zero(&b[p]) {
                        let c = b[p].clone();
                        for (x, y) in b.iter_mut().zip(&w) {
                            if !f.is_zero(y) {
                                *x = f.sub_mul(x, &c, y);
                            }
                        }
                    }
                }
                basis.push((p, w));
                true
            }
        }
    };
    for v in base {
        reduce_in(v, &mut basis);
    }
    for (k, v) in candidates.iter().enumerate() {
        if reduce_in(v, &mut basis) {
            chosen.push(k);
        }
    }
    chosen
}

/// Standard basis vectors completing the span of `base` to the whole space.
pub fn standard_complement<F: Field>(f: &F, dim: usize, base: &[Vec<F::Elem>]) -> Vec<usize> {
    let std: Vec<Vec<F::Elem>> = (0..dim)
        .map(|i| {
            let mut v = vec![f.zero(); dim];
            v[i] = f.one();
            v
        })
        .collect();
    greedy_extend(f, dim, base, &std)
}

/// Left inverse `L` of a full-column-rank matrix `c`, so that `L * c = I`.
pub fn left_inverse<F: Field>(f: &F, c: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let n = c.rows();
    let k = c.cols();
    let mut aug = Matrix::zeros(f, n, k + n);
    for i in 0..n {
        for j in 0..k {
            aug.set(i, j, c.get(i, j).clone());
        }
        aug.set(i, k + i, f.one());
    }
    let ech = rref(f, &aug);
    assert!(
        ech.pivots.len() >= k && ech.pivots[..k].iter().enumerate().all(|(i, &p)| i == p),
        "left_inverse: matrix does not have full column rank"
    );
    let rows: Vec<usize> = (0..k).collect();
    let cols: Vec<usize> = (k..k + n).collect();
    ech.rref.select_rows(&rows).select_cols(&cols)
}

/// Cohomology at the middle of `d_in: K^m -> K^n` and `d_out: K^n -> K^k`,
/// with representatives spanning a complement of the image in the kernel,
/// plus the data needed to take coordinates of any cycle.
#[derive(Clone, Debug)]
pub struct Cohomology<E> {
    pub ambient: usize,
    pub boundaries: Vec<Vec<E>>,
    pub representatives: Vec<Vec<E>>,
    /// Left inverse of `[boundaries | representatives]`.
    coords: Matrix<E>,
}

impl<E: Clone + PartialEq> Cohomology<E> {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of a cycle `z` in the representative basis.
    pub fn class_of<F: Field<Elem = E>>(&self, f: &F, z: &[E]) -> Vec<E> {
        let b = self.boundaries.len();
        let all = self.coords.apply(f, z);
        all[b..].to_vec()
    }
}

pub fn cohomology<F: Field>(
    f: &F,
    d_in: &Matrix<F::Elem>,
    d_out: &Matrix<F::Elem>,
) -> Result<Cohomology<F::Elem>> {
    let n = d_out.cols();
    if d_in.rows() != n {
        return Err(Error::InvalidInput(format!(
            "cohomology: incoming map lands in dimension {} but outgoing map starts at {}",
            d_in.rows(),
            n
        )));
    }
    if d_in.cols() > 0 && d_out.rows() > 0 && !d_out.mul(f, d_in).is_zero(f) {
        return Err(Error::CompositionNotZero);
    }
    let boundaries = column_space_basis(f, d_in);
    let cycles = kernel_basis(f, d_out);
    let picked = greedy_extend(f, n, &boundaries, &cycles);
    let representatives: Vec<Vec<F::Elem>> = picked.iter().map(|&k| cycles[k].clone()).collect();
    let mut cols = boundaries.clone();
    cols.extend(representatives.iter().cloned());
    let coords = if cols.is_empty() {
        Matrix::zeros(f, 0, n)
    } else {
        left_inverse(f, &Matrix::from_columns(f, n, &cols))
    };
    Ok(Cohomology {
        ambient: n,
        boundaries,
        representatives,
        coords,
    })
}

/// Just the dimension of the cohomology, skipping representatives.
pub fn cohomology_dim<F: Field>(
    f: &F,
    d_in: &Matrix<F::Elem>,
    d_out: &Matrix<F::Elem>,
) -> Result<usize> {
    let n = d_out.cols();
    if d_in.rows() != n {
        return Err(Error::InvalidInput(format!(
            "cohomology: incoming map lands in dimension {} but outgoing map starts at {}",
            d_in.rows(),
            n
        )));
    }
    if d_in.cols() > 0 && d_out.rows() > 0 && !d_out.mul(f, d_in).is_zero(f) {
        return Err(Error::CompositionNotZero);
    }
    Ok(n - rank(f, d_out) - rank(f, d_in))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rat, Rationals};

    fn q(rows: &[Vec<i64>]) -> Matrix<Rat> {
        Matrix::from_i64_rows(&Rationals, rows)
    }

    #[test]
    fn rank_examples() {
        let f = Rationals;
        assert_eq!(rank(&f, &Matrix::identity(&f, 2)), 2);
        assert_eq!(rank(&f, &Matrix::zeros(&f, 3, 4)), 0);
        assert_eq!(rank(&f, &q(&[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let rows = vec![vec![2, 0], vec![0, 1]];
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(rank(&Rationals, &q(&rows)), 2);
        assert_eq!(rank(&f2, &Matrix::from_i64_rows(&f2, &rows)), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = Rationals;
        assert!(kernel_basis(&f, &Matrix::identity(&f, 3)).is_empty());
        assert_eq!(kernel_basis(&f, &Matrix::zeros(&f, 2, 3)).len(), 3);
        let k = kernel_basis(&f, &q(&[vec![1, 1]]));
        assert_eq!(k, vec![vec![Rat::from_int(-1), Rat::from_int(1)]]);
    }

    #[test]
    fn cohomology_examples() {
        let f = Rationals;
        let z3 = Matrix::zeros(&f, 3, 3);
        assert_eq!(cohomology(&f, &z3, &z3).unwrap().dim(), 3);
        let id = Matrix::identity(&f, 3);
        assert_eq!(cohomology(&f, &id, &z3).unwrap().dim(), 0);
        // Koszul complex of K over K[x1,x2] at degree (1,1): K -> K^2 -> K.
        let d_in = q(&[vec![1], vec![-1]]);
        let d_out = q(&[vec![1, 1]]);
        assert_eq!(cohomology(&f, &d_in, &d_out).unwrap().dim(), 0);
        assert!(matches!(
            cohomology(&f, &id, &id),
            Err(Error::CompositionNotZero)
        ));
    }

    #[test]
    fn class_coordinates() {
        let f = Rationals;
        let d_in = q(&[vec![1], vec![1], vec![0]]);
        let d_out = Matrix::zeros(&f, 0, 3);
        let h = cohomology(&f, &d_in, &d_out).unwrap();
        assert_eq!(h.dim(), 2);
        let z = vec![Rat::from_int(3), Rat::from_int(3), Rat::zero()];
        assert!(h.class_of(&f, &z).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn left_inverse_works() {
        let f = Rationals;
        let c = q(&[vec![1, 0], vec![2, 1], vec![0, 3]]);
        let l = left_inverse(&f, &c);
        assert_eq!(l.mul(&f, &c), Matrix::identity(&f, 2));
    }
}
