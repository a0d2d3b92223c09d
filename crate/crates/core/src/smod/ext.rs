use std::collections::BTreeMap;

use super::SqSModule;
use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::grading::{DegreeBox, Multidegree, Subset};

/// Local cohomology Hilbert data of a squarefree module, read through the
/// duality `dim H^i_m(M)_a = dim Ext^{-i}(M, D_S)_{-a}` with
/// `D_S = S(-1)[d]`. For squarefree `M` the right side is the component of
/// `X_i = Ext^{-i}(M, D_S)` at `supp(-a)` when `a <= 0`, and zero otherwise.
#[derive(Clone, Debug)]
pub struct LocalCohomology {
    pub d: usize,
    /// `ext_dims[i][F] = dim (X_i)_F`.
    pub ext_dims: Vec<Vec<usize>>,
}

impl LocalCohomology {
    /// `dim H^i_m(M)_a`.
    pub fn hilbert(&self, i: usize, a: &Multidegree) -> usize {
        if i > self.d || (0..self.d).any(|k| a.get(k) > 0) {
            return 0;
        }
        self.ext_dims[i][a.negative_support().index()]
    }

    /// Whether `H^i_m(M)_k != 0` for the total degree `k`.
    pub fn nonzero_in_total_degree(&self, i: usize, k: i32) -> bool {
        if i > self.d || k > 0 {
            return false;
        }
        Subset::all(self.d).any(|s| {
            self.ext_dims[i][s.index()] > 0
                && if s.is_empty() { k == 0 } else { -k >= s.len() as i32 }
        })
    }

    /// Top nonvanishing total degree of `H^i_m(M)`: `-min{|F| : (X_i)_F != 0}`.
    pub fn end_degree(&self, i: usize) -> Option<i32> {
        Subset::all(self.d)
            .filter(|s| self.ext_dims[i][s.index()] > 0)
            .map(|s| -(s.len() as i32))
            .max()
    }

    /// `max { i + j | H^i_m(M)_j != 0 }`.
    pub fn reg(&self) -> Option<i32> {
        (0..=self.d)
            .filter_map(|i| self.end_degree(i).map(|e| i as i32 + e))
            .max()
    }

    /// All nonzero `(i, a)` with `a` in the window.
    pub fn hilbert_window(&self, window: &DegreeBox) -> BTreeMap<(usize, Multidegree), usize> {
        let mut out = BTreeMap::new();
        for a in window.points() {
            for i in 0..=self.d {
                let h = self.hilbert(i, &a);
                if h > 0 {
                    out.insert((i, a), h);
                }
            }
        }
        out
    }

    /// The boundary criterion at level `r` for modules: `H^0_m(M)_{>= r+1} = 0`
    /// and `H^i_m(M)_{r+1-i} = 0` for `i >= 1`.
    pub fn boundary_vanishing(&self, r: i32) -> bool {
        let h0 = (r + 1..=0).any(|k| self.nonzero_in_total_degree(0, k));
        let hi = (1..=self.d).any(|i| self.nonzero_in_total_degree(i, r + 1 - i as i32));
        !h0 && !hi
    }
}

/// Depth, dimension and the Cohen-Macaulay flags of a squarefree module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthDim {
    pub depth: usize,
    pub dim: usize,
    pub proj_dim: usize,
    pub cohen_macaulay: bool,
    pub sequentially_cm: bool,
}

impl<F: Field> SqSModule<F> {
    /// `X_i = Ext^{-i}_S(M, D_S)` for `i = 0..=d`, from the dual of the
    /// minimal resolution: `Hom(S(-G), S(-1)) = S(-([d] ∖ G))`, with spot
    /// `-t` of the resolution landing in spot `t - d`.
    pub fn ext_against_dualizing(&self) -> Vec<SqSModule<F>> {
        let d = self.nvars();
        let res = self.min_free_resolution();
        let dual = res.complex.dualize(Multidegree::ones(d), d as i32);
        (0..=d)
            .map(|i| {
                dual.cohomology_pieces(-(i as i32), DegreeBox::squarefree(d))
                    .expect("dual complex has d^2 = 0")
                    .to_squarefree(Multidegree::zero(d))
            })
            .collect()
    }

    /// `Ext^j_S(M, S)` up to the twist by `-1`, i.e. `X_{d-j}`.
    pub fn ext_s(&self, j: usize) -> SqSModule<F> {
        let d = self.nvars();
        assert!(j <= d);
        self.ext_against_dualizing().swap_remove(d - j)
    }

    pub fn local_cohomology(&self) -> LocalCohomology {
        let d = self.nvars();
        let ext = self.ext_against_dualizing();
        LocalCohomology {
            d,
            ext_dims: ext
                .iter()
                .map(|x| Subset::all(d).map(|s| x.dim(s)).collect())
                .collect(),
        }
    }

    /// Krull dimension as `max { i | X_i != 0 }` (equivalently `d` minus the grade).
    pub fn krull_dim(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroModule);
        }
        let ext = self.ext_against_dualizing();
        Ok((0..ext.len())
            .rev()
            .find(|&i| !ext[i].is_zero())
            .expect("a nonzero module has a nonzero Ext"))
    }

    pub fn depth_dim_cm(&self) -> Result<DepthDim> {
        if self.is_zero() {
            return Err(Error::ZeroModule);
        }
        let d = self.nvars();
        let pd = self.proj_dim().expect("nonzero module");
        let depth = d - pd;
        let ext = self.ext_against_dualizing();
        let dim = (0..=d).rev().find(|&i| !ext[i].is_zero()).unwrap();
        let mut seq = true;
        for (i, x) in ext.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let xd = d - x.proj_dim().unwrap();
            let xdim = x.krull_dim()?;
            if xd != i || xdim != i {
                seq = false;
                break;
            }
        }
        Ok(DepthDim {
            depth,
            dim,
            proj_dim: pd,
            cohen_macaulay: depth == dim,
            sequentially_cm: seq,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::grading::{MonomialIdeal, Side};

    fn s(v: &[usize]) -> Subset {
        Subset::from_indices(v)
    }

    #[test]
    fn ext_of_free_and_residue() {
        let f = Rationals;
        let d = 3;
        let free = SqSModule::free(f, d, &[Subset::EMPTY]);
        let x = free.ext_against_dualizing();
        for (i, m) in x.iter().enumerate() {
            assert_eq!(m.is_zero(), i != d);
        }
        assert!(x[d].same_data(&SqSModule::free(f, d, &[Subset::full(d)])));
        let k = SqSModule::residue_field(f, d);
        let x = k.ext_against_dualizing();
        assert_eq!(x[0].total_dim(), 1);
        assert!(x[1..].iter().all(|m| m.is_zero()));
    }

    #[test]
    fn ext_of_hypersurface() {
        let f = Rationals;
        let m = SqSModule::from_ideal(f, &MonomialIdeal::new(Side::S, 3, [s(&[0, 1])]), true);
        let e1 = m.ext_s(1);
        assert!(!e1.is_zero());
        let dd = e1.depth_dim_cm().unwrap();
        assert_eq!(dd.dim, 2);
        assert!(dd.cohen_macaulay);
        assert!(m.ext_s(0).is_zero() && m.ext_s(2).is_zero() && m.ext_s(3).is_zero());
    }

    #[test]
    fn depth_examples() {
        let f = Rationals;
        let d = 3;
        let free = SqSModule::free(f, d, &[Subset::EMPTY]).depth_dim_cm().unwrap();
        assert_eq!((free.depth, free.dim, free.cohen_macaulay, free.sequentially_cm), (3, 3, true, true));
        let k = SqSModule::residue_field(f, d).depth_dim_cm().unwrap();
        assert_eq!((k.depth, k.dim, k.cohen_macaulay, k.sequentially_cm), (0, 0, true, true));
        let i = MonomialIdeal::new(Side::S, 3, [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]);
        let pts = SqSModule::from_ideal(f, &i, true).depth_dim_cm().unwrap();
        assert_eq!((pts.depth, pts.dim, pts.cohen_macaulay), (1, 1, true));
    }

    #[test]
    fn local_cohomology_examples() {
        let f = Rationals;
        let k = SqSModule::residue_field(f, 3).local_cohomology();
        assert_eq!(k.hilbert(0, &Multidegree::zero(3)), 1);
        assert_eq!(k.reg(), Some(0));
        let s2 = SqSModule::free(f, 2, &[Subset::EMPTY]).local_cohomology();
        assert_eq!(s2.hilbert(2, &Multidegree::from_slice(&[-1, -1])), 1);
        assert_eq!(s2.hilbert(2, &Multidegree::from_slice(&[-3, -1])), 1);
        assert_eq!(s2.hilbert(2, &Multidegree::from_slice(&[0, -1])), 0);
        assert_eq!(s2.reg(), Some(0));
        let i = MonomialIdeal::new(Side::S, 3, [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]);
        let m = SqSModule::from_ideal(f, &i, true);
        assert_eq!(m.local_cohomology().reg(), Some(1));
        assert_eq!(m.reg(), Some(1));
    }
}
