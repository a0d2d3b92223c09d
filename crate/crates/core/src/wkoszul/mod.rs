//! Weakly Koszul modules over `E` and the invariant `lpd`.
//!
//! Everything is read off `T = F(D N)`: `N` is weakly Koszul exactly when
//! `reg H^p(T) <= -p` for every `p`, and `lpd N = max_p (reg H^p(T) + p)`.

mod filtration;

use std::collections::BTreeMap;

use crate::bgg::{cohomology_f, functor_f_module, EComplex};
use crate::emod::EModule;
use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::smod::{betti_via_koszul, SqSModule};

pub use filtration::{wk_filtration, Filtration};

/// `(p, reg H^p(F(D N)))` for every nonzero `H^p`, read on the generator box
/// of `F(D N)` (which bounds all Betti degrees of each `H^p`).
pub fn dual_image_regularities<F: Field>(n: &EModule<F>) -> Result<Vec<(i32, i32)>> {
    if n.is_zero() {
        return Err(Error::ZeroModule);
    }
    let t = functor_f_module(&n.dual())?.complex;
    let (Some((lo, hi)), Some(bx)) = (t.spot_range(), t.generator_box()) else {
        return Ok(Vec::new());
    };
    let points = bx.points();
    let mut out = Vec::new();
    for p in lo..=hi {
        let pieces = t.cohomology_pieces(p, bx)?;
        if pieces.is_zero() {
            continue;
        }
        let betti = betti_via_koszul(&pieces, &points)?;
        out.push((p, betti.reg().expect("nonzero module has a generator")));
    }
    Ok(out)
}

/// The same data through the squarefree realizations of `H^p(F(D N))`;
/// only for squarefree `N`.
pub fn dual_image_regularities_sqf<F: Field>(n: &EModule<F>) -> Result<Vec<(i32, i32)>> {
    if n.is_zero() {
        return Err(Error::ZeroModule);
    }
    Ok(cohomology_f(&EComplex::single(n.dual(), 0))?.regs())
}

fn regularities<F: Field>(n: &EModule<F>) -> Result<Vec<(i32, i32)>> {
    if n.is_squarefree() {
        dual_image_regularities_sqf(n)
    } else {
        dual_image_regularities(n)
    }
}

/// Per-spot regularities and the verdict `reg H^p <= -p` for all `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeaklyKoszulCertificateE {
    pub regs: Vec<(i32, i32)>,
    pub holds: bool,
}

pub fn is_weakly_koszul_e<F: Field>(n: &EModule<F>) -> Result<WeaklyKoszulCertificateE> {
    let regs = regularities(n)?;
    let holds = regs.iter().all(|&(p, r)| r <= -p);
    Ok(WeaklyKoszulCertificateE { regs, holds })
}

/// Truncated check: every `N_<i>` has a linear resolution for `k` steps.
/// A `false` is conclusive; a `true` only covers those steps.
pub fn is_weakly_koszul_direct<F: Field>(n: &EModule<F>, k: usize) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::ZeroModule);
    }
    for i in n.generator_total_degrees() {
        let part = n.degree_part_submodule(i).module;
        if !part.resolution_prefix(k)?.betti.is_linear(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One step of the syzygy iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    /// Weakly Koszul by the exact test.
    pub weakly_koszul: bool,
    /// The truncated direct test, when it was run.
    pub direct: Option<bool>,
    /// Total dimension after splitting off free summands.
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpdReport {
    pub value_formula: i32,
    pub value_sqf: Option<i32>,
    /// Smallest traced step whose syzygy is weakly Koszul (`None` if none
    /// within the traced range).
    pub lower_bound_direct: Option<i32>,
    /// `p -> reg H^p(F(D N)) + p`.
    pub per_i_table: BTreeMap<i32, i32>,
    pub syzygy_trace: Vec<TraceStep>,
    /// Steps past the formula value were skipped because a syzygy exceeded
    /// `LpdOptions::max_trace_dim`.
    pub trace_truncated: bool,
    /// `i -> depth Ext^{d-i}(S(D N), S)` for nonzero Ext, squarefree `N` only.
    pub sqf_depths: BTreeMap<usize, usize>,
}

impl LpdReport {
    pub fn routes_agree(&self) -> bool {
        self.value_sqf.is_none_or(|v| v == self.value_formula)
            && self.lower_bound_direct == Some(self.value_formula)
    }

    /// Once a syzygy is weakly Koszul, all later ones are.
    pub fn omega_monotone(&self) -> bool {
        let mut seen = false;
        for s in &self.syzygy_trace {
            if seen && !s.weakly_koszul {
                return false;
            }
            seen |= s.weakly_koszul;
        }
        true
    }

    /// The truncated direct test never contradicts a negative exact verdict
    /// nor refutes a positive one.
    pub fn direct_consistent(&self) -> bool {
        self.syzygy_trace
            .iter()
            .all(|s| s.direct.is_none_or(|v| v || !s.weakly_koszul))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LpdOptions {
    /// Syzygy steps traced past the formula value.
    pub beyond: usize,
    /// Resolution depth for the direct test along the trace; `None` skips it.
    pub direct_steps: Option<usize>,
    /// Largest syzygy (total dimension) examined past the formula value.
    pub max_trace_dim: Option<usize>,
}

/// Past this size the exact test on a non-squarefree syzygy needs several GB.
pub const DEFAULT_MAX_TRACE_DIM: usize = 1000;

impl Default for LpdOptions {
    fn default() -> Self {
        Self {
            beyond: 1,
            direct_steps: None,
            max_trace_dim: Some(DEFAULT_MAX_TRACE_DIM),
        }
    }
}

pub fn lpd<F: Field>(n: &EModule<F>) -> Result<LpdReport> {
    lpd_with(n, LpdOptions::default())
}

pub fn lpd_with<F: Field>(n: &EModule<F>, opts: LpdOptions) -> Result<LpdReport> {
    let regs = regularities(n)?;
    let per_i_table: BTreeMap<i32, i32> = regs.iter().map(|&(p, r)| (p, r + p)).collect();
    let value_formula = *per_i_table.values().max().expect("nonzero module");
    let (value_sqf, sqf_depths) = if n.is_squarefree() {
        let (v, depths) = lpd_sqf(n)?;
        (Some(v), depths)
    } else {
        (None, BTreeMap::new())
    };
    let last = value_formula.max(0) as usize + opts.beyond;
    let mut trace = Vec::new();
    let mut cur = n.strip_free_summands().0;
    let mut trace_truncated = false;
    for step in 0..=last {
        if step as i32 > value_formula && opts.max_trace_dim.is_some_and(|m| cur.total_dim() > m) {
            trace_truncated = true;
            break;
        }
        let (weakly_koszul, direct) = if cur.is_zero() {
            (true, opts.direct_steps.map(|_| true))
        } else {
            let wk = is_weakly_koszul_e(&cur)?.holds;
            let direct = match opts.direct_steps {
                Some(k) => Some(is_weakly_koszul_direct(&cur, k)?),
                None => None,
            };
            (wk, direct)
        };
        trace.push(TraceStep {
            step,
            weakly_koszul,
            direct,
            dim: cur.total_dim(),
        });
        if step < last && !cur.is_zero() {
            cur = cur.syzygy()?.kernel.module.strip_free_summands().0;
        }
    }
    let lower_bound_direct = trace
        .iter()
        .find(|s| s.weakly_koszul)
        .map(|s| s.step as i32);
    Ok(LpdReport {
        value_formula,
        value_sqf,
        lower_bound_direct,
        per_i_table,
        syzygy_trace: trace,
        trace_truncated,
        sqf_depths,
    })
}

/// `max { i - depth Ext^{d-i}(S(D N), S) }` over nonzero Ext modules,
/// together with the depths used.
pub fn lpd_sqf<F: Field>(n: &EModule<F>) -> Result<(i32, BTreeMap<usize, usize>)> {
    if n.is_zero() {
        return Err(Error::ZeroModule);
    }
    if !n.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let m = SqSModule::from_emodule(&n.dual())?;
    let mut depths = BTreeMap::new();
    for (i, x) in m.ext_against_dualizing().into_iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        depths.insert(i, x.depth_dim_cm()?.depth);
    }
    let v = depths
        .iter()
        .map(|(&i, &dep)| i as i32 - dep as i32)
        .max()
        .expect("a nonzero module has a nonzero Ext");
    Ok((v, depths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};
    use crate::grading::{MonomialIdeal, Multidegree, Side, Subset};

    fn s(v: &[usize]) -> Subset {
        Subset::from_indices(v)
    }

    #[test]
    fn exterior_algebra_and_residue_field() {
        let f = Rationals;
        let e = EModule::from_ideal(f, &MonomialIdeal::zero(Side::E, 3), true);
        assert!(is_weakly_koszul_e(&e).unwrap().holds);
        let r = lpd(&e).unwrap();
        assert_eq!(r.value_formula, 0);
        assert!(r.routes_agree(), "{r:?}");
        let k = EModule::residue_field(f, Multidegree::zero(3));
        assert!(is_weakly_koszul_e(&k).unwrap().holds);
        assert!(is_weakly_koszul_direct(&k, 3).unwrap());
        assert_eq!(lpd(&k).unwrap().value_formula, 0);
    }

    #[test]
    fn sqf_and_box_routes_agree() {
        let f = PrimeField::new(32003).unwrap();
        let j = MonomialIdeal::new(Side::E, 4, [s(&[0, 1]), s(&[2, 3])]);
        let n = EModule::from_ideal(f, &j, true);
        assert_eq!(
            dual_image_regularities(&n).unwrap(),
            dual_image_regularities_sqf(&n).unwrap()
        );
    }

    #[test]
    fn non_weakly_koszul_example() {
        // neither E/(y1y2, y3y4) nor the ideal itself is weakly Koszul
        let f = Rationals;
        let j = MonomialIdeal::new(Side::E, 4, [s(&[0, 1]), s(&[2, 3])]);
        let n = EModule::from_ideal(f, &j, true);
        let r = lpd_with(
            &n,
            LpdOptions {
                direct_steps: Some(3),
                ..LpdOptions::default()
            },
        )
        .unwrap();
        assert_eq!(r.value_formula, 2, "{r:?}");
        assert!(r.routes_agree(), "{r:?}");
        assert!(r.omega_monotone());
        assert!(r.direct_consistent());
        assert!(!r.syzygy_trace[0].weakly_koszul);
        assert_eq!(r.syzygy_trace[0].direct, Some(false));
        assert!(!r.syzygy_trace[1].weakly_koszul);
    }

    #[test]
    fn maximal_ideal_is_linear() {
        let f = Rationals;
        let m = EModule::from_ideal(f, &MonomialIdeal::maximal(Side::E, 3), false);
        assert!(is_weakly_koszul_direct(&m, 3).unwrap());
        assert!(is_weakly_koszul_e(&m).unwrap().holds);
    }
}
