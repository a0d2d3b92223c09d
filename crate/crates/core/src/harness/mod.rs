//! Cross-route oracles and the verification suites built on them.

pub mod random;
mod suites;
mod charsearch;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bgg::betti_of_complex_via_g;
use crate::emod::EModule;
use crate::error::{Error, Result};
use crate::exactla::{Field, FieldConfig};
use crate::grading::{Multidegree, Subset};
use crate::smod::{betti_via_koszul, SqSModule};
use crate::wkoszul::{lpd_with, LpdOptions, LpdReport};

pub use charsearch::{char_search, homology_ranks, CharWitness};
pub use suites::{run_suite, sharpness_module, CHAR_SEARCH_TRIES, SUITES};

/// Values of one quantity computed along several routes.
#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
    pub routes: Vec<String>,
    pub values: Vec<Value>,
    /// First pair of routes that disagree, if any.
    pub divergence: Option<String>,
    /// Enough data to rebuild the input.
    pub instance: Value,
}

impl OracleComparison {
    fn new(routes: &[&str], values: Vec<Value>, instance: Value) -> Self {
        let mut divergence = None;
        'outer: for a in 0..values.len() {
            for b in a + 1..values.len() {
                if values[a].is_null() || values[b].is_null() {
                    continue;
                }
                if values[a] != values[b] {
                    divergence = Some(format!(
                        "{} = {} but {} = {}",
                        routes[a], values[a], routes[b], values[b]
                    ));
                    break 'outer;
                }
            }
        }
        Self {
            routes: routes.iter().map(|s| s.to_string()).collect(),
            values,
            divergence,
            instance,
        }
    }

    pub fn agree(&self) -> bool {
        self.divergence.is_none()
    }

    pub fn with_instance(mut self, instance: Value) -> Self {
        self.instance = instance;
        self
    }
}

pub(crate) fn squarefree_degrees(d: usize) -> Vec<Multidegree> {
    Subset::all(d).map(|s| s.to_degree(d)).collect()
}

/// The component dimensions of a squarefree module, by subset.
pub fn dump_s<F: Field>(m: &SqSModule<F>) -> Value {
    let d = m.nvars();
    let dims: Vec<Value> = Subset::all(d)
        .filter(|s| m.dim(*s) > 0)
        .map(|s| json!({"set": s.to_one_based(), "dim": m.dim(s)}))
        .collect();
    json!({"d": d, "char": m.field().characteristic(), "dims": dims})
}

pub fn dump_e<F: Field>(n: &EModule<F>) -> Value {
    let dims: Vec<Value> = n
        .dims()
        .iter()
        .map(|(a, k)| json!({"deg": a, "dim": k}))
        .collect();
    json!({"d": n.nvars(), "char": n.field().characteristic(), "dims": dims})
}

/// Minimal resolution, Koszul homology and the `G` functor.
pub fn compare_betti_routes<F: Field>(m: &SqSModule<F>) -> Result<OracleComparison> {
    let degs = squarefree_degrees(m.nvars());
    let res = m.min_free_resolution().betti;
    let kos = betti_via_koszul(m, &degs)?;
    let g = betti_of_complex_via_g(m, &degs)?;
    Ok(OracleComparison::new(
        &["min_free_resolution", "betti_via_koszul", "betti_via_g"],
        vec![res.to_json(), kos.to_json(), g.to_json()],
        dump_s(m),
    ))
}

/// The `lpd` value by the cohomology formula, the squarefree Ext formula
/// and the syzygy iteration (run one step past the formula's value).
pub fn compare_lpd_routes<F: Field>(n: &EModule<F>) -> Result<OracleComparison> {
    Ok(compare_lpd_report(n, LpdOptions::default())?.0)
}

pub(crate) fn compare_lpd_report<F: Field>(
    n: &EModule<F>,
    opts: LpdOptions,
) -> Result<(OracleComparison, LpdReport)> {
    if n.is_zero() {
        return Err(Error::ZeroModule);
    }
    let r = lpd_with(n, opts)?;
    let direct = match r.lower_bound_direct {
        Some(v) => json!(v),
        // no traced syzygy was weakly Koszul: a divergence by itself
        None => json!(format!("> {}", r.syzygy_trace.len() - 1)),
    };
    let cmp = OracleComparison::new(
        &["formula", "sqf", "syzygy_iteration"],
        vec![json!(r.value_formula), json!(r.value_sqf), direct],
        dump_e(n),
    );
    Ok((cmp, r))
}

/// Parameters shared by all suites.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteConfig {
    pub d: usize,
    pub count: usize,
    pub seed: u64,
    pub field: FieldConfig,
    /// Resolution depth for truncated direct tests; `None` means `d + 2`.
    pub max_steps: Option<usize>,
    /// Enumerate every instance instead of sampling, where the suite supports it.
    pub exhaustive: bool,
}

impl SuiteConfig {
    pub fn new(d: usize, count: usize, seed: u64) -> Self {
        Self {
            d,
            count,
            seed,
            field: FieldConfig::rationals(),
            max_steps: None,
            exhaustive: false,
        }
    }

    pub fn steps(&self) -> usize {
        self.max_steps.unwrap_or(self.d + 2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub index: usize,
    pub instance: Value,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub config: SuiteConfig,
    pub instances: usize,
    pub failures: Vec<Failure>,
    #[serde(serialize_with = "as_secs")]
    pub wall_time: Duration,
    /// Observations that are reported but not checked.
    pub notes: Vec<String>,
}

fn as_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.instances > 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} instances, {} failures, {:.2}s (d={}, char={}, seed={})",
            self.name,
            self.instances,
            self.failures.len(),
            self.wall_time.as_secs_f64(),
            self.config.d,
            self.config.field.characteristic,
            self.config.seed
        )
    }
}

/// What a single instance check reports: named pass/fail flags.
pub(crate) type Checks = Vec<(&'static str, bool)>;

/// Runs `check` on every instance in parallel; results are ordered by index.
pub(crate) fn run_instances<S, C>(name: &str, config: SuiteConfig, specs: Vec<S>, check: C) -> SuiteResult
where
    S: Serialize + Sync,
    C: Fn(&S) -> Result<Checks> + Sync,
{
    let start = Instant::now();
    let outcomes: Vec<Option<String>> = specs
        .par_iter()
        .map(|s| match check(s) {
            Ok(checks) => {
                let bad: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
                (!bad.is_empty()).then(|| format!("failed: {}", bad.join(", ")))
            }
            Err(e) => Some(format!("error: {e}")),
        })
        .collect();
    let failures = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(index, o)| {
            o.map(|detail| Failure {
                index,
                instance: serde_json::to_value(&specs[index]).unwrap_or(Value::Null),
                detail,
            })
        })
        .collect();
    SuiteResult {
        name: name.to_string(),
        config,
        instances: specs.len(),
        failures,
        wall_time: start.elapsed(),
        notes: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::grading::{MonomialIdeal, Side};

    #[test]
    fn betti_routes_on_small_modules() {
        let f = Rationals;
        let k = SqSModule::residue_field(f, 3);
        let c = compare_betti_routes(&k).unwrap();
        assert!(c.agree(), "{:?}", c.divergence);
        let free = SqSModule::free(f, 3, &[Subset::from_indices(&[0, 2])]);
        let c = compare_betti_routes(&free).unwrap();
        assert!(c.agree());
        let t = crate::grading::BettiTable::from_json(&c.values[0]).unwrap();
        assert_eq!(t.iter().count(), 1);
    }

    #[test]
    fn lpd_routes_on_quotient() {
        let f = Rationals;
        let j = MonomialIdeal::new(Side::E, 3, [Subset::from_indices(&[0, 1])]);
        let c = compare_lpd_routes(&EModule::from_ideal(f, &j, true)).unwrap();
        assert!(c.agree());
        // the first syzygy (y1y2) is generated in degree 2
        assert_eq!(c.values[0], json!(1));
    }

    #[test]
    fn divergence_is_reported() {
        let c = OracleComparison::new(&["a", "b"], vec![json!(1), json!(2)], Value::Null);
        assert!(!c.agree());
        assert!(c.divergence.unwrap().contains("a = 1"));
    }
}
