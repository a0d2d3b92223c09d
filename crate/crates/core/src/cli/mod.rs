//! Command-line front end. `run_command` does all the work so that it can be
//! driven from tests; `main` only forwards the arguments and exit code.

mod instance;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::bgg::reg_of_complex;
use crate::emod::EModule;
use crate::error::{Error, Result};
use crate::exactla::{Field, FieldConfig};
use crate::grading::{BettiTable, Side, Subset};
use crate::harness::random::{all_antichains, instance_rng, random_antichain, random_ideal_gens};
use crate::harness::{compare_betti_routes, run_suite, SuiteConfig};
use crate::smod::{SqSModule, Truncation};
use crate::wkoszul::{
    is_weakly_koszul_direct, is_weakly_koszul_e, lpd_with, wk_filtration, LpdOptions,
};

pub use instance::{parse_instance, InstanceFile};

#[derive(Parser, Debug)]
#[command(name = "bggreg", version, about = "Betti tables, regularity, weakly Koszul tests and lpd for squarefree monomial ideals")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Steps of truncated resolutions over E (default d + 2).
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Coefficient characteristic, overriding the instance file.
    #[arg(long, global = true)]
    field_char: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truncated Betti table of E/J over E.
    BettiE { file: PathBuf },
    /// Betti table of S/I.
    BettiS { file: PathBuf },
    /// Regularity of S/I by three routes.
    Reg { file: PathBuf },
    /// Local cohomology of S/I.
    Localcoh { file: PathBuf },
    /// lpd of E/J.
    Lpd { file: PathBuf },
    /// Weakly Koszul test for E/J.
    Wkoszul { file: PathBuf },
    /// Linear-quotient filtration of E/J.
    Filtration { file: PathBuf },
    /// Alexander dual of S/I.
    Alexander { file: PathBuf },
    /// Ext modules of S/I against S, with depth data.
    ExtTable { file: PathBuf },
    /// Betti table of the truncation (S/I)_{>= r}.
    TruncateBetti {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: i32,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Enumerate all instances where the suite supports it.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Print seeded random instances.
    Random {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Probability of drawing each subset; random per instance if absent.
        #[arg(long)]
        density: Option<f64>,
        /// All antichains instead of a sample (d <= 5).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value = "E")]
        side: String,
    },
}

/// Exit code and the two output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    command: String,
    instance: Value,
    result: Value,
    checks: Vec<Value>,
    /// Extra text shown before the generic rendering.
    text: String,
}

impl Report {
    fn new(command: &str, instance: Value) -> Self {
        Self {
            command: command.to_string(),
            instance,
            result: json!({}),
            checks: Vec::new(),
            text: String::new(),
        }
    }

    fn check(&mut self, name: &str, pass: bool, extra: Value) {
        let mut c = json!({"name": name, "pass": pass});
        if let (Some(obj), Value::Object(more)) = (c.as_object_mut(), extra) {
            obj.extend(more);
        }
        self.checks.push(c);
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c["pass"] == json!(true))
    }

    fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "instance": self.instance,
            "result": self.result,
            "checks": self.checks,
        })
    }

    fn to_text(&self) -> String {
        let mut out = self.text.clone();
        if let Value::Object(m) = &self.result {
            for (k, v) in m {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        for c in &self.checks {
            let ok = if c["pass"] == json!(true) { "PASS" } else { "FAIL" };
            out.push_str(&format!("check {}: {ok}\n", c["name"].as_str().unwrap_or("?")));
        }
        out
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CommandOutcome { code, stdout: text, stderr: String::new() }
            } else {
                CommandOutcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let json_out = cli.json;
    let name = command_name(&cli.command);
    match execute(&cli) {
        Ok(report) => {
            let code = if report.passed() { 0 } else { 1 };
            let stdout = if json_out {
                format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("plain JSON"))
            } else {
                report.to_text()
            };
            CommandOutcome { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = match e {
                Error::Parse { .. } | Error::BadIndex { .. } | Error::BadChar(_) | Error::InvalidInput(_) => 2,
                _ => 1,
            };
            let record = json!({
                "command": name,
                "error": {"kind": error_kind(&e), "message": e.to_string()},
            });
            if json_out {
                CommandOutcome {
                    code,
                    stdout: format!("{}\n", serde_json::to_string_pretty(&record).expect("plain JSON")),
                    stderr: String::new(),
                }
            } else {
                CommandOutcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("error: {e}\n"),
                }
            }
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::CompositionNotZero => "CompositionNotZero",
        Error::ZeroModule => "ZeroModule",
        Error::NotSquarefree => "NotSquarefree",
        Error::WindowTooSmall { .. } => "WindowTooSmall",
        Error::DifferentialCheckFailed(_) => "DifferentialCheckFailed",
        Error::NotMinimal { .. } => "NotMinimal",
        Error::NotWeaklyKoszul => "NotWeaklyKoszul",
        Error::Parse { .. } => "ParseError",
        Error::BadIndex { .. } => "BadIndex",
        Error::BadChar(_) => "BadChar",
        Error::InvalidInput(_) => "InvalidInput",
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::BettiE { .. } => "betti-e",
        Command::BettiS { .. } => "betti-s",
        Command::Reg { .. } => "reg",
        Command::Localcoh { .. } => "localcoh",
        Command::Lpd { .. } => "lpd",
        Command::Wkoszul { .. } => "wkoszul",
        Command::Filtration { .. } => "filtration",
        Command::Alexander { .. } => "alexander",
        Command::ExtTable { .. } => "ext-table",
        Command::TruncateBetti { .. } => "truncate-betti",
        Command::Verify { .. } => "verify",
        Command::Random { .. } => "random",
    }
}

fn load(path: &PathBuf, field_char: Option<u64>) -> Result<(InstanceFile, FieldConfig)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let inst = parse_instance(&text)?;
    let field = match field_char {
        Some(c) => FieldConfig::new(c)?,
        None => inst.field()?,
    };
    Ok((inst, field))
}

fn instance_json(inst: &InstanceFile, field: FieldConfig) -> Value {
    let mut v = serde_json::to_value(inst).expect("plain data");
    v["char"] = json!(field.characteristic);
    v
}

fn coarse_json(t: &BettiTable) -> Value {
    Value::Array(
        t.coarse_table()
            .into_iter()
            .map(|((i, j), m)| json!({"i": i, "j": j, "mult": m}))
            .collect(),
    )
}

fn execute(cli: &Cli) -> Result<Report> {
    let fc = cli.field_char;
    match &cli.command {
        Command::Verify {
            suite,
            d,
            count,
            seed,
            exhaustive,
        } => {
            let mut cfg = SuiteConfig::new(*d, *count, *seed);
            cfg.field = FieldConfig::new(fc.unwrap_or(0))?;
            cfg.max_steps = cli.max_steps;
            cfg.exhaustive = *exhaustive;
            let res = run_suite(suite, cfg)?;
            let mut r = Report::new("verify", json!({"suite": suite, "config": cfg}));
            r.text = format!("{}\n", res.summary());
            for n in &res.notes {
                r.text.push_str(&format!("note: {n}\n"));
            }
            r.check("suite", res.passed(), json!({"failures": res.failures.len()}));
            for f in &res.failures {
                r.text.push_str(&format!(
                    "failure #{}: {} {}\n",
                    f.index, f.detail, f.instance
                ));
            }
            r.result = json!({
                "instances": res.instances,
                "failures": res.failures,
                "wall_time": res.wall_time.as_secs_f64(),
                "notes": res.notes,
            });
            Ok(r)
        }
        Command::Random {
            d,
            count,
            seed,
            density,
            exhaustive,
            side,
        } => {
            let side = match side.as_str() {
                "E" => Side::E,
                "S" => Side::S,
                other => return Err(Error::InvalidInput(format!("side must be E or S, not {other}"))),
            };
            let insts = if *exhaustive {
                if *d > 5 {
                    return Err(Error::InvalidInput("exhaustive enumeration needs d <= 5".into()));
                }
                all_antichains(*d)
                    .into_iter()
                    .map(|g| InstanceFile::new(*d, fc.unwrap_or(0), side, g))
                    .collect()
            } else {
                random_ideal(*d, *count, *seed, *density)
                    .into_iter()
                    .map(|mut i| {
                        i.side = side;
                        i.characteristic = fc.unwrap_or(0);
                        i
                    })
                    .collect::<Vec<_>>()
            };
            let mut r = Report::new("random", json!({"d": d, "count": count, "seed": seed}));
            for (k, i) in insts.iter().enumerate() {
                r.text.push_str(&format!("# instance {k}\n{}\n", i.emit()));
            }
            r.result = json!({"instances": insts});
            Ok(r)
        }
        Command::BettiE { file }
        | Command::BettiS { file }
        | Command::Reg { file }
        | Command::Localcoh { file }
        | Command::Lpd { file }
        | Command::Wkoszul { file }
        | Command::Filtration { file }
        | Command::Alexander { file }
        | Command::ExtTable { file }
        | Command::TruncateBetti { file, .. } => {
            let (inst, field) = load(file, fc)?;
            let mut r = Report::new(command_name(&cli.command), instance_json(&inst, field));
            crate::with_field!(field, |f| on_instance(f, cli, &inst, &mut r))?;
            Ok(r)
        }
    }
}

/// Seeded antichains; a fixed `density` or one drawn per instance.
pub fn random_ideal(d: usize, count: usize, seed: u64, density: Option<f64>) -> Vec<InstanceFile> {
    (0..count)
        .map(|k| {
            let mut rng = instance_rng(seed, k);
            let gens = match density {
                Some(p) => random_antichain(&mut rng, d, p),
                None => random_ideal_gens(&mut rng, d),
            };
            InstanceFile::new(d, 0, Side::E, gens)
        })
        .collect()
}

fn on_instance<F: Field>(f: F, cli: &Cli, inst: &InstanceFile, r: &mut Report) -> Result<()> {
    let d = inst.d;
    let steps = cli.max_steps.unwrap_or(d + 2);
    let quotient_e = || -> Result<EModule<F>> {
        let n = EModule::from_ideal(f, &inst.ideal(Side::E), true);
        if n.is_zero() {
            Err(Error::ZeroModule)
        } else {
            Ok(n)
        }
    };
    let quotient_s = || -> Result<SqSModule<F>> {
        let m = SqSModule::from_ideal(f, &inst.ideal(Side::S), true);
        if m.is_zero() {
            Err(Error::ZeroModule)
        } else {
            Ok(m)
        }
    };
    match &cli.command {
        Command::BettiE { .. } => {
            let n = quotient_e()?;
            let prefix = n.resolution_prefix(steps)?;
            r.text = prefix.betti.pretty();
            r.result = json!({
                "steps": steps,
                "betti": prefix.betti.to_json(),
                "coarse": coarse_json(&prefix.betti),
            });
            r.check("prefix_minimal", prefix.check_minimal().is_ok(), json!({}));
            let closed = n.betti_closed_form(steps)?;
            r.check("closed_form_matches", closed == prefix.betti, json!({}));
        }
        Command::BettiS { .. } => {
            let m = quotient_s()?;
            let res = m.min_free_resolution();
            r.text = res.betti.pretty();
            r.result = json!({
                "betti": res.betti.to_json(),
                "coarse": coarse_json(&res.betti),
                "reg": res.betti.reg(),
                "proj_dim": res.proj_dim(),
            });
            r.check("resolution_d2", res.complex.check_d2().is_ok(), json!({}));
            let cmp = compare_betti_routes(&m)?;
            r.check("betti_routes_agree", cmp.agree(), json!({"divergence": cmp.divergence}));
        }
        Command::Reg { .. } => {
            let m = quotient_s()?;
            let b = m.reg();
            let lc = m.local_cohomology().reg();
            let g = reg_of_complex(&m)?;
            r.result = json!({"reg": b, "reg_local_cohomology": lc, "reg_g": g});
            r.check("routes_agree", b == lc && lc == g, json!({}));
        }
        Command::Localcoh { .. } => {
            let m = quotient_s()?;
            let lc = m.local_cohomology();
            // H^i_m(M)_a for a <= 0 lives on the negative support of a
            let mut entries = Vec::new();
            for i in 0..=d {
                for s in Subset::all(d) {
                    let k = lc.ext_dims[i][s.index()];
                    if k > 0 {
                        entries.push(json!({"i": i, "neg_support": s.to_one_based(), "dim": k}));
                    }
                }
            }
            let end: Vec<Value> = (0..=d)
                .filter_map(|i| lc.end_degree(i).map(|e| json!({"i": i, "end": e})))
                .collect();
            let depth = (0..=d).find(|&i| lc.end_degree(i).is_some());
            r.result = json!({
                "entries": entries,
                "end_degrees": end,
                "depth": depth,
                "reg": lc.reg(),
            });
            r.check("reg_matches_betti", lc.reg() == m.reg(), json!({}));
            let pd = m.proj_dim().expect("nonzero");
            r.check("depth_plus_pd_is_d", depth.map(|x| x + pd) == Some(d), json!({}));
        }
        Command::Lpd { .. } => {
            let n = quotient_e()?;
            let rep = lpd_with(
                &n,
                LpdOptions {
                    direct_steps: Some(steps),
                    ..LpdOptions::default()
                },
            )?;
            r.text = format!("lpd = {}\n", rep.value_formula);
            let trace: Vec<Value> = rep
                .syzygy_trace
                .iter()
                .map(|t| json!({"step": t.step, "weakly_koszul": t.weakly_koszul, "direct": t.direct, "dim": t.dim}))
                .collect();
            r.result = json!({
                "lpd": rep.value_formula,
                "value_sqf": rep.value_sqf,
                "lower_bound_direct": rep.lower_bound_direct,
                "per_i": rep.per_i_table.iter().map(|(p, v)| json!({"i": p, "value": v})).collect::<Vec<_>>(),
                "syzygy_trace": trace,
                "trace_truncated": rep.trace_truncated,
            });
            r.check("routes_agree", rep.routes_agree(), json!({}));
            r.check("omega_monotone", rep.omega_monotone(), json!({}));
            r.check("direct_consistent", rep.direct_consistent(), json!({}));
        }
        Command::Wkoszul { .. } => {
            let n = quotient_e()?;
            let cert = is_weakly_koszul_e(&n)?;
            let s_side = SqSModule::from_emodule(&n)?.weakly_koszul();
            let direct = is_weakly_koszul_direct(&n, steps)?;
            r.result = json!({
                "weakly_koszul": cert.holds,
                "regularities": cert.regs.iter().map(|(p, v)| json!({"i": p, "reg": v})).collect::<Vec<_>>(),
                "componentwise_linear_s": s_side.holds(),
                "direct": direct,
                "direct_steps": steps,
            });
            r.check("e_and_s_agree", cert.holds == s_side.holds(), json!({}));
            r.check("direct_not_contradicted", direct || !cert.holds, json!({}));
        }
        Command::Filtration { .. } => {
            let n = quotient_e()?;
            let fl = wk_filtration(&n)?;
            let quotients: Vec<Value> = fl
                .quotients
                .iter()
                .zip(&fl.quotient_degrees)
                .map(|(q, g)| json!({"degree": g, "dim": q.total_dim()}))
                .collect();
            r.result = json!({
                "length": fl.quotients.len(),
                "quotients": quotients,
                "chain_dims": fl.chain.iter().map(|u| u.module.total_dim()).collect::<Vec<_>>(),
            });
            r.check("exhausts", fl.exhausts(&n), json!({}));
            r.check("quotients_linear", fl.quotients_linear.iter().all(|&b| b), json!({}));
            r.check("literal_composite_agrees", fl.literal_agrees.iter().all(|&b| b), json!({}));
        }
        Command::Alexander { .. } => {
            let m = quotient_s()?;
            let a = m.alexander_dual();
            let dims: Vec<Value> = Subset::all(d)
                .filter(|s| a.dim(*s) > 0)
                .map(|s| json!({"set": s.to_one_based(), "dim": a.dim(s)}))
                .collect();
            let pd = m.proj_dim().map(|p| p as i32);
            r.result = json!({"dual_dims": dims, "reg_dual": a.reg(), "proj_dim": pd});
            r.check("reg_dual_equals_pd", a.reg() == pd, json!({}));
            let aa = a.alexander_dual();
            r.check("double_dual_dims", Subset::all(d).all(|s| aa.dim(s) == m.dim(s)), json!({}));
        }
        Command::ExtTable { .. } => {
            let m = quotient_s()?;
            let ext = m.ext_against_dualizing();
            // X_i = Ext^{d-i}(M, S) up to the shift by 1
            let rows: Vec<Value> = ext
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| {
                    json!({
                        "j": d - i,
                        "dims": Subset::all(d).filter(|s| x.dim(*s) > 0)
                            .map(|s| json!({"set": s.to_one_based(), "dim": x.dim(s)}))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let dd = m.depth_dim_cm()?;
            r.result = json!({
                "ext": rows,
                "depth": dd.depth,
                "dim": dd.dim,
                "proj_dim": dd.proj_dim,
                "cohen_macaulay": dd.cohen_macaulay,
                "sequentially_cm": dd.sequentially_cm,
            });
            r.check("depth_plus_pd_is_d", dd.depth + dd.proj_dim == d, json!({}));
        }
        Command::TruncateBetti { r: level, .. } => {
            let m = quotient_s()?;
            let t = Truncation::new(&m, *level).betti()?;
            let reg = m.reg().expect("nonzero");
            r.text = t.pretty();
            r.result = json!({
                "r": level,
                "betti": t.to_json(),
                "coarse": coarse_json(&t),
                "linear": t.is_linear(*level),
                "reg": reg,
            });
            r.check("linear_iff_r_at_least_reg", t.is_linear(*level) == (*level >= reg), json!({}));
        }
        Command::Verify { .. } | Command::Random { .. } => unreachable!("handled without an instance"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(text: &str) -> tempfile_path::TempPath {
        tempfile_path::TempPath::new(text)
    }

    /// Minimal temporary file helper, removed on drop.
    mod tempfile_path {
        pub struct TempPath(pub std::path::PathBuf);
        impl TempPath {
            pub fn new(text: &str) -> Self {
                use std::sync::atomic::{AtomicUsize, Ordering};
                static N: AtomicUsize = AtomicUsize::new(0);
                let p = std::env::temp_dir().join(format!(
                    "bggreg-cli-{}-{}.ideal",
                    std::process::id(),
                    N.fetch_add(1, Ordering::Relaxed)
                ));
                std::fs::write(&p, text).unwrap();
                Self(p)
            }
            pub fn s(&self) -> String {
                self.0.display().to_string()
            }
        }
        impl Drop for TempPath {
            fn drop(&mut self) {
                let _ = std::fs::remove_file(&self.0);
            }
        }
    }

    #[test]
    fn betti_s_triangle() {
        let p = write("d 3\nside S\ngen 1 2\ngen 2 3\ngen 1 3\n");
        let out = run_command(["bggreg", "--json", "betti-s", &p.s()]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["command"], "betti-s");
        assert_eq!(v["result"]["reg"], 1);
        let coarse = v["result"]["coarse"].as_array().unwrap();
        let get = |i: i64, j: i64| {
            coarse
                .iter()
                .find(|e| e["i"] == i && e["j"] == j)
                .map(|e| e["mult"].as_u64().unwrap())
        };
        assert_eq!(get(0, 0), Some(1));
        assert_eq!(get(-1, 2), Some(3));
        assert_eq!(get(-2, 3), Some(2));
    }

    #[test]
    fn parse_error_exit_code() {
        let p = write("d 2\ngen 1 1\n");
        let out = run_command(["bggreg", "--json", "lpd", &p.s()]);
        assert_eq!(out.code, 2);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["error"]["kind"], "BadIndex");
        assert_eq!(run_command(["bggreg", "no-such-command"]).code, 2);
    }

    #[test]
    fn filtration_rejects_non_weakly_koszul() {
        let p = write("d 4\ngen 1 2\ngen 3 4\n");
        let out = run_command(["bggreg", "filtration", &p.s()]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("not weakly Koszul"));
    }

    #[test]
    fn text_and_json_payloads_match() {
        let p = write("d 3\ngen 1 2\n");
        let t = run_command(["bggreg", "lpd", &p.s()]);
        let j = run_command(["bggreg", "--json", "lpd", &p.s()]);
        assert_eq!((t.code, j.code), (0, 0));
        let v: Value = serde_json::from_str(&j.stdout).unwrap();
        assert!(t.stdout.contains(&format!("lpd: {}", v["result"]["lpd"])));
        assert!(t.stdout.contains(&format!("syzygy_trace: {}", v["result"]["syzygy_trace"])));
    }

    #[test]
    fn random_is_seeded() {
        let a = run_command(["bggreg", "random", "--d", "3", "--count", "4", "--seed", "1"]);
        let b = run_command(["bggreg", "random", "--d", "3", "--count", "4", "--seed", "1"]);
        assert_eq!(a, b);
        assert_eq!(a.code, 0);
        let all = random_ideal(3, 50, 9, Some(0.0));
        assert!(all.iter().all(|i| i.gens.is_empty()));
        let full = random_ideal(3, 5, 9, Some(1.0));
        assert!(full.iter().all(|i| i.gens.len() == 3));
    }

    #[test]
    fn verify_runs() {
        let out = run_command(["bggreg", "--json", "verify", "lc", "--d", "3", "--count", "5"]);
        assert_eq!(out.code, 0, "{}", out.stdout);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["result"]["instances"], 5);
    }

    #[test]
    fn truncate_accepts_negative_r() {
        let p = write("d 2\nside S\ngen 1 2\n");
        let out = run_command(["bggreg", "truncate-betti", &p.s(), "--r", "-1"]);
        assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    }
}
