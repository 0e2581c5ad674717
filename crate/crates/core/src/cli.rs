//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or syntax error, 2 a difference or
//! derivative does not exist (or a rule residual exceeds its tolerance),
//! 3 a theorem hypothesis fails.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dsl::{self, BoundFunction, BoundScalar};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, GhCase, DEFAULT_LEVELS};
use crate::nabla::{self, DiffCase, ProbeConfig};
use crate::rules::{self, ProductRule, RuleConfig, RuleReport, Verdict};
use crate::timescale::TimeScale;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NONEXISTENT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gh-nabla",
    version,
    about = "gH nabla derivatives of fuzzy-valued functions on time scales"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nabla gH-derivative at each selected point, one row per (t, alpha).
    Diff(Common),
    /// gH-difference u ⊖ v of two definitions evaluated at --at.
    Ghdiff(Common),
    /// Hausdorff distance between two definitions evaluated at --at.
    Metric(Common),
    /// Function values at each selected point, one row per (t, alpha).
    Tabulate(Common),
    /// Run a theorem checker over the selected points.
    Check {
        #[arg(value_enum)]
        theorem: Theorem,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    RhoIdentity,
    LevelConsistency,
    Sum,
    Product1,
    Product2,
    ProductInterval,
    Characterize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Time scale, inline or @file.
    #[arg(long)]
    timescale: Option<String>,
    /// Fuzzy function definition, inline or @file; repeat for two functions.
    #[arg(long = "fn")]
    functions: Vec<String>,
    /// Real-valued function of t, inline or @file.
    #[arg(long)]
    scalar: Option<String>,
    /// Comma-separated points, `scattered`, `dense:N` or `all`.
    #[arg(long)]
    points: Option<String>,
    /// Abscissa for ghdiff and metric.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    at: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    agreement_tol: Option<f64>,
    #[arg(long)]
    residual_tol: Option<f64>,
    /// Grid size K (K + 1 alpha-levels); 0 gives intervals.
    #[arg(long)]
    levels: Option<usize>,
    /// Approach points per side and generator.
    #[arg(long)]
    probes: Option<usize>,
    #[arg(long)]
    no_richardson: bool,
    /// Estimate limits on the merged approach sequence.
    #[arg(long)]
    no_split: bool,
}

/// Maps an error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GhNonexistent { .. }
        | Error::LimitDisagreement { .. }
        | Error::EndpointDerivativeMissing { .. } => EXIT_NONEXISTENT,
        _ => EXIT_CONFIG,
    }
}

/// Runs the command line `args` (including the program name) against
/// standard output and standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let common = match &cli.command {
        Command::Diff(c) | Command::Ghdiff(c) | Command::Metric(c) | Command::Tabulate(c) => c,
        Command::Check { common, .. } => common,
    };
    let outcome = match &cli.command {
        Command::Diff(c) => cmd_diff(c, err),
        Command::Ghdiff(c) => cmd_ghdiff(c, err),
        Command::Metric(c) => cmd_metric(c),
        Command::Tabulate(c) => cmd_tabulate(c),
        Command::Check { theorem, common } => cmd_check(*theorem, common, err),
    };
    match outcome {
        Ok((text, code)) => {
            if let Err(e) = emit(common, &text, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_CONFIG;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(c: &Common, text: &str, out: &mut dyn Write) -> std::io::Result<()> {
    match &c.out {
        Some(path) => std::fs::write(path, text),
        None => out.write_all(text.as_bytes()),
    }
}

fn read_arg(src: &str) -> Result<String> {
    match src.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Error::InvalidConfig(format!("cannot read {path}: {e}"))),
        None => Ok(src.to_string()),
    }
}

fn context(flag: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Validation(m) => Error::Validation(format!("{flag}: {m}")),
        Error::InvalidConfig(m) => Error::InvalidConfig(format!("{flag}: {m}")),
        other => other,
    }
}

impl Common {
    fn probe(&self) -> Result<ProbeConfig> {
        let mut cfg = ProbeConfig::default();
        if let Some(tol) = self.agreement_tol {
            cfg.agreement_tol = tol;
        }
        if let Some(n) = self.probes {
            cfg.probe_count = n;
        }
        cfg.richardson = !self.no_richardson;
        cfg.subsequence_split = !self.no_split;
        cfg.validate()?;
        Ok(cfg)
    }

    fn rule_config(&self) -> Result<RuleConfig> {
        if let Some(tol) = self.residual_tol {
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "residual-tol must be non-negative, got {tol}"
                )));
            }
        }
        Ok(RuleConfig {
            probe: self.probe()?,
            residual_tol: self.residual_tol,
        })
    }

    fn timescale(&self) -> Result<TimeScale> {
        let src = self
            .timescale
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("--timescale is required".into()))?;
        dsl::parse_timescale(&read_arg(src)?)
    }

    fn defs(&self, count: usize, levels: usize) -> Result<Vec<dsl::FuzzyFuncDef>> {
        if self.functions.len() != count {
            return Err(Error::InvalidConfig(format!(
                "expected {count} --fn definition(s), got {}",
                self.functions.len()
            )));
        }
        self.functions
            .iter()
            .map(|src| {
                dsl::parse_function_with_levels(&read_arg(src)?, levels).map_err(context("--fn"))
            })
            .collect()
    }

    fn bound(&self, ts: &TimeScale, count: usize, levels: usize) -> Result<Vec<BoundFunction>> {
        self.defs(count, levels)?
            .iter()
            .map(|d| dsl::bind(d, ts).map_err(context("--fn")))
            .collect()
    }

    fn scalar(&self, ts: &TimeScale) -> Result<BoundScalar> {
        let src = self
            .scalar
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("--scalar is required".into()))?;
        let e = dsl::parse_scalar(&read_arg(src)?).map_err(context("--scalar"))?;
        dsl::bind_scalar(&e, ts).map_err(context("--scalar"))
    }

    fn levels(&self) -> usize {
        self.levels.unwrap_or(DEFAULT_LEVELS)
    }
}

/// Resolves a point selector against `ts`; the result is sorted and deduplicated.
fn select_points(sel: Option<&str>, ts: &TimeScale) -> Result<Vec<f64>> {
    let sel = sel.unwrap_or("all").trim();
    let mut pts = match sel {
        "scattered" => ts.left_scattered_points(),
        "all" => {
            let mut p = ts.left_scattered_points();
            p.extend(dense_samples(ts, 5));
            p
        }
        _ => {
            if let Some(n) = sel.strip_prefix("dense:") {
                let n: usize = n.trim().parse().map_err(|_| {
                    Error::InvalidConfig(format!("dense:N needs a positive integer, got '{n}'"))
                })?;
                if n == 0 {
                    return Err(Error::InvalidConfig("dense:N needs N >= 1".into()));
                }
                dense_samples(ts, n)
            } else {
                let list = sel.strip_prefix("list:").unwrap_or(sel);
                list.split(',')
                    .map(|s| {
                        let e = dsl::parse_scalar(s).map_err(context("--points"))?;
                        dsl::eval_expr(&e, 0.0, 0.0, None).map_err(context("--points"))
                    })
                    .collect::<Result<Vec<f64>>>()?
            }
        }
    };
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "point selector '{sel}' selects nothing"
        )));
    }
    Ok(pts)
}

/// Accumulation points plus `n` evenly spaced points of every interval piece.
fn dense_samples(ts: &TimeScale, n: usize) -> Vec<f64> {
    let mut out = ts.accumulation_points();
    for &(a, b) in ts.intervals() {
        if n == 1 {
            out.push(0.5 * (a + b));
        } else {
            out.extend((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64));
        }
    }
    out
}

/// Number rendering for tables; negative zero prints as `0`.
fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        x.to_string()
    }
}

/// Residuals and tolerances in exponent notation.
fn sci(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report structures serialize");
    s.push('\n');
    s
}

type Outcome = Result<(String, i32)>;

fn cmd_diff(c: &Common, err: &mut dyn Write) -> Outcome {
    let ts = c.timescale()?;
    let cfg = c.probe()?;
    let f = c.bound(&ts, 1, c.levels())?.remove(0);
    let points = select_points(c.points.as_deref(), &ts)?;
    let mut code = EXIT_OK;
    let mut csv = String::from("t,alpha,d_lower,d_upper,case,residual\n");
    let mut json = Vec::new();
    for t in points {
        match nabla::nabla_gh(&f, &ts, t, &cfg) {
            Ok(d) => {
                let value = d.value.as_ref().expect("successful derivative has a value");
                for k in 0..=value.k() {
                    csv.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        num(t),
                        value.alpha(k),
                        num(value.lower()[k]),
                        num(value.upper()[k]),
                        d.case,
                        sci(d.residual)
                    ));
                }
                json.push(serde_json::to_value(&d).expect("serializable"));
            }
            Err(e) if exit_code(&e) == EXIT_NONEXISTENT => {
                let _ = writeln!(err, "t = {t}: {e}");
                code = EXIT_NONEXISTENT;
                let residual = match e {
                    Error::LimitDisagreement { residual, .. } => sci(residual),
                    _ => String::new(),
                };
                let k = f.def().levels;
                for i in 0..=k {
                    let alpha = if k == 0 { 0.0 } else { i as f64 / k as f64 };
                    csv.push_str(&format!(
                        "{},{alpha},,,{},{residual}\n",
                        num(t),
                        DiffCase::NotDifferentiable
                    ));
                }
                json.push(
                    json!({"t": t, "case": DiffCase::NotDifferentiable, "error": e.to_string()}),
                );
            }
            Err(e) => return Err(e),
        }
    }
    let text = match c.format {
        Format::Csv => csv,
        Format::Json => json_text(&json),
    };
    Ok((text, code))
}

fn cmd_tabulate(c: &Common) -> Outcome {
    let ts = c.timescale()?;
    let f = c.bound(&ts, 1, c.levels())?.remove(0);
    let points = select_points(c.points.as_deref(), &ts)?;
    let mut csv = String::from("t,alpha,lower,upper\n");
    let mut json = Vec::new();
    for t in points {
        let u = nabla::FuzzyFunction::eval(&f, t)?;
        for k in 0..=u.k() {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                num(t),
                u.alpha(k),
                num(u.lower()[k]),
                num(u.upper()[k])
            ));
        }
        json.push(json!({"t": t, "value": u}));
    }
    Ok(match c.format {
        Format::Csv => (csv, EXIT_OK),
        Format::Json => (json_text(&json), EXIT_OK),
    })
}

fn eval_pair(c: &Common) -> Result<(FuzzyNumber, FuzzyNumber)> {
    let defs = c.defs(2, c.levels())?;
    let eval = |d: &dsl::FuzzyFuncDef| -> Result<FuzzyNumber> {
        match c.timescale.as_deref() {
            Some(_) => dsl::eval_function(d, &c.timescale()?, c.at),
            None => dsl::eval_function(d, &TimeScale::interval(c.at, c.at)?, c.at),
        }
        .map_err(context("--fn"))
    };
    Ok((eval(&defs[0])?, eval(&defs[1])?))
}

fn cmd_ghdiff(c: &Common, err: &mut dyn Write) -> Outcome {
    let (u, v) = eval_pair(c)?;
    let r = u.gh_diff(&v)?;
    let code = if r.case == GhCase::None {
        for viol in &r.violations {
            let _ = writeln!(err, "{viol}");
        }
        EXIT_NONEXISTENT
    } else {
        EXIT_OK
    };
    let text = match c.format {
        Format::Json => json_text(&r),
        Format::Csv => {
            let mut s = String::from("alpha,lower,upper,case\n");
            for k in 0..=u.k() {
                match &r.value {
                    Some(w) => s.push_str(&format!(
                        "{},{},{},{}\n",
                        w.alpha(k),
                        num(w.lower()[k]),
                        num(w.upper()[k]),
                        r.case
                    )),
                    None => s.push_str(&format!("{},,,{}\n", u.alpha(k), r.case)),
                }
            }
            s
        }
    };
    Ok((text, code))
}

fn cmd_metric(c: &Common) -> Outcome {
    let (u, v) = eval_pair(c)?;
    let d = u.hausdorff(&v)?;
    Ok(match c.format {
        Format::Csv => (format!("hausdorff\n{d}\n"), EXIT_OK),
        Format::Json => (json_text(&json!({ "hausdorff": d })), EXIT_OK),
    })
}

/// One line of a check table.
#[derive(Debug, Serialize)]
struct CheckRow {
    rule: String,
    t: f64,
    verdict: Verdict,
    residual: Option<f64>,
    tolerance: f64,
    detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<Value>,
}

impl CheckRow {
    fn from_report(r: &RuleReport) -> Self {
        let failed: Vec<String> = r
            .hypothesis_checks
            .iter()
            .filter(|e| !e.holds)
            .map(|e| format!("{} ({})", e.name, e.detail))
            .collect();
        let mut detail = failed.join("; ");
        if let Some(a) = r.rhs_agreement {
            if !detail.is_empty() {
                detail.push_str("; ");
            }
            detail.push_str(&format!("rhs forms differ by {a}"));
        }
        CheckRow {
            rule: r.rule.clone(),
            t: r.t,
            verdict: r.verdict,
            residual: r.residual,
            tolerance: r.tolerance,
            detail,
            report: Some(serde_json::to_value(r).expect("serializable")),
        }
    }

    fn measured(rule: &str, t: f64, residual: f64, tolerance: f64) -> Self {
        CheckRow {
            rule: rule.into(),
            t,
            verdict: if residual <= tolerance {
                Verdict::Verified
            } else {
                Verdict::ResidualExceeded
            },
            residual: Some(residual),
            tolerance,
            detail: String::new(),
            report: None,
        }
    }
}

fn default_tol(rcfg: &RuleConfig, ts: &TimeScale, t: f64) -> Result<f64> {
    if let Some(tol) = rcfg.residual_tol {
        return Ok(tol);
    }
    Ok(if ts.classify(t)?.is_left_scattered() {
        rules::SCATTERED_RESIDUAL_TOL
    } else {
        rules::DENSE_RESIDUAL_TOL
    })
}

fn check_row(
    theorem: Theorem,
    ts: &TimeScale,
    fs: &[BoundFunction],
    scalar: Option<&BoundScalar>,
    rcfg: &RuleConfig,
    t: f64,
) -> Result<CheckRow> {
    let cfg = &rcfg.probe;
    let scalar = || scalar.expect("scalar bound for product rules");
    Ok(match theorem {
        Theorem::RhoIdentity => {
            let r = nabla::check_rho_identity(&fs[0], ts, t, cfg)?;
            CheckRow::measured("rho-identity", t, r, default_tol(rcfg, ts, t)?)
        }
        Theorem::LevelConsistency => {
            let r = nabla::check_level_consistency(&fs[0], ts, t, cfg)?;
            CheckRow::measured("level-consistency", t, r, default_tol(rcfg, ts, t)?)
        }
        Theorem::Sum => CheckRow::from_report(&rules::sum_rule(&fs[0], &fs[1], ts, t, rcfg)?),
        Theorem::Product1 => CheckRow::from_report(&rules::product_rule(
            scalar(),
            &fs[0],
            ts,
            t,
            ProductRule::One,
            rcfg,
        )?),
        Theorem::Product2 => CheckRow::from_report(&rules::product_rule(
            scalar(),
            &fs[0],
            ts,
            t,
            ProductRule::Two,
            rcfg,
        )?),
        Theorem::ProductInterval => {
            CheckRow::from_report(&rules::product_interval(scalar(), &fs[0], ts, t, rcfg)?)
        }
        Theorem::Characterize => {
            let evidence = nabla::characterization_hypothesis(&fs[0], ts, t, cfg)?;
            let (case, residual) = match nabla::nabla_gh(&fs[0], ts, t, cfg) {
                Ok(d) => (d.case, Some(d.residual)),
                Err(e) if exit_code(&e) == EXIT_NONEXISTENT => (DiffCase::NotDifferentiable, None),
                Err(e) => return Err(e),
            };
            let verdict = if !evidence.holds {
                Verdict::HypothesisFailed
            } else if case == DiffCase::NotDifferentiable {
                Verdict::ResidualExceeded
            } else {
                Verdict::Verified
            };
            CheckRow {
                rule: "characterize".into(),
                t,
                verdict,
                residual,
                tolerance: cfg.agreement_tol,
                detail: format!("case {case}; {}", evidence.detail),
                report: Some(json!({ "case": case, "evidence": evidence })),
            }
        }
    })
}

fn cmd_check(theorem: Theorem, c: &Common, err: &mut dyn Write) -> Outcome {
    let ts = c.timescale()?;
    let rcfg = c.rule_config()?;
    let (count, needs_scalar) = match theorem {
        Theorem::Sum => (2, false),
        Theorem::Product1 | Theorem::Product2 | Theorem::ProductInterval => (1, true),
        _ => (1, false),
    };
    let levels = match (theorem, c.levels) {
        (_, Some(k)) => k,
        (Theorem::ProductInterval, None) => 0,
        (_, None) => DEFAULT_LEVELS,
    };
    let fs = c.bound(&ts, count, levels)?;
    let scalar = if needs_scalar {
        Some(c.scalar(&ts)?)
    } else {
        None
    };
    let points = select_points(c.points.as_deref(), &ts)?;
    let mut rows = Vec::new();
    let mut nonexistent = false;
    for t in points {
        match check_row(theorem, &ts, &fs, scalar.as_ref(), &rcfg, t) {
            Ok(row) => rows.push(row),
            Err(e) if exit_code(&e) == EXIT_NONEXISTENT => {
                let _ = writeln!(err, "t = {t}: {e}");
                nonexistent = true;
                rows.push(CheckRow {
                    rule: format!("{theorem:?}"),
                    t,
                    verdict: Verdict::ResidualExceeded,
                    residual: None,
                    tolerance: f64::NAN,
                    detail: e.to_string(),
                    report: None,
                });
            }
            Err(e) => return Err(e),
        }
    }
    let code = if rows.iter().any(|r| r.verdict == Verdict::HypothesisFailed) {
        EXIT_HYPOTHESIS
    } else if nonexistent || rows.iter().any(|r| r.verdict != Verdict::Verified) {
        EXIT_NONEXISTENT
    } else {
        EXIT_OK
    };
    let text = match c.format {
        Format::Json => json_text(&rows),
        Format::Csv => {
            let mut s = String::from("rule,t,verdict,residual,tolerance,detail\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    csv_field(&r.rule),
                    num(r.t),
                    r.verdict,
                    r.residual.map(sci).unwrap_or_default(),
                    sci(r.tolerance),
                    csv_field(&r.detail)
                ));
            }
            s
        }
    };
    Ok((text, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["gh-nabla"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn diff_on_integers() {
        let (code, out, _) = run_capture(&[
            "diff",
            "--timescale",
            "hgrid(0, 5, 1)",
            "--fn",
            "tri(t, 2*t, 3*t)",
            "--points",
            "3",
            "--levels",
            "2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "t,alpha,d_lower,d_upper,case,residual\n3,0,1,3,CaseI,0\n3,0.5,1.5,2.5,CaseI,0\n3,1,2,2,CaseI,0\n"
        );
    }

    #[test]
    fn constant_function_has_zero_derivative() {
        let (code, out, _) = run_capture(&[
            "diff",
            "--timescale",
            "interval(0, 1)",
            "--fn",
            "tri(1, 2, 4)",
            "--points",
            "dense:3",
            "--levels",
            "1",
        ]);
        assert_eq!(code, 0, "{out}");
        let rows: Vec<&str> = out.lines().skip(1).collect();
        assert_eq!(rows.len(), 6);
        for r in rows {
            let f: Vec<&str> = r.split(',').collect();
            assert_eq!(f[2].parse::<f64>().unwrap(), 0.0);
            assert_eq!(f[3].parse::<f64>().unwrap(), 0.0);
            assert_eq!(f[4], "Crisp");
        }
    }

    #[test]
    fn ghdiff_cases_and_exit_codes() {
        let (code, out, _) = run_capture(&[
            "ghdiff",
            "--fn",
            "tri(0,2,4)",
            "--fn",
            "tri(0,1,2)",
            "--levels",
            "2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "alpha,lower,upper,case\n0,0,2,CaseI\n0.5,0.5,1.5,CaseI\n1,1,1,CaseI\n"
        );
        let (code, out, _) = run_capture(&[
            "ghdiff",
            "--fn",
            "tri(0,1,2)",
            "--fn",
            "tri(0,1,2)",
            "--levels",
            "1",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("Both"));
        let (code, out, err) = run_capture(&["ghdiff", "--fn", "tri(0,1,5)", "--fn", "tri(0,3,4)"]);
        assert_eq!(code, EXIT_NONEXISTENT);
        assert!(out.lines().nth(1).unwrap().ends_with(",,,None"));
        assert!(!err.is_empty());
    }

    #[test]
    fn metric_command() {
        let (code, out, _) = run_capture(&[
            "metric",
            "--fn",
            "tri(0,1,2)",
            "--fn",
            "tri(1,2,5)",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["hausdorff"], 3.0);
    }

    #[test]
    fn syntax_errors_exit_one_with_position() {
        let (code, out, err) =
            run_capture(&["diff", "--timescale", "hgrid(0,5,1)", "--fn", "tri(1, 2 3)"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(out.is_empty());
        assert!(err.contains("syntax error at 1:10"), "{err}");
        let (code, _, err) =
            run_capture(&["diff", "--timescale", "hgrid(0,5,", "--fn", "tri(1,2,3)"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("syntax error at 1:11"), "{err}");
        let (code, _, _) = run_capture(&["diff", "--bogus"]);
        assert_eq!(code, EXIT_CONFIG);
        let (code, _, _) = run_capture(&[
            "diff",
            "--timescale",
            "hgrid(0,5,1)",
            "--fn",
            "tri(1,2,3)",
            "--probes",
            "1",
        ]);
        assert_eq!(code, EXIT_CONFIG);
    }

    #[test]
    fn tabulate_rows_sorted() {
        let (code, out, _) = run_capture(&[
            "tabulate",
            "--timescale",
            "points(2, 0, 1)",
            "--fn",
            "tri(-t, 0, t)",
            "--points",
            "2,0,1",
            "--levels",
            "0",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "t,alpha,lower,upper\n0,0,0,0\n1,0,-1,1\n2,0,-2,2\n");
    }

    #[test]
    fn check_commands() {
        let base = ["--timescale", "hgrid(0, 8, 1)", "--points", "scattered"];
        let mut args = vec![
            "check",
            "rho-identity",
            "--fn",
            "tri(t^2, t^2 + 1, 2*t^2 + 3)",
        ];
        args.extend(base);
        assert_eq!(run_capture(&args).0, 0);
        let mut args = vec![
            "check",
            "product1",
            "--scalar",
            "1",
            "--fn",
            "tri(t, t+1, t+3)",
        ];
        args.extend(base);
        assert_eq!(run_capture(&args).0, EXIT_HYPOTHESIS);
        let mut args = vec![
            "check",
            "product1",
            "--scalar",
            "t^2+1",
            "--fn",
            "tri(t, t+1, t+3)",
        ];
        args.extend(base);
        let (code, out, _) = run_capture(&args);
        assert_eq!(code, 0, "{out}");
        let mut args = vec![
            "check",
            "sum",
            "--fn",
            "tri(t, 2*t, 3*t)",
            "--fn",
            "tri(0, t, 2*t)",
        ];
        args.extend(base);
        assert_eq!(run_capture(&args).0, 0);
        let (code, out, _) = run_capture(&[
            "check",
            "product-interval",
            "--timescale",
            "hgrid(0, 8, 1)",
            "--points",
            "3,5",
            "--scalar",
            "6 - t",
            "--fn",
            "tri(t, 1.5*t, 2*t)",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("product-interval (i)"));
    }
}
