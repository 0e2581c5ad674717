//! Differentiability tags and the sum and product rules, checked with
//! measured hypotheses.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy::FuzzyNumber;
use crate::nabla::{
    check_domain, nabla_gh, nabla_scalar, probe_families, Evidence, FuzzyFunction, ProbeConfig,
    ScalarFunction, ScaledFn, SumFn,
};
use crate::timescale::{SideClass, TimeScale};

/// Default residual tolerance where the derivative is an exact quotient.
pub const SCATTERED_RESIDUAL_TOL: f64 = 1e-9;
/// Default residual tolerance where the derivative is a probed limit.
pub const DENSE_RESIDUAL_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tag {
    I,
    II,
    Both,
    Neither,
}

impl Tag {
    pub fn admits_i(self) -> bool {
        matches!(self, Tag::I | Tag::Both)
    }

    pub fn admits_ii(self) -> bool {
        matches!(self, Tag::II | Tag::Both)
    }
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tag::I => "I",
            Tag::II => "II",
            Tag::Both => "Both",
            Tag::Neither => "Neither",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LenDirection {
    Increasing,
    Decreasing,
    Constant,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Verified,
    HypothesisFailed,
    ResidualExceeded,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Verified => "Verified",
            Verdict::HypothesisFailed => "HypothesisFailed",
            Verdict::ResidualExceeded => "ResidualExceeded",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct RuleConfig {
    pub probe: ProbeConfig,
    /// Overrides the scattered/dense residual tolerance defaults.
    pub residual_tol: Option<f64>,
}

impl RuleConfig {
    fn tolerance(&self, ts: &TimeScale, t: f64) -> Result<f64> {
        if let Some(tol) = self.residual_tol {
            return Ok(tol);
        }
        Ok(if ts.classify(t)?.is_left_scattered() {
            SCATTERED_RESIDUAL_TOL
        } else {
            DENSE_RESIDUAL_TOL
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleReport {
    pub rule: String,
    pub t: f64,
    pub hypothesis_checks: Vec<Evidence>,
    pub lhs: Option<FuzzyNumber>,
    pub rhs: Option<FuzzyNumber>,
    /// Second right-hand form, where the rule states two.
    pub rhs_alt: Option<FuzzyNumber>,
    /// Distance between the two right-hand forms.
    pub rhs_agreement: Option<f64>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl RuleReport {
    fn hypotheses_hold(&self) -> bool {
        self.hypothesis_checks.iter().all(|e| e.holds)
    }

    fn finish(mut self) -> Self {
        self.verdict = if !self.hypotheses_hold() {
            Verdict::HypothesisFailed
        } else if self.residual.is_some_and(|r| r <= self.tolerance) {
            Verdict::Verified
        } else {
            Verdict::ResidualExceeded
        };
        self
    }

    fn new(rule: impl Into<String>, t: f64, tolerance: f64) -> Self {
        RuleReport {
            rule: rule.into(),
            t,
            hypothesis_checks: Vec::new(),
            lhs: None,
            rhs: None,
            rhs_alt: None,
            rhs_agreement: None,
            residual: None,
            tolerance,
            verdict: Verdict::HypothesisFailed,
        }
    }
}

/// Whether the cuts of ∇_gH f(t) are `[∇f_α^-, ∇f_α^+]` (I), the swapped
/// order (II), both (crisp), or neither.
pub fn tag_i_ii(f: &dyn FuzzyFunction, ts: &TimeScale, t: f64, cfg: &ProbeConfig) -> Result<Tag> {
    let d = nabla_gh(f, ts, t, cfg)?;
    let value = d.value.expect("successful derivative has a value");
    if let Some(e) = d.endpoint_report.iter().find(|e| !e.all_exist()) {
        return Err(Error::EndpointDerivativeMissing { alpha: e.alpha });
    }
    let tol = if d.residual == 0.0 {
        1e-12 * (1.0 + value.magnitude())
    } else {
        2.0 * cfg.agreement_tol
    };
    let mut direct = true;
    let mut swapped = true;
    for (k, e) in d.endpoint_report.iter().enumerate() {
        let lo = 0.5 * (e.dminus_lower + e.dplus_lower);
        let hi = 0.5 * (e.dminus_upper + e.dplus_upper);
        let cut = value.cut(k);
        direct &= (cut.lo - lo).abs() <= tol && (cut.hi - hi).abs() <= tol;
        swapped &= (cut.lo - hi).abs() <= tol && (cut.hi - lo).abs() <= tol;
    }
    Ok(match (direct, swapped) {
        (true, true) => Tag::Both,
        (true, false) => Tag::I,
        (false, true) => Tag::II,
        (false, false) => Tag::Neither,
    })
}

fn tag_evidence(
    name: &str,
    f: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    cfg: &ProbeConfig,
    want: fn(Tag) -> bool,
) -> (Option<Tag>, Evidence) {
    match tag_i_ii(f, ts, t, cfg) {
        Ok(tag) => (
            Some(tag),
            Evidence::new(name, want(tag), format!("tag {tag}")),
        ),
        Err(e) => (None, Evidence::new(name, false, e.to_string())),
    }
}

/// Checks `∇(f ⊕ g)(t) = ∇f(t) ⊕ ∇g(t)`.
pub fn sum_rule(
    f: &dyn FuzzyFunction,
    g: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    rcfg: &RuleConfig,
) -> Result<RuleReport> {
    let cfg = &rcfg.probe;
    let mut report = RuleReport::new("sum", t, rcfg.tolerance(ts, t)?);
    let tf = tag_i_ii(f, ts, t, cfg);
    let tg = tag_i_ii(g, ts, t, cfg);
    let evidence = match (&tf, &tg) {
        (Ok(a), Ok(b)) => {
            let same = (a.admits_i() && b.admits_i()) || (a.admits_ii() && b.admits_ii());
            Evidence::new(
                "f and g simultaneously (i)- or (ii)-differentiable",
                same,
                format!("f: {a}, g: {b}"),
            )
        }
        (Err(e), _) | (_, Err(e)) => Evidence::new(
            "f and g simultaneously (i)- or (ii)-differentiable",
            false,
            e.to_string(),
        ),
    };
    report.hypothesis_checks.push(evidence);
    let hyp = report.hypotheses_hold();

    let sum = SumFn { f, g };
    let lhs = match nabla_gh(&sum, ts, t, cfg) {
        Ok(d) => d.value,
        Err(e) if !hyp => {
            report.hypothesis_checks.push(Evidence::new(
                "f ⊕ g differentiable",
                false,
                e.to_string(),
            ));
            return Ok(report.finish());
        }
        Err(e) => return Err(e),
    };
    let df = nabla_gh(f, ts, t, cfg).map(|d| d.value);
    let dg = nabla_gh(g, ts, t, cfg).map(|d| d.value);
    let (df, dg) = match (df, dg) {
        (Ok(Some(a)), Ok(Some(b))) => (a, b),
        (Err(e), _) | (_, Err(e)) if hyp => return Err(e),
        _ => return Ok(report.finish()),
    };
    let lhs = lhs.expect("successful derivative has a value");
    let rhs = df.add(&dg)?;
    report.residual = Some(lhs.hausdorff(&rhs)?);
    report.lhs = Some(lhs);
    report.rhs = Some(rhs);
    Ok(report.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProductRule {
    /// `f(t)∇f(t) > 0` with `g` (i)-differentiable.
    One,
    /// `f(t)∇f(t) < 0` with `g` (ii)-differentiable.
    Two,
}

struct ScalarData {
    ft: f64,
    frho: f64,
    dft: f64,
    rho: f64,
}

fn scalar_data(
    fs: &dyn ScalarFunction,
    ts: &TimeScale,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<ScalarData> {
    let rho = ts.rho(t)?;
    Ok(ScalarData {
        ft: fs.eval(t)?,
        frho: fs.eval(rho)?,
        dft: nabla_scalar(fs, ts, t, cfg)?,
        rho,
    })
}

/// Product rule for a real `fs` and fuzzy `g`, following the path given by
/// the sign of `fs(t)∇fs(t)`.
pub fn product_fuzzy(
    fs: &dyn ScalarFunction,
    g: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    rcfg: &RuleConfig,
) -> Result<RuleReport> {
    let s = scalar_data(fs, ts, t, &rcfg.probe)?;
    let rule = if s.ft * s.dft < 0.0 {
        ProductRule::Two
    } else {
        ProductRule::One
    };
    product_rule(fs, g, ts, t, rule, rcfg)
}

/// Checks `∇(fs g)(t) = ∇fs(t) g(ρ(t)) ⊕ fs(t) ∇g(t)
///                     = fs(ρ(t)) ∇g(t) ⊕ ∇fs(t) g(t)`.
pub fn product_rule(
    fs: &dyn ScalarFunction,
    g: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    rule: ProductRule,
    rcfg: &RuleConfig,
) -> Result<RuleReport> {
    let cfg = &rcfg.probe;
    let name = match rule {
        ProductRule::One => "product1",
        ProductRule::Two => "product2",
    };
    let mut report = RuleReport::new(name, t, rcfg.tolerance(ts, t)?);
    let s = scalar_data(fs, ts, t, cfg)?;
    let sign = s.ft * s.dft;
    let (sign_name, sign_ok, tag_name, want): (_, _, _, fn(Tag) -> bool) = match rule {
        ProductRule::One => (
            "f(t)∇f(t) > 0",
            sign > 0.0,
            "g is (i)-differentiable",
            Tag::admits_i,
        ),
        ProductRule::Two => (
            "f(t)∇f(t) < 0",
            sign < 0.0,
            "g is (ii)-differentiable",
            Tag::admits_ii,
        ),
    };
    report.hypothesis_checks.push(Evidence::new(
        sign_name,
        sign_ok,
        format!("f(t) = {}, ∇f(t) = {}", s.ft, s.dft),
    ));
    let (_, tag_ev) = tag_evidence(tag_name, g, ts, t, cfg, want);
    report.hypothesis_checks.push(tag_ev);
    let hyp = report.hypotheses_hold();

    let product = ScaledFn { s: fs, g };
    let lhs = match nabla_gh(&product, ts, t, cfg) {
        Ok(d) => d.value.expect("successful derivative has a value"),
        Err(e) if !hyp => {
            report.hypothesis_checks.push(Evidence::new(
                "f g differentiable",
                false,
                e.to_string(),
            ));
            return Ok(report.finish());
        }
        Err(e) => return Err(e),
    };
    let dg = match nabla_gh(g, ts, t, cfg) {
        Ok(d) => d.value.expect("successful derivative has a value"),
        Err(_) if !hyp => return Ok(report.finish()),
        Err(e) => return Err(e),
    };
    let gt = g.eval(t)?;
    let grho = g.eval(s.rho)?;
    let rhs = grho.scalar_mul(s.dft).add(&dg.scalar_mul(s.ft))?;
    let rhs_alt = dg.scalar_mul(s.frho).add(&gt.scalar_mul(s.dft))?;
    let residual = lhs.hausdorff(&rhs)?.max(lhs.hausdorff(&rhs_alt)?);
    report.rhs_agreement = Some(rhs.hausdorff(&rhs_alt)?);
    report.residual = Some(residual);
    report.lhs = Some(lhs);
    report.rhs = Some(rhs);
    report.rhs_alt = Some(rhs_alt);
    Ok(report.finish())
}

/// Monotone direction of `t ↦ len([fn(t)]_0)` around `t`, from `ρ(t)` or
/// left probes, `t`, and right probes where the right side is dense.
pub fn len_direction(
    func: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<LenDirection> {
    let class = check_domain(ts, t)?;
    let mut points: Vec<f64> = Vec::new();
    if class.left == SideClass::Scattered {
        points.push(ts.rho(t)?);
    }
    let families = probe_families(ts, t, &class, cfg)?;
    for fam in &families {
        // the two nearest probes of each family
        points.extend(fam.points.iter().rev().take(2));
    }
    points.push(t);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let lens: Vec<f64> = points
        .iter()
        .map(|&s| Ok(func.eval(s)?.support_len()))
        .collect::<Result<_>>()?;
    let scale = lens.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = 1e-12 * (1.0 + scale);
    let diffs: Vec<f64> = lens.windows(2).map(|w| w[1] - w[0]).collect();
    let up = diffs.iter().any(|d| *d > tol);
    let down = diffs.iter().any(|d| *d < -tol);
    Ok(match (up, down) {
        (false, false) => LenDirection::Constant,
        (true, false) => LenDirection::Increasing,
        (false, true) => LenDirection::Decreasing,
        (true, true) => LenDirection::Undetermined,
    })
}

/// Product rule for a real `fs` and interval-valued `g`, checked in the
/// implicit form selected by the tag of `g` and the length direction of
/// `fs g`.
pub fn product_interval(
    fs: &dyn ScalarFunction,
    g: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    rcfg: &RuleConfig,
) -> Result<RuleReport> {
    let cfg = &rcfg.probe;
    let tol = rcfg.tolerance(ts, t)?;
    let s = scalar_data(fs, ts, t, cfg)?;
    let sign = s.ft * s.dft;
    let product = ScaledFn { s: fs, g };
    let tag = tag_i_ii(g, ts, t, cfg);
    let dir = len_direction(&product, ts, t, cfg)?;

    // Tag I pairs with a negative sign, tag II with a positive one.
    let family_i = match &tag {
        Ok(tag) if tag.admits_i() && sign < 0.0 => Some(true),
        Ok(tag) if tag.admits_ii() && sign > 0.0 => Some(false),
        _ => None,
    };
    let mut report = RuleReport::new("product-interval", t, tol);
    match family_i {
        Some(true) => {
            report.rule = "product-interval (i)".into();
            report.hypothesis_checks.push(Evidence::new(
                "f(t)∇f(t) < 0",
                true,
                format!("f(t) = {}, ∇f(t) = {}", s.ft, s.dft),
            ));
            report.hypothesis_checks.push(Evidence::new(
                "g is (i)-differentiable",
                true,
                format!("tag {}", tag.as_ref().expect("tag computed")),
            ));
        }
        Some(false) => {
            report.rule = "product-interval (ii)".into();
            report.hypothesis_checks.push(Evidence::new(
                "f(t)∇f(t) > 0",
                true,
                format!("f(t) = {}, ∇f(t) = {}", s.ft, s.dft),
            ));
            report.hypothesis_checks.push(Evidence::new(
                "g is (ii)-differentiable",
                true,
                format!("tag {}", tag.as_ref().expect("tag computed")),
            ));
        }
        None => {
            let detail = match &tag {
                Ok(tag) => format!("tag {tag}, f(t)∇f(t) = {sign}"),
                Err(e) => e.to_string(),
            };
            report.hypothesis_checks.push(Evidence::new(
                "(i) with f(t)∇f(t) < 0, or (ii) with f(t)∇f(t) > 0",
                false,
                detail,
            ));
        }
    }
    report.hypothesis_checks.push(Evidence::new(
        "len(f g) monotone near t",
        dir != LenDirection::Undetermined,
        format!("{dir:?}"),
    ));
    let Some(family_i) = family_i else {
        return Ok(report.finish());
    };
    if dir == LenDirection::Undetermined {
        return Ok(report.finish());
    }

    let dfg = nabla_gh(&product, ts, t, cfg)?
        .value
        .expect("successful derivative has a value");
    let dg = nabla_gh(g, ts, t, cfg)?
        .value
        .expect("successful derivative has a value");
    let gt = g.eval(t)?;
    let grho = g.eval(s.rho)?;
    // (subtracted term, other side) for the increasing and decreasing forms
    let (inc, dec) = if family_i {
        let a = grho.scalar_mul(s.dft);
        let b = dg.scalar_mul(s.ft);
        ((a.clone(), b.clone()), (b, a))
    } else {
        let a = dg.scalar_mul(s.frho);
        let b = gt.scalar_mul(s.dft);
        ((a.clone(), b.clone()), (b, a))
    };
    let check = |(sub, other): &(FuzzyNumber, FuzzyNumber)| -> Result<(FuzzyNumber, f64)> {
        let lhs = dfg.add(&sub.scalar_mul(-1.0))?;
        let r = lhs.hausdorff(other)?;
        Ok((lhs, r))
    };
    let forms: Vec<(&str, &(FuzzyNumber, FuzzyNumber))> = match dir {
        LenDirection::Increasing => vec![("increasing", &inc)],
        LenDirection::Decreasing => vec![("decreasing", &dec)],
        _ => vec![("increasing", &inc), ("decreasing", &dec)],
    };
    let mut residual = 0.0f64;
    for (label, form) in &forms {
        let (lhs, r) = check(form)?;
        residual = residual.max(r);
        if report.lhs.is_none() {
            report.lhs = Some(lhs);
            report.rhs = Some(form.1.clone());
        }
        report.rule = format!("{}, length {}", report.rule, label);
    }
    report.residual = Some(residual);
    Ok(report.finish())
}
