//! The generalized Hukuhara nabla derivative and its structural checks.

mod endpoint;
mod limit;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, GhCase, Interval};
use crate::timescale::{PointClass, Side, SideClass, TimeScale};

pub use endpoint::{
    endpoint_derivatives, EndpointEntry, EndpointFlags, Existence, SubsequenceLimit,
};
pub use limit::ProbeFamily;

use limit::{combine, family_limit, quotients, FamilyLimit, LimitSpace};

/// A map `t ↦ f(t)` into fuzzy numbers on a fixed α-grid.
pub trait FuzzyFunction: Sync {
    /// Grid size `K` of every value.
    fn levels(&self) -> usize;
    fn eval(&self, t: f64) -> Result<FuzzyNumber>;
}

/// A real-valued function on the time scale.
pub trait ScalarFunction: Sync {
    fn eval(&self, t: f64) -> Result<f64>;
}

impl<F: Fn(f64) -> f64 + Sync> ScalarFunction for F {
    fn eval(&self, t: f64) -> Result<f64> {
        Ok(self(t))
    }
}

/// Wraps a closure as a [`FuzzyFunction`].
pub struct FnFuzzy<F> {
    k: usize,
    f: F,
}

impl<F: Fn(f64) -> Result<FuzzyNumber> + Sync> FnFuzzy<F> {
    pub fn new(k: usize, f: F) -> Self {
        FnFuzzy { k, f }
    }
}

impl<F: Fn(f64) -> Result<FuzzyNumber> + Sync> FuzzyFunction for FnFuzzy<F> {
    fn levels(&self) -> usize {
        self.k
    }

    fn eval(&self, t: f64) -> Result<FuzzyNumber> {
        (self.f)(t)
    }
}

/// `t ↦ f(t) ⊕ g(t)`.
pub struct SumFn<'a> {
    pub f: &'a dyn FuzzyFunction,
    pub g: &'a dyn FuzzyFunction,
}

impl FuzzyFunction for SumFn<'_> {
    fn levels(&self) -> usize {
        self.f.levels()
    }

    fn eval(&self, t: f64) -> Result<FuzzyNumber> {
        self.f.eval(t)?.add(&self.g.eval(t)?)
    }
}

/// `t ↦ s(t) g(t)` for a real function `s`.
pub struct ScaledFn<'a> {
    pub s: &'a dyn ScalarFunction,
    pub g: &'a dyn FuzzyFunction,
}

impl FuzzyFunction for ScaledFn<'_> {
    fn levels(&self) -> usize {
        self.g.levels()
    }

    fn eval(&self, t: f64) -> Result<FuzzyNumber> {
        Ok(self.g.eval(t)?.scalar_mul(self.s.eval(t)?))
    }
}

/// The cut `t ↦ [f(t)]_k` of a fuzzy function as an interval function.
struct LevelFn<'a> {
    f: &'a dyn FuzzyFunction,
    k: usize,
}

impl LevelFn<'_> {
    fn eval(&self, t: f64) -> Result<Interval> {
        Ok(self.f.eval(t)?.cut(self.k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeConfig {
    /// Approach points per side and generator.
    pub probe_count: usize,
    pub agreement_tol: f64,
    /// Richardson extrapolation on interval sides.
    pub richardson: bool,
    /// Estimate limits per discrete generator instead of on the merged
    /// approach sequence.
    pub subsequence_split: bool,
    /// First offset inside interval pieces, relative to `max(1, |t|)`.
    pub dense_offset: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            probe_count: 8,
            agreement_tol: 1e-6,
            richardson: true,
            subsequence_split: true,
            dense_offset: crate::timescale::DEFAULT_DENSE_OFFSET,
        }
    }
}

impl ProbeConfig {
    pub fn with_tol(tol: f64) -> Self {
        ProbeConfig {
            agreement_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.probe_count < 3 {
            return Err(Error::InvalidConfig(format!(
                "probe_count must be at least 3, got {}",
                self.probe_count
            )));
        }
        if !self.agreement_tol.is_finite() || self.agreement_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "agreement_tol must be positive, got {}",
                self.agreement_tol
            )));
        }
        if !(self.dense_offset > 0.0 && self.dense_offset < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "dense_offset must lie in (0, 1), got {}",
                self.dense_offset
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiffCase {
    CaseI,
    CaseII,
    Crisp,
    SwitchingIII,
    SwitchingIV,
    NotDifferentiable,
}

impl std::fmt::Display for DiffCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DiffCase::CaseI => "CaseI",
            DiffCase::CaseII => "CaseII",
            DiffCase::Crisp => "Crisp",
            DiffCase::SwitchingIII => "SwitchingIII",
            DiffCase::SwitchingIV => "SwitchingIV",
            DiffCase::NotDifferentiable => "NotDifferentiable",
        };
        f.write_str(s)
    }
}

/// How the difference quotients along one family are oriented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Case (i) differences: cuts `[Δf⁻, Δf⁺]`.
    Direct,
    /// Case (ii) differences: cuts `[Δf⁺, Δf⁻]`.
    Swapped,
    /// Both constructions coincide.
    Either,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub side: Side,
    pub label: String,
    pub probes: usize,
    pub orientation: Orientation,
    pub spread: f64,
}

/// A hypothesis measured at sample points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Evidence {
    pub fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Evidence {
            name: name.into(),
            holds,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeResult {
    pub t: f64,
    pub value: Option<FuzzyNumber>,
    pub case: DiffCase,
    pub residual: f64,
    pub endpoint_report: Vec<EndpointEntry>,
    pub families: Vec<FamilyReport>,
    pub evidence: Vec<Evidence>,
}

/// Classification of `t` after checking that it lies in `T_kappa`.
pub fn check_domain(ts: &TimeScale, t: f64) -> Result<PointClass> {
    if !ts.contains(t) {
        return Err(Error::NotInDomain {
            t,
            reason: "not a point of the time scale".into(),
        });
    }
    if !ts.in_kappa(t) {
        return Err(Error::NotInDomain {
            t,
            reason: "right-scattered minimum is excluded from T_kappa".into(),
        });
    }
    let class = ts.classify(t)?;
    if class.left != SideClass::Scattered
        && class.left != SideClass::Dense
        && class.right != SideClass::Dense
    {
        return Err(Error::NotInDomain {
            t,
            reason: "no approach direction: isolated point without a predecessor".into(),
        });
    }
    Ok(class)
}

/// Probe families on the dense sides of `t`, right side first.
pub fn probe_families(
    ts: &TimeScale,
    t: f64,
    class: &PointClass,
    cfg: &ProbeConfig,
) -> Result<Vec<ProbeFamily>> {
    let mut out = Vec::new();
    for side in [Side::Right, Side::Left] {
        if class.side(side) != SideClass::Dense {
            continue;
        }
        if cfg.subsequence_split {
            for fam in ts.approach_families(t, side, cfg.probe_count, cfg.dense_offset)? {
                out.push(ProbeFamily {
                    side,
                    label: fam.label,
                    continuous: fam.continuous,
                    points: fam.points,
                });
            }
        } else {
            let families = ts.approach_families(t, side, cfg.probe_count, cfg.dense_offset)?;
            let points = ts.approach_sequence_with(t, side, cfg.probe_count, cfg.dense_offset)?;
            out.push(ProbeFamily {
                side,
                label: "merged".into(),
                continuous: families.len() == 1 && families[0].continuous,
                points,
            });
        }
    }
    Ok(out)
}

fn orientation(tags: &[GhCase]) -> Orientation {
    let tail = &tags[tags.len() / 2..];
    let direct = tail.contains(&GhCase::CaseI);
    let swapped = tail.contains(&GhCase::CaseII);
    match (direct, swapped) {
        (true, false) => Orientation::Direct,
        (false, true) => Orientation::Swapped,
        (false, false) => Orientation::Either,
        (true, true) => match tags.iter().rev().find(|t| **t != GhCase::Both) {
            Some(GhCase::CaseI) => Orientation::Direct,
            Some(GhCase::CaseII) => Orientation::Swapped,
            _ => Orientation::Either,
        },
    }
}

/// Case from the ordered family orientations (right side first).
fn case_from_orientations(orients: &[Orientation], value_crisp: bool) -> DiffCase {
    if value_crisp {
        return DiffCase::Crisp;
    }
    let decided: Vec<Orientation> = orients
        .iter()
        .copied()
        .filter(|o| *o != Orientation::Either)
        .collect();
    match decided.first() {
        None => DiffCase::Crisp,
        Some(Orientation::Direct) => {
            if decided.contains(&Orientation::Swapped) {
                DiffCase::SwitchingIII
            } else {
                DiffCase::CaseI
            }
        }
        Some(_) => {
            if decided.contains(&Orientation::Direct) {
                DiffCase::SwitchingIV
            } else {
                DiffCase::CaseII
            }
        }
    }
}

fn crisp_tol(value: &FuzzyNumber, residual: f64, cfg: &ProbeConfig) -> f64 {
    if residual == 0.0 {
        1e-12 * (1.0 + value.magnitude())
    } else {
        cfg.agreement_tol
    }
}

fn eval_all(f: &dyn FuzzyFunction, points: &[f64]) -> Result<Vec<FuzzyNumber>> {
    points.iter().map(|&s| f.eval(s)).collect()
}

/// The ∇_gH derivative of `f` at `t`.
pub fn nabla_gh(
    f: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<DerivativeResult> {
    cfg.validate()?;
    let class = check_domain(ts, t)?;
    let ft = f.eval(t)?;
    let families = probe_families(ts, t, &class, cfg)?;

    if class.left == SideClass::Scattered {
        let rho = ts.rho(t)?;
        let nu = t - rho;
        let fr = f.eval(rho)?;
        let (value, tag) = FuzzyNumber::quotient(&ft, &fr, nu, t)?;
        let crisp = value.is_crisp(crisp_tol(&value, 0.0, cfg));
        let case = match tag {
            _ if crisp => DiffCase::Crisp,
            GhCase::CaseI => DiffCase::CaseI,
            GhCase::CaseII => DiffCase::CaseII,
            _ => DiffCase::Crisp,
        };
        let evidence = scattered_evidence(f, rho, &ft, &fr, &value, &families, cfg)?;
        let endpoint_report = endpoint::scattered_report(&ft, &fr, nu);
        return Ok(DerivativeResult {
            t,
            value: Some(value),
            case,
            residual: 0.0,
            endpoint_report,
            families: Vec::new(),
            evidence,
        });
    }

    let mut limits: Vec<FamilyLimit<FuzzyNumber>> = Vec::with_capacity(families.len());
    let mut values_per_family = Vec::with_capacity(families.len());
    for fam in &families {
        let values = eval_all(f, &fam.points)?;
        let qs = quotients(fam, t, &ft, &values)?;
        limits.push(family_limit(fam, qs, cfg.richardson));
        values_per_family.push(values);
    }
    let (value, residual) = combine(&limits);
    if residual > cfg.agreement_tol {
        return Err(Error::LimitDisagreement {
            residual,
            tol: cfg.agreement_tol,
        });
    }
    let reports: Vec<FamilyReport> = limits
        .iter()
        .map(|l| FamilyReport {
            side: l.side,
            label: l.label.clone(),
            probes: l.probes,
            orientation: orientation(&l.tags),
            spread: l.spread,
        })
        .collect();
    let orients: Vec<Orientation> = reports.iter().map(|r| r.orientation).collect();
    let case = case_from_orientations(&orients, value.is_crisp(crisp_tol(&value, residual, cfg)));
    let endpoint_report = endpoint::dense_report(&families, t, &ft, &values_per_family, cfg);
    let evidence = dense_evidence(&families, &ft, &values_per_family)?;
    Ok(DerivativeResult {
        t,
        value: Some(value),
        case,
        residual,
        endpoint_report,
        families: reports,
        evidence,
    })
}

/// The differentiability case of a computed derivative.
pub fn classify_case(result: &DerivativeResult) -> DiffCase {
    result.case
}

fn scattered_evidence(
    f: &dyn FuzzyFunction,
    rho: f64,
    ft: &FuzzyNumber,
    fr: &FuzzyNumber,
    value: &FuzzyNumber,
    families: &[ProbeFamily],
    cfg: &ProbeConfig,
) -> Result<Vec<Evidence>> {
    let mut out = Vec::new();
    let right: Vec<&ProbeFamily> = families.iter().filter(|f| f.side == Side::Right).collect();
    if right.is_empty() {
        return Ok(out);
    }
    // Left-scattered, right-dense: the limit form of the derivative and the
    // crisp-value theorem can be probed on the right.
    let mut worst_gap = 0.0f64;
    let mut nearest_gap = 0.0f64;
    let mut saw_forward = false;
    let mut saw_backward = false;
    let mut continuity = Vec::new();
    for fam in right {
        let values = eval_all(f, &fam.points)?;
        for (i, (&s, fs)) in fam.points.iter().zip(&values).enumerate() {
            let r = fs.gh_diff(fr)?;
            saw_forward |= r.case.admits_i();
            saw_backward |= r.case.admits_ii();
            if let Some(w) = r.value {
                let gap = w.div_scalar(s - rho).hausdorff(value)?;
                worst_gap = worst_gap.max(gap);
                if i + 1 == fam.points.len() {
                    nearest_gap = nearest_gap.max(gap);
                }
            }
            continuity.push(fs.hausdorff(ft)?);
        }
    }
    out.push(Evidence::new(
        "limit form on right probes",
        nearest_gap <= cfg.agreement_tol,
        format!("nearest gap {nearest_gap:e}, worst {worst_gap:e}"),
    ));
    let last = continuity.last().copied().unwrap_or(0.0);
    out.push(Evidence::new(
        "continuity at t",
        continuity
            .first()
            .is_none_or(|&first| last <= first + cfg.agreement_tol),
        format!("D(f(s), f(t)) at nearest probe {last:e}"),
    ));
    if saw_forward && saw_backward {
        let crisp = value.is_crisp(cfg.agreement_tol);
        out.push(Evidence::new(
            "crisp value when both H-difference orientations occur",
            crisp,
            format!("max cut length {:e}", value.support_len()),
        ));
    }
    Ok(out)
}

fn dense_evidence(
    families: &[ProbeFamily],
    ft: &FuzzyNumber,
    values: &[Vec<FuzzyNumber>],
) -> Result<Vec<Evidence>> {
    let mut holds = true;
    let mut detail = Vec::new();
    for (fam, vals) in families.iter().zip(values) {
        let d: Vec<f64> = vals
            .iter()
            .map(|v| v.hausdorff(ft))
            .collect::<Result<_>>()?;
        let first = d.first().copied().unwrap_or(0.0);
        let last = d.last().copied().unwrap_or(0.0);
        holds &= last <= first * (1.0 + 1e-9) + 1e-15;
        detail.push(format!("{}: {last:e}", fam.label));
    }
    Ok(vec![Evidence::new(
        "continuity at t",
        holds,
        format!("D(f(s), f(t)) at nearest probe: {}", detail.join(", ")),
    )])
}

/// The nabla derivative of a real function.
pub fn nabla_scalar(
    g: &dyn ScalarFunction,
    ts: &TimeScale,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<f64> {
    cfg.validate()?;
    let class = check_domain(ts, t)?;
    let gt = g.eval(t)?;
    if class.left == SideClass::Scattered {
        let rho = ts.rho(t)?;
        return Ok((gt - g.eval(rho)?) / (t - rho));
    }
    let families = probe_families(ts, t, &class, cfg)?;
    let mut limits: Vec<FamilyLimit<f64>> = Vec::new();
    for fam in &families {
        let values: Vec<f64> = fam
            .points
            .iter()
            .map(|&s| g.eval(s))
            .collect::<Result<_>>()?;
        let qs = quotients(fam, t, &gt, &values)?;
        limits.push(family_limit(fam, qs, cfg.richardson));
    }
    let (value, residual) = combine(&limits);
    if residual > cfg.agreement_tol {
        return Err(Error::LimitDisagreement {
            residual,
            tol: cfg.agreement_tol,
        });
    }
    Ok(value)
}

/// The ∇_gH derivative of the interval function `t ↦ [f(t)]_k`.
fn nabla_level(
    f: &dyn FuzzyFunction,
    k: usize,
    ts: &TimeScale,
    t: f64,
    class: &PointClass,
    families: &[ProbeFamily],
    cfg: &ProbeConfig,
) -> Result<Interval> {
    let lf = LevelFn { f, k };
    let at = lf.eval(t)?;
    if class.left == SideClass::Scattered {
        let rho = ts.rho(t)?;
        return Ok(Interval::quotient(&at, &lf.eval(rho)?, t - rho, t)?.0);
    }
    let mut limits: Vec<FamilyLimit<Interval>> = Vec::new();
    for fam in families {
        let values: Vec<Interval> = fam
            .points
            .iter()
            .map(|&s| lf.eval(s))
            .collect::<Result<_>>()?;
        let qs = quotients(fam, t, &at, &values)?;
        limits.push(family_limit(fam, qs, cfg.richardson));
    }
    let (value, residual) = combine(&limits);
    if residual > cfg.agreement_tol {
        return Err(Error::LimitDisagreement {
            residual,
            tol: cfg.agreement_tol,
        });
    }
    Ok(value)
}

/// Residual of `f(t) = f(ρ(t)) ⊕ ν(t)∇f(t)` or
/// `f(ρ(t)) = f(t) ⊕ (−1)ν(t)∇f(t)`, whichever holds better.
pub fn check_rho_identity(
    f: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<f64> {
    let d = nabla_gh(f, ts, t, cfg)?;
    let value = d.value.expect("successful derivative has a value");
    let rho = ts.rho(t)?;
    let nu = t - rho;
    let ft = f.eval(t)?;
    let fr = f.eval(rho)?;
    let step = value.scalar_mul(nu);
    let first = fr.add(&step)?.hausdorff(&ft)?;
    let second = ft.add(&step.scalar_mul(-1.0))?.hausdorff(&fr)?;
    Ok(first.min(second))
}

/// Worst gap between the cuts of ∇_gH f(t) and the independently computed
/// derivatives of the level functions, over the grid.
pub fn check_level_consistency(
    f: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<f64> {
    let d = nabla_gh(f, ts, t, cfg)?;
    let value = d.value.expect("successful derivative has a value");
    let class = check_domain(ts, t)?;
    let families = probe_families(ts, t, &class, cfg)?;
    let mut gap = 0.0f64;
    for k in 0..=value.k() {
        let iv = nabla_level(f, k, ts, t, &class, &families, cfg)?;
        gap = gap.max(iv.hausdorff(&value.cut(k)));
    }
    Ok(gap)
}

/// Evidence for the characterization theorem's H-difference hypothesis.
///
/// The hypothesis is read with `s` ranging over the left-scattered probe
/// points of the neighbourhood itself: at each such `s` either
/// `f(t) ⊖_H f(s)` and `f(t) ⊖_H f(ρ(s))` exist, or `f(s) ⊖_H f(t)` and
/// `f(ρ(s)) ⊖_H f(t)` exist.
pub fn characterization_hypothesis(
    f: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<Evidence> {
    let class = check_domain(ts, t)?;
    let families = probe_families(ts, t, &class, cfg)?;
    let ft = f.eval(t)?;
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut candidates: Vec<f64> = families.iter().flat_map(|f| f.points.clone()).collect();
    if class.left == SideClass::Scattered {
        candidates.push(t);
    }
    for s in candidates {
        if !ts.classify(s)?.is_left_scattered() {
            continue;
        }
        let fs = f.eval(s)?;
        let fps = f.eval(ts.rho(s)?)?;
        let backward = ft.h_diff(&fs)?.is_some() && ft.h_diff(&fps)?.is_some();
        let forward = fs.h_diff(&ft)?.is_some() && fps.h_diff(&ft)?.is_some();
        checked += 1;
        if !(backward || forward) {
            failures.push(s);
        }
    }
    Ok(Evidence::new(
        "H-differences at left-scattered neighbourhood points",
        failures.is_empty(),
        format!(
            "reading: s is a point of the neighbourhood (f(s), f(rho(s))); {checked} points checked, {} failed{}",
            failures.len(),
            failures
                .first()
                .map(|s| format!(", first at {s}"))
                .unwrap_or_default()
        ),
    ))
}

#[cfg(test)]
mod tests;
