//! One-sided nabla derivatives of the endpoint functions `f_α^-` and `f_α^+`.

use serde::Serialize;

use super::limit::{family_limit, max_pairwise, quotients, FamilyLimit, ProbeFamily};
use super::{check_domain, probe_families, FuzzyFunction, ProbeConfig};
use crate::error::Result;
use crate::fuzzy::FuzzyNumber;
use crate::timescale::{Side, SideClass, TimeScale};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Existence {
    Exists,
    /// Two subsequence limits differ by more than ten times the tolerance.
    Absent,
    /// Disagreement above tolerance but too small to certify absence.
    Inconclusive,
}

impl Existence {
    pub fn exists(self) -> bool {
        self == Existence::Exists
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointFlags {
    pub dminus_lower: Existence,
    pub dplus_lower: Existence,
    pub dminus_upper: Existence,
    pub dplus_upper: Existence,
    /// Two-sided `∇f_α^-`.
    pub lower: Existence,
    /// Two-sided `∇f_α^+`.
    pub upper: Existence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsequenceLimit {
    pub side: Side,
    /// `"lower"` or `"upper"`.
    pub endpoint: &'static str,
    pub generator: String,
    pub value: f64,
    pub spread: f64,
}

/// One-sided derivative estimates of both endpoints at one grid level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndpointEntry {
    pub alpha: f64,
    pub dminus_lower: f64,
    pub dplus_lower: f64,
    pub dminus_upper: f64,
    pub dplus_upper: f64,
    pub exists: EndpointFlags,
    pub subsequence_limits: Vec<SubsequenceLimit>,
}

impl EndpointEntry {
    pub fn all_exist(&self) -> bool {
        self.exists.lower.exists() && self.exists.upper.exists()
    }
}

/// Endpoint derivatives of `f` at `t` for every grid level.
pub fn endpoint_derivatives(
    f: &dyn FuzzyFunction,
    ts: &TimeScale,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<Vec<EndpointEntry>> {
    cfg.validate()?;
    let class = check_domain(ts, t)?;
    let ft = f.eval(t)?;
    if class.left == SideClass::Scattered {
        let rho = ts.rho(t)?;
        return Ok(scattered_report(&ft, &f.eval(rho)?, t - rho));
    }
    let families = probe_families(ts, t, &class, cfg)?;
    let values: Vec<Vec<FuzzyNumber>> = families
        .iter()
        .map(|fam| fam.points.iter().map(|&s| f.eval(s)).collect())
        .collect::<Result<_>>()?;
    Ok(dense_report(&families, t, &ft, &values, cfg))
}

pub(crate) fn scattered_report(ft: &FuzzyNumber, fr: &FuzzyNumber, nu: f64) -> Vec<EndpointEntry> {
    (0..=ft.k())
        .map(|k| {
            let lower = (ft.lower()[k] - fr.lower()[k]) / nu;
            let upper = (ft.upper()[k] - fr.upper()[k]) / nu;
            EndpointEntry {
                alpha: ft.alpha(k),
                dminus_lower: lower,
                dplus_lower: lower,
                dminus_upper: upper,
                dplus_upper: upper,
                exists: EndpointFlags {
                    dminus_lower: Existence::Exists,
                    dplus_lower: Existence::Exists,
                    dminus_upper: Existence::Exists,
                    dplus_upper: Existence::Exists,
                    lower: Existence::Exists,
                    upper: Existence::Exists,
                },
                subsequence_limits: Vec::new(),
            }
        })
        .collect()
}

struct SideEstimate {
    value: f64,
    existence: Existence,
}

fn side_estimate(limits: &[&FamilyLimit<f64>], tol: f64) -> Option<SideEstimate> {
    let primary = limits.first()?;
    let estimates: Vec<f64> = limits.iter().map(|l| l.estimate).collect();
    let split = max_pairwise(&estimates);
    let spread = limits.iter().map(|l| l.spread).fold(0.0, f64::max);
    let existence = if split > 10.0 * tol {
        Existence::Absent
    } else if split.max(spread) > tol {
        Existence::Inconclusive
    } else {
        Existence::Exists
    };
    Some(SideEstimate {
        value: primary.estimate,
        existence,
    })
}

fn two_sided(minus: &SideEstimate, plus: &SideEstimate, tol: f64) -> Existence {
    use Existence::*;
    match (minus.existence, plus.existence) {
        (Absent, _) | (_, Absent) => Absent,
        (Exists, Exists) => {
            let gap = (minus.value - plus.value).abs();
            if gap <= tol {
                Exists
            } else if gap > 10.0 * tol {
                Absent
            } else {
                Inconclusive
            }
        }
        _ => Inconclusive,
    }
}

pub(crate) fn dense_report(
    families: &[ProbeFamily],
    t: f64,
    ft: &FuzzyNumber,
    values: &[Vec<FuzzyNumber>],
    cfg: &ProbeConfig,
) -> Vec<EndpointEntry> {
    let tol = cfg.agreement_tol;
    (0..=ft.k())
        .map(|k| {
            let mut subsequence_limits = Vec::new();
            let mut limits_for = |endpoint: &'static str| -> Vec<FamilyLimit<f64>> {
                let pick = |u: &FuzzyNumber| {
                    if endpoint == "lower" {
                        u.lower()[k]
                    } else {
                        u.upper()[k]
                    }
                };
                let at = pick(ft);
                let out: Vec<FamilyLimit<f64>> = families
                    .iter()
                    .zip(values)
                    .map(|(fam, vals)| {
                        let v: Vec<f64> = vals.iter().map(pick).collect();
                        let qs = quotients(fam, t, &at, &v).expect("real quotients are total");
                        family_limit(fam, qs, cfg.richardson)
                    })
                    .collect();
                for l in &out {
                    subsequence_limits.push(SubsequenceLimit {
                        side: l.side,
                        endpoint,
                        generator: l.label.clone(),
                        value: l.estimate,
                        spread: l.spread,
                    });
                }
                out
            };
            let lower = limits_for("lower");
            let upper = limits_for("upper");
            let side = |ls: &[FamilyLimit<f64>], s: Side| -> Option<SideEstimate> {
                let on: Vec<&FamilyLimit<f64>> = ls.iter().filter(|l| l.side == s).collect();
                side_estimate(&on, tol)
            };
            let pair = |ls: &[FamilyLimit<f64>]| -> (SideEstimate, SideEstimate) {
                let minus = side(ls, Side::Left);
                let plus = side(ls, Side::Right);
                match (minus, plus) {
                    (Some(m), Some(p)) => (m, p),
                    // a side without approach points inherits the other
                    (Some(m), None) => (
                        SideEstimate {
                            value: m.value,
                            existence: m.existence,
                        },
                        m,
                    ),
                    (None, Some(p)) => (
                        SideEstimate {
                            value: p.value,
                            existence: p.existence,
                        },
                        p,
                    ),
                    (None, None) => unreachable!("a dense point has at least one family"),
                }
            };
            let (lm, lp) = pair(&lower);
            let (um, up) = pair(&upper);
            EndpointEntry {
                alpha: ft.alpha(k),
                dminus_lower: lm.value,
                dplus_lower: lp.value,
                dminus_upper: um.value,
                dplus_upper: up.value,
                exists: EndpointFlags {
                    dminus_lower: lm.existence,
                    dplus_lower: lp.existence,
                    dminus_upper: um.existence,
                    dplus_upper: up.existence,
                    lower: two_sided(&lm, &lp, tol),
                    upper: two_sided(&um, &up, tol),
                },
                subsequence_limits,
            }
        })
        .collect()
}
