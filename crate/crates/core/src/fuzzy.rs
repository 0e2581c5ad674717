//! Fuzzy numbers stored as nested α-cuts on a uniform grid `α_k = k/K`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_LEVELS: usize = 100;

/// Forgiven monotonicity slack, relative to the magnitude of the operands.
pub const MONOTONE_TOL: f64 = 1e-10;

const GRID_SNAP: f64 = 1e-9;

/// A bounded closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidFuzzyNumber(format!(
                "interval needs lo <= hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    pub fn scale(&self, k: f64) -> Interval {
        if k >= 0.0 {
            Interval {
                lo: k * self.lo,
                hi: k * self.hi,
            }
        } else {
            Interval {
                lo: k * self.hi,
                hi: k * self.lo,
            }
        }
    }

    /// Interval gH-difference; always exists.
    pub fn gh_diff(&self, other: &Interval) -> Interval {
        let d1 = self.lo - other.lo;
        let d2 = self.hi - other.hi;
        Interval {
            lo: d1.min(d2),
            hi: d1.max(d2),
        }
    }

    pub fn hausdorff(&self, other: &Interval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Existence case of a gH-difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GhCase {
    /// `u = v + w`
    CaseI,
    /// `v = u + (-1) w`
    CaseII,
    /// Both constructions are valid and coincide.
    Both,
    None,
}

impl GhCase {
    pub fn admits_i(self) -> bool {
        matches!(self, GhCase::CaseI | GhCase::Both)
    }

    pub fn admits_ii(self) -> bool {
        matches!(self, GhCase::CaseII | GhCase::Both)
    }
}

impl fmt::Display for GhCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GhCase::CaseI => "CaseI",
            GhCase::CaseII => "CaseII",
            GhCase::Both => "Both",
            GhCase::None => "None",
        };
        f.write_str(s)
    }
}

/// A constraint that a candidate difference failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Which construction was checked: `"i"` or `"ii"`.
    pub construction: &'static str,
    pub constraint: &'static str,
    pub level: usize,
    pub amount: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case ({}) {} at level {} by {:e}",
            self.construction, self.constraint, self.level, self.amount
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhDiffResult {
    pub value: Option<FuzzyNumber>,
    pub case: GhCase,
    pub violations: Vec<Violation>,
}

/// A fuzzy number given by its α-cuts on the grid `k/K`, `k = 0..=K`.
///
/// `K = 0` holds a single cut and represents an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNumber {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl FuzzyNumber {
    /// Builds from endpoint arrays, rejecting anything that is not a valid
    /// nested family of cuts.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let u = FuzzyNumber { lower, upper };
        u.validate(0.0)?;
        Ok(u)
    }

    /// Builds from endpoint arrays, projecting small violations away:
    /// lower becomes a running max, upper a running min, and crossed top
    /// levels collapse onto a common midpoint.
    pub fn repaired(mut lower: Vec<f64>, mut upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::InvalidFuzzyNumber(
                "lower and upper need the same nonzero length".into(),
            ));
        }
        if lower.iter().chain(&upper).any(|x| !x.is_finite()) {
            return Err(Error::InvalidFuzzyNumber("non-finite endpoint".into()));
        }
        for k in 1..lower.len() {
            lower[k] = lower[k].max(lower[k - 1]);
            upper[k] = upper[k].min(upper[k - 1]);
        }
        if let Some(first) = (0..lower.len()).find(|&k| lower[k] > upper[k]) {
            let top = lower.len() - 1;
            let mut mid = 0.5 * (lower[top] + upper[top]);
            if first > 0 {
                mid = mid.clamp(lower[first - 1], upper[first - 1]);
            }
            for k in first..=top {
                lower[k] = mid;
                upper[k] = mid;
            }
        }
        Ok(FuzzyNumber { lower, upper })
    }

    pub fn triangular(a: f64, b: f64, c: f64, k: usize) -> Result<Self> {
        if !(a <= b && b <= c) {
            return Err(Error::OrderViolation { a, b, c });
        }
        if !(a.is_finite() && c.is_finite()) {
            return Err(Error::InvalidFuzzyNumber("non-finite triangle".into()));
        }
        let n = k.max(1);
        let mut lower = Vec::with_capacity(n + 1);
        let mut upper = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let alpha = i as f64 / n as f64;
            lower.push((a + alpha * (b - a)).min(b));
            upper.push((c + alpha * (b - c)).max(b));
        }
        lower[n] = b;
        upper[n] = b;
        Ok(FuzzyNumber { lower, upper })
    }

    pub fn crisp(x: f64, k: usize) -> Self {
        FuzzyNumber {
            lower: vec![x; k + 1],
            upper: vec![x; k + 1],
        }
    }

    pub fn from_interval(iv: Interval) -> Self {
        FuzzyNumber {
            lower: vec![iv.lo],
            upper: vec![iv.hi],
        }
    }

    pub fn zero(k: usize) -> Self {
        Self::crisp(0.0, k)
    }

    /// The grid size `K`.
    pub fn k(&self) -> usize {
        self.lower.len() - 1
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn alpha(&self, k: usize) -> f64 {
        if self.k() == 0 {
            0.0
        } else {
            k as f64 / self.k() as f64
        }
    }

    pub fn cut(&self, k: usize) -> Interval {
        Interval {
            lo: self.lower[k],
            hi: self.upper[k],
        }
    }

    pub fn cuts(&self) -> impl Iterator<Item = Interval> + '_ {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| Interval { lo, hi })
    }

    /// Largest absolute endpoint.
    pub fn magnitude(&self) -> f64 {
        self.lower
            .iter()
            .chain(&self.upper)
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Checks the cut invariants with slack `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFuzzyNumber(m));
        if self.lower.len() != self.upper.len() || self.lower.is_empty() {
            return bad("lower and upper need the same nonzero length".into());
        }
        for k in 0..self.lower.len() {
            if !self.lower[k].is_finite() || !self.upper[k].is_finite() {
                return bad(format!("non-finite endpoint at level {k}"));
            }
            if self.lower[k] > self.upper[k] + tol {
                return bad(format!("lower > upper at level {k}"));
            }
            if k > 0 {
                if self.lower[k] < self.lower[k - 1] - tol {
                    return bad(format!("lower decreases at level {k}"));
                }
                if self.upper[k] > self.upper[k - 1] + tol {
                    return bad(format!("upper increases at level {k}"));
                }
            }
        }
        Ok(())
    }

    fn same_grid(&self, other: &FuzzyNumber) -> Result<()> {
        if self.k() != other.k() {
            return Err(Error::GridMismatch {
                left: self.k(),
                right: other.k(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FuzzyNumber) -> Result<FuzzyNumber> {
        self.same_grid(other)?;
        Ok(FuzzyNumber {
            lower: zip_with(&self.lower, &other.lower, |a, b| a + b),
            upper: zip_with(&self.upper, &other.upper, |a, b| a + b),
        })
    }

    pub fn scalar_mul(&self, k: f64) -> FuzzyNumber {
        let lo: Vec<f64> = self.lower.iter().map(|x| k * x).collect();
        let hi: Vec<f64> = self.upper.iter().map(|x| k * x).collect();
        if k >= 0.0 {
            FuzzyNumber {
                lower: lo,
                upper: hi,
            }
        } else {
            FuzzyNumber {
                lower: hi,
                upper: lo,
            }
        }
    }

    /// Level-wise division by a positive scalar.
    pub fn div_scalar(&self, d: f64) -> FuzzyNumber {
        debug_assert!(d > 0.0);
        FuzzyNumber {
            lower: self.lower.iter().map(|x| x / d).collect(),
            upper: self.upper.iter().map(|x| x / d).collect(),
        }
    }

    /// Generalized Hukuhara difference `self ⊖_gH other` with its case.
    pub fn gh_diff(&self, other: &FuzzyNumber) -> Result<GhDiffResult> {
        self.same_grid(other)?;
        let d1 = zip_with(&self.lower, &other.lower, |a, b| a - b);
        let d2 = zip_with(&self.upper, &other.upper, |a, b| a - b);
        let tol = MONOTONE_TOL * (1.0 + self.magnitude().max(other.magnitude()));

        let mut violations = Vec::new();
        let ok_i = check_construction(&d1, &d2, tol, "i", &mut violations);
        let ok_ii = check_construction(&d2, &d1, tol, "ii", &mut violations);
        let case = match (ok_i, ok_ii) {
            (true, true) => GhCase::Both,
            (true, false) => GhCase::CaseI,
            (false, true) => GhCase::CaseII,
            (false, false) => GhCase::None,
        };
        let value = if case == GhCase::None {
            None
        } else {
            let lo = zip_with(&d1, &d2, f64::min);
            let hi = zip_with(&d1, &d2, f64::max);
            Some(FuzzyNumber::repaired(lo, hi)?)
        };
        if case != GhCase::None {
            violations.clear();
        }
        Ok(GhDiffResult {
            value,
            case,
            violations,
        })
    }

    /// Hukuhara difference: the case (i) branch of [`Self::gh_diff`].
    pub fn h_diff(&self, other: &FuzzyNumber) -> Result<Option<FuzzyNumber>> {
        let r = self.gh_diff(other)?;
        Ok(if r.case.admits_i() { r.value } else { None })
    }

    pub fn hausdorff(&self, other: &FuzzyNumber) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .cuts()
            .zip(other.cuts())
            .map(|(a, b)| a.hausdorff(&b))
            .fold(0.0, f64::max))
    }

    /// The cut at `alpha`, linearly interpolated between grid levels.
    pub fn level(&self, alpha: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        let k = self.k();
        if k == 0 {
            return Ok(self.cut(0));
        }
        let x = alpha * k as f64;
        let r = x.round();
        if (x - r).abs() <= GRID_SNAP {
            return Ok(self.cut(r as usize));
        }
        let i = (x.floor() as usize).min(k - 1);
        let w = x - i as f64;
        let lerp = |v: &[f64]| v[i] + w * (v[i + 1] - v[i]);
        Ok(Interval {
            lo: lerp(&self.lower),
            hi: lerp(&self.upper),
        })
    }

    pub fn len_alpha(&self, alpha: f64) -> Result<f64> {
        Ok(self.level(alpha)?.len().max(0.0))
    }

    /// Width of the widest cut.
    pub fn support_len(&self) -> f64 {
        self.upper[0] - self.lower[0]
    }

    pub fn is_crisp(&self, tol: f64) -> bool {
        self.cuts().all(|c| c.len() <= tol)
    }

    /// Table with columns `alpha,lower,upper`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,lower,upper\n");
        for k in 0..=self.k() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.alpha(k),
                self.lower[k],
                self.upper[k]
            ));
        }
        out
    }
}

impl fmt::Display for FuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = self.k();
        if self.lower[top] == self.upper[top] {
            write!(
                f,
                "({}, {}, {})",
                self.lower[0], self.lower[top], self.upper[0]
            )
        } else {
            write!(
                f,
                "([{}, {}] .. [{}, {}])",
                self.lower[0], self.upper[0], self.lower[top], self.upper[top]
            )
        }
    }
}

fn zip_with(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

fn check_construction(
    lo: &[f64],
    hi: &[f64],
    tol: f64,
    construction: &'static str,
    out: &mut Vec<Violation>,
) -> bool {
    let before = out.len();
    for k in 1..lo.len() {
        let dl = lo[k - 1] - lo[k];
        if dl > tol {
            out.push(Violation {
                construction,
                constraint: "lower endpoint must be non-decreasing",
                level: k,
                amount: dl,
            });
            break;
        }
    }
    for k in 1..hi.len() {
        let du = hi[k] - hi[k - 1];
        if du > tol {
            out.push(Violation {
                construction,
                constraint: "upper endpoint must be non-increasing",
                level: k,
                amount: du,
            });
            break;
        }
    }
    if let Some(k) = (0..lo.len()).find(|&k| lo[k] - hi[k] > tol) {
        out.push(Violation {
            construction,
            constraint: "lower endpoint must not exceed upper",
            level: k,
            amount: lo[k] - hi[k],
        });
    }
    out.len() == before
}

#[derive(Serialize)]
struct LevelsOut<'a> {
    #[serde(rename = "K")]
    k: usize,
    lower: &'a [f64],
    upper: &'a [f64],
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FuzzyIn {
    Levels {
        #[serde(rename = "K")]
        k: Option<usize>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    Tri {
        tri: [f64; 3],
        #[serde(rename = "K")]
        k: Option<usize>,
    },
}

impl Serialize for FuzzyNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LevelsOut {
            k: self.k(),
            lower: &self.lower,
            upper: &self.upper,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FuzzyNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match FuzzyIn::deserialize(d)? {
            FuzzyIn::Levels { k, lower, upper } => {
                if k.is_some_and(|k| k + 1 != lower.len()) {
                    return Err(D::Error::custom("K does not match the level arrays"));
                }
                FuzzyNumber::new(lower, upper).map_err(D::Error::custom)
            }
            FuzzyIn::Tri { tri: [a, b, c], k } => {
                FuzzyNumber::triangular(a, b, c, k.unwrap_or(DEFAULT_LEVELS))
                    .map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tri(a: f64, b: f64, c: f64) -> FuzzyNumber {
        FuzzyNumber::triangular(a, b, c, 10).unwrap()
    }

    fn close(u: &FuzzyNumber, v: &FuzzyNumber, tol: f64) -> bool {
        u.hausdorff(v).unwrap() <= tol
    }

    #[test]
    fn triangular_cuts() {
        let u = FuzzyNumber::triangular(0.0, 1.0, 2.0, 100).unwrap();
        assert_eq!(u.level(0.5).unwrap(), Interval { lo: 0.5, hi: 1.5 });
        let c = FuzzyNumber::triangular(1.0, 1.0, 1.0, 4).unwrap();
        assert_eq!(c, FuzzyNumber::crisp(1.0, 4));
        let e = FuzzyNumber::triangular(0.0, 0.5, 1.0, 100).unwrap();
        for k in 0..=100 {
            let a = k as f64 / 100.0;
            let l = e.level(a).unwrap();
            assert!((l.lo - a / 2.0).abs() < 1e-15);
            assert!((l.hi - (1.0 - a / 2.0)).abs() < 1e-15);
        }
        assert_eq!(
            FuzzyNumber::triangular(2.0, 1.0, 3.0, 10),
            Err(Error::OrderViolation {
                a: 2.0,
                b: 1.0,
                c: 3.0
            })
        );
    }

    #[test]
    fn level_interpolation_and_length() {
        let u = tri(0.0, 1.0, 2.0);
        let l = u.level(0.3).unwrap();
        assert!((l.lo - 0.3).abs() < 1e-15 && (l.hi - 1.7).abs() < 1e-15);
        assert_eq!(u.len_alpha(0.0).unwrap(), 2.0);
        assert_eq!(u.len_alpha(1.0).unwrap(), 0.0);
        let u = FuzzyNumber::triangular(0.0, 1.0, 2.0, 100).unwrap();
        assert!((u.len_alpha(0.25).unwrap() - 1.5).abs() < 1e-15);
        let u = FuzzyNumber::triangular(0.0, 1.0, 2.0, 3).unwrap();
        assert!((u.len_alpha(0.25).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(u.level(1.5), Err(Error::AlphaOutOfRange(1.5)));
        assert_eq!(u.len_alpha(-0.1), Err(Error::AlphaOutOfRange(-0.1)));
    }

    #[test]
    fn arithmetic() {
        assert!(close(
            &tri(0.0, 1.0, 2.0).add(&tri(1.0, 2.0, 3.0)).unwrap(),
            &tri(1.0, 3.0, 5.0),
            1e-15
        ));
        let u = tri(0.0, 1.0, 2.0);
        assert_eq!(u.add(&FuzzyNumber::zero(10)).unwrap(), u);
        assert_eq!(
            FuzzyNumber::crisp(2.0, 3)
                .add(&FuzzyNumber::crisp(3.0, 3))
                .unwrap(),
            FuzzyNumber::crisp(5.0, 3)
        );
        assert!(close(&u.scalar_mul(-1.0), &tri(-2.0, -1.0, 0.0), 1e-15));
        assert!(close(&u.scalar_mul(0.0), &FuzzyNumber::zero(10), 0.0));
        assert!(close(&u.scalar_mul(2.0), &tri(0.0, 2.0, 4.0), 1e-15));
        assert_eq!(
            u.add(&FuzzyNumber::zero(5)),
            Err(Error::GridMismatch { left: 10, right: 5 })
        );
    }

    #[test]
    fn gh_difference_cases() {
        let r = tri(0.0, 2.0, 4.0).gh_diff(&tri(0.0, 1.0, 2.0)).unwrap();
        assert_eq!(r.case, GhCase::CaseI);
        assert!(close(r.value.as_ref().unwrap(), &tri(0.0, 1.0, 2.0), 1e-15));

        let u = tri(-1.0, 0.5, 3.0);
        let r = u.gh_diff(&u).unwrap();
        assert_eq!(r.case, GhCase::Both);
        assert_eq!(r.value.unwrap(), FuzzyNumber::zero(10));

        let r = tri(0.0, 1.0, 2.0).gh_diff(&tri(0.0, 2.0, 4.0)).unwrap();
        assert_eq!(r.case, GhCase::CaseII);
        assert!(close(
            r.value.as_ref().unwrap(),
            &tri(-2.0, -1.0, 0.0),
            1e-15
        ));

        let r = tri(0.0, 1.0, 5.0).gh_diff(&tri(0.0, 3.0, 4.0)).unwrap();
        assert_eq!(r.case, GhCase::None);
        assert!(r.value.is_none());
        assert!(!r.violations.is_empty());
        assert!(r
            .violations
            .iter()
            .any(|v| v.construction == "i" && v.constraint.contains("lower")));
    }

    #[test]
    fn hukuhara_difference() {
        assert!(close(
            &tri(0.0, 2.0, 4.0)
                .h_diff(&tri(0.0, 1.0, 2.0))
                .unwrap()
                .unwrap(),
            &tri(0.0, 1.0, 2.0),
            0.0
        ));
        assert_eq!(
            tri(0.0, 1.0, 2.0).h_diff(&tri(0.0, 2.0, 4.0)).unwrap(),
            None
        );
        let u = tri(1.0, 2.0, 7.0);
        assert_eq!(u.h_diff(&u).unwrap().unwrap(), FuzzyNumber::zero(10));
    }

    #[test]
    fn hausdorff_examples() {
        let d = tri(0.0, 1.0, 2.0).hausdorff(&tri(1.0, 2.0, 3.0)).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let u = tri(0.0, 1.0, 2.0);
        assert_eq!(u.hausdorff(&u).unwrap(), 0.0);
        assert_eq!(
            FuzzyNumber::crisp(0.0, 4)
                .hausdorff(&FuzzyNumber::crisp(3.0, 4))
                .unwrap(),
            3.0
        );
        assert_eq!(
            FuzzyNumber::crisp(-1.5, 4)
                .hausdorff(&FuzzyNumber::crisp(2.0, 4))
                .unwrap(),
            3.5
        );
    }

    #[test]
    fn repair_projects_onto_valid_cuts() {
        let u = FuzzyNumber::repaired(vec![0.0, 1.0, 0.9, 2.1], vec![3.0, 3.1, 2.0, 1.9]).unwrap();
        u.validate(0.0).unwrap();
        assert_eq!(u.lower()[2], 1.0);
        assert_eq!(u.upper()[1], 3.0);
        assert_eq!(u.lower()[3], u.upper()[3]);
    }

    #[test]
    fn strict_constructor_rejects() {
        assert!(FuzzyNumber::new(vec![1.0, 0.0], vec![2.0, 2.0]).is_err());
        assert!(FuzzyNumber::new(vec![0.0, 3.0], vec![2.0, 2.0]).is_err());
        assert!(FuzzyNumber::new(vec![0.0], vec![0.0, 1.0]).is_err());
        assert!(FuzzyNumber::new(vec![f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn json_forms() {
        let u = tri(0.0, 1.0, 2.0);
        let json = serde_json::to_string(&u).unwrap();
        assert!(json.starts_with("{\"K\":10,"));
        let back: FuzzyNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(back, u);
        let t: FuzzyNumber = serde_json::from_str(r#"{"tri":[0,1,2],"K":10}"#).unwrap();
        assert_eq!(t, u);
        let d: FuzzyNumber = serde_json::from_str(r#"{"tri":[0,1,2]}"#).unwrap();
        assert_eq!(d.k(), DEFAULT_LEVELS);
        assert!(serde_json::from_str::<FuzzyNumber>(r#"{"tri":[2,1,0]}"#).is_err());
    }

    #[test]
    fn csv_table() {
        let csv = FuzzyNumber::triangular(0.0, 1.0, 2.0, 2).unwrap().to_csv();
        assert_eq!(csv, "alpha,lower,upper\n0,0,2\n0.5,0.5,1.5\n1,1,1\n");
    }

    #[test]
    fn interval_gh_always_exists() {
        let a = Interval::new(0.0, 1.0).unwrap();
        let b = Interval::new(0.0, 3.0).unwrap();
        assert_eq!(a.gh_diff(&b), Interval { lo: -2.0, hi: 0.0 });
        assert!(Interval::new(1.0, 0.0).is_err());
    }

    fn arb_tri() -> impl Strategy<Value = FuzzyNumber> {
        (-10.0..10.0f64, 0.0..5.0f64, 0.0..5.0f64)
            .prop_map(|(b, l, r)| FuzzyNumber::triangular(b - l, b, b + r, 16).unwrap())
    }

    proptest! {
        #[test]
        fn outputs_are_valid(u in arb_tri(), v in arb_tri(), k in -3.0..3.0f64) {
            u.add(&v).unwrap().validate(0.0).unwrap();
            u.scalar_mul(k).validate(0.0).unwrap();
            if let Some(w) = u.gh_diff(&v).unwrap().value {
                w.validate(0.0).unwrap();
            }
        }

        #[test]
        fn gh_reconstructs_operand(u in arb_tri(), v in arb_tri()) {
            let r = u.gh_diff(&v).unwrap();
            let scale = 1.0 + u.magnitude().max(v.magnitude());
            if let Some(w) = r.value {
                if r.case.admits_i() {
                    prop_assert!(v.add(&w).unwrap().hausdorff(&u).unwrap() <= 1e-12 * scale);
                }
                if r.case.admits_ii() {
                    prop_assert!(u.add(&w.scalar_mul(-1.0)).unwrap().hausdorff(&v).unwrap() <= 1e-12 * scale);
                }
            }
        }

        #[test]
        fn h_and_gh_agree(u in arb_tri(), v in arb_tri()) {
            if let Some(h) = u.h_diff(&v).unwrap() {
                let g = u.gh_diff(&v).unwrap();
                prop_assert!(g.case.admits_i());
                prop_assert_eq!(g.value.unwrap(), h);
            }
        }

        #[test]
        fn difference_of_sum(u in arb_tri(), w in arb_tri()) {
            // (u + w) ⊖_gH u = w through case (i)
            let s = u.add(&w).unwrap();
            let r = s.gh_diff(&u).unwrap();
            prop_assert!(r.case.admits_i());
            prop_assert!(r.value.unwrap().hausdorff(&w).unwrap() <= 1e-12 * (1.0 + s.magnitude()));
        }
    }
}
