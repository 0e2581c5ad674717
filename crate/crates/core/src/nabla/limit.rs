//! One-sided limit estimation from difference quotients along approach
//! families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, GhCase, Interval};
use crate::timescale::Side;

/// Values that difference quotients can take.
pub(crate) trait LimitSpace: Clone {
    fn distance(&self, other: &Self) -> f64;
    /// First-order Richardson step `2 fine - coarse` for a halved offset.
    fn extrapolate(fine: &Self, coarse: &Self) -> Self;
    fn mean(items: &[Self]) -> Self;
    /// `(a ⊖ b) / h` for `h > 0`, with the case tag of the difference.
    fn quotient(a: &Self, b: &Self, h: f64, at: f64) -> Result<(Self, GhCase)>;
}

impl LimitSpace for f64 {
    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }

    fn extrapolate(fine: &Self, coarse: &Self) -> Self {
        2.0 * fine - coarse
    }

    fn mean(items: &[Self]) -> Self {
        items.iter().sum::<f64>() / items.len() as f64
    }

    fn quotient(a: &Self, b: &Self, h: f64, _at: f64) -> Result<(Self, GhCase)> {
        Ok(((a - b) / h, GhCase::Both))
    }
}

impl LimitSpace for Interval {
    fn distance(&self, other: &Self) -> f64 {
        self.hausdorff(other)
    }

    fn extrapolate(fine: &Self, coarse: &Self) -> Self {
        let lo = 2.0 * fine.lo - coarse.lo;
        let hi = 2.0 * fine.hi - coarse.hi;
        Interval {
            lo: lo.min(hi),
            hi: lo.max(hi),
        }
    }

    fn mean(items: &[Self]) -> Self {
        let n = items.len() as f64;
        Interval {
            lo: items.iter().map(|i| i.lo).sum::<f64>() / n,
            hi: items.iter().map(|i| i.hi).sum::<f64>() / n,
        }
    }

    fn quotient(a: &Self, b: &Self, h: f64, _at: f64) -> Result<(Self, GhCase)> {
        let d1 = a.lo - b.lo;
        let d2 = a.hi - b.hi;
        let tag = if d1 < d2 {
            GhCase::CaseI
        } else if d1 > d2 {
            GhCase::CaseII
        } else {
            GhCase::Both
        };
        let d = a.gh_diff(b);
        Ok((
            Interval {
                lo: d.lo / h,
                hi: d.hi / h,
            },
            tag,
        ))
    }
}

impl LimitSpace for FuzzyNumber {
    fn distance(&self, other: &Self) -> f64 {
        self.hausdorff(other).unwrap_or(f64::INFINITY)
    }

    fn extrapolate(fine: &Self, coarse: &Self) -> Self {
        let lo = fine
            .lower()
            .iter()
            .zip(coarse.lower())
            .map(|(f, c)| 2.0 * f - c)
            .collect();
        let hi = fine
            .upper()
            .iter()
            .zip(coarse.upper())
            .map(|(f, c)| 2.0 * f - c)
            .collect();
        FuzzyNumber::repaired(lo, hi).unwrap_or_else(|_| fine.clone())
    }

    fn mean(items: &[Self]) -> Self {
        if items.len() == 1 {
            return items[0].clone();
        }
        let n = items.len() as f64;
        let levels = items[0].k() + 1;
        let avg = |pick: fn(&FuzzyNumber) -> &[f64]| -> Vec<f64> {
            (0..levels)
                .map(|k| items.iter().map(|u| pick(u)[k]).sum::<f64>() / n)
                .collect()
        };
        FuzzyNumber::repaired(avg(FuzzyNumber::lower), avg(FuzzyNumber::upper))
            .unwrap_or_else(|_| items[0].clone())
    }

    fn quotient(a: &Self, b: &Self, h: f64, at: f64) -> Result<(Self, GhCase)> {
        let r = a.gh_diff(b)?;
        match r.value {
            Some(w) => Ok((w.div_scalar(h), r.case)),
            None => Err(Error::GhNonexistent { at }),
        }
    }
}

/// Limit estimate along one approach family.
#[derive(Debug, Clone)]
pub(crate) struct FamilyLimit<V> {
    pub side: Side,
    pub label: String,
    pub estimate: V,
    /// Largest pairwise distance over the tail half of the sequence.
    pub spread: f64,
    /// Case tags of the underlying differences, far to near.
    pub tags: Vec<GhCase>,
    pub probes: usize,
}

/// Approach points of one generator on one side, far to near.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeFamily {
    pub side: Side,
    pub label: String,
    pub continuous: bool,
    pub points: Vec<f64>,
}

/// Difference quotients of `values` at the family points against `at_t`.
pub(crate) fn quotients<V: LimitSpace>(
    fam: &ProbeFamily,
    t: f64,
    at_t: &V,
    values: &[V],
) -> Result<Vec<(V, GhCase)>> {
    fam.points
        .iter()
        .zip(values)
        .map(|(&s, v)| match fam.side {
            Side::Right => V::quotient(v, at_t, s - t, s),
            Side::Left => V::quotient(at_t, v, t - s, s),
        })
        .collect()
}

pub(crate) fn family_limit<V: LimitSpace>(
    fam: &ProbeFamily,
    qs: Vec<(V, GhCase)>,
    richardson: bool,
) -> FamilyLimit<V> {
    let tags: Vec<GhCase> = qs.iter().map(|q| q.1).collect();
    let raw: Vec<V> = qs.into_iter().map(|q| q.0).collect();
    let seq: Vec<V> = if richardson && fam.continuous && raw.len() >= 3 {
        raw.windows(2)
            .map(|w| V::extrapolate(&w[1], &w[0]))
            .collect()
    } else {
        raw
    };
    let tail = &seq[seq.len() - seq.len().div_ceil(2).max(1)..];
    let tail = if tail.len() < 2 && seq.len() >= 2 {
        &seq[seq.len() - 2..]
    } else {
        tail
    };
    let mut spread = 0.0f64;
    for i in 0..tail.len() {
        for j in i + 1..tail.len() {
            spread = spread.max(tail[i].distance(&tail[j]));
        }
    }
    FamilyLimit {
        side: fam.side,
        label: fam.label.clone(),
        estimate: seq.last().expect("non-empty family").clone(),
        spread,
        tags,
        probes: fam.points.len(),
    }
}

/// Level-wise mean of the family estimates and the worst disagreement
/// among them (including each family's own spread).
pub(crate) fn combine<V: LimitSpace>(fams: &[FamilyLimit<V>]) -> (V, f64) {
    let estimates: Vec<V> = fams.iter().map(|f| f.estimate.clone()).collect();
    let mut residual = fams.iter().map(|f| f.spread).fold(0.0, f64::max);
    residual = residual.max(max_pairwise(&estimates));
    (V::mean(&estimates), residual)
}

pub(crate) fn max_pairwise<V: LimitSpace>(items: &[V]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            worst = worst.max(items[i].distance(&items[j]));
        }
    }
    worst
}
