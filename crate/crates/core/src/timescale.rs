//! Time scales: closed subsets of the real line built from interval and
//! discrete-generator pieces, with jump operators, graininess, point
//! classification and approach sequences for probing one-sided limits.

use std::cmp::Ordering;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for deciding that a real number is a point of the scale.
pub const MEMBERSHIP_TOL: f64 = 1e-12;
/// Relative jump size below which a side is treated as dense.
pub const DENSITY_TOL: f64 = 1e-9;
/// Default first offset (relative to `max(1, |t|)`) used on interval sides.
pub const DEFAULT_DENSE_OFFSET: f64 = 1e-3;

pub(crate) fn membership_tol(t: f64) -> f64 {
    MEMBERSHIP_TOL * t.abs().max(1.0)
}

fn density_tol(t: f64) -> f64 {
    DENSITY_TOL * t.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One building block of a time scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    /// The closed interval `[a, b]`.
    Interval { a: f64, b: f64 },
    /// A finite list of points.
    Points { points: Vec<f64> },
    /// `{start + i*step : i = 0, 1, ...} ∩ [start, stop]`.
    Arithmetic { start: f64, stop: f64, step: f64 },
    /// `{base^k : min_exp <= k <= max_exp}`.
    Geometric {
        base: f64,
        min_exp: i32,
        max_exp: i32,
    },
    /// `{scale/n : 1 <= n <= count}`, plus the accumulation point 0 when
    /// `accumulate` is set. The truncation stands in for the full sequence.
    Reciprocal {
        scale: f64,
        count: u32,
        accumulate: bool,
    },
}

impl Piece {
    fn kind_rank(&self) -> u8 {
        match self {
            Piece::Interval { .. } => 0,
            Piece::Points { .. } => 1,
            Piece::Arithmetic { .. } => 2,
            Piece::Geometric { .. } => 3,
            Piece::Reciprocal { .. } => 4,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Piece::Interval { .. } => "interval",
            Piece::Points { .. } => "points",
            Piece::Arithmetic { .. } => "hgrid",
            Piece::Geometric { .. } => "qgrid",
            Piece::Reciprocal { .. } => "recip",
        }
    }

    /// Numeric parameters in DSL argument order; used to match piece references.
    pub fn params(&self) -> Vec<f64> {
        match self {
            Piece::Interval { a, b } => vec![*a, *b],
            Piece::Points { points } => points.clone(),
            Piece::Arithmetic { start, stop, step } => vec![*start, *stop, *step],
            Piece::Geometric {
                base,
                min_exp,
                max_exp,
            } => vec![*base, *min_exp as f64, *max_exp as f64],
            Piece::Reciprocal { scale, count, .. } => vec![*scale, *count as f64],
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTimeScale(msg));
        match self {
            Piece::Interval { a, b } => {
                if !a.is_finite() || !b.is_finite() || a > b {
                    return bad(format!("interval({a}, {b}) needs finite a <= b"));
                }
            }
            Piece::Points { points } => {
                if points.is_empty() || points.iter().any(|p| !p.is_finite()) {
                    return bad("points(...) needs at least one finite point".into());
                }
            }
            Piece::Arithmetic { start, stop, step } => {
                if !(start.is_finite() && stop.is_finite() && step.is_finite())
                    || *step <= 0.0
                    || start > stop
                {
                    return bad(format!(
                        "hgrid({start}, {stop}, {step}) needs start <= stop and step > 0"
                    ));
                }
                if (stop - start) / step > 1e7 {
                    return bad("hgrid has more than 1e7 points".into());
                }
            }
            Piece::Geometric {
                base,
                min_exp,
                max_exp,
            } => {
                if !base.is_finite() || *base <= 1.0 || min_exp > max_exp {
                    return bad(format!(
                        "qgrid({base}, {min_exp}, {max_exp}) needs q > 1 and kmin <= kmax"
                    ));
                }
                let top = base.powi(*max_exp);
                let bottom = base.powi(*min_exp);
                if !top.is_finite() || bottom == 0.0 {
                    return bad("qgrid exponent range overflows".into());
                }
            }
            Piece::Reciprocal { scale, count, .. } => {
                if !scale.is_finite() || *scale == 0.0 || *count == 0 {
                    return bad(format!(
                        "recip({scale}, {count}) needs scale != 0 and N >= 1"
                    ));
                }
            }
        }
        Ok(())
    }

    fn lower_bound(&self) -> f64 {
        self.realized_bounds().0
    }

    fn realized_bounds(&self) -> (f64, f64) {
        match self {
            Piece::Interval { a, b } => (*a, *b),
            Piece::Points { points } => points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
                    (lo.min(p), hi.max(p))
                }),
            Piece::Arithmetic { start, .. } => {
                let pts = self.discrete_points();
                (*start, *pts.last().unwrap_or(start))
            }
            Piece::Geometric {
                base,
                min_exp,
                max_exp,
            } => (base.powi(*min_exp), base.powi(*max_exp)),
            Piece::Reciprocal {
                scale, accumulate, ..
            } => {
                let far = *scale;
                let near = if *accumulate {
                    0.0
                } else {
                    scale / self.recip_count() as f64
                };
                (far.min(near), far.max(near))
            }
        }
    }

    fn recip_count(&self) -> u32 {
        match self {
            Piece::Reciprocal { count, .. } => *count,
            _ => 0,
        }
    }

    /// All points generated by a discrete piece (empty for intervals).
    pub fn discrete_points(&self) -> Vec<f64> {
        match self {
            Piece::Interval { .. } => Vec::new(),
            Piece::Points { points } => points.clone(),
            Piece::Arithmetic { start, stop, step } => {
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| start + i as f64 * step).collect()
            }
            Piece::Geometric {
                base,
                min_exp,
                max_exp,
            } => (*min_exp..=*max_exp).map(|k| base.powi(k)).collect(),
            Piece::Reciprocal {
                scale,
                count,
                accumulate,
            } => {
                let mut pts: Vec<f64> = (1..=*count).map(|n| scale / n as f64).collect();
                if *accumulate {
                    pts.push(0.0);
                }
                pts
            }
        }
    }

    /// Membership of `t` in the set generated by this piece alone.
    pub fn contains(&self, t: f64) -> bool {
        let tol = membership_tol(t);
        match self {
            Piece::Interval { a, b } => t >= a - tol && t <= b + tol,
            Piece::Points { points } => points.iter().any(|p| (p - t).abs() <= tol),
            Piece::Arithmetic { start, step, .. } => {
                let i = ((t - start) / step).round();
                let n = ((self.realized_bounds().1 - start) / step).round();
                i >= 0.0 && i <= n && (start + i * step - t).abs() <= tol
            }
            Piece::Geometric {
                base,
                min_exp,
                max_exp,
            } => {
                if t <= 0.0 {
                    return false;
                }
                let k = (t.ln() / base.ln()).round();
                if k < *min_exp as f64 || k > *max_exp as f64 {
                    return false;
                }
                (base.powi(k as i32) - t).abs() <= tol
            }
            Piece::Reciprocal {
                scale,
                count,
                accumulate,
            } => {
                if t.abs() <= tol {
                    return *accumulate;
                }
                let n = (scale / t).round();
                n >= 1.0 && n <= *count as f64 && (scale / n - t).abs() <= tol
            }
        }
    }

    fn accumulation(&self) -> Option<(f64, Side)> {
        match self {
            Piece::Reciprocal {
                scale,
                accumulate: true,
                ..
            } => Some((
                0.0,
                if *scale > 0.0 {
                    Side::Right
                } else {
                    Side::Left
                },
            )),
            _ => None,
        }
    }

    fn canonical_cmp(&self, other: &Piece) -> Ordering {
        self.kind_rank().cmp(&other.kind_rank()).then_with(|| {
            let (a, b) = (self.params(), other.params());
            for (x, y) in a.iter().zip(&b) {
                match x.total_cmp(y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            a.len().cmp(&b.len())
        })
    }
}

/// Which side of a point is dense, scattered, or absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideClass {
    Dense,
    Scattered,
    /// `t` is the infimum (left) or supremum (right) of the scale.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointClass {
    pub left: SideClass,
    pub right: SideClass,
}

impl PointClass {
    pub fn side(&self, side: Side) -> SideClass {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    pub fn is_left_scattered(&self) -> bool {
        self.left == SideClass::Scattered
    }

    /// Neither side is dense.
    pub fn is_isolated(&self) -> bool {
        self.left != SideClass::Dense && self.right != SideClass::Dense
    }

    pub fn is_dense(&self) -> bool {
        self.left == SideClass::Dense && self.right == SideClass::Dense
    }
}

/// Points of the scale on one side of `t`, ordered from far to near.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachFamily {
    pub side: Side,
    /// Generator the points come from, e.g. `interval`, `recip(1)`, `jump`.
    pub label: String,
    pub points: Vec<f64>,
    /// Points form a geometric sequence inside an interval piece.
    pub continuous: bool,
}

/// A closed subset of the reals. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    pieces: Vec<Piece>,
    excluded: Vec<f64>,
    intervals: Vec<(f64, f64)>,
    points: Vec<f64>,
    accumulations: Vec<(f64, Side)>,
}

#[derive(Serialize, Deserialize)]
struct TimeScaleRepr {
    pieces: Vec<Piece>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    excluded: Vec<f64>,
}

impl Serialize for TimeScale {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TimeScaleRepr {
            pieces: self.pieces.clone(),
            excluded: self.excluded.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TimeScale {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TimeScaleRepr::deserialize(d)?;
        TimeScale::with_exclusions(repr.pieces, repr.excluded).map_err(serde::de::Error::custom)
    }
}

impl TimeScale {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        Self::with_exclusions(pieces, Vec::new())
    }

    fn with_exclusions(pieces: Vec<Piece>, excluded: Vec<f64>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidTimeScale("no pieces".into()));
        }
        for p in &pieces {
            p.validate()?;
        }
        let pieces = canonicalize(pieces);

        let mut intervals: Vec<(f64, f64)> = pieces
            .iter()
            .filter_map(|p| match p {
                Piece::Interval { a, b } if a < b => Some((*a, *b)),
                _ => None,
            })
            .collect();
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));

        let mut raw: Vec<f64> = pieces
            .iter()
            .flat_map(|p| match p {
                Piece::Interval { a, b } if a == b => vec![*a],
                _ => p.discrete_points(),
            })
            .filter(|x| !in_intervals(&intervals, *x))
            .filter(|x| !excluded.iter().any(|e| (e - x).abs() <= membership_tol(*x)))
            .collect();
        raw.sort_by(f64::total_cmp);
        let mut points: Vec<f64> = Vec::with_capacity(raw.len());
        for x in raw {
            match points.last() {
                Some(&last) if (x - last).abs() <= membership_tol(x) => {}
                _ => points.push(x),
            }
        }

        let mut accumulations: Vec<(f64, Side)> =
            pieces.iter().filter_map(Piece::accumulation).collect();
        accumulations.dedup();

        Ok(TimeScale {
            pieces,
            excluded,
            intervals,
            points,
            accumulations,
        })
    }

    /// The integers in `[a, b]`.
    pub fn integers(a: i64, b: i64) -> Result<Self> {
        Self::new(vec![Piece::Arithmetic {
            start: a as f64,
            stop: b as f64,
            step: 1.0,
        }])
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![Piece::Interval { a, b }])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Sorted realized discrete points (points inside interval pieces excluded).
    pub fn discrete_points(&self) -> &[f64] {
        &self.points
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn accumulation_points(&self) -> Vec<f64> {
        self.accumulations.iter().map(|a| a.0).collect()
    }

    pub fn min(&self) -> f64 {
        let p = self.points.first().copied().unwrap_or(f64::INFINITY);
        let i = self.intervals.first().map_or(f64::INFINITY, |iv| iv.0);
        p.min(i)
    }

    pub fn max(&self) -> f64 {
        let p = self.points.last().copied().unwrap_or(f64::NEG_INFINITY);
        let i = self
            .intervals
            .iter()
            .map(|iv| iv.1)
            .fold(f64::NEG_INFINITY, f64::max);
        p.max(i)
    }

    pub fn contains(&self, t: f64) -> bool {
        t.is_finite() && (in_intervals(&self.intervals, t) || self.nearest_point(t).is_some())
    }

    fn nearest_point(&self, t: f64) -> Option<f64> {
        let tol = membership_tol(t);
        let idx = self.points.partition_point(|&p| p < t);
        [idx.checked_sub(1), Some(idx)]
            .into_iter()
            .flatten()
            .filter_map(|i| self.points.get(i).copied())
            .find(|p| (p - t).abs() <= tol)
    }

    fn require(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::NotInTimeScale { t })
        }
    }

    /// Nearest realized element strictly beyond `t` on `side`, ignoring density.
    fn neighbor(&self, t: f64, side: Side) -> Option<f64> {
        let tol = membership_tol(t);
        match side {
            Side::Right => {
                let idx = self.points.partition_point(|&p| p <= t + tol);
                let p = self.points.get(idx).copied();
                let iv = self
                    .intervals
                    .iter()
                    .filter(|iv| iv.0 > t + tol)
                    .map(|iv| iv.0)
                    .fold(None, |acc: Option<f64>, x| {
                        Some(acc.map_or(x, |a| a.min(x)))
                    });
                match (p, iv) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                }
            }
            Side::Left => {
                let idx = self.points.partition_point(|&p| p < t - tol);
                let p = idx.checked_sub(1).map(|i| self.points[i]);
                let iv = self
                    .intervals
                    .iter()
                    .filter(|iv| iv.1 < t - tol)
                    .map(|iv| iv.1)
                    .fold(None, |acc: Option<f64>, x| {
                        Some(acc.map_or(x, |a| a.max(x)))
                    });
                match (p, iv) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (a, b) => a.or(b),
                }
            }
        }
    }

    fn interval_room(&self, t: f64, side: Side) -> Option<f64> {
        let tol = membership_tol(t);
        self.intervals
            .iter()
            .filter(|iv| t >= iv.0 - tol && t <= iv.1 + tol)
            .map(|iv| match side {
                Side::Right => iv.1 - t,
                Side::Left => t - iv.0,
            })
            .filter(|room| *room > tol)
            .fold(None, |acc: Option<f64>, r| {
                Some(acc.map_or(r, |a| a.max(r)))
            })
    }

    fn accumulates(&self, t: f64, side: Side) -> bool {
        let tol = membership_tol(t);
        self.accumulations
            .iter()
            .any(|(at, s)| *s == side && (at - t).abs() <= tol)
    }

    fn side_dense(&self, t: f64, side: Side) -> bool {
        if self.interval_room(t, side).is_some() || self.accumulates(t, side) {
            return true;
        }
        match self.neighbor(t, side) {
            Some(n) => (n - t).abs() < density_tol(t),
            None => false,
        }
    }

    /// Forward jump `inf{s > t}`; `t` itself at the maximum.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        self.require(t)?;
        if self.side_dense(t, Side::Right) {
            return Ok(t);
        }
        Ok(self.neighbor(t, Side::Right).unwrap_or(t))
    }

    /// Backward jump `sup{s < t}`; `t` itself at the minimum.
    pub fn rho(&self, t: f64) -> Result<f64> {
        self.require(t)?;
        if self.side_dense(t, Side::Left) {
            return Ok(t);
        }
        Ok(self.neighbor(t, Side::Left).unwrap_or(t))
    }

    /// Backward graininess `t - rho(t)`.
    pub fn nu(&self, t: f64) -> Result<f64> {
        Ok(t - self.rho(t)?)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        self.require(t)?;
        let side_class = |side| {
            if self.side_dense(t, side) {
                SideClass::Dense
            } else if self.neighbor(t, side).is_some() {
                SideClass::Scattered
            } else {
                SideClass::Boundary
            }
        };
        Ok(PointClass {
            left: side_class(Side::Left),
            right: side_class(Side::Right),
        })
    }

    fn right_scattered_min(&self) -> Option<f64> {
        let m = self.min();
        match self.classify(m) {
            Ok(c) if c.right == SideClass::Scattered => Some(m),
            _ => None,
        }
    }

    /// The scale with a right-scattered minimum removed.
    pub fn kappa(&self) -> TimeScale {
        match self.right_scattered_min() {
            Some(m) => {
                let mut excluded = self.excluded.clone();
                excluded.push(m);
                TimeScale::with_exclusions(self.pieces.clone(), excluded)
                    .expect("removing a scattered minimum keeps the scale valid")
            }
            None => self.clone(),
        }
    }

    /// Membership in the derivative domain `T_kappa`.
    pub fn in_kappa(&self, t: f64) -> bool {
        self.contains(t)
            && !self
                .right_scattered_min()
                .is_some_and(|m| (m - t).abs() <= membership_tol(t))
    }

    /// Approach points grouped by generator, each ordered far to near.
    ///
    /// On a scattered side this is a single family holding the jump
    /// neighbour. `offset` is the first step used inside interval pieces,
    /// relative to `max(1, |t|)`.
    pub fn approach_families(
        &self,
        t: f64,
        side: Side,
        count: usize,
        offset: f64,
    ) -> Result<Vec<ApproachFamily>> {
        self.require(t)?;
        let count = count.max(1);
        if !self.side_dense(t, side) {
            return match self.neighbor(t, side) {
                Some(n) => Ok(vec![ApproachFamily {
                    side,
                    label: "jump".into(),
                    points: vec![n],
                    continuous: false,
                }]),
                None => Err(Error::EmptySide { t, side }),
            };
        }
        let sign = match side {
            Side::Right => 1.0,
            Side::Left => -1.0,
        };
        let mut families = Vec::new();
        if let Some(room) = self.interval_room(t, side) {
            let h0 = (offset * t.abs().max(1.0)).min(room / 2.0);
            let points = (0..count)
                .map(|k| t + sign * h0 / 2f64.powi(k as i32))
                .collect();
            families.push(ApproachFamily {
                side,
                label: "interval".into(),
                points,
                continuous: true,
            });
        }
        if self.accumulates(t, side) {
            for piece in &self.pieces {
                if let (
                    Some((_, s)),
                    Piece::Reciprocal {
                        scale, count: n, ..
                    },
                ) = (piece.accumulation(), piece)
                {
                    if s != side {
                        continue;
                    }
                    let first = n.saturating_sub(count as u32 - 1).max(1);
                    let points: Vec<f64> = (first..=*n)
                        .map(|k| scale / k as f64)
                        .filter(|x| self.contains(*x))
                        .collect();
                    if !points.is_empty() {
                        families.push(ApproachFamily {
                            side,
                            label: format!("recip({})", format_scale(*scale)),
                            points,
                            continuous: false,
                        });
                    }
                }
            }
        }
        if families.is_empty() {
            // dense only through the density tolerance
            let points = self.nearest_discrete(t, side, count);
            if points.is_empty() {
                return Err(Error::EmptySide { t, side });
            }
            families.push(ApproachFamily {
                side,
                label: "points".into(),
                points,
                continuous: false,
            });
        }
        Ok(families)
    }

    fn nearest_discrete(&self, t: f64, side: Side, count: usize) -> Vec<f64> {
        let tol = membership_tol(t);
        match side {
            Side::Right => {
                let idx = self.points.partition_point(|&p| p <= t + tol);
                let end = (idx + count).min(self.points.len());
                self.points[idx..end].iter().rev().copied().collect()
            }
            Side::Left => {
                let idx = self.points.partition_point(|&p| p < t - tol);
                let start = idx.saturating_sub(count);
                self.points[start..idx].to_vec()
            }
        }
    }

    /// `count` points of the scale strictly on `side` of `t`, strictly
    /// monotone toward `t`, drawn from every generator that reaches `t`.
    pub fn approach_sequence(&self, t: f64, side: Side, count: usize) -> Result<Vec<f64>> {
        self.approach_sequence_with(t, side, count, DEFAULT_DENSE_OFFSET)
    }

    /// [`Self::approach_sequence`] with an explicit first interval offset.
    pub fn approach_sequence_with(
        &self,
        t: f64,
        side: Side,
        count: usize,
        offset: f64,
    ) -> Result<Vec<f64>> {
        let families = self.approach_families(t, side, count, offset)?;
        if families.len() == 1 && !self.side_dense(t, side) {
            return Ok(families[0].points.clone());
        }
        // Start every generator at the scale where the slowest one ends so
        // that the merged sequence interleaves them.
        let reach = families
            .iter()
            .filter_map(|f| f.points.last())
            .map(|p| (p - t).abs())
            .fold(0.0f64, f64::max);
        let sign = match side {
            Side::Right => 1.0,
            Side::Left => -1.0,
        };
        let mut candidates: Vec<f64> = Vec::new();
        for fam in &families {
            if fam.continuous {
                candidates.extend((0..count).map(|j| t + sign * reach * 2f64.powi(j as i32)));
            } else if let Some(scale) = self.family_scale(fam) {
                let n_max = (scale.abs() / reach).floor() as u32;
                let lo = n_max.saturating_sub(count as u32).max(1);
                candidates.extend(
                    (lo..=n_max)
                        .map(|n| scale / n as f64)
                        .filter(|x| self.contains(*x)),
                );
            } else {
                candidates.extend(fam.points.iter().copied());
            }
        }
        candidates.retain(|x| (x - t) * sign > 0.0 && self.contains(*x));
        candidates.sort_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()));
        let mut seq: Vec<f64> = Vec::with_capacity(count);
        for x in candidates {
            if seq.iter().all(|y| (y - x).abs() > membership_tol(x)) {
                seq.push(x);
            }
            if seq.len() == count {
                break;
            }
        }
        seq.reverse();
        Ok(seq)
    }

    fn family_scale(&self, fam: &ApproachFamily) -> Option<f64> {
        self.pieces.iter().find_map(|p| match p {
            Piece::Reciprocal { scale, .. }
                if fam.label == format!("recip({})", format_scale(*scale)) =>
            {
                Some(*scale)
            }
            _ => None,
        })
    }

    /// Realized points that are left-scattered and lie in `T_kappa`.
    pub fn left_scattered_points(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .points
            .iter()
            .copied()
            .chain(self.intervals.iter().map(|iv| iv.0))
            .filter(|&t| self.in_kappa(t))
            .filter(|&t| self.classify(t).is_ok_and(|c| c.is_left_scattered()))
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// A witness for the intermediate value property on `[a, b)`: either a
    /// zero of `f` (approximated by bisection inside interval pieces) or a
    /// point `c` with `f(c) f(sigma(c)) < 0`.
    pub fn sign_change_witness<F>(&self, f: F, a: f64, b: f64) -> Result<Option<SignChange>>
    where
        F: Fn(f64) -> f64,
    {
        self.require(a)?;
        self.require(b)?;
        if a >= b || f(a) * f(b) >= 0.0 {
            return Ok(None);
        }
        let mut cur = a;
        while cur < b {
            let fc = f(cur);
            if fc == 0.0 {
                return Ok(Some(SignChange::Zero(cur)));
            }
            if let Some(room) = self.interval_room(cur, Side::Right) {
                let end = (cur + room).min(b);
                if fc * f(end) < 0.0 {
                    let (mut lo, mut hi) = (cur, end);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if mid <= lo || mid >= hi {
                            break;
                        }
                        if f(lo) * f(mid) <= 0.0 {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    return Ok(Some(SignChange::Zero(if f(lo) == 0.0 { lo } else { hi })));
                }
                cur = end;
                continue;
            }
            let next = match self.neighbor(cur, Side::Right) {
                Some(n) => n,
                None => break,
            };
            if fc * f(next) < 0.0 {
                return Ok(Some(SignChange::Crossing(cur)));
            }
            cur = next;
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignChange {
    Zero(f64),
    Crossing(f64),
}

fn in_intervals(intervals: &[(f64, f64)], t: f64) -> bool {
    let tol = membership_tol(t);
    intervals
        .iter()
        .any(|iv| t >= iv.0 - tol && t <= iv.1 + tol)
}

pub(crate) fn format_scale(scale: f64) -> String {
    if scale == SQRT_2 {
        "sqrt2".into()
    } else if scale == -SQRT_2 {
        "-sqrt2".into()
    } else {
        format!("{scale}")
    }
}

fn canonicalize(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut explicit: Vec<f64> = Vec::new();
    let mut generators: Vec<Piece> = Vec::new();
    for p in pieces {
        match p {
            Piece::Interval { a, b } => intervals.push((a, b)),
            Piece::Points { points } => explicit.extend(points),
            other => generators.push(other),
        }
    }
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, b) in intervals {
        match merged.last_mut() {
            Some(last) if a <= last.1 + membership_tol(a) => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    let mut out: Vec<Piece> = merged
        .into_iter()
        .map(|(a, b)| Piece::Interval { a, b })
        .collect();
    if !explicit.is_empty() {
        explicit.sort_by(f64::total_cmp);
        let mut dedup: Vec<f64> = Vec::new();
        for x in explicit {
            if dedup
                .last()
                .is_none_or(|l: &f64| (x - l).abs() > membership_tol(x))
            {
                dedup.push(x);
            }
        }
        out.push(Piece::Points { points: dedup });
    }
    generators.sort_by(Piece::canonical_cmp);
    generators.dedup();
    out.extend(generators);
    out.sort_by(|x, y| {
        x.lower_bound()
            .total_cmp(&y.lower_bound())
            .then_with(|| x.canonical_cmp(y))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_scale(n: u32) -> TimeScale {
        TimeScale::new(vec![
            Piece::Reciprocal {
                scale: 1.0,
                count: n,
                accumulate: true,
            },
            Piece::Reciprocal {
                scale: SQRT_2,
                count: n,
                accumulate: true,
            },
            Piece::Points { points: vec![0.0] },
        ])
        .unwrap()
    }

    fn z(a: i64, b: i64) -> TimeScale {
        TimeScale::integers(a, b).unwrap()
    }

    #[test]
    fn jumps_on_integers() {
        let ts = z(-10, 10);
        assert_eq!(ts.sigma(0.0).unwrap(), 1.0);
        assert_eq!(ts.rho(0.0).unwrap(), -1.0);
        assert_eq!(ts.nu(4.0).unwrap(), 1.0);
        assert_eq!(ts.sigma(10.0).unwrap(), 10.0);
        assert_eq!(ts.rho(-10.0).unwrap(), -10.0);
        let c = ts.classify(3.0).unwrap();
        assert!(c.is_isolated());
        assert_eq!(c.left, SideClass::Scattered);
    }

    #[test]
    fn jumps_on_interval() {
        let ts = TimeScale::interval(0.0, 1.0).unwrap();
        assert_eq!(ts.sigma(0.5).unwrap(), 0.5);
        assert_eq!(ts.rho(0.5).unwrap(), 0.5);
        assert_eq!(ts.nu(0.5).unwrap(), 0.0);
        assert!(ts.classify(0.5).unwrap().is_dense());
    }

    #[test]
    fn example_scale_jumps() {
        let ts = example_scale(1000);
        assert_eq!(ts.sigma(SQRT_2 / 2.0).unwrap(), 1.0);
        assert!((ts.rho(1.0).unwrap() - SQRT_2 / 2.0).abs() < 1e-15);
        // below 1/2 the nearest generator points are 1/3 and sqrt2/3
        let nu = ts.nu(0.5).unwrap();
        assert!((nu - (0.5 - SQRT_2 / 3.0)).abs() < 1e-15);
        assert!((nu - 0.02860).abs() < 1e-5);
    }

    #[test]
    fn accumulation_point_is_right_dense() {
        let ts = example_scale(1000);
        let c = ts.classify(0.0).unwrap();
        assert_eq!(c.right, SideClass::Dense);
        assert_eq!(c.left, SideClass::Boundary);
        assert_eq!(ts.sigma(0.0).unwrap(), 0.0);
        assert_eq!(ts.rho(0.0).unwrap(), 0.0);
        assert!(ts.in_kappa(0.0));
    }

    #[test]
    fn mixed_scale_classification() {
        let ts = TimeScale::new(vec![
            Piece::Interval { a: 0.0, b: 1.0 },
            Piece::Points { points: vec![2.0] },
        ])
        .unwrap();
        let c = ts.classify(1.0).unwrap();
        assert_eq!(c.left, SideClass::Dense);
        assert_eq!(c.right, SideClass::Scattered);
        assert_eq!(ts.sigma(1.0).unwrap(), 2.0);
        assert_eq!(ts.rho(2.0).unwrap(), 1.0);
    }

    #[test]
    fn kappa_removes_scattered_minimum() {
        let ts = z(0, 10).kappa();
        assert_eq!(ts.min(), 1.0);
        assert!(!ts.contains(0.0));
        assert_eq!(ts.discrete_points().len(), 10);

        let ts = TimeScale::interval(0.0, 1.0).unwrap();
        assert_eq!(ts.kappa(), ts);

        let ts = TimeScale::new(vec![
            Piece::Points { points: vec![0.0] },
            Piece::Interval { a: 1.0, b: 2.0 },
        ])
        .unwrap();
        let k = ts.kappa();
        assert!(!k.contains(0.0));
        assert_eq!(k.min(), 1.0);
        assert!(k.contains(1.5));
        assert!(!ts.in_kappa(0.0));
    }

    #[test]
    fn not_in_time_scale() {
        let ts = z(0, 3);
        assert_eq!(ts.sigma(0.5), Err(Error::NotInTimeScale { t: 0.5 }));
        assert!(matches!(
            ts.classify(7.0),
            Err(Error::NotInTimeScale { .. })
        ));
    }

    #[test]
    fn approach_sequences() {
        let ts = TimeScale::interval(0.0, 1.0).unwrap();
        let seq = ts.approach_sequence(0.5, Side::Right, 3).unwrap();
        assert_eq!(seq.len(), 3);
        assert!(seq.windows(2).all(|w| w[0] > w[1] && w[1] > 0.5));

        let ts = z(-5, 5);
        assert_eq!(
            ts.approach_sequence(0.0, Side::Left, 1).unwrap(),
            vec![-1.0]
        );

        let ts = example_scale(1000);
        let seq = ts.approach_sequence(0.0, Side::Right, 6).unwrap();
        assert_eq!(seq.len(), 6);
        assert!(seq.windows(2).all(|w| w[0] > w[1] && w[1] > 0.0));
        let from_one = seq
            .iter()
            .filter(|x| ((1.0 / *x) - (1.0 / *x).round()).abs() < 1e-6)
            .count();
        let from_root = seq
            .iter()
            .filter(|x| ((SQRT_2 / *x) - (SQRT_2 / *x).round()).abs() < 1e-6)
            .count();
        assert!(from_one > 0 && from_root > 0, "{seq:?}");
    }

    #[test]
    fn empty_side() {
        let ts = z(0, 3);
        assert!(matches!(
            ts.approach_families(0.0, Side::Left, 3, DEFAULT_DENSE_OFFSET),
            Err(Error::EmptySide { .. })
        ));
    }

    #[test]
    fn canonical_merge_of_intervals() {
        let ts = TimeScale::new(vec![
            Piece::Interval { a: 0.5, b: 2.0 },
            Piece::Interval { a: 0.0, b: 1.0 },
            Piece::Points {
                points: vec![3.0, 1.5],
            },
        ])
        .unwrap();
        assert_eq!(ts.intervals(), &[(0.0, 2.0)]);
        assert_eq!(ts.discrete_points(), &[3.0]);
    }

    #[test]
    fn json_round_trip() {
        let ts = example_scale(10);
        let json = serde_json::to_string(&ts).unwrap();
        assert!(json.contains("\"kind\":\"reciprocal\""));
        let back: TimeScale = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ts);
    }

    #[test]
    fn power_of_two_grid_graininess_is_exact() {
        let ts = TimeScale::new(vec![Piece::Arithmetic {
            start: -4.0,
            stop: 4.0,
            step: 0.25,
        }])
        .unwrap();
        for &t in &ts.discrete_points()[1..] {
            assert_eq!(ts.nu(t).unwrap(), 0.25);
        }
    }

    #[test]
    fn intermediate_value_witness() {
        let ts = z(0, 10);
        let w = ts.sign_change_witness(|t| t - 4.5, 0.0, 10.0).unwrap();
        assert_eq!(w, Some(SignChange::Crossing(4.0)));
        let ts = TimeScale::interval(0.0, 2.0).unwrap();
        match ts.sign_change_witness(|t| t * t - 2.0, 0.0, 2.0).unwrap() {
            Some(SignChange::Zero(c)) => assert!((c - SQRT_2).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }
}
