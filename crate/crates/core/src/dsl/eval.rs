use super::ast::{Expr, FunDef, FuzzyFuncDef, PieceKind, PieceRef, Var};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, Interval, MONOTONE_TOL};
use crate::nabla::{FuzzyFunction, ScalarFunction};
use crate::timescale::{membership_tol, Piece, TimeScale};

/// Whether `t` belongs to the part of `ts` named by `r`.
///
/// Interval and point references with explicit arguments denote those sets
/// directly (canonicalization may have merged them into larger pieces);
/// generator references resolve by the provenance of the generating piece.
pub fn covers(r: &PieceRef, ts: &TimeScale, t: f64) -> bool {
    let tol = membership_tol(t);
    match (r.kind, r.args.as_slice()) {
        (PieceKind::Interval, [a, b]) => {
            t >= a - tol
                && t <= b + tol
                && ts
                    .pieces()
                    .iter()
                    .any(|p| matches!(p, Piece::Interval { .. }) && p.contains(t))
        }
        (PieceKind::Points, args) if !args.is_empty() => {
            args.iter().any(|x| (x - t).abs() <= tol) && ts.contains(t)
        }
        _ => ts.pieces().iter().any(|p| r.matches(p) && p.contains(t)),
    }
}

fn eval_raw(e: &Expr, t: f64, alpha: f64, ts: Option<&TimeScale>) -> Result<f64> {
    let go = |x: &Expr| eval_raw(x, t, alpha, ts);
    Ok(match e {
        Expr::Const(v) => *v,
        Expr::Var(Var::T) => t,
        Expr::Var(Var::Alpha) => alpha,
        Expr::Var(Var::Sqrt2) => std::f64::consts::SQRT_2,
        Expr::Var(Var::Pi) => std::f64::consts::PI,
        Expr::Neg(a) => -go(a)?,
        Expr::Add(a, b) => go(a)? + go(b)?,
        Expr::Sub(a, b) => go(a)? - go(b)?,
        Expr::Mul(a, b) => go(a)? * go(b)?,
        Expr::Div(a, b) => go(a)? / go(b)?,
        Expr::Pow(a, n) => go(a)?.powi(*n),
        Expr::Sqrt(a) => go(a)?.sqrt(),
        Expr::Piecewise(arms) => {
            let ts = ts.ok_or_else(|| {
                Error::Validation("piecewise needs a time scale to resolve its arms".into())
            })?;
            let arm = arms
                .iter()
                .find(|arm| covers(&arm.piece, ts, t))
                .ok_or_else(|| Error::Validation(format!("no piecewise arm covers t = {t}")))?;
            go(&arm.expr)?
        }
    })
}

/// Evaluates an expression; a non-finite result is a validation error.
pub fn eval_expr(e: &Expr, t: f64, alpha: f64, ts: Option<&TimeScale>) -> Result<f64> {
    let v = eval_raw(e, t, alpha, ts)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Validation(format!(
            "expression is not finite at t = {t}, alpha = {alpha}"
        )))
    }
}

pub(crate) fn eval_def(def: &FuzzyFuncDef, ts: Option<&TimeScale>, t: f64) -> Result<FuzzyNumber> {
    let k = def.levels;
    match &def.kind {
        FunDef::Triangular(a, b, c) => {
            let a = eval_expr(a, t, 0.0, ts)?;
            let mut b = eval_expr(b, t, 0.0, ts)?;
            let mut c = eval_expr(c, t, 0.0, ts)?;
            // absorb roundoff-sized order violations
            let slack = MONOTONE_TOL * (1.0 + a.abs().max(b.abs()).max(c.abs()));
            if b < a && a - b <= slack {
                b = a;
            }
            if c < b && b - c <= slack {
                c = b;
            }
            if !(a <= b && b <= c) {
                return Err(Error::Validation(format!(
                    "triangle order a <= b <= c fails at t = {t}: ({a}, {b}, {c})"
                )));
            }
            if k == 0 {
                Ok(FuzzyNumber::from_interval(Interval { lo: a, hi: c }))
            } else {
                FuzzyNumber::triangular(a, b, c, k)
            }
        }
        FunDef::Endpoints(lo, hi) => {
            let mut lower = Vec::with_capacity(k + 1);
            let mut upper = Vec::with_capacity(k + 1);
            for i in 0..=k {
                let alpha = if k == 0 { 0.0 } else { i as f64 / k as f64 };
                lower.push(eval_expr(lo, t, alpha, ts)?);
                upper.push(eval_expr(hi, t, alpha, ts)?);
            }
            let mag = lower
                .iter()
                .chain(&upper)
                .fold(0.0f64, |m, x| m.max(x.abs()));
            let raw = FuzzyNumber::repaired(lower.clone(), upper.clone())?;
            // repair is only legitimate for roundoff; real violations are reported
            let tol = MONOTONE_TOL * (1.0 + mag);
            let moved = raw
                .lower()
                .iter()
                .zip(&lower)
                .chain(raw.upper().iter().zip(&upper))
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            if moved > tol {
                return Err(Error::Validation(format!(
                    "endpoint monotonicity or lower <= upper fails at t = {t}"
                )));
            }
            Ok(raw)
        }
    }
}

/// Evaluates a definition at a point of the time scale.
pub fn eval_function(def: &FuzzyFuncDef, ts: &TimeScale, t: f64) -> Result<FuzzyNumber> {
    if !ts.contains(t) {
        return Err(Error::NotInTimeScale { t });
    }
    eval_def(def, Some(ts), t)
}

/// Points used for bind-time validation: the ends and middle of every
/// interval and up to 64 evenly spread discrete points.
pub fn sample_points(ts: &TimeScale) -> Vec<f64> {
    let mut out = Vec::new();
    for &(a, b) in ts.intervals() {
        out.extend([a, 0.5 * (a + b), b]);
    }
    let pts = ts.discrete_points();
    let n = pts.len();
    if n <= 64 {
        out.extend_from_slice(pts);
    } else {
        out.extend((0..64).map(|i| pts[i * (n - 1) / 63]));
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// A definition attached to a time scale.
#[derive(Debug, Clone)]
pub struct BoundFunction {
    def: FuzzyFuncDef,
    ts: TimeScale,
}

impl BoundFunction {
    pub fn def(&self) -> &FuzzyFuncDef {
        &self.def
    }

    pub fn timescale(&self) -> &TimeScale {
        &self.ts
    }
}

impl FuzzyFunction for BoundFunction {
    fn levels(&self) -> usize {
        self.def.levels
    }

    fn eval(&self, t: f64) -> Result<FuzzyNumber> {
        eval_function(&self.def, &self.ts, t)
    }
}

/// Attaches `def` to `ts`, validating it at [`sample_points`].
pub fn bind(def: &FuzzyFuncDef, ts: &TimeScale) -> Result<BoundFunction> {
    for t in sample_points(ts) {
        eval_def(def, Some(ts), t)?;
    }
    Ok(BoundFunction {
        def: def.clone(),
        ts: ts.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct BoundScalar {
    expr: Expr,
    ts: TimeScale,
}

impl ScalarFunction for BoundScalar {
    fn eval(&self, t: f64) -> Result<f64> {
        if !self.ts.contains(t) {
            return Err(Error::NotInTimeScale { t });
        }
        eval_expr(&self.expr, t, 0.0, Some(&self.ts))
    }
}

pub fn bind_scalar(expr: &Expr, ts: &TimeScale) -> Result<BoundScalar> {
    if expr.uses_alpha() {
        return Err(Error::Validation(
            "a scalar function cannot use alpha".into(),
        ));
    }
    for t in sample_points(ts) {
        eval_expr(expr, t, 0.0, Some(ts))?;
    }
    Ok(BoundScalar {
        expr: expr.clone(),
        ts: ts.clone(),
    })
}
