//! Canonical rendering with minimal parentheses.

use super::ast::{Arm, Expr, FunDef, FuzzyFuncDef, PieceRef};
use crate::timescale::{format_scale, Piece, TimeScale};

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => NEG,
        Expr::Pow(..) => POW,
        _ => ATOM,
    }
}

fn number(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

fn operand(out: &mut String, e: &Expr, min: u8) {
    if level(e) < min {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn binary(out: &mut String, a: &Expr, op: &str, b: &Expr, lvl: u8) {
    operand(out, a, lvl);
    out.push_str(op);
    operand(out, b, lvl + 1);
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Const(v) => out.push_str(&number(*v)),
        Expr::Var(v) => out.push_str(v.name()),
        Expr::Neg(a) => {
            out.push('-');
            operand(out, a, NEG);
        }
        Expr::Add(a, b) => binary(out, a, " + ", b, SUM),
        Expr::Sub(a, b) => binary(out, a, " - ", b, SUM),
        Expr::Mul(a, b) => binary(out, a, " * ", b, PRODUCT),
        Expr::Div(a, b) => binary(out, a, " / ", b, PRODUCT),
        Expr::Pow(a, n) => {
            operand(out, a, ATOM);
            out.push_str(&format!("^{n}"));
        }
        Expr::Sqrt(a) => {
            out.push_str("sqrt(");
            write_expr(out, a);
            out.push(')');
        }
        Expr::Piecewise(arms) => {
            out.push_str("piecewise(");
            for (i, Arm { piece, expr }) in arms.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str("in ");
                out.push_str(&piece_ref(piece));
                out.push_str(" => ");
                write_expr(out, expr);
            }
            out.push(')');
        }
    }
}

fn piece_ref(p: &PieceRef) -> String {
    if p.args.is_empty() {
        p.kind.name().to_string()
    } else {
        format!("{}({})", p.kind.name(), join(&p.args))
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter()
        .map(|&x| format_scale(x))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

pub fn print_function(def: &FuzzyFuncDef) -> String {
    match &def.kind {
        FunDef::Triangular(a, b, c) => format!(
            "tri({}, {}, {})",
            print_expr(a),
            print_expr(b),
            print_expr(c)
        ),
        FunDef::Endpoints(lo, hi) => format!("endpoints({}; {})", print_expr(lo), print_expr(hi)),
    }
}

pub fn print_piece(p: &Piece) -> String {
    match p {
        Piece::Interval { a, b } => format!("interval({})", join(&[*a, *b])),
        Piece::Points { points } => format!("points({})", join(points)),
        Piece::Arithmetic { start, stop, step } => {
            format!("hgrid({})", join(&[*start, *stop, *step]))
        }
        Piece::Geometric {
            base,
            min_exp,
            max_exp,
        } => format!("qgrid({}, {min_exp}, {max_exp})", format_scale(*base)),
        Piece::Reciprocal { scale, count, .. } => {
            format!("recip({}, {count})", format_scale(*scale))
        }
    }
}

/// Canonical text of a time scale. Reciprocal pieces always print with their
/// accumulation point, and κ-exclusions are not representable.
pub fn print_timescale(ts: &TimeScale) -> String {
    let pieces: Vec<String> = ts.pieces().iter().map(print_piece).collect();
    if pieces.len() == 1 {
        pieces.into_iter().next().unwrap_or_default()
    } else {
        format!("union({})", pieces.join(", "))
    }
}
