//! A small text language for time scales, scalar functions and fuzzy-valued
//! functions.
//!
//! ```text
//! scale  := "union(" piece ("," piece)* ")" | piece
//! piece  := interval(a, b) | points(x, ...) | hgrid(a, b, h) | qgrid(q, kmin, kmax) | recip(c, N)
//! fundef := "tri(" expr "," expr "," expr ")" | "endpoints(" expr ";" expr ")"
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | factor
//! factor := atom ("^" "-"? int)?
//! atom   := num | t | alpha | sqrt2 | pi | "(" expr ")" | "sqrt(" expr ")"
//!         | "piecewise(" arm ("," arm)* ")"
//! arm    := "in" kind ["(" num ("," num)* ")"] "=>" expr
//! ```
//!
//! `recip(c, N)` always includes its accumulation point 0.

mod ast;
mod eval;
mod lexer;
mod parser;
mod print;

pub use ast::{Arm, Expr, FunDef, FuzzyFuncDef, PieceKind, PieceRef, Var};
pub use eval::{
    bind, bind_scalar, covers, eval_expr, eval_function, sample_points, BoundFunction, BoundScalar,
};
pub use print::{print_expr, print_function, print_piece, print_timescale};

use crate::error::{Error, Result};
use crate::fuzzy::DEFAULT_LEVELS;
use crate::timescale::TimeScale;
use parser::Parser;

/// Sample abscissae for parse-time validation of definitions without
/// piecewise arms.
const PARSE_SAMPLES: [f64; 8] = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0];

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a real-valued expression in `t`.
pub fn parse_scalar(src: &str) -> Result<Expr> {
    let e = parse_expr(src)?;
    if e.uses_alpha() {
        return Err(Error::Validation(
            "a scalar function cannot use alpha".into(),
        ));
    }
    Ok(e)
}

pub fn parse_function(src: &str) -> Result<FuzzyFuncDef> {
    parse_function_with_levels(src, DEFAULT_LEVELS)
}

/// Parses a fuzzy function definition on a grid of `levels + 1` α-levels.
///
/// A definition that is invalid at every sample point is rejected here;
/// definitions with piecewise arms are only validated by [`bind`].
pub fn parse_function_with_levels(src: &str, levels: usize) -> Result<FuzzyFuncDef> {
    let mut p = Parser::new(src)?;
    let kind = p.fundef()?;
    p.finish()?;
    if let FunDef::Triangular(a, b, c) = &kind {
        if a.uses_alpha() || b.uses_alpha() || c.uses_alpha() {
            return Err(Error::Validation(
                "alpha is only meaningful inside endpoints(...)".into(),
            ));
        }
    }
    let def = FuzzyFuncDef { kind, levels };
    let piecewise = match &def.kind {
        FunDef::Triangular(a, b, c) => a.has_piecewise() || b.has_piecewise() || c.has_piecewise(),
        FunDef::Endpoints(lo, hi) => lo.has_piecewise() || hi.has_piecewise(),
    };
    if !piecewise {
        let mut first_err = None;
        for t in PARSE_SAMPLES {
            match eval::eval_def(&def, None, t) {
                Ok(_) => return Ok(def),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        if let Some(e) = first_err {
            return Err(e);
        }
    }
    Ok(def)
}

pub fn parse_timescale(src: &str) -> Result<TimeScale> {
    let mut p = Parser::new(src)?;
    let pieces = p.timescale()?;
    p.finish()?;
    TimeScale::new(pieces)
}

/// Types with a canonical DSL rendering; parsing it back gives an equal value.
pub trait Canonical {
    fn print_canonical(&self) -> String;
}

impl Canonical for Expr {
    fn print_canonical(&self) -> String {
        print_expr(self)
    }
}

impl Canonical for FuzzyFuncDef {
    fn print_canonical(&self) -> String {
        print_function(self)
    }
}

impl Canonical for TimeScale {
    fn print_canonical(&self) -> String {
        print_timescale(self)
    }
}

pub fn print_canonical<T: Canonical + ?Sized>(x: &T) -> String {
    x.print_canonical()
}
