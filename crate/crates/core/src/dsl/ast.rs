use serde::Serialize;

use crate::timescale::Piece;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    T,
    Alpha,
    Sqrt2,
    Pi,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::Alpha => "alpha",
            Var::Sqrt2 => "sqrt2",
            Var::Pi => "pi",
        }
    }
}

/// Expression tree. Literals are non-negative; a leading minus parses as `Neg`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Sqrt(Box<Expr>),
    Piecewise(Vec<Arm>),
}

impl Expr {
    pub fn uses_alpha(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => *v == Var::Alpha,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Sqrt(e) => e.uses_alpha(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses_alpha() || b.uses_alpha()
            }
            Expr::Piecewise(arms) => arms.iter().any(|a| a.expr.uses_alpha()),
        }
    }

    pub fn has_piecewise(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Sqrt(e) => e.has_piecewise(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_piecewise() || b.has_piecewise()
            }
            Expr::Piecewise(_) => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Interval,
    Points,
    Hgrid,
    Qgrid,
    Recip,
}

impl PieceKind {
    pub fn name(self) -> &'static str {
        match self {
            PieceKind::Interval => "interval",
            PieceKind::Points => "points",
            PieceKind::Hgrid => "hgrid",
            PieceKind::Qgrid => "qgrid",
            PieceKind::Recip => "recip",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "interval" => PieceKind::Interval,
            "points" => PieceKind::Points,
            "hgrid" => PieceKind::Hgrid,
            "qgrid" => PieceKind::Qgrid,
            "recip" => PieceKind::Recip,
            _ => return None,
        })
    }
}

/// Names a generator piece of the ambient time scale, e.g. `recip(sqrt2)`.
/// The arguments are a prefix of the piece's parameters; none matches every
/// piece of that kind.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PieceRef {
    pub kind: PieceKind,
    pub args: Vec<f64>,
}

impl PieceRef {
    pub fn matches(&self, piece: &Piece) -> bool {
        if piece.kind_name() != self.kind.name() {
            return false;
        }
        let params = piece.params();
        self.args.len() <= params.len()
            && self
                .args
                .iter()
                .zip(&params)
                .all(|(a, p)| (a - p).abs() <= 1e-12 * a.abs().max(1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arm {
    pub piece: PieceRef,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FunDef {
    Triangular(Expr, Expr, Expr),
    /// Lower and upper endpoint functions of `(t, alpha)`.
    Endpoints(Expr, Expr),
}

/// A fuzzy-valued function definition together with its α-grid size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzyFuncDef {
    pub kind: FunDef,
    pub levels: usize,
}
