//! Hand-written LL(1) recursive descent parser.

use super::ast::{Arm, Expr, FunDef, PieceKind, PieceRef, Var};
use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Result};
use crate::timescale::Piece;

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

const ATOM: &str = "a number, t, alpha, sqrt2, pi, sqrt, piecewise, '-' or '('";

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax {
            line: t.line,
            col: t.col,
            expected: format!("{expected}, found {}", t.tok.describe()),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == name => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(&format!("'{name}'"))),
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let n = self.int("an integer exponent")?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn int(&mut self, what: &str) -> Result<i32> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match *self.peek() {
            Tok::Num {
                value,
                integral: true,
            } if value <= i32::MAX as f64 => {
                self.bump();
                Ok(if negative {
                    -(value as i32)
                } else {
                    value as i32
                })
            }
            _ => Err(self.error(what)),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Num { value, .. } => {
                self.bump();
                Ok(Expr::Const(value))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "t" => {
                    self.bump();
                    Ok(Expr::Var(Var::T))
                }
                "alpha" => {
                    self.bump();
                    Ok(Expr::Var(Var::Alpha))
                }
                "sqrt2" => {
                    self.bump();
                    Ok(Expr::Var(Var::Sqrt2))
                }
                "pi" => {
                    self.bump();
                    Ok(Expr::Var(Var::Pi))
                }
                "sqrt" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Sqrt(Box::new(e)))
                }
                "piecewise" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let mut arms = vec![self.arm()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        arms.push(self.arm()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Piecewise(arms))
                }
                _ => Err(self.error(ATOM)),
            },
            _ => Err(self.error(ATOM)),
        }
    }

    fn arm(&mut self) -> Result<Arm> {
        self.expect_ident("in")?;
        let kind = match self.peek() {
            Tok::Ident(s) => PieceKind::from_name(s),
            _ => None,
        }
        .ok_or_else(|| self.error("a piece kind (interval, points, hgrid, qgrid, recip)"))?;
        self.bump();
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            args.push(self.number()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.number()?);
            }
            self.expect(Tok::RParen)?;
        }
        self.expect(Tok::Arrow)?;
        let expr = self.expr()?;
        Ok(Arm {
            piece: PieceRef { kind, args },
            expr,
        })
    }

    /// A signed literal or named constant, used for piece parameters.
    fn number(&mut self) -> Result<f64> {
        let sign = if *self.peek() == Tok::Minus {
            self.bump();
            -1.0
        } else {
            1.0
        };
        let v = match self.peek() {
            Tok::Num { value, .. } => *value,
            Tok::Ident(s) if s == "sqrt2" => std::f64::consts::SQRT_2,
            Tok::Ident(s) if s == "pi" => std::f64::consts::PI,
            _ => return Err(self.error("a number, sqrt2 or pi")),
        };
        self.bump();
        Ok(sign * v)
    }

    pub(crate) fn fundef(&mut self) -> Result<FunDef> {
        match self.peek() {
            Tok::Ident(s) if s == "tri" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::Comma)?;
                let c = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(FunDef::Triangular(a, b, c))
            }
            Tok::Ident(s) if s == "endpoints" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let lo = self.expr()?;
                self.expect(Tok::Semi)?;
                let hi = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(FunDef::Endpoints(lo, hi))
            }
            _ => Err(self.error("'tri' or 'endpoints'")),
        }
    }

    pub(crate) fn timescale(&mut self) -> Result<Vec<Piece>> {
        if matches!(self.peek(), Tok::Ident(s) if s == "union") {
            self.bump();
            self.expect(Tok::LParen)?;
            let mut pieces = vec![self.piece()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                pieces.push(self.piece()?);
            }
            self.expect(Tok::RParen)?;
            return Ok(pieces);
        }
        Ok(vec![self.piece()?])
    }

    fn piece(&mut self) -> Result<Piece> {
        let kind = match self.peek() {
            Tok::Ident(s) => PieceKind::from_name(s),
            _ => None,
        }
        .ok_or_else(|| self.error("'union' or a piece (interval, points, hgrid, qgrid, recip)"))?;
        self.bump();
        self.expect(Tok::LParen)?;
        let piece = match kind {
            PieceKind::Interval => {
                let a = self.number()?;
                self.expect(Tok::Comma)?;
                let b = self.number()?;
                Piece::Interval { a, b }
            }
            PieceKind::Points => {
                let mut points = vec![self.number()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    points.push(self.number()?);
                }
                Piece::Points { points }
            }
            PieceKind::Hgrid => {
                let start = self.number()?;
                self.expect(Tok::Comma)?;
                let stop = self.number()?;
                self.expect(Tok::Comma)?;
                let step = self.number()?;
                Piece::Arithmetic { start, stop, step }
            }
            PieceKind::Qgrid => {
                let base = self.number()?;
                self.expect(Tok::Comma)?;
                let min_exp = self.int("an integer exponent")?;
                self.expect(Tok::Comma)?;
                let max_exp = self.int("an integer exponent")?;
                Piece::Geometric {
                    base,
                    min_exp,
                    max_exp,
                }
            }
            PieceKind::Recip => {
                let scale = self.number()?;
                self.expect(Tok::Comma)?;
                let count = self.int("a positive integer count")?;
                if count < 1 {
                    return Err(Error::InvalidTimeScale(format!(
                        "recip count must be positive, got {count}"
                    )));
                }
                Piece::Reciprocal {
                    scale,
                    count: count as u32,
                    accumulate: true,
                }
            }
        };
        self.expect(Tok::RParen)?;
        Ok(piece)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(src: &str) -> Result<Expr> {
        let mut p = Parser::new(src)?;
        let e = p.expr()?;
        p.finish()?;
        Ok(e)
    }

    fn c(v: f64) -> Box<Expr> {
        Box::new(Expr::Const(v))
    }

    fn t() -> Box<Expr> {
        Box::new(Expr::Var(Var::T))
    }

    #[test]
    fn precedence() {
        assert_eq!(
            expr("1 + 2 * t^2").unwrap(),
            Expr::Add(
                c(1.0),
                Box::new(Expr::Mul(c(2.0), Box::new(Expr::Pow(t(), 2))))
            )
        );
        assert_eq!(
            expr("-t^2").unwrap(),
            Expr::Neg(Box::new(Expr::Pow(t(), 2)))
        );
        assert_eq!(
            expr("1 - 2 - t").unwrap(),
            Expr::Sub(Box::new(Expr::Sub(c(1.0), c(2.0))), t())
        );
        assert_eq!(
            expr("t / -2").unwrap(),
            Expr::Div(t(), Box::new(Expr::Neg(c(2.0))))
        );
        assert_eq!(expr("t^-3").unwrap(), Expr::Pow(t(), -3));
    }

    #[test]
    fn piecewise_arms() {
        let e = expr("piecewise(in recip(1) => t, in recip(sqrt2) => 2, in points => 0)").unwrap();
        let Expr::Piecewise(arms) = e else {
            panic!("not piecewise")
        };
        assert_eq!(arms.len(), 3);
        assert_eq!(arms[1].piece.args, vec![std::f64::consts::SQRT_2]);
        assert_eq!(arms[2].piece.kind, PieceKind::Points);
        assert!(arms[2].piece.args.is_empty());
    }

    #[test]
    fn positioned_errors() {
        let err = expr("t +* 2").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 1,
                    col: 4,
                    ..
                }
            ),
            "{err}"
        );
        let err = expr("(t + 1").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 1,
                    col: 7,
                    ..
                }
            ),
            "{err}"
        );
        let err = expr("t^2.5").unwrap_err();
        assert!(matches!(err, Error::Syntax { col: 3, .. }), "{err}");
        let err = expr("t^2^2").unwrap_err();
        assert!(matches!(err, Error::Syntax { col: 4, .. }), "{err}");
        let err = expr("x").unwrap_err();
        assert!(matches!(err, Error::Syntax { col: 1, .. }), "{err}");
        let err = expr("t\n 2").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 2,
                    col: 2,
                    ..
                }
            ),
            "{err}"
        );
    }
}
