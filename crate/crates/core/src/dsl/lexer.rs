use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    /// A numeric literal; `integral` when written without `.` or exponent.
    Num {
        value: f64,
        integral: bool,
    },
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num { value, .. } => format!("number {value}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Semi => "';'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Arrow => "'=>'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let syntax = |line, col, expected: &str| Error::Syntax {
        line,
        col,
        expected: expected.into(),
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                line: start.0,
                col: start.1,
            });
            i += 1;
            col += 1;
            continue;
        }
        if c == '=' {
            if chars.get(i + 1) == Some(&'>') {
                out.push(Token {
                    tok: Tok::Arrow,
                    line: start.0,
                    col: start.1,
                });
                i += 2;
                col += 2;
                continue;
            }
            return Err(syntax(line, col + 1, "'>' after '='"));
        }
        if c.is_ascii_digit() {
            let begin = i;
            let mut integral = true;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                integral = false;
                i += 1;
                if !(i < chars.len() && chars[i].is_ascii_digit()) {
                    return Err(syntax(line, col + (i - begin), "digit after '.'"));
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                integral = false;
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                if !(i < chars.len() && chars[i].is_ascii_digit()) {
                    return Err(syntax(line, col + (i - begin), "exponent digits"));
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[begin..i].iter().collect();
            let value: f64 = text
                .parse()
                .map_err(|_| syntax(start.0, start.1, "a decimal number"))?;
            out.push(Token {
                tok: Tok::Num { value, integral },
                line: start.0,
                col: start.1,
            });
            col += i - begin;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[begin..i].iter().collect()),
                line: start.0,
                col: start.1,
            });
            col += i - begin;
            continue;
        }
        return Err(syntax(
            line,
            col,
            "a number, identifier, operator or parenthesis",
        ));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_positions() {
        let toks = tokenize("1.5e-3 + t\n  ^ 42").unwrap();
        assert_eq!(
            toks[0].tok,
            Tok::Num {
                value: 1.5e-3,
                integral: false
            }
        );
        assert_eq!((toks[2].line, toks[2].col), (1, 10));
        assert_eq!((toks[3].line, toks[3].col), (2, 3));
        assert_eq!(
            toks[4].tok,
            Tok::Num {
                value: 42.0,
                integral: true
            }
        );
        assert_eq!(toks.last().unwrap().tok, Tok::Eof);
    }

    #[test]
    fn lexical_errors() {
        assert_eq!(
            tokenize("1.").unwrap_err(),
            Error::Syntax {
                line: 1,
                col: 3,
                expected: "digit after '.'".into()
            }
        );
        assert!(matches!(
            tokenize("t $ 2"),
            Err(Error::Syntax {
                line: 1,
                col: 3,
                ..
            })
        ));
        assert!(matches!(tokenize("a = b"), Err(Error::Syntax { .. })));
        assert!(matches!(tokenize("2e+"), Err(Error::Syntax { .. })));
    }
}
