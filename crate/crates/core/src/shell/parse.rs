//! Lexer and recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := "-" factor | base ("^" signed_int)?
//! base   := "x" | "p" | "y" | "q" | rational | "(" expr ")" | "[" expr "," expr "]"
//!         | ident "(" expr ("," expr)* ")" | ident
//! rational := int | "(" int "/" int ")"
//! ```
//!
//! `y` is read as `p`. Products need an explicit `*`.

use std::fmt;

use num_bigint::BigInt;

/// Byte offsets plus the 1-based line/column of the start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    P,
}

#[derive(Debug, Clone)]
pub struct Ast {
    pub kind: AstKind,
    pub span: Span,
}

/// Structural equality; spans are ignored.
impl PartialEq for Ast {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AstKind {
    Var(Var),
    QVar,
    /// `num / den`; integers have `den = 1`.
    Rational(BigInt, BigInt),
    /// A session variable.
    Ident(String),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
    Bracket(Box<Ast>, Box<Ast>),
    Call(String, Vec<Ast>),
    Neg(Box<Ast>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: expected ", self.line, self.col)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    X,
    P,
    Q,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::X => f.write_str("'x'"),
            Tok::P => f.write_str("'p'"),
            Tok::Q => f.write_str("'q'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrack => f.write_str("'['"),
            Tok::RBrack => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut line_start = 0;
    let mut chars = src.char_indices().peekable();
    while let Some(&(start, ch)) = chars.peek() {
        let col = src[line_start..start].chars().count() + 1;
        let span = |end: usize| Span {
            start,
            end,
            line,
            col,
        };
        if ch == '\n' {
            chars.next();
            line += 1;
            line_start = start + 1;
            continue;
        }
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        if ch.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            let n: BigInt = src[start..end].parse().expect("ascii digits");
            out.push((Tok::Int(n), span(end)));
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            let tok = match &src[start..end] {
                "x" => Tok::X,
                "p" | "y" => Tok::P,
                "q" => Tok::Q,
                s => Tok::Ident(s.to_string()),
            };
            out.push((tok, span(end)));
            continue;
        }
        let tok = match ch {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' | ';' => Tok::Comma,
            other => {
                return Err(ParseError {
                    line,
                    col,
                    expected: vec!["a token".into()],
                    found: format!("character {other:?}"),
                })
            }
        };
        chars.next();
        out.push((tok, span(start + ch.len_utf8())));
    }
    let end = src.len();
    let col = src[line_start..].chars().count() + 1;
    out.push((
        Tok::Eof,
        Span {
            start: end,
            end,
            line,
            col,
        },
    ));
    Ok(out)
}

const MAX_DEPTH: usize = 64;

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (tok, span) = &self.toks[self.pos];
        ParseError {
            line: span.line,
            col: span.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error(&[name]))
        }
    }

    fn join(a: Span, b: Span) -> Span {
        Span { end: b.end, ..a }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError {
                expected: vec![format!("nesting depth at most {MAX_DEPTH}")],
                ..self.error(&[])
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let ctor: fn(Box<Ast>, Box<Ast>) -> AstKind = match self.peek() {
                Tok::Plus => AstKind::Add,
                Tok::Minus => AstKind::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            let span = Self::join(lhs.span, rhs.span);
            lhs = Ast {
                kind: ctor(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.factor()?;
            let span = Self::join(lhs.span, rhs.span);
            lhs = Ast {
                kind: AstKind::Mul(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        if *self.peek() == Tok::Minus {
            self.enter()?;
            let start = self.bump().1;
            let inner = self.factor()?;
            self.depth -= 1;
            let span = Self::join(start, inner.span);
            return Ok(Ast {
                kind: AstKind::Neg(Box::new(inner)),
                span,
            });
        }
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        if !matches!(self.peek(), Tok::Int(_)) {
            return Err(self.error(&["integer exponent"]));
        }
        let (Tok::Int(n), end) = self.bump() else {
            unreachable!()
        };
        let n: i64 = i64::try_from(n)
            .ok()
            .filter(|n| *n <= 1 << 20)
            .ok_or_else(|| ParseError {
                line: end.line,
                col: end.col,
                expected: vec!["exponent of magnitude at most 2^20".into()],
                found: "a larger integer".into(),
            })?;
        let span = Self::join(base.span, end);
        Ok(Ast {
            kind: AstKind::Pow(Box::new(base), if negative { -n } else { n }),
            span,
        })
    }

    fn is_rational_literal(&self) -> bool {
        matches!(
            (
                self.peek(),
                self.peek_at(1),
                self.peek_at(2),
                self.peek_at(3),
                self.peek_at(4)
            ),
            (
                Tok::LParen,
                Tok::Int(_),
                Tok::Slash,
                Tok::Int(_),
                Tok::RParen
            )
        )
    }

    fn base(&mut self) -> Result<Ast, ParseError> {
        const EXPECTED: &[&str] = &[
            "'x'",
            "'p'",
            "'y'",
            "'q'",
            "integer",
            "'('",
            "'['",
            "identifier",
        ];
        if self.is_rational_literal() {
            let start = self.bump().1;
            let Tok::Int(n) = self.bump().0 else {
                unreachable!()
            };
            self.bump();
            let Tok::Int(d) = self.bump().0 else {
                unreachable!()
            };
            let end = self.bump().1;
            return Ok(Ast {
                kind: AstKind::Rational(n, d),
                span: Self::join(start, end),
            });
        }
        let (tok, span) = (self.peek().clone(), self.span());
        let kind = match tok {
            Tok::X => {
                self.bump();
                AstKind::Var(Var::X)
            }
            Tok::P => {
                self.bump();
                AstKind::Var(Var::P)
            }
            Tok::Q => {
                self.bump();
                AstKind::QVar
            }
            Tok::Int(n) => {
                self.bump();
                AstKind::Rational(n, BigInt::from(1))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                let end = self.expect(Tok::RParen, "')'")?;
                return Ok(Ast {
                    kind: inner.kind,
                    span: Self::join(span, end),
                });
            }
            Tok::LBrack => {
                self.bump();
                let f = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let g = self.expr()?;
                let end = self.expect(Tok::RBrack, "']'")?;
                return Ok(Ast {
                    kind: AstKind::Bracket(Box::new(f), Box::new(g)),
                    span: Self::join(span, end),
                });
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Ast {
                        kind: AstKind::Ident(name),
                        span,
                    });
                }
                self.bump();
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                let end = self.expect(Tok::RParen, "')'")?;
                return Ok(Ast {
                    kind: AstKind::Call(name, args),
                    span: Self::join(span, end),
                });
            }
            _ => return Err(self.error(EXPECTED)),
        };
        Ok(Ast { kind, span })
    }
}

/// Parses a complete expression.
pub fn parse(src: &str) -> Result<Ast, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        depth: 0,
    };
    let ast = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(ast)
}
