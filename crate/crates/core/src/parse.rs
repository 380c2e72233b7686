//! Expression grammar:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := ("+" | "-")? factor ("*" factor)*
//! factor := atom ("^" nat)?
//! atom   := rational | "X" nat | "tr" "(" expr ")" | "det" "(" expr ")"
//!         | "[" expr "," expr "]" | "(" expr ")"
//! ```
//!
//! Whitespace is ignored and multiplication must be written with `*`.
//! `[a, b]` is `a*b - b*a`.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{CoreError, Result};
use crate::limits::Limits;
use crate::poly::TracePolynomial;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(Scalar),
    Generator(usize),
    Trace(Box<Expr>),
    Det(Box<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Largest generator index mentioned.
    pub fn max_generator(&self) -> usize {
        match self {
            Expr::Number(_) => 0,
            Expr::Generator(i) => *i,
            Expr::Trace(e) | Expr::Det(e) | Expr::Neg(e) | Expr::Pow(e, _) => e.max_generator(),
            Expr::Commutator(a, b) | Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.max_generator().max(b.max_generator())
            }
        }
    }

    /// Expands into normal form over `m` generators.
    pub fn expand(&self, m: usize, n: Option<usize>, limits: &Limits) -> Result<TracePolynomial> {
        Ok(match self {
            Expr::Number(c) => TracePolynomial::constant(m, c.clone()),
            Expr::Generator(i) => TracePolynomial::generator(m, *i)?,
            Expr::Trace(e) => e.expand(m, n, limits)?.trace(n)?,
            Expr::Det(e) => {
                let n = n.ok_or(CoreError::DetWithoutSize)?;
                e.expand(m, Some(n), limits)?.det(n, limits)?
            }
            Expr::Commutator(a, b) => {
                let a = a.expand(m, n, limits)?;
                let b = b.expand(m, n, limits)?;
                a.mul_with(&b, limits)?.sub(&b.mul_with(&a, limits)?)?
            }
            Expr::Neg(e) => e.expand(m, n, limits)?.neg(),
            Expr::Add(a, b) => a.expand(m, n, limits)?.add(&b.expand(m, n, limits)?)?,
            Expr::Sub(a, b) => a.expand(m, n, limits)?.sub(&b.expand(m, n, limits)?)?,
            Expr::Mul(a, b) => a.expand(m, n, limits)?.mul_with(&b.expand(m, n, limits)?, limits)?,
            Expr::Pow(e, k) => e.expand(m, n, limits)?.pow_with(*k, limits)?,
        })
    }
}

/// Parses and expands `src` over `m` generators. `n` is needed only by
/// `det(...)` and by traces of constants.
pub fn parse(src: &str, m: usize, n: Option<usize>) -> Result<TracePolynomial> {
    parse_with(src, m, n, &Limits::default())
}

pub fn parse_with(src: &str, m: usize, n: Option<usize>, limits: &Limits) -> Result<TracePolynomial> {
    let expr = parse_expr(src)?;
    let used = expr.max_generator();
    if used > m {
        return Err(CoreError::UnknownGenerator { index: used, m });
    }
    expr.expand(m, n, limits)
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0, end: src.len() };
    let e = p.expr()?;
    if let Some(t) = p.tokens.get(p.pos) {
        return Err(CoreError::Syntax {
            pos: t.pos,
            msg: format!("unexpected {} (missing '*' or operator?)", t.kind),
        });
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Nat(BigInt),
    Gen(usize),
    Tr,
    Det,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Nat(v) => write!(f, "number {v}"),
            Kind::Gen(i) => write!(f, "X{i}"),
            Kind::Tr => f.write_str("'tr'"),
            Kind::Det => f.write_str("'det'"),
            Kind::Plus => f.write_str("'+'"),
            Kind::Minus => f.write_str("'-'"),
            Kind::Star => f.write_str("'*'"),
            Kind::Caret => f.write_str("'^'"),
            Kind::Slash => f.write_str("'/'"),
            Kind::Comma => f.write_str("','"),
            Kind::LParen => f.write_str("'('"),
            Kind::RParen => f.write_str("')'"),
            Kind::LBracket => f.write_str("'['"),
            Kind::RBracket => f.write_str("']'"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_from = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let pos = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let j = digits_from(i);
                let v: BigInt = src[i..j].parse().expect("ascii digits");
                i = j;
                out.push(Token { kind: Kind::Nat(v), pos });
                continue;
            }
            b'X' => {
                let j = digits_from(i + 1);
                if j == i + 1 {
                    return Err(CoreError::Syntax {
                        pos,
                        msg: "expected generator index after X".into(),
                    });
                }
                let index: usize = src[i + 1..j].parse().map_err(|_| CoreError::Syntax {
                    pos,
                    msg: "generator index too large".into(),
                })?;
                if index == 0 {
                    return Err(CoreError::Syntax {
                        pos,
                        msg: "generators are numbered from X1".into(),
                    });
                }
                i = j;
                out.push(Token { kind: Kind::Gen(index), pos });
                continue;
            }
            b't' if src[i..].starts_with("tr") => {
                i += 2;
                out.push(Token { kind: Kind::Tr, pos });
                continue;
            }
            b'd' if src[i..].starts_with("det") => {
                i += 3;
                out.push(Token { kind: Kind::Det, pos });
                continue;
            }
            b'+' => Kind::Plus,
            b'-' => Kind::Minus,
            b'*' => Kind::Star,
            b'^' => Kind::Caret,
            b'/' => Kind::Slash,
            b',' => Kind::Comma,
            b'(' => Kind::LParen,
            b')' => Kind::RParen,
            b'[' => Kind::LBracket,
            b']' => Kind::RBracket,
            _ => {
                return Err(CoreError::Syntax {
                    pos,
                    msg: format!("unexpected character {:?}", src[i..].chars().next().unwrap_or('?')),
                })
            }
        };
        i += 1;
        out.push(Token { kind, pos });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Kind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.pos).unwrap_or(self.end)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(CoreError::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, kind: &Kind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: Kind, what: &str) -> Result<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Kind::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Kind::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let negate = if self.eat(&Kind::Minus) {
            true
        } else {
            self.eat(&Kind::Plus);
            false
        };
        let mut lhs = self.factor()?;
        while self.eat(&Kind::Star) {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(if negate { Expr::Neg(Box::new(lhs)) } else { lhs })
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(&Kind::Caret) {
            let Some(Kind::Nat(k)) = self.peek().cloned() else {
                return self.error("expected exponent");
            };
            let Ok(k) = u32::try_from(k) else {
                return self.error("exponent too large");
            };
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(kind) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        self.pos += 1;
        match kind {
            Kind::Nat(p) => {
                if self.eat(&Kind::Slash) {
                    let Some(Kind::Nat(q)) = self.peek().cloned() else {
                        return self.error("expected denominator");
                    };
                    if q == BigInt::from(0) {
                        return self.error("zero denominator");
                    }
                    self.pos += 1;
                    return Ok(Expr::Number(Scalar::new(p, q)));
                }
                Ok(Expr::Number(Scalar::from_integer(p)))
            }
            Kind::Gen(i) => Ok(Expr::Generator(i)),
            Kind::Tr | Kind::Det => {
                self.expect(Kind::LParen, "'('")?;
                let inner = self.expr()?;
                self.expect(Kind::RParen, "')'")?;
                Ok(if kind == Kind::Tr {
                    Expr::Trace(Box::new(inner))
                } else {
                    Expr::Det(Box::new(inner))
                })
            }
            Kind::LBracket => {
                let a = self.expr()?;
                self.expect(Kind::Comma, "','")?;
                let b = self.expr()?;
                self.expect(Kind::RBracket, "']'")?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            Kind::LParen => {
                let e = self.expr()?;
                self.expect(Kind::RParen, "')'")?;
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                self.error("expected a number, generator, tr, det, '[' or '('")
            }
        }
    }
}
