//! Generating-function expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-'? atom ('^' uint)?
//! atom   := uint | 'z' | name | '(' expr ')' | 'sqrt' '(' expr ')'
//! ```
//!
//! Whitespace is ignored. There is no implicit multiplication, so `2z` is an
//! error, and `-z^2` means `-(z^2)`. Names resolve against the registry in
//! [`crate::constructions`].

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::constructions::{named_gf, NAMED_GFS};
use crate::rational::Rational;
use crate::series::{SeriesError, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigUint),
    Var,
    Named(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sqrt(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown name `{name}` at offset {offset}")]
    UnknownName { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownName { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] SeriesError),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.error(self.pos, format!("expected '{want}', found '{c}'")),
            None => self.error(self.pos, format!("expected '{want}', found end of input")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = match op {
                '+' => Expr::Add(Box::new(lhs), Box::new(rhs)),
                _ => Expr::Sub(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = match op {
                '*' => Expr::Mul(Box::new(lhs), Box::new(rhs)),
                _ => Expr::Div(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let negate = self.peek() == Some('-');
        if negate {
            self.pos += 1;
        }
        let mut atom = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return self.error(start, "expected a nonnegative integer exponent");
            }
            let exp: u32 = match digits.parse() {
                Ok(e) => e,
                Err(_) => return self.error(start, "exponent too large"),
            };
            atom = Expr::Pow(Box::new(atom), exp);
        }
        Ok(if negate {
            Expr::Neg(Box::new(atom))
        } else {
            atom
        })
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        let len = self.src[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        self.pos += len;
        &self.src[start..start + len]
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos_after_ws();
        match self.peek() {
            None => self.error(start, "expected an expression, found end of input"),
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                Ok(Expr::Int(digits.parse().expect("ascii digits")))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let len = self.src[start..]
                    .bytes()
                    .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                    .count();
                let name = &self.src[start..start + len];
                self.pos += len;
                match name {
                    "z" => Ok(Expr::Var),
                    "sqrt" => {
                        self.expect('(')?;
                        let inner = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::Sqrt(Box::new(inner)))
                    }
                    _ if NAMED_GFS.iter().any(|(n, _)| *n == name) => {
                        Ok(Expr::Named(name.to_string()))
                    }
                    _ => Err(ParseError::UnknownName {
                        name: name.to_string(),
                        offset: start,
                    }),
                }
            }
            Some(c) => self.error(start, format!("unexpected '{c}'")),
        }
    }

    fn pos_after_ws(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }
}

/// Parses a generating-function expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(c) => p.error(p.pos, format!("unexpected '{c}'")),
    }
}

impl Expr {
    /// Truncated series of the expression with `order` coefficients, fewer
    /// if a division cancels powers of `z`.
    pub fn eval(&self, order: usize) -> Result<TruncSeries, SeriesError> {
        Ok(match self {
            Expr::Int(n) => TruncSeries::constant(Rational::from_integer(n.clone().into()), order),
            Expr::Var => TruncSeries::var(order),
            Expr::Named(name) => {
                named_gf(name, order)
                    .expect("names are checked at parse time")
                    .series
            }
            Expr::Neg(a) => -a.eval(order)?,
            Expr::Add(a, b) => a.eval(order)? + b.eval(order)?,
            Expr::Sub(a, b) => a.eval(order)? - b.eval(order)?,
            Expr::Mul(a, b) => a.eval(order)? * b.eval(order)?,
            Expr::Div(a, b) => a.eval(order)?.divide(&b.eval(order)?)?,
            Expr::Pow(a, n) => a.eval(order)?.pow(u64::from(*n)),
            Expr::Sqrt(a) => a.eval(order)?.sqrt()?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Var | Expr::Named(_) | Expr::Sqrt(_) => 5,
        }
    }
}

/// Parses and evaluates in one step.
pub fn eval_series(text: &str, order: usize) -> Result<TruncSeries, ExprError> {
    Ok(parse(text)?.eval(order)?)
}

struct Prec<'a>(&'a Expr, u8);

impl fmt::Display for Prec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Canonical form: minimal parentheses, re-parses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var => write!(f, "z"),
            Expr::Named(name) => write!(f, "{name}"),
            Expr::Neg(a) => write!(f, "-{}", Prec(a, 4)),
            Expr::Add(a, b) => write!(f, "{} + {}", Prec(a, 1), Prec(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", Prec(a, 1), Prec(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", Prec(a, 2), Prec(b, 3)),
            Expr::Div(a, b) => write!(f, "{}/{}", Prec(a, 2), Prec(b, 3)),
            Expr::Pow(a, n) => write!(f, "{}^{n}", Prec(a, 5)),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}
