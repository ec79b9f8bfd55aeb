//! Arithmetic expressions over the variables `t`, `x` and `u`.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | 't' | 'x' | 'u' | func '(' sum ')' | '(' sum ')'
//! func    := exp | sin | cos | tan | sqrt | abs | gamma
//! ```
//!
//! `-x^2` parses as `-(x^2)` and `2^-1` is accepted. Numbers are decimal with
//! an optional exponent (`1.5e-3`). The Unicode minus sign `−` is accepted as
//! an alias for `-`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::specmath;

/// Default step for [`Expr::partial_u`].
pub const DEFAULT_DU_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    X,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Tan,
    Sqrt,
    Abs,
    Gamma,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "gamma" => Func::Gamma,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Gamma => "gamma",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("`{func}` takes exactly one argument, found {found} at position {pos}")]
    Arity {
        func: &'static str,
        found: usize,
        pos: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("non-finite value {value} from `{expr}`")]
    NonFinite { expr: String, value: f64 },
    #[error("non-integer power of negative base in `{expr}`")]
    NegativeBase { expr: String },
    #[error("gamma domain error in `{expr}`: {source}")]
    Gamma {
        expr: String,
        source: specmath::GammaDomainError,
    },
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr, ParseError> {
        let tokens = lex(source)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            end: source.chars().count(),
        };
        if parser.tokens.is_empty() {
            return Err(ParseError::Syntax {
                pos: 0,
                msg: "empty expression".into(),
            });
        }
        let expr = parser.sum()?;
        if let Some(tok) = parser.peek() {
            return Err(ParseError::Syntax {
                pos: tok.pos,
                msg: format!("unexpected {}", tok.kind),
            });
        }
        Ok(expr)
    }

    pub fn constant(value: f64) -> Expr {
        Expr::Const(value)
    }

    /// Evaluates at `(t, x, u)`. Every intermediate value must be finite.
    pub fn eval(&self, t: f64, x: f64, u: f64) -> Result<f64, EvalError> {
        let value = match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::U) => u,
            Expr::Neg(e) => -e.eval(t, x, u)?,
            Expr::Binary(op, a, b) => {
                let a = a.eval(t, x, u)?;
                let b = b.eval(t, x, u)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => {
                        if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
                            a.powi(b as i32)
                        } else if a < 0.0 {
                            return Err(EvalError::NegativeBase {
                                expr: self.to_string(),
                            });
                        } else {
                            a.powf(b)
                        }
                    }
                }
            }
            Expr::Call(f, arg) => {
                let v = arg.eval(t, x, u)?;
                match f {
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Tan => v.tan(),
                    Func::Sqrt => v.sqrt(),
                    Func::Abs => v.abs(),
                    Func::Gamma => specmath::gamma(v).map_err(|source| EvalError::Gamma {
                        expr: self.to_string(),
                        source,
                    })?,
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite {
                expr: self.to_string(),
                value,
            })
        }
    }

    /// Central-difference estimate of ∂/∂u.
    pub fn partial_u(&self, t: f64, x: f64, u: f64, step: f64) -> Result<f64, EvalError> {
        debug_assert!(step > 0.0);
        if !self.uses(Var::U) {
            return Ok(0.0);
        }
        let hi = self.eval(t, x, u + step)?;
        let lo = self.eval(t, x, u - step)?;
        Ok((hi - lo) / (2.0 * step))
    }

    pub fn uses(&self, var: Var) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(e) | Expr::Call(_, e) => e.uses(var),
            Expr::Binary(_, a, b) => a.uses(var) || b.uses(var),
        }
    }

    /// True when the expression is the literal constant zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

// Fully parenthesized so that printing and re-parsing gives the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var(Var::T) => f.write_str("t"),
            Expr::Var(Var::X) => f.write_str("x"),
            Expr::Var(Var::U) => f.write_str("u"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {sym} {b})")
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Expr::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Number(n) => write!(f, "number {n}"),
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Slash => f.write_str("`/`"),
            TokenKind::Caret => f.write_str("`^`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Comma => f.write_str("`,`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let kind = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => TokenKind::Plus,
            '-' | '−' => TokenKind::Minus,
            '*' | '×' => TokenKind::Star,
            '/' | '÷' => TokenKind::Slash,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            ',' => TokenKind::Comma,
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value = text.parse::<f64>().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("malformed number `{text}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    pos: start,
                });
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(chars[start..i].iter().collect()),
                    pos: start,
                });
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        tokens.push(Token { kind, pos: start });
        i += 1;
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = if self.eat(&TokenKind::Plus) {
                BinOp::Add
            } else if self.eat(&TokenKind::Minus) {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.product()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(&TokenKind::Star) {
                BinOp::Mul
            } else if self.eat(&TokenKind::Slash) {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&TokenKind::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(&TokenKind::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat(&TokenKind::Caret) {
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.here();
        let Some(tok) = self.next() else {
            return Err(ParseError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            });
        };
        match tok.kind {
            TokenKind::Number(n) => Ok(Expr::Const(n)),
            TokenKind::LParen => {
                let inner = self.sum()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Ident(name) => match name.as_str() {
                "t" => Ok(Expr::Var(Var::T)),
                "x" => Ok(Expr::Var(Var::X)),
                "u" => Ok(Expr::Var(Var::U)),
                _ => {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(ParseError::UnknownIdentifier { name, pos: tok.pos });
                    };
                    self.call(func, tok.pos)
                }
            },
            other => Err(ParseError::Syntax {
                pos: tok.pos,
                msg: format!("unexpected {other}"),
            }),
        }
    }

    fn call(&mut self, func: Func, pos: usize) -> Result<Expr, ParseError> {
        if !self.eat(&TokenKind::LParen) {
            return Err(ParseError::Syntax {
                pos: self.here(),
                msg: format!("expected `(` after `{}`", func.name()),
            });
        }
        let mut args = Vec::new();
        if !self.eat(&TokenKind::RParen) {
            loop {
                args.push(self.sum()?);
                if self.eat(&TokenKind::Comma) {
                    continue;
                }
                self.expect_rparen()?;
                break;
            }
        }
        if args.len() != 1 {
            return Err(ParseError::Arity {
                func: func.name(),
                found: args.len(),
                pos,
            });
        }
        Ok(Expr::Call(func, Box::new(args.pop().unwrap())))
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.eat(&TokenKind::RParen) {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.here(),
                msg: "expected `)`".into(),
            })
        }
    }
}
