//! Infix text grammar.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative, integer only
//! primary := number | name | func '(' sum ')' | '(' sum ')'
//! func    := sin | cos | exp
//! ```
//!
//! Numbers are decimal literals (optionally with an exponent) and are read
//! exactly as rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};

use super::{Expr, Point};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }
}

/// Raw syntax tree, before canonicalisation.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(BigRational),
    Var(String),
    Neg(Box<Node>),
    Sum(Vec<Node>),
    Product(Vec<Node>),
    Quotient(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

impl Node {
    /// Canonical expression for this tree.
    pub fn simplify(&self) -> Result<Expr> {
        Ok(match self {
            Node::Const(c) => Expr::from_coeff(c.clone()),
            Node::Var(v) => Expr::var(v),
            Node::Neg(a) => -a.simplify()?,
            Node::Sum(xs) => {
                let mut acc = Expr::zero();
                for x in xs {
                    acc = acc + x.simplify()?;
                }
                acc
            }
            Node::Product(xs) => {
                let mut acc = Expr::one();
                for x in xs {
                    acc = acc * x.simplify()?;
                }
                acc
            }
            Node::Quotient(a, b) => a.simplify()?.checked_div(&b.simplify()?)?,
            Node::Pow(a, e) => {
                let base = a.simplify()?;
                if *e < 0 && base.is_zero() {
                    return Err(Error::Degenerate("zero raised to a negative power".into()));
                }
                base.pow(*e)
            }
            Node::Call(f, a) => {
                let u = a.simplify()?;
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Exp => u.exp(),
                }
            }
        })
    }

    /// Direct floating-point evaluation of the tree, independent of the
    /// canonical representation.
    pub fn evaluate(&self, p: &Point) -> Result<f64> {
        Ok(match self {
            Node::Const(c) => c.to_f64().unwrap_or(f64::NAN),
            Node::Var(v) => p.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            Node::Neg(a) => -a.evaluate(p)?,
            Node::Sum(xs) => xs.iter().map(|x| x.evaluate(p)).sum::<Result<f64>>()?,
            Node::Product(xs) => xs.iter().map(|x| x.evaluate(p)).product::<Result<f64>>()?,
            Node::Quotient(a, b) => {
                let d = b.evaluate(p)?;
                if d == 0.0 {
                    return Err(Error::Singular(format!("division by zero at {p}")));
                }
                a.evaluate(p)? / d
            }
            Node::Pow(a, e) => a.evaluate(p)?.powi(*e),
            Node::Call(f, a) => {
                let u = a.evaluate(p)?;
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Exp => u.exp(),
                }
            }
        })
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(v) => f.write_str(v),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Sum(xs) => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Node::Product(xs) => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Node::Quotient(a, b) => write!(f, "({a}/{b})"),
            Node::Pow(a, e) => write!(f, "({a})^({e})"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            out.push((start, Tok::Num(parse_decimal(&text[start..i], start)?)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                let ch = text[i..].chars().next().unwrap_or(c);
                return Err(Error::Syntax {
                    pos: i,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

fn parse_decimal(s: &str, pos: usize) -> Result<BigRational> {
    let bad = || Error::Syntax {
        pos,
        message: format!("malformed number '{s}'"),
    };
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => {
            if b.contains('.') {
                return Err(bad());
            }
            (a, b)
        }
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = exponent - frac_part.len() as i32;
    let factor = if scale >= 0 {
        Pow::pow(&ten, scale as u32)
    } else {
        Pow::pow(&ten, (-scale) as u32).recip()
    };
    Ok(BigRational::from_integer(n) * factor)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    allowed: &'a [&'a str],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_rparen(&mut self) -> Result<()> {
        let pos = self.offset();
        match self.bump() {
            Some(Tok::RParen) => Ok(()),
            _ => Err(Error::Syntax {
                pos,
                message: "expected ')'".into(),
            }),
        }
    }

    fn sum(&mut self) -> Result<Node> {
        let mut terms = vec![self.product()?];
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.bump();
                    terms.push(self.product()?);
                }
                Some(Tok::Op('-')) => {
                    self.bump();
                    terms.push(Node::Neg(Box::new(self.product()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Node::Sum(terms)
        })
    }

    fn product(&mut self) -> Result<Node> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = match acc {
                        Node::Product(mut xs) => {
                            xs.push(rhs);
                            Node::Product(xs)
                        }
                        other => Node::Product(vec![other, rhs]),
                    };
                }
                Some(Tok::Op('/')) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = Node::Quotient(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.bump();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.bump();
            let pos = self.offset();
            let exponent = self.unary()?;
            let value = constant_value(&exponent).ok_or_else(|| Error::NonIntegerExponent {
                pos,
                exponent: exponent.to_string(),
            })?;
            if !value.is_integer()
                || value.abs() > BigRational::from_integer(BigInt::from(i32::MAX))
            {
                return Err(Error::NonIntegerExponent {
                    pos,
                    exponent: value.to_string(),
                });
            }
            let e = value.to_integer().to_i32().expect("bounded exponent");
            return Ok(Node::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node> {
        let pos = self.offset();
        match self.bump() {
            Some(Tok::Num(q)) => Ok(Node::Const(q)),
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                if let Some(func) = Func::from_name(&name) {
                    if self.peek() != Some(&Tok::LParen) {
                        return Err(Error::Syntax {
                            pos: self.offset(),
                            message: format!("expected '(' after '{name}'"),
                        });
                    }
                    self.bump();
                    let arg = self.sum()?;
                    self.expect_rparen()?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                if self.allowed.contains(&name.as_str()) {
                    Ok(Node::Var(name))
                } else {
                    Err(Error::UnknownIdentifier { name, pos })
                }
            }
            Some(Tok::Op(c)) => Err(Error::Syntax {
                pos,
                message: format!("unexpected operator '{c}'"),
            }),
            Some(Tok::RParen) => Err(Error::Syntax {
                pos,
                message: "unexpected ')'".into(),
            }),
            None => Err(Error::Syntax {
                pos,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

/// Exponents must fold to a constant at parse time.
fn constant_value(node: &Node) -> Option<BigRational> {
    match node {
        Node::Const(c) => Some(c.clone()),
        Node::Neg(a) => constant_value(a).map(|v| -v),
        Node::Sum(xs) => xs.iter().map(constant_value).sum(),
        Node::Product(xs) => xs.iter().map(constant_value).product(),
        Node::Quotient(a, b) => {
            let d = constant_value(b)?;
            if d.is_zero() {
                None
            } else {
                Some(constant_value(a)? / d)
            }
        }
        Node::Pow(a, e) => {
            let base = constant_value(a)?;
            if *e < 0 && base.is_zero() {
                return None;
            }
            Some(if *e >= 0 {
                Pow::pow(&base, *e as u32)
            } else {
                Pow::pow(&base, e.unsigned_abs()).recip()
            })
        }
        Node::Var(_) | Node::Call(..) => None,
    }
}

/// Parse text into a raw syntax tree over the given coordinate names.
pub fn parse_node(text: &str, allowed_vars: &[&str]) -> Result<Node> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        allowed: allowed_vars,
        end: text.len(),
    };
    let node = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(Error::Syntax {
            pos: p.offset(),
            message: "trailing input".into(),
        });
    }
    Ok(node)
}

/// Parse and canonicalise.
pub fn parse_expr(text: &str, allowed_vars: &[&str]) -> Result<Expr> {
    parse_node(text, allowed_vars)?.simplify()
}
