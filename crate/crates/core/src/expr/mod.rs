//! Symbolic expression kernel.
//!
//! An [`Expr`] is an immutable, always-canonical rational function in the
//! coordinates and the analytic atoms `sin(u)`, `cos(u)`, `exp(u)`:
//! `num / den` with exact rational coefficients, `gcd(num, den) = 1`, and a
//! monic denominator. Cosines never appear squared (the Pythagorean rewrite
//! `cos² = 1 - sin²` is applied eagerly), so a polynomial identity in
//! `sin`/`cos` of one argument reduces to a syntactic zero.
//!
//! Because the representation is canonical, `e.is_zero()` is a proof that
//! `e` vanishes wherever it is defined; equality of two expressions that only
//! agree through deeper trigonometric identities (double angles, `exp`
//! functional equations) is left to numeric sampling.

mod parse;
mod poly;
mod render;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

pub use parse::{parse_expr, parse_node, Func, Node};
pub use poly::Symbol;
pub(crate) use poly::{Coeff, Poly};

/// Default upper bound on [`Expr::node_count`] for tensor operations.
pub const DEFAULT_NODE_BUDGET: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Frac {
    num: Poly,
    den: Poly,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr(Arc<Frac>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", self.render())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

fn reduce(p: Poly) -> Poly {
    p.trig_reduced().unwrap_or(p)
}

impl Expr {
    fn from_parts_unchecked(num: Poly, den: Poly) -> Expr {
        Expr(Arc::new(Frac { num, den }))
    }

    /// Build `num / den` in canonical form.
    fn from_parts(num: Poly, den: Poly) -> Expr {
        let num = reduce(num);
        let den = reduce(den);
        assert!(!den.is_zero(), "symbolic division by zero");
        if num.is_zero() {
            return Expr::zero();
        }
        if let Some(c) = den.as_constant() {
            return Expr::from_poly(num.scale(&c.recip()));
        }
        let g = poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            Expr::from_parts_unchecked(num, den)
        } else {
            let k = lc.recip();
            Expr::from_parts_unchecked(num.scale(&k), den.scale(&k))
        }
    }

    /// Like [`Expr::from_parts`] for inputs already known to be coprime;
    /// falls back to the full path when the trig rewrite changes anything.
    fn coprime_parts(num: Poly, den: Poly) -> Expr {
        match (num.trig_reduced(), den.trig_reduced()) {
            (None, None) => {
                if num.is_zero() {
                    return Expr::zero();
                }
                let lc = den.leading_coeff();
                if lc.is_one() {
                    Expr::from_parts_unchecked(num, den)
                } else {
                    let k = lc.recip();
                    Expr::from_parts_unchecked(num.scale(&k), den.scale(&k))
                }
            }
            (n, d) => Expr::from_parts(n.unwrap_or(num), d.unwrap_or(den)),
        }
    }

    fn from_poly(p: Poly) -> Expr {
        Expr::from_parts_unchecked(reduce(p), Poly::one())
    }

    pub fn zero() -> Expr {
        Expr::from_parts_unchecked(Poly::zero(), Poly::one())
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(k: i64) -> Expr {
        Expr::from_poly(Poly::constant(Coeff::from_integer(BigInt::from(k))))
    }

    /// Exact rational constant `p / q`.
    pub fn rational(p: i64, q: i64) -> Expr {
        assert!(q != 0, "zero denominator");
        Expr::from_poly(Poly::constant(BigRational::new(
            BigInt::from(p),
            BigInt::from(q),
        )))
    }

    pub(crate) fn from_coeff(c: Coeff) -> Expr {
        Expr::from_poly(Poly::constant(c))
    }

    /// A coordinate variable.
    pub fn var(name: &str) -> Expr {
        Expr::from_poly(Poly::symbol(Symbol::var(name)))
    }

    pub fn sin(&self) -> Expr {
        if self.is_zero() {
            return Expr::zero();
        }
        if self.sign_is_negative() {
            return -Expr::from_poly(Poly::symbol(Symbol::Sin(-self)));
        }
        Expr::from_poly(Poly::symbol(Symbol::Sin(self.clone())))
    }

    pub fn cos(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        if self.sign_is_negative() {
            return Expr::from_poly(Poly::symbol(Symbol::Cos(-self)));
        }
        Expr::from_poly(Poly::symbol(Symbol::Cos(self.clone())))
    }

    pub fn exp(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        Expr::from_poly(Poly::symbol(Symbol::Exp(self.clone())))
    }

    fn sign_is_negative(&self) -> bool {
        poly::leading_is_negative(&self.0.num)
    }

    fn from_symbol(sym: &Symbol) -> Expr {
        match sym {
            Symbol::Var(_) => Expr::from_poly(Poly::symbol(sym.clone())),
            Symbol::Sin(u) => u.sin(),
            Symbol::Cos(u) => u.cos(),
            Symbol::Exp(u) => u.exp(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.den.is_one() && self.0.num.is_one()
    }

    /// The value if this is a rational constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.0.den.is_one() {
            self.0.num.as_constant()
        } else {
            None
        }
    }

    /// The value if this is an integer constant that fits in `i64`.
    pub fn as_integer(&self) -> Option<i64> {
        let q = self.as_rational()?;
        if q.is_integer() {
            q.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    pub(crate) fn numerator(&self) -> &Poly {
        &self.0.num
    }

    pub(crate) fn denominator(&self) -> &Poly {
        &self.0.den
    }

    /// Numerator and denominator as separate expressions.
    pub fn split_fraction(&self) -> (Expr, Expr) {
        (
            Expr::from_parts_unchecked(self.0.num.clone(), Poly::one()),
            Expr::from_parts_unchecked(self.0.den.clone(), Poly::one()),
        )
    }

    /// Size measure used for resource budgets: terms plus monomial factors,
    /// counted recursively through atom arguments.
    pub fn node_count(&self) -> usize {
        self.0.num.node_count() + self.0.den.node_count()
    }

    pub fn depends_on(&self, name: &str) -> bool {
        self.symbols().iter().any(|s| s.depends_on(name))
    }

    /// Every indeterminate (coordinate or atom) occurring at top level.
    pub fn symbols(&self) -> std::collections::BTreeSet<Symbol> {
        let mut s = self.0.num.symbols();
        s.extend(self.0.den.symbols());
        s
    }

    /// Names of all coordinates occurring anywhere, including inside atoms.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        for s in self.symbols() {
            match &s {
                Symbol::Var(v) => {
                    out.insert(v.to_string());
                }
                Symbol::Sin(u) | Symbol::Cos(u) | Symbol::Exp(u) => out.extend(u.variables()),
            }
        }
        out
    }

    pub fn pow(&self, e: i32) -> Expr {
        if e == 0 {
            return Expr::one();
        }
        let k = e.unsigned_abs();
        let num = self.0.num.pow(k);
        let den = self.0.den.pow(k);
        if e > 0 {
            Expr::from_parts(num, den)
        } else {
            Expr::from_parts(den, num)
        }
    }

    /// Division reporting a zero divisor instead of panicking.
    pub fn checked_div(&self, rhs: &Expr) -> Result<Expr> {
        if rhs.is_zero() {
            return Err(Error::Degenerate(
                "division by an expression that simplifies to 0".into(),
            ));
        }
        Ok(self * &rhs.recip())
    }

    pub fn recip(&self) -> Expr {
        assert!(!self.is_zero(), "reciprocal of zero");
        Expr::from_parts(self.0.den.clone(), self.0.num.clone())
    }

    /// Exact partial derivative with respect to coordinate `v`.
    pub fn differentiate(&self, v: &str) -> Expr {
        if !self.depends_on(v) {
            return Expr::zero();
        }
        let dn = poly_derivative(&self.0.num, v);
        if self.0.den.is_one() {
            return dn;
        }
        let dd = poly_derivative(&self.0.den, v);
        let (n, d) = self.split_fraction();
        (dn * &d - n * dd) / (&d * &d)
    }

    /// Re-canonicalise from scratch. Values built through the public API are
    /// already canonical, so this is idempotent and usually the identity.
    pub fn simplify(&self) -> Expr {
        let num = rebuild_poly(&self.0.num);
        let den = rebuild_poly(&self.0.den);
        num / den
    }

    pub fn evaluate(&self, p: &Point) -> Result<f64> {
        let mut memo = BTreeMap::new();
        self.eval_memo(p, &mut memo)
    }

    fn eval_memo(&self, p: &Point, memo: &mut BTreeMap<Symbol, f64>) -> Result<f64> {
        let n = eval_poly(&self.0.num, p, memo)?;
        if self.0.den.is_one() {
            return Ok(n);
        }
        let d = eval_poly(&self.0.den, p, memo)?;
        if d == 0.0 || !d.is_finite() {
            return Err(Error::Singular(format!(
                "denominator {} vanishes at {p}",
                render::poly(&self.0.den)
            )));
        }
        Ok(n / d)
    }

    /// Canonical text form; [`parse_expr`] reads it back to an identical value.
    pub fn render(&self) -> String {
        render::expr(self)
    }
}

fn rebuild_poly(p: &Poly) -> Expr {
    let mut acc = Expr::zero();
    for (m, c) in p.terms() {
        let mut t = Expr::from_coeff(c.clone());
        for (s, e) in m.factors() {
            let atom = match s {
                Symbol::Var(_) => Expr::from_symbol(s),
                Symbol::Sin(u) => u.simplify().sin(),
                Symbol::Cos(u) => u.simplify().cos(),
                Symbol::Exp(u) => u.simplify().exp(),
            };
            t = t * atom.pow(*e as i32);
        }
        acc = acc + t;
    }
    acc
}

/// Derivative of a polynomial in coordinates and atoms, by the chain rule.
fn poly_derivative(p: &Poly, v: &str) -> Expr {
    let mut out = Expr::zero();
    for s in p.symbols() {
        if !s.depends_on(v) {
            continue;
        }
        let partial = Expr::from_poly(p.partial(&s));
        let inner = match &s {
            Symbol::Var(_) => Expr::one(),
            Symbol::Sin(u) => u.cos() * u.differentiate(v),
            Symbol::Cos(u) => -(u.sin() * u.differentiate(v)),
            Symbol::Exp(u) => u.exp() * u.differentiate(v),
        };
        out = out + partial * inner;
    }
    out
}

fn eval_symbol(s: &Symbol, p: &Point, memo: &mut BTreeMap<Symbol, f64>) -> Result<f64> {
    if let Some(v) = memo.get(s) {
        return Ok(*v);
    }
    let v = match s {
        Symbol::Var(name) => p
            .get(name)
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))?,
        Symbol::Sin(u) => u.eval_memo(p, memo)?.sin(),
        Symbol::Cos(u) => u.eval_memo(p, memo)?.cos(),
        Symbol::Exp(u) => u.eval_memo(p, memo)?.exp(),
    };
    memo.insert(s.clone(), v);
    Ok(v)
}

fn eval_poly(poly: &Poly, p: &Point, memo: &mut BTreeMap<Symbol, f64>) -> Result<f64> {
    let mut acc = 0.0;
    for (m, c) in poly.terms() {
        let mut t = c.to_f64().unwrap_or(f64::NAN);
        for (s, e) in m.factors() {
            t *= eval_symbol(s, p, memo)?.powi(*e as i32);
        }
        acc += t;
    }
    Ok(acc)
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                (&self).$method(rhs)
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.$method(&rhs)
            }
        }
    };
}

fn add_impl(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (fa, fb) = (&*a.0, &*b.0);
    if fa.den.is_one() && fb.den.is_one() {
        return Expr::from_parts_unchecked(fa.num.add(&fb.num), Poly::one());
    }
    if fa.den == fb.den {
        return Expr::from_parts(fa.num.add(&fb.num), fa.den.clone());
    }
    if fb.den.is_one() {
        // (n + q d) / d keeps gcd 1
        return Expr::coprime_parts(fa.num.add(&fb.num.mul(&fa.den)), fa.den.clone());
    }
    if fa.den.is_one() {
        return Expr::coprime_parts(fb.num.add(&fa.num.mul(&fb.den)), fb.den.clone());
    }
    let g = poly::gcd(&fa.den, &fb.den);
    let da = fa.den.div_exact(&g).expect("gcd divides");
    let db = fb.den.div_exact(&g).expect("gcd divides");
    let num = fa.num.mul(&db).add(&fb.num.mul(&da));
    let den = fa.den.mul(&db);
    Expr::from_parts(num, den)
}

fn mul_impl(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    let (fa, fb) = (&*a.0, &*b.0);
    if fa.den.is_one() && fb.den.is_one() {
        return Expr::from_poly(fa.num.mul(&fb.num));
    }
    if let Some(c) = fa.num.as_constant().filter(|_| fa.den.is_one()) {
        return Expr::from_parts_unchecked(fb.num.scale(&c), fb.den.clone());
    }
    if let Some(c) = fb.num.as_constant().filter(|_| fb.den.is_one()) {
        return Expr::from_parts_unchecked(fa.num.scale(&c), fa.den.clone());
    }
    let g1 = poly::gcd(&fa.num, &fb.den);
    let g2 = poly::gcd(&fb.num, &fa.den);
    let n1 = fa.num.div_exact(&g1).expect("gcd divides");
    let d2 = fb.den.div_exact(&g1).expect("gcd divides");
    let n2 = fb.num.div_exact(&g2).expect("gcd divides");
    let d1 = fa.den.div_exact(&g2).expect("gcd divides");
    Expr::coprime_parts(n1.mul(&n2), d1.mul(&d2))
}

impl_binop!(Add, add, add_impl);
impl_binop!(Sub, sub, |a, b| add_impl(a, &-b));
impl_binop!(Mul, mul, mul_impl);
impl_binop!(Div, div, |a, b| mul_impl(a, &b.recip()));

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::from_parts_unchecked(self.0.num.neg(), self.0.den.clone())
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<i64> for Expr {
    fn from(k: i64) -> Expr {
        Expr::int(k)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Expr> for Expr {
    fn sum<I: Iterator<Item = &'a Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| a + b)
    }
}

/// Assignment of real values to coordinate names.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Point {
    values: BTreeMap<String, f64>,
}

impl Point {
    pub fn new() -> Self {
        Point::default()
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, f64)>) -> Self {
        Point {
            values: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Keep only the named coordinates.
    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Point {
        Point {
            values: names
                .into_iter()
                .filter_map(|n| self.get(n).map(|v| (n.to_string(), v)))
                .collect(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (k, v)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Expr {
        Expr::var(&format!("x{i}"))
    }

    #[test]
    fn commutative_difference_vanishes() {
        assert!((x(1) * x(2) - x(2) * x(1)).is_zero());
    }

    #[test]
    fn pythagorean_identity() {
        let s = x(1).sin();
        let c = x(1).cos();
        assert!((&s * &s + &c * &c).is_one());
    }

    #[test]
    fn polynomial_division_cancels() {
        let e = (x(1).pow(2) - Expr::one()) / (x(1) - Expr::one());
        assert_eq!(e, x(1) + Expr::one());
    }

    #[test]
    fn derivative_table() {
        assert_eq!((x(1) * x(2)).differentiate("x1"), x(2));
        assert_eq!(x(1).sin().differentiate("x1"), x(1).cos());
        assert_eq!(x(1).cos().differentiate("x1"), -x(1).sin());
        assert_eq!(x(1).pow(2).differentiate("x1"), Expr::int(2) * x(1));
        let q = x(1).recip();
        assert_eq!(q.differentiate("x1"), -(x(1).pow(-2)));
    }

    #[test]
    fn cotangent_derivative() {
        let cot = x(1).cos() / x(1).sin();
        let expected = -(x(1).sin().pow(-2));
        assert_eq!(cot.differentiate("x1"), expected);
    }

    #[test]
    fn evaluation_and_singularity() {
        let p = Point::from_pairs([("x1", 2.0), ("x2", 3.0)]);
        assert_eq!((x(1) * x(2)).evaluate(&p).unwrap(), 6.0);
        let z = Point::from_pairs([("x1", 0.0)]);
        assert!(matches!(x(1).recip().evaluate(&z), Err(Error::Singular(_))));
        let half_pi = Point::from_pairs([("x1", std::f64::consts::FRAC_PI_2)]);
        assert!((x(1).sin().evaluate(&half_pi).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(x(3).evaluate(&p), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn odd_and_even_atoms() {
        assert_eq!((-x(1)).sin(), -x(1).sin());
        assert_eq!((-x(1)).cos(), x(1).cos());
        assert!(Expr::zero().sin().is_zero());
        assert!(Expr::zero().exp().is_one());
    }

    #[test]
    fn negative_powers() {
        let e = x(1).pow(-2) * x(1).pow(3);
        assert_eq!(e, x(1));
    }
}
