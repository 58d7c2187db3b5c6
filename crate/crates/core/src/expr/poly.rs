//! Sparse multivariate polynomials over the rationals.
//!
//! Indeterminates are [`Symbol`]s: coordinate names plus the opaque analytic
//! atoms `sin(u)`, `cos(u)`, `exp(u)`. Terms are kept in a `BTreeMap` keyed by
//! a lexicographic monomial order in which smaller symbols are more
//! significant, so the last entry is always the leading term.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Expr;

pub type Coeff = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Var(Arc<str>),
    Sin(Expr),
    Cos(Expr),
    Exp(Expr),
}

impl Symbol {
    pub fn var(name: &str) -> Symbol {
        Symbol::Var(Arc::from(name))
    }

    /// Argument of an analytic atom, `None` for coordinates.
    pub fn argument(&self) -> Option<&Expr> {
        match self {
            Symbol::Var(_) => None,
            Symbol::Sin(u) | Symbol::Cos(u) | Symbol::Exp(u) => Some(u),
        }
    }

    pub fn depends_on(&self, name: &str) -> bool {
        match self {
            Symbol::Var(v) => &**v == name,
            Symbol::Sin(u) | Symbol::Cos(u) | Symbol::Exp(u) => u.depends_on(name),
        }
    }
}

/// Power product of symbols, sorted by symbol with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (Some((sa, ea)), Some((sb, eb))) => {
                    if sa == sb {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                    } else if sa < sb {
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
            i += 1;
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn symbol(sym: Symbol, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(sym, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn degree_in(&self, sym: &Symbol) -> u32 {
        self.0
            .binary_search_by(|(s, _)| s.cmp(sym))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *s {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *s {
                let d = other.0[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((s.clone(), e - d)),
                }
            } else {
                out.push((s.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (s, e) in &self.0 {
            let d = other.degree_in(s);
            if d > 0 {
                out.push((s.clone(), (*e).min(d)));
            }
        }
        Monomial(out)
    }

    pub fn without(&self, sym: &Symbol) -> Monomial {
        Monomial(self.0.iter().filter(|(s, _)| s != sym).cloned().collect())
    }

    fn with_degree(&self, sym: &Symbol, exp: u32) -> Monomial {
        self.without(sym).mul(&Monomial::symbol(sym.clone(), exp))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn symbol(sym: Symbol) -> Self {
        Poly::term(Monomial::symbol(sym, 1), Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &Coeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Coeff {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Coeff::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Coeff) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, k: &Coeff) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        // multiplying by a monomial preserves the term order
        Poly {
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some((m, c)) = other.as_monomial() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return other.mul_term(m, c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient, `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(&lm)?;
            let qc = rc / &lc;
            let step = divisor.mul_term(&qm, &qc);
            rem = rem.sub(&step);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (s, _) in &m.0 {
                out.insert(s.clone());
            }
        }
        out
    }

    /// Split into coefficients of powers of `sym`.
    pub fn coeffs_in(&self, sym: &Symbol) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.degree_in(sym);
            out.entry(d)
                .or_default()
                .add_term(m.without(sym), c.clone());
        }
        out
    }

    fn from_coeffs_in(sym: &Symbol, coeffs: &BTreeMap<u32, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (d, p) in coeffs {
            for (m, c) in &p.terms {
                out.add_term(m.with_degree(sym, *d), c.clone());
            }
        }
        out
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Normalise so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Formal partial derivative with respect to an indeterminate.
    pub fn partial(&self, sym: &Symbol) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let d = m.degree_in(sym);
            if d > 0 {
                out.add_term(
                    m.with_degree(sym, d - 1),
                    c * Coeff::from_integer(BigInt::from(d)),
                );
            }
        }
        out
    }

    /// Rewrite `cos(u)^2 -> 1 - sin(u)^2` until no cosine appears squared.
    /// Returns `None` when the polynomial is already reduced.
    pub fn trig_reduced(&self) -> Option<Poly> {
        let needs = self.terms.keys().any(|m| {
            m.0.iter()
                .any(|(s, e)| matches!(s, Symbol::Cos(_)) && *e >= 2)
        });
        if !needs {
            return None;
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::term(Monomial::one(), c.clone());
            for (s, e) in &m.0 {
                match s {
                    Symbol::Cos(u) if *e >= 2 => {
                        let sin2 =
                            Poly::term(Monomial::symbol(Symbol::Sin(u.clone()), 2), Coeff::one());
                        let pyth = Poly::one().sub(&sin2).pow(e / 2);
                        acc = acc.mul(&pyth);
                        if e % 2 == 1 {
                            acc = acc.mul(&Poly::symbol(s.clone()));
                        }
                    }
                    _ => acc = acc.mul_term(&Monomial::symbol(s.clone(), *e), &Coeff::one()),
                }
            }
            out = out.add(&acc);
        }
        Some(out)
    }

    pub fn node_count(&self) -> usize {
        self.terms
            .keys()
            .map(|m| {
                1 + m
                    .0
                    .iter()
                    .map(|(s, _)| 1 + s.argument().map_or(0, Expr::node_count))
                    .sum::<usize>()
            })
            .sum()
    }
}

fn coeff_is_negative(c: &Coeff) -> bool {
    c.is_negative()
}

/// Whether the leading coefficient is negative.
pub fn leading_is_negative(p: &Poly) -> bool {
    p.leading().is_some_and(|(_, c)| coeff_is_negative(c))
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if let Some((m, _)) = a.as_monomial() {
        return Poly::term(m.gcd(&b.monomial_content()), Coeff::one());
    }
    if let Some((m, _)) = b.as_monomial() {
        return Poly::term(m.gcd(&a.monomial_content()), Coeff::one());
    }
    if a == b {
        return a.monic();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    if !ma.is_one() || !mb.is_one() {
        let shared = ma.gcd(&mb);
        let one = Coeff::one();
        let ra = a
            .div_exact(&Poly::term(ma, one.clone()))
            .expect("monomial content divides");
        let rb = b
            .div_exact(&Poly::term(mb, one.clone()))
            .expect("monomial content divides");
        return gcd(&ra, &rb).mul_term(&shared, &one);
    }

    // trial division settles the common case of one argument dividing the
    // other without a remainder sequence
    if b.div_exact(a).is_some() {
        return a.monic();
    }
    if a.div_exact(b).is_some() {
        return b.monic();
    }

    let sa = a.symbols();
    let sb = b.symbols();
    // A symbol present in only one argument cannot occur in the gcd, so the
    // gcd divides every coefficient of that argument with respect to the
    // symbol. Folding the coefficients into the other argument keeps each
    // intermediate no larger than it.
    if let Some(s) = sa.difference(&sb).next() {
        return gcd_with_coeffs(a, s, b);
    }
    if let Some(s) = sb.difference(&sa).next() {
        return gcd_with_coeffs(b, s, a);
    }
    let v = sa
        .iter()
        .min_by_key(|s| {
            let da = a.terms().map(|(m, _)| m.degree_in(s)).max();
            let db = b.terms().map(|(m, _)| m.degree_in(s)).max();
            da.max(db)
        })
        .expect("non-constant polynomial")
        .clone();

    let ca = content_in(a, &v);
    let cb = content_in(b, &v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(&pa, &pb, &v);
    c.mul(&g).monic()
}

/// `gcd(a, b)` for a symbol `v` that occurs in `a` but not in `b`.
fn gcd_with_coeffs(a: &Poly, v: &Symbol, b: &Poly) -> Poly {
    let mut g = b.monic();
    for c in a.coeffs_in(v).into_values() {
        if g.is_one() {
            break;
        }
        g = gcd(&c, &g);
    }
    g
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &Poly, v: &Symbol) -> Poly {
    let coeffs = p.coeffs_in(v);
    let mut it = coeffs.into_values();
    let mut g = it.next().unwrap_or_else(Poly::zero).monic();
    for c in it {
        if g.is_one() {
            break;
        }
        g = gcd(&g, &c);
    }
    g
}

fn primitive_part(coeffs: &BTreeMap<u32, Poly>) -> BTreeMap<u32, Poly> {
    let mut g = Poly::zero();
    for c in coeffs.values() {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    // keep the leading coefficient positive so signs stay tidy
    let lead_neg = coeffs.values().next_back().is_some_and(leading_is_negative);
    let g = if lead_neg { g.neg() } else { g };
    let reduced: BTreeMap<u32, Poly> = coeffs
        .iter()
        .map(|(d, c)| (*d, c.div_exact(&g).expect("content divides coefficient")))
        .collect();
    // clear the rational content too, otherwise coefficients grow
    // exponentially along the remainder sequence
    let k = rational_content(reduced.values()).recip();
    reduced.into_iter().map(|(d, c)| (d, c.scale(&k))).collect()
}

/// Positive rational `q` such that the polynomials divided by `q` have
/// coprime integer coefficients.
fn rational_content<'a>(polys: impl Iterator<Item = &'a Poly>) -> Coeff {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for p in polys {
        for (_, c) in p.terms() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
    }
    if num.is_zero() {
        Coeff::one()
    } else {
        Coeff::new(num, den)
    }
}

/// Gcd of two polynomials primitive in `v`, via the primitive pseudo-remainder
/// sequence.
fn primitive_prs(a: &Poly, b: &Poly, v: &Symbol) -> Poly {
    let mut f = a.coeffs_in(v);
    let mut g = b.coeffs_in(v);
    let deg = |m: &BTreeMap<u32, Poly>| *m.keys().next_back().unwrap_or(&0);
    if deg(&f) < deg(&g) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        if deg(&g) == 0 {
            return Poly::one();
        }
        let r = pseudo_remainder(&f, &g);
        if r.is_empty() {
            return Poly::from_coeffs_in(v, &primitive_part(&g)).monic();
        }
        f = g;
        g = primitive_part(&r);
    }
}

fn pseudo_remainder(f: &BTreeMap<u32, Poly>, g: &BTreeMap<u32, Poly>) -> BTreeMap<u32, Poly> {
    let (&dg, lcg) = g.iter().next_back().expect("nonzero divisor");
    let mut r = f.clone();
    while let Some((&dr, lcr)) = r.iter().next_back() {
        if dr < dg {
            break;
        }
        let lcr = lcr.clone();
        let shift = dr - dg;
        let mut next: BTreeMap<u32, Poly> = BTreeMap::new();
        for (d, c) in &r {
            if *d == dr {
                continue;
            }
            next.insert(*d, c.mul(lcg));
        }
        for (d, c) in g {
            if *d == dg {
                continue;
            }
            let e = next.entry(d + shift).or_default();
            *e = e.sub(&c.mul(&lcr));
        }
        next.retain(|_, c| !c.is_zero());
        r = next;
    }
    r
}
