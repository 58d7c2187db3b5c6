//! Deterministic text rendering in the parser's grammar.

use num_traits::{One, Signed};

use super::poly::{Coeff, Poly, Symbol};
use super::Expr;

pub(super) fn expr(e: &Expr) -> String {
    let num = poly(e.numerator());
    if e.denominator().is_one() {
        return num;
    }
    format!("({num})/({})", poly(e.denominator()))
}

fn symbol(s: &Symbol) -> String {
    match s {
        Symbol::Var(v) => v.to_string(),
        Symbol::Sin(u) => format!("sin({})", expr(u)),
        Symbol::Cos(u) => format!("cos({})", expr(u)),
        Symbol::Exp(u) => format!("exp({})", expr(u)),
    }
}

fn magnitude(c: &Coeff) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Terms in descending monomial order, e.g. `2*x1^2*sin(x2) - 1/3*x1 + 4`.
pub(super) fn poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = m
            .factors()
            .iter()
            .map(|(s, e)| {
                if *e == 1 {
                    symbol(s)
                } else {
                    format!("{}^{e}", symbol(s))
                }
            })
            .collect();
        if !c.abs().is_one() || factors.is_empty() {
            factors.insert(0, magnitude(c));
        }
        out.push_str(&factors.join("*"));
    }
    out
}
