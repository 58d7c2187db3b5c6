use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{lift_vector, LiftOrder, SecondOrderChart};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::manifold::{christoffel, covariant_derivative, nabla, Connection, Metric, TensorField};

/// Sign of the `(∇_Z c)(X, Y)` term in the formula for `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HVariant {
    /// `+` sign.
    PaperPlus,
    /// `−` sign. The only variant compatible with `ḡ` once `∇c ≠ 0`.
    AuditMinus,
}

impl HVariant {
    pub const ALL: [HVariant; 2] = [HVariant::PaperPlus, HVariant::AuditMinus];

    pub fn as_str(self) -> &'static str {
        match self {
            HVariant::PaperPlus => "paper-plus",
            HVariant::AuditMinus => "audit-minus",
        }
    }

    fn sign(self) -> i64 {
        match self {
            HVariant::PaperPlus => 1,
            HVariant::AuditMinus => -1,
        }
    }
}

impl fmt::Display for HVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-plus" => Ok(HVariant::PaperPlus),
            "audit-minus" => Ok(HVariant::AuditMinus),
            other => Err(Error::Precondition(format!("unknown H variant '{other}'"))),
        }
    }
}

/// The (1,2) correction tensor of the lifted connection, with the sign
/// variant it was built from.
#[derive(Clone, Debug)]
pub struct HTensor {
    pub field: TensorField,
    pub variant: HVariant,
}

impl HTensor {
    /// `H(X, Y)` for base vector fields.
    pub fn apply(&self, x: &TensorField, y: &TensorField) -> Result<TensorField> {
        self.field.apply_bilinear(x, y)
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &Expr {
        self.field.get(&[k, i, j])
    }
}

/// `H^k_ij = ½ g^{kl} [(∇_i c)_jl + (∇_j c)_il ± (∇_l c)_ij]`.
pub fn h_tensor(
    g: &Metric,
    conn: &Connection,
    c: &TensorField,
    variant: HVariant,
) -> Result<HTensor> {
    let dc = covariant_derivative(conn, c)?;
    let n = g.dim();
    let sign = Expr::int(variant.sign());
    let half = Expr::rational(1, 2);
    let field = TensorField::from_fn(g.chart(), 1, 2, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        let mut acc = Expr::zero();
        for l in 0..n {
            let ginv = g.inverse_entry(k, l);
            if ginv.is_zero() {
                continue;
            }
            let bracket = dc.get(&[i, j, l]) + dc.get(&[j, i, l]) + &sign * dc.get(&[l, i, j]);
            if !bracket.is_zero() {
                acc = acc + ginv * bracket;
            }
        }
        acc * &half
    })?;
    Ok(HTensor { field, variant })
}

/// `∇̄` applied to lifts of base fields, by the nine-case table:
/// the result is the lift of `∇_X Y` of order `a + b − 2` (zero when
/// negative), plus `⁰(H(X,Y))` when both arguments are second lifts.
pub fn lifted_connection_action(
    sc: &SecondOrderChart,
    conn: &Connection,
    h: &HTensor,
    x_order: LiftOrder,
    x: &TensorField,
    y_order: LiftOrder,
    y: &TensorField,
) -> Result<TensorField> {
    let mut out = match LiftOrder::combine(x_order, y_order) {
        Some(o) => lift_vector(sc, &nabla(conn, x, y)?, o)?,
        None => TensorField::zeros(sc.total(), 1, 0),
    };
    if x_order == LiftOrder::Second && y_order == LiftOrder::Second {
        out = out.add(&lift_vector(sc, &h.apply(x, y)?, LiftOrder::Zeroth)?)?;
    }
    Ok(out)
}

/// Coefficients of the lifted connection on the total chart, read off the
/// action on the lifted coordinate frame.
pub fn lifted_connection(
    sc: &SecondOrderChart,
    conn: &Connection,
    h: &HTensor,
) -> Result<Connection> {
    let n = sc.base_dim();
    let base = sc.base();
    let mut columns: Vec<TensorField> = Vec::with_capacity(9 * n * n);
    for a in 0..3 {
        for i in 0..n {
            for b in 0..3 {
                for j in 0..n {
                    let xo = LiftOrder::from_rank(2 - a).expect("block");
                    let yo = LiftOrder::from_rank(2 - b).expect("block");
                    columns.push(lifted_connection_action(
                        sc,
                        conn,
                        h,
                        xo,
                        &TensorField::coordinate_vector(base, i),
                        yo,
                        &TensorField::coordinate_vector(base, j),
                    )?);
                }
            }
        }
    }
    let m = 3 * n;
    let coeffs = TensorField::from_fn(sc.total(), 1, 2, |ix| {
        columns[ix[1] * m + ix[2]].get(&[ix[0]]).clone()
    })?;
    Connection::new(coeffs)
}

/// Levi-Civita connection of a metric on the total chart, computed
/// directly from its Christoffel symbols.
pub fn t2m_levi_civita(gbar: &Metric) -> Result<Connection> {
    christoffel(gbar)
}
