use super::tensor::flat_index;
use super::{Connection, TensorField};
use crate::error::{Error, Result};
use crate::expr::Expr;

/// `[X,Y]^k = X^s ∂_s Y^k − Y^s ∂_s X^k`.
pub fn lie_bracket(x: &TensorField, y: &TensorField) -> Result<TensorField> {
    x.chart().ensure_compatible(y.chart())?;
    if x.valence() != (1, 0) || y.valence() != (1, 0) {
        return Err(Error::Valence("lie_bracket needs vector fields".into()));
    }
    TensorField::from_fn(x.chart(), 1, 0, |ix| {
        x.apply_to(y.get(&[ix[0]])) - y.apply_to(x.get(&[ix[0]]))
    })
}

/// Lie derivative of a (p,q) field along `X`:
/// `X^m ∂_m T − Σ_r T^{..m..} ∂_m X^{a_r} + Σ_s T_{..m..} ∂_{b_s} X^m`.
pub fn lie_derivative(x: &TensorField, t: &TensorField) -> Result<TensorField> {
    x.chart().ensure_compatible(t.chart())?;
    if x.valence() != (1, 0) {
        return Err(Error::Valence(
            "lie_derivative is taken along a vector field".into(),
        ));
    }
    let chart = t.chart().clone();
    let n = chart.dim();
    let (p, q) = t.valence();
    // dx[m][a] = ∂_m X^a
    let dx: Vec<Vec<Expr>> = (0..n)
        .map(|m| {
            (0..n)
                .map(|a| x.get(&[a]).differentiate(chart.name(m)))
                .collect()
        })
        .collect();
    TensorField::from_fn(&chart, p, q, |ix| {
        let mut acc = x.apply_to(t.get(ix));
        let mut scratch = ix.to_vec();
        for r in 0..p + q {
            for m in 0..n {
                let factor = if r < p { &dx[m][ix[r]] } else { &dx[ix[r]][m] };
                if factor.is_zero() {
                    continue;
                }
                scratch[r] = m;
                let c = &t.components()[flat_index(n, &scratch)];
                if c.is_zero() {
                    continue;
                }
                if r < p {
                    acc = acc - c * factor;
                } else {
                    acc = acc + c * factor;
                }
            }
            scratch[r] = ix[r];
        }
        acc
    })
}

/// Lie derivative of a connection, a (1,2) field:
/// `X^l ∂_l Γ^k_ij − Γ^l_ij ∂_l X^k + Γ^k_lj ∂_i X^l + Γ^k_il ∂_j X^l + ∂_i ∂_j X^k`.
pub fn lie_derivative_connection(x: &TensorField, conn: &Connection) -> Result<TensorField> {
    let tensorial = lie_derivative(x, conn.coefficients())?;
    let chart = conn.chart().clone();
    TensorField::from_fn(&chart, 1, 2, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        let second = x
            .get(&[k])
            .differentiate(chart.name(i))
            .differentiate(chart.name(j));
        tensorial.get(ix) + second
    })
}
