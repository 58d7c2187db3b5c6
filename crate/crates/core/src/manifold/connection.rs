use std::sync::Arc;

use super::tensor::{flat_index, multi_indices};
use super::{Chart, Metric, TensorField};
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Linear connection given by its coefficients `Γ^k_ij`, stored as a (1,2)
/// field with layout `[k][i][j]` so that `∇_{∂_i} ∂_j = Γ^k_ij ∂_k`.
#[derive(Clone, Debug)]
pub struct Connection {
    coeffs: TensorField,
}

impl Connection {
    pub fn new(coeffs: TensorField) -> Result<Connection> {
        if coeffs.valence() != (1, 2) {
            return Err(Error::Valence(
                "connection coefficients have valence (1,2)".into(),
            ));
        }
        Ok(Connection { coeffs })
    }

    /// The connection whose coefficients vanish in this chart.
    pub fn flat(chart: &Arc<Chart>) -> Connection {
        Connection {
            coeffs: TensorField::zeros(chart, 1, 2),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.coeffs.chart()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &Expr {
        self.coeffs.get(&[k, i, j])
    }

    pub fn coefficients(&self) -> &TensorField {
        &self.coeffs
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|k| (0..n).all(|i| (0..i).all(|j| self.gamma(k, i, j) == self.gamma(k, j, i))))
    }
}

/// `∇_X Y` for vector fields.
pub fn nabla(conn: &Connection, x: &TensorField, y: &TensorField) -> Result<TensorField> {
    let chart = conn.chart();
    chart.ensure_compatible(x.chart())?;
    chart.ensure_compatible(y.chart())?;
    if x.valence() != (1, 0) || y.valence() != (1, 0) {
        return Err(Error::Valence("nabla needs vector fields".into()));
    }
    let n = conn.dim();
    TensorField::from_fn(chart, 1, 0, |ix| {
        let k = ix[0];
        let mut acc = x.apply_to(y.get(&[k]));
        for i in 0..n {
            let xi = x.get(&[i]);
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                let g = conn.gamma(k, i, j);
                if !g.is_zero() && !y.get(&[j]).is_zero() {
                    acc = acc + g * xi * y.get(&[j]);
                }
            }
        }
        acc
    })
}

/// Covariant derivative of a (p,q) field, returning a (p,q+1) field.
///
/// Output layout: the p contravariant indices, then the derivative index,
/// then the original q covariant indices.
pub fn covariant_derivative(conn: &Connection, t: &TensorField) -> Result<TensorField> {
    conn.chart().ensure_compatible(t.chart())?;
    let (p, q) = t.valence();
    let n = conn.dim();
    let chart = t.chart().clone();
    TensorField::from_fn(&chart, p, q + 1, |ix| {
        let d = ix[p];
        let mut base: Vec<usize> = ix[..p].to_vec();
        base.extend_from_slice(&ix[p + 1..]);
        let mut acc = t.get(&base).differentiate(chart.name(d));
        let mut scratch = base.clone();
        for r in 0..p {
            for m in 0..n {
                let g = conn.gamma(base[r], d, m);
                if g.is_zero() {
                    continue;
                }
                scratch[r] = m;
                let c = &t.components()[flat_index(n, &scratch)];
                if !c.is_zero() {
                    acc = acc + g * c;
                }
            }
            scratch[r] = base[r];
        }
        for s in p..p + q {
            for m in 0..n {
                let g = conn.gamma(m, d, base[s]);
                if g.is_zero() {
                    continue;
                }
                scratch[s] = m;
                let c = &t.components()[flat_index(n, &scratch)];
                if !c.is_zero() {
                    acc = acc - g * c;
                }
            }
            scratch[s] = base[s];
        }
        acc
    })
}

/// Curvature `R^l_ijk = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik`,
/// i.e. `R(∂_i, ∂_j)∂_k = R^l_ijk ∂_l` with
/// `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`. Layout `[l][i][j][k]`.
pub fn riemann(conn: &Connection) -> Result<TensorField> {
    let n = conn.dim();
    let chart = conn.chart().clone();
    let dgamma: Vec<Expr> = multi_indices(n, 4)
        .iter()
        .map(|ix| {
            conn.gamma(ix[1], ix[2], ix[3])
                .differentiate(chart.name(ix[0]))
        })
        .collect();
    // dgamma[flat(d, l, j, k)] = ∂_d Γ^l_jk
    TensorField::from_fn(&chart, 1, 3, |ix| {
        let (l, i, j, k) = (ix[0], ix[1], ix[2], ix[3]);
        if i == j {
            return Expr::zero();
        }
        let mut acc = &dgamma[flat_index(n, &[i, l, j, k])] - &dgamma[flat_index(n, &[j, l, i, k])];
        for m in 0..n {
            let a = conn.gamma(l, i, m);
            let b = conn.gamma(m, j, k);
            if !a.is_zero() && !b.is_zero() {
                acc = acc + a * b;
            }
            let c = conn.gamma(l, j, m);
            let d = conn.gamma(m, i, k);
            if !c.is_zero() && !d.is_zero() {
                acc = acc - c * d;
            }
        }
        acc
    })
}

/// The vector `R(∂_i, ∂_j)∂_k`, without computing the full tensor.
pub fn curvature_vector(conn: &Connection, i: usize, j: usize, k: usize) -> Result<TensorField> {
    let n = conn.dim();
    let chart = conn.chart().clone();
    TensorField::from_fn(&chart, 1, 0, |ix| {
        let l = ix[0];
        let mut acc = conn.gamma(l, j, k).differentiate(chart.name(i))
            - conn.gamma(l, i, k).differentiate(chart.name(j));
        for m in 0..n {
            let a = conn.gamma(l, i, m);
            let b = conn.gamma(m, j, k);
            if !a.is_zero() && !b.is_zero() {
                acc = acc + a * b;
            }
            let c = conn.gamma(l, j, m);
            let d = conn.gamma(m, i, k);
            if !c.is_zero() && !d.is_zero() {
                acc = acc - c * d;
            }
        }
        acc
    })
}

/// `R_ijkl = g(R(∂_i,∂_j)∂_k, ∂_l) = R^m_ijk g_ml`.
pub fn lower_riemann(g: &Metric, r: &TensorField) -> Result<TensorField> {
    g.chart().ensure_compatible(r.chart())?;
    if r.valence() != (1, 3) {
        return Err(Error::Valence("lower_riemann needs a (1,3) field".into()));
    }
    let n = g.dim();
    TensorField::from_fn(g.chart(), 0, 4, |ix| {
        let mut acc = Expr::zero();
        for m in 0..n {
            let a = r.get(&[m, ix[0], ix[1], ix[2]]);
            let b = g.entry(m, ix[3]);
            if !a.is_zero() && !b.is_zero() {
                acc = acc + a * b;
            }
        }
        acc
    })
}

/// Torsion `T^k_ij = Γ^k_ij − Γ^k_ji`.
pub fn torsion(conn: &Connection) -> Result<TensorField> {
    TensorField::from_fn(conn.chart(), 1, 2, |ix| {
        conn.gamma(ix[0], ix[1], ix[2]) - conn.gamma(ix[0], ix[2], ix[1])
    })
}

/// `R(X,Y)·S` for a (0,k) field `S`, acting as a derivation:
/// `(R(∂_a,∂_b)·S)_{i_1..i_k} = −Σ_r S(.., R(∂_a,∂_b)∂_{i_r}, ..)`.
/// The two new indices `a, b` come first.
pub fn curvature_derivation(r: &TensorField, s: &TensorField) -> Result<TensorField> {
    r.chart().ensure_compatible(s.chart())?;
    if r.valence() != (1, 3) {
        return Err(Error::Valence(
            "curvature operator must be a (1,3) field".into(),
        ));
    }
    let (p, k) = s.valence();
    if p != 0 || k == 0 {
        return Err(Error::Valence(
            "curvature derivation acts on (0,k) fields with k >= 1".into(),
        ));
    }
    let n = r.dim();
    TensorField::from_fn(s.chart(), 0, k + 2, |ix| {
        let (a, b) = (ix[0], ix[1]);
        if a == b {
            return Expr::zero();
        }
        let mut slots = ix[2..].to_vec();
        let mut acc = Expr::zero();
        for pos in 0..k {
            let orig = slots[pos];
            for m in 0..n {
                let rm = r.get(&[m, a, b, orig]);
                if rm.is_zero() {
                    continue;
                }
                slots[pos] = m;
                let sv = s.get(&slots);
                if !sv.is_zero() {
                    acc = acc - rm * sv;
                }
            }
            slots[pos] = orig;
        }
        acc
    })
}
