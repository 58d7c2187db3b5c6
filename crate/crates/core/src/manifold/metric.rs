use std::sync::Arc;

use super::{Chart, Connection, IndexSymmetry, TensorField};
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Symmetric nondegenerate (0,2) field with its inverse.
#[derive(Clone, Debug)]
pub struct Metric {
    g: TensorField,
    inverse: TensorField,
}

impl Metric {
    pub fn new(g: TensorField) -> Result<Metric> {
        if g.valence() != (0, 2) {
            return Err(Error::Valence(format!(
                "a metric has valence (0,2), got {:?}",
                g.valence()
            )));
        }
        let g = g.with_symmetry(IndexSymmetry::Symmetric(0, 1))?;
        let inverse = metric_inverse(&g)?;
        Ok(Metric { g, inverse })
    }

    pub fn from_matrix(chart: &Arc<Chart>, rows: &[Vec<Expr>]) -> Result<Metric> {
        Metric::new(TensorField::from_matrix(chart, 0, 2, rows)?)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.g.chart()
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn tensor(&self) -> &TensorField {
        &self.g
    }

    /// Components `g^{ij}` as a (2,0) field.
    pub fn inverse(&self) -> &TensorField {
        &self.inverse
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        self.g.get(&[i, j])
    }

    pub fn inverse_entry(&self, i: usize, j: usize) -> &Expr {
        self.inverse.get(&[i, j])
    }

    pub fn levi_civita(&self) -> Result<Connection> {
        christoffel(self)
    }
}

/// Gauss-Jordan elimination over the field of canonical expressions.
///
/// Returns the inverse and the determinant. Pivots are chosen among
/// entries that are not identically zero, preferring the smallest, which
/// keeps intermediate expressions short for the block-structured metrics
/// of the lifted bundle.
pub fn invert_matrix(m: &[Vec<Expr>]) -> Result<(Vec<Vec<Expr>>, Expr)> {
    let n = m.len();
    let mut a: Vec<Vec<Expr>> = m.to_vec();
    let mut inv: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect();
    let mut det = Expr::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].node_count())
            .ok_or_else(|| Error::Degenerate("determinant simplifies to 0".into()))?;
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * &p;
        let p_inv = p.recip();
        for j in 0..n {
            if !a[col][j].is_zero() {
                a[col][j] = &a[col][j] * &p_inv;
            }
            if !inv[col][j].is_zero() {
                inv[col][j] = &inv[col][j] * &p_inv;
            }
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                if !a[col][j].is_zero() {
                    a[r][j] = &a[r][j] - &f * &a[col][j];
                }
                if !inv[col][j].is_zero() {
                    inv[r][j] = &inv[r][j] - &f * &inv[col][j];
                }
            }
        }
    }
    Ok((inv, det))
}

/// Inverse `g^{ij}` of a (0,2) field.
pub fn metric_inverse(g: &TensorField) -> Result<TensorField> {
    if g.valence() != (0, 2) {
        return Err(Error::Valence("metric_inverse needs a (0,2) field".into()));
    }
    let n = g.dim();
    let rows: Vec<Vec<Expr>> = (0..n)
        .map(|i| (0..n).map(|j| g.get(&[i, j]).clone()).collect())
        .collect();
    let (inv, _) = invert_matrix(&rows)?;
    TensorField::from_matrix(g.chart(), 2, 0, &inv)
}

/// Determinant of a square (0,2) or (1,1) field.
pub fn determinant(t: &TensorField) -> Result<Expr> {
    if t.rank() != 2 {
        return Err(Error::Valence("determinant needs a rank-2 field".into()));
    }
    let n = t.dim();
    let rows: Vec<Vec<Expr>> = (0..n)
        .map(|i| (0..n).map(|j| t.get(&[i, j]).clone()).collect())
        .collect();
    match invert_matrix(&rows) {
        Ok((_, det)) => Ok(det),
        Err(Error::Degenerate(_)) => Ok(Expr::zero()),
        Err(e) => Err(e),
    }
}

/// Levi-Civita connection: `Γ^k_ij = ½ g^{kl}(∂_i g_lj + ∂_j g_li − ∂_l g_ij)`.
pub fn christoffel(g: &Metric) -> Result<Connection> {
    let chart = g.chart().clone();
    let n = g.dim();
    // first-kind symbols Γ_{l,ij}, symmetric in (i,j)
    let dg: Vec<Vec<Vec<Expr>>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| g.entry(i, j).differentiate(chart.name(k)))
                        .collect()
                })
                .collect()
        })
        .collect();
    let first = TensorField::from_fn(&chart, 0, 3, |ix| {
        let (l, i, j) = (ix[0], ix[1], ix[2]);
        let s = &dg[i][l][j] + &dg[j][l][i] - &dg[l][i][j];
        s * Expr::rational(1, 2)
    })?;
    let coeffs = TensorField::from_fn(&chart, 1, 2, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        let mut acc = Expr::zero();
        for l in 0..n {
            let ginv = g.inverse_entry(k, l);
            let f = first.get(&[l, i, j]);
            if !ginv.is_zero() && !f.is_zero() {
                acc = acc + ginv * f;
            }
        }
        acc
    })?;
    Connection::new(coeffs)
}
