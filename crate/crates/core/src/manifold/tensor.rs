use std::sync::Arc;

use rayon::prelude::*;

use super::Chart;
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Declared relation between two index slots (positions in the flattened
/// index list, contravariant slots first).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSymmetry {
    Symmetric(usize, usize),
    Antisymmetric(usize, usize),
}

/// Dense tensor field of valence (p, q) on a chart.
///
/// Components are stored row-major over the index tuple
/// `(a_1..a_p, b_1..b_q)`: contravariant indices first, then covariant ones.
#[derive(Clone, Debug)]
pub struct TensorField {
    chart: Arc<Chart>,
    contra: usize,
    co: usize,
    comps: Vec<Expr>,
    symmetries: Vec<IndexSymmetry>,
}

/// All index tuples of the given rank over `0..n`, in row-major order.
pub fn multi_indices(n: usize, rank: usize) -> Vec<Vec<usize>> {
    let total = n.pow(rank as u32);
    (0..total)
        .map(|mut flat| {
            let mut ix = vec![0; rank];
            for slot in (0..rank).rev() {
                ix[slot] = flat % n;
                flat /= n;
            }
            ix
        })
        .collect()
}

pub(crate) fn flat_index(n: usize, ix: &[usize]) -> usize {
    ix.iter().fold(0, |acc, &i| acc * n + i)
}

impl TensorField {
    pub fn new(chart: Arc<Chart>, contra: usize, co: usize, comps: Vec<Expr>) -> Result<Self> {
        let expected = chart.dim().pow((contra + co) as u32);
        if comps.len() != expected {
            return Err(Error::Valence(format!(
                "valence ({contra},{co}) on a {}-dimensional chart needs {expected} components, got {}",
                chart.dim(),
                comps.len()
            )));
        }
        chart.check_budget(&comps)?;
        Ok(TensorField {
            chart,
            contra,
            co,
            comps,
            symmetries: Vec::new(),
        })
    }

    /// Build components in parallel from a function of the index tuple.
    pub fn from_fn<F>(chart: &Arc<Chart>, contra: usize, co: usize, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Expr + Sync,
    {
        let comps = multi_indices(chart.dim(), contra + co)
            .par_iter()
            .map(|ix| f(ix))
            .collect();
        TensorField::new(chart.clone(), contra, co, comps)
    }

    pub fn try_from_fn<F>(chart: &Arc<Chart>, contra: usize, co: usize, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Result<Expr> + Sync,
    {
        let comps = multi_indices(chart.dim(), contra + co)
            .par_iter()
            .map(|ix| f(ix))
            .collect::<Result<Vec<_>>>()?;
        TensorField::new(chart.clone(), contra, co, comps)
    }

    pub fn zeros(chart: &Arc<Chart>, contra: usize, co: usize) -> Self {
        TensorField::from_fn(chart, contra, co, |_| Expr::zero())
            .expect("zero field fits any budget")
    }

    /// Vector field from its components.
    pub fn vector(chart: &Arc<Chart>, comps: Vec<Expr>) -> Result<Self> {
        TensorField::new(chart.clone(), 1, 0, comps)
    }

    /// Coordinate vector field `∂_i`.
    pub fn coordinate_vector(chart: &Arc<Chart>, i: usize) -> Self {
        let comps = (0..chart.dim())
            .map(|k| if k == i { Expr::one() } else { Expr::zero() })
            .collect();
        TensorField::new(chart.clone(), 1, 0, comps).expect("coordinate field is well formed")
    }

    /// (0,2) or (1,1) field from a row-major matrix.
    pub fn from_matrix(
        chart: &Arc<Chart>,
        contra: usize,
        co: usize,
        rows: &[Vec<Expr>],
    ) -> Result<Self> {
        if contra + co != 2 {
            return Err(Error::Valence("matrix input needs rank 2".into()));
        }
        let n = chart.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Valence(format!("expected a {n}x{n} matrix")));
        }
        TensorField::new(
            chart.clone(),
            contra,
            co,
            rows.iter().flatten().cloned().collect(),
        )
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        TensorField::from_fn(chart, 1, 1, |ix| {
            if ix[0] == ix[1] {
                Expr::one()
            } else {
                Expr::zero()
            }
        })
        .expect("identity fits any budget")
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn valence(&self) -> (usize, usize) {
        (self.contra, self.co)
    }

    pub fn rank(&self) -> usize {
        self.contra + self.co
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<Expr> {
        self.comps
    }

    pub fn get(&self, ix: &[usize]) -> &Expr {
        debug_assert_eq!(ix.len(), self.rank());
        &self.comps[flat_index(self.dim(), ix)]
    }

    pub fn symmetries(&self) -> &[IndexSymmetry] {
        &self.symmetries
    }

    /// Attach a symmetry after checking it holds componentwise.
    pub fn with_symmetry(mut self, sym: IndexSymmetry) -> Result<Self> {
        let (a, b, sign) = match sym {
            IndexSymmetry::Symmetric(a, b) => (a, b, 1),
            IndexSymmetry::Antisymmetric(a, b) => (a, b, -1),
        };
        if a >= self.rank() || b >= self.rank() || a == b {
            return Err(Error::Valence(format!("invalid slot pair ({a},{b})")));
        }
        for ix in multi_indices(self.dim(), self.rank()) {
            let mut jx = ix.clone();
            jx.swap(a, b);
            let lhs = self.get(&ix);
            let rhs = self.get(&jx);
            let ok = if sign == 1 {
                lhs == rhs
            } else {
                (lhs + rhs).is_zero()
            };
            if !ok {
                return Err(Error::Precondition(format!(
                    "declared {sym:?} violated at {}",
                    self.label(&ix)
                )));
            }
        }
        self.symmetries.push(sym);
        Ok(self)
    }

    /// Matrix entry of a rank-2 field.
    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        self.get(&[i, j])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    pub fn map<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&Expr) -> Expr + Sync + Send,
    {
        let comps = self.comps.par_iter().map(f).collect();
        TensorField::new(self.chart.clone(), self.contra, self.co, comps)
    }

    fn zip_with<F>(&self, other: &TensorField, f: F) -> Result<Self>
    where
        F: Fn(&Expr, &Expr) -> Expr + Sync,
    {
        self.chart.ensure_compatible(&other.chart)?;
        if self.valence() != other.valence() {
            return Err(Error::Valence(format!(
                "cannot combine {:?} with {:?}",
                self.valence(),
                other.valence()
            )));
        }
        let comps = self
            .comps
            .par_iter()
            .zip(other.comps.par_iter())
            .map(|(a, b)| f(a, b))
            .collect();
        TensorField::new(self.chart.clone(), self.contra, self.co, comps)
    }

    pub fn add(&self, other: &TensorField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TensorField) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &Expr) -> Result<Self> {
        self.map(|a| a * k)
    }

    /// `X(f) = X^i ∂_i f` for a vector field.
    pub fn apply_to(&self, f: &Expr) -> Expr {
        assert_eq!(self.valence(), (1, 0), "apply_to needs a vector field");
        self.comps
            .iter()
            .enumerate()
            .filter(|(_, xi)| !xi.is_zero())
            .map(|(i, xi)| xi * f.differentiate(self.chart.name(i)))
            .sum()
    }

    /// `(T X)^k = T^k_i X^i` for a (1,1) field applied to a vector field.
    pub fn apply_endomorphism(&self, x: &TensorField) -> Result<TensorField> {
        if self.valence() != (1, 1) || x.valence() != (1, 0) {
            return Err(Error::Valence(
                "expected a (1,1) field and a vector field".into(),
            ));
        }
        self.chart.ensure_compatible(&x.chart)?;
        let n = self.dim();
        TensorField::from_fn(&self.chart, 1, 0, |ix| {
            (0..n).map(|i| self.get(&[ix[0], i]) * x.get(&[i])).sum()
        })
    }

    /// Composition `(A B)^k_i = A^k_j B^j_i` of (1,1) fields.
    pub fn compose(&self, other: &TensorField) -> Result<TensorField> {
        if self.valence() != (1, 1) || other.valence() != (1, 1) {
            return Err(Error::Valence("compose needs (1,1) fields".into()));
        }
        self.chart.ensure_compatible(&other.chart)?;
        let n = self.dim();
        TensorField::from_fn(&self.chart, 1, 1, |ix| {
            (0..n)
                .map(|j| self.get(&[ix[0], j]) * other.get(&[j, ix[1]]))
                .sum()
        })
    }

    /// `T(X, Y) = T_ij X^i Y^j` for a (0,2) field.
    pub fn pair(&self, x: &TensorField, y: &TensorField) -> Result<Expr> {
        if self.valence() != (0, 2) || x.valence() != (1, 0) || y.valence() != (1, 0) {
            return Err(Error::Valence(
                "pair needs a (0,2) field and two vector fields".into(),
            ));
        }
        self.chart.ensure_compatible(&x.chart)?;
        self.chart.ensure_compatible(&y.chart)?;
        let n = self.dim();
        let mut acc = Expr::zero();
        for i in 0..n {
            if x.get(&[i]).is_zero() {
                continue;
            }
            for j in 0..n {
                let t = self.get(&[i, j]);
                if t.is_zero() || y.get(&[j]).is_zero() {
                    continue;
                }
                acc = acc + t * x.get(&[i]) * y.get(&[j]);
            }
        }
        Ok(acc)
    }

    /// `(T(X,Y))^k = T^k_ij X^i Y^j` for a (1,2) field.
    pub fn apply_bilinear(&self, x: &TensorField, y: &TensorField) -> Result<TensorField> {
        if self.valence() != (1, 2) || x.valence() != (1, 0) || y.valence() != (1, 0) {
            return Err(Error::Valence(
                "expected a (1,2) field and two vector fields".into(),
            ));
        }
        let n = self.dim();
        TensorField::from_fn(&self.chart, 1, 0, |ix| {
            let mut acc = Expr::zero();
            for i in 0..n {
                for j in 0..n {
                    let t = self.get(&[ix[0], i, j]);
                    if !t.is_zero() {
                        acc = acc + t * x.get(&[i]) * y.get(&[j]);
                    }
                }
            }
            acc
        })
    }

    /// Human-readable component label, e.g. `[x1,x2]`.
    pub fn label(&self, ix: &[usize]) -> String {
        component_label(&self.chart, ix)
    }

    /// Same components on a compatible chart (used to move fields between
    /// equal chart instances).
    pub fn rebind(&self, chart: &Arc<Chart>) -> Result<TensorField> {
        self.chart.ensure_compatible(chart)?;
        let mut out = self.clone();
        out.chart = chart.clone();
        Ok(out)
    }
}

pub fn component_label(chart: &Chart, ix: &[usize]) -> String {
    let names: Vec<&str> = ix.iter().map(|&i| chart.name(i)).collect();
    format!("[{}]", names.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::Interval;

    fn plane() -> Arc<Chart> {
        Arc::new(Chart::uniform(&["x1", "x2"], Interval::new(-1.0, 1.0)).unwrap())
    }

    #[test]
    fn row_major_layout() {
        let ix = multi_indices(2, 3);
        assert_eq!(ix.len(), 8);
        assert_eq!(ix[5], vec![1, 0, 1]);
        assert_eq!(flat_index(2, &[1, 0, 1]), 5);
    }

    #[test]
    fn component_count_is_checked() {
        let c = plane();
        assert!(TensorField::new(c.clone(), 0, 2, vec![Expr::zero(); 3]).is_err());
        assert!(TensorField::new(c, 0, 2, vec![Expr::zero(); 4]).is_ok());
    }

    #[test]
    fn symmetry_is_validated() {
        let c = plane();
        let x = Expr::var("x1");
        let sym = TensorField::from_matrix(
            &c,
            0,
            2,
            &[vec![x.clone(), Expr::one()], vec![Expr::one(), x.clone()]],
        )
        .unwrap();
        assert!(sym
            .clone()
            .with_symmetry(IndexSymmetry::Symmetric(0, 1))
            .is_ok());
        assert!(sym
            .with_symmetry(IndexSymmetry::Antisymmetric(0, 1))
            .is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let c = Arc::new(
            Chart::uniform(&["x1"], Interval::new(0.0, 1.0))
                .unwrap()
                .with_node_budget(5),
        );
        let big = (Expr::var("x1") + Expr::one()).pow(8);
        assert!(matches!(
            TensorField::vector(&c, vec![big]),
            Err(Error::Resource { .. })
        ));
    }
}
