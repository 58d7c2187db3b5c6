use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{Expr, Point};
use crate::manifold::{Chart, Interval, TensorField};

/// Order of a lift to the second-order tangent bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiftOrder {
    Zeroth,
    First,
    Second,
}

impl LiftOrder {
    pub const ALL: [LiftOrder; 3] = [LiftOrder::Zeroth, LiftOrder::First, LiftOrder::Second];

    pub fn rank(self) -> usize {
        match self {
            LiftOrder::Zeroth => 0,
            LiftOrder::First => 1,
            LiftOrder::Second => 2,
        }
    }

    pub fn from_rank(r: usize) -> Option<LiftOrder> {
        match r {
            0 => Some(LiftOrder::Zeroth),
            1 => Some(LiftOrder::First),
            2 => Some(LiftOrder::Second),
            _ => None,
        }
    }

    /// Order of a product of lifts of orders `a` and `b`, where that product
    /// lowers the total by two (brackets, connection, pairing); `None` when
    /// the result vanishes.
    pub fn combine(a: LiftOrder, b: LiftOrder) -> Option<LiftOrder> {
        (a.rank() + b.rank())
            .checked_sub(2)
            .and_then(LiftOrder::from_rank)
    }

    /// Index of the coordinate block spanned by the lifts of coordinate
    /// fields of this order: second lifts span x, first lifts y, zeroth z.
    pub fn block(self) -> usize {
        2 - self.rank()
    }

    pub fn prefix(self) -> &'static str {
        match self {
            LiftOrder::Zeroth => "0",
            LiftOrder::First => "I",
            LiftOrder::Second => "II",
        }
    }
}

impl fmt::Display for LiftOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

/// Induced chart `(x^i, y^i, z^i)` on the second-order tangent bundle.
#[derive(Clone, Debug)]
pub struct SecondOrderChart {
    base: Arc<Chart>,
    total: Arc<Chart>,
}

fn fiber_name(prefix: char, base: &str) -> String {
    match base.strip_prefix('x') {
        Some(rest) if !rest.is_empty() => format!("{prefix}{rest}"),
        _ => format!("{prefix}_{base}"),
    }
}

impl SecondOrderChart {
    /// Fiber coordinates are sampled from `[-1, 1]`.
    pub fn new(base: &Arc<Chart>) -> Result<SecondOrderChart> {
        let n = base.dim();
        SecondOrderChart::with_fiber_domain(base, &vec![Interval::new(-1.0, 1.0); 2 * n])
    }

    /// `fiber` lists the intervals for `y^1..y^n` followed by `z^1..z^n`.
    pub fn with_fiber_domain(base: &Arc<Chart>, fiber: &[Interval]) -> Result<SecondOrderChart> {
        let n = base.dim();
        if fiber.len() != 2 * n {
            return Err(Error::InvalidChart(format!(
                "fiber domain needs {} intervals, got {}",
                2 * n,
                fiber.len()
            )));
        }
        let mut names: Vec<String> = base.names().to_vec();
        names.extend(base.names().iter().map(|b| fiber_name('y', b)));
        names.extend(base.names().iter().map(|b| fiber_name('z', b)));
        let mut domain = base.domain().to_vec();
        domain.extend_from_slice(fiber);
        let total = Chart::new(&names, &domain)?
            .with_exclusions(base.exclusions().to_vec())?
            .with_node_budget(base.node_budget());
        Ok(SecondOrderChart {
            base: base.clone(),
            total: Arc::new(total),
        })
    }

    pub fn base(&self) -> &Arc<Chart> {
        &self.base
    }

    /// The 3n-dimensional chart.
    pub fn total(&self) -> &Arc<Chart> {
        &self.total
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn y(&self, i: usize) -> Expr {
        self.total.coordinate(self.base_dim() + i)
    }

    pub fn z(&self, i: usize) -> Expr {
        self.total.coordinate(2 * self.base_dim() + i)
    }

    /// Index on the total chart of `∂_{x^j}`, `∂_{y^j}` or `∂_{z^j}`
    /// (`block` 0, 1, 2).
    pub fn index(&self, block: usize, j: usize) -> usize {
        block * self.base_dim() + j
    }

    /// Total-chart index of the lift of `∂_j` of the given order.
    pub fn frame_index(&self, order: LiftOrder, j: usize) -> usize {
        self.index(order.block(), j)
    }

    /// The lift of `∂_j` of the given order, a coordinate field on the total chart.
    pub fn frame(&self, order: LiftOrder, j: usize) -> TensorField {
        TensorField::coordinate_vector(&self.total, self.frame_index(order, j))
    }

    /// Drop the `z` block (`keep_first = true`) or both fiber blocks.
    pub fn project(&self, p: &Point, keep_first: bool) -> Point {
        let keep = if keep_first { 2 } else { 1 } * self.base_dim();
        p.restrict(self.total.names()[..keep].iter().map(String::as_str))
    }

    /// Fail unless `e` only involves base coordinates.
    pub fn ensure_base(&self, e: &Expr) -> Result<()> {
        for v in e.variables() {
            if self.base.index_of(&v).is_none() {
                return Err(Error::Precondition(format!(
                    "'{v}' is not a coordinate of the base chart {}",
                    self.base
                )));
            }
        }
        Ok(())
    }
}
