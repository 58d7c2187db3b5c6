pub mod analysis;
pub mod error;
pub mod expr;
pub mod lifts;
pub mod manifold;
pub mod numeric;
pub mod report;

pub use error::{Error, Result};
pub use expr::{parse_expr, Expr, Point};
pub use manifold::{Chart, Connection, Interval, Metric, TensorField};
pub use report::{CheckReport, Condition, Evidence, Verdict, Witness};
