//! Charts, tensor fields and pseudo-Riemannian calculus in one chart.

mod chart;
mod connection;
mod killing;
mod lie;
mod metric;
mod tensor;

pub use chart::{Chart, Interval};
pub use connection::{
    covariant_derivative, curvature_derivation, curvature_vector, lower_riemann, nabla, riemann,
    torsion, Connection,
};
pub use killing::{
    affine_killing_check, affine_killing_condition, killing_check, killing_condition,
};
pub use lie::{lie_bracket, lie_derivative, lie_derivative_connection};
pub use metric::{christoffel, determinant, invert_matrix, metric_inverse, Metric};
pub use tensor::{component_label, multi_indices, IndexSymmetry, TensorField};
