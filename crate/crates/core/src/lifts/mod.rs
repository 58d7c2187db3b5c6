//! Lifts of functions, vector fields, metrics and (1,1) fields to the
//! second-order tangent bundle, and the connection of the deformed metric.

mod chart;
mod connection;
mod lift;

pub use chart::{LiftOrder, SecondOrderChart};
pub use connection::{
    h_tensor, lifted_connection, lifted_connection_action, t2m_levi_civita, HTensor, HVariant,
};
pub use lift::{
    deformed_metric, lift_function, lift_metric, lift_tensor11, lift_vector, nilpotent_gamma,
};
