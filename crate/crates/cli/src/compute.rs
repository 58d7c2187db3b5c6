//! Single-quantity computations for the `compute` subcommand.

use std::str::FromStr;

use serde::Serialize;
use t2lift_core::lifts::{h_tensor, lift_vector, nilpotent_gamma, HVariant, LiftOrder};
use t2lift_core::manifold::riemann;
use t2lift_core::TensorField;

use crate::runner::RunError;
use crate::spec::LoadedSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Christoffel,
    Curvature,
    LiftMetric,
    LiftVector,
    Gamma,
    HTensor,
}

impl Quantity {
    pub const NAMES: [&'static str; 6] = [
        "christoffel",
        "curvature",
        "lift-metric",
        "lift-vector",
        "gamma",
        "h-tensor",
    ];
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "christoffel" => Quantity::Christoffel,
            "curvature" => Quantity::Curvature,
            "lift-metric" => Quantity::LiftMetric,
            "lift-vector" => Quantity::LiftVector,
            "gamma" => Quantity::Gamma,
            "h-tensor" => Quantity::HTensor,
            other => {
                return Err(format!(
                    "unknown quantity '{other}' (expected one of {})",
                    Quantity::NAMES.join(", ")
                ))
            }
        })
    }
}

pub fn parse_order(s: &str) -> Result<LiftOrder, String> {
    match s {
        "0" | "zeroth" => Ok(LiftOrder::Zeroth),
        "I" | "1" | "first" => Ok(LiftOrder::First),
        "II" | "2" | "second" => Ok(LiftOrder::Second),
        other => Err(format!(
            "unknown lift order '{other}' (expected 0, I or II)"
        )),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub index: String,
    pub expr: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Computed {
    pub spec: String,
    pub quantity: String,
    /// `"base"` or `"bundle"`.
    pub chart: &'static str,
    pub valence: [usize; 2],
    /// Nonzero components only, in index order.
    pub components: Vec<Component>,
}

fn collect(spec: &LoadedSpec, quantity: String, chart: &'static str, t: &TensorField) -> Computed {
    let (p, q) = t.valence();
    let components = t2lift_core::manifold::multi_indices(t.dim(), t.rank())
        .into_iter()
        .filter(|ix| !t.get(ix).is_zero())
        .map(|ix| Component {
            index: t.label(&ix),
            expr: t.get(&ix).render(),
        })
        .collect();
    Computed {
        spec: spec.name.clone(),
        quantity,
        chart,
        valence: [p, q],
        components,
    }
}

pub struct ComputeArgs {
    pub field: Option<String>,
    pub order: LiftOrder,
    pub variant: HVariant,
}

pub fn compute(
    spec: &LoadedSpec,
    what: Quantity,
    args: &ComputeArgs,
) -> Result<Computed, RunError> {
    let conn = spec.g.levi_civita()?;
    Ok(match what {
        Quantity::Christoffel => collect(spec, "christoffel".into(), "base", conn.coefficients()),
        Quantity::Curvature => collect(spec, "curvature".into(), "base", &riemann(&conn)?),
        Quantity::LiftMetric => {
            let geo = spec.geometry()?;
            collect(spec, "lift-metric".into(), "bundle", geo.gbar().tensor())
        }
        Quantity::LiftVector => {
            let name = args
                .field
                .as_deref()
                .ok_or_else(|| RunError::Config("lift-vector needs --field NAME".into()))?;
            let x = spec.fields.get(name).ok_or_else(|| {
                RunError::Config(format!("no field named '{name}' in the spec file"))
            })?;
            let lifted = lift_vector(&spec.chart, x, args.order)?;
            collect(
                spec,
                format!("lift-vector {}{name}", args.order),
                "bundle",
                &lifted,
            )
        }
        Quantity::Gamma => collect(
            spec,
            "gamma".into(),
            "bundle",
            &nilpotent_gamma(&spec.chart),
        ),
        Quantity::HTensor => {
            let h = h_tensor(&spec.g, &conn, &spec.c, args.variant)?;
            collect(spec, format!("h-tensor {}", args.variant), "base", &h.field)
        }
    })
}
