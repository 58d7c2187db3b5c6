//! Verification suites for the lifted geometry, each producing a
//! [`CheckReport`](crate::report::CheckReport).

mod connection;
mod lifting;
mod semisym;
mod structures;

use std::sync::{Arc, OnceLock};

pub use connection::{
    check_curvature_formula, check_prop3_compat, check_prop4_affine_killing_lifts,
    check_prop5_flatness, h_audit, HAudit,
};
pub use lifting::{
    check_brackets, check_lift_identities, check_prop1_pairings, check_prop1_with_metric,
    check_prop2_killing_lifts,
};
pub use semisym::{check_thm1_semisymmetry, semisymmetry_residual, NumericCurvature};
pub use structures::{
    check_thm2_plural_holomorphic, check_thm2_with_structure, check_thm3_anti_kahler, nijenhuis,
    purity_defect, tachibana, tachibana_condition,
};

use crate::error::Result;
use crate::lifts::{deformed_metric, h_tensor, HTensor, HVariant, SecondOrderChart};
use crate::manifold::{christoffel, Chart, Connection, Metric, TensorField};
use crate::numeric::{
    certify, tensor_comparisons, Comparison, Sampler, DEFAULT_SAMPLES, DEFAULT_SEED,
    DEFAULT_TOLERANCE,
};
use crate::report::Condition;

/// Tolerance, sampling and mode settings shared by all checks.
#[derive(Clone, Debug)]
pub struct Options {
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    /// Sample count for the numeric curvature check on the bundle.
    pub bundle_samples: usize,
    /// Compute the bundle side of the semi-symmetry check symbolically.
    pub symbolic_semisym: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: DEFAULT_TOLERANCE,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            bundle_samples: 20,
            symbolic_semisym: false,
        }
    }
}

/// Base metric `g`, symmetric tensor `c`, and everything derived from them
/// on the second-order bundle. Expensive pieces are computed on demand.
#[derive(Debug)]
pub struct Geometry {
    sc: SecondOrderChart,
    g: Metric,
    c: TensorField,
    conn: Connection,
    gbar: Metric,
    gbar_connection: OnceLock<Connection>,
}

impl Geometry {
    pub fn new(sc: SecondOrderChart, g: Metric, c: TensorField) -> Result<Geometry> {
        let conn = christoffel(&g)?;
        let gbar = deformed_metric(&sc, &g, &c)?;
        Ok(Geometry {
            sc,
            g,
            c,
            conn,
            gbar,
            gbar_connection: OnceLock::new(),
        })
    }

    pub fn chart(&self) -> &SecondOrderChart {
        &self.sc
    }

    pub fn base(&self) -> &Arc<Chart> {
        self.sc.base()
    }

    pub fn total(&self) -> &Arc<Chart> {
        self.sc.total()
    }

    pub fn metric(&self) -> &Metric {
        &self.g
    }

    pub fn c(&self) -> &TensorField {
        &self.c
    }

    /// Levi-Civita connection of the base metric.
    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    pub fn gbar(&self) -> &Metric {
        &self.gbar
    }

    /// Whether `c` coincides with `g` component by component.
    pub fn c_is_g(&self) -> bool {
        self.c.components() == self.g.tensor().components()
    }

    /// Christoffel symbols of `ḡ` on the bundle chart.
    pub fn gbar_connection(&self) -> Result<&Connection> {
        if let Some(c) = self.gbar_connection.get() {
            return Ok(c);
        }
        let lc = christoffel(&self.gbar)?;
        Ok(self.gbar_connection.get_or_init(|| lc))
    }

    pub fn h(&self, variant: HVariant) -> Result<HTensor> {
        h_tensor(&self.g, &self.conn, &self.c, variant)
    }

    pub fn base_sampler(&self, opts: &Options) -> Sampler {
        Sampler::new(self.base(), opts.samples, opts.seed)
    }

    pub fn total_sampler(&self, opts: &Options) -> Sampler {
        Sampler::new(self.total(), opts.samples, opts.seed)
    }
}

/// Certify that every component of `t` vanishes.
pub(crate) fn certify_zero(
    name: &str,
    prefix: &str,
    t: &TensorField,
    sampler: &Sampler,
    opts: &Options,
) -> Result<Condition> {
    let zero = TensorField::zeros(t.chart(), t.valence().0, t.valence().1);
    certify(
        name,
        &tensor_comparisons(prefix, t, &zero),
        sampler,
        opts.tol,
    )
}

/// Certify that `a` and `b` agree component by component.
pub(crate) fn certify_equal(
    name: &str,
    prefix: &str,
    a: &TensorField,
    b: &TensorField,
    sampler: &Sampler,
    opts: &Options,
) -> Result<Condition> {
    certify(name, &tensor_comparisons(prefix, a, b), sampler, opts.tol)
}

pub(crate) fn certify_list(
    name: &str,
    comparisons: &[Comparison],
    sampler: &Sampler,
    opts: &Options,
) -> Result<Condition> {
    certify(name, comparisons, sampler, opts.tol)
}

/// Truth value of a verdict for biconditional bookkeeping: numeric-only
/// evidence counts as holding.
pub(crate) fn truthy(c: &Condition) -> bool {
    c.verdict != crate::report::Verdict::Fails
}
