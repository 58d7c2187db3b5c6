//! Seeded sampling, numeric zero tests and finite-difference oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{Expr, Point};
use crate::manifold::{Chart, Interval, TensorField};
use crate::report::{Condition, Evidence, Verdict, Witness};

/// Samples closer than this to an excluded hypersurface are rejected.
pub const EXCLUSION_DISTANCE: f64 = 1e-3;
/// Step of the central difference used by [`finite_diff_oracle`].
pub const FD_STEP: f64 = 1e-5;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 10;
pub const DEFAULT_SEED: u64 = 20240501;

/// Reproducible uniform sampler over a chart's box domain.
#[derive(Clone, Debug)]
pub struct Sampler {
    names: Vec<String>,
    domain: Vec<Interval>,
    exclusions: Vec<(Expr, Vec<Expr>)>,
    count: usize,
    seed: u64,
}

impl Sampler {
    pub fn new(chart: &Chart, count: usize, seed: u64) -> Sampler {
        let s = Sampler {
            names: chart.names().to_vec(),
            domain: chart.domain().to_vec(),
            exclusions: Vec::new(),
            count,
            seed,
        };
        s.with_exclusions(chart.exclusions().iter().cloned())
    }

    /// Additionally keep away from the zero sets of `extra` (non-constant
    /// entries only; duplicates are dropped).
    pub fn with_exclusions(mut self, extra: impl IntoIterator<Item = Expr>) -> Sampler {
        for e in extra {
            if e.is_constant() || self.exclusions.iter().any(|(f, _)| *f == e) {
                continue;
            }
            let grad = self.names.iter().map(|n| e.differentiate(n)).collect();
            self.exclusions.push((e, grad));
        }
        self
    }

    /// Exclude the zero sets of every denominator occurring in `exprs`.
    pub fn avoiding_poles<'a>(self, exprs: impl IntoIterator<Item = &'a Expr>) -> Sampler {
        let dens: Vec<Expr> = exprs.into_iter().map(|e| e.split_fraction().1).collect();
        self.with_exclusions(dens)
    }

    pub fn with_count(mut self, count: usize) -> Sampler {
        self.count = count;
        self
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn admissible(&self, p: &Point) -> bool {
        self.exclusions.iter().all(|(f, grad)| {
            let Ok(v) = f.evaluate(p) else { return false };
            let norm = grad
                .iter()
                .map(|d| d.evaluate(p).unwrap_or(f64::INFINITY).powi(2))
                .sum::<f64>()
                .sqrt();
            let dist = if norm > 1e-12 {
                v.abs() / norm
            } else {
                v.abs()
            };
            dist.is_finite() && dist >= EXCLUSION_DISTANCE
        })
    }

    /// The sample points; identical for identical (seed, domain, count).
    pub fn points(&self) -> Result<Vec<Point>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let budget = 1000 * (self.count + 1);
        let mut out = Vec::with_capacity(self.count);
        for _ in 0..budget {
            if out.len() == self.count {
                break;
            }
            let mut p = Point::new();
            for (n, iv) in self.names.iter().zip(&self.domain) {
                let v = if iv.lo == iv.hi {
                    iv.lo
                } else {
                    rng.random_range(iv.lo..=iv.hi)
                };
                p.set(n, v);
            }
            if self.admissible(&p) {
                out.push(p);
            }
        }
        if out.len() < self.count {
            return Err(Error::SamplingExhausted {
                requested: self.count,
                placed: out.len(),
            });
        }
        Ok(out)
    }
}

/// Result of comparing two sides numerically over the sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericOutcome {
    pub holds: bool,
    /// First failing `(point, component)` in lexicographic order, if any.
    pub witness: Option<Witness>,
    pub max_residual: f64,
    pub points: usize,
}

/// Compare `lhs` and `rhs` sides produced by `eval` at every sample point.
///
/// A component passes when `|lhs - rhs| <= tol * (1 + m)` where `m` is the
/// largest absolute side value at that point.
pub fn compare_sides<F>(
    sampler: &Sampler,
    tol: f64,
    labels: &[String],
    eval: F,
) -> Result<NumericOutcome>
where
    F: Fn(&Point) -> Result<Vec<(f64, f64)>> + Sync,
{
    let points = sampler.points()?;
    let per_point: Vec<Vec<(f64, f64)>> = points.par_iter().map(&eval).collect::<Result<_>>()?;
    let mut max_residual: f64 = 0.0;
    let mut witness = None;
    for (p, values) in points.iter().zip(&per_point) {
        let scale = 1.0
            + values
                .iter()
                .map(|(a, b)| a.abs().max(b.abs()))
                .fold(0.0, f64::max);
        for (k, (a, b)) in values.iter().enumerate() {
            let r = (a - b).abs();
            let r = if r.is_nan() { f64::INFINITY } else { r };
            max_residual = max_residual.max(r);
            if witness.is_none() && r > tol * scale {
                let label = labels.get(k).cloned().unwrap_or_else(|| format!("#{k}"));
                witness = Some(Witness::numeric(label, p, r));
            }
        }
    }
    Ok(NumericOutcome {
        holds: witness.is_none(),
        witness,
        max_residual,
        points: points.len(),
    })
}

/// One labelled symbolic equation `lhs = rhs`.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub label: String,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Comparison {
    pub fn new(label: impl Into<String>, lhs: Expr, rhs: Expr) -> Self {
        Comparison {
            label: label.into(),
            lhs,
            rhs,
        }
    }

    pub fn zero(label: impl Into<String>, lhs: Expr) -> Self {
        Comparison::new(label, lhs, Expr::zero())
    }
}

/// Component-wise comparisons `a = b` of two tensor fields.
pub fn tensor_comparisons(prefix: &str, a: &TensorField, b: &TensorField) -> Vec<Comparison> {
    crate::manifold::multi_indices(a.dim(), a.rank())
        .into_iter()
        .map(|ix| {
            Comparison::new(
                format!("{prefix}{}", a.label(&ix)),
                a.get(&ix).clone(),
                b.get(&ix).clone(),
            )
        })
        .collect()
}

/// Zero-test every component of a field numerically.
pub fn zero_test(t: &TensorField, sampler: &Sampler, tol: f64) -> Result<NumericOutcome> {
    let comps = t.components();
    let labels: Vec<String> = crate::manifold::multi_indices(t.dim(), t.rank())
        .iter()
        .map(|ix| t.label(ix))
        .collect();
    let sampler = sampler.clone().avoiding_poles(comps);
    compare_sides(&sampler, tol, &labels, |p| {
        comps.iter().map(|c| Ok((c.evaluate(p)?, 0.0))).collect()
    })
}

/// Maximum number of symbolic witnesses attached to a failing condition.
const MAX_SYMBOLIC_WITNESSES: usize = 8;

/// Decide a list of equations: symbolic zero certificates first, numeric
/// sampling for whatever did not simplify to zero.
///
/// Symbolically certified conditions are still sampled on both sides; a
/// numeric disagreement then downgrades the verdict to inconclusive with a
/// note rather than silently trusting either path.
pub fn certify(
    name: &str,
    comparisons: &[Comparison],
    sampler: &Sampler,
    tol: f64,
) -> Result<Condition> {
    let diffs: Vec<Expr> = comparisons.par_iter().map(|c| &c.lhs - &c.rhs).collect();
    let nonzero: Vec<usize> = (0..diffs.len()).filter(|&k| !diffs[k].is_zero()).collect();
    if nonzero.is_empty() {
        let labels: Vec<String> = comparisons.iter().map(|c| c.label.clone()).collect();
        let sampler = sampler
            .clone()
            .avoiding_poles(comparisons.iter().flat_map(|c| [&c.lhs, &c.rhs]));
        let outcome = compare_sides(&sampler, tol, &labels, |p| {
            comparisons
                .iter()
                .map(|c| Ok((c.lhs.evaluate(p)?, c.rhs.evaluate(p)?)))
                .collect()
        })?;
        let cond = Condition::new(name, Verdict::Holds, Evidence::Symbolic, vec![]);
        return Ok(if outcome.holds {
            cond
        } else {
            let w = outcome.witness.expect("failing outcome carries a witness");
            Condition::new(name, Verdict::Inconclusive, Evidence::Symbolic, vec![w])
                .with_note("symbolic zero contradicted by numeric evaluation")
        });
    }
    let labels: Vec<String> = nonzero
        .iter()
        .map(|&k| comparisons[k].label.clone())
        .collect();
    let sampler = sampler
        .clone()
        .avoiding_poles(nonzero.iter().map(|&k| &diffs[k]));
    let outcome = compare_sides(&sampler, tol, &labels, |p| {
        nonzero
            .iter()
            .map(|&k| {
                Ok((
                    comparisons[k].lhs.evaluate(p)?,
                    comparisons[k].rhs.evaluate(p)?,
                ))
            })
            .collect()
    })?;
    if outcome.holds {
        let witnesses = nonzero
            .iter()
            .take(MAX_SYMBOLIC_WITNESSES)
            .map(|&k| Witness::symbolic(&comparisons[k].label, diffs[k].render()))
            .collect();
        return Ok(
            Condition::new(name, Verdict::Inconclusive, Evidence::Numeric, witnesses).with_note(
                format!("{} residual(s) vanish numerically only", nonzero.len()),
            ),
        );
    }
    let mut witnesses: Vec<Witness> = nonzero
        .iter()
        .take(MAX_SYMBOLIC_WITNESSES)
        .map(|&k| Witness::symbolic(&comparisons[k].label, diffs[k].render()))
        .collect();
    witnesses.extend(outcome.witness);
    Ok(Condition::new(
        name,
        Verdict::Fails,
        Evidence::Symbolic,
        witnesses,
    ))
}

/// Central difference of a numeric function along coordinate `v`.
pub fn central_difference<F>(f: F, v: &str, p: &Point, h: f64) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64>,
{
    let x = p
        .get(v)
        .ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
    let plus = f(&p.clone().with(v, x + h))?;
    let minus = f(&p.clone().with(v, x - h))?;
    Ok((plus - minus) / (2.0 * h))
}

/// Central-difference approximation of `∂e/∂v` at `p` with step [`FD_STEP`].
pub fn finite_diff_oracle(e: &Expr, v: &str, p: &Point) -> Result<f64> {
    central_difference(|q| e.evaluate(q), v, p, FD_STEP)
}

/// Random polynomial with small integer coefficients, total degree at most
/// `degree`.
pub fn random_polynomial<R: Rng>(rng: &mut R, vars: &[&str], degree: u32, terms: usize) -> Expr {
    let mut acc = Expr::zero();
    for _ in 0..terms {
        let coeff: i64 = rng.random_range(-3..=3);
        if coeff == 0 {
            continue;
        }
        let mut budget = rng.random_range(0..=degree);
        let mut term = Expr::int(coeff);
        while budget > 0 {
            let v = vars[rng.random_range(0..vars.len())];
            term = term * Expr::var(v);
            budget -= 1;
        }
        acc = acc + term;
    }
    acc
}

/// Random polynomial vector field on `chart`.
pub fn random_vector_field<R: Rng>(
    rng: &mut R,
    chart: &std::sync::Arc<Chart>,
    degree: u32,
    terms: usize,
) -> TensorField {
    let names = chart.name_refs();
    let comps = (0..chart.dim())
        .map(|_| random_polynomial(rng, &names, degree, terms))
        .collect();
    TensorField::vector(chart, comps).expect("random polynomials stay within budget")
}

/// Deterministic generator for randomized checks.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
