use rayon::prelude::*;

use super::lifting::biconditional;
use super::{certify_zero, truthy, Geometry, Options};
use crate::error::{Error, Result};
use crate::expr::{Expr, Point};
use crate::manifold::{
    component_label, curvature_derivation, lower_riemann, multi_indices, riemann, Chart,
    Connection, Metric,
};
use crate::report::{CheckReport, Condition, Evidence, Verdict, Witness};

/// Curvature of a connection evaluated pointwise in floating point from
/// symbolic `Γ`, `∂Γ` and metric components.
#[derive(Clone, Debug)]
pub struct NumericCurvature {
    n: usize,
    gamma: Vec<Expr>,
    dgamma: Vec<Expr>,
    metric: Vec<Expr>,
}

impl NumericCurvature {
    pub fn new(conn: &Connection, g: &Metric) -> Result<NumericCurvature> {
        conn.chart().ensure_compatible(g.chart())?;
        let n = conn.dim();
        let chart = conn.chart();
        let gamma = conn.coefficients().components().to_vec();
        // dgamma[d][l][j][k] = ∂_d Γ^l_jk
        let dgamma = multi_indices(n, 4)
            .par_iter()
            .map(|ix| {
                conn.gamma(ix[1], ix[2], ix[3])
                    .differentiate(chart.name(ix[0]))
            })
            .collect();
        Ok(NumericCurvature {
            n,
            gamma,
            dgamma,
            metric: g.tensor().components().to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn eval_all(exprs: &[Expr], p: &Point) -> Result<Vec<f64>> {
        exprs.iter().map(|e| e.evaluate(p)).collect()
    }

    /// `R^l_ijk` at `p`, layout `[l][i][j][k]`.
    pub fn riemann_at(&self, p: &Point) -> Result<Vec<f64>> {
        let n = self.n;
        let g = Self::eval_all(&self.gamma, p)?;
        let dg = Self::eval_all(&self.dgamma, p)?;
        let gm = |l: usize, i: usize, j: usize| g[(l * n + i) * n + j];
        let dgm = |d: usize, l: usize, j: usize, k: usize| dg[((d * n + l) * n + j) * n + k];
        let mut r = vec![0.0; n.pow(4)];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut acc = dgm(i, l, j, k) - dgm(j, l, i, k);
                        for m in 0..n {
                            acc += gm(l, i, m) * gm(m, j, k) - gm(l, j, m) * gm(m, i, k);
                        }
                        r[((l * n + i) * n + j) * n + k] = acc;
                    }
                }
            }
        }
        Ok(r)
    }

    /// `R_ijkl = R^m_ijk g_ml` at `p`.
    pub fn lowered_at(&self, p: &Point, r: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let g = Self::eval_all(&self.metric, p)?;
        Ok(lower(n, r, &g))
    }

    /// Largest component of `R·R` at `p` with its multi-index, and the
    /// scale `max|R^l_ijk| · max|R_ijkl|` that bounds round-off.
    pub fn semisymmetry_at(&self, p: &Point) -> Result<(f64, Vec<usize>, f64)> {
        let r = self.riemann_at(p)?;
        let low = self.lowered_at(p, &r)?;
        let (res, ix) = semisymmetry_residual(self.n, &r, &low);
        let scale = r.iter().fold(0.0f64, |a, v| a.max(v.abs()))
            * low.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        Ok((res, ix, scale))
    }
}

fn lower(n: usize, r: &[f64], g: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n.pow(4)];
    for (flat, slot) in out.iter_mut().enumerate() {
        let l = flat % n;
        let ijk = flat / n;
        *slot = (0..n).map(|m| r[m * n.pow(3) + ijk] * g[m * n + l]).sum();
    }
    out
}

/// Max-norm of `(R(∂_a,∂_b)·S)_{ijkl} = −Σ_r S(.., R(∂_a,∂_b)∂_{i_r}, ..)`
/// from `R^l_ijk` (layout `[l][i][j][k]`) and `S = R_ijkl`, with the index
/// `[a,b,i,j,k,l]` where it is attained.
pub fn semisymmetry_residual(n: usize, r: &[f64], s: &[f64]) -> (f64, Vec<usize>) {
    let n3 = n.pow(3);
    let ru = |m: usize, a: usize, b: usize, i: usize| r[m * n3 + (a * n + b) * n + i];
    let sl = |i: usize, j: usize, k: usize, l: usize| s[((i * n + j) * n + k) * n + l];
    (0..n * n)
        .into_par_iter()
        .map(|ab| {
            let (a, b) = (ab / n, ab % n);
            let mut best = (0.0f64, vec![a, b, 0, 0, 0, 0]);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let mut acc = 0.0;
                            for m in 0..n {
                                acc += ru(m, a, b, i) * sl(m, j, k, l)
                                    + ru(m, a, b, j) * sl(i, m, k, l)
                                    + ru(m, a, b, k) * sl(i, j, m, l)
                                    + ru(m, a, b, l) * sl(i, j, k, m);
                            }
                            if acc.abs() > best.0 {
                                best = (acc.abs(), vec![a, b, i, j, k, l]);
                            }
                        }
                    }
                }
            }
            best
        })
        .reduce(|| (0.0, vec![0; 6]), |x, y| if y.0 > x.0 { y } else { x })
}

fn numeric_bundle_condition(geo: &Geometry, opts: &Options) -> Result<(Condition, f64)> {
    let curv = NumericCurvature::new(geo.gbar_connection()?, geo.gbar())?;
    let sampler = geo
        .total_sampler(opts)
        .with_count(opts.bundle_samples.max(1))
        .avoiding_poles(geo.gbar_connection()?.coefficients().components());
    let total: &Chart = geo.total();
    let mut max_residual = 0.0f64;
    let mut failure: Option<Witness> = None;
    for p in sampler.points()? {
        let (res, ix, scale) = curv.semisymmetry_at(&p)?;
        if !res.is_finite() {
            return Err(Error::Singular(format!("non-finite curvature at {p:?}")));
        }
        max_residual = max_residual.max(res);
        if failure.is_none() && res > opts.tol * (1.0 + scale) {
            failure = Some(Witness::numeric(
                format!("RR{}", component_label(total, &ix)),
                &p,
                res,
            ));
        }
    }
    let name = "bundle: R.R = 0";
    let cond = match failure {
        Some(w) => Condition::new(name, Verdict::Fails, Evidence::Numeric, vec![w]),
        None => Condition::new(name, Verdict::Holds, Evidence::Numeric, vec![]).with_note(format!(
            "max residual {max_residual:.3e} over {} samples",
            sampler.count()
        )),
    };
    Ok((cond, max_residual))
}

/// Semi-symmetry of the base against semi-symmetry of the bundle with the
/// deformed metric for `c = g`.
///
/// The base side is certified symbolically. The bundle side is sampled in
/// floating point unless `opts.symbolic_semisym` is set.
pub fn check_thm1_semisymmetry(geo: &Geometry, opts: &Options) -> Result<CheckReport> {
    if !geo.c_is_g() {
        return Err(Error::Precondition(
            "semi-symmetry check requires c = g".into(),
        ));
    }
    let r = riemann(geo.connection())?;
    let rr = curvature_derivation(&r, &lower_riemann(geo.metric(), &r)?)?;
    let base = certify_zero("base: R.R = 0", "RR", &rr, &geo.base_sampler(opts), opts)?;
    let (bundle, residual) = if opts.symbolic_semisym {
        let rb = riemann(geo.gbar_connection()?)?;
        let rrb = curvature_derivation(&rb, &lower_riemann(geo.gbar(), &rb)?)?;
        let c = certify_zero(
            "bundle: R.R = 0",
            "RR",
            &rrb,
            &geo.total_sampler(opts),
            opts,
        )?;
        (c, None)
    } else {
        let (c, res) = numeric_bundle_condition(geo, opts)?;
        (c, Some(res))
    };
    let agree = truthy(&base) == truthy(&bundle);
    let mut report = biconditional("thm1", vec![base, bundle], agree).with_meta(
        "bundle_mode",
        if opts.symbolic_semisym {
            "symbolic"
        } else {
            "numeric"
        },
    );
    if let Some(res) = residual {
        report = report
            .with_meta("bundle_max_residual", format!("{res:.3e}"))
            .with_meta("bundle_samples", opts.bundle_samples);
    }
    Ok(report)
}
