//! Acceptance run: one PASS/FAIL line per criterion, each at its stated
//! tolerance. Numeric oracles here are independent of the symbolic kernel:
//! derivatives come from central differences and inverses from f64
//! elimination.

use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use t2lift_cli::{load_spec, parse_spec, LoadedSpec};
use t2lift_core::analysis::{self, Geometry, Options};
use t2lift_core::lifts::{lift_vector, HVariant, LiftOrder, SecondOrderChart};
use t2lift_core::manifold::{lie_bracket, riemann, Chart};
use t2lift_core::numeric::{random_vector_field, seeded_rng, Sampler};
use t2lift_core::{CheckReport, Evidence, Point, TensorField, Verdict};

type Res<T> = Result<T, Box<dyn Error>>;

const SPECS: [&str; 6] = [
    "euclidean-2d",
    "euclidean-deformed-2d",
    "sphere-2d",
    "anti-kahler-2d",
    "anti-kahler-nonholomorphic-2d",
    "warped-3d",
];

fn spec(name: &str) -> Res<LoadedSpec> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(format!("{name}.json"));
    Ok(load_spec(&path)?)
}

/// Spec text with `c` replaced, for variants not shipped as files.
fn with_c(name: &str, c: &str) -> Res<LoadedSpec> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(format!("{name}.json"));
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    v["c"] = serde_json::from_str(c)?;
    Ok(parse_spec(&v.to_string())?)
}

fn symbolic_holds(r: &CheckReport, name: &str) -> bool {
    r.condition(name)
        .is_some_and(|c| c.verdict == Verdict::Holds && c.evidence == Evidence::Symbolic)
}

fn verdict(r: &CheckReport, name: &str) -> Option<Verdict> {
    r.condition(name).map(|c| c.verdict)
}

// ---- f64 oracles ----

fn eval(t: &TensorField, p: &Point) -> Res<Vec<f64>> {
    Ok(t.components()
        .iter()
        .map(|e| e.evaluate(p))
        .collect::<Result<_, _>>()?)
}

fn shifted(p: &Point, v: &str, h: f64) -> Point {
    let x = p.get(v).expect("bound coordinate");
    p.clone().with(v, x + h)
}

/// Central difference of a vector-valued function along `v`.
fn diff_vec(f: &dyn Fn(&Point) -> Res<Vec<f64>>, v: &str, p: &Point, h: f64) -> Res<Vec<f64>> {
    let a = f(&shifted(p, v, h))?;
    let b = f(&shifted(p, v, -h))?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * h)).collect())
}

fn invert(m: &[f64], n: usize) -> Vec<f64> {
    let mut a = m.to_vec();
    let mut inv: Vec<f64> = (0..n * n)
        .map(|k| if k / n == k % n { 1.0 } else { 0.0 })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap();
        for j in 0..n {
            a.swap(piv * n + j, col * n + j);
            inv.swap(piv * n + j, col * n + j);
        }
        let d = a[col * n + col];
        for j in 0..n {
            a[col * n + j] /= d;
            inv[col * n + j] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r * n + col];
                for j in 0..n {
                    a[r * n + j] -= f * a[col * n + j];
                    inv[r * n + j] -= f * inv[col * n + j];
                }
            }
        }
    }
    inv
}

/// `Γ^k_ij` at `p` from central differences of the metric components.
fn fd_christoffel(g: &TensorField, p: &Point) -> Res<Vec<f64>> {
    let n = g.dim();
    let chart = g.chart();
    let gp = eval(g, p)?;
    let ginv = invert(&gp, n);
    let f = |q: &Point| eval(g, q);
    let dg: Vec<Vec<f64>> = (0..n)
        .map(|d| diff_vec(&f, chart.name(d), p, 1e-5))
        .collect::<Res<_>>()?;
    let mut out = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                out[(k * n + i) * n + j] = 0.5
                    * (0..n)
                        .map(|l| {
                            ginv[k * n + l]
                                * (dg[i][l * n + j] + dg[j][l * n + i] - dg[l][i * n + j])
                        })
                        .sum::<f64>();
            }
        }
    }
    Ok(out)
}

/// `R^l_ijk` at `p` with `∂Γ` from central differences of [`fd_christoffel`].
fn fd_riemann(g: &TensorField, p: &Point) -> Res<Vec<f64>> {
    let n = g.dim();
    let chart = g.chart();
    let gam = fd_christoffel(g, p)?;
    let f = |q: &Point| fd_christoffel(g, q);
    let dgam: Vec<Vec<f64>> = (0..n)
        .map(|d| diff_vec(&f, chart.name(d), p, 1e-4))
        .collect::<Res<_>>()?;
    let gm = |l: usize, i: usize, j: usize| gam[(l * n + i) * n + j];
    let mut r = vec![0.0; n.pow(4)];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = dgam[i][(l * n + j) * n + k] - dgam[j][(l * n + i) * n + k];
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

/// Max-norm of `R·R` by direct expansion of the derivation action.
fn brute_semisymmetry(g: &TensorField, p: &Point) -> Res<f64> {
    let n = g.dim();
    let r = fd_riemann(g, p)?;
    let gp = eval(g, p)?;
    let ru = |m: usize, a: usize, b: usize, i: usize| r[((m * n + a) * n + b) * n + i];
    let low = |i: usize, j: usize, k: usize, l: usize| {
        (0..n).map(|m| ru(m, i, j, k) * gp[m * n + l]).sum::<f64>()
    };
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let mut acc = 0.0;
                            for m in 0..n {
                                acc += ru(m, a, b, i) * low(m, j, k, l)
                                    + ru(m, a, b, j) * low(i, m, k, l)
                                    + ru(m, a, b, k) * low(i, j, m, l)
                                    + ru(m, a, b, l) * low(i, j, k, m);
                            }
                            worst = worst.max(acc.abs());
                        }
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// Lift of a base function at a bundle point: `⁰f = f`, `ᴵf = yⁱ∂ᵢf`,
/// `ᴵᴵf = zⁱ∂ᵢf + ½yⁱyʲ∂ᵢ∂ⱼf`, derivatives by central differences.
fn fd_lift(
    sc: &SecondOrderChart,
    f: &dyn Fn(&Point) -> Res<f64>,
    order: usize,
    p: &Point,
) -> Res<f64> {
    let base = sc.base();
    let total = sc.total();
    let n = base.dim();
    let y = |i: usize| p.get(total.name(n + i)).unwrap();
    let z = |i: usize| p.get(total.name(2 * n + i)).unwrap();
    let h = 1e-4;
    let d1 = |q: &Point, i: usize| -> Res<f64> {
        Ok((f(&shifted(q, base.name(i), h))? - f(&shifted(q, base.name(i), -h))?) / (2.0 * h))
    };
    Ok(match order {
        0 => f(p)?,
        1 => (0..n).map(|i| Ok(y(i) * d1(p, i)?)).sum::<Res<f64>>()?,
        _ => {
            let mut acc = 0.0;
            for i in 0..n {
                acc += z(i) * d1(p, i)?;
                for j in 0..n {
                    let dij = (d1(&shifted(p, base.name(j), h), i)?
                        - d1(&shifted(p, base.name(j), -h), i)?)
                        / (2.0 * h);
                    acc += 0.5 * y(i) * y(j) * dij;
                }
            }
            acc
        }
    })
}

fn close(sym: f64, oracle: f64, rel: f64) -> bool {
    (sym - oracle).abs() <= rel * oracle.abs().max(1.0)
}

struct Tally {
    compared: usize,
    worst: f64,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            compared: 0,
            worst: 0.0,
            failure: None,
        }
    }

    fn record(&mut self, what: &str, sym: f64, oracle: f64, rel: f64) {
        self.compared += 1;
        let err = (sym - oracle).abs() / oracle.abs().max(1.0);
        self.worst = self.worst.max(err);
        if !close(sym, oracle, rel) && self.failure.is_none() {
            self.failure = Some(format!("{what}: symbolic {sym:.9e} vs oracle {oracle:.9e}"));
        }
    }
}

// ---- criteria ----

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Res<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn c1() -> Res<Outcome> {
    let start = Instant::now();
    let s = spec("euclidean-2d")?;
    let geo = s.geometry()?;
    let opts = s.options();
    let ids = analysis::check_lift_identities(&geo, &opts)?;
    let br = analysis::check_brackets(&geo, &opts)?;
    let symbolic = |r: &CheckReport| {
        r.conditions
            .iter()
            .all(|c| c.verdict == Verdict::Holds && c.evidence == Evidence::Symbolic)
    };
    // independent oracle: [IIX, IY] by finite differences against I([X,Y])
    let sc = geo.chart();
    let mut rng = seeded_rng(opts.seed);
    let mut tally = Tally::new();
    for _ in 0..5 {
        let x = random_vector_field(&mut rng, geo.base(), 2, 3);
        let y = random_vector_field(&mut rng, geo.base(), 2, 3);
        let a = lift_vector(sc, &x, LiftOrder::Second)?;
        let b = lift_vector(sc, &y, LiftOrder::First)?;
        let expected = lift_vector(sc, &lie_bracket(&x, &y)?, LiftOrder::First)?;
        for p in Sampler::new(geo.total(), 3, opts.seed).points()? {
            let (av, bv) = (eval(&a, &p)?, eval(&b, &p)?);
            let fa = |q: &Point| eval(&a, q);
            let fb = |q: &Point| eval(&b, q);
            let m = av.len();
            let mut num = vec![0.0; m];
            for i in 0..m {
                let name = geo.total().name(i);
                let (da, db) = (
                    diff_vec(&fa, name, &p, 1e-5)?,
                    diff_vec(&fb, name, &p, 1e-5)?,
                );
                for k in 0..m {
                    num[k] += av[i] * db[k] - bv[i] * da[k];
                }
            }
            for (k, e) in eval(&expected, &p)?.into_iter().enumerate() {
                tally.record("[IIX,IY]", e, num[k], 1e-5);
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = symbolic(&ids)
        && symbolic(&br)
        && ids.conditions.len() == 9
        && br.conditions.len() == 6
        && tally.failure.is_none()
        && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "{} identities, {} brackets symbolic; FD bracket oracle worst rel {:.1e}; {:.2}s{}",
            ids.conditions.len(),
            br.conditions.len(),
            tally.worst,
            elapsed.as_secs_f64(),
            tally.failure.map(|f| format!("; {f}")).unwrap_or_default()
        ),
    )
}

fn c2() -> Res<Outcome> {
    let mut details = Vec::new();
    let mut pass = true;
    for name in ["euclidean-2d", "sphere-2d"] {
        let s = spec(name)?;
        let r = analysis::check_prop1_pairings(&s.geometry()?, &s.options())?;
        let ok = r.conditions.len() >= 6
            && r.conditions
                .iter()
                .all(|c| c.verdict == Verdict::Holds && c.evidence == Evidence::Symbolic);
        pass &= ok;
        details.push(format!(
            "{name}: {} conditions {}",
            r.conditions.len(),
            if ok { "symbolic" } else { "NOT symbolic" }
        ));
    }
    outcome(pass, details.join("; "))
}

fn c3() -> Res<Outcome> {
    let s = spec("euclidean-deformed-2d")?;
    let audit = analysis::h_audit(&s.geometry()?, &s.options())?;
    let r = &audit.report;
    let passing: Vec<HVariant> = HVariant::ALL
        .into_iter()
        .filter(|v| symbolic_holds(r, &format!("{v}: nabla gbar = 0")))
        .collect();
    if passing.len() != 1 {
        return outcome(false, format!("{} variants pass", passing.len()));
    }
    let good = passing[0];
    let bad = HVariant::ALL.into_iter().find(|v| *v != good).unwrap();
    let residual = r
        .condition(&format!("{bad}: nabla gbar = 0"))
        .map(|c| {
            c.witnesses
                .iter()
                .filter_map(|w| w.residual)
                .fold(0.0, f64::max)
        })
        .unwrap_or(0.0);
    let table = symbolic_holds(r, &format!("{good}: table = Christoffel(gbar)"));
    outcome(
        residual > 1e-3
            && table
            && verdict(r, &format!("{bad}: nabla gbar = 0")) == Some(Verdict::Fails),
        format!("passing {good}; {bad} residual {residual:.3e}; table = LC symbolic: {table}"),
    )
}

fn c4() -> Res<Outcome> {
    let sphere = spec("sphere-2d")?;
    let geo = sphere.geometry()?;
    let opts = sphere.options();
    let r = analysis::check_curvature_formula(&geo, HVariant::AuditMinus, &opts)?;
    let sphere_ok = symbolic_holds(&r, "curvature on second lifts");
    // oracle: Rbar from central differences of gbar on the x-block
    let n = 2;
    let base_r = riemann(geo.connection())?;
    let mut tally = Tally::new();
    for p in Sampler::new(geo.total(), 3, opts.seed)
        .avoiding_poles(geo.gbar_connection()?.coefficients().components())
        .points()?
    {
        let rb = fd_riemann(geo.gbar().tensor(), &p)?;
        let m = 3 * n;
        for (i, j, k) in
            (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        {
            for l in 0..n {
                // x-block component of ᴵᴵ(R(∂i,∂j)∂k) is R^l_ijk itself
                let sym = base_r.get(&[l, i, j, k]).evaluate(&p)?;
                tally.record("Rbar x-block", sym, rb[((l * m + i) * m + j) * m + k], 1e-5);
            }
        }
    }
    let deformed = spec("euclidean-deformed-2d")?;
    let rd = analysis::check_curvature_formula(
        &deformed.geometry()?,
        HVariant::AuditMinus,
        &deformed.options(),
    )?;
    let identity = symbolic_holds(&rd, "curvature on second lifts");
    let correction = rd
        .metadata
        .get("correction_term")
        .cloned()
        .unwrap_or_default();
    let extra = with_c("euclidean-2d", r#"[["1","0"],["0","x1^2"]]"#)?;
    let re = analysis::check_curvature_formula(
        &extra.geometry()?,
        HVariant::AuditMinus,
        &extra.options(),
    )?;
    outcome(
        sphere_ok && tally.failure.is_none() && identity && correction == "nonzero",
        format!(
            "sphere identity symbolic: {sphere_ok} (FD oracle worst rel {:.1e}); euclidean c=diag(x1,x2): identity symbolic {identity}, correction term {correction}; supplementary c=diag(1,x1^2): identity {}, correction {}",
            tally.worst,
            re.verdict.as_str(),
            re.metadata.get("correction_term").map(String::as_str).unwrap_or("?")
        ),
    )
}

fn c5() -> Res<Outcome> {
    let s = spec("euclidean-2d")?;
    let rot = s.fields["rotation"].clone();
    let r = analysis::check_prop2_killing_lifts(&s.geometry()?, &rot, &s.options())?;
    let all_killing = ["0", "I", "II"]
        .iter()
        .all(|o| verdict(&r, &format!("{o}X killing (full)")) == Some(Verdict::Holds));
    let d = with_c("euclidean-2d", r#"[["x1","0"],["0","x1"]]"#)?;
    let rd =
        analysis::check_prop2_killing_lifts(&d.geometry()?, &d.fields["rotation"], &d.options())?;
    let lower = ["0", "I"]
        .iter()
        .all(|o| verdict(&rd, &format!("{o}X killing (full)")) == Some(Verdict::Holds));
    let second = verdict(&rd, "IIX killing (full)") == Some(Verdict::Fails);
    let traced = verdict(&rd, "base: L_X c = 0") == Some(Verdict::Fails)
        && verdict(&rd, "base: L_X g = 0") == Some(Verdict::Holds);
    outcome(
        all_killing && r.consistent && lower && second && traced && rd.consistent,
        format!("c=g: all three lifts Killing {all_killing}; c=diag(x1,x1): 0X,IX Killing {lower}, IIX fails {second}, traced to L_X c != 0 {traced}"),
    )
}

fn c6() -> Res<Outcome> {
    let start = Instant::now();
    let s = spec("sphere-2d")?;
    let opts = Options {
        bundle_samples: 20,
        ..s.options()
    };
    let r = analysis::check_thm1_semisymmetry(&s.geometry()?, &opts)?;
    let elapsed = start.elapsed();
    let base = symbolic_holds(&r, "base: R.R = 0");
    let residual: f64 = r
        .metadata
        .get("bundle_max_residual")
        .map(|v| v.parse())
        .transpose()?
        .unwrap_or(f64::INFINITY);
    outcome(
        base && residual < 1e-8 && r.consistent && elapsed < Duration::from_secs(60),
        format!(
            "base symbolic zero {base}; bundle max residual {residual:.2e} over 20 points; {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c7() -> Res<Outcome> {
    let s = spec("warped-3d")?;
    let opts = s.options();
    let mut base_res = 0.0f64;
    for p in Sampler::new(s.base(), opts.samples, opts.seed).points()? {
        base_res = base_res.max(brute_semisymmetry(s.g.tensor(), &p)?);
    }
    let r = analysis::check_thm1_semisymmetry(
        &s.geometry()?,
        &Options {
            bundle_samples: 20,
            ..opts
        },
    )?;
    let bundle: f64 = r
        .metadata
        .get("bundle_max_residual")
        .map(|v| v.parse())
        .transpose()?
        .unwrap_or(0.0);
    outcome(
        base_res > 1e-4 && bundle > 1e-4 && r.consistent,
        format!("brute-force base R.R residual {base_res:.3e}; bundle residual {bundle:.3e}; consistent {}", r.consistent),
    )
}

fn c8() -> Res<Outcome> {
    let mut pass = true;
    let mut details = Vec::new();
    for name in ["euclidean-2d", "sphere-2d", "euclidean-deformed-2d"] {
        let s = spec(name)?;
        let r = analysis::check_thm2_plural_holomorphic(&s.geometry()?, &s.options())?;
        let ok = [
            "gamma^3 = 0",
            "gbar pure",
            "Nijenhuis = 0",
            "Phi_gamma gbar = 0",
        ]
        .iter()
        .all(|c| symbolic_holds(&r, c));
        pass &= ok;
        details.push(format!("{name}: {ok}"));
    }
    outcome(pass, details.join("; "))
}

fn c9() -> Res<Outcome> {
    let s = spec("anti-kahler-2d")?;
    let j = s.j.clone().ok_or("anti-kahler-2d has no J")?;
    let r = analysis::check_thm3_anti_kahler(&s.geometry()?, &j, &s.options())?;
    let constant = symbolic_holds(&r, "bundle: Phi_IIJ gbar = 0") && r.consistent;

    let t = spec("anti-kahler-nonholomorphic-2d")?;
    let jt = t.j.clone().ok_or("missing J")?;
    // constant-structure formula Φ_ijk = J^l_i ∂_l c_jk − J^l_j ∂_i c_lk at
    // slot (2,1,1), derivatives by central differences
    let p = Sampler::new(t.base(), 1, t.seed).points()?.remove(0);
    let jp = eval(&jt, &p)?;
    let c = |a: usize, b: usize| t.c.get(&[a, b]).clone();
    let d = |a: usize, b: usize, v: usize| {
        t2lift_core::numeric::finite_diff_oracle(&c(a, b), t.base().name(v), &p)
    };
    let (i, jj, k) = (1, 0, 0);
    let mut oracle = 0.0;
    for l in 0..2 {
        oracle += jp[l * 2 + i] * d(jj, k, l)? - jp[l * 2 + jj] * d(l, k, i)?;
    }
    let phi = analysis::tachibana(&jt, &t.c)?;
    let sym = phi.get(&[1, 0, 0]).evaluate(&p)?;
    let rt = analysis::check_thm3_anti_kahler(&t.geometry()?, &jt, &t.options())?;
    let bundle_fails = verdict(&rt, "bundle: Phi_IIJ gbar = 0") == Some(Verdict::Fails);
    let c_fails = verdict(&rt, "Phi_J c = 0") == Some(Verdict::Fails);
    let slot = (sym + 1.0).abs() < 1e-12 && (oracle + 1.0).abs() < 1e-6;
    outcome(
        constant && slot && bundle_fails && c_fails && rt.consistent,
        format!(
            "constant c: bundle Phi = 0 symbolic {constant}; c=diag(x1,-x1): Phi_J c(2,1,1) = {sym} (oracle {oracle:.8}), bundle Phi != 0 {bundle_fails}, biconditional agrees {}",
            rt.consistent
        ),
    )
}

fn oracle_spec(name: &str, tally: &mut Tally) -> Res<()> {
    let s = spec(name)?;
    let geo: Geometry = s.geometry()?;
    let opts = s.options();
    let base_pts = Sampler::new(s.base(), 10, opts.seed)
        .avoiding_poles(geo.connection().coefficients().components())
        .points()?;
    let conn = geo.connection();
    let r = riemann(conn)?;
    for p in &base_pts {
        for (sym, fd) in eval(conn.coefficients(), p)?
            .into_iter()
            .zip(fd_christoffel(s.g.tensor(), p)?)
        {
            tally.record(&format!("{name} christoffel"), sym, fd, 1e-5);
        }
        for (sym, fd) in eval(&r, p)?.into_iter().zip(fd_riemann(s.g.tensor(), p)?) {
            tally.record(&format!("{name} curvature"), sym, fd, 1e-5);
        }
    }
    let sc = geo.chart();
    let total: &Chart = geo.total();
    let n = s.base().dim();
    let pts = Sampler::new(geo.total(), 10, opts.seed).points()?;
    let gbar = geo.gbar().tensor();
    let lc = geo.gbar_connection()?;
    let fields: Vec<&TensorField> = s.fields.values().collect();
    let lifted: Vec<[TensorField; 3]> = fields
        .iter()
        .map(|x| {
            Ok([
                lift_vector(sc, x, LiftOrder::Zeroth)?,
                lift_vector(sc, x, LiftOrder::First)?,
                lift_vector(sc, x, LiftOrder::Second)?,
            ])
        })
        .collect::<Res<_>>()?;
    for p in &pts {
        // deformed metric block (A,B) = lift of order 2−A−B of g, plus c in (0,0)
        for a in 0..3 {
            for b in 0..3 {
                for i in 0..n {
                    for j in 0..n {
                        let g_ij = s.g.tensor().get(&[i, j]).clone();
                        let f = |q: &Point| -> Res<f64> { Ok(g_ij.evaluate(q)?) };
                        let mut oracle = if a + b <= 2 {
                            fd_lift(sc, &f, 2 - a - b, p)?
                        } else {
                            0.0
                        };
                        if a == 0 && b == 0 {
                            oracle += s.c.get(&[i, j]).evaluate(p)?;
                        }
                        let sym = gbar.get(&[a * n + i, b * n + j]).evaluate(p)?;
                        tally.record(
                            &format!(
                                "{name} gbar[{},{}]",
                                total.name(a * n + i),
                                total.name(b * n + j)
                            ),
                            sym,
                            oracle,
                            1e-5,
                        );
                    }
                }
            }
        }
        // lifted vector fields: ⁰X = (0,0,X), ᴵX = (0,X,ᴵX), ᴵᴵX = (X,ᴵX,ᴵᴵX)
        for (x, lifts) in fields.iter().zip(&lifted) {
            for (order, lv) in lifts.iter().enumerate() {
                for blk in 0..3 {
                    for k in 0..n {
                        let xk = x.get(&[k]).clone();
                        let f = |q: &Point| -> Res<f64> { Ok(xk.evaluate(q)?) };
                        let lift_order = order as isize - (2 - blk as isize);
                        let oracle = if lift_order >= 0 {
                            fd_lift(sc, &f, lift_order as usize, p)?
                        } else {
                            0.0
                        };
                        tally.record(
                            &format!("{name} lift order {order}"),
                            lv.get(&[blk * n + k]).evaluate(p)?,
                            oracle,
                            1e-5,
                        );
                    }
                }
            }
        }
    }
    // bundle Christoffel symbols against finite differences of gbar
    for p in pts.iter().take(if n == 3 { 3 } else { 10 }) {
        for (sym, fd) in eval(lc.coefficients(), p)?
            .into_iter()
            .zip(fd_christoffel(gbar, p)?)
        {
            tally.record(&format!("{name} bundle christoffel"), sym, fd, 1e-5);
        }
    }
    Ok(())
}

fn c10() -> Res<Outcome> {
    let mut tally = Tally::new();
    for name in SPECS {
        oracle_spec(name, &mut tally)?;
    }
    let pass = tally.failure.is_none();
    outcome(
        pass,
        format!(
            "{} components compared on {} specs, worst rel error {:.2e}{}",
            tally.compared,
            SPECS.len(),
            tally.worst,
            tally
                .failure
                .map(|f| format!("; first failure {f}"))
                .unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Res<Outcome>); 10] = [
        ("lift identities and bracket table", c1),
        ("pairing rules", c2),
        ("H-formula audit", c3),
        ("curvature on second lifts", c4),
        ("Killing lifts", c5),
        ("semi-symmetry, positive", c6),
        ("semi-symmetry, negative", c7),
        ("plural-holomorphic structure", c8),
        ("anti-Kähler lift", c9),
        ("oracle consistency", c10),
    ];
    let mut failed = 0;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}  {title} [{:.2}s]: {detail}",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
