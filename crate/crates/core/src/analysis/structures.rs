use super::lifting::biconditional;
use super::{certify_equal, certify_zero, truthy, Geometry, Options};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::lifts::{lift_function, lift_tensor11, nilpotent_gamma, LiftOrder};
use crate::manifold::{covariant_derivative, TensorField};
use crate::numeric::Sampler;
use crate::report::{CheckReport, Condition, Verdict};

fn ensure_pair(gamma: &TensorField, t: &TensorField) -> Result<()> {
    gamma.chart().ensure_compatible(t.chart())?;
    if gamma.valence() != (1, 1) || t.valence() != (0, 2) {
        return Err(Error::Valence(
            "expected a (1,1) field and a (0,2) field".into(),
        ));
    }
    Ok(())
}

/// `(Φ_γ g)_ijk = γ^l_i ∂_l g_jk − ∂_i(γ^l_j g_lk) + ∂_j γ^l_i g_lk + ∂_k γ^l_i g_jl`.
pub fn tachibana(gamma: &TensorField, g: &TensorField) -> Result<TensorField> {
    ensure_pair(gamma, g)?;
    let chart = g.chart();
    let n = g.dim();
    let d = |e: &Expr, v: usize| e.differentiate(chart.name(v));
    TensorField::from_fn(chart, 0, 3, |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        let mut acc = Expr::zero();
        let mut gy = Expr::zero();
        for l in 0..n {
            let gli = gamma.get(&[l, i]);
            if !gli.is_zero() {
                acc = acc + gli * d(g.get(&[j, k]), l);
                let dj = d(gli, j);
                if !dj.is_zero() {
                    acc = acc + dj * g.get(&[l, k]);
                }
                let dk = d(gli, k);
                if !dk.is_zero() {
                    acc = acc + dk * g.get(&[j, l]);
                }
            }
            gy = gy + gamma.get(&[l, j]) * g.get(&[l, k]);
        }
        acc - d(&gy, i)
    })
}

/// `t(γX, Y) − t(X, γY)` on the coordinate frame; zero iff `t` is pure.
pub fn purity_defect(gamma: &TensorField, t: &TensorField) -> Result<TensorField> {
    ensure_pair(gamma, t)?;
    let n = t.dim();
    TensorField::from_fn(t.chart(), 0, 2, |ix| {
        let (i, j) = (ix[0], ix[1]);
        (0..n)
            .map(|l| gamma.get(&[l, i]) * t.get(&[l, j]) - gamma.get(&[l, j]) * t.get(&[i, l]))
            .sum()
    })
}

/// `N^k_ij = γ^l_i ∂_l γ^k_j − γ^l_j ∂_l γ^k_i − γ^k_l (∂_i γ^l_j − ∂_j γ^l_i)`.
pub fn nijenhuis(gamma: &TensorField) -> Result<TensorField> {
    if gamma.valence() != (1, 1) {
        return Err(Error::Valence("nijenhuis needs a (1,1) field".into()));
    }
    let chart = gamma.chart();
    let n = gamma.dim();
    let d = |e: &Expr, v: usize| e.differentiate(chart.name(v));
    TensorField::from_fn(chart, 1, 2, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        (0..n)
            .map(|l| {
                gamma.get(&[l, i]) * d(gamma.get(&[k, j]), l)
                    - gamma.get(&[l, j]) * d(gamma.get(&[k, i]), l)
                    - gamma.get(&[k, l]) * (d(gamma.get(&[l, j]), i) - d(gamma.get(&[l, i]), j))
            })
            .sum()
    })
}

/// `Φ_γ g = 0`, downgraded to inconclusive when `g` is not pure with
/// respect to `γ`.
pub fn tachibana_condition(
    name: &str,
    gamma: &TensorField,
    g: &TensorField,
    sampler: &Sampler,
    opts: &Options,
) -> Result<Condition> {
    let purity = certify_zero("purity", "pure", &purity_defect(gamma, g)?, sampler, opts)?;
    let cond = certify_zero(name, "Phi", &tachibana(gamma, g)?, sampler, opts)?;
    if truthy(&purity) {
        return Ok(cond);
    }
    let mut down = cond.with_note(
        "argument is not pure; the Tachibana operator is only meaningful for pure tensors",
    );
    down.verdict = Verdict::Inconclusive;
    Ok(down)
}

/// Nilpotency, purity, integrability and Tachibana-flatness of `γ̂` and `ḡ`.
pub fn check_thm2_plural_holomorphic(geo: &Geometry, opts: &Options) -> Result<CheckReport> {
    check_thm2_with_structure(geo, &nilpotent_gamma(geo.chart()), opts)
}

/// The same conditions for an arbitrary (1,1) field on the bundle, used to
/// confirm that the checks detect a wrong structure.
pub fn check_thm2_with_structure(
    geo: &Geometry,
    gamma: &TensorField,
    opts: &Options,
) -> Result<CheckReport> {
    let sampler = geo.total_sampler(opts);
    let gbar = geo.gbar().tensor();
    let cube = gamma.compose(gamma)?.compose(gamma)?;
    let conditions = vec![
        certify_zero("gamma^3 = 0", "gamma^3", &cube, &sampler, opts)?,
        certify_zero(
            "gbar pure",
            "pure",
            &purity_defect(gamma, gbar)?,
            &sampler,
            opts,
        )?,
        certify_zero("Nijenhuis = 0", "N", &nijenhuis(gamma)?, &sampler, opts)?,
        tachibana_condition("Phi_gamma gbar = 0", gamma, gbar, &sampler, opts)?,
    ];
    Ok(CheckReport::conjunction("thm2", conditions))
}

/// Restriction of a (0,3) bundle field to second-lift frame arguments.
fn x_slice(geo: &Geometry, t: &TensorField) -> Result<TensorField> {
    let n = geo.base().dim();
    TensorField::from_fn(geo.total(), 0, 3, |ix| {
        if ix.iter().all(|&a| a < n) {
            t.get(ix).clone()
        } else {
            Expr::zero()
        }
    })
}

fn lifted_sum(
    geo: &Geometry,
    a: &TensorField,
    oa: LiftOrder,
    b: &TensorField,
    ob: LiftOrder,
) -> Result<TensorField> {
    let n = geo.base().dim();
    let sc = geo.chart();
    TensorField::try_from_fn(geo.total(), 0, 3, |ix| {
        if ix.iter().any(|&x| x >= n) {
            return Ok(Expr::zero());
        }
        Ok(lift_function(sc, a.get(ix), oa)? + lift_function(sc, b.get(ix), ob)?)
    })
}

/// Anti-Kähler property of `(ᴵᴵJ, ḡ)` on the bundle against purity and
/// holomorphy of `c`, for an anti-Kähler base `(J, g)`.
pub fn check_thm3_anti_kahler(
    geo: &Geometry,
    j: &TensorField,
    opts: &Options,
) -> Result<CheckReport> {
    let base_sampler = geo.base_sampler(opts);
    let sampler = geo.total_sampler(opts);
    let g = geo.metric().tensor();
    let c = geo.c();
    let id = TensorField::identity(geo.base());
    let square = certify_zero(
        "J^2 = -Id",
        "J^2+Id",
        &j.compose(j)?.add(&id)?,
        &base_sampler,
        opts,
    )?;
    if !truthy(&square) {
        return Err(Error::Precondition(
            "J is not an almost complex structure (J^2 != -Id)".into(),
        ));
    }
    let g_pure = certify_zero("g pure", "pure", &purity_defect(j, g)?, &base_sampler, opts)?;
    if !truthy(&g_pure) {
        return Err(Error::Precondition(
            "g is not anti-Hermitian with respect to J".into(),
        ));
    }

    let nabla_j = certify_zero(
        "base: nabla J = 0",
        "nabla J",
        &covariant_derivative(geo.connection(), j)?,
        &base_sampler,
        opts,
    )?;
    let phi_g = certify_zero(
        "base: Phi_J g = 0",
        "Phi",
        &tachibana(j, g)?,
        &base_sampler,
        opts,
    )?;
    let base_agree = truthy(&nabla_j) == truthy(&phi_g);
    let base_kahler = truthy(&nabla_j) && truthy(&phi_g);

    let c_pure = certify_zero("c pure", "pure", &purity_defect(j, c)?, &base_sampler, opts)?;
    let c_holo = tachibana_condition("Phi_J c = 0", j, c, &base_sampler, opts)?;

    let jj = lift_tensor11(geo.chart(), j)?;
    let gbar = geo.gbar().tensor();
    let gbar_pure = certify_zero(
        "bundle: gbar pure",
        "pure",
        &purity_defect(&jj, gbar)?,
        &sampler,
        opts,
    )?;
    let phi_bar = tachibana(&jj, gbar)?;
    let bundle_holo = tachibana_condition("bundle: Phi_IIJ gbar = 0", &jj, gbar, &sampler, opts)?;

    let phi_c = tachibana(j, c)?;
    let phi_gt = tachibana(j, g)?;
    let slice = x_slice(geo, &phi_bar)?;
    let decomposition = certify_equal(
        "decomposition: II(Phi_J g) + 0(Phi_J c)",
        "Phi",
        &slice,
        &lifted_sum(geo, &phi_gt, LiftOrder::Second, &phi_c, LiftOrder::Zeroth)?,
        &sampler,
        opts,
    )?;
    let alternative = lifted_sum(geo, &phi_gt, LiftOrder::Second, &phi_c, LiftOrder::Second)?;
    let markers = match (
        truthy(&decomposition),
        slice.components() == alternative.components(),
    ) {
        (true, true) => "II+0,II+II",
        (true, false) => "II+0",
        (false, true) => "II+II",
        (false, false) => "none",
    };

    let agree = base_agree
        && truthy(&gbar_pure) == truthy(&c_pure)
        && truthy(&bundle_holo) == truthy(&c_holo);
    let conditions = vec![
        nabla_j,
        phi_g,
        c_pure,
        c_holo,
        gbar_pure,
        bundle_holo,
        decomposition,
    ];
    let mut report =
        biconditional("thm3", conditions, agree).with_meta("decomposition_markers", markers);
    if !base_kahler {
        report = report.with_note(
            "base is not anti-Kähler; the equivalence is stated only for anti-Kähler bases",
        );
        if report.verdict == Verdict::Holds {
            report.verdict = Verdict::Inconclusive;
        }
        report.consistent = base_agree;
    }
    Ok(report)
}
