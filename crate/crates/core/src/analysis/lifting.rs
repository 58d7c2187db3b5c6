use super::{certify_list, truthy, Geometry, Options};
use crate::error::Result;
use crate::expr::Expr;
use crate::lifts::{lift_function, lift_vector, LiftOrder};
use crate::manifold::{killing_condition, lie_bracket, lie_derivative, multi_indices, TensorField};
use crate::numeric::{random_polynomial, random_vector_field, seeded_rng, Comparison};
use crate::report::{CheckReport, Condition, Verdict};

const RANDOM_PAIRS: usize = 5;
const RANDOM_DEGREE: u32 = 2;
const RANDOM_TERMS: usize = 3;

fn random_pairs(geo: &Geometry, opts: &Options, count: usize) -> Vec<(TensorField, TensorField)> {
    let mut rng = seeded_rng(opts.seed);
    (0..count)
        .map(|_| {
            let x = random_vector_field(&mut rng, geo.base(), RANDOM_DEGREE, RANDOM_TERMS);
            let y = random_vector_field(&mut rng, geo.base(), RANDOM_DEGREE, RANDOM_TERMS);
            (x, y)
        })
        .collect()
}

fn lift_or_zero(geo: &Geometry, f: &Expr, order: Option<LiftOrder>) -> Result<Expr> {
    match order {
        Some(o) => lift_function(geo.chart(), f, o),
        None => Ok(Expr::zero()),
    }
}

fn rhs_name(order: Option<LiftOrder>, inner: &str) -> String {
    match order {
        Some(o) => format!("{o}({inner})"),
        None => "0".to_string(),
    }
}

/// `ᵃX(ᵇf) = lift of order a+b−2 of X(f)` for all nine order pairs, on
/// random polynomial fields and functions.
pub fn check_lift_identities(geo: &Geometry, opts: &Options) -> Result<CheckReport> {
    let mut rng = seeded_rng(opts.seed ^ 0x5eed);
    let names = geo.base().name_refs();
    let cases: Vec<(TensorField, Expr)> = (0..RANDOM_PAIRS)
        .map(|_| {
            let x = random_vector_field(&mut rng, geo.base(), RANDOM_DEGREE, RANDOM_TERMS);
            let f = random_polynomial(&mut rng, &names, RANDOM_DEGREE, RANDOM_TERMS + 1);
            (x, f)
        })
        .collect();
    let sampler = geo.total_sampler(opts);
    let mut conditions = Vec::new();
    for a in LiftOrder::ALL {
        for b in LiftOrder::ALL {
            let target = LiftOrder::combine(a, b);
            let mut comparisons = Vec::new();
            for (k, (x, f)) in cases.iter().enumerate() {
                let lhs =
                    lift_vector(geo.chart(), x, a)?.apply_to(&lift_function(geo.chart(), f, b)?);
                let rhs = lift_or_zero(geo, &x.apply_to(f), target)?;
                comparisons.push(Comparison::new(format!("case {k}"), lhs, rhs));
            }
            let name = format!("{a}X({b}f) = {}", rhs_name(target, "Xf"));
            conditions.push(certify_list(&name, &comparisons, &sampler, opts)?);
        }
    }
    Ok(CheckReport::conjunction("lifts-identities", conditions).with_meta("cases", RANDOM_PAIRS))
}

/// Lie brackets of lifted fields: `[ᵃX, ᵇY]` is the lift of order
/// `a+b−2` of `[X, Y]`, zero when that is negative.
pub fn check_brackets(geo: &Geometry, opts: &Options) -> Result<CheckReport> {
    use LiftOrder::*;
    let pairs = random_pairs(geo, opts, RANDOM_PAIRS);
    let sampler = geo.total_sampler(opts);
    let table = [
        (Zeroth, Zeroth),
        (Zeroth, First),
        (Second, Zeroth),
        (First, First),
        (Second, First),
        (Second, Second),
    ];
    let mut conditions = Vec::new();
    for (a, b) in table {
        let target = LiftOrder::combine(a, b);
        let mut comparisons = Vec::new();
        for (k, (x, y)) in pairs.iter().enumerate() {
            let lhs = lie_bracket(
                &lift_vector(geo.chart(), x, a)?,
                &lift_vector(geo.chart(), y, b)?,
            )?;
            let rhs = match target {
                Some(o) => lift_vector(geo.chart(), &lie_bracket(x, y)?, o)?,
                None => TensorField::zeros(geo.total(), 1, 0),
            };
            for ix in multi_indices(geo.total().dim(), 1) {
                comparisons.push(Comparison::new(
                    format!("case {k}{}", lhs.label(&ix)),
                    lhs.get(&ix).clone(),
                    rhs.get(&ix).clone(),
                ));
            }
        }
        let name = format!("[{a}X,{b}Y] = {}", rhs_name(target, "[X,Y]"));
        conditions.push(certify_list(&name, &comparisons, &sampler, opts)?);
    }
    Ok(CheckReport::conjunction("brackets", conditions).with_meta("cases", RANDOM_PAIRS))
}

const PAIRING_RULES: [(&str, LiftOrder, LiftOrder); 6] = [
    ("i", LiftOrder::Zeroth, LiftOrder::Zeroth),
    ("ii", LiftOrder::Zeroth, LiftOrder::First),
    ("iii", LiftOrder::Zeroth, LiftOrder::Second),
    ("iv", LiftOrder::First, LiftOrder::First),
    ("v", LiftOrder::First, LiftOrder::Second),
    ("vi", LiftOrder::Second, LiftOrder::Second),
];

/// Pairing rules of `ḡ` on lifted fields.
pub fn check_prop1_pairings(geo: &Geometry, opts: &Options) -> Result<CheckReport> {
    check_prop1_with_metric(geo, geo.gbar().tensor(), opts)
}

/// Pairing rules evaluated against an arbitrary (0,2) field on the bundle
/// in place of `ḡ`; used to exercise the check on deliberately wrong
/// metrics.
pub fn check_prop1_with_metric(
    geo: &Geometry,
    gbar: &TensorField,
    opts: &Options,
) -> Result<CheckReport> {
    let n = geo.base().dim();
    let mut fields: Vec<(String, TensorField, TensorField)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            fields.push((
                format!("frame({},{})", geo.base().name(i), geo.base().name(j)),
                TensorField::coordinate_vector(geo.base(), i),
                TensorField::coordinate_vector(geo.base(), j),
            ));
        }
    }
    for (k, (x, y)) in random_pairs(geo, opts, 3).into_iter().enumerate() {
        fields.push((format!("random {k}"), x, y));
    }
    let sampler = geo.total_sampler(opts);
    let mut conditions = Vec::new();
    for (rule, a, b) in PAIRING_RULES {
        let target = LiftOrder::combine(a, b);
        let mut comparisons = Vec::new();
        for (label, x, y) in &fields {
            let lhs = gbar.pair(
                &lift_vector(geo.chart(), x, a)?,
                &lift_vector(geo.chart(), y, b)?,
            )?;
            let mut rhs = lift_or_zero(geo, &geo.metric().tensor().pair(x, y)?, target)?;
            if rule == "vi" {
                rhs = rhs + geo.c().pair(x, y)?;
            }
            comparisons.push(Comparison::new(label.clone(), lhs, rhs));
        }
        let mut rhs = rhs_name(target, "g(X,Y)");
        if rule == "vi" {
            rhs.push_str(" + 0(c(X,Y))");
        }
        let name = format!("{rule}) gbar({a}X,{b}Y) = {rhs}");
        conditions.push(certify_list(&name, &comparisons, &sampler, opts)?);
    }
    Ok(CheckReport::conjunction("prop1", conditions))
}

/// Restrict a bundle (0,2) field to the block spanned by second lifts.
fn second_lift_slice(geo: &Geometry, t: &TensorField) -> Result<TensorField> {
    let n = geo.base().dim();
    TensorField::from_fn(geo.total(), 0, 2, |ix| {
        if ix[0] < n && ix[1] < n {
            t.get(ix).clone()
        } else {
            Expr::zero()
        }
    })
}

/// Killing property of the three lifts of `X` for `ḡ`, against the base
/// conditions `L_X g = 0` and `L_X c = 0`.
pub fn check_prop2_killing_lifts(
    geo: &Geometry,
    x: &TensorField,
    opts: &Options,
) -> Result<CheckReport> {
    let base_sampler = geo.base_sampler(opts);
    let total_sampler = geo.total_sampler(opts);
    let killing = killing_condition(x, geo.metric().tensor(), &base_sampler, opts.tol)?
        .with_name("base: L_X g = 0");
    let lxc = lie_derivative(x, geo.c())?;
    let c_preserved = super::certify_zero("base: L_X c = 0", "L_X c", &lxc, &base_sampler, opts)?;
    let base_killing = truthy(&killing);
    let base_c = truthy(&c_preserved);
    let mut conditions = vec![killing, c_preserved];
    let mut agree = true;
    for order in LiftOrder::ALL {
        let lifted = lift_vector(geo.chart(), x, order)?;
        let l = lie_derivative(&lifted, geo.gbar().tensor())?;
        let full = super::certify_zero(
            &format!("{order}X killing (full)"),
            "L gbar",
            &l,
            &total_sampler,
            opts,
        )?;
        let slice = super::certify_zero(
            &format!("{order}X killing (second-lift slice)"),
            "L gbar",
            &second_lift_slice(geo, &l)?,
            &total_sampler,
            opts,
        )?;
        let expected = match order {
            LiftOrder::Second => base_killing && base_c,
            _ => base_killing,
        };
        // the slice only sees lifts of L_X g, so it is implied by but does
        // not imply the base conditions
        agree &= truthy(&full) == expected && (!expected || truthy(&slice));
        conditions.push(full);
        conditions.push(slice);
    }
    Ok(biconditional("prop2", conditions, agree))
}

/// Report for a biconditional statement: the verdict records whether both
/// sides agree, and the conditions keep each side's own verdict.
pub(crate) fn biconditional(check: &str, conditions: Vec<Condition>, agree: bool) -> CheckReport {
    let mut report = CheckReport::conjunction(check, conditions);
    let any_numeric_only = report
        .conditions
        .iter()
        .any(|c| c.verdict == Verdict::Inconclusive);
    report.verdict = match (agree, any_numeric_only) {
        (false, _) => Verdict::Fails,
        (true, true) => Verdict::Inconclusive,
        (true, false) => Verdict::Holds,
    };
    report.consistent = agree;
    report
}
