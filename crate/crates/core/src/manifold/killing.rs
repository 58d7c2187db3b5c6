use super::{lie_derivative, lie_derivative_connection, Connection, Metric, TensorField};
use crate::error::Result;
use crate::numeric::{certify, Comparison, Sampler};
use crate::report::{CheckReport, Condition};

fn zero_components(prefix: &str, t: &TensorField) -> Vec<Comparison> {
    super::multi_indices(t.dim(), t.rank())
        .into_iter()
        .map(|ix| Comparison::zero(format!("{prefix}{}", t.label(&ix)), t.get(&ix).clone()))
        .collect()
}

/// Condition that every component of `L_X g` vanishes.
pub fn killing_condition(
    x: &TensorField,
    g: &TensorField,
    sampler: &Sampler,
    tol: f64,
) -> Result<Condition> {
    let l = lie_derivative(x, g)?;
    certify("killing", &zero_components("L_X g", &l), sampler, tol)
}

/// Condition that every component of `L_X ∇` vanishes.
pub fn affine_killing_condition(
    x: &TensorField,
    conn: &Connection,
    sampler: &Sampler,
    tol: f64,
) -> Result<Condition> {
    let l = lie_derivative_connection(x, conn)?;
    certify(
        "affine-killing",
        &zero_components("L_X nabla", &l),
        sampler,
        tol,
    )
}

pub fn killing_check(
    x: &TensorField,
    g: &Metric,
    sampler: &Sampler,
    tol: f64,
) -> Result<CheckReport> {
    Ok(CheckReport::conjunction(
        "killing",
        vec![killing_condition(x, g.tensor(), sampler, tol)?],
    ))
}

pub fn affine_killing_check(
    x: &TensorField,
    conn: &Connection,
    sampler: &Sampler,
    tol: f64,
) -> Result<CheckReport> {
    Ok(CheckReport::conjunction(
        "affine-killing",
        vec![affine_killing_condition(x, conn, sampler, tol)?],
    ))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::expr::{parse_expr, Expr};
    use crate::manifold::{christoffel, Chart, Interval};
    use crate::report::Verdict;

    fn setup() -> (Arc<Chart>, Metric, Sampler) {
        let c = Arc::new(Chart::uniform(&["x1", "x2"], Interval::new(-1.0, 1.0)).unwrap());
        let one = Expr::one();
        let zero = Expr::zero();
        let g =
            Metric::from_matrix(&c, &[vec![one.clone(), zero.clone()], vec![zero, one]]).unwrap();
        let s = Sampler::new(&c, 10, 1);
        (c, g, s)
    }

    fn field(c: &Arc<Chart>, comps: [&str; 2]) -> TensorField {
        TensorField::vector(
            c,
            comps
                .iter()
                .map(|s| parse_expr(s, &["x1", "x2"]).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rotation_is_killing_and_affine_killing() {
        let (c, g, s) = setup();
        let rot = field(&c, ["-x2", "x1"]);
        assert_eq!(
            killing_check(&rot, &g, &s, 1e-9).unwrap().verdict,
            Verdict::Holds
        );
        let conn = christoffel(&g).unwrap();
        assert_eq!(
            affine_killing_check(&rot, &conn, &s, 1e-9).unwrap().verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn dilation_fails_with_witness() {
        let (c, g, s) = setup();
        let r = killing_check(&field(&c, ["x1", "0"]), &g, &s, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witnesses().next().unwrap();
        assert_eq!(w.component, "L_X g[x1,x1]");
        assert_eq!(w.expr.as_deref(), Some("2"));
    }
}
