use super::{LiftOrder, SecondOrderChart};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::manifold::{Metric, TensorField};

/// `⁰f = f`, `ᴵf = y^i ∂_i f`, `ᴵᴵf = z^i ∂_i f + ½ y^j y^i ∂_j ∂_i f`.
pub fn lift_function(sc: &SecondOrderChart, f: &Expr, order: LiftOrder) -> Result<Expr> {
    sc.ensure_base(f)?;
    Ok(lift_function_unchecked(sc, f, order))
}

pub(crate) fn lift_function_unchecked(sc: &SecondOrderChart, f: &Expr, order: LiftOrder) -> Expr {
    let base = sc.base();
    let n = base.dim();
    match order {
        LiftOrder::Zeroth => f.clone(),
        LiftOrder::First => (0..n)
            .map(|i| sc.y(i) * f.differentiate(base.name(i)))
            .sum(),
        LiftOrder::Second => {
            let mut acc = Expr::zero();
            for i in 0..n {
                let di = f.differentiate(base.name(i));
                if di.is_zero() {
                    continue;
                }
                acc = acc + sc.z(i) * &di;
                for j in 0..n {
                    let dij = di.differentiate(base.name(j));
                    if !dij.is_zero() {
                        acc = acc + Expr::rational(1, 2) * sc.y(i) * sc.y(j) * dij;
                    }
                }
            }
            acc
        }
    }
}

fn ensure_on_base(sc: &SecondOrderChart, t: &TensorField) -> Result<()> {
    sc.base().ensure_compatible(t.chart())?;
    for c in t.components() {
        sc.ensure_base(c)?;
    }
    Ok(())
}

/// Lift of a vector field. In block form the components are
/// `⁰X = (0, 0, X)`, `ᴵX = (0, X, ᴵX^j)`, `ᴵᴵX = (X, ᴵX^j, ᴵᴵX^j)`
/// over the `(x, y, z)` coordinate blocks.
pub fn lift_vector(
    sc: &SecondOrderChart,
    x: &TensorField,
    order: LiftOrder,
) -> Result<TensorField> {
    if x.valence() != (1, 0) {
        return Err(Error::Valence("lift_vector needs a vector field".into()));
    }
    ensure_on_base(sc, x)?;
    let n = sc.base_dim();
    TensorField::from_fn(sc.total(), 1, 0, |ix| {
        let (block, j) = (ix[0] / n, ix[0] % n);
        match (order.rank() + block)
            .checked_sub(2)
            .and_then(LiftOrder::from_rank)
        {
            Some(o) => lift_function_unchecked(sc, x.get(&[j]), o),
            None => Expr::zero(),
        }
    })
}

/// Lift of a (0,2) field: the `(A, B)` block carries the lift of order
/// `order − A − B` of the base components, and vanishes when that is
/// negative.
pub fn lift_metric(
    sc: &SecondOrderChart,
    t: &TensorField,
    order: LiftOrder,
) -> Result<TensorField> {
    if t.valence() != (0, 2) {
        return Err(Error::Valence("lift_metric needs a (0,2) field".into()));
    }
    ensure_on_base(sc, t)?;
    let n = sc.base_dim();
    TensorField::from_fn(sc.total(), 0, 2, |ix| {
        let (a, i) = (ix[0] / n, ix[0] % n);
        let (b, j) = (ix[1] / n, ix[1] % n);
        match order
            .rank()
            .checked_sub(a + b)
            .and_then(LiftOrder::from_rank)
        {
            Some(o) => lift_function_unchecked(sc, t.get(&[i, j]), o),
            None => Expr::zero(),
        }
    })
}

/// `ḡ = ᴵᴵg + ⁰c`.
pub fn deformed_metric(sc: &SecondOrderChart, g: &Metric, c: &TensorField) -> Result<Metric> {
    if c.valence() != (0, 2) {
        return Err(Error::Valence("c must be a (0,2) field".into()));
    }
    let sym = (0..c.dim()).all(|i| (0..i).all(|j| c.get(&[i, j]) == c.get(&[j, i])));
    if !sym {
        return Err(Error::Precondition("c must be symmetric".into()));
    }
    let second = lift_metric(sc, g.tensor(), LiftOrder::Second)?;
    let zeroth = lift_metric(sc, c, LiftOrder::Zeroth)?;
    Metric::new(second.add(&zeroth)?)
}

/// Lift of a (1,1) field determined by `ᴵᴵJ(ᴵᴵX) = ᴵᴵ(JX)`,
/// `ᴵᴵJ(ᴵX) = ᴵ(JX)`, `ᴵᴵJ(⁰X) = ⁰(JX)`, evaluated on the lifted coordinate
/// frame.
pub fn lift_tensor11(sc: &SecondOrderChart, j: &TensorField) -> Result<TensorField> {
    if j.valence() != (1, 1) {
        return Err(Error::Valence("lift_tensor11 needs a (1,1) field".into()));
    }
    ensure_on_base(sc, j)?;
    let n = sc.base_dim();
    let base = sc.base();
    // columns[K] = image of the K-th total frame vector
    let mut columns = Vec::with_capacity(3 * n);
    for block in 0..3 {
        let order = LiftOrder::from_rank(2 - block).expect("three blocks");
        for col in 0..n {
            let image = j.apply_endomorphism(&TensorField::coordinate_vector(base, col))?;
            columns.push(lift_vector(sc, &image, order)?);
        }
    }
    TensorField::from_fn(sc.total(), 1, 1, |ix| columns[ix[1]].get(&[ix[0]]).clone())
}

/// The nilpotent structure `γ̂` with `γ̂ ∂_{x^j} = ∂_{y^j}`,
/// `γ̂ ∂_{y^j} = ∂_{z^j}`, `γ̂ ∂_{z^j} = 0`.
pub fn nilpotent_gamma(sc: &SecondOrderChart) -> TensorField {
    let n = sc.base_dim();
    TensorField::from_fn(sc.total(), 1, 1, |ix| {
        if ix[0] >= n && ix[0] == ix[1] + n {
            Expr::one()
        } else {
            Expr::zero()
        }
    })
    .expect("constant structure fits any budget")
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::expr::parse_expr;
    use crate::manifold::{Chart, Interval};

    const X: [&str; 2] = ["x1", "x2"];

    fn setup() -> SecondOrderChart {
        let base = Arc::new(Chart::uniform(&X, Interval::new(0.5, 1.5)).unwrap());
        SecondOrderChart::new(&base).unwrap()
    }

    fn total(s: &str) -> Expr {
        parse_expr(s, &["x1", "x2", "y1", "y2", "z1", "z2"]).unwrap()
    }

    fn base(s: &str) -> Expr {
        parse_expr(s, &X).unwrap()
    }

    fn matrix(sc: &SecondOrderChart, contra: usize, rows: [[&str; 2]; 2]) -> TensorField {
        let rows: Vec<Vec<Expr>> = rows
            .iter()
            .map(|r| r.iter().map(|s| base(s)).collect())
            .collect();
        TensorField::from_matrix(sc.base(), contra, 2 - contra, &rows).unwrap()
    }

    #[test]
    fn function_lifts() {
        let sc = setup();
        let f = base("x1*x2");
        assert_eq!(lift_function(&sc, &f, LiftOrder::Zeroth).unwrap(), f);
        assert_eq!(
            lift_function(&sc, &f, LiftOrder::First).unwrap(),
            total("y1*x2 + x1*y2")
        );
        assert_eq!(
            lift_function(&sc, &f, LiftOrder::Second).unwrap(),
            total("z1*x2 + x1*z2 + y1*y2")
        );
        assert!(lift_function(&sc, &total("y1"), LiftOrder::First).is_err());
    }

    #[test]
    fn vector_lifts() {
        let sc = setup();
        let d1 = TensorField::coordinate_vector(sc.base(), 0);
        for (order, idx) in [
            (LiftOrder::Zeroth, 4),
            (LiftOrder::First, 2),
            (LiftOrder::Second, 0),
        ] {
            let l = lift_vector(&sc, &d1, order).unwrap();
            assert_eq!(l.components(), sc.frame(order, 0).components());
            assert!(l.get(&[idx]).is_one());
        }
        let x = TensorField::vector(sc.base(), vec![base("x2"), Expr::zero()]).unwrap();
        let first = lift_vector(&sc, &x, LiftOrder::First).unwrap();
        let expect: Vec<Expr> = ["0", "0", "x2", "0", "y2", "0"]
            .iter()
            .map(|s| total(s))
            .collect();
        assert_eq!(first.components(), &expect[..]);
        let second = lift_vector(&sc, &x, LiftOrder::Second).unwrap();
        let expect: Vec<Expr> = ["x2", "0", "y2", "0", "z2", "0"]
            .iter()
            .map(|s| total(s))
            .collect();
        assert_eq!(second.components(), &expect[..]);
    }

    #[test]
    fn metric_lifts() {
        let sc = setup();
        let id = matrix(&sc, 0, [["1", "0"], ["0", "1"]]);
        let l = lift_metric(&sc, &id, LiftOrder::Second).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let expect = a % 2 == b % 2 && a / 2 + b / 2 == 2;
                assert_eq!(l.get(&[a, b]).is_one(), expect, "({a},{b})");
                assert!(expect || l.get(&[a, b]).is_zero());
            }
        }
        let polar = matrix(&sc, 0, [["1", "0"], ["0", "x1^2"]]);
        let l = lift_metric(&sc, &polar, LiftOrder::Second).unwrap();
        assert_eq!(*l.get(&[1, 1]), total("2*z1*x1 + y1*y1"));
        let l0 = lift_metric(&sc, &polar, LiftOrder::Zeroth).unwrap();
        assert_eq!(*l0.get(&[1, 1]), base("x1^2"));
        assert!(l0.components().iter().filter(|e| !e.is_zero()).count() == 2);
    }

    #[test]
    fn deformed_euclidean_metric() {
        let sc = setup();
        let id = matrix(&sc, 0, [["1", "0"], ["0", "1"]]);
        let g = Metric::new(id.clone()).unwrap();
        let gbar = deformed_metric(&sc, &g, &id).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let one =
                    a % 2 == b % 2 && matches!((a / 2, b / 2), (0, 0) | (0, 2) | (1, 1) | (2, 0));
                assert_eq!(gbar.entry(a, b).is_one(), one);
            }
        }
    }

    #[test]
    fn tensor11_lift_blocks() {
        let sc = setup();
        let id = matrix(&sc, 1, [["1", "0"], ["0", "1"]]);
        assert_eq!(
            lift_tensor11(&sc, &id).unwrap().components(),
            TensorField::identity(sc.total()).components()
        );
        let j = matrix(&sc, 1, [["0", "-1"], ["1", "0"]]);
        let lj = lift_tensor11(&sc, &j).unwrap();
        let sq = lj.compose(&lj).unwrap();
        let minus_id = TensorField::identity(sc.total())
            .scale(&-Expr::one())
            .unwrap();
        assert_eq!(sq.components(), minus_id.components());
        let diag = matrix(&sc, 1, [["x1", "0"], ["0", "0"]]);
        let ld = lift_tensor11(&sc, &diag).unwrap();
        // (y-row, x-column) block carries y^s ∂_s J
        assert_eq!(*ld.get(&[2, 0]), total("y1"));
        assert_eq!(*ld.get(&[4, 0]), total("z1"));
        assert_eq!(*ld.get(&[4, 2]), total("y1"));
        assert!(ld.get(&[0, 2]).is_zero());
    }

    #[test]
    fn tensor11_lift_matches_closed_form() {
        let sc = setup();
        let j = matrix(&sc, 1, [["x1*x2", "x2^2"], ["sin(x1)", "x1"]]);
        let lj = lift_tensor11(&sc, &j).unwrap();
        let n = 2;
        for row in 0..3 {
            for col in 0..3 {
                for k in 0..n {
                    for c in 0..n {
                        let got = lj.get(&[row * n + k, col * n + c]);
                        let expect = match row.checked_sub(col) {
                            Some(d) => {
                                lift_function(&sc, j.get(&[k, c]), LiftOrder::from_rank(d).unwrap())
                                    .unwrap()
                            }
                            None => Expr::zero(),
                        };
                        assert_eq!(*got, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_shifts_frames() {
        let sc = setup();
        let g = nilpotent_gamma(&sc);
        let dx1 = sc.frame(LiftOrder::Second, 0);
        let once = g.apply_endomorphism(&dx1).unwrap();
        assert_eq!(
            once.components(),
            sc.frame(LiftOrder::First, 0).components()
        );
        let twice = g.apply_endomorphism(&once).unwrap();
        assert_eq!(
            twice.components(),
            sc.frame(LiftOrder::Zeroth, 0).components()
        );
        assert!(g.compose(&g).unwrap().compose(&g).unwrap().is_zero());
        assert!(!g.compose(&g).unwrap().is_zero());
    }
}
