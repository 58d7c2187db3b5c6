use std::sync::Arc;

use proptest::prelude::*;
use t2lift_core::expr::parse_node;
use t2lift_core::lifts::{lift_function, lift_vector, LiftOrder, SecondOrderChart};
use t2lift_core::manifold::{lie_bracket, Chart, Interval};
use t2lift_core::numeric::{finite_diff_oracle, random_vector_field, seeded_rng, Sampler};
use t2lift_core::{parse_expr, Expr, Point, TensorField};

const VARS: [&str; 2] = ["x1", "x2"];

/// Expression source text over `x1, x2`, nonsingular on `[0.5, 1.5]²`.
fn expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x1".to_string()),
        Just("x2".to_string()),
        (-4i32..=4).prop_map(|k| format!("({k})")),
        (1i32..=5, 1i32..=4).prop_map(|(p, q)| format!("({p}/{q})")),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            (inner.clone(), 0i32..=3).prop_map(|(a, e)| format!("({a})^{e}")),
            inner.clone().prop_map(|a| format!("{a}/(2 + x1^2)")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.prop_map(|a| format!("exp({a}/8)")),
        ]
    })
}

fn point() -> impl Strategy<Value = Point> {
    (0.5f64..1.5, 0.5f64..1.5).prop_map(|(a, b)| Point::new().with("x1", a).with("x2", b))
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn plane() -> Arc<Chart> {
    Arc::new(Chart::uniform(&VARS, Interval::new(0.5, 1.5)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_matches_finite_difference(text in expr_text(), p in point()) {
        let e = parse_expr(&text, &VARS).unwrap();
        for v in VARS {
            let sym = e.differentiate(v).evaluate(&p).unwrap();
            let fd = finite_diff_oracle(&e, v, &p).unwrap();
            prop_assert!(rel_close(sym, fd, 1e-5), "{text}: d/d{v} {sym} vs {fd}");
        }
    }

    #[test]
    fn difference_with_itself_is_zero(text in expr_text()) {
        let e = parse_expr(&text, &VARS).unwrap();
        prop_assert!((&e - &e).is_zero());
    }

    #[test]
    fn render_round_trips(text in expr_text()) {
        let e = parse_expr(&text, &VARS).unwrap();
        let again = parse_expr(&e.render(), &VARS).unwrap();
        prop_assert_eq!(again, e);
    }

    #[test]
    fn simplify_is_idempotent(text in expr_text()) {
        let e = parse_expr(&text, &VARS).unwrap();
        let once = e.simplify();
        prop_assert_eq!(once.simplify(), once);
    }

    #[test]
    fn canonical_form_preserves_values(text in expr_text(), p in point()) {
        let tree = parse_node(&text, &VARS).unwrap().evaluate(&p).unwrap();
        let canon = parse_expr(&text, &VARS).unwrap().evaluate(&p).unwrap();
        prop_assert!(rel_close(tree, canon, 1e-12), "{text}: {tree} vs {canon}");
    }

    #[test]
    fn addition_commutes_and_distributes(a in expr_text(), b in expr_text(), c in expr_text()) {
        let (a, b, c) = (
            parse_expr(&a, &VARS).unwrap(),
            parse_expr(&b, &VARS).unwrap(),
            parse_expr(&c, &VARS).unwrap(),
        );
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lie_bracket_satisfies_jacobi(seed in any::<u64>()) {
        let chart = plane();
        let mut rng = seeded_rng(seed);
        let x = random_vector_field(&mut rng, &chart, 2, 3);
        let y = random_vector_field(&mut rng, &chart, 2, 3);
        let z = random_vector_field(&mut rng, &chart, 2, 3);
        let b = |u: &TensorField, v: &TensorField| lie_bracket(u, v).unwrap();
        let sum = b(&x, &b(&y, &z)).add(&b(&y, &b(&z, &x))).unwrap().add(&b(&z, &b(&x, &y))).unwrap();
        prop_assert!(sum.is_zero());
        prop_assert!(b(&x, &y).add(&b(&y, &x)).unwrap().is_zero());
    }

    #[test]
    fn vector_lifts_are_linear(seed in any::<u64>(), k in -3i64..=3) {
        let chart = plane();
        let sc = SecondOrderChart::new(&chart).unwrap();
        let mut rng = seeded_rng(seed);
        let x = random_vector_field(&mut rng, &chart, 2, 3);
        let y = random_vector_field(&mut rng, &chart, 2, 3);
        let combo = x.scale(&Expr::int(k)).unwrap().add(&y).unwrap();
        for order in LiftOrder::ALL {
            let lhs = lift_vector(&sc, &combo, order).unwrap();
            let rhs = lift_vector(&sc, &x, order).unwrap().scale(&Expr::int(k)).unwrap()
                .add(&lift_vector(&sc, &y, order).unwrap()).unwrap();
            prop_assert_eq!(lhs.components(), rhs.components());
        }
    }

    #[test]
    fn function_lifts_obey_leibniz(a in expr_text(), b in expr_text()) {
        let chart = plane();
        let sc = SecondOrderChart::new(&chart).unwrap();
        let (f, g) = (parse_expr(&a, &VARS).unwrap(), parse_expr(&b, &VARS).unwrap());
        let l = |e: &Expr, o| lift_function(&sc, e, o).unwrap();
        let fg = &f * &g;
        // ᴵ(fg) = ᴵf ⁰g + ⁰f ᴵg and ᴵᴵ(fg) = ᴵᴵf ⁰g + ᴵf ᴵg + ⁰f ᴵᴵg
        prop_assert_eq!(
            l(&fg, LiftOrder::First),
            l(&f, LiftOrder::First) * &g + &f * l(&g, LiftOrder::First)
        );
        prop_assert_eq!(
            l(&fg, LiftOrder::Second),
            l(&f, LiftOrder::Second) * &g + l(&f, LiftOrder::First) * l(&g, LiftOrder::First) + &f * l(&g, LiftOrder::Second)
        );
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>()) {
        let chart = plane();
        let a = Sampler::new(&chart, 5, seed).points().unwrap();
        let b = Sampler::new(&chart, 5, seed).points().unwrap();
        prop_assert_eq!(&a, &b);
        for p in &a {
            for v in VARS {
                let x = p.get(v).unwrap();
                prop_assert!((0.5..=1.5).contains(&x));
            }
        }
    }
}
