//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use t2lift_core::analysis::Geometry;
use t2lift_core::lifts::SecondOrderChart;
use t2lift_core::{parse_expr, Chart, Expr, Interval, Metric, TensorField};

fn matrix(names: &[&str], rows: &[&[&str]]) -> Vec<Vec<Expr>> {
    rows.iter()
        .map(|r| r.iter().map(|s| parse_expr(s, names).unwrap()).collect())
        .collect()
}

/// Geometry for metric `g` and deformation `c` (`None` means `c = g`).
pub fn geometry(
    names: &[&str],
    domain: (f64, f64),
    g: &[&[&str]],
    c: Option<&[&[&str]]>,
) -> Geometry {
    let base = Arc::new(Chart::uniform(names, Interval::new(domain.0, domain.1)).unwrap());
    let sc = SecondOrderChart::new(&base).unwrap();
    let g = Metric::from_matrix(&base, &matrix(names, g)).unwrap();
    let c = match c {
        Some(rows) => TensorField::from_matrix(&base, 0, 2, &matrix(names, rows)).unwrap(),
        None => g.tensor().clone(),
    };
    Geometry::new(sc, g, c).unwrap()
}

pub fn sphere() -> Geometry {
    geometry(
        &["x1", "x2"],
        (0.3, 2.8),
        &[&["1", "0"], &["0", "sin(x1)^2"]],
        None,
    )
}

pub fn deformed_plane() -> Geometry {
    geometry(
        &["x1", "x2"],
        (0.5, 2.0),
        &[&["1", "0"], &["0", "1"]],
        Some(&[&["x1", "0"], &["0", "x2"]]),
    )
}

pub fn warped() -> Geometry {
    geometry(
        &["x1", "x2", "x3"],
        (0.5, 1.5),
        &[
            &["1", "0", "0"],
            &["0", "x1^2", "0"],
            &["0", "0", "(x1 + x2^2)^2"],
        ],
        None,
    )
}
