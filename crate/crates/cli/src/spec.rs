//! Manifold specification documents (JSON).

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use t2lift_core::analysis::{Geometry, Options};
use t2lift_core::lifts::SecondOrderChart;
use t2lift_core::numeric::{DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOLERANCE};
use t2lift_core::{parse_expr, Chart, Expr, Interval, Metric, TensorField};

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed spec: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation in '{field}': {reason}")]
    Schema { field: String, reason: String },
    #[error("{field}[{row},{col}]: {source}")]
    Cell {
        field: String,
        row: usize,
        col: usize,
        source: t2lift_core::Error,
    },
    #[error("{field}[{index}]: {source}")]
    Entry {
        field: String,
        index: String,
        source: t2lift_core::Error,
    },
    #[error("{field} is not symmetric: cell ({row},{col}) differs from ({col},{row})")]
    Asymmetric {
        field: String,
        row: usize,
        col: usize,
    },
    #[error("{0}")]
    Core(#[from] t2lift_core::Error),
}

fn schema(field: &str, reason: impl Into<String>) -> SpecError {
    SpecError::Schema {
        field: field.to_string(),
        reason: reason.into(),
    }
}

/// A matrix or field entry; bare numbers are accepted alongside strings.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Cell {
    Text(String),
    Number(serde_json::Number),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Number(n) => n.to_string(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum CSpec {
    Token(String),
    Matrix(Vec<Vec<Cell>>),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Tolerances {
    numeric: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: String,
    dim: usize,
    coordinates: Vec<String>,
    domain: Vec<[f64; 2]>,
    #[serde(default)]
    fiber_domain: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    exclude: Vec<String>,
    metric: Vec<Vec<Cell>>,
    #[serde(default)]
    c: Option<CSpec>,
    #[serde(default, rename = "J")]
    j: Option<Vec<Vec<Cell>>>,
    #[serde(default)]
    fields: BTreeMap<String, Vec<Cell>>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    node_budget: Option<usize>,
}

/// A validated specification with every expression parsed.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub name: String,
    pub chart: SecondOrderChart,
    pub g: Metric,
    pub c: TensorField,
    pub c_same_as_g: bool,
    pub j: Option<TensorField>,
    pub fields: BTreeMap<String, TensorField>,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

impl LoadedSpec {
    pub fn base(&self) -> &Arc<Chart> {
        self.chart.base()
    }

    pub fn geometry(&self) -> Result<Geometry, SpecError> {
        Ok(Geometry::new(
            self.chart.clone(),
            self.g.clone(),
            self.c.clone(),
        )?)
    }

    /// Check options seeded from the spec's own settings.
    pub fn options(&self) -> Options {
        Options {
            tol: self.tol,
            samples: self.samples,
            seed: self.seed,
            ..Options::default()
        }
    }
}

fn intervals(field: &str, raw: &[[f64; 2]], expected: usize) -> Result<Vec<Interval>, SpecError> {
    if raw.len() != expected {
        return Err(schema(
            field,
            format!("expected {expected} intervals, got {}", raw.len()),
        ));
    }
    raw.iter()
        .enumerate()
        .map(|(i, [lo, hi])| {
            if lo.is_finite() && hi.is_finite() && lo < hi {
                Ok(Interval::new(*lo, *hi))
            } else {
                Err(schema(
                    field,
                    format!("interval {} is not [lo, hi] with lo < hi", i + 1),
                ))
            }
        })
        .collect()
}

fn matrix(field: &str, rows: &[Vec<Cell>], names: &[&str]) -> Result<Vec<Vec<Expr>>, SpecError> {
    let n = names.len();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(schema(field, format!("expected a {n}x{n} matrix")));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, cell)| {
                    parse_expr(&cell.text(), names).map_err(|source| SpecError::Cell {
                        field: field.to_string(),
                        row: i + 1,
                        col: j + 1,
                        source,
                    })
                })
                .collect()
        })
        .collect()
}

fn ensure_symmetric(field: &str, m: &[Vec<Expr>]) -> Result<(), SpecError> {
    for (i, row) in m.iter().enumerate() {
        for j in 0..i {
            if row[j] != m[j][i] {
                return Err(SpecError::Asymmetric {
                    field: field.to_string(),
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
    }
    Ok(())
}

/// Parse and validate a spec document.
pub fn parse_spec(text: &str) -> Result<LoadedSpec, SpecError> {
    let raw: RawSpec = serde_json::from_str(text)?;
    if raw.dim == 0 {
        return Err(schema("dim", "must be positive"));
    }
    if raw.coordinates.len() != raw.dim {
        return Err(schema(
            "coordinates",
            format!(
                "dim is {} but {} names given",
                raw.dim,
                raw.coordinates.len()
            ),
        ));
    }
    let names: Vec<&str> = raw.coordinates.iter().map(String::as_str).collect();
    let domain = intervals("domain", &raw.domain, raw.dim)?;
    let exclusions = raw
        .exclude
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_expr(s, &names).map_err(|source| SpecError::Entry {
                field: "exclude".into(),
                index: (i + 1).to_string(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut chart = Chart::new(&names, &domain)?.with_exclusions(exclusions)?;
    if let Some(budget) = raw.node_budget {
        chart = chart.with_node_budget(budget);
    }
    let base = Arc::new(chart);
    let sc = match &raw.fiber_domain {
        Some(f) => {
            SecondOrderChart::with_fiber_domain(&base, &intervals("fiber_domain", f, 2 * raw.dim)?)?
        }
        None => SecondOrderChart::new(&base)?,
    };

    let gm = matrix("metric", &raw.metric, &names)?;
    ensure_symmetric("metric", &gm)?;
    let g = Metric::from_matrix(&base, &gm)?;
    let (c, c_same_as_g) = match &raw.c {
        None => (g.tensor().clone(), true),
        Some(CSpec::Token(t)) if t == "same-as-g" => (g.tensor().clone(), true),
        Some(CSpec::Token(t)) => {
            return Err(schema(
                "c",
                format!("expected a matrix or \"same-as-g\", got \"{t}\""),
            ))
        }
        Some(CSpec::Matrix(rows)) => {
            let cm = matrix("c", rows, &names)?;
            ensure_symmetric("c", &cm)?;
            let c = TensorField::from_matrix(&base, 0, 2, &cm)?;
            let same = c.components() == g.tensor().components();
            (c, same)
        }
    };
    let j = match &raw.j {
        Some(rows) => Some(TensorField::from_matrix(
            &base,
            1,
            1,
            &matrix("J", rows, &names)?,
        )?),
        None => None,
    };
    let mut fields = BTreeMap::new();
    for (name, comps) in &raw.fields {
        let field = format!("fields.{name}");
        if comps.len() != raw.dim {
            return Err(schema(
                &field,
                format!("expected {} components, got {}", raw.dim, comps.len()),
            ));
        }
        let exprs = comps
            .iter()
            .enumerate()
            .map(|(i, cell)| {
                parse_expr(&cell.text(), &names).map_err(|source| SpecError::Entry {
                    field: field.clone(),
                    index: (i + 1).to_string(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        fields.insert(name.clone(), TensorField::vector(&base, exprs)?);
    }
    let tol = raw.tolerances.numeric.unwrap_or(DEFAULT_TOLERANCE);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(schema("tolerances.numeric", "must be a positive number"));
    }
    Ok(LoadedSpec {
        name: raw.name,
        chart: sc,
        g,
        c,
        c_same_as_g,
        j,
        fields,
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        samples: raw.samples.unwrap_or(DEFAULT_SAMPLES),
        tol,
    })
}

pub fn load_spec(path: &Path) -> Result<LoadedSpec, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spec(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE: &str = r#"{
        "name": "sphere-2d", "dim": 2, "coordinates": ["x1", "x2"],
        "domain": [[0.3, 2.8], [0.3, 2.8]],
        "metric": [["1", "0"], ["0", "sin(x1)^2"]],
        "c": "same-as-g"
    }"#;

    #[test]
    fn loads_sphere() {
        let s = parse_spec(SPHERE).unwrap();
        assert_eq!(s.base().dim(), 2);
        assert!(s.c_same_as_g);
        assert_eq!(s.chart.total().dim(), 6);
    }

    #[test]
    fn unknown_identifier_names_cell() {
        let text = SPHERE.replace(r#"[["1", "0"]"#, r#"[["x3", "0"]"#);
        let err = parse_spec(&text).unwrap_err();
        match &err {
            SpecError::Cell {
                field,
                row,
                col,
                source,
            } => {
                assert_eq!((field.as_str(), *row, *col), ("metric", 1, 1));
                assert!(matches!(
                    source,
                    t2lift_core::Error::UnknownIdentifier { .. }
                ));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err
            .to_string()
            .starts_with("metric[1,1]: unknown identifier 'x3'"));
    }

    #[test]
    fn rejects_asymmetric_metric() {
        let text = SPHERE.replace(r#"["0", "sin(x1)^2"]"#, r#"["x1", "sin(x1)^2"]"#);
        assert!(matches!(
            parse_spec(&text),
            Err(SpecError::Asymmetric { row: 2, col: 1, .. })
        ));
    }

    #[test]
    fn numbers_and_matrices_for_c() {
        let text = SPHERE.replace(r#""same-as-g""#, r#"[[1, 0], [0, "x1"]]"#);
        let s = parse_spec(&text).unwrap();
        assert!(!s.c_same_as_g);
        assert_eq!(*s.c.get(&[1, 1]), Expr::var("x1"));
    }

    #[test]
    fn schema_errors() {
        let text = SPHERE.replace(r#""dim": 2"#, r#""dim": 3"#);
        assert!(matches!(parse_spec(&text), Err(SpecError::Schema { .. })));
        let text = SPHERE.replace(r#""c": "same-as-g""#, r#""c": "identity""#);
        assert!(matches!(parse_spec(&text), Err(SpecError::Schema { .. })));
        let text = SPHERE.replace(r#""c":"#, r#""colour":"#);
        assert!(matches!(parse_spec(&text), Err(SpecError::Json(_))));
    }
}
