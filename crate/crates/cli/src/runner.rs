//! Suite selection, ordering and aggregation.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use t2lift_core::analysis::{self, Geometry, Options};
use t2lift_core::lifts::HVariant;
use t2lift_core::{CheckReport, TensorField, Verdict};

use crate::spec::{LoadedSpec, SpecError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    LiftsIdentities,
    Brackets,
    HAudit,
    Prop1,
    Prop2,
    Prop3Compat,
    Prop4,
    CurvatureFormula,
    Prop5,
    Thm1,
    Thm2,
    Thm3,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::LiftsIdentities,
        Suite::Brackets,
        Suite::HAudit,
        Suite::Prop1,
        Suite::Prop2,
        Suite::Prop3Compat,
        Suite::Prop4,
        Suite::CurvatureFormula,
        Suite::Prop5,
        Suite::Thm1,
        Suite::Thm2,
        Suite::Thm3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::LiftsIdentities => "lifts-identities",
            Suite::Brackets => "brackets",
            Suite::HAudit => "h-audit",
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Prop3Compat => "prop3-compat",
            Suite::Prop4 => "prop4",
            Suite::CurvatureFormula => "curvature-formula",
            Suite::Prop5 => "prop5",
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
        }
    }

    fn uses_h(self) -> bool {
        matches!(
            self,
            Suite::Prop3Compat | Suite::Prop4 | Suite::CurvatureFormula | Suite::Prop5
        )
    }

    /// Parse a list of suite names, expanding `all`. The flag reports
    /// whether `all` was present.
    pub fn parse_list<S: AsRef<str>>(names: &[S]) -> Result<(Vec<Suite>, bool), RunError> {
        let mut out = Vec::new();
        let mut all = names.is_empty();
        for n in names {
            match n.as_ref() {
                "all" => all = true,
                other => out.push(other.parse()?),
            }
        }
        if all {
            out.extend(Suite::ALL);
        }
        out.sort();
        out.dedup();
        Ok((out, all))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, RunError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| RunError::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HChoice {
    /// Run the compatibility audit and use the variant it selects.
    #[default]
    Auto,
    Fixed(HVariant),
}

impl FromStr for HChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(HChoice::Auto);
        }
        s.parse::<HVariant>()
            .map(HChoice::Fixed)
            .map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub h_variant: HChoice,
    pub symbolic_semisym: bool,
    pub jobs: usize,
    /// Record wall-clock time per check; off for reproducible output.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            tol: None,
            samples: None,
            seed: None,
            h_variant: HChoice::Auto,
            symbolic_semisym: false,
            jobs: 1,
            timing: true,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("evaluation error: {0}")]
    Core(#[from] t2lift_core::Error),
}

#[derive(Clone, Debug, Serialize)]
pub struct Skipped {
    pub suite: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub spec: String,
    pub seed: u64,
    pub tolerance: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_variant: Option<HVariant>,
    pub consistent: bool,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Skipped>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.consistent {
            0
        } else {
            1
        }
    }
}

#[derive(Clone, Debug)]
enum Task {
    Prop1,
    Prop2(String),
    Prop3,
    Prop4(String),
    Curvature,
    Prop5,
    Thm1,
    Thm2,
    Thm3,
}

fn timed(
    timing: bool,
    f: impl FnOnce() -> t2lift_core::Result<CheckReport>,
) -> Result<CheckReport, RunError> {
    let start = Instant::now();
    let mut report = f()?;
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn renamed(mut r: CheckReport, name: String) -> CheckReport {
    r.check = name;
    r
}

fn run_task(
    task: &Task,
    geo: &Geometry,
    spec: &LoadedSpec,
    variant: HVariant,
    opts: &Options,
    timing: bool,
) -> Result<CheckReport, RunError> {
    let field = |name: &str| -> &TensorField { &spec.fields[name] };
    let result = match task {
        Task::Prop1 => timed(timing, || analysis::check_prop1_pairings(geo, opts)),
        Task::Prop2(x) => timed(timing, || {
            analysis::check_prop2_killing_lifts(geo, field(x), opts)
                .map(|r| renamed(r, format!("prop2[{x}]")))
        }),
        Task::Prop3 => timed(timing, || analysis::check_prop3_compat(geo, variant, opts)),
        Task::Prop4(x) => timed(timing, || {
            analysis::check_prop4_affine_killing_lifts(geo, field(x), variant, opts)
                .map(|r| renamed(r, format!("prop4[{x}]")))
        }),
        Task::Curvature => timed(timing, || {
            analysis::check_curvature_formula(geo, variant, opts)
        }),
        Task::Prop5 => timed(timing, || {
            analysis::check_prop5_flatness(geo, variant, opts)
        }),
        Task::Thm1 => timed(timing, || analysis::check_thm1_semisymmetry(geo, opts)),
        Task::Thm2 => timed(timing, || {
            analysis::check_thm2_plural_holomorphic(geo, opts)
        }),
        Task::Thm3 => timed(timing, || {
            let j = spec.j.as_ref().expect("checked before scheduling");
            analysis::check_thm3_anti_kahler(geo, j, opts)
        }),
    };
    match result {
        Err(RunError::Core(t2lift_core::Error::Precondition(msg))) => Err(RunError::Config(msg)),
        other => other,
    }
}

/// Why `suite` cannot run on `spec`, if anything is missing.
fn missing_requirement(suite: Suite, spec: &LoadedSpec) -> Option<String> {
    match suite {
        Suite::Prop2 | Suite::Prop4 if spec.fields.is_empty() => {
            Some(format!("{suite} needs at least one entry in \"fields\""))
        }
        Suite::Thm1 if !spec.c_same_as_g => {
            Some("thm1 requires c = g (\"c\": \"same-as-g\")".into())
        }
        Suite::Thm3 if spec.j.is_none() => Some("thm3 needs \"J\"".into()),
        _ => None,
    }
}

/// Run the requested suites on `spec`.
///
/// The lift identities and bracket table always run first; when either
/// fails every later check is downgraded to inconclusive. With
/// [`HChoice::Auto`] the compatibility audit runs before any check that
/// depends on `H`, and its selected variant is used throughout.
pub fn run_suites(
    spec: &LoadedSpec,
    names: &[String],
    ropts: &RunOptions,
) -> Result<RunReport, RunError> {
    let (suites, all) = Suite::parse_list(names)?;
    let mut skipped = Vec::new();
    let mut selected = Vec::new();
    for s in suites {
        match missing_requirement(s, spec) {
            Some(reason) if all => skipped.push(Skipped {
                suite: s.to_string(),
                reason,
            }),
            Some(reason) => return Err(RunError::Config(reason)),
            None => selected.push(s),
        }
    }
    let mut opts = spec.options();
    opts.tol = ropts.tol.unwrap_or(opts.tol);
    opts.samples = ropts.samples.unwrap_or(opts.samples);
    opts.seed = ropts.seed.unwrap_or(opts.seed);
    opts.symbolic_semisym = ropts.symbolic_semisym;
    let geo = spec.geometry()?;
    let wants = |s: Suite| selected.contains(&s);
    let mut checks = Vec::new();

    let mut precondition_failures = Vec::new();
    for (suite, f) in [
        (
            Suite::LiftsIdentities,
            analysis::check_lift_identities as fn(&Geometry, &Options) -> _,
        ),
        (Suite::Brackets, analysis::check_brackets),
    ] {
        let report = timed(ropts.timing, || f(&geo, &opts))?;
        if report.verdict == Verdict::Fails {
            precondition_failures.push(report.check.clone());
        }
        if wants(suite) || report.verdict == Verdict::Fails {
            checks.push(report);
        }
    }

    let needs_h = selected.iter().any(|s| s.uses_h());
    let variant = match ropts.h_variant {
        HChoice::Fixed(v) => {
            if wants(Suite::HAudit) {
                checks.push(timed(ropts.timing, || {
                    analysis::h_audit(&geo, &opts).map(|a| a.report)
                })?);
            }
            Some(v)
        }
        HChoice::Auto if needs_h || wants(Suite::HAudit) => {
            let start = Instant::now();
            let audit = analysis::h_audit(&geo, &opts)?;
            let mut report = audit.report;
            if ropts.timing {
                report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            }
            if wants(Suite::HAudit) || audit.selected.is_none() {
                checks.push(report);
            }
            Some(audit.selected.unwrap_or(HVariant::AuditMinus))
        }
        HChoice::Auto => None,
    };

    let mut tasks = Vec::new();
    for s in &selected {
        match s {
            Suite::Prop1 => tasks.push(Task::Prop1),
            Suite::Prop2 => tasks.extend(spec.fields.keys().map(|k| Task::Prop2(k.clone()))),
            Suite::Prop3Compat => tasks.push(Task::Prop3),
            Suite::Prop4 => tasks.extend(spec.fields.keys().map(|k| Task::Prop4(k.clone()))),
            Suite::CurvatureFormula => tasks.push(Task::Curvature),
            Suite::Prop5 => tasks.push(Task::Prop5),
            Suite::Thm1 => tasks.push(Task::Thm1),
            Suite::Thm2 => tasks.push(Task::Thm2),
            Suite::Thm3 => tasks.push(Task::Thm3),
            Suite::LiftsIdentities | Suite::Brackets | Suite::HAudit => {}
        }
    }
    let h = variant.unwrap_or(HVariant::AuditMinus);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ropts.jobs.max(1))
        .build()
        .map_err(|e| RunError::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<CheckReport, RunError>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| run_task(t, &geo, spec, h, &opts, ropts.timing))
            .collect()
    });
    for r in results {
        let mut report = r?;
        if !precondition_failures.is_empty() {
            if report.verdict == Verdict::Holds || report.verdict == Verdict::Fails {
                report.verdict = Verdict::Inconclusive;
            }
            report.notes.push(format!(
                "pipeline precondition failed: {}",
                precondition_failures.join(", ")
            ));
        }
        checks.push(report);
    }

    let consistent = checks.iter().all(|c| c.consistent);
    Ok(RunReport {
        spec: spec.name.clone(),
        seed: opts.seed,
        tolerance: opts.tol,
        samples: opts.samples,
        h_variant: variant,
        consistent,
        checks,
        skipped,
    })
}
