//! Spec loading, suite orchestration and report rendering behind the
//! `t2lift` binary.

pub mod compute;
pub mod output;
pub mod runner;
pub mod spec;

pub use runner::{run_suites, HChoice, RunOptions, RunReport, Suite};
pub use spec::{load_spec, parse_spec, LoadedSpec, SpecError};
