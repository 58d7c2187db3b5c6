use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use t2lift_cli::compute::{compute, parse_order, ComputeArgs, Quantity};
use t2lift_cli::output::{computed_text, run_text, to_json, Format};
use t2lift_cli::runner::RunError;
use t2lift_cli::{load_spec, run_suites, HChoice, RunOptions};
use t2lift_core::analysis::h_audit;
use t2lift_core::lifts::{HVariant, LiftOrder};

#[derive(Parser, Debug)]
#[command(
    name = "t2lift",
    version,
    about = "Verify lifted metrics on second-order tangent bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Numeric tolerance (relative to 1 + max |side|).
    #[arg(long)]
    tol: Option<f64>,
    /// Sample points per numeric check.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites on a spec file.
    Check {
        spec: PathBuf,
        /// Suite name; repeatable or comma-separated. Defaults to all.
        #[arg(long = "suite", value_name = "NAME", value_delimiter = ',')]
        suites: Vec<String>,
        #[command(flatten)]
        common: Common,
        /// auto, paper-plus or audit-minus.
        #[arg(long, default_value = "auto")]
        h_variant: HChoice,
        /// Compute the bundle side of the semi-symmetry check symbolically.
        #[arg(long)]
        symbolic_semisym: bool,
        #[arg(long, env = "T2LIFT_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Leave per-check timings out so that output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Print one derived quantity.
    Compute {
        /// christoffel, curvature, lift-metric, lift-vector, gamma or h-tensor.
        quantity: Quantity,
        spec: PathBuf,
        /// Vector field name for lift-vector.
        #[arg(long)]
        field: Option<String>,
        /// Lift order for lift-vector: 0, I or II.
        #[arg(long, default_value = "II", value_parser = parse_order)]
        order: LiftOrder,
        /// Sign variant for h-tensor.
        #[arg(long, default_value = "audit-minus")]
        h_variant: HVariant,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Audits of formula variants.
    Audit {
        #[command(subcommand)]
        what: AuditCommand,
    },
}

#[derive(Subcommand, Debug)]
enum AuditCommand {
    /// Test both sign variants of H for metric compatibility.
    HFormula {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Check {
            spec,
            suites,
            common,
            h_variant,
            symbolic_semisym,
            jobs,
            no_timing,
        } => {
            let spec = load_spec(&spec)?;
            let opts = RunOptions {
                tol: common.tol,
                samples: common.samples,
                seed: common.seed,
                h_variant,
                symbolic_semisym,
                jobs,
                timing: !no_timing,
            };
            let report = run_suites(&spec, &suites, &opts)?;
            match common.format {
                Format::Json => print!("{}", to_json(&report)),
                Format::Text => print!("{}", run_text(&report)),
            }
            Ok(report.exit_code())
        }
        Command::Compute {
            quantity,
            spec,
            field,
            order,
            h_variant,
            format,
        } => {
            let spec = load_spec(&spec)?;
            let out = compute(
                &spec,
                quantity,
                &ComputeArgs {
                    field,
                    order,
                    variant: h_variant,
                },
            )?;
            match format {
                Format::Json => print!("{}", to_json(&out)),
                Format::Text => print!("{}", computed_text(&out)),
            }
            Ok(0)
        }
        Command::Audit {
            what: AuditCommand::HFormula { spec, common },
        } => {
            let spec = load_spec(&spec)?;
            let mut opts = spec.options();
            opts.tol = common.tol.unwrap_or(opts.tol);
            opts.samples = common.samples.unwrap_or(opts.samples);
            opts.seed = common.seed.unwrap_or(opts.seed);
            let audit = h_audit(&spec.geometry()?, &opts)?;
            match common.format {
                Format::Json => print!("{}", to_json(&audit.report)),
                Format::Text => {
                    let mut out = String::new();
                    t2lift_cli::output::check_text(&audit.report, &mut out);
                    print!("{out}");
                }
            }
            Ok(if audit.report.consistent { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("t2lift: {e}");
            ExitCode::from(2)
        }
    }
}
