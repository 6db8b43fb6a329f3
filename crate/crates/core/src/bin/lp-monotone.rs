//! Experiment runner. Exit status: 0 when every run converged, 2 when a run
//! hit `--max-iter` first, 1 on errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lp_monotone::duality::DualityVariant;
use lp_monotone::harness::{
    execute, record_path, run_example, ExampleOverrides, RunConfig, SolverKind,
};
use lp_monotone::io::{export_csv, export_json, export_loglog, load_json, RunRecord};
use lp_monotone::operators::SubgradientVariant;
use lp_monotone::schedule::{ParamSchedule, DEFAULT_THETA_OFFSET};
use lp_monotone::Result;

#[derive(Parser)]
#[command(
    name = "lp-monotone",
    version,
    about = "Regularized one-step iteration for monotone operators on L_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reference experiment 1 (zero of (1+t)f), 2 (minimize the norm) or 3 (Hammerstein).
    RunExample {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Rerun across the experiment's tolerance column.
        #[arg(long)]
        ladder: bool,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Zero of a monotone operator.
    Zero(GenericArgs),
    /// Zero of a monotone operator, J-free form (p = 2).
    Hilbert(GenericArgs),
    /// Hammerstein equation u + KFu = 0; operator is `F,K`.
    Hammerstein(GenericArgs),
    /// Minimize a convex functional through a subgradient selection.
    Min(GenericArgs),
    /// Variational inequality over a box.
    Vi(GenericArgs),
    /// J-fixed point of `<op>-as-T`.
    Jfixed(GenericArgs),
    /// Re-execute the configuration stored in a JSON run record.
    Rerun {
        record: PathBuf,
        #[command(flatten)]
        output: OutputFlags,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Loglog,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubgradFlag {
    Paper,
    Duality,
}

#[derive(Clone, Copy, ValueEnum)]
enum DualityFlag {
    Standard,
    PrintedLiteral,
}

#[derive(Args)]
struct OutputFlags {
    /// Write the record here (ladder runs add a `-tol<TOL>` suffix).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct CommonFlags {
    #[arg(long)]
    p: Option<f64>,
    /// Number of subintervals of [0, 1].
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Coupling bound: alpha_n is clipped to gamma * theta_n.
    #[arg(long)]
    gamma: Option<f64>,
    /// Offset n0 in theta_n = 1/log(log(n + n0)).
    #[arg(long)]
    theta_offset: Option<u64>,
    /// Logarithm base for theta_n.
    #[arg(long)]
    theta_base: Option<f64>,
    /// Initial point: a preset name, `zero`, `const:<c>` or `csv:<path>`.
    #[arg(long)]
    init: Option<String>,
    /// Initial v for Hammerstein runs.
    #[arg(long)]
    init_v: Option<String>,
    #[arg(long, value_enum)]
    subgrad_variant: Option<SubgradFlag>,
    #[arg(long, value_enum)]
    duality: Option<DualityFlag>,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct GenericArgs {
    #[arg(long)]
    operator: String,
    /// Box constraint `lo,hi` for vi.
    #[arg(long, value_parser = parse_box, allow_hyphen_values = true)]
    r#box: Option<(f64, f64)>,
    /// Magnitude of the normal-cone selection for vi.
    #[arg(long, default_value_t = 1.0)]
    cone_magnitude: f64,
    #[command(flatten)]
    flags: CommonFlags,
}

fn parse_box(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
    Ok((lo, hi))
}

impl CommonFlags {
    fn schedule(&self) -> Result<Option<ParamSchedule>> {
        if self.gamma.is_none() && self.theta_offset.is_none() && self.theta_base.is_none() {
            return Ok(None);
        }
        ParamSchedule::with_theta_offset(
            self.gamma.unwrap_or(1.0),
            self.theta_offset.unwrap_or(DEFAULT_THETA_OFFSET),
            self.theta_base.unwrap_or(std::f64::consts::E),
        )
        .map(Some)
    }

    fn overrides(&self, ladder: bool) -> Result<ExampleOverrides> {
        Ok(ExampleOverrides {
            tol: self.tol,
            init: self.init.clone(),
            init_v: self.init_v.clone(),
            p: self.p,
            grid: self.grid,
            max_iter: self.max_iter,
            schedule: self.schedule()?,
            duality: self.duality.map(|d| match d {
                DualityFlag::Standard => DualityVariant::Standard,
                DualityFlag::PrintedLiteral => DualityVariant::PrintedLiteral,
            }),
            subgrad_variant: self.subgrad_variant.map(|s| match s {
                SubgradFlag::Paper => SubgradientVariant::Paper,
                SubgradFlag::Duality => SubgradientVariant::Duality,
            }),
            ladder,
        })
    }
}

fn generic_config(solver: SolverKind, args: &GenericArgs) -> Result<RunConfig> {
    let mut c = RunConfig::new(solver, args.operator.clone(), "inv-quad");
    args.flags.overrides(false)?.apply(&mut c);
    c.box_bounds = args.r#box;
    c.normal_cone_magnitude = args.cone_magnitude;
    Ok(c)
}

fn write(rec: &RunRecord, path: &Path, format: Format) -> Result<()> {
    match format {
        Format::Csv => export_csv(rec, path),
        Format::Json => export_json(rec, path),
        Format::Loglog => {
            let report = export_loglog(rec, path)?;
            if report.dropped > 0 {
                eprintln!(
                    "{}: dropped {} non-positive residuals",
                    path.display(),
                    report.dropped
                );
            }
            Ok(())
        }
    }
}

fn report(records: &[RunRecord], output: &OutputFlags) -> Result<ExitCode> {
    let multi = records.len() > 1;
    for rec in records {
        let path = output
            .out
            .as_deref()
            .map(|base| record_path(base, rec, multi));
        if let Some(path) = &path {
            write(rec, path, output.format)?;
        }
        let line = serde_json::json!({
            "config": rec.config,
            "summary": rec.summary,
            "output": path,
        });
        println!("{line}");
    }
    Ok(if records.iter().all(|r| r.summary.converged) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::RunExample {
            which,
            ladder,
            flags,
        } => {
            let records = run_example(which, &flags.overrides(ladder)?)?;
            report(&records, &flags.output)
        }
        Command::Rerun { record, output } => {
            let rec = load_json(&record)?;
            report(&[execute(&rec.config)?], &output)
        }
        Command::Zero(a) => report(
            &[execute(&generic_config(SolverKind::Zero, &a)?)?],
            &a.flags.output,
        ),
        Command::Hilbert(a) => report(
            &[execute(&generic_config(SolverKind::Hilbert, &a)?)?],
            &a.flags.output,
        ),
        Command::Hammerstein(a) => report(
            &[execute(&generic_config(SolverKind::Hammerstein, &a)?)?],
            &a.flags.output,
        ),
        Command::Min(a) => report(
            &[execute(&generic_config(SolverKind::Min, &a)?)?],
            &a.flags.output,
        ),
        Command::Vi(a) => report(
            &[execute(&generic_config(SolverKind::Vi, &a)?)?],
            &a.flags.output,
        ),
        Command::Jfixed(a) => report(
            &[execute(&generic_config(SolverKind::Jfixed, &a)?)?],
            &a.flags.output,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
