//! Command-line front end: argument parsing, dispatch and report output.
//!
//! Exit codes: 0 on success, 1 when the input is rejected before any
//! computation, 2 when a computation or file write fails.

pub mod report;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hedgebid_core::{
    clear_market, diagonalize, load_instance, run_all_cases, run_case, verify_nash, BidProfile,
    CaseId, DiagonalizationOptions, ExperimentConfig, ExperimentError, InstanceError, MarketError,
    MarketInstance, NormalizationBound, Schedule,
};
use serde_json::json;

pub const DEFAULT_INSTANCE: &str = "instances/paper_table1.json";

#[derive(Debug, Parser)]
#[command(
    name = "hedgebid",
    version,
    about = "Repeated quadratic-bid electricity auctions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clear a single auction round and print price, dispatch and cost.
    Clear {
        #[command(flatten)]
        instance: InstanceArg,
        /// Comma-separated action index per bidder; all zeros (true costs)
        /// when omitted.
        #[arg(long)]
        profile: Option<String>,
    },
    /// Run best-response diagonalization and certify the result.
    Equilibrium {
        #[command(flatten)]
        instance: InstanceArg,
        #[command(flatten)]
        diag: DiagArgs,
        /// Starting profile; all zeros when omitted.
        #[arg(long)]
        profile: Option<String>,
        /// Also write `equilibrium.json` into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate one bidding case over repeated rounds.
    Simulate {
        #[command(flatten)]
        instance: InstanceArg,
        /// Case letter, a..h.
        #[arg(long, value_parser = parse_case)]
        case: CaseId,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Simulate all eight cases and rank them by final social cost.
    Report {
        #[command(flatten)]
        instance: InstanceArg,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
pub struct InstanceArg {
    /// Instance JSON file.
    #[arg(long = "instance", default_value = DEFAULT_INSTANCE)]
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct DiagArgs {
    /// Convergence tolerance on bid coefficients (max-norm).
    #[arg(long, default_value_t = 0.0004, value_parser = parse_non_negative)]
    pub epsilon: f64,
    /// Maximum number of sweeps.
    #[arg(long = "max-iter", default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iter: u64,
    #[arg(long, value_enum, default_value_t = ScheduleArg::GaussSeidel)]
    pub schedule: ScheduleArg,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: u64,
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hedge learning rate; sqrt(8 ln K / T) when omitted.
    #[arg(long, value_parser = parse_non_negative)]
    pub eta: Option<f64>,
    /// Utility bound used to scale Hedge rewards into [0, 1].
    #[arg(long, value_enum, default_value_t = BoundArg::Envelope)]
    pub bound: BoundArg,
    #[command(flatten)]
    pub diag: DiagArgs,
    /// Directory for CSV and JSON reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    GaussSeidel,
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    Envelope,
    Coarse,
}

fn parse_case(s: &str) -> Result<CaseId, String> {
    s.parse()
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a finite non-negative number, got {s}"))
    }
}

impl DiagArgs {
    fn options(&self) -> DiagonalizationOptions {
        DiagonalizationOptions {
            max_iter: self.max_iter as usize,
            tolerance: self.epsilon,
            schedule: match self.schedule {
                ScheduleArg::GaussSeidel => Schedule::GaussSeidel,
                ScheduleArg::Jacobi => Schedule::Jacobi,
            },
        }
    }
}

impl RunArgs {
    fn config(&self, case: CaseId) -> ExperimentConfig {
        ExperimentConfig {
            case,
            rounds: self.rounds as usize,
            runs: self.runs as usize,
            base_seed: self.seed,
            eta: self.eta,
            diagonalization: self.diag.options(),
            initial_profile: None,
            bound: match self.bound {
                BoundArg::Envelope => NormalizationBound::Envelope,
                BoundArg::Coarse => NormalizationBound::Coarse,
            },
            regret_bidders: None,
            jobs: self.jobs,
        }
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Rejected input; exit code 1.
    Invalid(String),
    /// Computation or output failure; exit code 2.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<MarketError> for CliError {
    fn from(e: MarketError) -> Self {
        match e {
            MarketError::InfeasibleDemand { .. } | MarketError::NonConvergence { .. } => {
                CliError::Failed(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<InstanceError> for CliError {
    fn from(e: InstanceError) -> Self {
        match e {
            InstanceError::Invalid(inner) => inner.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Market(m) => m.into(),
            ExperimentError::Agent(_) | ExperimentError::Config(_) => {
                CliError::Invalid(e.to_string())
            }
            ExperimentError::EquilibriumNotConverged { .. } => CliError::Failed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(format!("cannot write output: {e}"))
    }
}

fn load(arg: &InstanceArg) -> Result<MarketInstance, CliError> {
    Ok(load_instance(&arg.path)?)
}

fn profile_arg(instance: &MarketInstance, text: Option<&str>) -> Result<BidProfile, CliError> {
    let profile = match text {
        Some(t) => t
            .parse::<BidProfile>()
            .map_err(|e| CliError::Invalid(format!("invalid --profile '{t}': {e}")))?,
        None => BidProfile::truthful(instance.len()),
    };
    instance.check_profile(&profile)?;
    Ok(profile)
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// Executes a parsed command, writing results to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Clear { instance, profile } => {
            let inst = load(instance)?;
            let profile = profile_arg(&inst, profile.as_deref())?;
            let r = clear_market(&inst, &profile)?;
            print_json(
                out,
                &json!({
                    "profile": profile,
                    "demand": inst.demand(),
                    "price": r.price,
                    "social_cost": r.social_cost,
                    "allocations": r.allocations,
                    "payments": r.payments,
                    "utilities": r.utilities,
                }),
            )
        }
        Command::Equilibrium {
            instance,
            diag,
            profile,
            out: dir,
        } => {
            let inst = load(instance)?;
            let start = profile_arg(&inst, profile.as_deref())?;
            let report = diagonalize(&inst, &start, &diag.options())?;
            let check = verify_nash(&inst, &report.profile)?;
            let cleared = clear_market(&inst, &report.profile)?;
            let value = json!({
                "options": diag.options(),
                "report": report,
                "nash": check,
                "social_cost": cleared.social_cost,
                "price": cleared.price,
                "allocations": cleared.allocations,
            });
            print_json(out, &value)?;
            if let Some(dir) = dir {
                std::fs::create_dir_all(dir)?;
                let mut text = serde_json::to_string_pretty(&value)
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                text.push('\n');
                std::fs::write(dir.join("equilibrium.json"), text)?;
            }
            if report.converged {
                Ok(())
            } else {
                Err(CliError::Failed(format!(
                    "diagonalization did not converge within {} sweeps",
                    report.iterations
                )))
            }
        }
        Command::Simulate {
            instance,
            case,
            run,
        } => {
            let inst = load(instance)?;
            let outcome = run_case(&inst, &run.config(*case))?;
            let path = instance.path.display().to_string();
            if let Some(dir) = &run.out {
                report::write_reports(&outcome, &path, dir)?;
            }
            print_json(out, &report::case_summary(&outcome, &path))
        }
        Command::Report { instance, run } => {
            let inst = load(instance)?;
            let all = run_all_cases(&inst, &run.config(CaseId::A))?;
            let path = instance.path.display().to_string();
            if let Some(dir) = &run.out {
                report::write_all_reports(&all, &path, dir)?;
            }
            write!(out, "{}", report::table_text(&all.table))?;
            Ok(())
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
