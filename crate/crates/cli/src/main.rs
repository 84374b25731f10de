use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use ostrogruss::harness::{verify, VerifyConfig};
use ostrogruss::{
    emit_report, evaluate_case, run_sweep, search_counterexamples, EvalCase, Interval,
    ReportFormat, SearchConfig, SweepConfig, Target, Tolerances,
};

const EXIT_FATAL: u8 = 2;
const EXIT_CONFIG: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Check Ostrowski–Grüss type bounds against a quadrature oracle.
#[derive(Debug, Parser)]
#[command(name = "ostrogruss", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the relations that must hold for every input; exits 2 on failure.
    Verify(VerifyArgs),
    /// Evaluate every function × interval × x case and write a report.
    Sweep(SweepArgs),
    /// Randomly search for failures of the published constants.
    Search(SearchArgs),
    /// Print the report for a single case as JSON.
    Case(CaseArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    /// Random exact-envelope cases on top of the default sweep.
    #[arg(long, default_value_t = VerifyConfig::default().random_cases)]
    random_cases: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated function ids; all by default.
    #[arg(long, value_delimiter = ',')]
    fns: Vec<String>,
    /// Comma-separated `a:b` intervals.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair, allow_hyphen_values = true)]
    intervals: Vec<(f64, f64)>,
    #[arg(long, default_value_t = ostrogruss::harness::DEFAULT_X_COUNT)]
    xcount: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: ReportFormat,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Comma-separated targets: eq21, eq22, eq212, stated_form, paper_sup_constant.
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    fns: Vec<String>,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    a_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    width_range: Option<(f64, f64)>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: ReportFormat,
}

#[derive(Debug, Args)]
struct CaseArgs {
    #[arg(long = "fn")]
    func: String,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    x: f64,
}

fn parse_number(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite decimal number")),
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("`{s}` is not of the form lo:hi"))?;
    Ok((parse_number(lo)?, parse_number(hi)?))
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: ostrogruss::Error| e.to_string())
}

fn run(cli: Cli) -> ostrogruss::Result<u8> {
    match cli.command {
        Command::Verify(args) => {
            let cfg = VerifyConfig {
                seed: args.seed,
                random_cases: args.random_cases,
                ..VerifyConfig::default()
            };
            let outcomes = verify(&cfg)?;
            let mut clean = true;
            for o in &outcomes {
                let status = if o.passed() { "ok  " } else { "FAIL" };
                println!("{status} {} ({} checked, {} failed)", o.name, o.checked, o.failures);
                if let Some(ex) = &o.example {
                    println!("     first failure: {ex}");
                }
                clean &= o.passed();
            }
            Ok(if clean { 0 } else { EXIT_FATAL })
        }
        Command::Sweep(args) => {
            let mut cfg = SweepConfig::default();
            if !args.fns.is_empty() {
                cfg.fns = args.fns;
            }
            if !args.intervals.is_empty() {
                cfg.intervals = args
                    .intervals
                    .iter()
                    .map(|&(a, b)| Interval::new(a, b))
                    .collect::<ostrogruss::Result<_>>()?;
            }
            cfg.x_count = args.xcount;
            let report = run_sweep(&cfg)?;
            emit_report(&report, args.format, &args.out)?;
            eprintln!(
                "{} cases, {} fatal, {} findings -> {}",
                report.cases.len(),
                report.fatal_count,
                report.finding_count,
                args.out.display()
            );
            Ok(0)
        }
        Command::Search(args) => {
            let mut cfg = SearchConfig {
                seed: args.seed,
                n_trials: args.trials,
                ..SearchConfig::default()
            };
            if !args.targets.is_empty() {
                cfg.targets = args
                    .targets
                    .iter()
                    .map(|t| t.parse::<Target>())
                    .collect::<ostrogruss::Result<_>>()?;
            }
            if !args.fns.is_empty() {
                cfg.fns = args.fns;
            }
            if let Some(r) = args.a_range {
                cfg.a_range = r;
            }
            if let Some(r) = args.width_range {
                cfg.width_range = r;
            }
            let report = search_counterexamples(&cfg)?;
            emit_report(&report, args.format, &args.out)?;
            if let Some(s) = &report.search {
                eprintln!(
                    "{} trials, {} rejected, {} findings -> {}",
                    s.trials,
                    s.rejected,
                    s.findings.len(),
                    args.out.display()
                );
            }
            Ok(0)
        }
        Command::Case(args) => {
            let case = EvalCase::from_id(&args.func, args.a, args.b, args.x)?;
            let report = evaluate_case(&case, 0, &Tolerances::default());
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| ostrogruss::Error::Serialize(e.to_string()))?;
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = writeln!(std::io::stdout().lock(), "{json}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
