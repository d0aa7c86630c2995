use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use betaineq::harness::{
    compare_bounds, default_x_grid, emit_figure_data, evaluate_with_oracle, verify_with,
    write_comparison_csv, Execution, FigureId, GridSpec, HarnessError,
};
use betaineq::special::golden::freeze_to_path;
use betaineq::{BoundEval, BoundId, Direction, Family};
use clap::{Args, Parser, Subcommand};

const EXIT_VIOLATION: u8 = 1;
const EXIT_INFRA: u8 = 2;
const EXIT_USAGE: u8 = 3;

/// Verify, compare and tabulate bounds on Beta and Gamma distribution
/// functions.
#[derive(Debug, Parser)]
#[command(name = "betaineq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the oracle and one or all bounds at a point.
    Eval(EvalArgs),
    /// Check every bound against its oracle on a grid.
    Verify(VerifyArgs),
    /// Tabulate every bound of a family next to its oracle as CSV.
    Compare(CompareArgs),
    /// Write the data behind a figure as CSV.
    Figure(FigureArgs),
    /// Regenerate the frozen oracle table.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct EvalArgs {
    #[arg(long)]
    a: f64,
    /// Second shape; not needed for the gamma bounds.
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    x: f64,
    /// A single bound, e.g. `q3` or `kl-right`.
    #[arg(long, conflicts_with = "all")]
    bound: Option<BoundId>,
    /// Every bound that applies at the point (the default).
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Grid file with `a = ...`, `b = ...`, `resolution = n` lines.
    #[arg(long, conflicts_with = "default_grid")]
    grid_file: Option<PathBuf>,
    /// Use the built-in grid (the default).
    #[arg(long)]
    default_grid: bool,
    /// Relative slack before a deviation counts as a violation.
    #[arg(long)]
    slack: Option<f64>,
    /// Also write the full report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Worker threads; 0 runs serially.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CompareArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[arg(long)]
    id: FigureId,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Where to write the table.
    #[arg(long, value_name = "PATH")]
    freeze: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Eval(args) => eval(args),
        Command::Verify(args) => verify(args),
        Command::Compare(args) => compare(args),
        Command::Figure(args) => emit_figure_data(args.id, &args.out).map(|()| 0),
        Command::Oracle(args) => match freeze_to_path(&args.freeze) {
            Ok(n) => {
                println!("wrote {n} records to {}", args.freeze.display());
                Ok(0)
            }
            Err(e) => {
                eprintln!("error: {e}");
                Ok(EXIT_INFRA)
            }
        },
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

/// Bad user input is a usage error; anything else is infrastructure.
fn error_code(e: &HarnessError) -> u8 {
    use betaineq::Error;
    match e {
        HarnessError::GridParse { .. }
        | HarnessError::InvalidGrid(_)
        | HarnessError::MissingParam(_) => EXIT_USAGE,
        HarnessError::Core(
            Error::InvalidParams { .. } | Error::Domain { .. } | Error::UnsupportedBound(_),
        ) => EXIT_USAGE,
        _ => EXIT_INFRA,
    }
}

fn eval(args: EvalArgs) -> Result<u8, HarnessError> {
    let ids: Vec<BoundId> = match args.bound {
        Some(id) => vec![id],
        None => BoundId::ALL
            .iter()
            .copied()
            .filter(|id| args.b.is_some() || id.family() == Family::Gamma)
            .filter(|id| id.family() == Family::Gamma || (0.0..1.0).contains(&args.x))
            .collect(),
    };
    let _ = args.all;
    let evals = ids
        .into_iter()
        .map(|id| Ok((id, evaluate_with_oracle(id, args.a, args.b, args.x)?)))
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let mut out = io::stdout().lock();
    let _ = writeln!(
        out,
        "{:<22} {:<9} {:>24} {:>24} {:>13}  status",
        "bound", "direction", "bound value", "oracle", "ratio-1"
    );
    let mut violated = false;
    for (id, (e, ln_t)) in evals {
        let status = status(&e, ln_t);
        violated |= status == "VIOLATED";
        let ratio = if e.is_active() {
            format!("{:.3e}", (e.ln() - ln_t).exp_m1())
        } else {
            "-".to_string()
        };
        let _ = writeln!(
            out,
            "{:<22} {:<9} {:>24e} {:>24e} {:>13}  {}",
            id.name(),
            e.direction.to_string(),
            e.value(),
            ln_t.exp(),
            ratio,
            status
        );
    }
    Ok(if violated { EXIT_VIOLATION } else { 0 })
}

fn status(e: &BoundEval, ln_t: f64) -> &'static str {
    if !e.is_active() {
        return "n/a";
    }
    let r = (e.ln() - ln_t).exp_m1();
    let tol = 1e-9;
    let ok = match e.direction {
        Direction::Upper => r >= -tol,
        Direction::Lower => r <= tol,
        Direction::Equality => r.abs() <= tol,
        Direction::NotApplicable => true,
    };
    if ok || r.is_nan() {
        "ok"
    } else {
        "VIOLATED"
    }
}

fn verify(args: VerifyArgs) -> Result<u8, HarnessError> {
    let mut grid = match &args.grid_file {
        Some(path) => GridSpec::from_file(path)?,
        None => GridSpec::default(),
    };
    let _ = args.default_grid;
    if let Some(s) = args.slack {
        grid.slack = s;
    }
    let exec = match args.threads {
        Some(0) => Execution::Serial,
        n => Execution::Parallel(n),
    };
    let report = verify_with(&grid, exec)?;
    print!("{}", report.render_table());
    if let Some(path) = &args.report {
        let json = report.to_json()?;
        std::fs::write(path, json).map_err(|source| HarnessError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(report.outcome.exit_code() as u8)
}

fn compare(args: CompareArgs) -> Result<u8, HarnessError> {
    let xs = default_x_grid(args.family, args.a);
    let c = compare_bounds(args.family, args.a, args.b, &xs)?;
    for (name, v) in &c.notes {
        eprintln!("{name} = {v:.4}");
    }
    match &args.out {
        Some(path) => write_comparison_csv(&c, path)?,
        None => c
            .write_csv(io::stdout().lock())
            .map_err(|source| HarnessError::Csv {
                path: "<stdout>".into(),
                source,
            })?,
    }
    Ok(0)
}
