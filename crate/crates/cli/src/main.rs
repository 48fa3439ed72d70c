//! `qkzb`: evaluate elliptic special functions, verify the identities they
//! satisfy and dump λ-grids.
//!
//! Every run prints one JSON report on stdout. Exit codes: 0 pass, 1 failed
//! verification, 2 usage error, 3 numerical error.

mod commands;
mod literal;
mod report;

use clap::{Args, Parser, Subcommand};
use commands::{EvalCmd, VerifyCmd};
use qkzb::{Tolerance, C64};
use report::RunReport;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "qkzb",
    version,
    about = "Elliptic special functions and qKZB identity checks"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Absolute and relative accuracy requested from every numerical routine.
    #[arg(long, global = true, value_parser = literal::parse_positive)]
    tol: Option<f64>,
    /// Also write the result to this file: CSV for `grid`, JSON otherwise.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// For `grid`: print CSV on stdout instead of the JSON report.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a function at one point.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Check an identity and compare the residual with a threshold.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Evaluate a function on an evenly spaced λ-segment.
    Grid(GridArgs),
}

#[derive(Args, Debug)]
struct GridArgs {
    #[command(subcommand)]
    target: EvalCmd,
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = literal::parse_complex)]
    lambda_from: Option<C64>,
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = literal::parse_complex)]
    lambda_to: Option<C64>,
    /// Number of grid points, at least 2.
    #[arg(long, global = true)]
    n: Option<usize>,
}

/// A failure before any numerics ran.
struct Usage(String);

fn tolerance(global: &GlobalOpts) -> Result<Tolerance, Usage> {
    let mut tol = Tolerance::default();
    if let Some(t) = global.tol {
        tol = Tolerance::new(t, t, tol.max_evals).map_err(|e| Usage(e.to_string()))?;
    }
    if let Ok(v) = std::env::var("QKZB_MAX_EVALS") {
        let n: usize = v
            .parse()
            .map_err(|_| Usage(format!("QKZB_MAX_EVALS='{v}' is not a positive integer")))?;
        tol = Tolerance::new(tol.abs_tol, tol.rel_tol, n).map_err(|e| Usage(e.to_string()))?;
    }
    Ok(tol)
}

fn grid_points(g: &GridArgs) -> Result<Vec<C64>, Usage> {
    let (Some(a), Some(b), Some(n)) = (g.lambda_from, g.lambda_to, g.n) else {
        return Err(Usage(
            "grid needs --lambda-from, --lambda-to and --n".into(),
        ));
    };
    if n < 2 {
        return Err(Usage(format!("--n must be at least 2, got {n}")));
    }
    Ok((0..n)
        .map(|k| a + (b - a) * (k as f64 / (n - 1) as f64))
        .collect())
}

fn csv(points: &[(C64, C64)]) -> String {
    let mut s = String::from("re_lambda,im_lambda,re_v,im_v\n");
    for (l, v) in points {
        s.push_str(&format!("{:e},{:e},{:e},{:e}\n", l.re, l.im, v.re, v.im));
    }
    s
}

fn run(cli: Cli) -> Result<(RunReport, Option<String>, u8), Usage> {
    let tol = tolerance(&cli.global)?;
    let start = Instant::now();
    let (mut report, csv_text) = match &cli.command {
        Command::Eval(cmd) => (commands::eval(cmd, &tol)?, None),
        Command::Verify(cmd) => (commands::verify(cmd, &tol)?, None),
        Command::Grid(g) => {
            let pts = grid_points(g)?;
            let (report, values) = commands::grid(&g.target, &pts, &tol)?;
            let text = csv(&values);
            (report, Some(text))
        }
    };
    report.wall_time_ms = start.elapsed().as_millis();
    let code = if report.error.is_some() {
        3
    } else if report.pass {
        0
    } else {
        1
    };
    Ok((report, csv_text, code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("usage error");
            eprintln!("{}", line.trim());
            return ExitCode::from(2);
        }
    };
    let global = cli.global.clone();
    let is_grid = matches!(cli.command, Command::Grid(_));
    let (report, csv_text, code) = match run(cli) {
        Ok(r) => r,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let json = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    match (is_grid && global.csv, &csv_text) {
        (true, Some(text)) => print!("{text}"),
        _ => println!("{json}"),
    }
    if let Some(path) = &global.out {
        let body = match &csv_text {
            Some(text) => text.clone(),
            None => format!("{json}\n"),
        };
        if let Err(e) = std::fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
