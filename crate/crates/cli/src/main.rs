use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use alexheat::catalog::{parse_initial_spec, parse_space, CatalogEntry};
use alexheat::driver::{parse_t_list, run_converge, run_eulerian, run_evolve, run_norm, run_probe, Grid, RunIssues, Table};
use alexheat::primitives::Params;
use alexheat::uniqueness::default_t_grid;
use alexheat::verify::{check_ids, run_all, run_check, CheckReport};
use alexheat::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Heat-equation evolution of distributional initial data.
#[derive(Parser)]
#[command(name = "alexheat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate u(x, t) on an x grid, one column per t.
    Evolve(EvolveArgs),
    /// Norm of the data and of u_t.
    Norm(NormArgs),
    /// ‖u_t − f‖ along a sequence of times.
    Converge(NormArgs),
    /// Run verification checks; exit status 1 if any fails.
    Verify(VerifyArgs),
    /// Table of Eulerian numbers A(n, l).
    Eulerian(EulerianArgs),
    /// Boundedness probe of the evolution of the initial data.
    Probe(ProbeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct DataArgs {
    /// Initial data: key[:p=v,...] or csv:<path>, with optional order=n and space=....
    #[arg(long)]
    initial: String,
    /// Space: alex, alexn or weighted:tau=<v>; overrides the entry's default.
    #[arg(long)]
    space: Option<String>,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Comma-separated times.
    #[arg(long)]
    t: String,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 101)]
    samples: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct NormArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Comma-separated times.
    #[arg(long)]
    t: Option<String>,
    /// Weight parameter σ for weighted data (default τ/2).
    #[arg(long)]
    sigma: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check id; see --list.
    check: Option<String>,
    /// Run every check.
    #[arg(long)]
    all: bool,
    /// List check ids.
    #[arg(long)]
    list: bool,
    /// Check parameter name=value, repeatable.
    #[arg(long = "param")]
    params: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EulerianArgs {
    /// Largest n.
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Comma-separated times (default 10^-3, 10^-2.5, ..., 1).
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Centre of the ψ_y averages.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    x0: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownKey(_)
            | Error::InvalidParameter(_)
            | Error::Samples(_)
            | Error::Io(_)
            | Error::Unsupported(_)
            | Error::OutOfValidity(_) => Failure::Config(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load(d: &DataArgs) -> Result<CatalogEntry, Failure> {
    if !(d.tol > 0.0 && d.tol < 1.0) {
        return Err(Failure::Config(format!("--tol must lie in (0, 1), got {}", d.tol)));
    }
    let space = d.space.as_deref().map(parse_space).transpose()?;
    Ok(parse_initial_spec(&d.initial, space)?)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json(out: &Option<PathBuf>, v: &serde_json::Value) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| Failure::Run(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn emit_table(o: &OutArgs, table: &Table) -> Result<(), Failure> {
    match o.format {
        Format::Csv => {
            let mut w = sink(&o.out)?;
            table.write_csv(&mut w)?;
            w.flush()?;
            Ok(())
        }
        Format::Json => emit_json(&o.out, &table.to_json()),
    }
}

fn report_issues(issues: &RunIssues) -> bool {
    for (t, msg) in &issues.0 {
        eprintln!("t = {t}: {msg}");
    }
    issues.0.is_empty()
}

fn parse_params(items: &[String]) -> Result<Params, Failure> {
    let mut p = Params::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::Config(format!("malformed --param `{item}`, expected name=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Failure::Config(format!("malformed value in --param `{item}`")))?;
        p.set(k.trim(), v);
    }
    Ok(p)
}

fn verify(a: &VerifyArgs) -> Result<bool, Failure> {
    if a.list {
        let mut w = sink(&a.out)?;
        for (id, about) in check_ids() {
            writeln!(w, "{id:18} {about}")?;
        }
        w.flush()?;
        return Ok(true);
    }
    let reports: Vec<CheckReport> = match (&a.check, a.all) {
        (None, true) => {
            if !a.params.is_empty() {
                return Err(Failure::Config("--param applies to a single check".into()));
            }
            run_all()?.into_values().flatten().collect()
        }
        (Some(id), false) => run_check(id, &parse_params(&a.params)?)?,
        _ => return Err(Failure::Config("give exactly one of a check id or --all".into())),
    };
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        eprintln!("{} {}", if r.pass { "pass" } else { "FAIL" }, r.check);
    }
    let v = serde_json::to_value(&reports).map_err(|e| Failure::Run(e.to_string()))?;
    emit_json(&a.out, &v)?;
    Ok(pass)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Evolve(a) => {
            let e = load(&a.data)?;
            let ts = parse_t_list(&a.t)?;
            let grid = Grid::new(a.x_min, a.x_max, a.samples)?;
            let (table, issues) = run_evolve(&e, &ts, &grid, a.data.tol)?;
            emit_table(&a.out, &table)?;
            Ok(report_issues(&issues))
        }
        Command::Norm(a) => {
            let e = load(&a.data)?;
            let ts = a.t.as_deref().map(parse_t_list).transpose()?.unwrap_or_default();
            let (table, issues) = run_norm(&e, &ts, a.sigma, a.data.tol)?;
            emit_table(&a.out, &table)?;
            Ok(report_issues(&issues))
        }
        Command::Converge(a) => {
            let e = load(&a.data)?;
            let ts = match a.t.as_deref() {
                Some(s) => parse_t_list(s)?,
                None => vec![1e-4, 1e-3, 1e-2, 1e-1],
            };
            let (table, issues) = run_converge(&e, &ts, a.sigma, a.data.tol)?;
            emit_table(&a.out, &table)?;
            Ok(report_issues(&issues))
        }
        Command::Verify(a) => verify(&a),
        Command::Eulerian(a) => {
            emit_table(&a.out, &run_eulerian(a.n)?)?;
            Ok(true)
        }
        Command::Probe(a) => {
            let e = load(&a.data)?;
            let ts = match a.t.as_deref() {
                Some(s) => parse_t_list(s)?,
                None => default_t_grid(),
            };
            let r = run_probe(&e, &ts, a.sigma, a.rho, a.x0, a.data.tol)?;
            let v = serde_json::to_value(&r).map_err(|e| Failure::Run(e.to_string()))?;
            emit_json(&a.out, &v)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
