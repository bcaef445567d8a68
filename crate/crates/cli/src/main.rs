use clap::{Args, Parser, Subcommand};
use polarmap::config::{parse_grid, parse_validators, RunConfig};
use polarmap::exit;
use polarmap::mesh::{build_mesh, write_ply};
use polarmap::report::render;
use polarmap::validate;
use polarmap_core::gallery::registry;
use serde_json::Value;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "polarmap",
    version,
    about = "Minimal hypersurfaces with vanishing Gauss-Kronecker curvature"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List presets, optionally filtered by name or space.
    List { filter: Option<String> },
    /// Run validators and print a JSON report.
    Validate {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated subset of curvature,structure,ruling,locus,regularity.
        #[arg(long)]
        validators: Option<String>,
        /// Run every validator (the default).
        #[arg(long, conflicts_with = "validators")]
        all: bool,
        /// Replaces every bound.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Export the sampled hypersurface as ascii PLY.
    Mesh {
        #[command(flatten)]
        run: RunArgs,
        /// Stereographic projection of S^4 from -e5 into R^4.
        #[arg(long)]
        stereo: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    example: String,
    /// JSON object of preset parameters.
    #[arg(long)]
    params: Option<PathBuf>,
    /// NZ,NT.
    #[arg(long, default_value = "16,8")]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn fail(code: i32, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("polarmap: {msg}");
    ExitCode::from(code as u8)
}

fn config(run: &RunArgs) -> Result<RunConfig, ExitCode> {
    let mut c = RunConfig::new(&run.example);
    c.grid = parse_grid(&run.grid).map_err(|e| fail(exit::BAD_CONFIG, e))?;
    c.out = run.out.clone();
    if let Some(p) = &run.params {
        let text = std::fs::read_to_string(p)
            .map_err(|e| fail(exit::BAD_CONFIG, format!("{}: {e}", p.display())))?;
        c.params = serde_json::from_str::<Value>(&text)
            .map_err(|e| fail(exit::BAD_CONFIG, format!("{}: {e}", p.display())))?;
    }
    Ok(c)
}

fn emit(out: &Option<PathBuf>, body: &[u8]) -> Result<(), ExitCode> {
    let res = match out {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(body).map_err(|e| e.to_string()),
    };
    res.map_err(|e| fail(exit::IO, e))
}

fn threads() -> Result<Option<usize>, ExitCode> {
    match std::env::var("POLARMAP_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(fail(
                exit::BAD_CONFIG,
                format!("POLARMAP_THREADS={s:?} is not a positive integer"),
            )),
        },
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::List { filter } => {
            let mut text = String::new();
            for p in registry::list(filter.as_deref()) {
                text.push_str(&format!(
                    "{} [{}, {}]: {}\n",
                    p.name, p.space, p.construction, p.identity
                ));
                for q in p.params {
                    text.push_str(&format!(
                        "    {}: {} (default {})\n",
                        q.name, q.kind, q.default
                    ));
                }
            }
            emit(&None, text.as_bytes())?;
            Ok(ExitCode::from(exit::OK as u8))
        }
        Command::Validate {
            run,
            validators,
            all: _,
            tol,
        } => {
            let mut c = config(&run)?;
            c.tol = tol;
            if let Some(v) = validators {
                c.validators = parse_validators(&v).map_err(|e| fail(exit::BAD_CONFIG, e))?;
            }
            let report = validate::run(&c).map_err(|e| fail(exit::BAD_CONFIG, e))?;
            emit(&c.out, render(&report.to_json()).as_bytes())?;
            let code = if report.pass() {
                exit::OK
            } else {
                exit::VALIDATION_FAILED
            };
            Ok(ExitCode::from(code as u8))
        }
        Command::Mesh { run, stereo } => {
            let mut c = config(&run)?;
            c.stereo = stereo;
            let ex = validate::build(&c).map_err(|e| fail(exit::BAD_CONFIG, e))?;
            let mesh = build_mesh(&ex, c.grid, c.stereo);
            let mut buf = Vec::new();
            write_ply(&mesh, &mut buf).map_err(|e| fail(exit::IO, e))?;
            emit(&c.out, &buf)?;
            Ok(ExitCode::from(exit::OK as u8))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let n = match threads() {
        Ok(n) => n,
        Err(code) => return code,
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(n.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => return fail(exit::BAD_CONFIG, e),
    };
    pool.install(|| run(cli).unwrap_or_else(|code| code))
}
