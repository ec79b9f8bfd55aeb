use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use gnsfd::fracweights::SignConvention;
use gnsfd::harness::{self, ConfigDoc, ConfigError, Execution, ModeName, RunConfig};
use gnsfd::solver::{SolveError, Solver};
use serde_json::json;

#[derive(Parser)]
#[command(name = "gnsfd", version, about = "Meshless non-standard finite difference solver for 1-D fractional PDEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem in a config file (or a builtin name) and write CSV reports.
    Run {
        config: String,
        #[command(flatten)]
        common: Common,
        /// Also write diagnostics.csv.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Solve one of the builtin examples.
    Example {
        #[arg(value_parser = ["1", "2"])]
        number: String,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        diagnostics: bool,
    },
    /// Dump the integer and fractional stencil weights.
    Weights {
        config: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run with convergence diagnostics and write only diagnostics.csv.
    Check {
        config: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// standard, nsfd-fixed or nsfd-optimized
    #[arg(long)]
    mode: Option<ModeName>,
    /// Output directory (default: the config's output_dir, else out/<name>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sign of the correction term in the second fractional basis function.
    #[arg(long, value_parser = parse_sign)]
    sign_convention: Option<SignConvention>,
    /// Worker threads for the per-node search.
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_sign(s: &str) -> Result<SignConvention, String> {
    match s {
        "default" | "corrected" => Ok(SignConvention::Corrected),
        "printed" => Ok(SignConvention::Printed),
        other => Err(format!("expected default or printed, got {other:?}")),
    }
}

/// Failures, mapped to an exit code and a one-line JSON error.
enum Failure {
    Config(anyhow::Error),
    Solve { error: SolveError, written: Vec<PathBuf> },
    Io(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.into())
    }
}

fn load(source: &str) -> Result<(ConfigDoc, String), ConfigError> {
    let path = Path::new(source);
    if !path.exists() && harness::builtin_doc(source).is_ok() {
        return Ok((harness::builtin_doc(source)?, source.to_owned()));
    }
    let doc = harness::load_doc(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    Ok((doc, name))
}

fn resolve(mut doc: ConfigDoc, common: &Common) -> Result<RunConfig, ConfigError> {
    if let Some(mode) = common.mode {
        doc.mode = Some(mode);
    }
    if let Some(sign) = common.sign_convention {
        doc.sign_convention = Some(sign);
    }
    if let Some(n) = common.threads {
        doc.threads = Some(n);
    }
    doc.resolve()
}

fn out_dir(cfg: &RunConfig, common: &Common, name: &str) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| Path::new("out").join(name))
}

fn solve(source: &str, common: &Common, diagnostics: bool) -> Result<(), Failure> {
    let (doc, name) = load(source)?;
    let cfg = resolve(doc, common)?;
    let dir = out_dir(&cfg, common, &name);
    let run = harness::execute(&cfg, diagnostics).map_err(|error| Failure::Solve {
        error,
        written: Vec::new(),
    })?;
    let written = harness::emit_report(&cfg, &run, &dir)
        .with_context(|| format!("writing reports to {}", dir.display()))
        .map_err(Failure::Io)?;
    print_summary(&cfg, &run);
    for p in &written {
        println!("wrote {}", p.display());
    }
    match run.error {
        None => Ok(()),
        Some(error) => Err(Failure::Solve { error, written }),
    }
}

fn print_summary(cfg: &RunConfig, run: &Execution) {
    let p = &cfg.problem;
    println!(
        "mode {}, sign convention {}, {} nodes, star size {}, dt {}",
        p.mode.name(),
        p.sign.as_str(),
        p.nodes.len(),
        p.star_size.min(p.nodes.len() - 1),
        p.dt
    );
    println!(
        "{}/{} steps in {:.3} s",
        run.output.report.steps_completed,
        run.n_steps,
        run.wall_time.as_secs_f64()
    );
    println!("{:>8}  {:>24}", "t", "max_error");
    for row in &run.output.report.summary {
        match row.max_error {
            Some(e) => println!("{:>8}  {:>24.6e}", row.t, e),
            None => println!("{:>8}  {:>24}", row.t, "-"),
        }
    }
}

fn weights(source: &str, common: &Common) -> Result<(), Failure> {
    let (doc, name) = load(source)?;
    let cfg = resolve(doc, common)?;
    let dir = out_dir(&cfg, common, &name);
    let solver = Solver::new(cfg.problem.clone()).map_err(|error| Failure::Solve {
        error,
        written: Vec::new(),
    })?;
    let written = harness::emit_weights(&solver, &dir)
        .with_context(|| format!("writing weights to {}", dir.display()))
        .map_err(Failure::Io)?;
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn check(source: &str, common: &Common) -> Result<(), Failure> {
    let (doc, name) = load(source)?;
    let cfg = resolve(doc, common)?;
    let dir = out_dir(&cfg, common, &name);
    let run = harness::execute(&cfg, true).map_err(|error| Failure::Solve {
        error,
        written: Vec::new(),
    })?;
    let diags = &run.output.diagnostics;
    let path = harness::emit_diagnostics(diags, &dir)
        .with_context(|| format!("writing diagnostics to {}", dir.display()))
        .map_err(Failure::Io)?;
    let ok: Vec<_> = diags.iter().filter_map(|d| d.as_ref().ok()).collect();
    let count = |f: &dyn Fn(&&gnsfd::diagnostics::ConvergenceRecord) -> bool| ok.iter().filter(|r| f(r)).count();
    println!("{} node-steps evaluated, {} gaps", ok.len(), diags.len() - ok.len());
    println!("condition 1 holds at {}", count(&|r| r.cond1));
    println!("condition 2 holds at {}", count(&|r| r.cond2));
    println!("both hold at {}", count(&|r| r.cond1 && r.cond2));
    println!("some grid choice satisfies both at {}", count(&|r| r.any_triple_ok));
    println!("wrote {}", path.display());
    match run.error {
        None => Ok(()),
        Some(error) => Err(Failure::Solve {
            error,
            written: vec![path],
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            config,
            common,
            diagnostics,
        } => solve(config, common, *diagnostics),
        Command::Example {
            number,
            common,
            diagnostics,
        } => solve(&format!("example{number}"), common, *diagnostics),
        Command::Weights { config, common } => weights(config, common),
        Command::Check { config, common } => check(config, common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (code, line) = match failure {
                Failure::Config(e) => (1, json!({ "error": "config", "message": format!("{e:#}") })),
                Failure::Io(e) => (1, json!({ "error": "io", "message": format!("{e:#}") })),
                Failure::Solve { error, written } => {
                    let kind = match error {
                        SolveError::BlowUp { .. } => "blow-up",
                        _ => "solve",
                    };
                    (
                        2,
                        json!({
                            "error": kind,
                            "message": error.to_string(),
                            "partial_output": written,
                        }),
                    )
                }
            };
            eprintln!("{line}");
            ExitCode::from(code)
        }
    }
}
