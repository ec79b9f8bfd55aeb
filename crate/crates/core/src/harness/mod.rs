//! Configuration files, the two builtin problems, and CSV/JSON output.

mod config;
mod emit;

use std::time::{Duration, Instant};

pub use config::{
    builtin, builtin_doc, load_config, load_doc, ConfigDoc, ConfigError, DenominatorDoc, FamilyDoc, FixedChoice,
    GridDoc, MeshDoc, ModeName, ProblemDoc, RunConfig, UniformMesh, DEFAULT_STAR_SIZE,
};
pub use emit::{emit_diagnostics, emit_report, emit_weights, format_num};

use crate::solver::{RunOptions, RunOutput, SolveError, Solver};

/// The 17-node irregular mesh on [0, 1] used by both builtins.
pub const EXAMPLE_MESH: [f64; 17] = [
    0.0, 0.045, 0.11, 0.185, 0.24, 0.304, 0.357, 0.401, 0.45, 0.515, 0.615, 0.647, 0.75, 0.81, 0.849, 0.915, 1.0,
];

/// A finished or aborted run.
#[derive(Debug, Clone)]
pub struct Execution {
    pub output: RunOutput,
    /// Set when the run stopped early; `output` then holds the steps before it.
    pub error: Option<SolveError>,
    pub wall_time: Duration,
    pub n_steps: usize,
}

impl Execution {
    pub fn completed(&self) -> bool {
        self.error.is_none()
    }
}

/// Runs `cfg`, on `cfg.threads` workers when the `parallel` feature is on.
/// Errors that happen before the first level exists are returned directly.
pub fn execute(cfg: &RunConfig, diagnostics: bool) -> Result<Execution, SolveError> {
    let start = Instant::now();
    let solver = Solver::new(cfg.problem.clone())?;
    let opts = RunOptions {
        checkpoints: cfg.checkpoints.clone(),
        diagnostics,
    };
    let result = with_threads(cfg.threads, || solver.run(&opts))?;
    let (output, error) = match result {
        Ok(out) => (out, None),
        Err(e) => match e.partial {
            Some(partial) => (*partial, Some(e.cause)),
            None => return Err(e.cause),
        },
    };
    Ok(Execution {
        output,
        error,
        wall_time: start.elapsed(),
        n_steps: solver.n_steps(),
    })
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, SolveError> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| SolveError::Invalid(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, SolveError> {
    Ok(f())
}
