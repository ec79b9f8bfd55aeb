//! Explicit time stepping in standard and non-standard form, including the
//! per-node exhaustive search over combined denominator functions.
//!
//! Every interior node is updated as `U₀ⁿ⁺¹ = U₀ⁿ + φ·R₀ⁿ` where
//!
//! ```text
//! R₀ⁿ = f₁·∂ₓU + f₂·∂ₓₓU + g·D^β U + h
//! ```
//!
//! with all coefficients evaluated at `(tₙ, x₀, U₀ⁿ)` and every derivative
//! reconstructed from level-`n` values only. Standard stepping uses `φ = Δt`.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::denoms::{phi_combined, Candidate, DenomError, DenominatorSpec};
use crate::diagnostics::{self, NodeDiagnostic};
use crate::expr::{EvalError, Expr, Var};
use crate::fracweights::{build_caputo_weights, FracOrder, FractionalWeights, SignConvention};
use crate::intweights::{build_integer_weights, IntegerWeights, StencilError};
use crate::mesh::{build_star, weights_for, MeshError, NodeSet, WeightScheme};
use crate::report::ErrorReport;

/// Any value above this magnitude aborts the run.
pub const BLOW_UP_LIMIT: f64 = 1e12;

/// Tolerance for checkpoint and final times to count as multiples of Δt.
pub const TIME_TOLERANCE: f64 = 1e-12;

/// Which fractional stencil output feeds the `g` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractionalSlot {
    /// `α = β`, estimate from `Λ_{·,1}`.
    First,
    /// `α = β/2`, estimate from `Λ_{·,2}`.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalTerm {
    pub order: f64,
    pub slot: FractionalSlot,
}

impl FractionalTerm {
    /// Picks slot 1 for `β ≤ 1` and slot 2 otherwise.
    pub fn auto(order: f64) -> Self {
        let slot = if order <= 1.0 {
            FractionalSlot::First
        } else {
            FractionalSlot::Second
        };
        FractionalTerm { order, slot }
    }

    pub fn stencil_alpha(&self) -> f64 {
        match self.slot {
            FractionalSlot::First => self.order,
            FractionalSlot::Second => 0.5 * self.order,
        }
    }

    /// 0 for slot 1, 1 for slot 2.
    pub fn slot_index(&self) -> usize {
        match self.slot {
            FractionalSlot::First => 0,
            FractionalSlot::Second => 1,
        }
    }
}

/// `u_t = f₁ u_x + f₂ u_xx + g D^β u + h` with coefficients in `(t, x, u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub f1: Expr,
    pub f2: Expr,
    pub g: Expr,
    pub h: Expr,
    pub fractional: Option<FractionalTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreMode {
    /// Distance to the exact solution at the next level.
    #[default]
    Exact,
    /// Change in the update when coefficients are re-evaluated at the candidate.
    Residual,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeMode {
    Standard,
    Fixed {
        spec: DenominatorSpec,
        alpha: f64,
        p1: f64,
        p2: f64,
    },
    Optimized {
        spec: DenominatorSpec,
        score: ScoreMode,
    },
}

impl TimeMode {
    pub fn name(&self) -> &'static str {
        match self {
            TimeMode::Standard => "standard",
            TimeMode::Fixed { .. } => "nsfd-fixed",
            TimeMode::Optimized { .. } => "nsfd-optimized",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub equation: Equation,
    pub initial: Expr,
    pub left: Expr,
    pub right: Expr,
    pub exact: Option<Expr>,
    pub nodes: NodeSet,
    pub star_size: usize,
    pub weights: WeightScheme,
    pub sign: SignConvention,
    pub dt: f64,
    pub t_final: f64,
    pub mode: TimeMode,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Stencil(#[from] StencilError),
    #[error("denominator at node {node}: {source}")]
    Denominator { node: usize, source: DenomError },
    #[error(transparent)]
    Grid(#[from] DenomError),
    #[error("evaluating {what} at node {node}, t = {t}: {source}")]
    Eval {
        what: &'static str,
        node: usize,
        t: f64,
        source: EvalError,
    },
    #[error("blow-up at step {step} (t = {t}), node {node} (x = {x}): value {value}")]
    BlowUp {
        step: usize,
        t: f64,
        node: usize,
        x: f64,
        value: f64,
    },
    #[error("exact-error scoring needs an exact solution")]
    MissingExact,
    #[error("checkpoint {0} is not a multiple of dt within [0, t_final]")]
    BadCheckpoint(f64),
}

/// Solution at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub time_index: usize,
    pub t: f64,
    pub values: Vec<f64>,
    /// Denominator choice that produced each value at this level.
    pub chosen: Vec<Option<Candidate>>,
}

/// Stencils for one interior node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeStencil {
    pub node: usize,
    pub x: f64,
    pub members: Vec<usize>,
    pub integer: IntegerWeights,
    pub fractional: Option<FractionalWeights>,
}

/// Outcome of the denominator search at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeSearch {
    pub node: usize,
    pub choice: Candidate,
    pub value: f64,
    pub score: f64,
    /// Best score restricted to α = 1, if that α is in the grid.
    pub best_first_only: Option<f64>,
    /// Best score restricted to α = 0, if that α is in the grid.
    pub best_second_only: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceRow {
    pub step: usize,
    pub node: usize,
    pub combined: f64,
    pub first_only: Option<f64>,
    pub second_only: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub checkpoints: Vec<f64>,
    pub diagnostics: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: ErrorReport,
    pub final_state: SolverState,
    pub dominance: Vec<DominanceRow>,
    pub diagnostics: Vec<NodeDiagnostic>,
}

/// A failed run together with everything computed before the failure.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{cause}")]
pub struct RunError {
    pub cause: SolveError,
    pub partial: Option<Box<RunOutput>>,
}

impl From<SolveError> for RunError {
    fn from(cause: SolveError) -> Self {
        RunError { cause, partial: None }
    }
}

pub struct Solver {
    problem: ProblemSpec,
    stencils: Vec<NodeStencil>,
    n_steps: usize,
    /// Candidate grids for the regular step and, if present, a shorter last step.
    candidates: Option<(Vec<Candidate>, Option<Vec<Candidate>>)>,
}

fn check_no_u(e: &Expr, what: &str) -> Result<(), SolveError> {
    if e.uses(Var::U) {
        Err(SolveError::Invalid(format!("{what} may not depend on u")))
    } else {
        Ok(())
    }
}

impl Solver {
    pub fn new(problem: ProblemSpec) -> Result<Self, SolveError> {
        if !(problem.dt.is_finite() && problem.dt > 0.0) {
            return Err(SolveError::Invalid(format!("dt must be positive, got {}", problem.dt)));
        }
        if !(problem.t_final.is_finite() && problem.t_final >= 0.0) {
            return Err(SolveError::Invalid(format!(
                "t_final must be non-negative, got {}",
                problem.t_final
            )));
        }
        check_no_u(&problem.initial, "initial condition")?;
        check_no_u(&problem.left, "left boundary value")?;
        check_no_u(&problem.right, "right boundary value")?;
        if let Some(e) = &problem.exact {
            check_no_u(e, "exact solution")?;
        }
        problem.weights.validate()?;
        let eq = &problem.equation;
        match eq.fractional {
            Some(f) => {
                if !(f.order > 0.0 && f.order < 2.0) {
                    return Err(SolveError::Invalid(format!(
                        "fractional order must lie in (0, 2), got {}",
                        f.order
                    )));
                }
                if f.slot == FractionalSlot::First && f.order > 1.0 {
                    return Err(SolveError::Invalid(
                        "fractional orders above 1 need slot 2".into(),
                    ));
                }
            }
            None if !eq.g.is_zero() => {
                return Err(SolveError::Invalid(
                    "a non-zero g needs a fractional order".into(),
                ))
            }
            None => {}
        }

        let nodes = &problem.nodes;
        let s = problem.star_size.min(nodes.len() - 1);
        let order = eq
            .fractional
            .map(|f| FracOrder::new(f.stencil_alpha()))
            .transpose()?;
        let stencils = nodes
            .interior()
            .map(|c| {
                let star = build_star(nodes, c, s)?;
                let w = weights_for(&star, problem.weights);
                let integer = build_integer_weights(&star, &w)?;
                let fractional = order
                    .map(|o| build_caputo_weights(&star, &w, o, problem.sign))
                    .transpose()?;
                Ok(NodeStencil {
                    node: c,
                    x: star.center_x,
                    members: star.members,
                    integer,
                    fractional,
                })
            })
            .collect::<Result<Vec<_>, SolveError>>()?;

        let ratio = problem.t_final / problem.dt;
        let whole = ratio.round();
        let n_steps = if (whole * problem.dt - problem.t_final).abs()
            <= TIME_TOLERANCE * problem.t_final.max(1.0)
        {
            whole as usize
        } else {
            ratio.ceil() as usize
        };

        let mut solver = Solver {
            problem,
            stencils,
            n_steps,
            candidates: None,
        };
        match &solver.problem.mode {
            TimeMode::Standard => {}
            TimeMode::Fixed {
                spec,
                alpha,
                p1,
                p2,
            } => {
                spec.validate()?;
                for k in 0..solver.n_steps {
                    phi_combined(spec, solver.step_size(k), *alpha, *p1, *p2)?;
                }
            }
            TimeMode::Optimized { spec, score } => {
                if *score == ScoreMode::Exact && solver.problem.exact.is_none() {
                    return Err(SolveError::MissingExact);
                }
                let regular = spec.candidates(solver.problem.dt)?;
                let last = if solver.n_steps > 0 {
                    let dt_last = solver.step_size(solver.n_steps - 1);
                    (dt_last != solver.problem.dt)
                        .then(|| spec.candidates(dt_last))
                        .transpose()?
                } else {
                    None
                };
                solver.candidates = Some((regular, last));
            }
        }
        Ok(solver)
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn stencils(&self) -> &[NodeStencil] {
        &self.stencils
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Time of level `n`.
    pub fn time_at(&self, n: usize) -> f64 {
        if n >= self.n_steps {
            self.problem.t_final
        } else {
            n as f64 * self.problem.dt
        }
    }

    /// Length of the step from level `n` to `n + 1`.
    pub fn step_size(&self, n: usize) -> f64 {
        if n + 1 >= self.n_steps {
            self.time_at(n + 1) - self.time_at(n)
        } else {
            self.problem.dt
        }
    }

    /// Candidate grid used for the step leaving level `n`.
    pub fn candidates_for(&self, n: usize) -> Option<&[Candidate]> {
        self.candidates.as_ref().map(|(regular, last)| match last {
            Some(l) if n + 1 == self.n_steps => l.as_slice(),
            _ => regular.as_slice(),
        })
    }

    fn boundary(&self, t: f64, right: bool) -> Result<f64, SolveError> {
        let (expr, node, x) = if right {
            let n = self.problem.nodes.len() - 1;
            (&self.problem.right, n, self.problem.nodes.hi())
        } else {
            (&self.problem.left, 0, self.problem.nodes.lo())
        };
        expr.eval(t, x, 0.0).map_err(|source| SolveError::Eval {
            what: "boundary value",
            node,
            t,
            source,
        })
    }

    pub fn exact_at(&self, t: f64) -> Option<Result<Vec<f64>, SolveError>> {
        let exact = self.problem.exact.as_ref()?;
        Some(
            self.problem
                .nodes
                .coords()
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    exact.eval(t, x, 0.0).map_err(|source| SolveError::Eval {
                        what: "exact solution",
                        node: i,
                        t,
                        source,
                    })
                })
                .collect(),
        )
    }

    pub fn initial_state(&self) -> Result<SolverState, SolveError> {
        let nodes = &self.problem.nodes;
        let mut values = nodes
            .coords()
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                self.problem.initial.eval(0.0, x, 0.0).map_err(|source| SolveError::Eval {
                    what: "initial condition",
                    node: i,
                    t: 0.0,
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let last = values.len() - 1;
        values[0] = self.boundary(0.0, false)?;
        values[last] = self.boundary(0.0, true)?;
        Ok(SolverState {
            time_index: 0,
            t: 0.0,
            values,
            chosen: vec![None; nodes.len()],
        })
    }

    fn stencil(&self, node: usize) -> &NodeStencil {
        &self.stencils[node - 1]
    }

    /// Reconstructed `(u_x, u_xx, D^β u)` at an interior node.
    pub fn derivatives(&self, state: &SolverState, node: usize) -> Result<[f64; 3], SolveError> {
        let st = self.stencil(node);
        let u0 = state.values[node];
        let neighbors: Vec<f64> = st.members.iter().map(|&j| state.values[j]).collect();
        let (d1, d2) = st.integer.apply(u0, &neighbors)?;
        let frac = match (&st.fractional, self.problem.equation.fractional) {
            (Some(fw), Some(term)) => {
                let (a, b) = fw.apply(u0, &neighbors)?;
                [a, b][term.slot_index()]
            }
            _ => 0.0,
        };
        Ok([d1, d2, frac])
    }

    /// `R = f₁ d₁ + f₂ d₂ + g d_β + h` with the coefficients evaluated at `(t, x, u)`.
    fn combine_rhs(&self, node: usize, t: f64, x: f64, u: f64, d: [f64; 3]) -> Result<f64, SolveError> {
        let eq = &self.problem.equation;
        let coef = |what: &'static str, e: &Expr| {
            e.eval(t, x, u).map_err(|source| SolveError::Eval {
                what,
                node,
                t,
                source,
            })
        };
        let mut r = coef("h", &eq.h)?;
        if !eq.f1.is_zero() {
            r += coef("f1", &eq.f1)? * d[0];
        }
        if !eq.f2.is_zero() {
            r += coef("f2", &eq.f2)? * d[1];
        }
        if !eq.g.is_zero() {
            r += coef("g", &eq.g)? * d[2];
        }
        Ok(r)
    }

    /// Right-hand side `R₀ⁿ` at an interior node.
    pub fn rhs(&self, state: &SolverState, node: usize) -> Result<f64, SolveError> {
        let d = self.derivatives(state, node)?;
        let x = self.problem.nodes.coords()[node];
        self.combine_rhs(node, state.t, x, state.values[node], d)
    }

    fn finish_level(
        &self,
        state: &SolverState,
        updates: Vec<Result<(f64, Option<Candidate>), SolveError>>,
    ) -> Result<SolverState, SolveError> {
        let n = state.time_index;
        let t_next = self.time_at(n + 1);
        let len = self.problem.nodes.len();
        let mut values = vec![0.0; len];
        let mut chosen = vec![None; len];
        for (node, upd) in self.problem.nodes.interior().zip(updates) {
            let (v, c) = upd?;
            if !v.is_finite() || v.abs() > BLOW_UP_LIMIT {
                return Err(SolveError::BlowUp {
                    step: n + 1,
                    t: t_next,
                    node,
                    x: self.problem.nodes.coords()[node],
                    value: v,
                });
            }
            values[node] = v;
            chosen[node] = c;
        }
        values[0] = self.boundary(t_next, false)?;
        values[len - 1] = self.boundary(t_next, true)?;
        Ok(SolverState {
            time_index: n + 1,
            t: t_next,
            values,
            chosen,
        })
    }

    /// Forward Euler step with `φ = Δt`.
    pub fn step_standard(&self, state: &SolverState) -> Result<SolverState, SolveError> {
        let dt = self.step_size(state.time_index);
        let updates = map_nodes(self.problem.nodes.interior(), |node| {
            Ok((state.values[node] + dt * self.rhs(state, node)?, None))
        });
        self.finish_level(state, updates)
    }

    /// Non-standard step with one `(α, p1, p2)` choice per interior node
    /// (`choices[k]` belongs to node `k + 1`).
    pub fn step_nonstandard(
        &self,
        state: &SolverState,
        spec: &DenominatorSpec,
        choices: &[(f64, f64, f64)],
    ) -> Result<SolverState, SolveError> {
        let interior = self.problem.nodes.interior();
        if choices.len() != interior.len() {
            return Err(SolveError::Invalid(format!(
                "{} denominator choices for {} interior nodes",
                choices.len(),
                interior.len()
            )));
        }
        let dt = self.step_size(state.time_index);
        let updates = map_nodes(interior, |node| {
            let (alpha, p1, p2) = choices[node - 1];
            let phi = phi_combined(spec, dt, alpha, p1, p2)
                .map_err(|source| SolveError::Denominator { node, source })?;
            let r = self.rhs(state, node)?;
            Ok((
                state.values[node] + phi * r,
                Some(Candidate { alpha, p1, p2, phi }),
            ))
        });
        self.finish_level(state, updates)
    }

    /// Exhaustive search over the candidate grid at one node. Strict
    /// improvement is required, so the first of equally good candidates wins.
    pub fn search_node(
        &self,
        state: &SolverState,
        node: usize,
        candidates: &[Candidate],
        score: ScoreMode,
        target: Option<f64>,
    ) -> Result<NodeSearch, SolveError> {
        let u0 = state.values[node];
        let x = self.problem.nodes.coords()[node];
        let d = self.derivatives(state, node)?;
        let r = self.combine_rhs(node, state.t, x, u0, d)?;
        let scorer = |c: &Candidate, value: f64| -> Result<f64, SolveError> {
            match score {
                ScoreMode::Exact => Ok((value - target.ok_or(SolveError::MissingExact)?).abs()),
                ScoreMode::Residual => {
                    let r_at = self.combine_rhs(node, state.t, x, value, d)?;
                    Ok(((value - u0) - c.phi * r_at).abs())
                }
            }
        };
        let mut best: Option<(Candidate, f64, f64)> = None;
        let mut first_only: Option<f64> = None;
        let mut second_only: Option<f64> = None;
        for c in candidates {
            let value = u0 + c.phi * r;
            let s = scorer(c, value)?;
            if best.is_none_or(|(_, _, b)| s < b) {
                best = Some((*c, value, s));
            }
            if c.alpha == 1.0 && first_only.is_none_or(|b| s < b) {
                first_only = Some(s);
            }
            if c.alpha == 0.0 && second_only.is_none_or(|b| s < b) {
                second_only = Some(s);
            }
        }
        let (choice, value, score) =
            best.ok_or(SolveError::Grid(DenomError::EmptyGrid("candidate")))?;
        Ok(NodeSearch {
            node,
            choice,
            value,
            score,
            best_first_only: first_only,
            best_second_only: second_only,
        })
    }

    /// One step of the per-node denominator search.
    pub fn optimize_step(&self, state: &SolverState) -> Result<(SolverState, Vec<NodeSearch>), SolveError> {
        let TimeMode::Optimized { score, .. } = &self.problem.mode else {
            return Err(SolveError::Invalid("optimize_step needs nsfd-optimized mode".into()));
        };
        let candidates = self
            .candidates_for(state.time_index)
            .expect("optimized mode builds its grid");
        let t_next = self.time_at(state.time_index + 1);
        let exact = match (score, &self.problem.exact) {
            (ScoreMode::Exact, Some(e)) => Some(e),
            (ScoreMode::Exact, None) => return Err(SolveError::MissingExact),
            (ScoreMode::Residual, _) => None,
        };
        let searches = map_nodes(self.problem.nodes.interior(), |node| {
            let target = exact
                .map(|e| {
                    e.eval(t_next, self.problem.nodes.coords()[node], 0.0)
                        .map_err(|source| SolveError::Eval {
                            what: "exact solution",
                            node,
                            t: t_next,
                            source,
                        })
                })
                .transpose()?;
            self.search_node(state, node, candidates, *score, target)
        });
        let searches = searches.into_iter().collect::<Result<Vec<_>, _>>()?;
        let updates = searches.iter().map(|s| Ok((s.value, Some(s.choice)))).collect();
        let next = self.finish_level(state, updates)?;
        Ok((next, searches))
    }

    /// Advances one level according to the configured mode.
    pub fn step(&self, state: &SolverState) -> Result<(SolverState, Vec<NodeSearch>), SolveError> {
        match &self.problem.mode {
            TimeMode::Standard => Ok((self.step_standard(state)?, Vec::new())),
            TimeMode::Fixed {
                spec,
                alpha,
                p1,
                p2,
            } => {
                let choices = vec![(*alpha, *p1, *p2); self.problem.nodes.interior().len()];
                Ok((self.step_nonstandard(state, spec, &choices)?, Vec::new()))
            }
            TimeMode::Optimized { .. } => self.optimize_step(state),
        }
    }

    /// φ actually used per node in the step leaving `state`.
    fn phis_used(&self, state: &SolverState, next: &SolverState) -> Vec<f64> {
        let dt = self.step_size(state.time_index);
        self.problem
            .nodes
            .interior()
            .map(|node| next.chosen[node].map_or(dt, |c| c.phi))
            .collect()
    }

    pub fn checkpoint_steps(&self, checkpoints: &[f64]) -> Result<Vec<usize>, SolveError> {
        if checkpoints.is_empty() {
            return Ok(vec![self.n_steps]);
        }
        let mut steps = checkpoints
            .iter()
            .map(|&t| {
                let tol = TIME_TOLERANCE * t.abs().max(1.0);
                if !(t >= 0.0 && t <= self.problem.t_final + tol) {
                    return Err(SolveError::BadCheckpoint(t));
                }
                if (t - self.problem.t_final).abs() <= tol {
                    return Ok(self.n_steps);
                }
                let k = (t / self.problem.dt).round();
                if (k * self.problem.dt - t).abs() <= tol {
                    Ok(k as usize)
                } else {
                    Err(SolveError::BadCheckpoint(t))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        steps.sort_unstable();
        steps.dedup();
        Ok(steps)
    }

    /// Steps from the initial condition to `t_final`.
    pub fn run(&self, opts: &RunOptions) -> Result<RunOutput, RunError> {
        let checkpoints = self.checkpoint_steps(&opts.checkpoints)?;
        let coords = self.problem.nodes.coords();
        let mut state = self.initial_state()?;
        let mut out = RunOutput {
            report: ErrorReport::default(),
            final_state: state.clone(),
            dominance: Vec::new(),
            diagnostics: Vec::new(),
        };
        let record = |out: &mut RunOutput, state: &SolverState| -> Result<(), SolveError> {
            let exact = self.exact_at(state.t).transpose()?;
            out.report
                .push_level(state.t, coords, &state.values, exact.as_deref(), &state.chosen);
            if checkpoints.contains(&state.time_index) {
                out.report.push_summary_for_last_level(state.t, coords.len());
            }
            Ok(())
        };
        record(&mut out, &state)?;

        for _ in 0..self.n_steps {
            let result = self.step(&state).and_then(|(next, searches)| {
                if opts.diagnostics {
                    let phis = self.phis_used(&state, &next);
                    let candidates = self.candidates_for(state.time_index);
                    out.diagnostics
                        .extend(diagnostics::check_convergence(self, &state, &phis, candidates));
                }
                out.dominance.extend(searches.iter().map(|s| DominanceRow {
                    step: next.time_index,
                    node: s.node,
                    combined: s.score,
                    first_only: s.best_first_only,
                    second_only: s.best_second_only,
                }));
                record(&mut out, &next)?;
                Ok(next)
            });
            match result {
                Ok(next) => {
                    state = next;
                    out.report.steps_completed = state.time_index;
                    out.final_state = state.clone();
                }
                Err(cause) => {
                    return Err(RunError {
                        cause,
                        partial: Some(Box::new(out)),
                    })
                }
            }
        }
        Ok(out)
    }
}

fn map_nodes<T, F>(range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).collect()
    }
}

/// Builds the solver and runs it.
pub fn run(problem: ProblemSpec, opts: &RunOptions) -> Result<RunOutput, RunError> {
    Solver::new(problem)?.run(opts)
}
