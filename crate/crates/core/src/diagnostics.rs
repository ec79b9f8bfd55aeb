//! Per-node convergence constants for the explicit scheme, evaluated after
//! each step as a report. Nothing here feeds back into the solver.
//!
//! With coefficients and `∂/∂u` taken at `(tₙ, x₀, U₀ⁿ)`:
//!
//! ```text
//! A = f₁ + ∂f₁/∂u·U₀      B = f₂ + ∂f₂/∂u·U₀      C = g + ∂g/∂u·U₀
//! D = −(∂f₁/∂u·Σλᵢ,₁Uᵢ + ∂f₂/∂u·Σλᵢ,₂Uᵢ + ∂g/∂u·ΣΛᵢUᵢ + ∂h/∂u)
//! E = |f₁|Σ|λᵢ,₁| + |f₂|Σ|λᵢ,₂| + |g|Σ|Λᵢ|
//! S = Aλ₀,₁ + Bλ₀,₂ + CΛ₀ + D
//! ```
//!
//! Condition 1 is `φ < 2/(S + E)` and condition 2 is `S − E > 0`. `Λ` is
//! the fractional stencil in the slot that feeds the update.

use serde::Serialize;

use crate::denoms::Candidate;
use crate::expr::{Expr, DEFAULT_DU_STEP};
use crate::solver::{Solver, SolverState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub node: usize,
    pub time_index: usize,
    pub t: f64,
    pub x: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    /// `2/(S + E)`, or `+∞` when `S + E ≤ 0`.
    pub bound: f64,
    pub phi: f64,
    pub cond1: bool,
    pub cond2: bool,
    /// Whether some φ in the candidate grid satisfies both conditions.
    pub any_triple_ok: bool,
}

impl ConvergenceRecord {
    pub fn is_unbounded(&self) -> bool {
        self.bound == f64::INFINITY
    }
}

/// A node where the constants could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticGap {
    pub node: usize,
    pub time_index: usize,
    pub t: f64,
    pub x: f64,
    pub message: String,
}

pub type NodeDiagnostic = Result<ConvergenceRecord, DiagnosticGap>;

struct Coef {
    value: f64,
    du: f64,
}

fn coef(e: &Expr, t: f64, x: f64, u: f64) -> Result<Coef, String> {
    let value = e.eval(t, x, u).map_err(|err| err.to_string())?;
    let du = e.partial_u(t, x, u, DEFAULT_DU_STEP).map_err(|err| err.to_string())?;
    Ok(Coef { value, du })
}

/// Constants at every interior node of `state`. `phis[k]` is the φ used at
/// node `k + 1`; `candidates` is the searched grid, if any.
pub fn check_convergence(
    solver: &Solver,
    state: &SolverState,
    phis: &[f64],
    candidates: Option<&[Candidate]>,
) -> Vec<NodeDiagnostic> {
    let min_phi = candidates.and_then(|c| c.iter().map(|c| c.phi).reduce(f64::min));
    solver
        .stencils()
        .iter()
        .zip(phis)
        .map(|(st, &phi)| {
            let gap = |message: String| DiagnosticGap {
                node: st.node,
                time_index: state.time_index,
                t: state.t,
                x: st.x,
                message,
            };
            let eq = &solver.problem().equation;
            let (t, x, u0) = (state.t, st.x, state.values[st.node]);
            let f1 = coef(&eq.f1, t, x, u0).map_err(gap)?;
            let f2 = coef(&eq.f2, t, x, u0).map_err(gap)?;
            let g = coef(&eq.g, t, x, u0).map_err(gap)?;
            let h = coef(&eq.h, t, x, u0).map_err(gap)?;

            let frac = match (&st.fractional, eq.fractional) {
                (Some(fw), Some(term)) => {
                    let k = term.slot_index();
                    Some((fw.lambda0[k], fw.lambda.iter().map(|l| l[k]).collect::<Vec<_>>()))
                }
                _ => None,
            };
            let neighbors: Vec<f64> = st.members.iter().map(|&j| state.values[j]).collect();
            let dot = |k: usize| -> f64 {
                st.integer.lambda.iter().zip(&neighbors).map(|(l, u)| l[k] * u).sum()
            };
            let abs_sum = |k: usize| -> f64 { st.integer.lambda.iter().map(|l| l[k].abs()).sum() };
            let (frac0, frac_dot, frac_abs) = match &frac {
                Some((l0, l)) => (
                    *l0,
                    l.iter().zip(&neighbors).map(|(l, u)| l * u).sum::<f64>(),
                    l.iter().map(|l| l.abs()).sum::<f64>(),
                ),
                None => (0.0, 0.0, 0.0),
            };

            let a = f1.value + f1.du * u0;
            let b = f2.value + f2.du * u0;
            let c = g.value + g.du * u0;
            let d = -(f1.du * dot(0) + f2.du * dot(1) + g.du * frac_dot + h.du);
            let e = f1.value.abs() * abs_sum(0) + f2.value.abs() * abs_sum(1) + g.value.abs() * frac_abs;
            let s = a * st.integer.lambda0[0] + b * st.integer.lambda0[1] + c * frac0 + d;
            let bound = if s + e > 0.0 { 2.0 / (s + e) } else { f64::INFINITY };
            let cond2 = s - e > 0.0;
            let cond1 = phi < bound;
            let any_triple_ok = cond2 && min_phi.unwrap_or(phi) < bound;
            Ok(ConvergenceRecord {
                node: st.node,
                time_index: state.time_index,
                t,
                x,
                a,
                b,
                c,
                d,
                e,
                bound,
                phi,
                cond1,
                cond2,
                any_triple_ok,
            })
        })
        .collect()
}
