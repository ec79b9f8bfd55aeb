//! Non-standard denominator functions φ(Δt) and their convex combinations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiFamily {
    /// `(e^{γΔt} − 1)/γ`
    Exp,
    /// `sin(μΔt)/μ`
    Sin,
    /// `tan(Δt) − θ sin²(Δt)`
    TanSin,
    /// `Δt`
    Identity,
}

impl PhiFamily {
    pub fn name(self) -> &'static str {
        match self {
            PhiFamily::Exp => "exp",
            PhiFamily::Sin => "sin",
            PhiFamily::TanSin => "tan-sin",
            PhiFamily::Identity => "identity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DenomError {
    #[error("{family} denominator is {value} at dt = {dt}, param = {param}; it must be finite and positive")]
    Invalid {
        family: &'static str,
        dt: f64,
        param: f64,
        value: f64,
    },
    #[error("time step must be finite and positive, got {0}")]
    BadStep(f64),
    #[error("combination weight must lie in [0, 1], got {0}")]
    BadAlpha(f64),
    #[error("{0} grid is empty")]
    EmptyGrid(&'static str),
}

// below this |param·dt| the closed forms lose digits to cancellation
const SERIES_THRESHOLD: f64 = 1e-8;

pub fn phi_eval(family: PhiFamily, dt: f64, param: f64) -> Result<f64, DenomError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(DenomError::BadStep(dt));
    }
    let z = param * dt;
    let value = match family {
        PhiFamily::Exp if z.abs() < SERIES_THRESHOLD => dt * (1.0 + z / 2.0 + z * z / 6.0),
        PhiFamily::Exp => z.exp_m1() / param,
        PhiFamily::Sin if z.abs() < SERIES_THRESHOLD => dt * (1.0 - z * z / 6.0 + z.powi(4) / 120.0),
        PhiFamily::Sin => z.sin() / param,
        PhiFamily::TanSin => {
            let s = dt.sin();
            dt.tan() - param * s * s
        }
        PhiFamily::Identity => dt,
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(DenomError::Invalid {
            family: family.name(),
            dt,
            param,
            value,
        })
    }
}

/// A family together with the parameter values searched for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyGrid {
    pub family: PhiFamily,
    #[serde(default = "default_params")]
    pub params: Vec<f64>,
}

fn default_params() -> Vec<f64> {
    vec![0.0]
}

/// Two families and the grid of convex weights α.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenominatorSpec {
    pub first: FamilyGrid,
    pub second: FamilyGrid,
    pub alpha: Vec<f64>,
}

/// One point of the search space together with its φ value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub alpha: f64,
    pub p1: f64,
    pub p2: f64,
    pub phi: f64,
}

impl DenominatorSpec {
    pub fn validate(&self) -> Result<(), DenomError> {
        if self.first.params.is_empty() {
            return Err(DenomError::EmptyGrid("first family parameter"));
        }
        if self.second.params.is_empty() {
            return Err(DenomError::EmptyGrid("second family parameter"));
        }
        if self.alpha.is_empty() {
            return Err(DenomError::EmptyGrid("alpha"));
        }
        if let Some(&a) = self.alpha.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(DenomError::BadAlpha(a));
        }
        Ok(())
    }

    /// True when both pure families are reachable (α = 0 and α = 1 in the grid).
    pub fn contains_endpoints(&self) -> bool {
        self.alpha.contains(&0.0) && self.alpha.contains(&1.0)
    }

    /// Every grid point in search order: second-family parameter outermost,
    /// then first-family parameter, then α innermost.
    pub fn candidates(&self, dt: f64) -> Result<Vec<Candidate>, DenomError> {
        self.validate()?;
        let first: Vec<f64> = self
            .first
            .params
            .iter()
            .map(|&p| phi_eval(self.first.family, dt, p))
            .collect::<Result<_, _>>()?;
        let second: Vec<f64> = self
            .second
            .params
            .iter()
            .map(|&p| phi_eval(self.second.family, dt, p))
            .collect::<Result<_, _>>()?;
        let mut out = Vec::with_capacity(first.len() * second.len() * self.alpha.len());
        for (&p2, &phi2) in self.second.params.iter().zip(&second) {
            for (&p1, &phi1) in self.first.params.iter().zip(&first) {
                for &alpha in &self.alpha {
                    out.push(Candidate {
                        alpha,
                        p1,
                        p2,
                        phi: combine(alpha, phi1, phi2),
                    });
                }
            }
        }
        Ok(out)
    }
}

fn combine(alpha: f64, phi1: f64, phi2: f64) -> f64 {
    alpha * phi1 + (1.0 - alpha) * phi2
}

/// `α φ₁(Δt, p1) + (1 − α) φ₂(Δt, p2)`.
pub fn phi_combined(spec: &DenominatorSpec, dt: f64, alpha: f64, p1: f64, p2: f64) -> Result<f64, DenomError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(DenomError::BadAlpha(alpha));
    }
    let phi1 = phi_eval(spec.first.family, dt, p1)?;
    let phi2 = phi_eval(spec.second.family, dt, p2)?;
    Ok(combine(alpha, phi1, phi2))
}

/// Evenly spaced grid `start, start + step, …` up to `end` inclusive, with
/// each value rounded to 12 decimals so that `0.1·k` style grids are exact
/// decimal literals.
pub fn linear_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|k| ((start + step * k as f64) * 1e12).round() / 1e12)
        .collect()
}
