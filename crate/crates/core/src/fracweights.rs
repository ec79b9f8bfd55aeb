//! Caputo fractional derivative stencils (base point 0) from the fractional
//! Taylor series truncated at order 2α.
//!
//! Member columns are `C_i = (Δ₁(x_i)/Γ(α+1), Δ₂(x_i)/Γ(2α+1))` and the
//! estimates are `D^α U_0 = -U_0 Λ_{0,1} + Σ U_i Λ_{i,1}` and likewise for
//! `D^{2α}` with the second component.
//!
//! `Δ₂` carries the correction term `K x_0^α Δ₁(x_i)` with
//! `K = Γ(2α+1)/Γ(α+1)²`. [`SignConvention::Corrected`] subtracts it, which
//! makes `x^{2α}` exactly representable and reduces `Δ₂` to `(x_i − x_0)²` at
//! α = 1. [`SignConvention::Printed`] adds it instead. Only the slot-1 weights
//! depend on the choice: both conventions span the same model space, so the
//! slot-2 weights coincide.

use serde::{Deserialize, Serialize};

use crate::cholesky::lsq_stencil;
use crate::intweights::{apply_pair, StencilError};
use crate::mesh::Star;
use crate::specmath::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignConvention {
    /// Negative correction term (reduces to the classical Taylor term at α = 1).
    #[default]
    #[serde(alias = "default")]
    Corrected,
    /// Positive correction term, as typeset in the source formula.
    Printed,
}

impl SignConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            SignConvention::Corrected => "corrected",
            SignConvention::Printed => "printed",
        }
    }
}

/// Fractional order α ∈ (0, 1] with base point 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
    gamma_1: f64,
    gamma_2: f64,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self, StencilError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(StencilError::BadOrder(alpha));
        }
        // both arguments are ≥ 1 so gamma cannot fail
        Ok(FracOrder {
            alpha,
            gamma_1: gamma(alpha + 1.0).expect("alpha + 1 > 0"),
            gamma_2: gamma(2.0 * alpha + 1.0).expect("2 alpha + 1 > 0"),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Γ(2α+1)/Γ(α+1)².
    fn correction(&self) -> f64 {
        self.gamma_2 / (self.gamma_1 * self.gamma_1)
    }
}

fn check_coord(x: f64) -> Result<(), StencilError> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(StencilError::NegativeCoordinate(x))
    }
}

/// `Δ₁(x_i) = x_i^α − x_0^α`.
pub fn delta1(xi: f64, x0: f64, alpha: f64) -> Result<f64, StencilError> {
    check_coord(xi)?;
    check_coord(x0)?;
    Ok(xi.powf(alpha) - x0.powf(alpha))
}

pub fn delta2(xi: f64, x0: f64, order: &FracOrder, sign: SignConvention) -> Result<f64, StencilError> {
    let a = order.alpha;
    let d1 = delta1(xi, x0, a)?;
    let corr = order.correction() * x0.powf(a) * d1;
    let base = xi.powf(2.0 * a) - x0.powf(2.0 * a);
    Ok(match sign {
        SignConvention::Corrected => base - corr,
        SignConvention::Printed => base + corr,
    })
}

/// The Λ coefficients for one star and order.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalWeights {
    pub lambda0: [f64; 2],
    pub lambda: Vec<[f64; 2]>,
    pub order: FracOrder,
    /// `(Δ₁, Δ₂)` per member, kept for inspection dumps.
    pub deltas: Vec<[f64; 2]>,
}

pub fn build_caputo_weights(
    star: &Star,
    weights: &[f64],
    order: FracOrder,
    sign: SignConvention,
) -> Result<FractionalWeights, StencilError> {
    if weights.len() != star.len() {
        return Err(StencilError::WeightCount {
            got: star.len(),
            weights: weights.len(),
        });
    }
    let x0 = star.center_x;
    let deltas = star
        .coords
        .iter()
        .map(|&xi| Ok([delta1(xi, x0, order.alpha)?, delta2(xi, x0, &order, sign)?]))
        .collect::<Result<Vec<_>, StencilError>>()?;
    let columns: Vec<[f64; 2]> = deltas
        .iter()
        .map(|d| [d[0] / order.gamma_1, d[1] / order.gamma_2])
        .collect();
    let (lambda0, lambda) = lsq_stencil(&columns, weights)
        .ok_or(StencilError::DegenerateFractional { center: star.center })?;
    Ok(FractionalWeights {
        lambda0,
        lambda,
        order,
        deltas,
    })
}

impl FractionalWeights {
    /// Returns `(D^α u, D^{2α} u)` at the center.
    pub fn apply(&self, u0: f64, neighbors: &[f64]) -> Result<(f64, f64), StencilError> {
        apply_pair(self.lambda0, &self.lambda, u0, neighbors)
    }
}
