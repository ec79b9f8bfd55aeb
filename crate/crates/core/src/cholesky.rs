//! 2×2 symmetric positive definite factorization shared by both stencil builders.

/// Lower-triangular Cholesky factor of a 2×2 SPD matrix `[[a11, a12], [a12, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cholesky2 {
    l11: f64,
    l21: f64,
    l22: f64,
}

/// Relative pivot threshold below which the matrix is treated as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

impl Cholesky2 {
    /// Factors the matrix, or returns `None` if either pivot is below
    /// `PIVOT_TOLERANCE` times the largest diagonal entry.
    pub fn factor(a11: f64, a12: f64, a22: f64) -> Option<Self> {
        let scale = a11.abs().max(a22.abs());
        if !(scale.is_finite() && scale > 0.0 && a12.is_finite()) {
            return None;
        }
        let tol = PIVOT_TOLERANCE * scale;
        if a11 <= tol {
            return None;
        }
        let l11 = a11.sqrt();
        let l21 = a12 / l11;
        let schur = a22 - l21 * l21;
        if schur <= tol {
            return None;
        }
        Some(Cholesky2 {
            l11,
            l21,
            l22: schur.sqrt(),
        })
    }

    /// Solves `L Lᵀ z = b`.
    pub fn solve(&self, b: [f64; 2]) -> [f64; 2] {
        let y1 = b[0] / self.l11;
        let y2 = (b[1] - self.l21 * y1) / self.l22;
        let z2 = y2 / self.l22;
        let z1 = (y1 - self.l21 * z2) / self.l11;
        [z1, z2]
    }
}

/// Stencil coefficients from the weighted least-squares fit
/// `min Σ w_i² (U_0 − U_i + c_iᵀ d)²` with two unknowns.
///
/// Returns `(Σ λ_i, [λ_i])` where `λ_i = w_i² A⁻¹ c_i` and `A = Σ w_i² c_i c_iᵀ`,
/// or `None` if `A` is numerically singular.
pub(crate) fn lsq_stencil(columns: &[[f64; 2]], weights: &[f64]) -> Option<([f64; 2], Vec<[f64; 2]>)> {
    debug_assert_eq!(columns.len(), weights.len());
    let (mut a11, mut a12, mut a22) = (0.0, 0.0, 0.0);
    for (c, w) in columns.iter().zip(weights) {
        let w2 = w * w;
        a11 += w2 * c[0] * c[0];
        a12 += w2 * c[0] * c[1];
        a22 += w2 * c[1] * c[1];
    }
    let chol = Cholesky2::factor(a11, a12, a22)?;
    let per_member: Vec<[f64; 2]> = columns
        .iter()
        .zip(weights)
        .map(|(c, w)| {
            let z = chol.solve(*c);
            [w * w * z[0], w * w * z[1]]
        })
        .collect();
    let total = per_member
        .iter()
        .fold([0.0, 0.0], |acc, l| [acc[0] + l[0], acc[1] + l[1]]);
    Some((total, per_member))
}
