//! Integer-order derivative stencils from a second-order Taylor model.
//!
//! For a star around `x_0` with offsets `h_i`, the columns are
//! `c_i = (h_i, h_i²/2)`. The first and second derivatives at the center are
//! then `-U_0 λ_{0,k} + Σ U_i λ_{i,k}` for `k = 1, 2`.

use thiserror::Error;

use crate::cholesky::lsq_stencil;
use crate::mesh::Star;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StencilError {
    #[error("degenerate star around node {center}: normal matrix is not positive definite")]
    Degenerate { center: usize },
    #[error("degenerate fractional star around node {center}: normal matrix is not positive definite")]
    DegenerateFractional { center: usize },
    #[error("expected {expected} neighbour values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("star has {got} members and {weights} weights")]
    WeightCount { got: usize, weights: usize },
    #[error("fractional stencils need non-negative coordinates, got {0}")]
    NegativeCoordinate(f64),
    #[error("fractional order must lie in (0, 1], got {0}")]
    BadOrder(f64),
}

/// The λ coefficients for one star.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerWeights {
    pub lambda0: [f64; 2],
    pub lambda: Vec<[f64; 2]>,
}

pub fn build_integer_weights(star: &Star, weights: &[f64]) -> Result<IntegerWeights, StencilError> {
    if weights.len() != star.len() {
        return Err(StencilError::WeightCount {
            got: star.len(),
            weights: weights.len(),
        });
    }
    let columns: Vec<[f64; 2]> = star.offsets.iter().map(|&h| [h, 0.5 * h * h]).collect();
    let (lambda0, lambda) =
        lsq_stencil(&columns, weights).ok_or(StencilError::Degenerate { center: star.center })?;
    Ok(IntegerWeights { lambda0, lambda })
}

impl IntegerWeights {
    /// Returns `(∂u/∂x, ∂²u/∂x²)` at the center.
    pub fn apply(&self, u0: f64, neighbors: &[f64]) -> Result<(f64, f64), StencilError> {
        apply_pair(self.lambda0, &self.lambda, u0, neighbors)
    }
}

pub(crate) fn apply_pair(
    total: [f64; 2],
    per_member: &[[f64; 2]],
    u0: f64,
    neighbors: &[f64],
) -> Result<(f64, f64), StencilError> {
    if neighbors.len() != per_member.len() {
        return Err(StencilError::LengthMismatch {
            expected: per_member.len(),
            got: neighbors.len(),
        });
    }
    let mut first = -u0 * total[0];
    let mut second = -u0 * total[1];
    for (l, u) in per_member.iter().zip(neighbors) {
        first += u * l[0];
        second += u * l[1];
    }
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_star, example_mesh, weights_for, NodeSet, WeightScheme};
    use proptest::prelude::*;

    fn symmetric_star(x0: f64, h: f64) -> Star {
        Star {
            center: 1,
            center_x: x0,
            members: vec![0, 2],
            coords: vec![x0 - h, x0 + h],
            offsets: vec![-h, h],
        }
    }

    #[test]
    fn symmetric_star_gives_central_differences() {
        let star = symmetric_star(0.5, 0.1);
        let offsets = star.offsets.clone();
        let w = weights_for(&star, WeightScheme::Constant);
        let iw = build_integer_weights(&star, &w).unwrap();
        // hand solve with the actual floating offsets
        let h = offsets[1];
        assert!((iw.lambda[0][0] + 1.0 / (2.0 * h)).abs() < 1e-12);
        assert!((iw.lambda[1][0] - 1.0 / (2.0 * h)).abs() < 1e-12);
        assert!((iw.lambda[0][1] - 1.0 / (h * h)).abs() < 1e-9);
        assert!((iw.lambda[1][1] - 1.0 / (h * h)).abs() < 1e-9);
        assert!(iw.lambda0[0].abs() < 1e-12);
        assert!((iw.lambda0[1] - 200.0).abs() < 1e-9);
    }

    #[test]
    fn exact_on_linear_and_quadratic() {
        let star = symmetric_star(0.5, 0.1);
        let iw = build_integer_weights(&star, &[1.0, 1.0]).unwrap();
        let (d1, _) = iw.apply(0.5, &star.coords).unwrap();
        assert!((d1 - 1.0).abs() < 1e-12);
        let sq: Vec<f64> = star.coords.iter().map(|x| x * x).collect();
        let (d1, d2) = iw.apply(0.25, &sq).unwrap();
        assert!((d1 - 1.0).abs() < 1e-12 && (d2 - 2.0).abs() < 1e-9);
        let (d1, d2) = iw.apply(3.7, &[3.7, 3.7]).unwrap();
        assert!(d1.abs() < 1e-12 && d2.abs() < 1e-9);
    }

    #[test]
    fn irregular_star_reproduces_quadratic() {
        let nodes = example_mesh();
        let center = nodes.coords().iter().position(|&x| x == 0.45).unwrap();
        let star = build_star(&nodes, center, 4).unwrap();
        let w = weights_for(&star, WeightScheme::default());
        let iw = build_integer_weights(&star, &w).unwrap();
        let u: Vec<f64> = star.coords.iter().map(|x| x * x).collect();
        let (d1, d2) = iw.apply(0.45 * 0.45, &u).unwrap();
        assert!((d1 - 0.9).abs() < 1e-9, "{d1}");
        assert!((d2 - 2.0).abs() < 1e-9, "{d2}");
    }

    #[test]
    fn errors() {
        let star = symmetric_star(0.5, 0.1);
        let iw = build_integer_weights(&star, &[1.0, 1.0]).unwrap();
        assert_eq!(
            iw.apply(0.0, &[1.0]),
            Err(StencilError::LengthMismatch { expected: 2, got: 1 })
        );
        assert!(build_integer_weights(&star, &[1.0]).is_err());
        // two members at the same offset cannot determine two derivatives
        let bad = Star {
            center: 7,
            center_x: 0.5,
            members: vec![0, 2],
            coords: vec![0.6, 0.6],
            offsets: vec![0.1, 0.1],
        };
        assert_eq!(
            build_integer_weights(&bad, &[1.0, 1.0]),
            Err(StencilError::Degenerate { center: 7 })
        );
    }

    fn arb_nodes() -> impl Strategy<Value = NodeSet> {
        prop::collection::vec(0.01f64..1.0, 4..16).prop_map(|gaps| {
            let mut coords = vec![0.0];
            let mut x = 0.0;
            for g in gaps {
                x += g;
                coords.push(x);
            }
            NodeSet::new(coords).unwrap()
        })
    }

    proptest! {
        #[test]
        fn polynomial_exactness(nodes in arb_nodes(), s in 2usize..6, p in prop_oneof![Just(0.0), 0.5f64..3.0]) {
            let s = s.min(nodes.len() - 1);
            let scheme = if p == 0.0 { WeightScheme::Constant } else { WeightScheme::InverseDistancePower { power: p } };
            for c in nodes.interior() {
                let star = build_star(&nodes, c, s).unwrap();
                let iw = build_integer_weights(&star, &weights_for(&star, scheme)).unwrap();
                let x0 = star.center_x;
                for k in 0..2 {
                    let lhs = iw.lambda0[k];
                    let rhs: f64 = iw.lambda.iter().map(|l| l[k]).sum();
                    prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
                }
                let scale = iw.lambda.iter().map(|l| l[1].abs()).sum::<f64>().max(1.0);
                let ones = vec![1.0; star.len()];
                let (a, b) = iw.apply(1.0, &ones).unwrap();
                prop_assert!(a.abs() <= 1e-9 * scale && b.abs() <= 1e-9 * scale);
                let (a, b) = iw.apply(x0, &star.coords).unwrap();
                prop_assert!((a - 1.0).abs() <= 1e-9 * scale && b.abs() <= 1e-9 * scale);
                let sq: Vec<f64> = star.coords.iter().map(|x| x * x).collect();
                let (a, b) = iw.apply(x0 * x0, &sq).unwrap();
                prop_assert!((a - 2.0 * x0).abs() <= 1e-9 * scale && (b - 2.0).abs() <= 1e-9 * scale);
            }
        }

        #[test]
        fn common_weight_scaling_cancels(nodes in arb_nodes(), k in 0.01f64..100.0) {
            for c in nodes.interior() {
                let star = build_star(&nodes, c, 2.max((nodes.len() - 1).min(4))).unwrap();
                let w = weights_for(&star, WeightScheme::default());
                let scaled: Vec<f64> = w.iter().map(|v| v * k).collect();
                let a = build_integer_weights(&star, &w).unwrap();
                let b = build_integer_weights(&star, &scaled).unwrap();
                for (la, lb) in a.lambda.iter().zip(&b.lambda) {
                    for j in 0..2 {
                        prop_assert!((la[j] - lb[j]).abs() <= 1e-12 * la[j].abs().max(1.0));
                    }
                }
            }
        }
    }
}
