//! Gamma function kernel.
//!
//! Lanczos approximation (g = 7, nine coefficients) for arguments ≥ 0.5 and
//! the upward recurrence `Γ(x) = Γ(x + 1) / x` below that. Integer arguments
//! use the factorial product directly. Only positive
//! arguments are accepted; the solver never needs the reflection formula.

use std::f64::consts::PI;

use thiserror::Error;

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("gamma is only defined here for finite positive arguments, got {0}")]
pub struct GammaDomainError(pub f64);

/// Γ(x) for finite `x > 0`.
pub fn gamma(x: f64) -> Result<f64, GammaDomainError> {
    if !x.is_finite() || x <= 0.0 {
        return Err(GammaDomainError(x));
    }
    if x.fract() == 0.0 && x <= 171.0 {
        return Ok((2..x as u32).fold(1.0, |acc, k| acc * f64::from(k)));
    }
    if x < 0.5 {
        return Ok(lanczos(x + 1.0) / x);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let w = z + LANCZOS_G + 0.5;
    // split the power so large arguments do not overflow before exp(-w) scales them down
    let half = w.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-w).exp() * half * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn known_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        // 30-digit reference values
        assert!(rel(gamma(1.2).unwrap(), 0.918_168_742_399_760_6) < 1e-13);
        assert!(rel(gamma(0.1).unwrap(), 9.513_507_698_668_731) < 1e-13);
        assert!(rel(gamma(2.8).unwrap(), 1.676_490_787_764_436_6) < 1e-13);
        assert!(rel(gamma(29.5).unwrap(), 1.634_812_519_827_426_6e30) < 1e-12);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(gamma(f64::NAN).is_err());
        assert!(gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn factorials() {
        let mut fact = 1.0;
        for n in 1..=10u32 {
            assert!(rel(gamma(n as f64).unwrap(), fact) < 1e-13, "n = {n}");
            fact *= n as f64;
        }
    }

    #[test]
    fn recurrence_holds_densely() {
        let mut x = 0.1;
        while x <= 20.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(((lhs - rhs) / lhs).abs() <= 1e-12, "x = {x}");
            x += 0.0137;
        }
    }
}
