//! Gamma function and the p-Laplacian maps.

use crate::error::{domain, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
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

/// Euler's gamma function for positive finite arguments.
///
/// Lanczos approximation (g = 7, nine coefficients) with the reflection
/// formula below 1/2.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain(format!("gamma requires a finite positive argument, got {x}")));
    }
    Ok(gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let w = x + LANCZOS_G + 0.5;
    // w^(x+1/2) is split in two halves so large arguments do not overflow early.
    let half = w.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * half * (-w).exp() * acc
}

fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return Err(domain(format!("p-Laplacian exponent must satisfy p > 1, got {p}")));
    }
    Ok(())
}

/// Conjugate exponent `q = p / (p - 1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(p / (p - 1.0))
}

/// `φ_p(s) = |s|^(p-2) s`.
pub fn phi_p(s: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(phi_raw(s, p))
}

/// Inverse of [`phi_p`], i.e. `φ_q` with `1/p + 1/q = 1`.
pub fn phi_q(s: f64, p: f64) -> Result<f64> {
    let q = conjugate_exponent(p)?;
    Ok(phi_raw(s, q))
}

#[inline]
pub(crate) fn phi_raw(s: f64, exponent: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else if exponent == 2.0 {
        s
    } else {
        s.abs().powf(exponent - 2.0) * s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_known_values() {
        assert!(rel(gamma(2.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma(2.5).unwrap(), 0.75 * PI.sqrt()) < 1e-13);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-13);
        assert!(rel(gamma(1.5).unwrap(), 0.5 * PI.sqrt()) < 1e-13);
    }

    #[test]
    fn gamma_factorials_up_to_fifty() {
        let mut fact = 1.0_f64;
        for n in 1..=50u32 {
            // Γ(n) = (n-1)!
            assert!(rel(gamma(n as f64).unwrap(), fact) < 1e-12, "n = {n}");
            fact *= n as f64;
        }
    }

    #[test]
    fn gamma_small_arguments_use_reflection() {
        // Γ(x) Γ(1-x) = π / sin(πx)
        for &x in &[1e-6, 0.01, 0.2, 0.37, 0.49] {
            let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
            assert!(rel(lhs, PI / (PI * x).sin()) < 1e-12);
        }
        assert!(rel(gamma(1e-8).unwrap(), 1e8 - 0.577_215_664_901_532_9) < 1e-10);
    }

    #[test]
    fn gamma_rejects_bad_input() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(gamma(f64::NAN).is_err());
        assert!(gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_p(3.7, 2.0).unwrap(), 3.7);
        assert_eq!(phi_p(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(phi_p(0.0, 1.5).unwrap(), 0.0);
        assert!((phi_p(4.0, 1.5).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(phi_q(-2.25, 2.0).unwrap(), -2.25);
        assert!((phi_q(2.0, 1.5).unwrap() - 4.0).abs() < 1e-14);
        assert!((phi_q(-8.0, 1.5).unwrap() + 64.0).abs() < 1e-12);
    }

    #[test]
    fn phi_rejects_p_at_most_one() {
        assert!(phi_p(1.0, 1.0).is_err());
        assert!(phi_q(1.0, 0.5).is_err());
        assert!(conjugate_exponent(f64::NAN).is_err());
    }
}
