//! Standard normal distribution function.

use super::LN_SQRT_2PI;

/// Below this the log-CDF switches to the asymptotic Mills-ratio series.
const ASYMPTOTIC_BELOW: f64 = -20.0;

/// `Φ(z)`. For `z >= 0` it is defined as `1 - Φ(-z)`, so
/// `Φ(z) + Φ(-z) = 1` holds to rounding.
pub fn std_normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z < 0.0 {
        0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
    } else {
        1.0 - 0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
    }
}

/// `ln Φ(z)`, finite for every finite `z`.
pub fn ln_std_normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z >= 0.0 {
        return (-0.5 * libm::erfc(z / std::f64::consts::SQRT_2)).ln_1p();
    }
    if z >= ASYMPTOTIC_BELOW {
        return (0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)).ln();
    }
    if z == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    // Φ(z) = φ(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + ...)
    let inv2 = 1.0 / (z * z);
    let mut term: f64 = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term.abs() > 1e-17 {
        term *= -(2.0 * k - 1.0) * inv2;
        sum += term;
        k += 1.0;
    }
    -0.5 * z * z - (-z).ln() - LN_SQRT_2PI + sum.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(-1.959_963_984_540_054) - 0.025).abs() < 1e-15);
        assert!((std_normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert_eq!(std_normal_cdf(f64::NEG_INFINITY), 0.0);
        assert_eq!(std_normal_cdf(f64::INFINITY), 1.0);
    }

    #[test]
    fn symmetry() {
        for &z in &[0.1, 0.5, 1.0, 2.5, 7.0] {
            assert!((std_normal_cdf(z) + std_normal_cdf(-z) - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn log_cdf_continuous_at_switch() {
        let a = ln_std_normal_cdf(ASYMPTOTIC_BELOW);
        let b = ln_std_normal_cdf(ASYMPTOTIC_BELOW - 1e-12);
        assert!((a - b).abs() < 1e-9);
        let direct = std_normal_cdf(-25.0).ln();
        assert!((ln_std_normal_cdf(-25.0) - direct).abs() < 1e-13 * direct.abs());
        assert!(ln_std_normal_cdf(-100.0).is_finite());
        assert!(ln_std_normal_cdf(40.0) == 0.0 || ln_std_normal_cdf(40.0) > -1e-300);
    }
}
