//! Log-gamma, the Stirling remainder, log-beta and the regularized
//! incomplete gamma function.

use super::{ln1pmx, Params, LN_SQRT_2PI};
use crate::{domain, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ζ(k)/k` for `k = 2..=30`, the Taylor coefficients of `ln Γ(1+t)`.
const ZETA_OVER_K: [f64; 29] = [
    0.822_467_033_424_113_2,
    0.400_685_634_386_531_43,
    0.270_580_808_427_784_54,
    0.207_385_551_028_673_98,
    0.169_557_176_997_408_2,
    0.144_049_896_768_846_1,
    0.125_509_669_524_743_04,
    0.111_334_265_869_564_69,
    0.100_099_457_512_781_8,
    0.090_954_017_145_829_04,
    0.083_353_840_546_109,
    0.076_932_516_411_352_2,
    0.071_432_946_295_361_33,
    0.066_668_705_882_420_46,
    0.062_500_955_141_213_04,
    0.058_823_978_658_684_585,
    0.055_555_767_627_403_614,
    0.052_631_679_379_616_66,
    0.050_000_047_698_101_69,
    0.047_619_070_330_142_226,
    0.045_454_556_293_204_67,
    0.043_478_266_053_040_26,
    0.041_666_669_150_341_21,
    0.040_000_001_192_140_14,
    0.038_461_539_034_675_18,
    0.037_037_037_312_989_324,
    0.035_714_285_847_333_355,
    0.034_482_758_684_919_304,
    0.033_333_333_364_377_58,
];

/// Coefficients `B_{2k} / (2k(2k-1))` of the Stirling series in `1/y^{2k-1}`.
const STIRLING_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Below this the remainder is obtained by shifting the argument upwards.
const STIRLING_SERIES_MIN: f64 = 10.0;

fn check_positive(what: &'static str, y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(domain(what, y, "(0, inf)"))
    }
}

/// Stirling's remainder `r(y) = ln Γ(y) - [ln sqrt(2π) + (y - 1/2) ln y - y]`.
///
/// Satisfies `1/(12y+1) < r(y) < 1/(12y)` for `y > 0`.
pub fn stirling_remainder(y: f64) -> Result<f64> {
    check_positive("y", y)?;
    Ok(stirling_r(y))
}

pub(crate) fn stirling_r(y: f64) -> f64 {
    if y >= STIRLING_SERIES_MIN {
        return stirling_series(y);
    }
    // r(y) = r(y+n) + (y+n-1/2) ln(y+n) - (y-1/2) ln y - n - ln prod_{k<n} (y+k)
    let n = (STIRLING_SERIES_MIN - y).ceil();
    let z = y + n;
    let mut prod = 1.0;
    let mut k = 0.0;
    while k < n {
        prod *= y + k;
        k += 1.0;
    }
    stirling_series(z) + (z - 0.5) * z.ln() - (y - 0.5) * y.ln() - n - prod.ln()
}

fn stirling_series(y: f64) -> f64 {
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for &c in STIRLING_SERIES.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// `ln Γ(1+t)` for `|t| <= 1/4`.
fn ln_gamma_1p_taylor(t: f64) -> f64 {
    let mut acc = 0.0;
    for &c in ZETA_OVER_K.iter().rev() {
        acc = acc * (-t) + c;
    }
    // acc now holds sum_{k>=2} zeta(k)/k (-t)^{k-2}
    -EULER_GAMMA * t + acc * t * t
}

pub(crate) fn ln_gamma(y: f64) -> f64 {
    let t1 = y - 1.0;
    if t1.abs() <= 0.25 {
        return ln_gamma_1p_taylor(t1);
    }
    let t2 = y - 2.0;
    if t2.abs() <= 0.25 {
        return t2.ln_1p() + ln_gamma_1p_taylor(t2);
    }
    if y < 0.25 {
        return ln_gamma_1p_taylor(y) - y.ln();
    }
    LN_SQRT_2PI + (y - 0.5) * y.ln() - y + stirling_r(y)
}

/// `ln Γ(y)` for `y > 0`.
pub fn log_gamma(y: f64) -> Result<f64> {
    check_positive("y", y)?;
    Ok(ln_gamma(y))
}

/// `ln B(a, b)`.
///
/// When either shape is large the difference `ln Γ(L) - ln Γ(L+S)` is
/// expanded in Stirling form so that nothing of order `L ln L` cancels.
pub fn log_beta_fn(p: &Params) -> f64 {
    ln_beta(p.a(), p.b())
}

pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    let (s, l) = if a <= b { (a, b) } else { (b, a) };
    if l < STIRLING_SERIES_MIN {
        return ln_gamma(s) + ln_gamma(l) - ln_gamma(s + l);
    }
    let diff =
        -(l - 0.5) * (s / l).ln_1p() - s * (l + s).ln() + s + stirling_r(l) - stirling_r(l + s);
    ln_gamma(s) + diff
}

/// Iteration cap for the series and continued fractions; both need
/// `O(sqrt(a))` terms near the transition point.
fn max_iterations(a: f64) -> usize {
    2_000 + (50.0 * a.sqrt()) as usize
}

/// `ln[x^a e^{-x} / Γ(a)]`, written around `x = a` so that the two large
/// terms cancel analytically.
fn ln_gamma_prefactor(a: f64, x: f64) -> f64 {
    let t = (x - a) / a;
    // away from x = a the subtraction in t would cost relative precision
    let main = if t.abs() <= 0.5 {
        a * ln1pmx(t)
    } else {
        a * (x / a).ln() - (x - a)
    };
    main + 0.5 * a.ln() - LN_SQRT_2PI - stirling_r(a)
}

/// Which tail was evaluated directly; the other is `1 -` it.
enum Tail {
    Lower(f64),
    Upper(f64),
}

/// Direct log of one tail of the regularized incomplete gamma function.
fn inc_gamma_direct(a: f64, x: f64) -> Result<Tail> {
    let pref = ln_gamma_prefactor(a, x);
    let cap = max_iterations(a);
    if x < a + 1.0 {
        // P = x^a e^{-x} / Γ(a+1) * sum_n x^n / ((a+1)...(a+n))
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut denom = a;
        for _ in 0..cap {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term < sum * 1e-17 {
                return Ok(Tail::Lower(pref - a.ln() + sum.ln()));
            }
        }
        Err(Error::NoConvergence {
            routine: "incomplete gamma series",
            detail: format!("a = {a}, x = {x}"),
        })
    } else {
        // Modified Lentz on the continued fraction for Γ(a, x)
        let tiny = 1e-300;
        let mut bb = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / bb;
        let mut h = d;
        for i in 1..cap {
            let i = i as f64;
            let an = -i * (i - a);
            bb += 2.0;
            d = an * d + bb;
            if d.abs() < tiny {
                d = tiny;
            }
            c = bb + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 3.0 * f64::EPSILON {
                return Ok(Tail::Upper(pref + h.ln()));
            }
        }
        Err(Error::NoConvergence {
            routine: "incomplete gamma continued fraction",
            detail: format!("a = {a}, x = {x}"),
        })
    }
}

fn check_gamma_args(a: f64, x: f64) -> Result<()> {
    check_positive("a", a)?;
    if x.is_nan() || x < 0.0 {
        return Err(domain("x", x, "[0, inf]"));
    }
    Ok(())
}

/// `(ln P(a,x), ln Q(a,x))` for the regularized lower/upper incomplete gamma.
fn ln_inc_gamma_pair(a: f64, x: f64) -> Result<(f64, f64)> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    if x == f64::INFINITY {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    Ok(match inc_gamma_direct(a, x)? {
        Tail::Lower(lp) => (lp, ln_one_minus_exp(lp)),
        Tail::Upper(lq) => (ln_one_minus_exp(lq), lq),
    })
}

/// `ln(1 - e^v)` for `v <= 0`.
pub(crate) fn ln_one_minus_exp(v: f64) -> f64 {
    if v > -std::f64::consts::LN_2 {
        (-v.exp_m1()).ln()
    } else {
        (-v.exp()).ln_1p()
    }
}

/// Regularized lower incomplete gamma `P(a, x) = γ(a, x) / Γ(a)`.
pub fn reg_inc_gamma_lower(a: f64, x: f64) -> Result<f64> {
    Ok(ln_inc_gamma_pair(a, x)?.0.exp())
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn reg_inc_gamma_upper(a: f64, x: f64) -> Result<f64> {
    Ok(ln_inc_gamma_pair(a, x)?.1.exp())
}

/// `ln P(a, x)`, finite even where `P` underflows.
pub fn ln_reg_inc_gamma_lower(a: f64, x: f64) -> Result<f64> {
    Ok(ln_inc_gamma_pair(a, x)?.0)
}

/// `ln Q(a, x)`, finite even where `Q` underflows.
pub fn ln_reg_inc_gamma_upper(a: f64, x: f64) -> Result<f64> {
    Ok(ln_inc_gamma_pair(a, x)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn log_gamma_at_integers_and_half() {
        let mut fact: f64 = 1.0;
        for n in 1..25 {
            let lg = log_gamma(n as f64).unwrap();
            assert!(
                (lg - fact.ln()).abs() <= 1e-13 * fact.ln().max(1.0),
                "n = {n}"
            );
            fact *= n as f64;
        }
        let sqrt_pi_ln = 0.5 * std::f64::consts::PI.ln();
        assert!((log_gamma(0.5).unwrap() - sqrt_pi_ln).abs() < 1e-15);
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
    }

    #[test]
    fn log_gamma_recurrence() {
        for &y in &[0.01, 0.3, 0.74, 0.76, 1.3, 2.26, 3.7, 9.5, 10.5, 77.7] {
            let lhs = log_gamma(y + 1.0).unwrap();
            let rhs = log_gamma(y).unwrap() + f64::ln(y);
            assert!((lhs - rhs).abs() < 1e-13 * lhs.abs().max(1.0), "y = {y}");
        }
    }

    #[test]
    fn stirling_remainder_bracket() {
        for &y in &[1e-3, 0.1, 0.5, 1.0, 3.0, 9.99, 10.0, 10.01, 50.0, 1e4, 1e6] {
            let r = stirling_remainder(y).unwrap();
            assert!(r < 1.0 / (12.0 * y), "upper at {y}");
            assert!(r > 1.0 / (12.0 * y + 1.0), "lower at {y}");
        }
    }

    #[test]
    fn stirling_branches_agree_at_switch() {
        let h = 1e-9;
        let below = stirling_r(STIRLING_SERIES_MIN - h);
        let above = stirling_r(STIRLING_SERIES_MIN);
        // r'(10) is about -1/(12 * 10^2)
        let slope = -1.0 / (12.0 * STIRLING_SERIES_MIN * STIRLING_SERIES_MIN);
        assert!((below - above + slope * h).abs() < 1e-14);
    }

    #[test]
    fn log_beta_small_and_large_paths_agree() {
        for &(a, b) in &[
            (9.99, 3.0),
            (10.0, 3.0),
            (4.0, 8.0),
            (0.5, 12.0),
            (30.0, 40.0),
        ] {
            let naive = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
            assert!(close(ln_beta(a, b), naive, 1e-12), "({a}, {b})");
        }
        // B(4,8) = 3! 7! / 11!
        let exact = (6.0f64 * 5040.0 / 39_916_800.0).ln();
        assert!(close(ln_beta(4.0, 8.0), exact, 1e-14));
        assert_eq!(ln_beta(2.0, 5.0), ln_beta(5.0, 2.0));
    }

    #[test]
    fn incomplete_gamma_closed_forms() {
        // a = 1: P = 1 - e^{-x}
        for &x in &[1e-4, 0.5, 2.0, 10.0, 40.0] {
            let p = reg_inc_gamma_lower(1.0, x).unwrap();
            assert!(close(p, -(-x).exp_m1(), 1e-14), "x = {x}");
            let q = reg_inc_gamma_upper(1.0, x).unwrap();
            assert!(close(q, (-x).exp(), 1e-13), "x = {x}");
        }
        // a = 3: Q = e^{-x}(1 + x + x^2/2)
        let x: f64 = 2.5;
        let q = (-x).exp() * (1.0 + x + x * x / 2.0);
        assert!(close(reg_inc_gamma_upper(3.0, x).unwrap(), q, 1e-14));
        assert!(close(reg_inc_gamma_lower(3.0, x).unwrap(), 1.0 - q, 1e-14));
    }

    #[test]
    fn incomplete_gamma_edges_and_errors() {
        assert_eq!(reg_inc_gamma_lower(2.0, 0.0).unwrap(), 0.0);
        assert_eq!(reg_inc_gamma_upper(2.0, 0.0).unwrap(), 1.0);
        assert_eq!(reg_inc_gamma_lower(2.0, f64::INFINITY).unwrap(), 1.0);
        assert!(reg_inc_gamma_lower(0.0, 1.0).is_err());
        assert!(reg_inc_gamma_lower(1.0, -1.0).is_err());
        // deep tail stays finite in log space
        let lq = ln_reg_inc_gamma_upper(2.0, 2000.0).unwrap();
        assert!(close(lq, -2000.0 + 2001f64.ln(), 1e-14));
    }

    #[test]
    fn log_gamma_rejects_bad_input() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
        assert!(stirling_remainder(f64::INFINITY).is_err());
    }
}
