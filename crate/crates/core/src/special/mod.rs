//! Reference implementations of the special functions every bound is
//! checked against.
//!
//! Accuracy targets (double precision, verified against an mpmath table in
//! `tests/data/reference_mpmath.csv`):
//!
//! * [`log_gamma`]: relative error below `1e-13` on `[1e-3, 1e6]`
//!   (absolute near the zeros at 1 and 2).
//! * [`reg_inc_beta`] / [`reg_inc_beta_survival`]: relative `1e-12` for
//!   shapes in `[0.05, 1e4]`.
//! * [`reg_inc_gamma_lower`]: relative `1e-12`.
//! * [`std_normal_cdf`]: absolute `1e-15`.
//! * [`quadrature_q_oracle`]: relative `1e-11`.

mod gamma;
pub mod golden;
mod inc_beta;
mod normal;
mod quadrature;

pub use gamma::{
    ln_reg_inc_gamma_lower, ln_reg_inc_gamma_upper, log_beta_fn, log_gamma, reg_inc_gamma_lower,
    reg_inc_gamma_upper, stirling_remainder,
};
pub use inc_beta::{
    ln_reg_inc_beta, ln_reg_inc_beta_survival, reg_inc_beta, reg_inc_beta_survival,
};
pub use normal::{ln_std_normal_cdf, std_normal_cdf};
pub use quadrature::{integrate_adaptive, q_series, quadrature_q_oracle, Integral};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{domain, Error, Result};

/// `ln(sqrt(2π))`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Shape parameters `(a, b)` of a beta distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    a: f64,
    b: f64,
}

impl Params {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParams { a, b });
        }
        Ok(Params { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The parameters of `Beta(b, a)`, i.e. the law of `1 - X`.
    pub fn swapped(&self) -> Params {
        Params {
            a: self.b,
            b: self.a,
        }
    }

    /// Mean `p = a/(a+b)`.
    pub fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    /// `1 - p`, computed without cancellation.
    pub fn mean_complement(&self) -> f64 {
        self.b / (self.a + self.b)
    }

    /// Left centre `p_l = (a+1)/(a+b)`.
    pub fn p_left(&self) -> f64 {
        (self.a + 1.0) / (self.a + self.b)
    }

    /// Right centre `p_r = (a-1)/(a+b)`; nonpositive when `a <= 1`.
    pub fn p_right(&self) -> f64 {
        (self.a - 1.0) / (self.a + self.b)
    }

    /// Mode-like centre `p_o = (a-1)/(a+b-2)`, defined when `a + b > 2`.
    pub fn p_mode(&self) -> Option<f64> {
        let m = self.a + self.b - 2.0;
        (m > 0.0).then(|| (self.a - 1.0) / m)
    }

    /// `c_{a,b} = (a+b)/(a+1)`.
    pub fn c_ab(&self) -> f64 {
        (self.a + self.b) / (self.a + 1.0)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={})", self.a, self.b)
    }
}

/// A real number or `+inf`; never NaN.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);

    /// Panics on NaN, which always indicates a defect upstream.
    pub fn new(v: f64) -> Self {
        assert!(!v.is_nan(), "ExtReal cannot hold NaN");
        ExtReal(v)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }
}

impl From<ExtReal> for f64 {
    fn from(v: ExtReal) -> f64 {
        v.0
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// `ln(1+t) - t` for `t >= -1`, accurate for small `|t|`.
pub fn ln1pmx(t: f64) -> f64 {
    if t.abs() > 0.25 {
        return t.ln_1p() - t;
    }
    // -t^2/2 + t^3/3 - ... ; 0.25^k / k < 1e-18 well before k = 40
    let mut pow = t * t;
    let mut sum = 0.0;
    let mut k = 2.0;
    loop {
        let term = pow / k;
        if k % 2.0 == 0.0 {
            sum -= term;
        } else {
            sum += term;
        }
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        pow *= t;
        k += 1.0;
    }
    sum
}

/// Neumaier-compensated sum.
pub fn compensated_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for &t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Bernoulli Kullback-Leibler divergence
/// `K(q,x) = q ln(q/x) + (1-q) ln((1-q)/(1-x))`, with `0 ln 0 = 0`.
///
/// Near the diagonal it is evaluated as `-q φ((x-q)/q) - (1-q) φ((q-x)/(1-q))`
/// with `φ(t) = ln(1+t) - t <= 0`: both terms are nonnegative, so there is
/// no cancellation as `x -> q`.
pub fn kl_bernoulli(q: f64, x: f64) -> Result<ExtReal> {
    if !(0.0..=1.0).contains(&q) {
        return Err(domain("q", q, "[0, 1]"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1]"));
    }
    if q > 0.0 && q < 1.0 {
        let s = (x - q) / q;
        let u = (q - x) / (1.0 - q);
        if s.abs() <= 0.5 && u.abs() <= 0.5 {
            let k = -q * ln1pmx(s) - (1.0 - q) * ln1pmx(u);
            return Ok(ExtReal::new(k.max(0.0)));
        }
    }
    let left = if q == 0.0 {
        0.0
    } else if x == 0.0 {
        f64::INFINITY
    } else {
        q * (q / x).ln()
    };
    let right = if q == 1.0 {
        0.0
    } else if x == 1.0 {
        f64::INFINITY
    } else {
        (1.0 - q) * ((1.0 - q).ln() - (-x).ln_1p())
    };
    Ok(ExtReal::new((left + right).max(0.0)))
}

/// Natural log of the beta density `β_{a,b}(x)`; `-inf` outside `(0,1)`
/// or where the density vanishes.
pub fn ln_beta_density(p: &Params, x: f64) -> f64 {
    if !(x > 0.0 && x < 1.0) {
        return f64::NEG_INFINITY;
    }
    (p.a() - 1.0) * x.ln() + (p.b() - 1.0) * (-x).ln_1p() - log_beta_fn(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_reject_nonpositive() {
        assert!(Params::new(0.0, 1.0).is_err());
        assert!(Params::new(1.0, -2.0).is_err());
        assert!(Params::new(f64::NAN, 1.0).is_err());
        assert!(Params::new(f64::INFINITY, 1.0).is_err());
        assert!(Params::new(0.3, 7.0).is_ok());
    }

    #[test]
    fn derived_centres() {
        let p = Params::new(4.0, 8.0).unwrap();
        assert_eq!(p.mean(), 1.0 / 3.0);
        assert_eq!(p.p_left(), 5.0 / 12.0);
        assert_eq!(p.p_right(), 3.0 / 12.0);
        assert_eq!(p.p_mode(), Some(0.3));
        assert_eq!(p.c_ab(), 12.0 / 5.0);
        assert_eq!(Params::new(0.5, 1.0).unwrap().p_mode(), None);
        assert!(Params::new(0.5, 3.0).unwrap().p_right() < 0.0);
    }

    #[test]
    #[should_panic]
    fn ext_real_rejects_nan() {
        ExtReal::new(f64::NAN);
    }

    #[test]
    fn ln1pmx_matches_direct_formula_away_from_zero() {
        for &t in &[-0.9, -0.3, 0.26, 1.0, 10.0] {
            assert!((ln1pmx(t) - (t.ln_1p() - t)).abs() < 1e-15);
        }
        // series branch against a long-hand expansion
        let t: f64 = 1e-3;
        let expect = -t * t / 2.0 + t.powi(3) / 3.0 - t.powi(4) / 4.0 + t.powi(5) / 5.0;
        assert!((ln1pmx(t) - expect).abs() < 1e-18);
        assert_eq!(ln1pmx(0.0), 0.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s = compensated_sum(&[1e16, 1.0, -1e16, 1.0]);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn kl_examples() {
        for &q in &[0.0, 0.2, 0.5, 1.0] {
            assert_eq!(kl_bernoulli(q, q).unwrap().get(), 0.0);
        }
        let k = kl_bernoulli(0.0, 0.5).unwrap().get();
        assert!((k - std::f64::consts::LN_2).abs() < 1e-16);
        assert!(kl_bernoulli(0.3, 0.0).unwrap().is_infinite());
        assert!(kl_bernoulli(0.3, 1.0).unwrap().is_infinite());
        assert_eq!(kl_bernoulli(1.0, 0.25).unwrap().get(), -(0.25_f64.ln()));
        // direct formula at a point far from the diagonal
        let (q, x) = (0.5_f64, 0.25_f64);
        let direct = q * (q / x).ln() + (1.0 - q) * ((1.0 - q) / (1.0 - x)).ln();
        assert!((kl_bernoulli(q, x).unwrap().get() - direct).abs() < 1e-16);
        assert!(kl_bernoulli(-0.1, 0.5).is_err());
        assert!(kl_bernoulli(0.1, 1.5).is_err());
    }
}
