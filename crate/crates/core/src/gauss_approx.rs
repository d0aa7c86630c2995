//! Gaussian tail bounds and the Gaussian approximation of `Beta(a,a)`.
//!
//! For `a, b > 1` the beta tails are dominated by twice a Gaussian tail
//! centred at the mode `p_o = (a-1)/(a+b-2)`. For `Beta(a,a)` the density is
//! compared with `N(1/2, σ²)`; `R(σ)` is the maximal density ratio, so
//! `Beta(a,a)(S) <= R(σ) N(1/2,σ²)(S)` for every set `S`.

use crate::bound::{BoundEval, BoundId, Direction, Tail, XRegion};
use crate::special::{ln_std_normal_cdf, log_beta_fn, stirling_remainder, Params, LN_SQRT_2PI};
use crate::{domain, Error, Result};

use std::f64::consts::LN_2;

/// Every bound implemented here.
pub const IDS: [BoundId; 4] = [
    BoundId::GaussLeft,
    BoundId::GaussRight,
    BoundId::BetaAaPhiTail,
    BoundId::BetaAaExpTail,
];

/// Offsets `δ` in `σ = (8(a+δ))^{-1/2}` at which the `Beta(a,a)` tail
/// bounds are checked.
pub const TAIL_DELTAS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

/// Choice of the Gaussian standard deviation, always of the form
/// `σ = (8(a+δ))^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaChoice {
    /// Standard deviation of `Beta(a,a)`: `δ = 1/2`.
    Moment,
    /// Curvature of the log-density at `1/2`: `δ = -1`.
    LocalDensity,
    /// Minimiser of `R(σ)`: `δ = -1/2`.
    Optimal,
    /// Any `δ >= -1`.
    Custom(f64),
}

impl SigmaChoice {
    pub fn delta(self) -> f64 {
        match self {
            SigmaChoice::Moment => 0.5,
            SigmaChoice::LocalDensity => -1.0,
            SigmaChoice::Optimal => -0.5,
            SigmaChoice::Custom(d) => d,
        }
    }

    /// `σ(a)`; requires `a > 1` and `δ >= -1`.
    pub fn sigma(self, a: f64) -> Result<f64> {
        check_a(a)?;
        let d = self.delta();
        if !(d >= -1.0 && d.is_finite()) {
            return Err(domain("delta", d, "[-1, inf)"));
        }
        Ok((8.0 * (a + d)).sqrt().recip())
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 1.0 && a.is_finite() {
        Ok(())
    } else {
        Err(domain("a", a, "(1, inf)"))
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(domain("sigma", sigma, "(0, inf)"))
    }
}

/// `2 Φ(2 sqrt(a+b-2)(x - p_o))` and `2 Φ(-2 sqrt(a+b-2)(x - p_o))` as
/// `(left, right)`, bounding `B_{a,b}(x)` for `x <= p_o` and `B̄_{a,b}(x)`
/// for `x >= p_o`. Not applicable unless `a, b > 1`.
pub fn gauss_tail(p: &Params, x: f64) -> Result<(BoundEval, BoundEval)> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1]"));
    }
    let (a, b) = (p.a(), p.b());
    if !(a > 1.0 && b > 1.0) {
        let na = BoundEval::from_ln(0.0, Direction::NotApplicable, false);
        return Ok((na, na));
    }
    let mode = (a - 1.0) / (a + b - 2.0);
    let z = 2.0 * (a + b - 2.0).sqrt() * (x - mode);
    Ok((
        BoundEval::from_ln(LN_2 + ln_std_normal_cdf(z), Direction::Upper, x <= mode),
        BoundEval::from_ln(LN_2 + ln_std_normal_cdf(-z), Direction::Upper, x >= mode),
    ))
}

/// `ln[β_{a,a}(x) / φ_{1/2,σ}(x)]` evaluated directly from the densities.
pub fn ln_density_ratio(a: f64, sigma: f64, x: f64) -> Result<f64> {
    check_a(a)?;
    check_sigma(sigma)?;
    if !(x > 0.0 && x < 1.0) {
        return Err(domain("x", x, "(0, 1)"));
    }
    let p = Params::new(a, a)?;
    let ln_beta = (a - 1.0) * (x.ln() + (-x).ln_1p()) - log_beta_fn(&p);
    let z = (x - 0.5) / sigma;
    let ln_phi = -0.5 * z * z - sigma.ln() - LN_SQRT_2PI;
    Ok(ln_beta - ln_phi)
}

/// `ln R(σ)`, the log of the maximal ratio `β_{a,a}/φ_{1/2,σ}`, valid for
/// every `σ > 0`.
pub fn log_r(a: f64, sigma: f64) -> Result<f64> {
    check_a(a)?;
    check_sigma(sigma)?;
    let s = 8.0 * sigma * sigma;
    let p = Params::new(a, a)?;
    let base = LN_SQRT_2PI - log_beta_fn(&p) - (2.0 * a - 0.5) * LN_2;
    Ok(base
        + 0.5 * s.ln()
        + (s.recip() - a + 1.0).max(0.0)
        + (a - 1.0) * (s * (a - 1.0)).min(1.0).ln())
}

/// `ln R(σ)` through the Stirling remainder `r̃(a) = r(2a) - 2r(a)`; the
/// same quantity as [`log_r`], restricted to `8σ²(a-1) <= 1`.
pub fn log_r_via_stirling(a: f64, sigma: f64) -> Result<f64> {
    check_a(a)?;
    check_sigma(sigma)?;
    let s = 8.0 * sigma * sigma;
    if s * (a - 1.0) > 1.0 {
        return Err(domain("8 sigma^2 (a-1)", s * (a - 1.0), "(0, 1]"));
    }
    let r_tilde = stirling_remainder(2.0 * a)? - 2.0 * stirling_remainder(a)?;
    // ln(a)/2 + (a-1/2) ln(s) + (a-1) ln(a-1), regrouped around ln(s a)
    Ok(r_tilde + s.recip() - a + 1.0 + (a - 0.5) * (s * a).ln() + (a - 1.0) * (-1.0 / a).ln_1p())
}

/// `ln R(σ(a))` for `σ(a) = (8(a+δ))^{-1/2}`, written without the
/// cancelling `ln a` terms:
/// `r̃(a) + δ + 1 - (a - 1/2) ln(1 + δ/a) + (a-1) ln(1 - 1/a)`.
pub fn log_r_delta(a: f64, delta: f64) -> Result<f64> {
    check_a(a)?;
    if !(delta >= -1.0 && delta.is_finite()) {
        return Err(domain("delta", delta, "[-1, inf)"));
    }
    let r_tilde = stirling_remainder(2.0 * a)? - 2.0 * stirling_remainder(a)?;
    Ok(r_tilde + delta + 1.0 - (a - 0.5) * (delta / a).ln_1p() + (a - 1.0) * (-1.0 / a).ln_1p())
}

/// Maximiser `x* = (1 + sqrt(y*))/2` of the density ratio, with
/// `y* = (1 - 8σ²(a-1))^+`; the mirror point `1 - x*` is also a maximiser.
pub fn argmax_density_ratio(a: f64, sigma: f64) -> Result<f64> {
    check_a(a)?;
    check_sigma(sigma)?;
    let y = (1.0 - 8.0 * sigma * sigma * (a - 1.0)).max(0.0);
    Ok(0.5 * (1.0 + y.sqrt()))
}

/// `(ln R(σ(a)), (δ(δ+1) + 3/4)/(2a))`: the exact value and the leading
/// term of its expansion in `1/a`.
pub fn log_r_expansion_check(delta: f64, a: f64) -> Result<(f64, f64)> {
    let lr = log_r_delta(a, delta)?;
    Ok((lr, (delta * (delta + 1.0) + 0.75) / (2.0 * a)))
}

/// `(R(σ) Φ(-(x-1/2)/σ), R(σ)/2 exp(-4(a+δ)(x-1/2)^2))` with
/// `σ = (8(a+δ))^{-1/2}`, both upper bounds on `B̄_{a,a}(x)` for `x >= 1/2`.
pub fn beta_aa_gaussian_tail(a: f64, delta: f64, x: f64) -> Result<(BoundEval, BoundEval)> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1]"));
    }
    let lr = log_r_delta(a, delta)?;
    let sigma = SigmaChoice::Custom(delta).sigma(a)?;
    let t = x - 0.5;
    let ok = t >= 0.0;
    let phi_form = lr + ln_std_normal_cdf(-t / sigma);
    let exp_form = lr - LN_2 - 4.0 * (a + delta) * t * t;
    Ok((
        BoundEval::from_ln(phi_form, Direction::Upper, ok),
        BoundEval::from_ln(exp_form, Direction::Upper, ok),
    ))
}

/// The tail probability a bound refers to.
pub fn tail(id: BoundId) -> Option<Tail> {
    match id {
        BoundId::GaussLeft => Some(Tail::Left),
        BoundId::GaussRight | BoundId::BetaAaPhiTail | BoundId::BetaAaExpTail => Some(Tail::Right),
        _ => None,
    }
}

/// Closed `x` interval on which a bound is stated for `p`.
pub fn region(id: BoundId, p: &Params) -> Option<XRegion> {
    let mode = p.p_mode().map_or(0.5, |m| m.clamp(0.0, 1.0));
    match id {
        BoundId::GaussLeft => Some(XRegion::closed(0.0, mode)),
        BoundId::GaussRight => Some(XRegion::closed(mode, 1.0)),
        BoundId::BetaAaPhiTail | BoundId::BetaAaExpTail => Some(XRegion::closed(0.5, 1.0)),
        _ => None,
    }
}

/// Evaluate a bound at `x in [0,1]`. The `Beta(a,a)` bounds use `δ = 1/2`
/// and are not applicable unless `a = b > 1`.
pub fn evaluate(id: BoundId, p: &Params, x: f64) -> Result<BoundEval> {
    evaluate_with_delta(id, p, x, SigmaChoice::Moment.delta())
}

/// Like [`evaluate`], but returns one value per `δ` in [`TAIL_DELTAS`] for
/// the `Beta(a,a)` bounds.
pub fn evaluate_all(id: BoundId, p: &Params, x: f64) -> Result<Vec<BoundEval>> {
    match id {
        BoundId::BetaAaPhiTail | BoundId::BetaAaExpTail => TAIL_DELTAS
            .iter()
            .map(|&d| evaluate_with_delta(id, p, x, d))
            .collect(),
        _ => Ok(vec![evaluate(id, p, x)?]),
    }
}

fn evaluate_with_delta(id: BoundId, p: &Params, x: f64, delta: f64) -> Result<BoundEval> {
    match id {
        BoundId::GaussLeft => Ok(gauss_tail(p, x)?.0),
        BoundId::GaussRight => Ok(gauss_tail(p, x)?.1),
        BoundId::BetaAaPhiTail | BoundId::BetaAaExpTail => {
            if !(0.0..=1.0).contains(&x) {
                return Err(domain("x", x, "[0, 1]"));
            }
            if p.a() != p.b() || p.a() <= 1.0 {
                return Ok(BoundEval::from_ln(0.0, Direction::NotApplicable, false));
            }
            let (phi, exp) = beta_aa_gaussian_tail(p.a(), delta, x)?;
            Ok(if id == BoundId::BetaAaPhiTail {
                phi
            } else {
                exp
            })
        }
        other => Err(Error::UnsupportedBound(other)),
    }
}
