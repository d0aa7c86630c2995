//! Exponential tail bounds for `Beta(a,b)`.
//!
//! All bounds here are upper bounds on a tail probability, either
//! `B_{a,b}(x) = P(X <= x)` or `B̄_{a,b}(x) = P(X >= x)`, and are computed
//! as logarithms. Right-tail bounds are obtained from left-tail ones through
//! `B̄_{a,b}(x) = B_{b,a}(1-x)`.
//!
//! `K(q,x)` denotes the Bernoulli Kullback-Leibler divergence
//! [`kl_bernoulli`].

use crate::bound::{BoundEval, BoundId, Direction, Tail, XRegion};
use crate::special::{kl_bernoulli, ln_reg_inc_beta, ln_reg_inc_beta_survival, Params};
use crate::{domain, Error, Result};

/// Every bound implemented here.
pub const IDS: [BoundId; 17] = [
    BoundId::KlLeft,
    BoundId::KlRight,
    BoundId::DensityRatioLeft,
    BoundId::DensityRatioRight,
    BoundId::ExpTailLeft,
    BoundId::ExpTailRight,
    BoundId::KlFormLeft,
    BoundId::KlFormRight,
    BoundId::BernsteinLeft,
    BoundId::HoeffdingLeft,
    BoundId::BernsteinRight,
    BoundId::HoeffdingRight,
    BoundId::MarchalArbelLeft,
    BoundId::MarchalArbelRight,
    BoundId::Skorski,
    BoundId::BernsteinMean,
    BoundId::BernsteinLargeDev,
];

/// Values of `d` at which the large-deviation bound is checked.
pub const LARGE_DEVIATION_D: [f64; 3] = [0.5, 1.0, 2.0];

fn check_x(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain("x", x, "[0, 1]"))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(domain("eps", eps, "[0, inf)"))
    }
}

/// `c * l`, treating `0 * (-inf)` as `0`.
fn weighted(c: f64, l: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * l
    }
}

/// `ln[(x/q)^s ((1-x)/(1-q))^t]`.
fn ln_power_ratio(x: f64, q: f64, s: f64, t: f64) -> f64 {
    weighted(s, x.ln() - q.ln()) + weighted(t, (-x).ln_1p() - (-q).ln_1p())
}

fn upper_if(cond: bool) -> Direction {
    if cond {
        Direction::Upper
    } else {
        Direction::NotApplicable
    }
}

/// A bound with no information, reported outside its region.
fn vacuous(direction: Direction) -> BoundEval {
    BoundEval::from_ln(0.0, direction, false)
}

/// The tail probability a bound refers to.
pub fn tail(id: BoundId) -> Option<Tail> {
    use BoundId::*;
    match id {
        KlLeft | DensityRatioLeft | ExpTailLeft | KlFormLeft | BernsteinLeft | HoeffdingLeft
        | MarchalArbelLeft => Some(Tail::Left),
        KlRight | DensityRatioRight | ExpTailRight | KlFormRight | BernsteinRight
        | HoeffdingRight | MarchalArbelRight | Skorski | BernsteinMean | BernsteinLargeDev => {
            Some(Tail::Right)
        }
        _ => None,
    }
}

/// Closed `x` interval on which a bound is stated for `p`. The
/// large-deviation bound additionally needs `x - p >= c(d) σ`, which is
/// reported through `region_ok`.
pub fn region(id: BoundId, p: &Params) -> Option<XRegion> {
    use BoundId::*;
    let m = p.mean();
    let left_mode = p.p_left().min(1.0);
    let right_mode = p.p_right().max(0.0);
    let r = match id {
        KlLeft | DensityRatioLeft | MarchalArbelLeft => XRegion::closed(0.0, m),
        KlRight | DensityRatioRight | MarchalArbelRight | Skorski | BernsteinMean
        | BernsteinLargeDev => XRegion::closed(m, 1.0),
        ExpTailLeft if p.b() <= 1.0 => XRegion::closed(0.0, 1.0),
        ExpTailRight if p.a() <= 1.0 => XRegion::closed(0.0, 1.0),
        ExpTailLeft | KlFormLeft | BernsteinLeft | HoeffdingLeft => XRegion::closed(0.0, left_mode),
        ExpTailRight | KlFormRight | BernsteinRight | HoeffdingRight => {
            XRegion::closed(right_mode, 1.0)
        }
        _ => return None,
    };
    Some(r)
}

/// `ln` of the tail probability targeted by `tail`.
pub fn ln_tail_target(tail: Tail, p: &Params, x: f64) -> Result<f64> {
    match tail {
        Tail::Left => ln_reg_inc_beta(p, x),
        Tail::Right => ln_reg_inc_beta_survival(p, x),
    }
}

/// `exp(-(a+b) K(p,x))` as `(left, right)`: the left value bounds
/// `B_{a,b}(x)` for `x <= p`, the right value bounds `B̄_{a,b}(x)` for
/// `x >= p`.
pub fn kl_tail_bound(p: &Params, x: f64) -> Result<(BoundEval, BoundEval)> {
    check_x(x)?;
    let ln = -(p.a() + p.b()) * kl_bernoulli(p.mean(), x)?.get();
    let m = p.mean();
    Ok((
        BoundEval::from_ln(ln, Direction::Upper, x <= m),
        BoundEval::from_ln(ln, Direction::Upper, x >= m),
    ))
}

/// `B_{a,b}(q) (x/q)^a ((1-x)/(1-q))^{c_l}` with `c_l = a(b-1)^+/(a+1)`,
/// an upper bound on `B_{a,b}(x)` for `x in [0,q]`.
pub fn density_ratio_left(p: &Params, q: f64, x: f64) -> Result<BoundEval> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain("q", q, "(0, 1)"));
    }
    if !(0.0..=q).contains(&x) {
        return Err(domain("x", x, "[0, q]"));
    }
    let (a, b) = (p.a(), p.b());
    let c_l = a * (b - 1.0).max(0.0) / (a + 1.0);
    let ln = ln_reg_inc_beta(p, q)? + ln_power_ratio(x, q, a, c_l);
    Ok(BoundEval::from_ln(ln, Direction::Upper, true))
}

/// `B̄_{a,b}(q) (x/q)^{c_r} ((1-x)/(1-q))^b` with `c_r = b(a-1)^+/(b+1)`,
/// an upper bound on `B̄_{a,b}(x)` for `x in [q,1]`.
pub fn density_ratio_right(p: &Params, q: f64, x: f64) -> Result<BoundEval> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain("q", q, "(0, 1)"));
    }
    if !(q..=1.0).contains(&x) {
        return Err(domain("x", x, "[q, 1]"));
    }
    let (a, b) = (p.a(), p.b());
    let c_r = b * (a - 1.0).max(0.0) / (b + 1.0);
    let ln = ln_reg_inc_beta_survival(p, q)? + ln_power_ratio(x, q, c_r, b);
    Ok(BoundEval::from_ln(ln, Direction::Upper, true))
}

/// Logs of the three case-wise bounds on `B_{a,b}(x)`; `None` where a case
/// does not apply to `(a, b, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTailCases {
    /// `x^a`, when `b <= 1`.
    pub power: Option<f64>,
    /// `(x/p_l)^a ((1-x)/(1-p_l))^{a(b-1)/(a+1)}` on `[0, p_l]`, when `b > 1`.
    pub mode: Option<f64>,
    /// Half the same form centred at `p`, on `[0, p]`, when `a >= b > 1`.
    pub median: Option<f64>,
}

impl ExpTailCases {
    /// Smallest applicable case.
    pub fn best(&self) -> Option<f64> {
        [self.power, self.mode, self.median]
            .into_iter()
            .flatten()
            .reduce(f64::min)
    }
}

/// The left-tail cases at `x in [0,1]`.
pub fn exp_tail_left_cases(p: &Params, x: f64) -> Result<ExpTailCases> {
    check_x(x)?;
    let (a, b) = (p.a(), p.b());
    let c = a * (b - 1.0) / (a + 1.0);
    let power = (b <= 1.0).then(|| weighted(a, x.ln()));
    let p_l = p.p_left();
    let mode = (b > 1.0 && x <= p_l).then(|| ln_power_ratio(x, p_l, a, c));
    let m = p.mean();
    let median =
        (a >= b && b > 1.0 && x <= m).then(|| -std::f64::consts::LN_2 + ln_power_ratio(x, m, a, c));
    Ok(ExpTailCases {
        power,
        mode,
        median,
    })
}

/// The right-tail cases at `x in [0,1]`, mirrored from the left tail of
/// `Beta(b,a)` at `1-x`.
pub fn exp_tail_right_cases(p: &Params, x: f64) -> Result<ExpTailCases> {
    check_x(x)?;
    exp_tail_left_cases(&p.swapped(), 1.0 - x)
}

fn from_cases(cases: ExpTailCases) -> BoundEval {
    match cases.best() {
        Some(ln) => BoundEval::from_ln(ln, Direction::Upper, true),
        None => vacuous(Direction::Upper),
    }
}

/// Smallest applicable exponential bound on `B_{a,b}(x)`.
pub fn exp_tail_left(p: &Params, x: f64) -> Result<BoundEval> {
    Ok(from_cases(exp_tail_left_cases(p, x)?))
}

/// Smallest applicable exponential bound on `B̄_{a,b}(x)`.
pub fn exp_tail_right(p: &Params, x: f64) -> Result<BoundEval> {
    Ok(from_cases(exp_tail_right_cases(p, x)?))
}

/// `exp(-a(a+b)/(a+1) K(p_l, x))` for `B_{a,b}(x)`, `x in [0, p_l]`,
/// `b >= 1`; and `exp(-b(a+b)/(b+1) K(p_r, x))` for `B̄_{a,b}(x)`,
/// `x in [p_r, 1]`, `a >= 1`.
pub fn kl_form_bounds(p: &Params, x: f64) -> Result<(BoundEval, BoundEval)> {
    check_x(x)?;
    let left = kl_form_left(p, x)?;
    let right = kl_form_left(&p.swapped(), 1.0 - x)?;
    Ok((left, right))
}

fn kl_form_left(p: &Params, x: f64) -> Result<BoundEval> {
    let (a, b) = (p.a(), p.b());
    if b < 1.0 {
        return Ok(vacuous(Direction::NotApplicable));
    }
    let p_l = p.p_left();
    let ln = -a * (a + b) / (a + 1.0) * kl_bernoulli(p_l, x)?.get();
    Ok(BoundEval::from_ln(ln, Direction::Upper, x <= p_l))
}

/// Lower bounds on `K(q,x)` as `(bernstein, hoeffding)`:
/// `(x-q)^2 / (2 m (1-m))` with `m = q/3 + 2x/3`, and `2 (x-q)^2`.
pub fn kl_quadratic_lower(q: f64, x: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&q) {
        return Err(domain("q", q, "[0, 1]"));
    }
    check_x(x)?;
    if x == q {
        return Ok((0.0, 0.0));
    }
    let d2 = (x - q) * (x - q);
    let m = q / 3.0 + 2.0 * x / 3.0;
    Ok((d2 / (2.0 * m * (1.0 - m)), 2.0 * d2))
}

/// Bernstein- and Hoeffding-form bounds in the order
/// `[bernstein-left, hoeffding-left, bernstein-right, hoeffding-right]`.
pub fn bernstein_hoeffding_bounds(p: &Params, x: f64) -> Result<[BoundEval; 4]> {
    check_x(x)?;
    let [bl, hl] = bernstein_hoeffding_left(p, x)?;
    let [br, hr] = bernstein_hoeffding_left(&p.swapped(), 1.0 - x)?;
    Ok([bl, hl, br, hr])
}

fn bernstein_hoeffding_left(p: &Params, x: f64) -> Result<[BoundEval; 2]> {
    let (a, b) = (p.a(), p.b());
    if b < 1.0 {
        return Ok([vacuous(Direction::NotApplicable); 2]);
    }
    let p_l = p.p_left();
    let scale = a * (a + b) / (a + 1.0);
    let (bern, hoeff) = kl_quadratic_lower(p_l, x)?;
    let ok = x <= p_l;
    Ok([
        BoundEval::from_ln(-scale * bern, Direction::Upper, ok),
        BoundEval::from_ln(-scale * hoeff, Direction::Upper, ok),
    ])
}

/// `exp(-2(a+b+1)(x-p)^2)` as `(left, right)`, valid for `x <= p` and
/// `x >= p` respectively.
pub fn marchal_arbel(p: &Params, x: f64) -> Result<(BoundEval, BoundEval)> {
    check_x(x)?;
    let m = p.mean();
    let ln = -2.0 * (p.a() + p.b() + 1.0) * (x - m) * (x - m);
    Ok((
        BoundEval::from_ln(ln, Direction::Upper, x <= m),
        BoundEval::from_ln(ln, Direction::Upper, x >= m),
    ))
}

/// Exponent gaps between the Hoeffding-form bounds and the Marchal-Arbel
/// bound, `(left, right)`:
/// `a(a+b)/(a+1) (x-p_l)^2 - (a+b+1)(x-p)^2` and
/// `b(a+b)/(b+1) (x-p_r)^2 - (a+b+1)(x-p)^2`.
pub fn hoeffding_gap(p: &Params, x: f64) -> (f64, f64) {
    let (a, b) = (p.a(), p.b());
    let s = a + b;
    let m = p.mean();
    let ma = (s + 1.0) * (x - m) * (x - m);
    let dl = x - p.p_left();
    let dr = x - p.p_right();
    (
        a * s / (a + 1.0) * dl * dl - ma,
        b * s / (b + 1.0) * dr * dr - ma,
    )
}

/// Variance proxy and scale term of the Skorski bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkorskiParams {
    /// `p(1-p)/(a+b+1)`, the variance of `X`.
    pub sigma2: f64,
    /// `(2/3)(1-2p)^+/(a+b+2)`.
    pub gamma: f64,
}

impl SkorskiParams {
    pub fn new(p: &Params) -> Self {
        let s = p.a() + p.b();
        let var = p.mean() * p.mean_complement();
        let skew = (p.mean_complement() - p.mean()).max(0.0);
        SkorskiParams {
            sigma2: var / (s + 1.0),
            gamma: 2.0 / 3.0 * skew / (s + 2.0),
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

/// `exp(-eps^2 / (2(σ² + γ eps)))`, an upper bound on `P(X - p >= eps)`.
pub fn skorski_bound(p: &Params, eps: f64) -> Result<BoundEval> {
    check_eps(eps)?;
    let sp = SkorskiParams::new(p);
    let ln = -eps * eps / (2.0 * (sp.sigma2 + sp.gamma * eps));
    Ok(BoundEval::from_ln(ln, Direction::Upper, true))
}

/// `exp(-(a+b+1+a/b) eps^2 / (2[p(1-p) + (2/3)(1-2p)^+ eps]))` for
/// `P(X - p >= eps)`, claimed for `a, b >= 1`.
pub fn bernstein_mean_bound(p: &Params, eps: f64) -> Result<BoundEval> {
    check_eps(eps)?;
    let (a, b) = (p.a(), p.b());
    let var = p.mean() * p.mean_complement();
    let skew = (p.mean_complement() - p.mean()).max(0.0);
    let ln = -(a + b + 1.0 + a / b) * eps * eps / (2.0 * (var + 2.0 / 3.0 * skew * eps));
    Ok(BoundEval::from_ln(ln, upper_if(a >= 1.0 && b >= 1.0), true))
}

/// `c(d) = sqrt(2/π) e^{9d/4}`, the threshold multiple of `σ` above which
/// [`large_deviation_bound`] is proven.
pub fn large_deviation_constant(d: f64) -> f64 {
    (2.0 / std::f64::consts::PI).sqrt() * (2.25 * d).exp()
}

/// `exp(-(a+b+d) eps^2 / (2(p + 2eps/3)(1 - p - 2eps/3)^+))` for
/// `P(X - p >= eps)`, claimed for `a, b >= 1` and `eps >= c(d) σ`.
pub fn large_deviation_bound(p: &Params, eps: f64, d: f64) -> Result<BoundEval> {
    check_eps(eps)?;
    if !(d > 0.0 && d.is_finite()) {
        return Err(domain("d", d, "(0, inf)"));
    }
    let (a, b) = (p.a(), p.b());
    let dir = upper_if(a >= 1.0 && b >= 1.0);
    let ok = eps >= large_deviation_constant(d) * SkorskiParams::new(p).sigma();
    let lo = p.mean() + 2.0 * eps / 3.0;
    let hi = p.mean_complement() - 2.0 * eps / 3.0;
    if eps == 0.0 {
        return Ok(BoundEval::from_ln(0.0, dir, ok));
    }
    if hi <= 0.0 {
        return Ok(BoundEval::from_value(0.0, dir, ok));
    }
    let ln = -(a + b + d) * eps * eps / (2.0 * lo * hi);
    Ok(BoundEval::from_ln(ln, dir, ok))
}

/// The smallest multiple `c` of `σ` such that [`large_deviation_bound`] holds at every
/// `eps = k (1-p)/n >= c σ`, `k = 1..n`, judged against the incomplete beta
/// oracle. Diagnostic only; the claimed threshold is [`large_deviation_constant`].
pub fn empirical_large_deviation_multiple(p: &Params, d: f64, n: usize) -> Result<f64> {
    let sigma = SkorskiParams::new(p).sigma();
    let span = p.mean_complement();
    let mut worst = 0.0;
    for k in 1..=n {
        let eps = span * k as f64 / n as f64;
        let x = (p.mean() + eps).min(1.0);
        let bound = large_deviation_bound(p, eps, d)?.ln();
        let target = ln_reg_inc_beta_survival(p, x)?;
        if bound < target {
            worst = eps;
        }
    }
    Ok(worst / sigma)
}

/// Logs of `(x/p(c))^a ((1-x)/(1-p(c)))^c`, `p(c) = a/(a+c)`, for
/// `c = a(b-1)/(a+1)`, `b-1` and `b`. Defined for `b > 1` and
/// `x in (0, p]`, where the three values are strictly increasing.
pub fn dominance_chain(p: &Params, x: f64) -> Option<[f64; 3]> {
    let (a, b) = (p.a(), p.b());
    if !(b > 1.0 && x > 0.0 && x <= p.mean()) {
        return None;
    }
    let form = |c: f64| ln_power_ratio(x, a / (a + c), a, c);
    Some([form(a * (b - 1.0) / (a + 1.0)), form(b - 1.0), form(b)])
}

/// Evaluate a bound at `x in [0,1]`.
///
/// The anchored bounds use `q = p`. The `eps`-parameterised bounds use
/// `eps = x - p` and are outside their region for `x < p`; the
/// large-deviation bound uses `d = 1`.
pub fn evaluate(id: BoundId, p: &Params, x: f64) -> Result<BoundEval> {
    evaluate_with_d(id, p, x, 1.0)
}

/// Like [`evaluate`], but returns one value per `d` in [`LARGE_DEVIATION_D`] for the
/// large-deviation bound.
pub fn evaluate_all(id: BoundId, p: &Params, x: f64) -> Result<Vec<BoundEval>> {
    if id == BoundId::BernsteinLargeDev {
        LARGE_DEVIATION_D
            .iter()
            .map(|&d| evaluate_with_d(id, p, x, d))
            .collect()
    } else {
        Ok(vec![evaluate(id, p, x)?])
    }
}

fn evaluate_with_d(id: BoundId, p: &Params, x: f64, d: f64) -> Result<BoundEval> {
    use BoundId::*;
    check_x(x)?;
    let m = p.mean();
    let eps = x - m;
    let e = match id {
        KlLeft => kl_tail_bound(p, x)?.0,
        KlRight => kl_tail_bound(p, x)?.1,
        DensityRatioLeft if x <= m => density_ratio_left(p, m, x)?,
        DensityRatioRight if x >= m => density_ratio_right(p, m, x)?,
        DensityRatioLeft | DensityRatioRight => vacuous(Direction::Upper),
        ExpTailLeft => exp_tail_left(p, x)?,
        ExpTailRight => exp_tail_right(p, x)?,
        KlFormLeft => kl_form_bounds(p, x)?.0,
        KlFormRight => kl_form_bounds(p, x)?.1,
        BernsteinLeft => bernstein_hoeffding_bounds(p, x)?[0],
        HoeffdingLeft => bernstein_hoeffding_bounds(p, x)?[1],
        BernsteinRight => bernstein_hoeffding_bounds(p, x)?[2],
        HoeffdingRight => bernstein_hoeffding_bounds(p, x)?[3],
        MarchalArbelLeft => marchal_arbel(p, x)?.0,
        MarchalArbelRight => marchal_arbel(p, x)?.1,
        Skorski | BernsteinMean | BernsteinLargeDev if eps < 0.0 => {
            let dir = match id {
                Skorski => Direction::Upper,
                _ => upper_if(p.a() >= 1.0 && p.b() >= 1.0),
            };
            vacuous(dir)
        }
        Skorski => skorski_bound(p, eps)?,
        BernsteinMean => bernstein_mean_bound(p, eps)?,
        BernsteinLargeDev => large_deviation_bound(p, eps, d)?,
        other => return Err(Error::UnsupportedBound(other)),
    };
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{reg_inc_beta, reg_inc_beta_survival};
    use proptest::prelude::*;

    fn pr(a: f64, b: f64) -> Params {
        Params::new(a, b).unwrap()
    }

    #[test]
    fn kl_bound_examples() {
        let p = pr(4.0, 8.0);
        let (l, r) = kl_tail_bound(&p, p.mean()).unwrap();
        assert_eq!((l.value(), r.value()), (1.0, 1.0));
        assert_eq!(kl_tail_bound(&p, 0.0).unwrap().0.value(), 0.0);
        let (l, r) = kl_tail_bound(&p, 0.2).unwrap();
        assert!(l.region_ok && !r.region_ok);
        assert!(l.value() >= reg_inc_beta(&p, 0.2).unwrap());
    }

    #[test]
    fn density_ratio_examples() {
        let p = pr(4.0, 8.0);
        let at_q = density_ratio_left(&p, 0.4, 0.4).unwrap().value();
        assert!((at_q - reg_inc_beta(&p, 0.4).unwrap()).abs() < 1e-15);
        assert!(
            density_ratio_left(&p, 0.4, 0.2).unwrap().value() >= reg_inc_beta(&p, 0.2).unwrap()
        );
        assert!(
            density_ratio_right(&p, 0.4, 0.6).unwrap().value()
                >= reg_inc_beta_survival(&p, 0.6).unwrap()
        );
        assert_eq!(density_ratio_right(&p, 0.4, 1.0).unwrap().value(), 0.0);
        assert!(density_ratio_left(&p, 0.4, 0.5).is_err());
        assert!(density_ratio_right(&p, 0.4, 0.3).is_err());
        // b <= 1 drops the second factor
        let q = pr(2.0, 0.5);
        let v = density_ratio_left(&q, 0.5, 0.25).unwrap().value();
        let expect = reg_inc_beta(&q, 0.5).unwrap() * 0.25;
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn exp_tail_examples() {
        let p = pr(2.0, 0.5);
        let c = exp_tail_left_cases(&p, 0.7).unwrap();
        assert_eq!(c.mode, None);
        assert!((c.power.unwrap() - 2.0 * 0.7f64.ln()).abs() < 1e-15);
        let p = pr(4.0, 8.0);
        assert!(
            exp_tail_left_cases(&p, p.p_left())
                .unwrap()
                .mode
                .unwrap()
                .abs()
                < 1e-15
        );
        let p = pr(8.0, 4.0);
        let m = p.mean();
        let c = exp_tail_left_cases(&p, m).unwrap();
        assert!((c.median.unwrap() + std::f64::consts::LN_2).abs() < 1e-15);
        assert!(reg_inc_beta(&p, m).unwrap() <= 0.5);
        let q = pr(0.5, 3.0);
        let e = exp_tail_right(&q, 0.3).unwrap();
        assert!((e.value() - 0.7f64.powf(3.0)).abs() < 1e-15);
        assert_eq!(exp_tail_right(&pr(4.0, 8.0), 1.0).unwrap().value(), 0.0);
        let e = exp_tail_right(&pr(4.0, 8.0), 0.5).unwrap();
        assert!(e.value() >= reg_inc_beta_survival(&pr(4.0, 8.0), 0.5).unwrap());
    }

    #[test]
    fn kl_form_matches_second_case() {
        let p = pr(4.0, 8.0);
        let (l, _) = kl_form_bounds(&p, 0.2).unwrap();
        let c = exp_tail_left_cases(&p, 0.2).unwrap().mode.unwrap();
        assert!((l.ln() - c).abs() <= 1e-12 * c.abs());
        assert!(l.value() >= reg_inc_beta(&p, 0.2).unwrap());
        assert!((kl_form_bounds(&p, p.p_left()).unwrap().0.value() - 1.0).abs() < 1e-15);
        assert_eq!(
            kl_form_bounds(&pr(2.0, 0.5), 0.2).unwrap().0.direction,
            Direction::NotApplicable
        );
    }

    #[test]
    fn quadratic_kl_examples() {
        assert_eq!(kl_quadratic_lower(0.3, 0.3).unwrap(), (0.0, 0.0));
        let (bern, hoeff) = kl_quadratic_lower(0.5, 0.9).unwrap();
        let k = kl_bernoulli(0.5, 0.9).unwrap().get();
        assert!((hoeff - 0.32).abs() < 1e-15);
        assert!(bern >= hoeff && bern <= k);
        let (bern, _) = kl_quadratic_lower(0.0, 0.5).unwrap();
        assert!(bern <= std::f64::consts::LN_2);
    }

    #[test]
    fn bernstein_hoeffding_examples() {
        let p = pr(4.0, 8.0);
        let b = bernstein_hoeffding_bounds(&p, p.p_left()).unwrap();
        assert_eq!((b[0].value(), b[1].value()), (1.0, 1.0));
        let b = bernstein_hoeffding_bounds(&p, 0.1).unwrap();
        let t = reg_inc_beta(&p, 0.1).unwrap();
        assert!(b[0].value() >= t && b[0].value() <= b[1].value());
        let b = bernstein_hoeffding_bounds(&p, 0.7).unwrap();
        let t = reg_inc_beta_survival(&p, 0.7).unwrap();
        assert!(b[2].value() >= t && b[3].value() >= t);
    }

    #[test]
    fn marchal_arbel_examples() {
        let p = pr(4.0, 8.0);
        assert_eq!(marchal_arbel(&p, p.mean()).unwrap().0.value(), 1.0);
        assert!(marchal_arbel(&p, 0.1).unwrap().0.value() >= reg_inc_beta(&p, 0.1).unwrap());
        let (l, r) = hoeffding_gap(&p, 0.0);
        assert!((l - 32.0 / 144.0).abs() < 1e-14);
        let (_, r1) = hoeffding_gap(&p, 1.0);
        assert!((r1 - 32.0 / 144.0).abs() < 1e-14);
        assert!(r.is_finite());
        let (l, _) = hoeffding_gap(&p, p.mean());
        assert!((l - 4.0 / 60.0).abs() < 1e-14);
    }

    #[test]
    fn skorski_and_bernstein_examples() {
        let p = pr(4.0, 8.0);
        assert_eq!(skorski_bound(&p, 0.0).unwrap().value(), 1.0);
        let sp = SkorskiParams::new(&p);
        assert!((sp.sigma2 - 2.0 / 9.0 / 13.0).abs() < 1e-16);
        assert!((sp.gamma - 2.0 / 9.0 / 14.0).abs() < 1e-16);
        let v = skorski_bound(&p, 0.2).unwrap().value();
        let direct = (-0.04 / (2.0 * (sp.sigma2 + sp.gamma * 0.2))).exp();
        assert!((v - direct).abs() < 1e-15);
        assert_eq!(SkorskiParams::new(&pr(8.0, 4.0)).gamma, 0.0);

        assert_eq!(bernstein_mean_bound(&p, 0.0).unwrap().value(), 1.0);
        let t = reg_inc_beta_survival(&p, p.mean() + 0.2).unwrap();
        assert!(bernstein_mean_bound(&p, 0.2).unwrap().value() >= t);
        let q = pr(8.0, 4.0);
        assert!(
            bernstein_mean_bound(&q, 0.1).unwrap().value()
                <= skorski_bound(&q, 0.1).unwrap().value()
        );
        assert_eq!(
            bernstein_mean_bound(&pr(0.5, 2.0), 0.1).unwrap().direction,
            Direction::NotApplicable
        );
    }

    #[test]
    fn large_deviation_examples() {
        let c1 = large_deviation_constant(1.0);
        assert!((c1 - (2.0 / std::f64::consts::PI).sqrt() * 2.25f64.exp()).abs() < 1e-15);
        let p = pr(25.0, 25.0);
        let sigma = SkorskiParams::new(&p).sigma();
        let e = large_deviation_bound(&p, 8.0 * sigma, 1.0).unwrap();
        assert!(e.region_ok);
        // 8σ exceeds 1 - p here, so the tail is empty and only positivity is at stake
        assert!(0.5 + 8.0 * sigma > 1.0 && e.value() > 0.0);
        let e = large_deviation_bound(&pr(400.0, 400.0), 0.2, 1.0).unwrap();
        assert!(e.region_ok);
        assert!(e.ln() >= ln_reg_inc_beta_survival(&pr(400.0, 400.0), 0.7).unwrap());
        assert!(
            !large_deviation_bound(&p, 7.0 * sigma, 1.0)
                .unwrap()
                .region_ok
        );
        // p + 2 eps/3 >= 1 forces the bound to zero
        let q = pr(1.0, 1.0);
        assert_eq!(large_deviation_bound(&q, 0.8, 1.0).unwrap().value(), 0.0);
        assert!(large_deviation_bound(&q, 0.1, 0.0).is_err());
        let c_star = empirical_large_deviation_multiple(&p, 1.0, 200).unwrap();
        assert!(c_star <= c1);
    }

    #[test]
    fn evaluate_covers_every_id() {
        let p = pr(3.0, 5.0);
        for id in IDS {
            assert!(tail(id).is_some());
            for x in [0.0, 0.2, p.mean(), 0.6, 1.0] {
                evaluate(id, &p, x).unwrap();
            }
        }
        assert_eq!(
            evaluate_all(BoundId::BernsteinLargeDev, &p, 0.9)
                .unwrap()
                .len(),
            3
        );
        assert!(!evaluate(BoundId::Skorski, &p, 0.1).unwrap().region_ok);
        assert!(evaluate(BoundId::Q1, &p, 0.1).is_err());
    }

    fn shape() -> impl Strategy<Value = f64> {
        prop_oneof![0.2f64..1.0, 1.0f64..10.0, 10.0f64..300.0]
    }

    proptest! {
        #[test]
        fn kl_chain(q in 0.0f64..=1.0, x in 0.0f64..=1.0) {
            let k = kl_bernoulli(q, x).unwrap().get();
            let (bern, hoeff) = kl_quadratic_lower(q, x).unwrap();
            prop_assert!(k >= bern * (1.0 - 1e-12));
            prop_assert!(bern >= hoeff * (1.0 - 1e-12));
        }

        #[test]
        fn kl_form_is_the_second_case(a in shape(), b in 1.0f64..300.0, t in 0.0f64..=1.0) {
            let p = pr(a, b);
            let x = t * p.p_left();
            let (l, _) = kl_form_bounds(&p, x).unwrap();
            // at b = 1 the second case degenerates to x^a
            let cases = exp_tail_left_cases(&p, x).unwrap();
            let c = cases.mode.or(cases.power).unwrap();
            prop_assert!(l.ln() == c || (l.ln() - c).abs() <= 1e-12 * c.abs().max(1.0));
        }

        #[test]
        fn chain_is_strict(a in shape(), b in 1.01f64..300.0, t in 0.01f64..=1.0) {
            let p = pr(a, b);
            let [here, v8, kl] = dominance_chain(&p, t * p.mean()).unwrap();
            prop_assert!(here < v8 && v8 < kl);
        }

        #[test]
        fn bernstein_mean_beats_skorski_when_p_high(b in 1.0f64..100.0, r in 1.0f64..5.0, u in 0.0f64..1.0) {
            let p = pr(b * r, b);
            let eps = u * p.mean_complement();
            let c3 = bernstein_mean_bound(&p, eps).unwrap().ln();
            let sk = skorski_bound(&p, eps).unwrap().ln();
            prop_assert!(c3 <= sk + 1e-15);
        }
    }
}
