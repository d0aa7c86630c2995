//! Gamma-limit versions of the `Q_{a,b}` bounds.
//!
//! Rescaling `b X` with `X ~ Beta(a,b)` converges to `Gamma(a, 1)` as
//! `b -> inf`, and the bounds on `Q_{a,b}(x/b)` converge to bounds on
//! `a Γ(a) G_a(x) / x^a`, where `G_a` is the gamma CDF. The survival
//! counterparts bound `Γ(a) e^x Ḡ_a(x)`.
//!
//! The survival bounds grow like `x^a`, so every value carries its log and
//! the targets are available in log form as well.

use crate::bound::{resolve_direction, BoundEval, BoundId, Direction, Span, XRegion};
use crate::special::{ln_reg_inc_gamma_lower, ln_reg_inc_gamma_upper, log_gamma};
use crate::{domain, Error, Result};

/// Bounds on `a Γ(a) G_a(x) / x^a`.
pub const CDF_IDS: [BoundId; 6] = [
    BoundId::GammaS,
    BoundId::Gamma1,
    BoundId::Gamma2,
    BoundId::Gamma3,
    BoundId::Gamma4,
    BoundId::Gamma5,
];

/// Bounds on `Γ(a) e^x Ḡ_a(x)`.
pub const SURVIVAL_IDS: [BoundId; 3] = [BoundId::GammaBarS, BoundId::GammaBar1, BoundId::GammaBar2];

const INF: f64 = f64::INFINITY;

fn check(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(domain("a", a, "(0, inf)"));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(domain("x", x, "(0, inf)"));
    }
    Ok(())
}

/// `x` region of every bound here: `(0, inf)`.
pub fn region(id: BoundId) -> Option<XRegion> {
    (CDF_IDS.contains(&id) || SURVIVAL_IDS.contains(&id)).then(|| XRegion::open(0.0, INF))
}

/// Direction of a gamma bound for shape `a`.
///
/// The CDF bounds have fixed directions: `Gamma1`, `Gamma2`, `Gamma5` are
/// lower bounds and `GammaS`, `Gamma3`, `Gamma4` upper bounds. The survival
/// bounds follow their case table in `a`; `GammaBarS` is only claimed for
/// `a >= 3`.
pub fn direction_of(id: BoundId, a: f64) -> Direction {
    use BoundId::*;
    let (lower, upper): (&[Span], &[Span]) = match id {
        Gamma1 | Gamma2 | Gamma5 => return Direction::Lower,
        GammaS | Gamma3 | Gamma4 => return Direction::Upper,
        GammaBar1 => (&[Span(0.0, 1.0), Span(2.0, 3.0)], &[Span(1.0, 2.0)]),
        GammaBar2 => (
            &[Span(1.0, 2.0), Span(3.0, INF)],
            &[Span(0.0, 1.0), Span(2.0, 3.0)],
        ),
        GammaBarS => (&[], &[Span(3.0, INF)]),
        _ => return Direction::NotApplicable,
    };
    resolve_direction(lower, upper, a)
}

/// `ln[a Γ(a) G_a(x) / x^a]`.
pub fn ln_cdf_target(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    Ok(log_gamma(a + 1.0)? + ln_reg_inc_gamma_lower(a, x)? - a * x.ln())
}

/// `ln[Γ(a) e^x Ḡ_a(x)]`.
pub fn ln_survival_target(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    Ok(log_gamma(a)? + x + ln_reg_inc_gamma_upper(a, x)?)
}

/// `Γ(a) e^x Ḡ_a(x)` for integer `a >= 1`, as `Γ(a) sum_{i<a} x^i/i!`.
pub fn survival_target_integer(a: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..a {
        term *= x / i as f64;
        sum += term;
    }
    let fact: f64 = (1..a).map(|i| i as f64).product();
    fact * sum
}

/// Evaluate a gamma bound at shape `a` and point `x > 0`.
pub fn evaluate(id: BoundId, a: f64, x: f64) -> Result<BoundEval> {
    use BoundId::*;
    check(a, x)?;
    let dir = direction_of(id, a);
    let ln_a1 = (a + 1.0).ln();
    let ln_x = x.ln();
    let e = match id {
        GammaS => {
            let gap = a + 1.0 - x;
            let ln = if gap <= 0.0 {
                INF
            } else {
                ln_a1 - gap.ln() - x
            };
            BoundEval::from_ln(ln, dir, true)
        }
        Gamma1 => BoundEval::from_ln(-a * x / (a + 1.0), dir, true),
        Gamma2 => BoundEval::from_ln_terms(
            &[(1.0, -x), (1.0, ln_x - ln_a1 - (a + 1.0) * x / (a + 2.0))],
            dir,
            true,
        ),
        Gamma3 => BoundEval::from_ln_terms(
            &[
                (1.0, -2.0 * ln_a1),
                (
                    1.0,
                    a.ln() + (a + 2.0).ln() - 2.0 * ln_a1 - (a + 1.0) * x / (a + 2.0),
                ),
            ],
            dir,
            true,
        ),
        Gamma4 => BoundEval::from_ln_terms(
            &[
                (1.0, a.ln() - ln_a1 - x),
                (1.0, -ln_a1),
                (
                    -1.0,
                    a.ln() + 2.0 * ln_x
                        - (2.0 * (a + 1.0) * (a + 2.0)).ln()
                        - 2.0 * (a + 2.0) * x / (3.0 * (a + 3.0)),
                ),
            ],
            dir,
            true,
        ),
        Gamma5 => {
            let ln_k = a.ln() - (6.0 * (a + 1.0) * (a + 2.0) * (a + 3.0)).ln() + 2.0 * ln_x;
            BoundEval::from_ln_terms(
                &[
                    (1.0, a.ln() - ln_a1 - x),
                    (1.0, -ln_a1),
                    (-1.0, ln_k + (a + 5.0).ln()),
                    (-1.0, ln_k + (2.0 * (a + 2.0)).ln() - x),
                ],
                dir,
                true,
            )
        }
        GammaBarS => {
            let ln = if x <= a {
                a * a.ln()
            } else {
                a * ln_x - (x - a + 1.0).ln()
            };
            BoundEval::from_ln(ln, dir, true)
        }
        GammaBar1 => BoundEval::from_ln((a - 1.0) * x.ln_1p(), dir, true),
        GammaBar2 => {
            let mut terms = vec![(1.0, (a - 1.0) * ln_x)];
            if a != 1.0 {
                terms.push((
                    (a - 1.0).signum(),
                    (a - 1.0).abs().ln() + (a - 2.0) * x.ln_1p(),
                ));
            }
            BoundEval::from_ln_terms(&terms, dir, true)
        }
        other => return Err(Error::UnsupportedBound(other)),
    };
    Ok(e)
}

/// `(Q^{[1]}, Q^{[2]}, Q^{[5]})`, each a lower bound on `a Γ(a) G_a(x)/x^a`.
pub fn gamma_lower_bounds(a: f64, x: f64) -> Result<[BoundEval; 3]> {
    Ok([
        evaluate(BoundId::Gamma1, a, x)?,
        evaluate(BoundId::Gamma2, a, x)?,
        evaluate(BoundId::Gamma5, a, x)?,
    ])
}

/// `(Q^{[S]}, Q^{[3]}, Q^{[4]})`, each an upper bound on
/// `a Γ(a) G_a(x)/x^a`; `Q^{[S]}` is `+inf` for `x >= a+1`.
pub fn gamma_upper_bounds(a: f64, x: f64) -> Result<[BoundEval; 3]> {
    Ok([
        evaluate(BoundId::GammaS, a, x)?,
        evaluate(BoundId::Gamma3, a, x)?,
        evaluate(BoundId::Gamma4, a, x)?,
    ])
}

/// `(Q̄^{[S]}, Q̄^{[1]}, Q̄^{[2]})` with directions resolved from `a`.
pub fn gamma_survival_bounds(a: f64, x: f64) -> Result<[BoundEval; 3]> {
    Ok([
        evaluate(BoundId::GammaBarS, a, x)?,
        evaluate(BoundId::GammaBar1, a, x)?,
        evaluate(BoundId::GammaBar2, a, x)?,
    ])
}
