//! Identifiers and evaluation results shared by all bound families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::special::{compensated_sum, ExtReal};

/// The side from which a bound approaches its target quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// The bound is `<=` the target.
    Lower,
    /// The bound is `>=` the target.
    Upper,
    /// Both directions hold, so the bound coincides with the target.
    Equality,
    /// No inequality is claimed for these parameters.
    NotApplicable,
}

impl Direction {
    pub fn is_lower(self) -> bool {
        matches!(self, Direction::Lower | Direction::Equality)
    }

    pub fn is_upper(self) -> bool {
        matches!(self, Direction::Upper | Direction::Equality)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
            Direction::Equality => "equality",
            Direction::NotApplicable => "n/a",
        };
        f.write_str(s)
    }
}

/// Result of evaluating one bound at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEval {
    pub value: ExtReal,
    /// `ln(value)` computed without going through `value`; `None` when the
    /// bound is not positive.
    pub ln_value: Option<f64>,
    pub direction: Direction,
    /// Whether the evaluation point lies in the bound's stated validity region.
    pub region_ok: bool,
}

impl BoundEval {
    /// Build from a log-domain value. `ln = +inf` gives a `+inf` bound.
    pub(crate) fn from_ln(ln: f64, direction: Direction, region_ok: bool) -> Self {
        debug_assert!(!ln.is_nan(), "NaN log-bound");
        BoundEval {
            value: ExtReal::new(ln.exp()),
            ln_value: Some(ln),
            direction,
            region_ok,
        }
    }

    /// Build from a signed sum `sum_i sign_i * exp(ln_i)`, evaluated with
    /// compensation after scaling by the largest term.
    pub(crate) fn from_ln_terms(
        terms: &[(f64, f64)],
        direction: Direction,
        region_ok: bool,
    ) -> Self {
        let m = terms
            .iter()
            .map(|&(_, l)| l)
            .fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return BoundEval::from_value(0.0, direction, region_ok);
        }
        if m == f64::INFINITY {
            return BoundEval::from_ln(f64::INFINITY, direction, region_ok);
        }
        let scaled: Vec<f64> = terms.iter().map(|&(s, l)| s * (l - m).exp()).collect();
        let sum = compensated_sum(&scaled);
        if sum > 0.0 {
            BoundEval::from_ln(m + sum.ln(), direction, region_ok)
        } else {
            BoundEval::from_value(sum * m.exp(), direction, region_ok)
        }
    }

    /// Build from a linear value; the logarithm is taken when positive.
    pub(crate) fn from_value(value: f64, direction: Direction, region_ok: bool) -> Self {
        debug_assert!(!value.is_nan(), "NaN bound");
        BoundEval {
            value: ExtReal::new(value),
            ln_value: (value > 0.0).then(|| value.ln()),
            direction,
            region_ok,
        }
    }

    pub fn value(&self) -> f64 {
        self.value.get()
    }

    /// Log-value if available, otherwise `ln(value)` (which is `-inf` or NaN
    /// for non-positive values).
    pub fn ln(&self) -> f64 {
        self.ln_value.unwrap_or_else(|| self.value.get().ln())
    }

    /// The bound is usable as an assertion: a direction is claimed and the
    /// point is inside the validity region.
    pub fn is_active(&self) -> bool {
        self.region_ok && self.direction != Direction::NotApplicable
    }
}

/// Which distribution tail a probability bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tail {
    /// `B_{a,b}(x) = P(X <= x)`.
    Left,
    /// `B̄_{a,b}(x) = P(X >= x)`.
    Right,
}

/// Grouping of bounds by the target quantity they bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Bounds on `Q_{a,b}(x)`.
    Q,
    /// Bounds on `a Γ(a) G_a(x) / x^a` and `Γ(a) e^x Ḡ_a(x)`.
    Gamma,
    /// Exponential tail bounds on `B_{a,b}` and `B̄_{a,b}`.
    Expo,
    /// Gaussian tail bounds.
    Gauss,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "q" => Ok(Family::Q),
            "gamma" => Ok(Family::Gamma),
            "expo" => Ok(Family::Expo),
            "gauss" => Ok(Family::Gauss),
            other => Err(format!(
                "unknown family `{other}` (expected q, gamma, expo or gauss)"
            )),
        }
    }
}

macro_rules! bound_ids {
    ($( $variant:ident => ($name:literal, $family:ident, $doc:literal) ),* $(,)?) => {
        /// Every named bound implemented by the crate.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum BoundId {
            $( #[doc = $doc] $variant, )*
        }

        impl BoundId {
            pub const ALL: &'static [BoundId] = &[ $( BoundId::$variant, )* ];

            pub fn name(self) -> &'static str {
                match self { $( BoundId::$variant => $name, )* }
            }

            pub fn family(self) -> Family {
                match self { $( BoundId::$variant => Family::$family, )* }
            }
        }

        impl FromStr for BoundId {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
                match s {
                    $( $name => Ok(BoundId::$variant), )*
                    other => Err(format!("unknown bound id `{other}`")),
                }
            }
        }
    };
}

bound_ids! {
    SeguraLower => ("segura-lower", Q, "`(1-x)^b (1 + c x)`, lower bound for `Q_{a,b}`."),
    SeguraUpper => ("segura-upper", Q, "`(1-x)^b / (1 - x/p)^+`, upper bound for `Q_{a,b}`."),
    S1 => ("s1", Q, "`(1-x)^b (1 + c x / (1-x))`."),
    S2 => ("s2", Q, "`(1-x)^b / (1 - c x)` on `[0,p]`, constant `(a+1)(1-p)^b` beyond."),
    Q1 => ("q1", Q, "Jensen bound `(1 - a x/(a+1))^{b-1}`."),
    Q2 => ("q2", Q, "Partial-integration bound."),
    Q3 => ("q3", Q, "Integrated-derivative bound."),
    Q4 => ("q4", Q, "Two-fold Jensen bound."),
    Q5 => ("q5", Q, "Affine-interpolant bound."),
    GammaS => ("gamma-s", Gamma, "`(a+1) e^{-x} / (a+1-x)^+`, upper bound for `a Γ(a) G_a(x) / x^a`."),
    Gamma1 => ("gamma-1", Gamma, "`e^{-a x/(a+1)}`, lower."),
    Gamma2 => ("gamma-2", Gamma, "`e^{-x} + x e^{-(a+1)x/(a+2)} / (a+1)`, lower."),
    Gamma3 => ("gamma-3", Gamma, "Gamma limit of `Q3`, upper."),
    Gamma4 => ("gamma-4", Gamma, "Gamma limit of `Q4`, upper."),
    Gamma5 => ("gamma-5", Gamma, "Gamma limit of `Q5`, lower."),
    GammaBarS => ("gamma-bar-s", Gamma, "Bound on `Γ(a) e^x Ḡ_a(x)` from the `S2` limit."),
    GammaBar1 => ("gamma-bar-1", Gamma, "`(x+1)^{a-1}`."),
    GammaBar2 => ("gamma-bar-2", Gamma, "`x^{a-1} + (a-1)(x+1)^{a-2}`."),
    KlLeft => ("kl-left", Expo, "`exp(-(a+b) K(p,x))` for `B_{a,b}(x)`, `x <= p`."),
    KlRight => ("kl-right", Expo, "`exp(-(a+b) K(p,x))` for `B̄_{a,b}(x)`, `x >= p`."),
    DensityRatioLeft => ("density-ratio-left", Expo, "Monotone density-ratio bound anchored at `q`, left tail."),
    DensityRatioRight => ("density-ratio-right", Expo, "Monotone density-ratio bound anchored at `q`, right tail."),
    ExpTailLeft => ("exp-tail-left", Expo, "Best applicable exponential bound on `B_{a,b}(x)`."),
    ExpTailRight => ("exp-tail-right", Expo, "Best applicable exponential bound on `B̄_{a,b}(x)`."),
    KlFormLeft => ("klform-left", Expo, "`exp(-a(a+b)/(a+1) K(p_l, x))`."),
    KlFormRight => ("klform-right", Expo, "`exp(-b(a+b)/(b+1) K(p_r, x))`."),
    BernsteinLeft => ("bernstein-left", Expo, "Bernstein-type left tail bound."),
    HoeffdingLeft => ("hoeffding-left", Expo, "Hoeffding-type left tail bound."),
    BernsteinRight => ("bernstein-right", Expo, "Bernstein-type right tail bound."),
    HoeffdingRight => ("hoeffding-right", Expo, "Hoeffding-type right tail bound."),
    MarchalArbelLeft => ("marchal-arbel-left", Expo, "`exp(-2(a+b+1)(x-p)^2)`, left tail."),
    MarchalArbelRight => ("marchal-arbel-right", Expo, "`exp(-2(a+b+1)(x-p)^2)`, right tail."),
    Skorski => ("skorski", Expo, "Bernstein bound with variance `p(1-p)/(a+b+1)`."),
    BernsteinMean => ("bernstein-mean", Expo, "Bernstein bound for `P(X - p >= eps)` with factor `a+b+1+a/b`."),
    BernsteinLargeDev => ("bernstein-large-dev", Expo, "Large-deviation bound for `P(X - p >= eps)`, `eps >= c(d) σ`."),
    GaussLeft => ("gauss-left", Gauss, "`2 Φ(2 sqrt(a+b-2)(x - p_o))` for `B_{a,b}(x)`."),
    GaussRight => ("gauss-right", Gauss, "`2 Φ(-2 sqrt(a+b-2)(x - p_o))` for `B̄_{a,b}(x)`."),
    BetaAaPhiTail => ("beta-aa-phi", Gauss, "`R(σ) Φ(-(x-1/2)/σ)` for `B̄_{a,a}(x)`."),
    BetaAaExpTail => ("beta-aa-exp", Gauss, "`R(σ)/2 exp(-4(a+δ)(x-1/2)^2)` for `B̄_{a,a}(x)`."),
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An interval of `x` values on which a bound is stated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XRegion {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl XRegion {
    pub fn closed(lo: f64, hi: f64) -> Self {
        XRegion {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        XRegion {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    /// `[lo, hi)`.
    pub fn closed_open(lo: f64, hi: f64) -> Self {
        XRegion {
            lo,
            hi,
            lo_open: false,
            hi_open: true,
        }
    }

    /// `(lo, hi]`.
    pub fn open_closed(lo: f64, hi: f64) -> Self {
        XRegion {
            lo,
            hi,
            lo_open: true,
            hi_open: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open {
            x > self.lo
        } else {
            x >= self.lo
        };
        let below = if self.hi_open {
            x < self.hi
        } else {
            x <= self.hi
        };
        above && below
    }

    /// Nonempty as a set of reals.
    pub fn is_nonempty(&self) -> bool {
        self.lo < self.hi || (self.lo == self.hi && !self.lo_open && !self.hi_open)
    }
}

/// A closed interval `[lo, hi]` of shape values; `hi` may be `+inf`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Span(pub f64, pub f64);

impl Span {
    fn contains(self, v: f64) -> bool {
        self.0 <= v && v <= self.1
    }
}

/// Resolve a case table: `lower` lists where the bound is `<=` the target,
/// `upper` where it is `>=`. Membership in both means equality.
pub(crate) fn resolve_direction(lower: &[Span], upper: &[Span], v: f64) -> Direction {
    let lo = lower.iter().any(|s| s.contains(v));
    let up = upper.iter().any(|s| s.contains(v));
    match (lo, up) {
        (true, true) => Direction::Equality,
        (true, false) => Direction::Lower,
        (false, true) => Direction::Upper,
        (false, false) => Direction::NotApplicable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for &id in BoundId::ALL {
            assert_eq!(id.name().parse::<BoundId>().unwrap(), id);
        }
        assert!("nope".parse::<BoundId>().is_err());
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = BoundId::ALL.iter().map(|id| id.name()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), BoundId::ALL.len());
    }

    #[test]
    fn ln_terms_sum_and_sign() {
        let e = BoundEval::from_ln_terms(&[(1.0, 2f64.ln()), (-1.0, 0.0)], Direction::Lower, true);
        assert!((e.value() - 1.0).abs() < 1e-15);
        assert!(e.ln_value.unwrap().abs() < 1e-15);
        // terms far below the double range still give a finite log
        let e = BoundEval::from_ln_terms(&[(1.0, -2000.0), (1.0, -2000.0)], Direction::Upper, true);
        assert_eq!(e.value(), 0.0);
        assert!((e.ln_value.unwrap() - (-2000.0 + 2f64.ln())).abs() < 1e-12);
        let e = BoundEval::from_ln_terms(&[(1.0, 0.0), (-1.0, 1.0)], Direction::Lower, true);
        assert!(e.value() < 0.0 && e.ln_value.is_none());
    }

    #[test]
    fn region_membership() {
        let r = XRegion::open_closed(0.0, 0.5);
        assert!(!r.contains(0.0) && r.contains(0.5) && r.contains(0.25) && !r.contains(0.6));
        assert!(XRegion::closed(0.3, 0.3).is_nonempty());
        assert!(!XRegion::open(0.3, 0.3).is_nonempty());
    }

    #[test]
    fn resolve_marks_shared_endpoints_as_equality() {
        let lower = [Span(0.0, 1.0), Span(2.0, f64::INFINITY)];
        let upper = [Span(1.0, 2.0)];
        assert_eq!(resolve_direction(&lower, &upper, 0.5), Direction::Lower);
        assert_eq!(resolve_direction(&lower, &upper, 1.0), Direction::Equality);
        assert_eq!(resolve_direction(&lower, &upper, 1.5), Direction::Upper);
        assert_eq!(resolve_direction(&lower, &upper, 2.0), Direction::Equality);
        assert_eq!(resolve_direction(&lower, &upper, 7.0), Direction::Lower);
        assert_eq!(
            resolve_direction(&[], &upper, 7.0),
            Direction::NotApplicable
        );
    }
}
