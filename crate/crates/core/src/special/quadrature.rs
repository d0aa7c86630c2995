//! Adaptive Gauss-Kronrod quadrature and the independent oracle for
//! `Q_{a,b}(x) = a ∫₀¹ y^{a-1}(1-xy)^{b-1} dy`.

use super::{compensated_sum, Params};
use crate::{domain, Error, Result};

#[allow(clippy::excessive_precision)]
/// Kronrod 15-point abscissae (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss 7-point weights, paired with the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_err: f64,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Piece {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    // QUADPACK's error heuristic
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Piece { lo, hi, value, err }
}

/// Globally adaptive G7-K15 integration of `f` over `[lo, hi]`.
///
/// Stops once the summed error estimate is below
/// `max(abs_tol, rel_tol * |integral|)` or after `max_pieces` subintervals.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_pieces: usize,
) -> Integral {
    let mut pieces = vec![gk15(&f, lo, hi)];
    loop {
        let values: Vec<f64> = pieces.iter().map(|p| p.value).collect();
        let errs: Vec<f64> = pieces.iter().map(|p| p.err).collect();
        let value = compensated_sum(&values);
        let abs_err = compensated_sum(&errs);
        let target = abs_tol.max(rel_tol * value.abs());
        if abs_err <= target || pieces.len() >= max_pieces {
            return Integral {
                value,
                abs_err,
                converged: abs_err <= target,
            };
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| {
                if p.err > best.1 {
                    (i, p.err)
                } else {
                    best
                }
            });
        let w = pieces.swap_remove(worst);
        let mid = 0.5 * (w.lo + w.hi);
        if mid <= w.lo || mid >= w.hi {
            // interval cannot be split further in double precision
            return Integral {
                value,
                abs_err,
                converged: false,
            };
        }
        pieces.push(gk15(&f, w.lo, mid));
        pieces.push(gk15(&f, mid, w.hi));
    }
}

const ORACLE_REL_TOL: f64 = 1e-13;
const ORACLE_ACCEPT: f64 = 1e-11;
const ORACLE_MAX_PIECES: usize = 5_000;

fn run(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Integral {
    integrate_adaptive(f, lo, hi, 1e-300, ORACLE_REL_TOL, ORACLE_MAX_PIECES)
}

/// `Q_{a,b}(x)` by adaptive quadrature of its defining integral.
///
/// The range is split at `y = 1/2`. On `[0, 1/2]` with `a < 1` the
/// substitution `u = y^a` removes the `y^{a-1}` endpoint singularity. On
/// `[1/2, 1]` with `b < 1` and `x > 1/2` the substitution `t = (1-xy)^b`
/// removes the (near-)singularity of `(1-xy)^{b-1}` at `y = 1`.
pub fn quadrature_q_oracle(p: &Params, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1)"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let (a, b) = (p.a(), p.b());

    let left = if a < 1.0 {
        let inv_a = 1.0 / a;
        run(
            |u: f64| ((b - 1.0) * (-x * u.powf(inv_a)).ln_1p()).exp(),
            0.0,
            0.5f64.powf(a),
        )
    } else {
        run(
            |y: f64| {
                if y == 0.0 {
                    return if a == 1.0 { 1.0 } else { 0.0 };
                }
                a * ((a - 1.0) * y.ln() + (b - 1.0) * (-x * y).ln_1p()).exp()
            },
            0.0,
            0.5,
        )
    };

    let right = if b >= 1.0 || x <= 0.5 {
        run(
            |y: f64| a * ((a - 1.0) * y.ln() + (b - 1.0) * (-x * y).ln_1p()).exp(),
            0.5,
            1.0,
        )
    } else {
        let inv_b = 1.0 / b;
        let t_lo = (1.0 - x).powf(b);
        let t_hi = (1.0 - 0.5 * x).powf(b);
        run(
            |t: f64| {
                let y = (1.0 - t.powf(inv_b)) / x;
                a * y.powf(a - 1.0) / (b * x)
            },
            t_lo,
            t_hi,
        )
    };

    let total = left.value + right.value;
    let err = left.abs_err + right.abs_err;
    if !(total.is_finite() && total > 0.0) || err > ORACLE_ACCEPT * total {
        return Err(Error::NoConvergence {
            routine: "Q quadrature",
            detail: format!("a = {a}, b = {b}, x = {x}: value {total}, error estimate {err}"),
        });
    }
    Ok(total)
}

/// Truncated hypergeometric series
/// `Q_{a,b}(x) = sum_k a (1-b)_k x^k / ((a+k) k!)`, summed with
/// compensation until the terms are negligible. Converges for `x < 1`.
pub fn q_series(p: &Params, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1)"));
    }
    let (a, b) = (p.a(), p.b());
    // c_k = (1-b)_k x^k / k!, term_k = a c_k / (a+k)
    let mut c = 1.0;
    let mut terms = vec![1.0];
    let mut k = 0.0;
    let cap = 100_000;
    for _ in 0..cap {
        c *= (k + 1.0 - b) * x / (k + 1.0);
        k += 1.0;
        let t = a * c / (a + k);
        terms.push(t);
        if c == 0.0 || (t.abs() < 1e-18 && k > b) {
            return Ok(compensated_sum(&terms));
        }
    }
    Err(Error::NoConvergence {
        routine: "Q series",
        detail: format!("a = {a}, b = {b}, x = {x}"),
    })
}
