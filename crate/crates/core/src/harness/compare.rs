use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::grid::{region_points, Q_UPPER_END};
use super::HarnessError;
use crate::bound::{BoundEval, BoundId, Direction, Family, Tail, XRegion};
use crate::gauss_approx::{self, SigmaChoice, TAIL_DELTAS};
use crate::special::golden::fmt_f64;
use crate::special::{quadrature_q_oracle, Params};
use crate::{expo_bounds, gamma_bounds, q_bounds};

/// Points in [`default_x_grid`].
pub const DEFAULT_COMPARE_POINTS: usize = 101;

const HEADER: [&str; 9] = [
    "x",
    "target",
    "bound",
    "source",
    "direction",
    "value",
    "ln_value",
    "oracle",
    "ln_oracle",
];

/// One bound (or best-of summary) at one `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub x: f64,
    /// The quantity bounded: `Q`, `cdf`, `survival`, `left` or `right`.
    pub target: &'static str,
    /// A bound name, or `best-lower` / `best-upper`.
    pub bound: String,
    /// For the best-of rows, the bound attaining it.
    pub source: Option<BoundId>,
    pub direction: Direction,
    pub value: f64,
    pub ln_value: f64,
    pub oracle: f64,
    pub ln_oracle: f64,
}

/// Every applicable bound of one family next to its oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub family: Family,
    pub params: Params,
    pub rows: Vec<ComparisonRow>,
    /// Named scalars that accompany the table, such as `R(σ)` values.
    pub notes: Vec<(String, f64)>,
}

impl Comparison {
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(HEADER)?;
        for r in &self.rows {
            w.write_record([
                fmt_f64(Some(r.x)),
                r.target.to_string(),
                r.bound.clone(),
                r.source.map_or(String::new(), |s| s.name().to_string()),
                r.direction.to_string(),
                fmt_f64(Some(r.value)),
                fmt_f64(Some(r.ln_value)),
                fmt_f64(Some(r.oracle)),
                fmt_f64(Some(r.ln_oracle)),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rows for one bound, in `x` order.
    pub fn rows_for<'a>(&'a self, bound: &'a str) -> impl Iterator<Item = &'a ComparisonRow> + 'a {
        self.rows.iter().filter(move |r| r.bound == bound)
    }
}

pub fn write_comparison_csv(c: &Comparison, path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    c.write_csv(BufWriter::new(file))
        .map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })
}

/// [`DEFAULT_COMPARE_POINTS`] points across the family's `x` range.
pub fn default_x_grid(family: Family, a: f64) -> Vec<f64> {
    let region = match family {
        Family::Q => XRegion::closed(0.0, Q_UPPER_END),
        Family::Gamma => XRegion::closed(0.0, f64::max(4.0 * (a + 1.0), 40.0)),
        Family::Expo | Family::Gauss => XRegion::closed(0.0, 1.0),
    };
    region_points(region, DEFAULT_COMPARE_POINTS)
}

/// One bound at one point together with the log of the quantity it bounds.
/// `b` is required except for the gamma family.
pub fn evaluate_with_oracle(
    id: BoundId,
    a: f64,
    b: Option<f64>,
    x: f64,
) -> Result<(BoundEval, f64), HarnessError> {
    if id.family() == Family::Gamma {
        let ln_t = if gamma_bounds::CDF_IDS.contains(&id) {
            gamma_bounds::ln_cdf_target(a, x)?
        } else {
            gamma_bounds::ln_survival_target(a, x)?
        };
        return Ok((gamma_bounds::evaluate(id, a, x)?, ln_t));
    }
    let p = Params::new(a, b.ok_or(HarnessError::MissingParam("b"))?)?;
    Ok(match id.family() {
        Family::Q => (
            q_bounds::evaluate(id, &p, x)?,
            quadrature_q_oracle(&p, x)?.ln(),
        ),
        Family::Expo | Family::Gauss => {
            let (tail, e) = if id.family() == Family::Expo {
                (expo_bounds::tail(id), expo_bounds::evaluate(id, &p, x)?)
            } else {
                (gauss_approx::tail(id), gauss_approx::evaluate(id, &p, x)?)
            };
            let tail = tail.ok_or(crate::Error::UnsupportedBound(id))?;
            (e, expo_bounds::ln_tail_target(tail, &p, x)?)
        }
        Family::Gamma => unreachable!("handled above"),
    })
}

/// Evaluate every bound of `family` at each `x`, with best-lower (largest
/// lower bound) and best-upper (smallest upper bound) rows per target.
///
/// `b` is ignored for the gamma family and defaults to `a` for the
/// Gaussian family.
pub fn compare_bounds(
    family: Family,
    a: f64,
    b: Option<f64>,
    xs: &[f64],
) -> Result<Comparison, HarnessError> {
    let b = match (family, b) {
        (_, Some(b)) => b,
        (Family::Gamma | Family::Gauss, None) => a,
        (_, None) => return Err(HarnessError::MissingParam("b")),
    };
    let p = Params::new(a, b)?;
    let mut rows = Vec::new();
    for &x in xs {
        let mut at_x = Vec::new();
        match family {
            Family::Q => {
                let ln_t = quadrature_q_oracle(&p, x)?.ln();
                for id in q_bounds::IDS {
                    at_x.push(("Q", id, q_bounds::evaluate(id, &p, x)?, ln_t));
                }
            }
            Family::Gamma => {
                let tc = gamma_bounds::ln_cdf_target(a, x)?;
                let ts = gamma_bounds::ln_survival_target(a, x)?;
                for id in gamma_bounds::CDF_IDS {
                    at_x.push(("cdf", id, gamma_bounds::evaluate(id, a, x)?, tc));
                }
                for id in gamma_bounds::SURVIVAL_IDS {
                    at_x.push(("survival", id, gamma_bounds::evaluate(id, a, x)?, ts));
                }
            }
            Family::Expo | Family::Gauss => {
                let ids: &[BoundId] = if family == Family::Expo {
                    &expo_bounds::IDS
                } else {
                    &gauss_approx::IDS
                };
                let lt = expo_bounds::ln_tail_target(Tail::Left, &p, x)?;
                let rt = expo_bounds::ln_tail_target(Tail::Right, &p, x)?;
                for &id in ids {
                    let (tail, e) = if family == Family::Expo {
                        (expo_bounds::tail(id), expo_bounds::evaluate(id, &p, x)?)
                    } else {
                        (gauss_approx::tail(id), gauss_approx::evaluate(id, &p, x)?)
                    };
                    match tail {
                        Some(Tail::Left) => at_x.push(("left", id, e, lt)),
                        Some(Tail::Right) => at_x.push(("right", id, e, rt)),
                        None => {}
                    }
                }
            }
        }
        at_x.retain(|(_, _, e, _)| e.is_active());
        push_rows(&mut rows, x, &at_x);
    }
    let mut notes = Vec::new();
    if family == Family::Gauss && a == b && a > 1.0 {
        let choices = [
            ("R(sigma1)", SigmaChoice::Moment),
            ("R(sigma2)", SigmaChoice::LocalDensity),
            ("R(sigma3)", SigmaChoice::Optimal),
        ];
        for (name, c) in choices {
            notes.push((
                name.to_string(),
                gauss_approx::log_r_delta(a, c.delta())?.exp(),
            ));
        }
        for d in TAIL_DELTAS {
            notes.push((
                format!("R(delta={d})"),
                gauss_approx::log_r_delta(a, d)?.exp(),
            ));
        }
    }
    Ok(Comparison {
        family,
        params: p,
        rows,
        notes,
    })
}

fn push_rows(
    rows: &mut Vec<ComparisonRow>,
    x: f64,
    evals: &[(&'static str, BoundId, BoundEval, f64)],
) {
    let row = |target, bound: String, source, e: &BoundEval, ln_t: f64| ComparisonRow {
        x,
        target,
        bound,
        source,
        direction: e.direction,
        value: e.value(),
        ln_value: e.ln(),
        oracle: ln_t.exp(),
        ln_oracle: ln_t,
    };
    for (target, id, e, ln_t) in evals {
        rows.push(row(*target, id.name().to_string(), None, e, *ln_t));
    }
    let mut targets: Vec<&'static str> = evals.iter().map(|t| t.0).collect();
    targets.dedup();
    for target in targets {
        let of_target = || evals.iter().filter(move |t| t.0 == target);
        let best_lower = of_target()
            .filter(|t| matches!(t.2.direction, Direction::Lower | Direction::Equality))
            .max_by(|l, r| l.2.ln().total_cmp(&r.2.ln()));
        let best_upper = of_target()
            .filter(|t| matches!(t.2.direction, Direction::Upper | Direction::Equality))
            .min_by(|l, r| l.2.ln().total_cmp(&r.2.ln()));
        if let Some((_, id, e, ln_t)) = best_lower {
            let e = BoundEval {
                direction: Direction::Lower,
                ..*e
            };
            rows.push(row(target, "best-lower".into(), Some(*id), &e, *ln_t));
        }
        if let Some((_, id, e, ln_t)) = best_upper {
            let e = BoundEval {
                direction: Direction::Upper,
                ..*e
            };
            rows.push(row(target, "best-upper".into(), Some(*id), &e, *ln_t));
        }
    }
}
