use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use super::grid::region_points;
use super::HarnessError;
use crate::bound::{BoundEval, BoundId, Direction, Tail, XRegion};
use crate::expo_bounds::{self, ExpTailCases};
use crate::gauss_approx::{self, SigmaChoice};
use crate::special::golden::fmt_f64;
use crate::special::{ln_beta_density, quadrature_q_oracle, Params, LN_SQRT_2PI};
use crate::{q_bounds, Result};

/// Points per figure.
pub const FIGURE_POINTS: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// Bounds on `B_{4,8}` from the Segura-type `Q` bounds.
    Fig1a,
    /// As [`FigureId::Fig1a`] for `(2, 0.5)`.
    Fig1b,
    /// Ratios of the `Q` bounds to `Q_{4,8}` on `[0, p]`.
    Fig2a,
    /// As [`FigureId::Fig2a`] for `(12, 24)`.
    Fig2b,
    /// As [`FigureId::Fig2a`] for `(2, 0.5)`.
    Fig3a,
    /// As [`FigureId::Fig2a`] for `(6, 1.5)`.
    Fig3b,
    /// Exponential bounds on both tails of `Beta(4,8)`.
    Fig4,
    /// `β_{5,5}` with three Gaussian approximations.
    Fig5,
    /// Log ratios of `β_{5,5}` to the three Gaussian densities.
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
        }
    }

    /// Shape parameters of the plotted distribution.
    pub fn params(self) -> Params {
        let (a, b) = match self {
            FigureId::Fig1a | FigureId::Fig2a | FigureId::Fig4 => (4.0, 8.0),
            FigureId::Fig1b | FigureId::Fig3a => (2.0, 0.5),
            FigureId::Fig2b => (12.0, 24.0),
            FigureId::Fig3b => (6.0, 1.5),
            FigureId::Fig5 | FigureId::Fig6 => (5.0, 5.0),
        };
        Params::new(a, b).expect("fixed positive shapes")
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure `{s}`"))
    }
}

/// What a curve should be compared with when checking its direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// The oracle column.
    Oracle,
    /// The constant 1 (ratio curves).
    One,
    /// Another curve, by index.
    Curve(usize),
    /// Not a bound.
    Nothing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    /// Direction of the bound, when the curve is one.
    pub direction: Option<Direction>,
    pub baseline: Baseline,
    /// `None` outside the curve's region or where it is infinite.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub id: FigureId,
    pub x: Vec<f64>,
    pub oracle: Vec<f64>,
    pub curves: Vec<Curve>,
}

impl FigureData {
    pub fn curve(&self, name: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.name == name)
    }

    /// CSV with columns `x`, `oracle` and one per curve; missing values are
    /// empty cells.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["x".to_string(), "oracle".to_string()];
        header.extend(self.curves.iter().map(|c| c.name.clone()));
        w.write_record(&header)?;
        for (i, &x) in self.x.iter().enumerate() {
            let mut rec = vec![fmt_f64(Some(x)), fmt_f64(Some(self.oracle[i]))];
            rec.extend(self.curves.iter().map(|c| fmt_f64(c.values[i])));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Compute the data behind a figure.
pub fn figure_data(id: FigureId) -> std::result::Result<FigureData, HarnessError> {
    let p = id.params();
    Ok(match id {
        FigureId::Fig1a | FigureId::Fig1b => beta_level_figure(id, &p)?,
        FigureId::Fig2a | FigureId::Fig2b | FigureId::Fig3a | FigureId::Fig3b => {
            q_ratio_figure(id, &p)?
        }
        FigureId::Fig4 => tails_figure(&p)?,
        FigureId::Fig5 => gaussian_density_figure(&p, false)?,
        FigureId::Fig6 => gaussian_density_figure(&p, true)?,
    })
}

/// Write a figure's CSV to `out`.
pub fn emit_figure_data(id: FigureId, out: &Path) -> std::result::Result<(), HarnessError> {
    let data = figure_data(id)?;
    let file = File::create(out).map_err(|source| HarnessError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    data.write_csv(BufWriter::new(file))
        .map_err(|source| HarnessError::Csv {
            path: out.to_path_buf(),
            source,
        })
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// A curve of bound values with a direction that does not change along it.
fn bound_curve(
    name: &str,
    baseline: Baseline,
    xs: &[f64],
    mut eval: impl FnMut(f64) -> Result<Option<BoundEval>>,
) -> Result<Curve> {
    let mut direction = None;
    let mut values = Vec::with_capacity(xs.len());
    for &x in xs {
        let v = match eval(x)? {
            Some(e) if e.region_ok => {
                direction.get_or_insert(e.direction);
                finite(e.value())
            }
            _ => None,
        };
        values.push(v);
    }
    Ok(Curve {
        name: name.to_string(),
        direction,
        baseline,
        values,
    })
}

fn beta_level_figure(id: FigureId, p: &Params) -> Result<FigureData> {
    use BoundId::*;
    let xs = region_points(XRegion::closed(0.0, 1.0), FIGURE_POINTS);
    let oracle = xs
        .iter()
        .map(|&x| expo_bounds::ln_tail_target(Tail::Left, p, x).map(f64::exp))
        .collect::<Result<_>>()?;
    let curves = [SeguraLower, SeguraUpper, S1, S2]
        .into_iter()
        .map(|b| {
            bound_curve(b.name(), Baseline::Oracle, &xs, |x| {
                q_bounds::beta_cdf_bound(b, p, x).map(Some)
            })
        })
        .collect::<Result<_>>()?;
    Ok(FigureData {
        id,
        x: xs,
        oracle,
        curves,
    })
}

fn q_ratio_figure(id: FigureId, p: &Params) -> Result<FigureData> {
    use BoundId::*;
    let xs = region_points(XRegion::closed(0.0, p.mean()), FIGURE_POINTS);
    let ln_q: Vec<f64> = xs
        .iter()
        .map(|&x| quadrature_q_oracle(p, x).map(f64::ln))
        .collect::<Result<_>>()?;
    let curves = [S1, S2, Q1, Q2, Q3, Q4, Q5]
        .into_iter()
        .map(|b| {
            let mut lq = ln_q.iter();
            // ratios from logs, so that tiny Q values keep full precision
            bound_curve(b.name(), Baseline::One, &xs, |x| {
                let e = q_bounds::evaluate(b, p, x)?;
                let lq = lq.next().copied().unwrap_or(f64::NAN);
                Ok(e.ln_value
                    .map(|l| BoundEval::from_ln(l - lq, e.direction, true)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureData {
        id,
        x: xs,
        oracle: ln_q.iter().map(|l| l.exp()).collect(),
        curves,
    })
}

fn tails_figure(p: &Params) -> Result<FigureData> {
    use BoundId::*;
    let xs = region_points(XRegion::closed(0.0, 1.0), FIGURE_POINTS);
    let oracle = xs
        .iter()
        .map(|&x| expo_bounds::ln_tail_target(Tail::Right, p, x).map(f64::exp))
        .collect::<Result<Vec<_>>>()?;
    let in_region = |id: BoundId, x: f64| expo_bounds::region(id, p).is_some_and(|r| r.contains(x));
    let cases = |x: f64, right: bool| -> Result<ExpTailCases> {
        if right {
            expo_bounds::exp_tail_right_cases(p, x)
        } else {
            expo_bounds::exp_tail_left_cases(p, x)
        }
    };
    let case_curve = |name: &str,
                      right: bool,
                      pick: fn(&ExpTailCases) -> Option<f64>,
                      base: Baseline|
     -> Result<Curve> {
        let values = xs
            .iter()
            .map(|&x| Ok(pick(&cases(x, right)?).and_then(|l| finite(l.exp()))))
            .collect::<Result<_>>()?;
        Ok(Curve {
            name: name.to_string(),
            direction: Some(Direction::Upper),
            baseline: base,
            values,
        })
    };
    let expo_curve = |id: BoundId, base: Baseline| {
        bound_curve(id.name(), base, &xs, |x| {
            Ok(if in_region(id, x) {
                Some(expo_bounds::evaluate(id, p, x)?)
            } else {
                None
            })
        })
    };
    let cdf = Curve {
        name: "cdf".to_string(),
        direction: None,
        baseline: Baseline::Nothing,
        values: xs
            .iter()
            .map(|&x| expo_bounds::ln_tail_target(Tail::Left, p, x).map(|l| finite(l.exp())))
            .collect::<Result<_>>()?,
    };
    let cdf_index = 4;
    let curves = vec![
        expo_curve(ExpTailRight, Baseline::Oracle)?,
        case_curve("exp-tail-right:mode", true, |c| c.mode, Baseline::Oracle)?,
        case_curve(
            "exp-tail-right:median",
            true,
            |c| c.median,
            Baseline::Oracle,
        )?,
        expo_curve(KlRight, Baseline::Oracle)?,
        cdf,
        expo_curve(ExpTailLeft, Baseline::Curve(cdf_index))?,
        expo_curve(KlLeft, Baseline::Curve(cdf_index))?,
    ];
    debug_assert_eq!(curves[cdf_index].name, "cdf");
    Ok(FigureData {
        id: FigureId::Fig4,
        x: xs,
        oracle,
        curves,
    })
}

const SIGMAS: [(&str, SigmaChoice); 3] = [
    ("sigma1", SigmaChoice::Moment),
    ("sigma2", SigmaChoice::LocalDensity),
    ("sigma3", SigmaChoice::Optimal),
];

/// Densities (`log_ratio = false`) or log density ratios (`true`).
fn gaussian_density_figure(p: &Params, log_ratio: bool) -> Result<FigureData> {
    let a = p.a();
    let xs = region_points(XRegion::closed(0.0, 1.0), FIGURE_POINTS);
    let ln_beta: Vec<f64> = xs.iter().map(|&x| ln_beta_density(p, x)).collect();
    let mut curves = Vec::new();
    for (name, choice) in SIGMAS {
        let sigma = choice.sigma(a)?;
        let values = xs
            .iter()
            .map(|&x| {
                Ok(if log_ratio {
                    finite(gauss_approx::ln_density_ratio(a, sigma, x)?)
                } else {
                    let z = (x - 0.5) / sigma;
                    finite((-0.5 * z * z - sigma.ln() - LN_SQRT_2PI).exp())
                })
            })
            .collect::<Result<_>>()?;
        let prefix = if log_ratio { "log-ratio" } else { "gauss" };
        curves.push(Curve {
            name: format!("{prefix}-{name}"),
            direction: None,
            baseline: Baseline::Nothing,
            values,
        });
    }
    Ok(FigureData {
        id: if log_ratio {
            FigureId::Fig6
        } else {
            FigureId::Fig5
        },
        x: xs,
        oracle: if log_ratio {
            ln_beta
        } else {
            ln_beta.iter().map(|l| l.exp()).collect()
        },
        curves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig7".parse::<FigureId>().is_err());
    }

    #[test]
    fn every_figure_has_full_columns() {
        for id in FigureId::ALL {
            let d = figure_data(id).unwrap();
            assert_eq!(d.x.len(), FIGURE_POINTS, "{id}");
            assert_eq!(d.oracle.len(), FIGURE_POINTS, "{id}");
            for c in &d.curves {
                assert_eq!(c.values.len(), FIGURE_POINTS, "{id} {}", c.name);
                assert!(c.values.iter().any(Option::is_some), "{id} {}", c.name);
            }
        }
    }

    #[test]
    fn ratio_figure_starts_at_one() {
        let d = figure_data(FigureId::Fig2a).unwrap();
        assert_eq!(d.curves.len(), 7);
        for c in &d.curves {
            let first = c.values.iter().flatten().next().unwrap();
            assert!((first - 1.0).abs() < 1e-9, "{}: {first}", c.name);
        }
        assert!((d.x.last().unwrap() - d.id.params().mean()).abs() < 1e-11);
    }

    #[test]
    fn gaussian_log_ratios_peak_at_the_center() {
        let d = figure_data(FigureId::Fig6).unwrap();
        let c = d.curve("log-ratio-sigma3").unwrap();
        let mid = c.values[FIGURE_POINTS / 2].unwrap();
        let lr = gauss_approx::log_r(5.0, SigmaChoice::Optimal.sigma(5.0).unwrap()).unwrap();
        assert!(c.values.iter().flatten().all(|&v| v <= lr + 1e-12));
        assert!(mid > 0.0);
    }

    #[test]
    fn csv_writes_empty_cells_for_gaps() {
        let d = figure_data(FigureId::Fig4).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "x,oracle,exp-tail-right,exp-tail-right:mode,exp-tail-right:median,kl-right,cdf,exp-tail-left,kl-left"
        );
        assert!(lines.next().unwrap().contains(",,"));
        assert_eq!(text.lines().count(), FIGURE_POINTS + 1);
    }
}
