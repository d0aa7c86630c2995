//! Golden-value files: CSV tables of reference values for the special
//! functions, with columns `a, b, x, quantity_name, value, abs_err_bound`.
//!
//! Unused coordinates are left empty. The coordinate conventions per
//! quantity are:
//!
//! | quantity | a | b | x |
//! |----------|---|---|---|
//! | `ln_gamma`, `stirling_r` | argument | | |
//! | `ln_beta` | a | b | |
//! | `inc_beta`, `inc_beta_surv`, `q_aux` | a | b | x |
//! | `inc_gamma_lower`, `inc_gamma_upper` | a | | x |
//! | `norm_cdf` | | | z |
//! | `kl_bernoulli` | q | | x |

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use super::{
    kl_bernoulli, log_beta_fn, log_gamma, quadrature_q_oracle, reg_inc_beta, reg_inc_beta_survival,
    reg_inc_gamma_lower, reg_inc_gamma_upper, std_normal_cdf, stirling_remainder, Params,
};

/// Header row of every golden file.
pub const HEADER: [&str; 6] = ["a", "b", "x", "quantity_name", "value", "abs_err_bound"];

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),
    #[error("quantity `{quantity}` needs coordinate `{coord}`")]
    MissingCoordinate {
        quantity: String,
        coord: &'static str,
    },
    #[error(transparent)]
    Oracle(#[from] crate::Error),
}

/// One row of a golden file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct GoldenRecord {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub x: Option<f64>,
    #[serde(rename = "quantity_name")]
    pub quantity: String,
    pub value: f64,
    pub abs_err_bound: f64,
}

fn need(v: Option<f64>, quantity: &str, coord: &'static str) -> Result<f64, GoldenError> {
    v.ok_or_else(|| GoldenError::MissingCoordinate {
        quantity: quantity.to_string(),
        coord,
    })
}

/// Evaluate `quantity` at the given coordinates with this crate's oracles.
pub fn evaluate(
    quantity: &str,
    a: Option<f64>,
    b: Option<f64>,
    x: Option<f64>,
) -> Result<f64, GoldenError> {
    let params = || -> Result<Params, GoldenError> {
        Ok(Params::new(
            need(a, quantity, "a")?,
            need(b, quantity, "b")?,
        )?)
    };
    let v = match quantity {
        "ln_gamma" => log_gamma(need(a, quantity, "a")?)?,
        "stirling_r" => stirling_remainder(need(a, quantity, "a")?)?,
        "ln_beta" => log_beta_fn(&params()?),
        "inc_beta" => reg_inc_beta(&params()?, need(x, quantity, "x")?)?,
        "inc_beta_surv" => reg_inc_beta_survival(&params()?, need(x, quantity, "x")?)?,
        "q_aux" => quadrature_q_oracle(&params()?, need(x, quantity, "x")?)?,
        "inc_gamma_lower" => reg_inc_gamma_lower(need(a, quantity, "a")?, need(x, quantity, "x")?)?,
        "inc_gamma_upper" => reg_inc_gamma_upper(need(a, quantity, "a")?, need(x, quantity, "x")?)?,
        "norm_cdf" => std_normal_cdf(need(x, quantity, "x")?),
        "kl_bernoulli" => kl_bernoulli(need(a, quantity, "a")?, need(x, quantity, "x")?)?.get(),
        other => return Err(GoldenError::UnknownQuantity(other.to_string())),
    };
    Ok(v)
}

/// Shortest round-trip text for a float; `None` becomes an empty field.
pub fn fmt_f64(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:?}"),
        None => String::new(),
    }
}

pub fn read_golden(path: &Path) -> Result<Vec<GoldenRecord>, GoldenError> {
    let file = File::open(path).map_err(|source| GoldenError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    reader
        .deserialize()
        .collect::<Result<Vec<GoldenRecord>, _>>()
        .map_err(|source| GoldenError::Csv {
            path: path.to_path_buf(),
            source,
        })
}

pub fn write_golden<W: Write>(out: W, records: &[GoldenRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            fmt_f64(r.a),
            fmt_f64(r.b),
            fmt_f64(r.x),
            r.quantity.clone(),
            fmt_f64(Some(r.value)),
            fmt_f64(Some(r.abs_err_bound)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Relative accuracy claimed for each quantity when frozen.
fn claimed_rel_accuracy(quantity: &str) -> f64 {
    match quantity {
        "ln_gamma" | "ln_beta" | "norm_cdf" | "kl_bernoulli" => 1e-13,
        "q_aux" => 1e-11,
        _ => 1e-12,
    }
}

type Point = (Option<f64>, Option<f64>, Option<f64>, &'static str);

/// The fixed set of points written by [`freeze`].
pub fn freeze_points() -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::new();
    for &y in &[
        1e-3, 0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 7.3, 10.0, 123.4, 1e4, 1e6,
    ] {
        pts.push((Some(y), None, None, "ln_gamma"));
        pts.push((Some(y), None, None, "stirling_r"));
    }
    let shapes = [0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 24.0, 200.0];
    for &a in &shapes {
        for &b in &shapes {
            pts.push((Some(a), Some(b), None, "ln_beta"));
            for &x in &[0.05, 0.2, 0.5, 0.8, 0.95] {
                pts.push((Some(a), Some(b), Some(x), "inc_beta"));
                pts.push((Some(a), Some(b), Some(x), "inc_beta_surv"));
                pts.push((Some(a), Some(b), Some(x), "q_aux"));
            }
        }
    }
    for &a in &[0.5, 1.0, 3.0, 10.0, 200.0] {
        for &x in &[0.1, 1.0, 2.5, 10.0, 50.0, 250.0] {
            pts.push((Some(a), None, Some(x), "inc_gamma_lower"));
            pts.push((Some(a), None, Some(x), "inc_gamma_upper"));
        }
    }
    for &z in &[-30.0, -5.0, -1.959964, -0.3, 0.0, 0.3, 1.959964, 5.0] {
        pts.push((None, None, Some(z), "norm_cdf"));
    }
    for &q in &[0.0, 0.25, 0.5, 1.0] {
        for &x in &[0.01, 0.25, 0.75, 0.999] {
            pts.push((Some(q), None, Some(x), "kl_bernoulli"));
        }
    }
    pts
}

/// Evaluate every point of [`freeze_points`] and return the records.
pub fn freeze() -> Result<Vec<GoldenRecord>, GoldenError> {
    freeze_points()
        .into_iter()
        .map(|(a, b, x, q)| {
            let value = evaluate(q, a, b, x)?;
            Ok(GoldenRecord {
                a,
                b,
                x,
                quantity: q.to_string(),
                value,
                abs_err_bound: value.abs() * claimed_rel_accuracy(q),
            })
        })
        .collect()
}

/// Write the frozen table to `path`.
pub fn freeze_to_path(path: &Path) -> Result<usize, GoldenError> {
    let records = freeze()?;
    let file = File::create(path).map_err(|source| GoldenError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_golden(file, &records).map_err(|source| GoldenError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(records.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_csv() {
        let recs = vec![
            GoldenRecord {
                a: Some(0.1),
                b: None,
                x: Some(1e-300),
                quantity: "inc_gamma_lower".into(),
                value: 1.0 / 3.0,
                abs_err_bound: 2.5e-17,
            },
            GoldenRecord {
                a: None,
                b: None,
                x: Some(-1.959964),
                quantity: "norm_cdf".into(),
                value: 0.025,
                abs_err_bound: 0.0,
            },
        ];
        let mut buf = Vec::new();
        write_golden(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("a,b,x,quantity_name,value,abs_err_bound\n"));
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let back: Vec<GoldenRecord> = rdr.deserialize().map(|r| r.unwrap()).collect();
        assert_eq!(back, recs);
    }

    #[test]
    fn evaluate_reports_missing_coordinates() {
        assert!(matches!(
            evaluate("inc_beta", Some(1.0), Some(2.0), None),
            Err(GoldenError::MissingCoordinate { coord: "x", .. })
        ));
        assert!(matches!(
            evaluate("nonsense", None, None, None),
            Err(GoldenError::UnknownQuantity(_))
        ));
    }
}
