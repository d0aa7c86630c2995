use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::bound::XRegion;

/// Grid points are kept this far inside every validity region.
pub const ENDPOINT_PULL: f64 = 1e-12;

/// Largest `x` used for the `Q_{a,b}` bounds, whose formulas are singular at
/// `x = 1`.
pub const Q_UPPER_END: f64 = 1.0 - 1e-9;

const DEFAULT_SHAPES: [f64; 14] = [
    0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 8.0, 12.0, 24.0, 50.0, 200.0,
];

/// Parameter and `x` grid for [`verify_all`](super::verify_all).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    /// Points per validity region.
    pub x_resolution: usize,
    /// Relative slack allowed before a deviation counts as a violation.
    pub slack: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            a_values: DEFAULT_SHAPES.to_vec(),
            b_values: DEFAULT_SHAPES.to_vec(),
            x_resolution: 512,
            slack: 1e-9,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::InvalidGrid(m));
        if self.a_values.is_empty() || self.b_values.is_empty() {
            return bad("a and b lists must be nonempty".into());
        }
        if let Some(v) = self
            .a_values
            .iter()
            .chain(&self.b_values)
            .find(|v| !(v.is_finite() && **v > 0.0))
        {
            return bad(format!("shape {v} is not a finite positive number"));
        }
        if self.x_resolution < 2 {
            return bad(format!("resolution {} is below 2", self.x_resolution));
        }
        if !(self.slack >= 0.0 && self.slack < 1.0) {
            return bad(format!("slack {} is outside [0, 1)", self.slack));
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        text.parse()
    }

    /// Number of `(a, b)` pairs.
    pub fn pairs(&self) -> usize {
        self.a_values.len() * self.b_values.len()
    }
}

/// Parses lines `a = v, v, ...`, `b = ...`, `resolution = n` and optional
/// `slack = s`; values may be separated by commas or whitespace and `#`
/// starts a comment. Missing keys keep their defaults.
impl FromStr for GridSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut grid = GridSpec::default();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| HarnessError::GridParse { line: i + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let values = || -> Result<Vec<f64>, HarnessError> {
                value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<f64>().map_err(|e| err(format!("`{t}`: {e}"))))
                    .collect()
            };
            match key.trim() {
                "a" => grid.a_values = values()?,
                "b" => grid.b_values = values()?,
                "resolution" => {
                    grid.x_resolution = value
                        .trim()
                        .parse()
                        .map_err(|e| err(format!("resolution: {e}")))?
                }
                "slack" => {
                    grid.slack = value
                        .trim()
                        .parse()
                        .map_err(|e| err(format!("slack: {e}")))?
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        grid.validate()?;
        Ok(grid)
    }
}

/// `n` equally spaced points spanning `region` with both ends pulled in by
/// [`ENDPOINT_PULL`]; empty when nothing is left.
pub fn region_points(region: XRegion, n: usize) -> Vec<f64> {
    let lo = region.lo + ENDPOINT_PULL;
    let hi = region.hi - ENDPOINT_PULL;
    if n == 0 || hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Vec::new();
    }
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}
