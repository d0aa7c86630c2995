//! Grid verification engine, comparison tables and figure data.

mod compare;
mod figures;
mod grid;
mod verify;

use std::path::PathBuf;

use thiserror::Error;

pub use compare::{
    compare_bounds, default_x_grid, evaluate_with_oracle, write_comparison_csv, Comparison,
    ComparisonRow, DEFAULT_COMPARE_POINTS,
};
pub use figures::{
    emit_figure_data, figure_data, Baseline, Curve, FigureData, FigureId, FIGURE_POINTS,
};
pub use grid::{region_points, GridSpec, ENDPOINT_PULL, Q_UPPER_END};
pub use verify::{
    verify_all, verify_with, BoundSummary, Execution, InfraError, OrderingSummary, Outcome, Point,
    Record, VerificationReport,
};

/// Errors raised by the harness, as distinct from bound violations.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("cannot serialise report: {0}")]
    Json(#[from] serde_json::Error),

    #[error("grid file line {line}: {msg}")]
    GridParse { line: usize, msg: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("missing parameter `{0}` for this family")]
    MissingParam(&'static str),

    #[error(transparent)]
    Core(#[from] crate::Error),
}
