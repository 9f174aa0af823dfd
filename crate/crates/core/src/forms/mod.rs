//! Exterior algebra on a chart: forms, chart changes and moving coframes.

mod chart_map;
mod coframe;
mod form;
mod matrix;

use thiserror::Error;

use crate::expr::{Chart, Coord, ExprError};

pub use chart_map::ChartMap;
pub use coframe::{Coframe, TwoFormCoefficients};
pub use form::{blade_indices, Blade, DifferentialForm};
pub use matrix::{Field, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("forms live on different charts ({left} and {right})")]
    ChartMismatch { left: Chart, right: Chart },
    #[error("forms have different degrees ({left} and {right})")]
    DegreeMismatch { left: u8, right: u8 },
    #[error("degree {degree} exceeds chart dimension {dim}")]
    DegreeOverflow { degree: u8, dim: usize },
    #[error("expected a {expected}-form, found degree {found}")]
    WrongDegree { expected: u8, found: u8 },
    #[error("coframe needs {expected} forms, found {found}")]
    CoframeSize { expected: usize, found: usize },
    #[error("coframe is degenerate")]
    DegenerateCoframe,
    #[error("coordinate {coord} is not in chart {chart}")]
    CoordinateNotInChart { coord: Coord, chart: Chart },
    #[error("chart map gives no image for {0}")]
    IncompleteChartMap(Coord),
    #[error("chart map has identically vanishing Jacobian determinant")]
    SingularChartMap,
    #[error(transparent)]
    Expr(#[from] ExprError),
}
