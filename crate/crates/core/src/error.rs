use core::fmt;

use crate::image::Phase;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Image axis, used to name the offending dimension in errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Rows => "rows",
            Axis::Cols => "columns",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("image must have at least one row and one column (got {rows}x{cols})")]
    EmptyImage { rows: usize, cols: usize },
    #[error("pixel buffer holds {len} values but a {rows}x{cols} image needs {}", rows * cols)]
    BufferSize { rows: usize, cols: usize, len: usize },
    #[error("pixel ({row}, {col}) has value {value}; only 0 and 1 are phase labels")]
    InvalidPixel { row: usize, col: usize, value: u8 },
    #[error("phase {phase} has surface fraction {fraction}; the normalized descriptor is undefined")]
    SinglePhase { phase: Phase, fraction: f64 },
    #[error("{axis} dimension {size} is not divisible by {divisor}")]
    NotDivisible { axis: Axis, size: usize, divisor: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("could not place disk {index} (radius {radius}) after {attempts} attempted centers")]
    PlacementBudget { index: usize, radius: u32, attempts: u64 },
    #[error("descriptor curves cannot be compared: {0}")]
    GridMismatch(&'static str),
}

impl Error {
    /// True for failures caused by a degenerate (single-phase) input rather
    /// than malformed data.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::SinglePhase { .. })
    }
}
