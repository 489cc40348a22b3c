use crate::grid::Point;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point} out of bounds for [{n}]^{dim}")]
    OutOfBounds { point: Point, n: i64, dim: u8 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error("instance too large: {cells} cells exceeds the brute-force threshold of {max_cells}")]
    TooLarge { cells: usize, max_cells: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
