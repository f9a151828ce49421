use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid needs at least 4 cells, got {n_cells}")]
    Size { n_cells: usize },

    #[error(
        "x = 0 does not fall on a cell interface for [{x_min}, {x_max}] with {n_cells} cells; \
         nearest admissible endpoints: x_max = {suggest_x_max} (keeping x_min) or \
         x_min = {suggest_x_min} (keeping x_max)"
    )]
    Alignment {
        x_min: f64,
        x_max: f64,
        n_cells: usize,
        suggest_x_min: f64,
        suggest_x_max: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "domain too small: truncated tail mass is {tail_ratio:e} of the total (limit 1e-10); \
         try a half-width of at least {suggested_half_width}"
    )]
    DomainTooSmall {
        tail_ratio: f64,
        suggested_half_width: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("u = {value} at cell {index} overflows exp")]
    Amplitude { index: usize, value: f64 },

    #[error("shape mismatch: expected {expected} values, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    State(String),

    #[error("blow-up at t = {time}: cell {cell} (x = {x}) became {value}")]
    BlowUp {
        time: f64,
        cell: usize,
        x: f64,
        value: f64,
    },

    #[error("diagnostics data error: {0}")]
    Data(String),

    #[error("snapshot spacing {spacing} exceeds the grid spacing {dx}")]
    Sampling { spacing: f64, dx: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{}", match .line {
        Some(l) => format!("config line {l}: {message}"),
        None => format!("config: {message}"),
    })]
    Config { line: Option<usize>, message: String },

    #[error("I/O error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(line: impl Into<Option<usize>>, message: impl Into<String>) -> Self {
        Error::Config {
            line: line.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
