use thiserror::Error;

/// Errors raised by the array, synthesis, and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar argument fell outside its admissible domain.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// An index argument fell outside its admissible range.
    #[error("{what} index {index} out of range (limit {limit})")]
    Index {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    /// Two operands disagree on a dimension.
    #[error("shape mismatch in {what}: expected {expected}, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    /// The input carries no usable information (e.g. an all-zero pattern).
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    /// Training produced a non-finite loss.
    #[error("training diverged at iteration {iteration}")]
    TrainingDiverged { iteration: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_angle(what: &'static str, theta: f64) -> Result<()> {
    if theta.is_finite() && (0.0..=core::f64::consts::PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::Domain { what, value: theta })
    }
}
