use num_complex::Complex64;

/// Library-wide error type.
///
/// `Convergence` and `Precision` are "honest failure" variants: they carry the
/// best available estimate together with a bound on its absolute error, so a
/// caller can still decide whether the partial answer is usable.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms; estimate {estimate}, |error| <= {bound:e}")]
    Convergence {
        terms: usize,
        estimate: Complex64,
        bound: f64,
    },

    #[error("target accuracy unreachable at {bits} bits; estimate {estimate}, |error| <= {bound:e}")]
    Precision {
        bits: u32,
        estimate: Complex64,
        bound: f64,
    },

    #[error("result magnitude out of f64 range (log2|value| ~ {log2_magnitude:.1})")]
    Overflow { log2_magnitude: f64 },

    #[error("truncation loss {loss:e} still above target at the basis-size cap")]
    Truncation { loss: f64 },

    #[error("sampler: {0}")]
    Sampler(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit status used by the command-line front end: domain and
    /// input problems map to 1, numeric failures (convergence, precision,
    /// overflow, truncation, sampling) map to 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
