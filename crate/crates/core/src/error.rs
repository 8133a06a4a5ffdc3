use thiserror::Error;

/// Errors raised by the numerical and physical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular to working precision (pivot {pivot:e} at column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("leading polynomial coefficient is zero")]
    DegeneratePolynomial,

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("unknown mode label `{0}`")]
    UnknownMode(String),

    #[error("invalid output pair `{0}` (expected ac, ad or cd)")]
    InvalidPair(String),

    #[error("operating point violates sweet-spot condition: {condition}")]
    SweetSpotViolation { condition: String },

    #[error("Bogoliubov coefficients need Gamma_c > Gamma_a (got Gamma_a = {gamma_a}, Gamma_c = {gamma_c})")]
    GainExceedsCooling { gamma_a: f64, gamma_c: f64 },

    #[error("operating point is unstable (max Re(lambda) = {max_re:e}); stationary moments undefined")]
    Unstable { max_re: f64 },

    #[error("covariance is unphysical (smallest symplectic eigenvalue {nu:e} < 1/2)")]
    Unphysical { nu: f64 },

    #[error("covariance block structure violated by {deviation:e}")]
    Structure { deviation: f64 },

    #[error("witness needs at least one sample")]
    NoSamples,
}

pub type Result<T> = std::result::Result<T, Error>;
