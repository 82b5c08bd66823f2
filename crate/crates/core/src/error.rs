use thiserror::Error;

/// Errors raised by spectral-space construction and operator evaluation.
#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("domain length must be strictly positive, got {0}")]
    NonPositiveLength(f64),
    #[error("domain dimension must be 1 or 2, got {0}")]
    BadDimension(usize),
    #[error("Dirichlet domains carry no constant mode; include_mean is periodic-only")]
    MeanOnDirichlet,
    #[error("truncation count m must be >= 1")]
    EmptyTruncation,
    #[error("truncation {requested} exceeds source truncation {available}")]
    TruncationTooLarge { requested: usize, available: usize },
    #[error("fields must share the same basis")]
    BasisMismatch,
    #[error("operation requires a 2D field, got dimension {0}")]
    Not2D(usize),
    #[error("operation requires a 1D field, got dimension {0}")]
    Not1D(usize),
    #[error("field has {components} components but the domain dimension is {dimension}")]
    ComponentMismatch { components: usize, dimension: usize },
    #[error("grid resolution {got} per axis is below the dealiasing minimum {min}")]
    UnderResolved { got: usize, min: usize },
    #[error("field on a mean-excluded domain has spatial mean {0:.3e} (tolerance 1e-10)")]
    NonZeroMean(f64),
    #[error("zero field rejected: {0}")]
    ZeroField(&'static str),
    #[error("{0}")]
    Invalid(String),
}

/// Errors raised by time integration.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("viscosity must be strictly positive, got {0}")]
    NonPositiveViscosity(f64),
    #[error("time step must be strictly positive, got {0}")]
    NonPositiveDt(f64),
    #[error("final time must be nonnegative, got {0}")]
    NegativeTEnd(f64),
    #[error(
        "blow-up detected at step {step} (t = {t:.6}): |u|^2 = {l2_sq:.6e} exceeds ceiling {ceiling:.6e}"
    )]
    BlowUp {
        step: usize,
        t: f64,
        l2_sq: f64,
        ceiling: f64,
    },
    #[error("non-finite coefficient at step {step} (t = {t:.6})")]
    NonFinite { step: usize, t: f64 },
}
