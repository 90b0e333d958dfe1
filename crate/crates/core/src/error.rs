use thiserror::Error;

/// Errors raised by the spectral, zeta and free-energy routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid scale factor {0}: must be positive")]
    InvalidScale(f64),

    #[error("degenerate shell: scale factor {0} must exceed 1")]
    DegenerateShell(f64),

    #[error("box geometry: the smooth-boundary a_2 formula omits corner contributions (set the corner override to accept)")]
    CornerContribution,

    #[error("form degree p = {p} out of range for dimension D = {dim}")]
    FormDegree { p: i64, dim: usize },

    #[error("unsupported request: {0}")]
    Unsupported(String),

    #[error("root finding failed on [{lo}, {hi}]: {reason}")]
    RootFinding { lo: f64, hi: f64, reason: String },

    #[error("no tail model attached to the mode list; truncation bound unavailable")]
    BoundUnavailable,

    #[error("insufficient spectrum: {reason}")]
    InsufficientSpectrum { reason: String },

    #[error("fit window too narrow or ill-conditioned (condition number {condition:.3e})")]
    WindowTooNarrow { condition: f64 },

    #[error("pole at s = {0}: use the finite-part/residue form")]
    Pole(f64),

    #[error("s = {s} too close to the abscissa of convergence {abscissa} for the available spectrum")]
    DivergenceMargin { s: f64, abscissa: f64 },

    #[error("continuation needs heat coefficients up to n = {needed}, have up to n = {have}")]
    ContinuationOrder { needed: usize, have: usize },

    #[error("missing heat coefficient c_{0}")]
    Coverage(usize),

    #[error("extrapolation does not converge: {0}")]
    NoLimit(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
