use thiserror::Error;

/// Errors produced by the structured-matrix toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown builtin symbol `{0}` (expected bidiagonal, grcar, fourth_diff or cosine6)")]
    UnknownSymbol(String),

    #[error("symbol parse error on line {line}: {msg}")]
    SymbolParse { line: usize, msg: String },

    #[error("symbol coefficient a_{index} is not real (imaginary part {imag:e})")]
    ComplexCoefficient { index: i64, imag: f64 },

    #[error("symbol takes complex values on the grid (max |Im f| = {max_imag:e})")]
    ComplexSamples { max_imag: f64 },

    #[error("invalid dimension: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (max |A - A^T| = {asym:e}, max |A| = {scale:e})")]
    NotSymmetric { asym: f64, scale: f64 },

    #[error("QL iteration did not converge for eigenvalue {index} after {sweeps} sweeps")]
    NoConvergence { index: usize, sweeps: usize },

    #[error("circulant size {n} too small for a symbol of degree {degree} (need n > {need})")]
    CirculantTooSmall { n: usize, degree: usize, need: usize },

    #[error("circulant has materially complex eigenvalue {index} (Im = {imag:e})")]
    ComplexEigenvalue { index: usize, imag: f64 },

    #[error("circulant is numerically singular (min |lambda| = {min_abs:e}, max |lambda| = {max_abs:e})")]
    SingularCirculant { min_abs: f64, max_abs: f64 },

    #[error("circulant solve left an imaginary residue of {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("operator failed the symmetry probe (|<Ax,y> - <x,Ay>| = {gap:e}, bound {bound:e})")]
    OperatorNotSymmetric { gap: f64, bound: f64 },

    #[error("preconditioner is not positive definite (<x,Mx> = {0:e})")]
    PreconditionerNotPositive(f64),

    #[error("rank bound violated: rank {rank} exceeds {bound}")]
    RankBound { rank: usize, bound: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
