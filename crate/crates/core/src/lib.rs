//! Spectra of Toeplitz matrices symmetrized by the anti-identity flip.
//!
//! The crate builds `T_n[f]`, `Y_n T_n[f]`, Hankel corner blocks and Strang
//! circulants from a finite Fourier coefficient map, computes their
//! eigenvalues and singular values with a self-contained dense solver, and
//! measures distribution, inertia and clustering properties at finite `n`.
//! A preconditioned MINRES solver with the absolute value circulant as
//! preconditioner covers the linear-system side.

pub mod circulant;
pub mod eigensolve;
pub mod error;
pub mod krylov;
pub mod matrix;
pub mod spectral;
pub mod structured;
pub mod symbol;

pub use circulant::{
    abs_circulant, dft, factorize_flip_circulant, phase_circulant, sign_circulant, strang_circulant, CirculantSpec,
    Direction, FlipFactorization,
};
pub use eigensolve::{inertia, singular_values, sym_eig, Inertia, SpectrumKind, SpectrumReport, ZeroTol};
pub use error::{Error, Result};
pub use krylov::{minres, preconditioned_spectrum, solve_flipped_system, LinearOperator, MinresOptions, SolveReport};
pub use matrix::DenseMatrix;
pub use spectral::{
    acs_split_check, cluster_measure, distribution_check, inertia_asymptotics, sparsely_vanishing_estimate, AcsSplit,
    DistributionCheck, DistributionOptions, InertiaTable, MatrixFamily, SpectrumMode,
};
pub use structured::{block_decompose, flip, flipped_toeplitz, hankel_block, toeplitz, BlockDecomposition, HankelSign};
pub use symbol::{builtin_symbol, Builtin, IntegrationMode, Symbol, TestFunction};
