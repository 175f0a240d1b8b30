//! Toeplitz, flipped Toeplitz and Hankel builders.
//!
//! Formulas use 1-based indices `(j, k)`; storage is 0-based, so entry
//! `(j, k)` lives at `(j - 1, k - 1)`. With that mapping:
//!
//! | matrix            | 1-based entry            | 0-based entry `(i, l)` |
//! |-------------------|--------------------------|------------------------|
//! | `T_n[f]`          | `a_{j-k}`                | `a_{i-l}`              |
//! | `Y_n`             | `[j + k = n + 1]`        | `[i + l = n - 1]`      |
//! | `Y_n T_n[f]`      | `a_{n+1-j-k}`            | `a_{n-1-i-l}`          |
//! | `H_nu[f, +]`      | `a_{j+k-1}`              | `a_{i+l+1}`            |
//! | `H_nu[f, -]`      | `a_{-(j+k-1)}`           | `a_{-(i+l+1)}`         |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::symbol::Symbol;

/// Which Hankel corner block to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HankelSign {
    /// Positive coefficients, `a_1` at `(1, 1)`.
    Plus,
    /// Negative coefficients, `a_{-1}` at `(1, 1)`.
    Minus,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Dimension("matrix size must be positive".into()));
    }
    Ok(())
}

/// `T_n[f]` with `(T)_{j,k} = a_{j-k}`.
pub fn toeplitz(f: &Symbol, n: usize) -> Result<DenseMatrix> {
    check_size(n)?;
    f.ensure_real()?;
    Ok(DenseMatrix::from_fn(n, n, |i, l| f.real_coeff(i as i64 - l as i64)))
}

/// The anti-identity `Y_n`.
pub fn flip(n: usize) -> Result<DenseMatrix> {
    check_size(n)?;
    Ok(DenseMatrix::from_fn(n, n, |i, l| if i + l == n - 1 { 1.0 } else { 0.0 }))
}

/// `Y_n T_n[f]`, built directly from the coefficients. Exactly symmetric.
pub fn flipped_toeplitz(f: &Symbol, n: usize) -> Result<DenseMatrix> {
    check_size(n)?;
    f.ensure_real()?;
    let n = n as i64;
    Ok(DenseMatrix::from_fn(n as usize, n as usize, |i, l| {
        f.real_coeff(n - 1 - i as i64 - l as i64)
    }))
}

/// The `nu x nu` Hankel block `H_nu[f, +]` or `H_nu[f, -]`.
pub fn hankel_block(f: &Symbol, nu: usize, sign: HankelSign) -> Result<DenseMatrix> {
    check_size(nu)?;
    f.ensure_real()?;
    Ok(DenseMatrix::from_fn(nu, nu, |i, l| {
        let m = (i + l + 1) as i64;
        match sign {
            HankelSign::Plus => f.real_coeff(m),
            HankelSign::Minus => f.real_coeff(-m),
        }
    }))
}

/// `Y M Y`: reverse both row and column order.
pub fn flip_both(m: &DenseMatrix) -> DenseMatrix {
    let (r, c) = (m.n_rows(), m.n_cols());
    DenseMatrix::from_fn(r, c, |i, l| m[(r - 1 - i, c - 1 - l)])
}

/// `Y M`: reverse row order.
pub fn flip_rows(m: &DenseMatrix) -> DenseMatrix {
    let r = m.n_rows();
    DenseMatrix::from_fn(r, m.n_cols(), |i, l| m[(r - 1 - i, l)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// Splitting of `Y_n T_n[f]` into a Hankel-type remainder and an
/// anti-diagonal core built from `Y_nu T_nu[f]`.
///
/// Even `n = 2 nu`:
/// ```text
/// remainder = [ Y H_nu[f,+] Y      0      ]   core = [    0      Y T_nu[f] ]
///             [      0         H_nu[f,-]  ]          [ Y T_nu[f]     0     ]
/// ```
/// Odd `n = 2 nu + 1`, `mu = nu + 1`: `remainder = E' + E''` with
/// `E' = blockdiag(Y H_mu[f e^{i theta},+] Y, H_nu[f e^{i theta},-])` and `E''`
/// holding the vector `w_p = a_{-p}` in the centre row and column; the core has
/// `Y T_nu[f]` in the corner blocks of a 3x3 block layout with zero centre.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub parity: Parity,
    pub nu: usize,
    pub remainder: DenseMatrix,
    pub core: DenseMatrix,
    /// `E''` for odd sizes (already included in `remainder`).
    pub cross_terms: Option<DenseMatrix>,
}

impl BlockDecomposition {
    pub fn size(&self) -> usize {
        self.core.n_rows()
    }

    /// `remainder + core`.
    pub fn reconstruct(&self) -> DenseMatrix {
        &self.remainder + &self.core
    }
}

pub fn block_decompose(f: &Symbol, n: usize) -> Result<BlockDecomposition> {
    if n < 2 {
        return Err(Error::Dimension("block decomposition needs n >= 2".into()));
    }
    f.ensure_real()?;
    let nu = n / 2;
    let yt = flip_rows(&toeplitz(f, nu)?);
    let mut core = DenseMatrix::zeros(n, n);
    core.set_block(0, n - nu, &yt);
    core.set_block(n - nu, 0, &yt);

    let mut remainder = DenseMatrix::zeros(n, n);
    if n % 2 == 0 {
        remainder.set_block(0, 0, &flip_both(&hankel_block(f, nu, HankelSign::Plus)?));
        remainder.set_block(nu, nu, &hankel_block(f, nu, HankelSign::Minus)?);
        return Ok(BlockDecomposition { parity: Parity::Even, nu, remainder, core, cross_terms: None });
    }

    let mu = nu + 1;
    let g = f.shift(1);
    remainder.set_block(0, 0, &flip_both(&hankel_block(&g, mu, HankelSign::Plus)?));
    remainder.set_block(mu, mu, &hankel_block(&g, nu, HankelSign::Minus)?);
    let mut cross = DenseMatrix::zeros(n, n);
    for p in 1..=nu {
        let w = f.real_coeff(-(p as i64));
        cross[(nu, nu + p)] = w;
        cross[(nu + p, nu)] = w;
        remainder[(nu, nu + p)] = w;
        remainder[(nu + p, nu)] = w;
    }
    Ok(BlockDecomposition { parity: Parity::Odd, nu, remainder, core, cross_terms: Some(cross) })
}
