//! Preconditioned MINRES for symmetric indefinite systems, with the absolute
//! value Strang circulant as the preconditioner for `Y_n T_n[f] x = Y_n b`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circulant::{abs_circulant, strang_circulant, CirculantSpec};
use crate::eigensolve::{sym_eig, SpectrumReport};
use crate::error::{Error, Result};
use crate::matrix::{dot, norm2, DenseMatrix};
use crate::structured::flipped_toeplitz;
use crate::symbol::Symbol;

/// A square linear operator on `R^n`.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n_rows()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matvec(x)
    }
}

/// Wraps a closure as an operator.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Vec<f64>> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnOperator { dim, f }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64>> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (self.f)(x)
    }
}

/// `|C|^{-1}` applied through the DFT.
#[derive(Debug, Clone)]
pub struct CirculantPreconditioner {
    inverse: CirculantSpec,
}

impl CirculantPreconditioner {
    /// Inverse of `|c|`; fails when `min |lambda| <= 1e-12 max |lambda|`.
    pub fn abs_inverse(c: &CirculantSpec) -> Result<Self> {
        let abs = abs_circulant(c);
        let (min, max) = (abs.min_abs_eigenvalue(), abs.max_abs_eigenvalue());
        if !(min > 1e-12 * max) {
            return Err(Error::SingularCirculant { min_abs: min, max_abs: max });
        }
        let inverse = abs.map_spectrum(|v| Complex64::new(1.0 / v.re, 0.0))?;
        Ok(CirculantPreconditioner { inverse })
    }

    pub fn circulant(&self) -> &CirculantSpec {
        &self.inverse
    }
}

impl LinearOperator for CirculantPreconditioner {
    fn dim(&self) -> usize {
        self.inverse.n()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.inverse.apply(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreconditionerKind {
    None,
    AbsCirculant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinresOptions {
    pub rtol: f64,
    /// `None` means `4 n`.
    pub maxit: Option<usize>,
    /// Seed for the symmetry probes.
    pub seed: u64,
    pub check_symmetry: bool,
}

impl Default for MinresOptions {
    fn default() -> Self {
        MinresOptions { rtol: 1e-8, maxit: None, seed: 0, check_symmetry: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    pub iterations: usize,
    /// Preconditioned relative residual after each iteration.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    /// Lanczos produced `beta = 0` and the iteration stopped there.
    pub breakdown: bool,
    pub preconditioner: PreconditionerKind,
    /// `||b - A x|| / ||b||` recomputed from the returned solution.
    pub true_relative_residual: f64,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("solve report serialization")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinresOutcome {
    pub solution: Vec<f64>,
    pub report: SolveReport,
}

fn probe_vectors(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Randomised check `|<Ax, y> - <x, Ay>| <= 1e-10 ||x|| ||y|| ||A||` on three pairs.
pub fn check_symmetric(op: &dyn LinearOperator, seed: u64) -> Result<()> {
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..3).map(|_| (probe_vectors(n, &mut rng), probe_vectors(n, &mut rng))).collect();
    let images: Vec<(Vec<f64>, Vec<f64>)> = pairs.iter().map(|(x, y)| (op.apply(x), op.apply(y))).collect();
    let norm_est = pairs
        .iter()
        .zip(&images)
        .flat_map(|((x, y), (ax, ay))| [norm2(ax) / norm2(x), norm2(ay) / norm2(y)])
        .fold(0.0f64, f64::max);
    for ((x, y), (ax, ay)) in pairs.iter().zip(&images) {
        let gap = (dot(ax, y) - dot(x, ay)).abs();
        let bound = 1e-10 * norm2(x) * norm2(y) * norm_est;
        if gap > bound {
            return Err(Error::OperatorNotSymmetric { gap, bound });
        }
    }
    Ok(())
}

fn check_positive(op: &dyn LinearOperator, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for _ in 0..3 {
        let x = probe_vectors(op.dim(), &mut rng);
        let q = dot(&x, &op.apply(&x));
        if !(q > 0.0) {
            return Err(Error::PreconditionerNotPositive(q));
        }
    }
    Ok(())
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Preconditioned MINRES (Lanczos three-term recurrence, QR of the tridiagonal
/// by Givens rotations). `m_inv` applies the inverse of an SPD preconditioner.
/// Stops when the preconditioned residual `phibar / beta_1` drops to `rtol`.
pub fn minres(
    a: &dyn LinearOperator,
    m_inv: Option<&dyn LinearOperator>,
    b: &[f64],
    options: &MinresOptions,
) -> Result<MinresOutcome> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::Dimension(format!("rhs has length {}, operator is {n}x{n}", b.len())));
    }
    if let Some(m) = m_inv {
        if m.dim() != n {
            return Err(Error::Dimension("preconditioner size mismatch".into()));
        }
    }
    if options.check_symmetry {
        check_symmetric(a, options.seed)?;
        if let Some(m) = m_inv {
            check_symmetric(m, options.seed.wrapping_add(1))?;
            check_positive(m, options.seed)?;
        }
    }
    let precond = |v: &[f64]| m_inv.map_or_else(|| v.to_vec(), |m| m.apply(v));
    let kind = if m_inv.is_some() { PreconditionerKind::AbsCirculant } else { PreconditionerKind::None };
    let maxit = options.maxit.unwrap_or(4 * n);

    let mut x = vec![0.0; n];
    let mut r1 = b.to_vec();
    let mut y = precond(&r1);
    let beta1_sq = dot(&r1, &y);
    if beta1_sq < 0.0 {
        return Err(Error::PreconditionerNotPositive(beta1_sq));
    }
    let beta1 = beta1_sq.sqrt();
    let mut report = SolveReport {
        n,
        iterations: 0,
        residual_history: Vec::new(),
        converged: false,
        breakdown: false,
        preconditioner: kind,
        true_relative_residual: 0.0,
    };
    if beta1 == 0.0 {
        report.converged = true;
        return Ok(MinresOutcome { solution: x, report });
    }

    let mut r2 = r1.clone();
    let (mut oldb, mut beta) = (0.0, beta1);
    let (mut dbar, mut epsln, mut phibar) = (0.0, 0.0, beta1);
    let (mut cs, mut sn) = (-1.0, 0.0);
    let mut w = vec![0.0; n];
    let mut w2 = vec![0.0; n];

    for itn in 1..=maxit {
        let v: Vec<f64> = y.iter().map(|yi| yi / beta).collect();
        y = a.apply(&v);
        if itn >= 2 {
            axpy(&mut y, -beta / oldb, &r1);
        }
        let alfa = dot(&v, &y);
        axpy(&mut y, -alfa / beta, &r2);
        r1 = std::mem::replace(&mut r2, y);
        y = precond(&r2);
        oldb = beta;
        let beta_sq = dot(&r2, &y);
        if beta_sq < 0.0 {
            return Err(Error::PreconditionerNotPositive(beta_sq));
        }
        beta = beta_sq.sqrt();

        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        let w1 = std::mem::replace(&mut w2, std::mem::take(&mut w));
        w = v
            .iter()
            .zip(&w1)
            .zip(&w2)
            .map(|((vi, w1i), w2i)| (vi - oldeps * w1i - delta * w2i) / gamma)
            .collect();
        axpy(&mut x, phi, &w);

        let rel = phibar / beta1;
        report.iterations = itn;
        report.residual_history.push(rel);
        if rel <= options.rtol {
            report.converged = true;
            break;
        }
        if beta <= f64::EPSILON * beta1 {
            report.breakdown = true;
            report.converged = true;
            break;
        }
    }

    let ax = a.apply(&x);
    let res: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    report.true_relative_residual = norm2(&res) / norm2(b);
    Ok(MinresOutcome { solution: x, report })
}

/// Solve `Y_n T_n[f] x = Y_n b`, optionally preconditioned by `|C_n[f]|`.
pub fn solve_flipped_system(f: &Symbol, b: &[f64], precondition: bool, options: &MinresOptions) -> Result<MinresOutcome> {
    let n = b.len();
    let a = flipped_toeplitz(f, n)?;
    let rhs = flip_vector(b);
    if precondition {
        let m = CirculantPreconditioner::abs_inverse(&strang_circulant(f, n)?)?;
        minres(&a, Some(&m), &rhs, options)
    } else {
        minres(&a, None, &rhs, options)
    }
}

/// Eigenvalues of `|C_n|^{-1/2} Y_n T_n[f] |C_n|^{-1/2}`, which is similar to
/// `|C_n|^{-1} Y_n T_n[f]`.
pub fn preconditioned_spectrum(f: &Symbol, n: usize) -> Result<SpectrumReport> {
    let c = strang_circulant(f, n)?;
    let abs = abs_circulant(&c);
    let (min, max) = (abs.min_abs_eigenvalue(), abs.max_abs_eigenvalue());
    if !(min > 1e-12 * max) {
        return Err(Error::SingularCirculant { min_abs: min, max_abs: max });
    }
    let half = abs.map_spectrum(|v| Complex64::new(v.re.sqrt().recip(), 0.0))?.materialize();
    let yt = flipped_toeplitz(f, n)?;
    let p = (&(&half * &yt) * &half).symmetrized();
    sym_eig(&p)
}

/// `Y_n b`.
pub fn flip_vector(b: &[f64]) -> Vec<f64> {
    b.iter().rev().copied().collect()
}
