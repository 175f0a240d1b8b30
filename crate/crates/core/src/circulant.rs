//! Circulant matrices through the DFT.
//!
//! The transform convention is `X_j = sum_k x_k w^{jk}` with `w = e^{-2 pi i / n}`,
//! so a circulant with first column `c` (entry `(j, k) = c_{(j - k) mod n}`) has
//! eigenvalues `lambda_j = DFT(c)_j` and eigenvectors `v_k = w^{-jk}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{norm2, DenseMatrix};
use crate::structured::flip_rows;
use crate::symbol::Symbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

/// Forward or inverse DFT. Power-of-two lengths use a recursive radix-2 split,
/// other lengths direct summation. The inverse carries the `1/n` factor.
pub fn dft(x: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let mut out = if n.is_power_of_two() { fft_radix2(x, sign) } else { dft_direct(x, sign) };
    if direction == Direction::Inverse {
        let scale = 1.0 / n as f64;
        out.iter_mut().for_each(|v| *v *= scale);
    }
    out
}

/// Unnormalised transform with kernel `e^{sign 2 pi i jk / n}`.
fn dft_direct(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    let twiddles: Vec<Complex64> = (0..n).map(|m| root(m, n, sign)).collect();
    (0..n)
        .map(|j| x.iter().enumerate().map(|(k, &v)| v * twiddles[(j * k) % n]).sum())
        .collect()
}

fn fft_radix2(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0]];
    }
    let half = n / 2;
    let even: Vec<Complex64> = x.iter().step_by(2).copied().collect();
    let odd: Vec<Complex64> = x.iter().skip(1).step_by(2).copied().collect();
    let e = fft_radix2(&even, sign);
    let o = fft_radix2(&odd, sign);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..half {
        let t = root(j, n, sign) * o[j];
        out[j] = e[j] + t;
        out[j + half] = e[j] - t;
    }
    out
}

#[inline]
fn root(m: usize, n: usize, sign: f64) -> Complex64 {
    Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * m as f64 / n as f64)
}

fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// A real circulant held as its first column plus cached eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpec {
    first_column: Vec<f64>,
    eigenvalues: Vec<Complex64>,
}

impl CirculantSpec {
    pub fn from_first_column(first_column: Vec<f64>) -> Result<Self> {
        if first_column.is_empty() {
            return Err(Error::Dimension("circulant needs n >= 1".into()));
        }
        if first_column.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite circulant entry".into()));
        }
        let eigenvalues = dft(&to_complex(&first_column), Direction::Forward);
        Ok(CirculantSpec { first_column, eigenvalues })
    }

    /// Circulant with the given spectrum. The spectrum must be conjugate
    /// symmetric (`lambda_{n-j} = conj(lambda_j)`) up to rounding; imaginary
    /// residues of the first column below `1e-12 max|lambda|` are dropped.
    pub fn from_eigenvalues(eigenvalues: Vec<Complex64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Dimension("circulant needs n >= 1".into()));
        }
        let col = dft(&eigenvalues, Direction::Inverse);
        let max = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let residue = col.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
        if residue > 1e-12 * max.max(f64::MIN_POSITIVE) {
            return Err(Error::ImaginaryResidue { residue });
        }
        Ok(CirculantSpec { first_column: col.iter().map(|v| v.re).collect(), eigenvalues })
    }

    pub fn n(&self) -> usize {
        self.first_column.len()
    }

    pub fn first_column(&self) -> &[f64] {
        &self.first_column
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn min_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(v.norm()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        CirculantSpec {
            first_column: self.first_column.iter().map(|v| v * factor).collect(),
            eigenvalues: self.eigenvalues.iter().map(|v| v * factor).collect(),
        }
    }

    /// Dense matrix with entry `(j, k) = c_{(j - k) mod n}`, by rotating the
    /// first column (no transform round trip).
    pub fn materialize(&self) -> DenseMatrix {
        let n = self.n();
        DenseMatrix::from_fn(n, n, |j, k| self.first_column[(j + n - k) % n])
    }

    /// `C x` through the DFT.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n(), "circulant apply dimension mismatch");
        let xf = dft(&to_complex(x), Direction::Forward);
        let prod: Vec<Complex64> = xf.iter().zip(&self.eigenvalues).map(|(a, b)| a * b).collect();
        dft(&prod, Direction::Inverse).iter().map(|v| v.re).collect()
    }

    /// `C^{-1} x` as `IDFT(DFT(x) / lambda)`.
    pub fn apply_inverse(&self, x: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(x.len(), self.n(), "circulant solve dimension mismatch");
        let (min, max) = (self.min_abs_eigenvalue(), self.max_abs_eigenvalue());
        if !(min > 1e-12 * max) {
            return Err(Error::SingularCirculant { min_abs: min, max_abs: max });
        }
        let xf = dft(&to_complex(x), Direction::Forward);
        let quot: Vec<Complex64> = xf.iter().zip(&self.eigenvalues).map(|(a, b)| a / b).collect();
        let y = dft(&quot, Direction::Inverse);
        let residue = y.iter().map(|v| v.im * v.im).sum::<f64>().sqrt();
        let out: Vec<f64> = y.iter().map(|v| v.re).collect();
        if residue > 1e-10 * norm2(x).max(norm2(&out)) {
            return Err(Error::ImaginaryResidue { residue });
        }
        Ok(out)
    }

    /// Circulant with eigenvalues `g(lambda_j)`.
    pub fn map_spectrum<F: Fn(Complex64) -> Complex64>(&self, g: F) -> Result<Self> {
        Self::from_eigenvalues(self.eigenvalues.iter().map(|&v| g(v)).collect())
    }
}

/// Strang circulant `C_n[p] = sum_{k=-M}^{M} rho_k Pi_n^k`.
pub fn strang_circulant(p: &Symbol, n: usize) -> Result<CirculantSpec> {
    p.ensure_real()?;
    let degree = p.degree();
    if n <= 2 * degree {
        return Err(Error::CirculantTooSmall { n, degree, need: 2 * degree });
    }
    let mut col = vec![0.0; n];
    for (k, v) in p.coeffs() {
        let idx = k.rem_euclid(n as i64) as usize;
        col[idx] = v.re;
    }
    CirculantSpec::from_first_column(col)
}

/// `|C| = F |Lambda| F^*`, symmetric positive semidefinite.
pub fn abs_circulant(c: &CirculantSpec) -> CirculantSpec {
    let eigenvalues: Vec<Complex64> = c.eigenvalues.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect();
    let col = dft(&eigenvalues, Direction::Inverse);
    let n = col.len();
    // real even spectrum: the column is even, make it exactly so
    let first_column = (0..n).map(|k| 0.5 * (col[k].re + col[(n - k) % n].re)).collect();
    CirculantSpec { first_column, eigenvalues }
}

/// Circulant whose eigenvalues are the signs of the (real) eigenvalues of `c`,
/// with `sign(0) = +1`.
pub fn sign_circulant(c: &CirculantSpec) -> Result<CirculantSpec> {
    let tol = 1e-12 * c.max_abs_eigenvalue();
    if let Some((index, v)) = c.eigenvalues.iter().enumerate().find(|(_, v)| v.im.abs() > tol) {
        return Err(Error::ComplexEigenvalue { index, imag: v.im });
    }
    let signs: Vec<Complex64> = c
        .eigenvalues
        .iter()
        .map(|v| Complex64::new(if v.re < 0.0 && v.re.abs() > tol { -1.0 } else { 1.0 }, 0.0))
        .collect();
    CirculantSpec::from_eigenvalues(signs)
}

/// Circulant whose eigenvalues are the phases `lambda_j / |lambda_j|` of `c`
/// (`+1` where `lambda_j = 0`). Agrees with [`sign_circulant`] on real
/// spectra and stays real orthogonal for any real circulant.
pub fn phase_circulant(c: &CirculantSpec) -> Result<CirculantSpec> {
    let tol = 1e-12 * c.max_abs_eigenvalue();
    let n = c.n();
    let phase = |v: Complex64| if v.norm() <= tol { Complex64::new(1.0, 0.0) } else { v / v.norm() };
    // Pair j with n - j so the spectrum is exactly conjugate symmetric.
    let mut phases = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        let mirror = (n - j) % n;
        phases[j] = if mirror == j {
            let v = c.eigenvalues[j];
            // self-conjugate index: lambda is real up to rounding
            Complex64::new(if v.re < -tol { -1.0 } else { 1.0 }, 0.0)
        } else if j < mirror {
            phase(c.eigenvalues[j])
        } else {
            phases[mirror].conj()
        };
    }
    CirculantSpec::from_eigenvalues(phases)
}

/// Factors of `Y_n C_n[p] = Q A`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipFactorization {
    /// `Y_n` times the phase circulant: symmetric and orthogonal.
    pub q: DenseMatrix,
    /// `|C_n[p]|`: symmetric positive semidefinite.
    pub a: DenseMatrix,
}

/// `Y_n C_n[p] = Q_n |C_n[p]|` with `Q_n = Y_n \tilde C_n`.
///
/// `\tilde C_n` carries the signs of the circulant eigenvalues for real
/// spectra and their phases otherwise.
pub fn factorize_flip_circulant(p: &Symbol, n: usize) -> Result<FlipFactorization> {
    let c = strang_circulant(p, n)?;
    let q = flip_rows(&phase_circulant(&c)?.materialize());
    let a = abs_circulant(&c).materialize();
    Ok(FlipFactorization { q, a })
}

/// `Y_n C_n[p]` materialised directly.
pub fn flipped_strang(p: &Symbol, n: usize) -> Result<DenseMatrix> {
    Ok(flip_rows(&strang_circulant(p, n)?.materialize()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Builtin;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
    }

    #[test]
    fn dft_examples() {
        let delta = dft(&[c(1.0), c(0.0), c(0.0), c(0.0)], Direction::Forward);
        assert_eq!(delta, vec![c(1.0); 4]);
        let ones = dft(&[c(1.0); 4], Direction::Forward);
        assert!(max_diff(&ones, &[c(4.0), c(0.0), c(0.0), c(0.0)]) < 1e-15);
    }

    #[test]
    fn dft_matches_direct_sum() {
        for n in [1usize, 2, 3, 5, 8, 12, 16, 32] {
            let x: Vec<Complex64> = (0..n).map(|k| Complex64::new((k as f64).sin(), (k * k) as f64 * 0.1)).collect();
            let fast = dft(&x, Direction::Forward);
            let slow = dft_direct(&x, -1.0);
            assert!(max_diff(&fast, &slow) < 1e-11, "n={n}");
        }
    }

    #[test]
    fn dft_round_trip_all_lengths() {
        for n in 1..=64usize {
            let x: Vec<Complex64> = (0..n).map(|k| Complex64::new((k as f64 * 0.7).cos(), (k as f64).sqrt())).collect();
            let back = dft(&dft(&x, Direction::Forward), Direction::Inverse);
            let scale = x.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            assert!(max_diff(&x, &back) <= 1e-12 * scale, "n={n}");
        }
    }

    #[test]
    fn strang_first_columns() {
        let bi = strang_circulant(&Builtin::Bidiagonal.symbol(), 4).unwrap();
        assert_eq!(bi.first_column(), &[2.0, 1.0, 0.0, 0.0]);
        let c6 = strang_circulant(&Builtin::Cosine6.symbol(), 5).unwrap();
        assert_eq!(c6.first_column(), &[1.0, 3.0, 0.0, 0.0, 3.0]);
        assert!(matches!(
            strang_circulant(&Builtin::Grcar.symbol(), 6),
            Err(Error::CirculantTooSmall { need: 6, .. })
        ));
    }

    /// Eigenpairs checked against the materialised matrix: `C v_j = lambda_j v_j`
    /// with `(v_j)_k = w^{-jk}`, and `lambda_j = p(-2 pi j / n)`.
    #[test]
    fn strang_eigen_orientation() {
        for b in Builtin::ALL {
            let p = b.symbol();
            let n = 11;
            let circ = strang_circulant(&p, n).unwrap();
            let dense = circ.materialize();
            for j in 0..n {
                let v: Vec<Complex64> = (0..n).map(|k| root(j * k % n, n, 1.0)).collect();
                let lam = circ.eigenvalues()[j];
                for r in 0..n {
                    let cv: Complex64 = (0..n).map(|k| v[k] * dense[(r, k)]).sum();
                    assert!((cv - lam * v[r]).norm() < 1e-12, "{b} j={j}");
                }
                let theta = -2.0 * std::f64::consts::PI * j as f64 / n as f64;
                assert!((lam - p.evaluate(theta)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn abs_circulant_examples() {
        // a real circulant needs lambda_{n-j} = conj(lambda_j)
        assert!(CirculantSpec::from_eigenvalues(vec![c(2.0), c(-1.0), c(-1.0), c(2.0)]).is_err());
        let spec = CirculantSpec::from_eigenvalues(vec![c(2.0), c(-1.0), c(3.0), c(-1.0)]).unwrap();
        let abs = abs_circulant(&spec);
        assert!(max_diff(abs.eigenvalues(), &[c(2.0), c(1.0), c(3.0), c(1.0)]) == 0.0);
        assert_eq!(abs_circulant(&abs), abs);
        let dense = abs.materialize();
        assert!(dense.asymmetry() < 1e-15);
    }

    #[test]
    fn sign_circulant_examples() {
        let spec = CirculantSpec::from_eigenvalues(vec![c(2.0), c(-1.0), c(0.0), c(-1.0)]).unwrap();
        let s = sign_circulant(&spec).unwrap();
        assert!(max_diff(s.eigenvalues(), &[c(1.0), c(-1.0), c(1.0), c(-1.0)]) < 1e-15);
        let abs = abs_circulant(&spec);
        for ((sv, av), orig) in s.eigenvalues().iter().zip(abs.eigenvalues()).zip(spec.eigenvalues()) {
            assert!((sv * av - orig).norm() < 1e-15);
        }
        let complex = strang_circulant(&Builtin::Bidiagonal.symbol(), 4).unwrap();
        assert!(matches!(sign_circulant(&complex), Err(Error::ComplexEigenvalue { .. })));
    }

    #[test]
    fn q_is_symmetric_orthogonal() {
        let p = Builtin::Cosine6.symbol();
        for n in [3usize, 8, 9, 16] {
            let circ = strang_circulant(&p, n).unwrap();
            let q = flip_rows(&sign_circulant(&circ).unwrap().materialize());
            assert!(q.asymmetry() < 1e-12);
            let qtq = &q.transpose() * &q;
            assert!(qtq.max_abs_diff(&DenseMatrix::identity(n)) < 1e-10);
        }
    }

    #[test]
    fn factorization_cosine6_n8() {
        let p = Builtin::Cosine6.symbol();
        let f = factorize_flip_circulant(&p, 8).unwrap();
        let yc = flipped_strang(&p, 8).unwrap();
        assert!((&f.q * &f.a).max_abs_diff(&yc) <= 1e-10);
        assert!((&f.q * &f.a).max_abs_diff(&(&f.a * &f.q)) <= 1e-10);
    }

    #[test]
    fn phase_matches_sign_on_real_spectra() {
        let circ = strang_circulant(&Builtin::Cosine6.symbol(), 12).unwrap();
        let s = sign_circulant(&circ).unwrap();
        let ph = phase_circulant(&circ).unwrap();
        assert!(max_diff(s.eigenvalues(), ph.eigenvalues()) < 1e-12);
    }

    #[test]
    fn apply_inverse_examples() {
        let id = CirculantSpec::from_first_column(vec![1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let x = vec![1.0, -2.0, 0.5, 3.0, 4.0];
        let y = id.apply_inverse(&x).unwrap();
        assert!(y.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-14));

        let circ = strang_circulant(&Builtin::Bidiagonal.symbol(), 5).unwrap();
        let b = circ.materialize().matvec(&x);
        let back = circ.apply_inverse(&b).unwrap();
        assert!(back.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-10));

        let half = circ.scaled(2.0).apply_inverse(&x).unwrap();
        let full = circ.apply_inverse(&x).unwrap();
        assert!(half.iter().zip(&full).all(|(a, b)| (a - b / 2.0).abs() < 1e-12));

        // 1 + 6 cos at n = 3 has no zero eigenvalue; the zero symbol does.
        let zero = CirculantSpec::from_first_column(vec![0.0; 4]).unwrap();
        assert!(matches!(zero.apply_inverse(&[1.0; 4]), Err(Error::SingularCirculant { .. })));
    }

    #[test]
    fn apply_matches_dense() {
        let circ = strang_circulant(&Builtin::Grcar.symbol(), 9).unwrap();
        let x: Vec<f64> = (0..9).map(|k| (k as f64).cos()).collect();
        let fast = circ.apply(&x);
        let slow = circ.materialize().matvec(&x);
        assert!(fast.iter().zip(&slow).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}
