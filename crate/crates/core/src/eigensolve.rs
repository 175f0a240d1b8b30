//! Dense symmetric eigenvalues, singular values and inertia.
//!
//! Eigenvalues come from Householder reduction to tridiagonal form followed by
//! the implicit QL iteration with Wilkinson-style shifts. Eigenvectors are not
//! accumulated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Maximum QL sweeps spent on a single eigenvalue.
pub const MAX_SWEEPS: usize = 50;

/// Multiplier in the automatic inertia tolerance `64 n eps max|value|`.
pub const AUTO_ZERO_TOL_FACTOR: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Eigenvalues,
    SingularValues,
}

/// Counts of positive, negative and (numerically) zero values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Inertia {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Inertia {
    /// `n_plus - n_minus`.
    pub fn signature(&self) -> i64 {
        self.plus as i64 - self.minus as i64
    }
}

/// Tolerance policy for classifying a value as zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ZeroTol {
    #[default]
    Auto,
    Fixed(f64),
}

impl ZeroTol {
    pub fn resolve(self, values: &[f64]) -> f64 {
        match self {
            ZeroTol::Fixed(t) => t,
            ZeroTol::Auto => {
                let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                AUTO_ZERO_TOL_FACTOR * values.len() as f64 * f64::EPSILON * max
            }
        }
    }
}

/// Sorted spectrum plus inertia counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub kind: SpectrumKind,
    /// Ascending.
    pub values: Vec<f64>,
    pub inertia: Inertia,
    pub zero_tol: f64,
}

impl SpectrumReport {
    pub fn new(kind: SpectrumKind, mut values: Vec<f64>, tol: ZeroTol) -> Self {
        values.sort_by(f64::total_cmp);
        let zero_tol = tol.resolve(&values);
        let inertia = count_inertia(&values, zero_tol);
        SpectrumReport { n: values.len(), kind, values, inertia, zero_tol }
    }

    /// Recount with a different zero tolerance.
    pub fn with_zero_tol(mut self, tol: ZeroTol) -> Self {
        self.zero_tol = tol.resolve(&self.values);
        self.inertia = count_inertia(&self.values, self.zero_tol);
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// JSON `{n, kind, values, inertia: {plus, minus, zero}, zero_tol}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum serialization")
    }

    /// One value per line.
    pub fn to_csv(&self) -> String {
        self.values.iter().map(|v| format!("{v:?}\n")).collect()
    }
}

fn count_inertia(values: &[f64], tol: f64) -> Inertia {
    let mut inertia = Inertia::default();
    for &v in values {
        if v > tol {
            inertia.plus += 1;
        } else if v < -tol {
            inertia.minus += 1;
        } else {
            inertia.zero += 1;
        }
    }
    inertia
}

/// Eigenvalue inertia of a report.
pub fn inertia(report: &SpectrumReport, tol: ZeroTol) -> Result<Inertia> {
    if report.kind != SpectrumKind::Eigenvalues {
        return Err(Error::InvalidArgument("inertia needs an eigenvalue spectrum".into()));
    }
    Ok(count_inertia(&report.values, tol.resolve(&report.values)))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eig(a: &DenseMatrix) -> Result<SpectrumReport> {
    let values = sym_eigenvalues(a)?;
    Ok(SpectrumReport::new(SpectrumKind::Eigenvalues, values, ZeroTol::Auto))
}

/// Unsorted eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", a.n_rows(), a.n_cols())));
    }
    let scale = a.max_abs();
    let asym = a.asymmetry();
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric { asym, scale });
    }
    let n = a.n_rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut work = a.entries().to_vec();
    let (mut d, mut e) = tridiagonalize(&mut work, n);
    tridiagonal_ql(&mut d, &mut e)?;
    Ok(d)
}

/// Householder reduction of the lower triangle of `a` (row-major, `n x n`) to
/// tridiagonal form. Returns the diagonal and the subdiagonal, the latter
/// stored in `e[1..]` with `e[0] = 0`.
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let at = |i: usize, j: usize| i * n + j;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[at(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[at(i, l)];
            } else {
                for k in 0..=l {
                    a[at(i, k)] /= scale;
                    h += a[at(i, k)] * a[at(i, k)];
                }
                let f = a[at(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[at(i, l)] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[at(j, k)] * a[at(i, k)];
                    }
                    for k in j + 1..=l {
                        g += a[at(k, j)] * a[at(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * a[at(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[at(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[at(j, k)] -= f * e[k] + g * a[at(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[at(i, l)];
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for (i, di) in d.iter_mut().enumerate() {
        *di = a[at(i, i)];
    }
    (d, e)
}

/// Implicit QL with shifts on a symmetric tridiagonal matrix. On return `d`
/// holds the eigenvalues (unsorted); `e` is destroyed.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence { index: l, sweeps: MAX_SWEEPS });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Singular values, ascending.
///
/// Computed from the eigenvalues `±sigma` of the symmetric embedding
/// `[[0, A], [A^T, 0]]`, which keeps absolute accuracy `O(eps ||A||)` for small
/// singular values.
pub fn singular_values(a: &DenseMatrix) -> Result<SpectrumReport> {
    let (r, c) = (a.n_rows(), a.n_cols());
    let mut embed = DenseMatrix::zeros(r + c, r + c);
    for i in 0..r {
        for j in 0..c {
            let v = a[(i, j)];
            embed[(i, r + j)] = v;
            embed[(r + j, i)] = v;
        }
    }
    let mut eig = sym_eigenvalues(&embed)?;
    eig.sort_by(f64::total_cmp);
    let k = r.min(c);
    let values: Vec<f64> = eig[eig.len() - k..].iter().map(|v| v.abs()).collect();
    Ok(SpectrumReport::new(SpectrumKind::SingularValues, values, ZeroTol::Auto))
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(a: &DenseMatrix, rel_tol: f64) -> Result<usize> {
    let sv = singular_values(a)?;
    let cutoff = rel_tol * sv.max_abs();
    Ok(sv.values.iter().filter(|&&s| s > cutoff).count())
}

/// Largest singular value.
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(a)?.max_abs())
}
