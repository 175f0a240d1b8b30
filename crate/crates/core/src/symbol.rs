//! Generating functions represented by finitely many Fourier coefficients.
//!
//! A [`Symbol`] stores `a_k` for a finite set of integer indices and evaluates
//! `f(theta) = sum_k a_k e^{i k theta}`. The Toeplitz convention used across the
//! crate is `(T)_{j,k} = a_{j-k}`, so `a_1` sits on the first subdiagonal.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of quadrature points for symbol integrals.
pub const DEFAULT_QUAD_POINTS: usize = 1 << 14;

/// Environment variable overriding [`DEFAULT_QUAD_POINTS`].
pub const QUAD_POINTS_ENV: &str = "TSL_QUAD_POINTS";

/// Quadrature point count, honouring `TSL_QUAD_POINTS` when it parses to a positive integer.
pub fn default_quad_points() -> usize {
    std::env::var(QUAD_POINTS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_QUAD_POINTS)
}

/// The four generating functions used in the numerical experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// `2 + e^{i theta}`: 2 on the diagonal, 1 on the subdiagonal.
    Bidiagonal,
    /// The Grcar matrix: -1 on the subdiagonal, 1 on the diagonal and three superdiagonals.
    Grcar,
    /// `e^{-3i theta} - 4e^{-2i theta} + 6e^{-i theta} - 4 + e^{i theta}`.
    FourthDiff,
    /// `1 + 6 cos theta`.
    Cosine6,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Bidiagonal,
        Builtin::Grcar,
        Builtin::FourthDiff,
        Builtin::Cosine6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Bidiagonal => "bidiagonal",
            Builtin::Grcar => "grcar",
            Builtin::FourthDiff => "fourth_diff",
            Builtin::Cosine6 => "cosine6",
        }
    }

    fn coefficients(self) -> &'static [(i64, f64)] {
        match self {
            Builtin::Bidiagonal => &[(0, 2.0), (1, 1.0)],
            Builtin::Grcar => &[(1, -1.0), (0, 1.0), (-1, 1.0), (-2, 1.0), (-3, 1.0)],
            Builtin::FourthDiff => &[(1, 1.0), (0, -4.0), (-1, 6.0), (-2, -4.0), (-3, 1.0)],
            Builtin::Cosine6 => &[(-1, 3.0), (0, 1.0), (1, 3.0)],
        }
    }

    pub fn symbol(self) -> Symbol {
        Symbol::from_real(self.coefficients().iter().copied()).with_label(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "bidiagonal" => Ok(Builtin::Bidiagonal),
            "grcar" => Ok(Builtin::Grcar),
            "fourth_diff" | "fourthdiff" => Ok(Builtin::FourthDiff),
            "cosine6" => Ok(Builtin::Cosine6),
            _ => Err(Error::UnknownSymbol(s.to_string())),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Look up a builtin symbol by name.
pub fn builtin_symbol(name: &str) -> Result<Symbol> {
    Ok(name.parse::<Builtin>()?.symbol())
}

/// A trigonometric polynomial given by its Fourier coefficients.
///
/// Exact zeros are never stored, so the support is the set of keys.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Symbol {
    coeffs: BTreeMap<i64, Complex64>,
    label: Option<String>,
}

impl Symbol {
    /// Build from complex coefficients. Panics on non-finite values.
    pub fn new<I: IntoIterator<Item = (i64, Complex64)>>(coeffs: I) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in coeffs {
            assert!(v.re.is_finite() && v.im.is_finite(), "non-finite coefficient a_{k}");
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        map.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        Symbol { coeffs: map, label: None }
    }

    pub fn from_real<I: IntoIterator<Item = (i64, f64)>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(|(k, v)| (k, Complex64::new(v, 0.0))))
    }

    /// The identically zero symbol.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Label for reports; falls back to the coefficient listing.
    pub fn display_name(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.to_string())
    }

    /// Coefficient `a_k` (zero outside the support).
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    /// Real part of `a_k`; callers that need real data check [`Symbol::ensure_real`] first.
    #[inline]
    pub fn real_coeff(&self, k: i64) -> f64 {
        self.coeffs.get(&k).map_or(0.0, |c| c.re)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|k|` in the support (0 for the zero symbol).
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// `sum_k |a_k|`, an upper bound for `|f|`.
    pub fn abs_sum(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|c| c.im == 0.0)
    }

    pub fn ensure_real(&self) -> Result<()> {
        match self.coeffs.iter().find(|(_, c)| c.im != 0.0) {
            Some((&index, c)) => Err(Error::ComplexCoefficient { index, imag: c.im }),
            None => Ok(()),
        }
    }

    /// `a_k == conj(a_{-k})` for every k, i.e. `f` is real-valued.
    pub fn is_real_valued(&self) -> bool {
        self.coeffs.iter().all(|(&k, &v)| self.coeff(-k) == v.conj())
    }

    /// `f(theta) = sum_k a_k e^{i k theta}`.
    pub fn evaluate(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&k, &a)| a * Complex64::from_polar(1.0, k as f64 * theta))
            .sum()
    }

    /// `g(theta) = f(theta) e^{i s theta}`, i.e. `g_k = a_{k-s}`.
    pub fn shift(&self, s: i64) -> Symbol {
        Symbol {
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k + s, v)).collect(),
            label: self.label.as_ref().map(|l| format!("{l}*e^({s}i)")),
        }
    }

    /// `a_k -> a_{-k}`, i.e. `g(theta) = f(-theta)`.
    pub fn reversed(&self) -> Symbol {
        Symbol {
            coeffs: self.coeffs.iter().map(|(&k, &v)| (-k, v)).collect(),
            label: self.label.as_ref().map(|l| format!("{l}(-theta)")),
        }
    }

    /// Multiply every coefficient by a real factor.
    pub fn scaled(&self, factor: f64) -> Symbol {
        Symbol::new(self.coeffs.iter().map(|(&k, &v)| (k, v * factor)))
    }

    pub fn sample(&self, n_points: usize) -> GridSamples {
        GridSamples::new(self, n_points)
    }

    /// Approximate `(1/2pi) int F(|f|)` (`Abs`) or `(1/2pi) int F(f)` (`Raw`) by the
    /// uniform-grid trapezoid rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, test: F, mode: IntegrationMode, n_points: usize) -> Result<f64> {
        Ok(self.integrate_many(&[test], mode, n_points)?[0])
    }

    /// [`Symbol::integrate`] for several test functions over one set of samples.
    pub fn integrate_many<F: Fn(f64) -> f64>(&self, tests: &[F], mode: IntegrationMode, n_points: usize) -> Result<Vec<f64>> {
        if n_points == 0 {
            return Err(Error::InvalidArgument("quadrature needs at least one point".into()));
        }
        let samples = self.sample(n_points);
        let points: Vec<f64> = match mode {
            IntegrationMode::Abs => samples.values.iter().map(|v| v.norm()).collect(),
            IntegrationMode::Raw => {
                let tol = 1e-12 * self.abs_sum();
                let max_imag = samples.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
                if max_imag > tol {
                    return Err(Error::ComplexSamples { max_imag });
                }
                samples.values.iter().map(|v| v.re).collect()
            }
        };
        Ok(tests
            .iter()
            .map(|test| points.iter().map(|&x| test(x)).sum::<f64>() / n_points as f64)
            .collect())
    }

    /// Parse the `k=value` text format. A value is a real number or `re,im`.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Symbol> {
        let mut coeffs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::SymbolParse { line: idx + 1, msg: msg.to_string() };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected `k=value`"))?;
            let k: i64 = k.trim().parse().map_err(|_| err("index is not an integer"))?;
            let value = match v.split_once(',') {
                Some((re, im)) => Complex64::new(parse_real(re).ok_or_else(|| err("bad real part"))?, parse_real(im).ok_or_else(|| err("bad imaginary part"))?),
                None => Complex64::new(parse_real(v).ok_or_else(|| err("bad value"))?, 0.0),
            };
            coeffs.push((k, value));
        }
        Ok(Symbol::new(coeffs))
    }

    /// Inverse of [`Symbol::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.coeffs() {
            if v.im == 0.0 {
                out.push_str(&format!("{k}={}\n", v.re));
            } else {
                out.push_str(&format!("{k}={},{}\n", v.re, v.im));
            }
        }
        out
    }
}

fn parse_real(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs()
            .map(|(k, v)| if v.im == 0.0 { format!("{k}:{}", v.re) } else { format!("{k}:{}{:+}i", v.re, v.im) })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// How the symbol enters a test-function integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMode {
    /// `F(|f(theta)|)`: singular-value distributions.
    Abs,
    /// `F(f(theta))` for real-valued `f`: eigenvalue distributions.
    Raw,
}

/// Samples of a symbol on the uniform grid `theta_j = -pi + 2 pi j / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    pub thetas: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl GridSamples {
    /// Direct summation over the finite support. Panics when `n_points == 0`.
    pub fn new(f: &Symbol, n_points: usize) -> Self {
        assert!(n_points > 0, "grid needs at least one point");
        let thetas: Vec<f64> = (0..n_points).map(|j| grid_theta(j, n_points)).collect();
        let values = thetas.iter().map(|&t| f.evaluate(t)).collect();
        GridSamples { thetas, values }
    }

    pub fn n_points(&self) -> usize {
        self.thetas.len()
    }
}

#[inline]
pub fn grid_theta(j: usize, n_points: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / n_points as f64
}

/// Compactly supported continuous test functions for distribution checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// Piecewise linear: 0 at `left`, 1 at `peak`, 0 at `right`.
    Hat { left: f64, peak: f64, right: f64 },
    /// `x` on `[-radius, radius]`, ramping linearly to 0 at `±(radius + 1)`.
    Linear { radius: f64 },
    /// `x^2` with the same taper as [`TestFunction::Linear`].
    Square { radius: f64 },
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            TestFunction::Hat { left, peak, right } => {
                if x <= left || x >= right {
                    0.0
                } else if x <= peak {
                    (x - left) / (peak - left)
                } else {
                    (right - x) / (right - peak)
                }
            }
            TestFunction::Linear { radius } => x * taper(x, radius),
            TestFunction::Square { radius } => x * x * taper(x, radius),
        }
    }

    pub fn id(&self) -> String {
        match *self {
            TestFunction::Hat { peak, .. } => format!("hat@{peak:.6}"),
            TestFunction::Linear { .. } => "x".to_string(),
            TestFunction::Square { .. } => "x^2".to_string(),
        }
    }
}

fn taper(x: f64, radius: f64) -> f64 {
    let a = x.abs();
    if a <= radius {
        1.0
    } else if a >= radius + 1.0 {
        0.0
    } else {
        radius + 1.0 - a
    }
}

/// `n_hats` hat functions on the uniform partition of `[-radius, radius]`.
///
/// Nodes are `x_i = -radius + 2 radius i / (n_hats + 1)`; hat `i` peaks at `x_i`
/// and is supported on `[x_{i-1}, x_{i+1}]`.
pub fn hat_dictionary(radius: f64, n_hats: usize) -> Vec<TestFunction> {
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let h = 2.0 * radius / (n_hats + 1) as f64;
    (1..=n_hats)
        .map(|i| {
            let peak = -radius + h * i as f64;
            TestFunction::Hat { left: peak - h, peak, right: peak + h }
        })
        .collect()
}

/// Hats over `[-R, R]` with `R = sum |a_k|`, plus the tapered `x` and `x^2`.
pub fn test_dictionary(f: &Symbol, n_hats: usize) -> Vec<TestFunction> {
    let radius = f.abs_sum();
    let mut dict = hat_dictionary(radius, n_hats);
    dict.push(TestFunction::Linear { radius });
    dict.push(TestFunction::Square { radius });
    dict
}
