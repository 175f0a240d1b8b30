//! Asymptotic spectral statements measured at finite sizes.
//!
//! Everything here reports numbers; pass/fail thresholds belong to the
//! callers (tests, CLI recipes).

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circulant::{flipped_strang, strang_circulant};
use crate::eigensolve::{numerical_rank, singular_values, sym_eig, Inertia};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::structured::{flip_rows, flipped_toeplitz, hankel_block, toeplitz, HankelSign};
use crate::symbol::{default_quad_points, test_dictionary, IntegrationMode, Symbol, TestFunction};

/// Matrix sequences generated from a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixFamily {
    /// `T_n[f]`
    Toeplitz,
    /// `Y_n T_n[f]`
    FlippedToeplitz,
    /// `C_n[f]`
    StrangCirc,
    /// `Y_n C_n[f]`
    FlipCirc,
    /// `H_n[f, +]`
    HankelPlus,
}

impl MatrixFamily {
    pub const ALL: [MatrixFamily; 5] = [
        MatrixFamily::Toeplitz,
        MatrixFamily::FlippedToeplitz,
        MatrixFamily::StrangCirc,
        MatrixFamily::FlipCirc,
        MatrixFamily::HankelPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixFamily::Toeplitz => "toeplitz",
            MatrixFamily::FlippedToeplitz => "flipped_toeplitz",
            MatrixFamily::StrangCirc => "strang_circ",
            MatrixFamily::FlipCirc => "flip_circ",
            MatrixFamily::HankelPlus => "hankel_plus",
        }
    }

    pub fn build(self, f: &Symbol, n: usize) -> Result<DenseMatrix> {
        match self {
            MatrixFamily::Toeplitz => toeplitz(f, n),
            MatrixFamily::FlippedToeplitz => flipped_toeplitz(f, n),
            MatrixFamily::StrangCirc => Ok(strang_circulant(f, n)?.materialize()),
            MatrixFamily::FlipCirc => flipped_strang(f, n),
            MatrixFamily::HankelPlus => hankel_block(f, n, HankelSign::Plus),
        }
    }

    /// Whether every member of the sequence is symmetric for this symbol.
    pub fn is_symmetric_for(self, f: &Symbol) -> bool {
        match self {
            MatrixFamily::FlippedToeplitz | MatrixFamily::FlipCirc | MatrixFamily::HankelPlus => true,
            MatrixFamily::Toeplitz | MatrixFamily::StrangCirc => f.is_real_valued(),
        }
    }
}

impl FromStr for MatrixFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "toeplitz" => Ok(MatrixFamily::Toeplitz),
            "flipped_toeplitz" | "flipped" | "hankel" => Ok(MatrixFamily::FlippedToeplitz),
            "strang_circ" | "circulant" | "strang" => Ok(MatrixFamily::StrangCirc),
            "flip_circ" | "flipped_circulant" => Ok(MatrixFamily::FlipCirc),
            "hankel_plus" => Ok(MatrixFamily::HankelPlus),
            other => Err(Error::InvalidArgument(format!("unknown matrix family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMode {
    Singular,
    Eigen,
}

impl FromStr for SpectrumMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "singular" | "sv" => Ok(SpectrumMode::Singular),
            "eigen" | "eig" => Ok(SpectrumMode::Eigen),
            other => Err(Error::InvalidArgument(format!("unknown spectrum mode `{other}`"))),
        }
    }
}

/// Sorted singular values or eigenvalues of one family member.
pub fn family_spectrum(f: &Symbol, family: MatrixFamily, n: usize, mode: SpectrumMode) -> Result<Vec<f64>> {
    if mode == SpectrumMode::Eigen && !family.is_symmetric_for(f) {
        return Err(Error::InvalidArgument(format!(
            "eigen mode needs symmetric matrices; {} of {} is not symmetric",
            family.name(),
            f.display_name()
        )));
    }
    let m = family.build(f, n)?;
    let report = match mode {
        SpectrumMode::Singular => singular_values(&m)?,
        SpectrumMode::Eigen => sym_eig(&m)?,
    };
    Ok(report.values)
}

/// Knobs for [`distribution_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionOptions {
    pub n_hats: usize,
    /// Also test the tapered `x` and `x^2`.
    pub include_moments: bool,
    pub quad_points: usize,
}

impl Default for DistributionOptions {
    fn default() -> Self {
        DistributionOptions { n_hats: 8, include_moments: true, quad_points: default_quad_points() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub n: usize,
    pub test_function: String,
    pub empirical: f64,
    pub analytic: f64,
    pub residual: f64,
}

/// Empirical `(1/n) sum F(value_j)` against the symbol functional, per size and test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionCheck {
    pub symbol: String,
    pub family: MatrixFamily,
    pub mode: SpectrumMode,
    pub sizes: Vec<usize>,
    pub test_functions: Vec<String>,
    pub entries: Vec<DistributionEntry>,
    /// `(n, F)` pairs whose residual grew relative to the previous size.
    pub monotone_violations: Vec<(usize, String)>,
}

impl DistributionCheck {
    /// `max_F |empirical - analytic|` at size `n`.
    pub fn aggregate_residual(&self, n: usize) -> Option<f64> {
        let mut it = self.entries.iter().filter(|e| e.n == n).peekable();
        it.peek()?;
        Some(it.fold(0.0, |m, e| m.max(e.residual)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("distribution check serialization")
    }

    /// Columns `n,F_id,empirical,analytic,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,F_id,empirical,analytic,residual\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{:?},{:?},{:?}", e.n, e.test_function, e.empirical, e.analytic, e.residual);
        }
        out
    }
}

/// Analytic values of each `F` for the limiting distribution of `family` in `mode`.
fn analytic_functionals(
    f: &Symbol,
    family: MatrixFamily,
    mode: SpectrumMode,
    tests: &[TestFunction],
    points: usize,
) -> Result<Vec<f64>> {
    let evals: Vec<_> = tests.iter().map(|t| move |x: f64| t.eval(x)).collect();
    match (family, mode) {
        (MatrixFamily::HankelPlus, _) => Ok(tests.iter().map(|t| t.eval(0.0)).collect()),
        (_, SpectrumMode::Singular) => f.integrate_many(&evals, IntegrationMode::Abs, points),
        (MatrixFamily::Toeplitz | MatrixFamily::StrangCirc, SpectrumMode::Eigen) => {
            f.integrate_many(&evals, IntegrationMode::Raw, points)
        }
        // symmetrised families: half the mass at |f|, half at -|f|
        (MatrixFamily::FlippedToeplitz | MatrixFamily::FlipCirc, SpectrumMode::Eigen) => {
            let even: Vec<_> = tests.iter().map(|t| move |x: f64| 0.5 * (t.eval(x) + t.eval(-x))).collect();
            f.integrate_many(&even, IntegrationMode::Abs, points)
        }
    }
}

pub fn distribution_check(
    f: &Symbol,
    family: MatrixFamily,
    sizes: &[usize],
    mode: SpectrumMode,
    options: &DistributionOptions,
) -> Result<DistributionCheck> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(Error::InvalidArgument("sizes must be positive and strictly increasing".into()));
    }
    if mode == SpectrumMode::Eigen && !family.is_symmetric_for(f) {
        return Err(Error::InvalidArgument(format!(
            "eigen mode needs a symmetric family; {} of {} is not",
            family.name(),
            f.display_name()
        )));
    }
    let mut dict = test_dictionary(f, options.n_hats);
    if !options.include_moments {
        dict.retain(|t| matches!(t, TestFunction::Hat { .. }));
    }
    let analytic = analytic_functionals(f, family, mode, &dict, options.quad_points)?;
    let spectra = sizes
        .par_iter()
        .map(|&n| family_spectrum(f, family, n, mode))
        .collect::<Result<Vec<_>>>()?;

    let mut entries = Vec::with_capacity(sizes.len() * dict.len());
    for (&n, values) in sizes.iter().zip(&spectra) {
        for (test, &phi) in dict.iter().zip(&analytic) {
            let empirical = values.iter().map(|&v| test.eval(v)).sum::<f64>() / n as f64;
            entries.push(DistributionEntry { n, test_function: test.id(), empirical, analytic: phi, residual: (empirical - phi).abs() });
        }
    }
    let per_size = dict.len();
    let mut monotone_violations = Vec::new();
    for s in 1..sizes.len() {
        for t in 0..per_size {
            let (prev, cur) = (&entries[(s - 1) * per_size + t], &entries[s * per_size + t]);
            if cur.residual > prev.residual {
                monotone_violations.push((cur.n, cur.test_function.clone()));
            }
        }
    }
    Ok(DistributionCheck {
        symbol: f.display_name(),
        family,
        mode,
        sizes: sizes.to_vec(),
        test_functions: dict.iter().map(TestFunction::id).collect(),
        entries,
        monotone_violations,
    })
}

/// Grid estimate of `|{theta : |f(theta)| < 1/M}| / 2 pi` for each `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparselyVanishingReport {
    pub grid: usize,
    pub fractions: Vec<(f64, f64)>,
    /// Fractions are nonincreasing in `M` and the last one is at most half the first (or zero).
    pub consistent: bool,
}

pub const DEFAULT_SV_GRID: usize = 1 << 16;

pub fn sparsely_vanishing_estimate(f: &Symbol, m_list: &[f64], grid: usize) -> Result<SparselyVanishingReport> {
    if grid < 1024 {
        return Err(Error::InvalidArgument(format!("grid must be at least 1024, got {grid}")));
    }
    if m_list.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::InvalidArgument("M values must be positive".into()));
    }
    let abs: Vec<f64> = f.sample(grid).values.iter().map(|v| v.norm()).collect();
    let fractions: Vec<(f64, f64)> = m_list
        .iter()
        .map(|&m| (m, abs.iter().filter(|&&v| v < 1.0 / m).count() as f64 / grid as f64))
        .collect();
    let mut order: Vec<usize> = (0..fractions.len()).collect();
    order.sort_by(|&a, &b| fractions[a].0.total_cmp(&fractions[b].0));
    let sorted: Vec<f64> = order.iter().map(|&i| fractions[i].1).collect();
    let consistent = match (sorted.first(), sorted.last()) {
        (Some(&first), Some(&last)) => {
            sorted.windows(2).all(|w| w[1] <= w[0]) && (last == 0.0 || last <= 0.5 * first)
        }
        _ => false,
    };
    Ok(SparselyVanishingReport { grid, fractions, consistent })
}

/// Split `T_n[p] = C_n[p] + R + N` with `N = 0` and the rank of `R` certified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcsSplit {
    pub n: usize,
    /// Approximation index; the symbol degree for a polynomial.
    pub m: usize,
    pub rank_term_rank: usize,
    pub flipped_rank_term_rank: usize,
    pub rank_bound: usize,
    pub norm_term_norm: f64,
    /// `rank_bound / n`
    pub c_m: f64,
    pub omega_m: f64,
    /// `C + R == T` entry by entry, with no rounding.
    pub reconstruction_exact: bool,
}

impl AcsSplit {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("acs serialization")
    }
}

pub fn acs_split_check(f: &Symbol, n: usize) -> Result<AcsSplit> {
    let degree = f.degree();
    let t = toeplitz(f, n)?;
    let b = strang_circulant(f, n)?.materialize();
    let r = &t - &b;
    let reconstruction_exact = &b + &r == t;
    let rel = n as f64 * f64::EPSILON;
    let rank = numerical_rank(&r, rel)?;
    let flipped_rank = numerical_rank(&flip_rows(&r), rel)?;
    let bound = 2 * degree;
    if rank > bound {
        return Err(Error::RankBound { rank, bound });
    }
    if flipped_rank > bound {
        return Err(Error::RankBound { rank: flipped_rank, bound });
    }
    Ok(AcsSplit {
        n,
        m: degree,
        rank_term_rank: rank,
        flipped_rank_term_rank: flipped_rank,
        rank_bound: bound,
        norm_term_norm: 0.0,
        c_m: bound as f64 / n as f64,
        omega_m: 0.0,
        reconstruction_exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertiaRow {
    pub n: usize,
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
    /// `|plus - minus|`
    pub diff: usize,
}

impl InertiaRow {
    pub fn signature(&self) -> i64 {
        self.plus as i64 - self.minus as i64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InertiaTable {
    pub symbol: String,
    pub rows: Vec<InertiaRow>,
    pub max_diff: usize,
}

impl InertiaTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("inertia serialization")
    }

    /// Columns `n,plus,minus,zero,diff`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,plus,minus,zero,diff\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.n, r.plus, r.minus, r.zero, r.diff);
        }
        out
    }
}

/// Inertia of `Y_n T_n[f]` for each size, in input order.
pub fn inertia_asymptotics(f: &Symbol, sizes: &[usize]) -> Result<InertiaTable> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("no sizes given".into()));
    }
    f.ensure_real()?;
    let rows = sizes
        .par_iter()
        .map(|&n| {
            let Inertia { plus, minus, zero } = sym_eig(&flipped_toeplitz(f, n)?)?.inertia;
            Ok(InertiaRow { n, plus, minus, zero, diff: plus.abs_diff(minus) })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_diff = rows.iter().map(|r| r.diff).max().unwrap_or(0);
    Ok(InertiaTable { symbol: f.display_name(), rows, max_diff })
}

/// Fraction of `values` farther than `radius` from every center.
pub fn cluster_measure(values: &[f64], centers: &[f64], radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("cluster radius must be positive".into()));
    }
    if values.is_empty() {
        return Ok(0.0);
    }
    let outside = values
        .iter()
        .filter(|&&v| centers.iter().all(|&c| (v - c).abs() > radius))
        .count();
    Ok(outside as f64 / values.len() as f64)
}

/// Default relative threshold for "clustered at zero" tests.
pub const DEFAULT_ZERO_CLUSTER_REL: f64 = 1e-3;

/// Fraction of `|values|` above `rel * max|values|`.
pub fn fraction_above(values: &[f64], rel: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    values.iter().filter(|v| v.abs() > rel * max).count() as f64 / values.len() as f64
}

/// Fraction of singular values of `H_nu[f, +]` above `rel ||H||_2`.
pub fn hankel_decay_fraction(f: &Symbol, nu: usize, rel: f64) -> Result<f64> {
    let sv = singular_values(&hankel_block(f, nu, HankelSign::Plus)?)?;
    Ok(fraction_above(&sv.values, rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Builtin;

    #[test]
    fn constant_symbol_functional_is_exact() {
        let f = Symbol::from_real([(0, 2.0)]);
        let opts = DistributionOptions { n_hats: 4, include_moments: true, quad_points: 256 };
        let check = distribution_check(&f, MatrixFamily::Toeplitz, &[5, 9], SpectrumMode::Singular, &opts).unwrap();
        let x = check.entries.iter().filter(|e| e.test_function == "x").collect::<Vec<_>>();
        assert_eq!(x.len(), 2);
        for e in x {
            assert!((e.empirical - 2.0).abs() < 1e-13);
            assert_eq!(e.analytic, 2.0);
        }
    }

    #[test]
    fn eigen_mode_rejects_nonsymmetric_family() {
        let f = Builtin::Bidiagonal.symbol();
        let opts = DistributionOptions { quad_points: 128, ..Default::default() };
        assert!(distribution_check(&f, MatrixFamily::Toeplitz, &[4], SpectrumMode::Eigen, &opts).is_err());
        assert!(distribution_check(&f, MatrixFamily::FlippedToeplitz, &[4], SpectrumMode::Eigen, &opts).is_ok());
        assert!(distribution_check(&f, MatrixFamily::FlippedToeplitz, &[8, 4], SpectrumMode::Singular, &opts).is_err());
    }

    #[test]
    fn sparsely_vanishing_examples() {
        let ms = [1.0, 10.0, 100.0, 1000.0];
        let bi = sparsely_vanishing_estimate(&Builtin::Bidiagonal.symbol(), &ms, 4096).unwrap();
        assert!(bi.fractions.iter().all(|&(_, frac)| frac == 0.0));
        assert!(bi.consistent);
        let zero = sparsely_vanishing_estimate(&Symbol::zero(), &ms, 4096).unwrap();
        assert!(zero.fractions.iter().all(|&(_, frac)| frac == 1.0));
        assert!(!zero.consistent);
        let c6 = sparsely_vanishing_estimate(&Builtin::Cosine6.symbol(), &ms, DEFAULT_SV_GRID).unwrap();
        assert!(c6.consistent);
        assert!(c6.fractions.last().unwrap().1 < 1e-3);
        assert!(sparsely_vanishing_estimate(&Builtin::Cosine6.symbol(), &ms, 512).is_err());
    }

    #[test]
    fn acs_examples() {
        let bi = acs_split_check(&Builtin::Bidiagonal.symbol(), 16).unwrap();
        assert_eq!(bi.rank_term_rank, 1);
        assert!(bi.rank_term_rank <= 2 && bi.reconstruction_exact);
        let c6 = acs_split_check(&Builtin::Cosine6.symbol(), 16).unwrap();
        assert_eq!(c6.rank_term_rank, 2);
        let fd = acs_split_check(&Builtin::FourthDiff.symbol(), 32).unwrap();
        assert!(fd.rank_term_rank <= 6);
        assert_eq!(fd.rank_term_rank, fd.flipped_rank_term_rank);
    }

    #[test]
    fn cluster_examples() {
        assert_eq!(cluster_measure(&[-1.0, -1.0, 1.0, 1.0], &[-1.0, 1.0], 0.1).unwrap(), 0.0);
        assert_eq!(cluster_measure(&[0.0], &[-1.0, 1.0], 0.5).unwrap(), 1.0);
        assert!(cluster_measure(&[0.0], &[0.0], 0.0).is_err());
    }

    #[test]
    fn inertia_table_small() {
        let t = inertia_asymptotics(&Builtin::Cosine6.symbol(), &[6]).unwrap();
        assert_eq!(t.rows[0], InertiaRow { n: 6, plus: 4, minus: 2, zero: 0, diff: 2 });
        assert!(t.to_csv().starts_with("n,plus,minus,zero,diff\n6,4,2,0,2\n"));
    }

    #[test]
    fn family_names_round_trip() {
        for fam in MatrixFamily::ALL {
            assert_eq!(fam.name().parse::<MatrixFamily>().unwrap(), fam);
        }
        assert_eq!("circulant".parse::<MatrixFamily>().unwrap(), MatrixFamily::StrangCirc);
    }
}
