//! One function per subcommand. Each returns the rendered output in the
//! requested format; sizes are processed in the order given.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tsl_core::spectral::DEFAULT_SV_GRID;
use tsl_core::symbol::default_quad_points;
use tsl_core::{
    acs_split_check, cluster_measure, distribution_check, inertia_asymptotics, preconditioned_spectrum,
    singular_values, solve_flipped_system, sparsely_vanishing_estimate, sym_eig, DistributionOptions, MatrixFamily,
    MinresOptions, SpectrumMode, SpectrumReport, Symbol,
};

use crate::{sizes_or, Cli, CliError, Format, Rendered};

const CLUSTER_CENTERS: [f64; 2] = [-1.0, 1.0];
const CLUSTER_RADIUS: f64 = 0.1;
const SV_THRESHOLDS: [f64; 3] = [10.0, 100.0, 1000.0];

fn family(cli: &Cli, default: MatrixFamily) -> Result<MatrixFamily, CliError> {
    cli.family.as_deref().map_or(Ok(default), |s| s.parse().map_err(CliError::from))
}

fn mode(cli: &Cli, default: SpectrumMode) -> Result<SpectrumMode, CliError> {
    cli.mode.as_deref().map_or(Ok(default), |s| s.parse().map_err(CliError::from))
}

fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json rendering");
    s.push('\n');
    s
}

pub fn spectrum(cli: &Cli, f: &Symbol) -> Result<Rendered, CliError> {
    let family = family(cli, MatrixFamily::FlippedToeplitz)?;
    let mode = mode(cli, SpectrumMode::Eigen)?;
    let sizes = sizes_or(cli, &[100, 200])?;
    if mode == SpectrumMode::Eigen && !family.is_symmetric_for(f) {
        return Err(CliError::Config(format!(
            "eigen mode needs a symmetric family; {} of {} is not symmetric",
            family.name(),
            f.display_name()
        )));
    }
    let reports = sizes
        .iter()
        .map(|&n| {
            let m = family.build(f, n)?;
            match mode {
                SpectrumMode::Eigen => sym_eig(&m),
                SpectrumMode::Singular => singular_values(&m),
            }
        })
        .collect::<tsl_core::Result<Vec<SpectrumReport>>>()?;
    Ok(match cli.format {
        Format::Json => Rendered::Single(to_json(&json!({
            "symbol": f.display_name(),
            "family": family,
            "mode": mode,
            "spectra": reports,
        }))),
        Format::Csv if reports.len() == 1 => Rendered::Single(reports[0].to_csv()),
        Format::Csv => Rendered::PerSize(reports.iter().map(|r| (r.n, r.to_csv())).collect()),
    })
}

pub fn inertia(cli: &Cli, f: &Symbol) -> Result<Rendered, CliError> {
    let sizes = sizes_or(cli, &[100, 200])?;
    let table = inertia_asymptotics(f, &sizes)?;
    Ok(Rendered::Single(match cli.format {
        Format::Json => to_json(&serde_json::to_value(&table).expect("inertia table")),
        Format::Csv => table.to_csv(),
    }))
}

pub fn distcheck(cli: &Cli, f: &Symbol) -> Result<Rendered, CliError> {
    let family = family(cli, MatrixFamily::FlippedToeplitz)?;
    let mode = mode(cli, SpectrumMode::Singular)?;
    let sizes = sizes_or(cli, &[32, 64, 128, 256])?;
    let options = DistributionOptions { quad_points: cli.grid.unwrap_or_else(default_quad_points), ..Default::default() };
    if options.quad_points == 0 {
        return Err(CliError::Config("--grid must be positive".into()));
    }
    let check = distribution_check(f, family, &sizes, mode, &options)?;
    Ok(Rendered::Single(match cli.format {
        Format::Json => {
            let aggregate: Vec<Value> = sizes
                .iter()
                .map(|&n| json!({ "n": n, "residual": check.aggregate_residual(n) }))
                .collect();
            let mut value = serde_json::to_value(&check).expect("distribution check");
            value["aggregate_residuals"] = Value::Array(aggregate);
            value["quad_points"] = json!(options.quad_points);
            to_json(&value)
        }
        Format::Csv => check.to_csv(),
    }))
}

pub fn acs(cli: &Cli, f: &Symbol) -> Result<Rendered, CliError> {
    let sizes = sizes_or(cli, &[16, 32, 64])?;
    let splits = sizes.iter().map(|&n| acs_split_check(f, n)).collect::<tsl_core::Result<Vec<_>>>()?;
    Ok(Rendered::Single(match cli.format {
        Format::Json => {
            let sv = sparsely_vanishing_estimate(f, &SV_THRESHOLDS, cli.grid.unwrap_or(DEFAULT_SV_GRID))?;
            to_json(&json!({ "symbol": f.display_name(), "splits": splits, "sparsely_vanishing": sv }))
        }
        Format::Csv => {
            let mut out =
                String::from("n,m,rank,flipped_rank,rank_bound,norm_term_norm,c_m,omega_m,reconstruction_exact\n");
            for s in &splits {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{:?},{:?},{:?},{}",
                    s.n,
                    s.m,
                    s.rank_term_rank,
                    s.flipped_rank_term_rank,
                    s.rank_bound,
                    s.norm_term_norm,
                    s.c_m,
                    s.omega_m,
                    s.reconstruction_exact
                );
            }
            out
        }
    }))
}

pub fn precond(cli: &Cli, f: &Symbol) -> Result<Rendered, CliError> {
    let sizes = sizes_or(cli, &[32, 64, 128])?;
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let report = preconditioned_spectrum(f, n)?;
        let outside = cluster_measure(&report.values, &CLUSTER_CENTERS, CLUSTER_RADIUS)?;
        rows.push((report, outside));
    }
    Ok(Rendered::Single(match cli.format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(r, outside)| json!({ "n": r.n, "outside_fraction": outside, "spectrum": r }))
                .collect();
            to_json(&json!({
                "symbol": f.display_name(),
                "centers": CLUSTER_CENTERS,
                "radius": CLUSTER_RADIUS,
                "results": items,
            }))
        }
        Format::Csv => {
            let mut out = String::from("n,outside_fraction,min_value,max_value\n");
            for (r, outside) in &rows {
                let (min, max) = (r.values.first().copied().unwrap_or(0.0), r.values.last().copied().unwrap_or(0.0));
                let _ = writeln!(out, "{},{:?},{:?},{:?}", r.n, outside, min, max);
            }
            out
        }
    }))
}

/// Uniform `[-1, 1)` right-hand side from the seed.
pub fn random_rhs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn solve(cli: &Cli, f: &Symbol) -> Result<Rendered, CliError> {
    let sizes = sizes_or(cli, &[64, 256])?;
    if !(cli.rtol > 0.0 && cli.rtol < 1.0) {
        return Err(CliError::Config(format!("--rtol must lie in (0, 1), got {}", cli.rtol)));
    }
    let options = MinresOptions { rtol: cli.rtol, maxit: cli.maxit, seed: cli.seed, ..Default::default() };
    let mut reports = Vec::with_capacity(2 * sizes.len());
    for &n in &sizes {
        let b = random_rhs(n, cli.seed);
        for precondition in [false, true] {
            reports.push(solve_flipped_system(f, &b, precondition, &options)?.report);
        }
    }
    Ok(Rendered::Single(match cli.format {
        Format::Json => to_json(&json!({
            "symbol": f.display_name(),
            "rtol": cli.rtol,
            "seed": cli.seed,
            "reports": reports,
        })),
        Format::Csv => {
            let mut out = String::from(
                "n,preconditioner,iterations,converged,breakdown,final_residual,true_relative_residual\n",
            );
            for r in &reports {
                let last = r.residual_history.last().copied().unwrap_or(1.0);
                let pre = serde_json::to_value(r.preconditioner).expect("preconditioner name");
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{:?},{:?}",
                    r.n,
                    pre.as_str().unwrap_or_default(),
                    r.iterations,
                    r.converged,
                    r.breakdown,
                    last,
                    r.true_relative_residual
                );
            }
            out
        }
    }))
}
