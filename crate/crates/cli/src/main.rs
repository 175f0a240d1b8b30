//! `tsl`: reproducible experiments on flipped Toeplitz matrices.

mod commands;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tsl_core::{builtin_symbol, Builtin, Symbol};

/// Exit status for failures inside a computation.
const EXIT_COMPUTE: u8 = 1;
/// Exit status for bad flags, symbols or paths.
const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "tsl", version, about = "Spectra of flipped Toeplitz matrices", propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Builtin symbol name (bidiagonal, grcar, fourth_diff, cosine6) or a path to a symbol file.
    #[arg(long, global = true, conflicts_with = "symbol_file")]
    pub symbol: Option<String>,

    /// Symbol file with one `k=value` (or `k=re,im`) line per coefficient.
    #[arg(long, global = true)]
    pub symbol_file: Option<PathBuf>,

    /// Comma-separated matrix sizes.
    #[arg(long, global = true, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,

    /// `eigen` or `singular`.
    #[arg(long, global = true)]
    pub mode: Option<String>,

    /// toeplitz, flipped_toeplitz, strang_circ (alias circulant), flip_circ or hankel_plus.
    #[arg(long, global = true)]
    pub family: Option<String>,

    /// MINRES relative tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub rtol: f64,

    /// MINRES iteration cap (default 4n).
    #[arg(long, global = true)]
    pub maxit: Option<usize>,

    /// Grid size for symbol quadrature and sampling.
    #[arg(long, global = true)]
    pub grid: Option<usize>,

    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Seed for randomised right-hand sides and symmetry probes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Sorted eigenvalues or singular values of one matrix family per size.
    Spectrum,
    /// Inertia of Y_n T_n[f] per size.
    Inertia,
    /// Empirical versus limiting spectral distribution.
    Distcheck,
    /// Circulant plus low-rank split certificates.
    Acs,
    /// Spectrum of the |C_n|-preconditioned flipped matrix and its clustering at +-1.
    Precond,
    /// MINRES on Y_n T_n[f] x = Y_n b with and without the |C_n| preconditioner.
    Solve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Failure classes mapped to exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] tsl_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Compute(e) if is_config_error(e) => EXIT_CONFIG,
            CliError::Compute(_) => EXIT_COMPUTE,
        }
    }
}

/// Core errors that reflect a bad request rather than a failed computation.
fn is_config_error(e: &tsl_core::Error) -> bool {
    use tsl_core::Error as E;
    matches!(
        e,
        E::UnknownSymbol(_)
            | E::SymbolParse { .. }
            | E::ComplexCoefficient { .. }
            | E::CirculantTooSmall { .. }
            | E::InvalidArgument(_)
    )
}

/// Rendered output: one document, or one document per size when written to files.
pub enum Rendered {
    Single(String),
    PerSize(Vec<(usize, String)>),
}

fn resolve_symbol(cli: &Cli) -> Result<Symbol, CliError> {
    if let Some(path) = &cli.symbol_file {
        return read_symbol_file(path);
    }
    let Some(name) = &cli.symbol else {
        return Err(CliError::Config("missing --symbol or --symbol-file".into()));
    };
    if name.parse::<Builtin>().is_err() && Path::new(name).is_file() {
        return read_symbol_file(Path::new(name));
    }
    Ok(builtin_symbol(name)?)
}

fn read_symbol_file(path: &Path) -> Result<Symbol, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read symbol file {}: {e}", path.display())))?;
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let f = Symbol::parse(&text)?;
    Ok(if f.label().is_some() { f } else { f.with_label(label) })
}

fn sizes_or(cli: &Cli, default: &[usize]) -> Result<Vec<usize>, CliError> {
    let sizes = cli.sizes.clone().unwrap_or_else(|| default.to_vec());
    if sizes.is_empty() {
        return Err(CliError::Config("--sizes is empty".into()));
    }
    if sizes.contains(&0) {
        return Err(CliError::Config("sizes must be positive".into()));
    }
    Ok(sizes)
}

/// `out.csv` with size 100 becomes `out.n100.csv`.
fn per_size_path(base: &Path, n: usize) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.n{n}.{}", ext.to_string_lossy()),
        None => format!("{stem}.n{n}"),
    };
    base.with_file_name(name)
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn emit(cli: &Cli, rendered: Rendered) -> Result<(), CliError> {
    match (&cli.output, rendered) {
        (Some(path), Rendered::Single(body)) => write_file(path, &body),
        (Some(path), Rendered::PerSize(parts)) => {
            parts.iter().try_for_each(|(n, body)| write_file(&per_size_path(path, *n), body))
        }
        (None, Rendered::Single(body)) => print_stdout(&body),
        (None, Rendered::PerSize(parts)) => {
            let joined: Vec<&str> = parts.iter().map(|(_, b)| b.as_str()).collect();
            print_stdout(&joined.join("\n"))
        }
    }
}

fn print_stdout(body: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(body.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let f = resolve_symbol(cli)?;
    let rendered = match cli.command {
        Command::Spectrum => commands::spectrum(cli, &f)?,
        Command::Inertia => commands::inertia(cli, &f)?,
        Command::Distcheck => commands::distcheck(cli, &f)?,
        Command::Acs => commands::acs(cli, &f)?,
        Command::Precond => commands::precond(cli, &f)?,
        Command::Solve => commands::solve(cli, &f)?,
    };
    emit(cli, rendered)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tsl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
