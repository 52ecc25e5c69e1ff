//! Command-line front end: `point`, `sweep` and `validate`.

pub mod config;
pub mod record;
pub mod validate;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::channel::NakagamiParams;
use crate::error::{Error, Result};
use crate::linkmodel::{Scheme, SystemConfig};
use crate::montecarlo::{McConfig, McMode};

pub use config::{db_to_linear, parse_db_grid, SweepPoint, SweepSpec};
pub use record::{evaluate, Record, HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ris-ssk", version, about = "Error analysis of RIS-assisted SSK and SSK-RPM links")]
pub struct Cli {
    /// Base seed for Monte-Carlo streams.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte-Carlo trials per point; 0 disables simulation.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Simulated model.
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<McMode>,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a single configuration.
    Point(PointArgs),
    /// Run a parameter sweep described by a config file and emit CSV.
    Sweep {
        config: PathBuf,
        /// Output file; overrides the `output` key. Defaults to stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the self-check suite.
    Validate {
        /// Reduced sizes.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// `ssk`, `rpm4`, `rpm8`, ... or `rpm` together with --order.
    #[arg(long)]
    pub scheme: String,
    /// RPM constellation size.
    #[arg(long)]
    pub order: Option<u32>,
    /// RIS elements.
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    /// Receive branches.
    #[arg(long)]
    pub nr: usize,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub p: f64,
    /// Aggregate impairment level.
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
    /// Average SNR in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: f64,
    /// Pin the RPM phase (radians) instead of averaging over symbols.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<f64>,
}

fn parse_mode(s: &str) -> std::result::Result<McMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn scheme_from(name: &str, order: Option<u32>) -> Result<Scheme> {
    match (name.trim().to_ascii_lowercase().as_str(), order) {
        ("rpm", Some(o)) => Scheme::rpm(o),
        ("rpm", None) => Err(Error::InvalidConfig("scheme 'rpm' needs --order".into())),
        (other, None) => other.parse(),
        (other, Some(o)) => match other.parse()? {
            Scheme::Rpm { order } if order == o => Ok(Scheme::Rpm { order }),
            s => Err(Error::InvalidConfig(format!("--order {o} conflicts with scheme {s}"))),
        },
    }
}

fn mc_config(trials: u64, seed: u64, mode: McMode, workers: usize) -> Result<Option<McConfig>> {
    if trials == 0 {
        return Ok(None);
    }
    Ok(Some(McConfig::new(trials, seed, mode)?.with_workers(workers)))
}

/// Distinct, reproducible seed per sweep row.
pub fn row_seed(base: u64, row: u64) -> u64 {
    base.wrapping_add(row.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn cmd_point(cli: &Cli, args: &PointArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    let scheme = scheme_from(&args.scheme, args.order)?;
    if !args.snr_db.is_finite() {
        return Err(Error::InvalidConfig("--snr-db must be finite".into()));
    }
    let channel = NakagamiParams::new(args.m, args.omega, args.p)?;
    let cfg = SystemConfig::new(args.n, args.nr, db_to_linear(args.snr_db), args.k, scheme, channel)?;
    let mc = mc_config(
        cli.trials.unwrap_or(0),
        cli.seed.unwrap_or(0),
        cli.mode.unwrap_or(McMode::Exact),
        cli.workers,
    )?;
    let rec = evaluate(&cfg, args.snr_db, mc.as_ref(), args.psi)?;
    writeln!(out, "{HEADER}")?;
    writeln!(out, "{}", rec.to_csv())?;

    writeln!(log, "{} N={} N_R={} m={} k={} at {} dB", scheme, cfg.n_elements(), cfg.n_branches(), args.m, args.k, args.snr_db)?;
    writeln!(log, "  PED (closed form)   {:.6e}", rec.ped_analytic)?;
    writeln!(log, "  PED high-SNR floor  {:.6e}", rec.ped_high_snr)?;
    writeln!(log, "  PED low-SNR approx  {:.6e}", rec.ped_low_snr)?;
    writeln!(log, "  PED zero SNR        {:.6e}", rec.ped_zero_snr)?;
    if let (Some(b), Some(v)) = (rec.ber_bound, rec.vacuous) {
        writeln!(log, "  BER union bound     {:.6e}{}", b, if v { " (vacuous)" } else { "" })?;
    }
    if let Some(e) = rec.mc {
        writeln!(
            log,
            "  PED {} MC        {:.6e} ± {:.2e}, {:.1}% CI [{:.6e}, {:.6e}], {} trials",
            e.mode,
            e.p_hat,
            e.stderr,
            100.0 * e.confidence_level,
            e.ci_low,
            e.ci_high,
            e.trials
        )?;
    }
    Ok(())
}

/// Writes the full sweep CSV to `out`.
pub fn write_sweep(spec: &SweepSpec, cli: &Cli, out: &mut dyn Write) -> Result<usize> {
    let trials = cli.trials.unwrap_or(spec.trials);
    let seed = cli.seed.unwrap_or(spec.seed);
    let mode = cli.mode.unwrap_or(spec.mode);
    writeln!(out, "{HEADER}")?;
    let mut rows = 0;
    for (i, point) in spec.points().enumerate() {
        let point = point?;
        let mc = mc_config(trials, row_seed(seed, i as u64), mode, cli.workers)?;
        let rec = evaluate(&point.config, point.gamma_db, mc.as_ref(), spec.psi)?;
        writeln!(out, "{}", rec.to_csv())?;
        rows += 1;
    }
    out.flush()?;
    Ok(rows)
}

/// Runs a sweep into `path`, deleting the file if anything fails.
pub fn sweep_to_file(spec: &SweepSpec, cli: &Cli, path: &Path) -> Result<usize> {
    let result = File::create(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        .and_then(|f| write_sweep(spec, cli, &mut BufWriter::new(f)));
    if result.is_err() {
        let _ = std::fs::remove_file(path);
    }
    result
}

pub fn cmd_sweep(cli: &Cli, config_path: &Path, output: Option<&Path>, out: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    let spec = SweepSpec::from_file(config_path)?;
    let target = output.map(Path::to_path_buf).or_else(|| {
        spec.output.as_ref().map(|p| match config_path.parent() {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.clone(),
        })
    });
    match target {
        Some(path) => {
            let rows = sweep_to_file(&spec, cli, &path)?;
            writeln!(log, "wrote {rows} rows to {}", path.display())?;
        }
        None => {
            write_sweep(&spec, cli, out)?;
        }
    }
    Ok(())
}

/// Returns `true` when every check passed.
pub fn cmd_validate(quick: bool, out: &mut dyn Write) -> Result<bool> {
    let outcomes = validate::run(quick)?;
    let mut all = true;
    for o in &outcomes {
        all &= o.passed;
        writeln!(out, "[{}] {:<36} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail)?;
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    writeln!(out, "{passed}/{} checks passed", outcomes.len())?;
    Ok(all)
}

/// Parses `args` and runs the selected command, returning the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, log: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(log, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Point(args) => cmd_point(&cli, args, out, log).map(|_| true),
        Command::Sweep { config, output } => cmd_sweep(&cli, config, output.as_deref(), out, log).map(|_| true),
        Command::Validate { quick } => cmd_validate(*quick, out),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(Error::Io(msg)) => {
            let _ = writeln!(log, "error: {msg}");
            EXIT_CHECK_FAILED
        }
        Err(e) => {
            let _ = writeln!(log, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
