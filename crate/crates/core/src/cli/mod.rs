//! Command-line driver: `bellopt run|sweep|verify|sg3`.
//!
//! Exit status is 0 on success, 1 on usage errors and 2 when a result fails
//! certification or verification.

mod record;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use record::{read_records, separability_bound, write_records, Format, Model, ParsedRecords, ResultRecord};

use crate::lhv_solver::{critical_noise_fraction, CERTIFICATE_TOL};
use crate::observable_search::{
    optimize_general, optimize_multiport, optimize_sg_spin1, AmoebaConfig, BestSettings, SearchResult,
};

/// Largest dimension accepted on the command line; the full LP has `N⁴ + 1` columns.
pub const MAX_DIM: usize = 12;
/// Stored and recomputed thresholds must agree to this accuracy.
pub const VERIFY_TOL: f64 = 1e-6;
/// Per-dimension sweep seeds are `base ^ (N · SWEEP_SEED_MIX)`, the 64-bit
/// golden-ratio increment also used by SplitMix64.
pub const SWEEP_SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("integrity: {0}")]
    Integrity(String),
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Io(_) | Self::Output(_) => 1,
            Self::Integrity(_) | Self::Core(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bellopt", version, about = "Critical noise fractions for two entangled N-level systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize settings for one dimension
    Run(RunArgs),
    /// Optimize settings for a range of dimensions
    Sweep(SweepArgs),
    /// Re-solve every record of a result file
    Verify(VerifyArgs),
    /// Stern-Gerlach measurements on two spin-1 particles
    Sg3(SearchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Random restarts of the simplex search
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output file; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Dimension of each particle
    #[arg(long, value_parser = dim_parser())]
    pub n: u64,

    #[arg(long, value_enum, default_value_t = Model::Multiport)]
    pub model: Model,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 2, value_parser = dim_parser())]
    pub n_min: u64,

    #[arg(long, default_value_t = 9, value_parser = dim_parser())]
    pub n_max: u64,

    #[arg(long, value_enum, default_value_t = Model::Multiport)]
    pub model: Model,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// CSV or JSON file written by `run`, `sweep` or `sg3`
    pub path: PathBuf,
}

fn dim_parser() -> clap::builder::RangedU64ValueParser<u64> {
    clap::value_parser!(u64).range(2..=MAX_DIM as u64)
}

/// One search, independent of how it was requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub n: usize,
    pub model: Model,
    pub restarts: usize,
    pub seed: u64,
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        if !(2..=MAX_DIM).contains(&self.n) {
            return Err(CliError::Usage(format!("N must lie in 2..={MAX_DIM}, got {}", self.n)));
        }
        if self.restarts == 0 {
            return Err(CliError::Usage("restarts must be at least 1".into()));
        }
        if self.model == Model::SternGerlach && self.n != 3 {
            return Err(CliError::Usage("Stern-Gerlach measurements need N = 3".into()));
        }
        Ok(())
    }
}

/// Seed used for dimension `n` in a sweep with base seed `base`.
pub fn sweep_seed(base: u64, n: usize) -> u64 {
    base ^ (n as u64).wrapping_mul(SWEEP_SEED_MIX)
}

fn to_record(cfg: &RunConfig, result: &SearchResult, started: Instant) -> Result<ResultRecord, CliError> {
    if result.certificate_residual >= CERTIFICATE_TOL {
        return Err(CliError::Integrity(format!(
            "certificate residual {:e} at N = {}",
            result.certificate_residual, cfg.n
        )));
    }
    let bound = separability_bound(cfg.n);
    if result.best_f >= bound {
        return Err(CliError::Integrity(format!(
            "threshold {} at N = {} reaches the separability bound {bound}",
            result.best_f, cfg.n
        )));
    }
    Ok(ResultRecord {
        n: cfg.n,
        model: cfg.model,
        f_max: result.best_f,
        separability_bound: bound,
        evaluations: result.evaluations as u64,
        lp_solves: result.lp_solves as u64,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        seed: cfg.seed,
        settings: result.best_settings.flatten(),
    })
}

/// Optimize one family at one dimension and certify the result.
pub fn cmd_run(cfg: &RunConfig) -> Result<ResultRecord, CliError> {
    cfg.validate()?;
    let started = Instant::now();
    let amoeba = AmoebaConfig {
        restarts: cfg.restarts,
        seed: cfg.seed,
        ..AmoebaConfig::default()
    };
    let result = match cfg.model {
        Model::Multiport => optimize_multiport(cfg.n, &amoeba)?,
        Model::General => optimize_general(cfg.n, &amoeba)?,
        Model::SternGerlach => optimize_sg_spin1(&amoeba)?,
    };
    to_record(cfg, &result, started)
}

/// One [`cmd_run`] per dimension in `n_min..=n_max`, seeded by [`sweep_seed`].
pub fn cmd_sweep(n_min: usize, n_max: usize, model: Model, restarts: usize, seed: u64) -> Result<Vec<ResultRecord>, CliError> {
    cmd_sweep_with(n_min, n_max, model, restarts, seed, |_| {})
}

/// [`cmd_sweep`] calling `progress` as each record completes.
pub fn cmd_sweep_with<P>(
    n_min: usize,
    n_max: usize,
    model: Model,
    restarts: usize,
    seed: u64,
    mut progress: P,
) -> Result<Vec<ResultRecord>, CliError>
where
    P: FnMut(&ResultRecord),
{
    if n_min > n_max {
        return Err(CliError::Usage(format!("empty range {n_min}..={n_max}")));
    }
    (n_min..=n_max)
        .map(|n| {
            let record = cmd_run(&RunConfig {
                n,
                model,
                restarts,
                seed: sweep_seed(seed, n),
            })?;
            progress(&record);
            Ok(record)
        })
        .collect()
}

/// Stern-Gerlach search for two spin-1 particles.
pub fn cmd_sg3(restarts: usize, seed: u64) -> Result<ResultRecord, CliError> {
    cmd_run(&RunConfig {
        n: 3,
        model: Model::SternGerlach,
        restarts,
        seed,
    })
}

/// Outcome of re-solving one stored record.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordCheck {
    /// 1-based position in the file.
    pub index: usize,
    pub stored: Option<f64>,
    pub recomputed: Option<f64>,
    /// `None` when the record passed.
    pub problem: Option<String>,
}

impl RecordCheck {
    pub fn passed(&self) -> bool {
        self.problem.is_none()
    }
}

fn settings_of(r: &ResultRecord) -> crate::Result<BestSettings> {
    match r.model {
        Model::Multiport => BestSettings::multiport_from_flat(r.n, &r.settings),
        Model::General => BestSettings::general_from_flat(r.n, &r.settings),
        Model::SternGerlach => BestSettings::stern_gerlach_from_flat(&r.settings),
    }
}

fn check_record(index: usize, record: &ResultRecord) -> RecordCheck {
    let mut check = RecordCheck {
        index,
        stored: Some(record.f_max),
        recomputed: None,
        problem: None,
    };
    if !(2..=MAX_DIM).contains(&record.n) || (record.model == Model::SternGerlach && record.n != 3) {
        check.problem = Some(format!("unsupported dimension {}", record.n));
        return check;
    }
    let bound = separability_bound(record.n);
    if record.separability_bound != bound {
        check.problem = Some(format!("separability bound {} should be {bound}", record.separability_bound));
        return check;
    }
    let solved = settings_of(record)
        .and_then(|s| s.table())
        .and_then(|t| critical_noise_fraction(&t));
    match solved {
        Err(e) => check.problem = Some(e.to_string()),
        Ok(th) => {
            check.recomputed = Some(th.f_min);
            let gap = (th.f_min - record.f_max).abs();
            if !(gap <= VERIFY_TOL) {
                check.problem = Some(format!("stored {} but recomputed {}", record.f_max, th.f_min));
            } else if !(record.f_max < bound) {
                check.problem = Some(format!("threshold {} not below {bound}", record.f_max));
            }
        }
    }
    check
}

/// Rebuild each record's table from its settings and re-solve the LP.
pub fn cmd_verify(path: &Path) -> Result<Vec<RecordCheck>, CliError> {
    let file = File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let records = read_records(file)?;
    if records.is_empty() {
        return Err(CliError::Usage(format!("{}: no records", path.display())));
    }
    Ok(records
        .iter()
        .enumerate()
        .map(|(i, r)| match r {
            Ok(record) => check_record(i + 1, record),
            Err(e) => RecordCheck {
                index: i + 1,
                stored: None,
                recomputed: None,
                problem: Some(format!("unreadable: {e}")),
            },
        })
        .collect())
}

fn emit(records: &[ResultRecord], args: &SearchArgs) -> Result<(), CliError> {
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            write_records(BufWriter::new(file), records, args.format)
        }
        None => write_records(io::stdout().lock(), records, args.format),
    }
}

fn summarize(r: &ResultRecord) {
    eprintln!(
        "N = {:2} {:13} f_max = {:.7} (separable above {:.7}), {:.1} s",
        r.n,
        r.model.as_str(),
        r.f_max,
        r.separability_bound,
        r.wall_time_seconds
    );
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(a) => {
            let record = cmd_run(&RunConfig {
                n: a.n as usize,
                model: a.model,
                restarts: a.search.restarts as usize,
                seed: a.search.seed,
            })?;
            summarize(&record);
            emit(&[record], &a.search)
        }
        Command::Sweep(a) => {
            let records = cmd_sweep_with(
                a.n_min as usize,
                a.n_max as usize,
                a.model,
                a.search.restarts as usize,
                a.search.seed,
                summarize,
            )?;
            for w in records.windows(2) {
                if w[1].f_max <= w[0].f_max {
                    eprintln!("warning: f_max does not increase from N = {} to N = {}", w[0].n, w[1].n);
                }
            }
            emit(&records, &a.search)
        }
        Command::Sg3(a) => {
            let record = cmd_sg3(a.restarts as usize, a.seed)?;
            summarize(&record);
            emit(&[record], &a)
        }
        Command::Verify(a) => {
            let checks = cmd_verify(&a.path)?;
            let mut out = io::stdout().lock();
            for c in &checks {
                let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.10}"));
                let verdict = c.problem.as_deref().unwrap_or("ok");
                writeln!(out, "record {}: stored {} recomputed {}: {verdict}", c.index, fmt(c.stored), fmt(c.recomputed))?;
            }
            let failed: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.index.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Integrity(format!("records {} failed verification", failed.join(", "))))
            }
        }
    }
}

/// Parse `args` (program name first), run the command and map the outcome
/// to an exit status.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bellopt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_seeds_differ_per_dimension() {
        let seeds: Vec<u64> = (2..=12).map(|n| sweep_seed(42, n)).collect();
        for (i, a) in seeds.iter().enumerate() {
            for b in &seeds[i + 1..] {
                assert_ne!(a, b);
            }
        }
        assert_eq!(sweep_seed(0, 1), SWEEP_SEED_MIX);
    }

    #[test]
    fn guardrails() {
        let cfg = RunConfig {
            n: 1,
            model: Model::Multiport,
            restarts: 1,
            seed: 0,
        };
        assert!(matches!(cmd_run(&cfg), Err(CliError::Usage(_))));
        assert!(matches!(cmd_run(&RunConfig { n: 13, ..cfg }), Err(CliError::Usage(_))));
        assert!(matches!(cmd_run(&RunConfig { n: 2, restarts: 0, ..cfg }), Err(CliError::Usage(_))));
        assert!(matches!(cmd_sweep(5, 4, Model::Multiport, 1, 0), Err(CliError::Usage(_))));
    }

    #[test]
    fn clap_rejects_out_of_range_dimension() {
        assert!(Cli::try_parse_from(["bellopt", "run", "--n", "1"]).is_err());
        assert!(Cli::try_parse_from(["bellopt", "run", "--n", "13"]).is_err());
        assert!(Cli::try_parse_from(["bellopt", "run", "--n", "2", "--model", "stern-gerlach"]).is_err());
        assert!(Cli::try_parse_from(["bellopt", "run", "--n", "12", "--format", "json"]).is_ok());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
        assert_eq!(CliError::Integrity(String::new()).exit_code(), 2);
    }
}
