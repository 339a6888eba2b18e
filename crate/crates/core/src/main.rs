use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use witness_sim::cli_io::{
    apply_entries, efficiency_csv, load_config, parse_grid, result_csv, sweep_csv, to_json,
    RunManifest,
};
use witness_sim::protocol::{
    default_q_grid, run_witness_experiment, sweep_gamma, sweep_q, SweepResult,
};
use witness_sim::{ConfigError, ExperimentConfig, Scheme, WitnessResult};

const EXIT_CONFIG: u8 = 1;
const EXIT_DEGENERATE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "witness-sim",
    version,
    about = "Threshold-detection model of an entanglement-witness experiment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one witness experiment and emit its result record.
    Run(Common),
    /// Sweep the singlet weight q.
    SweepQ(SweepArgs),
    /// Sweep the detection threshold, given as gamma/sigma.
    SweepGamma(SweepArgs),
    /// Tabulate true and measured detector efficiencies against gamma/sigma.
    Efficiency(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Config file (`key = value` lines or a JSON object); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<String>,
    /// discrete | gaussian
    #[arg(long)]
    model: Option<String>,
    /// local | joint
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    gamma_over_sigma: Option<String>,
    /// Realizations per batch (accepts `2^20`).
    #[arg(long)]
    n: Option<String>,
    /// Master seed; the WITNESS_SEED environment variable takes precedence.
    #[arg(long)]
    seed: Option<String>,
    /// per-basis | per-count
    #[arg(long)]
    batch_policy: Option<String>,
    /// Worker threads, 0 for all cores. Does not affect results.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Output file; stdout when absent. The manifest goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Comma list (`0,0.2,1/3`) or inclusive range `start:stop:step`.
    #[arg(long)]
    grid: Option<String>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let base = match &self.config {
            Some(path) => load_config(path)?,
            None => ExperimentConfig::default(),
        };
        let mut entries = BTreeMap::new();
        let flags = [
            ("q", &self.q),
            ("model", &self.model),
            ("scheme", &self.scheme),
            ("gamma_over_sigma", &self.gamma_over_sigma),
            ("n", &self.n),
            ("seed", &self.seed),
            ("batch_policy", &self.batch_policy),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                entries.insert(key.to_string(), v.clone());
            }
        }
        if let Ok(seed) = std::env::var("WITNESS_SEED") {
            entries.insert("seed".to_string(), seed);
        }
        apply_entries(base, &entries)
    }
}

fn write_output(
    out: Option<&Path>,
    payload: &str,
    manifest: &RunManifest,
) -> Result<(), ConfigError> {
    let io_err =
        |p: &Path, e: std::io::Error| ConfigError::Io(format!("cannot write {}: {e}", p.display()));
    match out {
        Some(path) => {
            fs::write(path, payload).map_err(|e| io_err(path, e))?;
            let mut manifest_path = path.as_os_str().to_owned();
            manifest_path.push(".manifest.json");
            let manifest_path = PathBuf::from(manifest_path);
            fs::write(&manifest_path, to_json(manifest)).map_err(|e| io_err(&manifest_path, e))?;
        }
        None => {
            print!("{payload}");
            eprint!("{}", to_json(manifest));
        }
    }
    Ok(())
}

fn sweep_results(sweep: &SweepResult) -> Vec<&WitnessResult> {
    sweep.rows.iter().map(|r| &r.result).collect()
}

fn execute(command: &Command) -> Result<bool, ConfigError> {
    let started = Instant::now();
    let (common, name) = match command {
        Command::Run(c) => (c, "run"),
        Command::SweepQ(s) => (&s.common, "sweep-q"),
        Command::SweepGamma(s) => (&s.common, "sweep-gamma"),
        Command::Efficiency(s) => (&s.common, "efficiency"),
    };
    let config = common.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads)
        .build()
        .map_err(|e| ConfigError::invalid("threads", e.to_string()))?;

    let (payload, mut manifest, degenerate) = match command {
        Command::Run(_) => {
            let result = pool.install(|| run_witness_experiment(&config))?;
            let payload = match common.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&result),
                Format::Csv => result_csv(&result),
            };
            (
                payload,
                RunManifest::new(name, &config, None, &[&result]),
                result.is_degenerate(),
            )
        }
        Command::SweepQ(s) | Command::SweepGamma(s) | Command::Efficiency(s) => {
            let grid = match (&s.grid, command) {
                (Some(g), _) => parse_grid("grid", g)?,
                (None, Command::SweepQ(_)) => default_q_grid(),
                (None, Command::SweepGamma(_)) => parse_grid("grid", "0.5:1.25:0.05")?,
                (None, _) => parse_grid("grid", "0.3:1.4:0.05")?,
            };
            if matches!(command, Command::Efficiency(_)) && config.scheme != Scheme::Local {
                return Err(ConfigError::invalid(
                    "scheme",
                    "efficiencies are defined for the local scheme only",
                ));
            }
            let sweep = pool.install(|| match command {
                Command::SweepQ(_) => sweep_q(&config, &grid),
                _ => sweep_gamma(&config, &grid),
            })?;
            let payload = match (common.format.unwrap_or(Format::Csv), command) {
                (Format::Json, _) => to_json(&sweep),
                (Format::Csv, Command::Efficiency(_)) => efficiency_csv(&sweep),
                (Format::Csv, _) => sweep_csv(&sweep),
            };
            let results = sweep_results(&sweep);
            let degenerate = results.iter().any(|r| r.is_degenerate());
            (
                payload,
                RunManifest::new(name, &config, Some(grid), &results),
                degenerate,
            )
        }
    };
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    write_output(common.out.as_deref(), &payload, &manifest)?;
    Ok(degenerate)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli.command) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("warning: degenerate counts in at least one result");
            ExitCode::from(EXIT_DEGENERATE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
