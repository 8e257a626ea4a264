use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use seqmusic::analysis::{
    feasibility_grid, sigma_k_profile, write_feasibility_csv, write_sigma_k_csv,
    SigmaKProfileConfig,
};
use seqmusic::bench::{
    fourier_instance, gaussian_instance, parse_snr, preset, run_sweep_to, run_trial_set,
    AnalysisTarget, ConfigOverrides, ExperimentConfig, Family, Preset, SweepPoint, TrialRecord,
    TrialSeeds,
};
use seqmusic::dump::InstanceDump;
use seqmusic::recovery::Algorithm;

/// Sequential compressive MUSIC benchmarks.
#[derive(Parser)]
#[command(name = "seqmusic", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo success-rate sweep written as CSV.
    Sweep(SweepArgs),
    /// One verbose trial with stage diagnostics.
    Simulate(SimulateArgs),
    /// Tabulate a theory curve (fig1: sigma_k profile, fig2: feasibility grid).
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Preset name: fig3, fig4, fig5, fig6a, fig6b or fig7.
    #[arg(long)]
    preset: Option<String>,
    /// TOML file of overrides; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Record per-trial wall time (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 24)]
    m: usize,
    #[arg(long, default_value_t = 128)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    r: usize,
    #[arg(long, default_value_t = 16)]
    snapshots: usize,
    /// Decibels, or `inf` for noiseless.
    #[arg(long, default_value = "30")]
    snr_db: String,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, default_value_t = 0.0)]
    mean: f64,
    /// gaussian or fourier.
    #[arg(long, default_value = "gaussian")]
    matrix: String,
    /// Algorithm name, or `all`.
    #[arg(long, default_value = "seq_cs_music")]
    algo: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the generated instance as JSON.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// fig1 or fig2.
    #[arg(long)]
    target: String,
    #[arg(long)]
    out: PathBuf,
    /// fig1: number of random instances.
    #[arg(long)]
    instances: Option<usize>,
    /// fig1: number of measurements.
    #[arg(long)]
    m: Option<usize>,
    /// fig1: master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// fig2: grid step.
    #[arg(long)]
    step: Option<f64>,
}

/// Errors in the user's request, as opposed to I/O or runtime failures.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow!(UsageError(e.to_string()))
}

fn library(e: seqmusic::Error) -> anyhow::Error {
    match e {
        // the message already includes the OS error; keep it out of the chain
        seqmusic::Error::Io { .. } => anyhow!(e.to_string()),
        other => usage(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Simulate(args) => simulate(args),
        Command::Analyze(args) => analyze(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn read_overrides(path: &Path) -> anyhow::Result<ConfigOverrides> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn sweep(args: SweepArgs) -> anyhow::Result<()> {
    let overrides = args
        .config
        .as_deref()
        .map(read_overrides)
        .transpose()?
        .unwrap_or_default();
    let name = args.preset.clone().or_else(|| overrides.preset.clone());
    let base = match &name {
        Some(name) => preset(name)
            .and_then(|p| p.into_sweep(name))
            .map_err(library)?,
        None => ExperimentConfig::default(),
    };
    let mut cfg = overrides.apply(base).map_err(library)?;
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    }
    if let Some(out) = args.out {
        cfg.output_path = Some(out);
    }
    if args.timing {
        cfg.timing = true;
    }
    cfg.validate().map_err(library)?;
    let out = cfg
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", name.as_deref().unwrap_or("sweep"))));
    let workers = match args.workers {
        Some(0) => return Err(usage("--workers must be at least 1")),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let result = run_sweep_to(&cfg, workers, &out).map_err(library)?;
    eprintln!(
        "wrote {} rows to {} ({} trials per cell, {} errored trials)",
        result.rows.len(),
        out.display(),
        cfg.trials,
        result.failures.len()
    );
    Ok(())
}

fn simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let family: Family = args.matrix.parse().map_err(library)?;
    let algorithms = if args.algo == "all" {
        Algorithm::ALL.to_vec()
    } else {
        vec![args.algo.parse::<Algorithm>().map_err(library)?]
    };
    let cfg = ExperimentConfig {
        family,
        means: vec![args.mean],
        n: args.n,
        k: args.k,
        r: args.r,
        snapshots: vec![args.snapshots],
        m: vec![args.m],
        snr_db: parse_snr(&args.snr_db).map_err(library)?,
        taus: vec![args.tau],
        trials: 1,
        master_seed: args.seed,
        algorithms: algorithms.clone(),
        ..ExperimentConfig::default()
    };
    cfg.validate().map_err(library)?;
    let point = SweepPoint {
        m: args.m,
        snapshots: args.snapshots,
        tau: args.tau,
        mean: args.mean,
    };
    let seeds = TrialSeeds::derive(cfg.master_seed, &point, 0);
    if let Some(path) = &args.dump {
        let dump = match family {
            Family::Gaussian => gaussian_instance(&cfg, &point, &seeds)
                .map(|i| InstanceDump::capture(&i, seeds.truth)),
            Family::Fourier => fourier_instance(&cfg, &point, &seeds)
                .map(|i| InstanceDump::capture(&i, seeds.truth)),
        }
        .map_err(library)?;
        dump.write(path).map_err(library)?;
    }
    let records = run_trial_set(&cfg, &point, 0, &algorithms);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(
        out,
        "instance: family={} m={} n={} k={} r={} N={} snr_db={} tau={} mean={} seed={}",
        args.matrix,
        args.m,
        args.n,
        args.k,
        args.r,
        args.snapshots,
        cfg.snr_db,
        args.tau,
        args.mean,
        args.seed
    )?;
    writeln!(
        out,
        "seeds: trial={} matrix={} truth={} noise={}",
        seeds.trial, seeds.matrix, seeds.truth, seeds.noise
    )?;
    if let Some(first) = records.first() {
        writeln!(out, "true support: {:?}", first.true_support)?;
    }
    for rec in &records {
        print_record(&mut out, rec)?;
    }
    if let Some(path) = &args.dump {
        writeln!(out, "instance written to {}", path.display())?;
    }
    Ok(())
}

fn print_record(out: &mut impl Write, rec: &TrialRecord) -> std::io::Result<()> {
    writeln!(out, "[{}]", rec.algorithm)?;
    if let Some(err) = &rec.error {
        writeln!(out, "  error: {err}")?;
    }
    if let Some(init) = &rec.diagnostics.init {
        writeln!(out, "  initial estimate: {init:?}")?;
    }
    if let Some(filtered) = &rec.diagnostics.filtered {
        writeln!(out, "  after filtering: {filtered:?}")?;
    }
    if !rec.diagnostics.scores.is_empty() {
        let scores: Vec<String> = rec
            .diagnostics
            .scores
            .iter()
            .map(|s| format!("{s:.3e}"))
            .collect();
        writeln!(out, "  step scores: [{}]", scores.join(", "))?;
    }
    writeln!(out, "  estimated support: {:?}", rec.estimated_support)?;
    writeln!(out, "  success: {}", rec.success)
}

fn analyze(args: AnalyzeArgs) -> anyhow::Result<()> {
    let target = match preset(&args.target).map_err(library)? {
        Preset::Analysis(t) => t,
        Preset::Sweep(_) => bail!(UsageError(format!(
            "`{}` is a sweep preset; analyze targets are fig1 and fig2",
            args.target
        ))),
    };
    let file =
        fs::File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let writer = std::io::BufWriter::new(file);
    match target {
        AnalysisTarget::SigmaKProfile(base) => {
            let cfg = SigmaKProfileConfig {
                instances: args.instances.unwrap_or(base.instances),
                m: args.m.unwrap_or(base.m),
                seed: args.seed.unwrap_or(base.seed),
                ..base
            };
            let rows = sigma_k_profile(&cfg).map_err(library)?;
            write_sigma_k_csv(&rows, writer)
                .with_context(|| format!("writing {}", args.out.display()))?;
        }
        AnalysisTarget::FeasibilityGrid { step } => {
            let rows = feasibility_grid(args.step.unwrap_or(step)).map_err(library)?;
            write_feasibility_csv(&rows, writer)
                .with_context(|| format!("writing {}", args.out.display()))?;
        }
    }
    eprintln!("wrote {}", args.out.display());
    Ok(())
}
