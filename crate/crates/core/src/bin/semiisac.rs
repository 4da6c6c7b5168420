use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use semiisac::metrics::{evaluate_many, Metric};
use semiisac::montecarlo::McSettings;
use semiisac::scenario::{Scenario, SystemConfig, DEFAULT_PRESET};
use semiisac::sweep::{row_fields, run_sweep, write_csv, SweepSpec, ROW_HEADER};
use semiisac::validate::{Profile, Validation};
use semiisac::{Error, Result};

#[derive(Parser)]
#[command(
    name = "semiisac",
    version,
    about = "Semi-ISaC uplink performance analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate metrics at one operating point and print CSV.
    Eval(EvalArgs),
    /// Run a parameter sweep described by a TOML or JSON file.
    Sweep(SweepArgs),
    /// Run the self-check suite; exits non-zero if any check fails.
    Validate(ValidateArgs),
    /// Print the resolved configuration as TOML.
    Config(ConfigArgs),
}

#[derive(Args)]
struct ConfigSource {
    /// Configuration file (TOML, or JSON by extension). Unset fields come
    /// from the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in preset used when no configuration file is given.
    #[arg(long, default_value = DEFAULT_PRESET)]
    preset: String,
}

impl ConfigSource {
    fn load(&self) -> Result<SystemConfig> {
        match &self.config {
            Some(p) => SystemConfig::from_path(p),
            None => SystemConfig::preset(&self.preset),
        }
    }
}

#[derive(Args)]
struct SimArgs {
    /// Random seed of the Monte Carlo simulator.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long)]
    samples: Option<u64>,
}

impl SimArgs {
    fn given(&self) -> bool {
        self.seed.is_some() || self.samples.is_some()
    }

    fn apply(&self, mut s: McSettings) -> McSettings {
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(n) = self.samples {
            s.n_samples = n;
        }
        s
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: ConfigSource,
    /// Scenario (repeatable); all four when omitted.
    #[arg(long = "scenario")]
    scenarios: Vec<String>,
    /// Metric (repeatable): op, op-asym, rate, reir, reir-asym, capacity,
    /// diversity, slope, snr-db.
    #[arg(long = "metric", required = true)]
    metrics: Vec<String>,
    /// Also report Monte Carlo estimates of op, rate and reir.
    #[arg(long)]
    mc: bool,
    #[command(flatten)]
    sim: SimArgs,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep specification file.
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    source: ConfigSource,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    source: ConfigSource,
    /// quick, default or full.
    #[arg(long, default_value = "default")]
    profile: String,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConfigArgs {
    #[command(flatten)]
    source: ConfigSource,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn eval(args: &EvalArgs) -> Result<()> {
    let cfg = args.source.load()?;
    let metrics = args
        .metrics
        .iter()
        .map(|m| m.parse())
        .collect::<Result<Vec<Metric>>>()?;
    let scenarios = if args.scenarios.is_empty() {
        Scenario::ALL.to_vec()
    } else {
        args.scenarios
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Scenario>>>()?
    };
    let mc = (args.mc || args.sim.given()).then(|| args.sim.apply(McSettings::default()));
    if let Some(s) = &mc {
        s.validate()?;
    }
    let mut out = output(args.out.as_deref())?;
    writeln!(out, "{ROW_HEADER}")?;
    for s in scenarios {
        for row in evaluate_many(&cfg, s, &metrics, mc.as_ref())? {
            writeln!(out, "{}", row_fields(&row))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let mut spec = SweepSpec::from_path(&args.spec)?;
    if args.sim.given() {
        let mc = args.sim.apply(spec.mc.unwrap_or_default());
        mc.validate()?;
        spec.mc = Some(mc);
    }
    let base = args.source.load()?;
    let rows = run_sweep(&spec, &base)?;
    write_csv(output(args.out.as_deref())?, &rows)
}

fn validate(args: &ValidateArgs) -> Result<bool> {
    let profile: Profile = args.profile.parse()?;
    let mut v = Validation::new(args.source.load()?, profile);
    if let Some(seed) = args.sim.seed {
        v = v.with_seed(seed);
    }
    if let Some(n) = args.sim.samples {
        v = v.with_samples(n);
    }
    let report = v.run()?;
    report.write_csv(output(args.out.as_deref())?)?;
    let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        eprintln!("{} check(s) failed: {}", failed.len(), failed.join(", "));
    }
    Ok(failed.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Eval(a) => eval(&a).map(|_| true),
        Command::Sweep(a) => sweep(&a).map(|_| true),
        Command::Validate(a) => validate(&a),
        Command::Config(a) => {
            print!("{}", a.source.load()?.to_toml_string());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Io(msg)) if msg.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
