use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cosmoflux::config::{OutputFormat, RunConfig, SweepConfig};
use cosmoflux::output;
use cosmoflux::{run_simulation, run_sweep, verify_invariants, AppError};

#[derive(Parser)]
#[command(name = "cosmoflux", version, about = "Thermodynamics of pair creation by two-mode squeezing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured point and print its report.
    Simulate(Common),
    /// Run every point of a sweep file.
    Sweep(Common),
    /// Check all identities at the configured and reference points.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config file; flags below override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<OutputFormat>,
    /// No progress messages on stderr.
    #[arg(long)]
    quiet: bool,
    #[command(flatten)]
    keys: Overrides,
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    acceleration: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long = "mass-bh")]
    mass_bh: Option<f64>,
    #[arg(long)]
    z: Option<f64>,
    #[arg(long = "tanh-z")]
    tanh_z: Option<f64>,
    #[arg(long = "omega-in")]
    omega_in: Option<f64>,
    #[arg(long = "omega-out")]
    omega_out: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    cutoff: Option<i64>,
    #[arg(long = "leakage-tolerance")]
    leakage_tolerance: Option<f64>,
    #[arg(long)]
    precision: Option<i64>,
}

impl Overrides {
    fn apply(&self, table: &mut toml::Table) {
        let mut set = |key: &str, value: Option<toml::Value>| {
            if let Some(v) = value {
                table.insert(key.to_string(), v);
            }
        };
        set("scenario", self.scenario.clone().map(toml::Value::String));
        let floats = [
            ("k", self.k),
            ("m", self.m),
            ("epsilon", self.epsilon),
            ("sigma", self.sigma),
            ("acceleration", self.acceleration),
            ("omega", self.omega),
            ("mass_bh", self.mass_bh),
            ("z", self.z),
            ("tanh_z", self.tanh_z),
            ("omega_in", self.omega_in),
            ("omega_out", self.omega_out),
            ("temperature", self.temperature),
            ("leakage_tolerance", self.leakage_tolerance),
        ];
        for (key, v) in floats {
            set(key, v.map(toml::Value::Float));
        }
        set("cutoff", self.cutoff.map(toml::Value::Integer));
        set("precision", self.precision.map(toml::Value::Integer));
    }
}

impl Common {
    fn table(&self) -> Result<toml::Table, AppError> {
        let mut table = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str(&text).map_err(|e: toml::de::Error| AppError::Config(e.to_string()))?
            }
            None => toml::Table::new(),
        };
        self.keys.apply(&mut table);
        Ok(table)
    }

    fn run_config(&self) -> Result<RunConfig, AppError> {
        let mut config = RunConfig::from_table(self.table()?)?;
        if let Some(format) = self.output {
            config.output = format;
        }
        Ok(config)
    }

    fn sweep_config(&self) -> Result<SweepConfig, AppError> {
        let table = self.table()?;
        let text = toml::to_string(&table).map_err(|e| AppError::Config(e.to_string()))?;
        let mut sweep = SweepConfig::from_toml_str(&text)?;
        if let Some(format) = self.output {
            sweep.base.output = format;
        }
        Ok(sweep)
    }

    fn progress(&self, message: &str) {
        if !self.quiet {
            eprintln!("{message}");
        }
    }
}

fn simulate(args: &Common) -> Result<String, AppError> {
    let config = args.run_config()?;
    args.progress(&format!("simulating {} at cutoff {}", config.scenario.name(), config.cutoff));
    let report = run_simulation(&config)?;
    match config.output {
        OutputFormat::Json => output::report_json(&report),
        OutputFormat::Csv => output::report_csv(&report),
    }
}

fn sweep(args: &Common) -> Result<String, AppError> {
    let sweep = args.sweep_config()?;
    args.progress(&format!("sweeping {} over {} points", sweep.axis, sweep.grid.len()));
    let rows = run_sweep(&sweep)?;
    let failed = rows.iter().filter(|r| r.result.is_err()).count();
    if failed > 0 {
        args.progress(&format!("{failed} of {} points failed, see the error column", rows.len()));
    }
    match sweep.base.output {
        OutputFormat::Json => output::sweep_json(&rows),
        OutputFormat::Csv => output::sweep_csv(&rows),
    }
}

fn verify(args: &Common) -> Result<String, AppError> {
    let config = args.run_config()?;
    args.progress("running the invariant suite");
    let suite = verify_invariants(&config)?;
    let text = match args.output {
        Some(OutputFormat::Json) => suite.to_json(config.precision)?,
        _ => suite.to_text(config.precision),
    };
    if suite.passed() {
        Ok(text)
    } else {
        // The itemised list still goes to stdout before the failure status.
        print!("{text}");
        Err(AppError::Verification(format!("{} checks failed", suite.failures())))
    }
}

fn main() -> ExitCode {
    // Usage errors are configuration errors here; clap's own status 2 is
    // reserved for failed verification.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
        Command::Verify(args) => verify(args),
    };
    match result {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            if let Err(e) = output::write_text(&mut stdout, &text).and_then(|_| {
                stdout.flush().map_err(|e| AppError::Output(e.to_string()))
            }) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
