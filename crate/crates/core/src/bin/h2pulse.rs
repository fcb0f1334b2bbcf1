use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use h2pulse::config::{preset, RunConfig, Scenario, PRESETS};
use h2pulse::{output, scenario, Error, Result};

#[derive(Parser)]
#[command(name = "h2pulse", version, about = "H2 ionization and fragmentation in intense laser pulses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate one pulse and write populations, spectra and a summary.
    Run(RunArgs),
    /// Repeat a pulse over the configured intensities.
    Scan(RunArgs),
    /// Dressed H2+ curves and their crossings.
    Dressed(RunArgs),
    /// List the built-in presets, or print one.
    Presets {
        name: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in preset, applied before --config.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `dynamic` or `frozen`.
    #[arg(long)]
    mode: Option<String>,
    /// Shorthand for `--mode frozen`.
    #[arg(long, conflicts_with = "mode")]
    frozen: bool,
    /// Peak intensity, W/cm2.
    #[arg(long)]
    intensity: Option<f64>,
    #[arg(long)]
    wavelength_nm: Option<f64>,
    #[arg(long)]
    cycles: Option<f64>,
    /// Extra `key=value` settings, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl RunArgs {
    fn config(&self, scenario: Scenario) -> Result<RunConfig> {
        let mut cfg = match &self.preset {
            Some(name) => RunConfig::from_preset(name)?,
            None => RunConfig::default(),
        };
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            let pairs = h2pulse::config::parse_pairs(&path.display().to_string(), &text)?;
            let pairs: Vec<_> = pairs.into_iter().map(|(k, v, _)| (k, v)).collect();
            cfg.apply(&pairs)?;
        }
        let mut flags: Vec<(String, String)> = Vec::new();
        if let Some(m) = &self.mode {
            flags.push(("mode".into(), m.clone()));
        }
        if self.frozen {
            flags.push(("mode".into(), "frozen".into()));
        }
        if let Some(i) = self.intensity {
            flags.push(("intensity_W_cm2".into(), i.to_string()));
        }
        if let Some(w) = self.wavelength_nm {
            flags.push(("wavelength_nm".into(), w.to_string()));
        }
        if let Some(c) = self.cycles {
            flags.push(("cycles".into(), c.to_string()));
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            flags.push((k.trim().into(), v.trim().into()));
        }
        if let Some(out) = &self.out {
            flags.push(("out".into(), out.display().to_string()));
        }
        cfg.apply(&flags)?;
        cfg.scenario = scenario;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn main_inner(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.config(Scenario::Run)?;
            let out = scenario::run(&cfg)?;
            report(&output::write_run(&cfg.out, &out)?);
        }
        Command::Scan(args) => {
            let cfg = args.config(Scenario::Scan)?;
            let out = scenario::scan(&cfg)?;
            report(&output::write_scan(&cfg.out, &out)?);
        }
        Command::Dressed(args) => {
            let cfg = args.config(Scenario::Dressed)?;
            let out = scenario::dressed(&cfg)?;
            report(&output::write_dressed(&cfg.out, &out)?);
        }
        Command::Presets { name: None } => {
            for name in PRESETS {
                let cfg = RunConfig::from_preset(name)?;
                println!("{name:<12} {}", cfg.scenario.label());
            }
        }
        Command::Presets { name: Some(name) } => {
            print!("{}", preset(&name).ok_or(Error::UnknownPreset(name))?);
        }
    }
    Ok(())
}

fn fail(kind: &str, message: &str) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": kind, "message": message.trim_end() }));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return fail("usage", &e.to_string()),
    };
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string()),
    }
}
