//! `aqw`: run walk experiments from TOML configs or bundled presets.

use std::path::PathBuf;
use std::process::ExitCode;

use aqwalk::experiment::{
    describe, preset, presets, run_config, ExperimentConfig, RunOptions, OUTPUT_DIR_ENV,
};
use aqwalk::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aqw", version, about = "Accelerated quantum walk experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config file or a bundled preset and write its datasets.
    Run {
        /// Path to a TOML config.
        #[arg(required_unless_present = "preset", conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Name of a bundled preset instead of a file.
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// List bundled presets, or print one with `--show`.
    Presets {
        #[arg(long, value_name = "NAME")]
        show: Option<String>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

#[derive(Args)]
struct Opts {
    /// Output directory; defaults to the config's, then $AQW_OUTPUT_DIR.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Maximum worker threads for ensembles.
    #[arg(long, short)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aqw: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}

fn dispatch(command: Command) -> aqwalk::Result<()> {
    match command {
        Command::Run {
            config,
            preset: name,
            opts,
        } => {
            let config = match (config, name) {
                (Some(path), _) => ExperimentConfig::load(&path)?,
                (None, Some(name)) => find_preset(&name)?.config()?,
                (None, None) => unreachable!("clap requires one"),
            };
            if opts.workers == Some(0) {
                return Err(Error::Config("--workers must be at least 1".into()));
            }
            let options = RunOptions {
                output_dir: opts.out,
                workers: opts.workers,
            };
            let report = run_config(&config, &options)?;
            for f in &report.files {
                println!("{}", f.display());
            }
            println!("{}", report.manifest.display());
            Ok(())
        }
        Command::Presets { show: Some(name) } => {
            print!("{}", find_preset(&name)?.toml);
            Ok(())
        }
        Command::Presets { show: None } => {
            let width = presets().iter().map(|p| p.name.len()).max().unwrap_or(0);
            println!("{:width$}  {:>8}  description", "name", "runtime");
            for p in presets() {
                println!("{:width$}  {:>8}  {}", p.name, p.runtime, p.description());
            }
            eprintln!(
                "{} presets; output goes to --out, the config's output_dir, or ${OUTPUT_DIR_ENV}",
                presets().len()
            );
            Ok(())
        }
        Command::Validate { config } => {
            let config = ExperimentConfig::load(&config)?;
            println!("ok  {}", describe(&config)?);
            Ok(())
        }
    }
}

fn find_preset(name: &str) -> aqwalk::Result<&'static aqwalk::experiment::Preset> {
    preset(name).ok_or_else(|| {
        Error::Config(format!(
            "no preset named `{name}`; `aqw presets` lists them"
        ))
    })
}
