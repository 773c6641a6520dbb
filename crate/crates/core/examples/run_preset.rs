//! Runs a bundled preset (or a TOML file) the way `aqw run` does.
//!
//!     cargo run --release --example run_preset -- coin-schedule /tmp/out
//!     cargo run --release --example run_preset -- configs/walk.toml

use std::path::PathBuf;

use aqwalk::experiment::{describe, preset, presets, run_config, ExperimentConfig, RunOptions};

fn main() -> aqwalk::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(what) = args.next() else {
        for p in presets() {
            println!("{:<28} {}", p.name, p.description());
        }
        return Ok(());
    };
    let config = match preset(&what) {
        Some(p) => p.config()?,
        None => ExperimentConfig::load(what.as_ref())?,
    };
    println!("{}", describe(&config)?);
    let options = RunOptions {
        output_dir: args.next().map(PathBuf::from),
        workers: None,
    };
    let report = run_config(&config, &options)?;
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
