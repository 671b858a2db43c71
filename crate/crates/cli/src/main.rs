//! `crackwave`: evaluate crack front wave dispersion relations, survey their
//! roots and synthesise front motion. See `crackwave --help`.

mod commands;
mod config;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crackwave::dispersion::Relation;

use crate::config::{Format, KernelConfig, RegionConfig, RunConfig};
use crate::failure::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "crackwave",
    version,
    about = "Crack front wave dispersion analysis"
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the elastodynamic coefficients at the configured speed.
    Coeffs,
    /// Level-curve grid of |D| over the search region (grid.csv).
    Grid,
    /// Track a corrugation root across crack speeds (sweep.csv).
    Sweep,
    /// Search for the critical speed above which a slowly attenuated root exists (vc.json).
    Vc,
    /// Synthesise front motion from a dispersion root (front_t<i>.csv).
    Front,
}

/// Flags override values read from the configuration file.
#[derive(Debug, Args)]
struct Overrides {
    /// JSON run configuration.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    nu: Option<f64>,
    #[arg(long, global = true)]
    b: Option<f64>,
    #[arg(long = "v-over-b", global = true)]
    v_over_b: Option<f64>,
    #[arg(long = "ki0", global = true)]
    ki0: Option<f64>,
    #[arg(long = "kiii0", global = true)]
    kiii0: Option<f64>,
    /// inplane, corrugation or mixed.
    #[arg(long, global = true, value_parser = parse_relation)]
    relation: Option<Relation>,
    /// Use a tabulated kernel from this file.
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    /// Search region as `re_min,re_max,im_min,im_max,nx,ny`.
    #[arg(long, global = true, value_parser = parse_region)]
    region: Option<RegionConfig>,
    /// Sweep speeds (V/b), comma separated.
    #[arg(long, global = true, value_delimiter = ',', num_args = 0..)]
    speeds: Option<Vec<f64>>,
    #[arg(long = "v-lo", global = true)]
    v_lo: Option<f64>,
    #[arg(long = "v-hi", global = true)]
    v_hi: Option<f64>,
    #[arg(long = "tol-v", global = true)]
    tol_v: Option<f64>,
    #[arg(long = "out-dir", short, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

fn parse_relation(text: &str) -> Result<Relation, String> {
    serde_json::from_value(serde_json::Value::String(text.to_string()))
        .map_err(|_| format!("unknown relation `{text}` (expected inplane, corrugation or mixed)"))
}

fn parse_region(text: &str) -> Result<RegionConfig, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err("expected re_min,re_max,im_min,im_max,nx,ny".into());
    }
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number"))
    };
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| format!("`{s}` is not a count"))
    };
    Ok(RegionConfig {
        re: [num(parts[0])?, num(parts[1])?],
        im: [num(parts[2])?, num(parts[3])?],
        nx: count(parts[4])?,
        ny: count(parts[5])?,
    })
}

impl Overrides {
    fn apply(&self, cfg: &mut RunConfig) {
        fn set<T: Clone>(target: &mut T, value: &Option<T>) {
            if let Some(v) = value {
                *target = v.clone();
            }
        }
        set(&mut cfg.material.nu, &self.nu);
        set(&mut cfg.material.b, &self.b);
        set(&mut cfg.load.v_over_b, &self.v_over_b);
        set(&mut cfg.load.ki0, &self.ki0);
        set(&mut cfg.load.kiii0, &self.kiii0);
        set(&mut cfg.relation, &self.relation);
        if let Some(table) = &self.table {
            cfg.kernel = KernelConfig::Tabulated {
                table: table.clone(),
            };
        }
        if self.region.is_some() {
            cfg.region = self.region;
        }
        set(&mut cfg.sweep.speeds, &self.speeds);
        set(&mut cfg.vc.v_lo, &self.v_lo);
        set(&mut cfg.vc.v_hi, &self.v_hi);
        set(&mut cfg.vc.tol_v, &self.tol_v);
        set(&mut cfg.output.directory, &self.out_dir);
        set(&mut cfg.output.format, &self.format);
    }
}

/// Bounds the worker pool from `CRACKWAVE_THREADS`, if set.
fn configure_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var("CRACKWAVE_THREADS") else {
        return Ok(());
    };
    let threads: usize = text.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::config(format!(
            "CRACKWAVE_THREADS: `{text}` is not a positive integer"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::config(format!("CRACKWAVE_THREADS: {e}")))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    configure_threads()?;
    let mut cfg = match &cli.overrides.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    cli.overrides.apply(&mut cfg);
    match cli.command {
        Command::Coeffs => commands::coeffs(&cfg),
        Command::Grid => commands::grid(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Vc => commands::vc(&cfg),
        Command::Front => commands::front(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            println!("{}", report.trim_end());
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(u8::try_from(failure.code).unwrap_or(1))
        }
    }
}
