//! `spp`: parameter sweeps and reports for SPP excitation in ATR geometries.
//!
//! Exit codes: 0 success, 1 computation infeasible, 2 usage or config error.

mod commands;
mod manifest;
mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use spp_core::{ConfigFile, Error, Geometry, MaterialRegistry};

use crate::commands::{Context, StatsReport};
use crate::manifest::RunManifest;
use crate::output::Format;
use crate::sweep::SweepConfig;

#[derive(Parser, Debug)]
#[command(
    name = "spp",
    version,
    about = "Photon to SPP coupling sweeps for Otto and Kretschmann-Raether stacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Config file with `[material "<name>"]` and `[sweep]` sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Metal name from the registry (built in: silver).
    #[arg(long, global = true)]
    material: Option<String>,
    /// otto or kr.
    #[arg(long, global = true, value_parser = parse_geometry)]
    geometry: Option<Geometry>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (csv for grids, json for the stats report by default).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// SPP and light-line dispersion with the matching angle.
    Dispersion,
    /// Rescaled coupling over the (ω, d) grid.
    CouplingMap,
    /// Optimal thickness and coupling per ω.
    Optimize,
    /// Expected SPP count per excitation against propagation distance.
    Propagate,
    /// Counting moments and g²(0) of an n-excitation Fock state after losses.
    Stats {
        /// Number of excitations in the input Fock state.
        #[arg(long)]
        n: u64,
        /// Comma-separated stage efficiencies, e.g. 0.9,0.5,0.65.
        #[arg(long, default_value = "")]
        chain: String,
        /// Recompute with the exact Fock-space oracle and require agreement.
        #[arg(long)]
        oracle: bool,
    },
}

fn parse_geometry(s: &str) -> Result<Geometry, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Infeasible(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } | Error::Domain(_) | Error::Scale(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Infeasible(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    report: &'a StatsReport,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start worker pool: {e}")))?;

    let text = match &cli.command {
        Command::Stats { n, chain, oracle } => stats_text(*n, chain, *oracle, cli.format)?,
        _ => pool.install(|| sweep_text(&cli))?,
    };

    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn stats_text(
    n: u64,
    chain: &str,
    oracle: bool,
    format: Option<Format>,
) -> Result<String, Failure> {
    let parsed = commands::parse_chain(chain)?;
    let report = commands::stats(n, &parsed, oracle)?;
    let manifest = RunManifest::new(
        "stats",
        vec![
            ("n".into(), n.to_string()),
            ("chain".into(), format!("{:?}", parsed.etas())),
            ("oracle".into(), oracle.to_string()),
        ],
    );
    if report.oracle.as_ref().is_some_and(|o| !o.agrees) {
        return Err(Failure::Infeasible(
            "oracle disagrees with the closed form".into(),
        ));
    }
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => {
            let doc = JsonReport {
                manifest: &manifest,
                report: &report,
            };
            serde_json::to_string_pretty(&doc).expect("report serialises") + "\n"
        }
        Format::Csv => report.table().render(&manifest, Format::Csv),
    })
}

fn sweep_text(cli: &Cli) -> Result<String, Failure> {
    let config = match &cli.config {
        Some(path) => {
            let raw = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            Some(ConfigFile::parse(&raw)?)
        }
        None => None,
    };
    let mut registry = MaterialRegistry::default();
    if let Some(c) = &config {
        registry.extend_from_config(c)?;
    }
    let sweep = SweepConfig::resolve(config.as_ref(), cli.material.as_deref(), cli.geometry)?;
    let metal = *registry.get(&sweep.material).ok_or_else(|| {
        let known: Vec<&str> = registry.names().collect();
        Failure::Usage(format!(
            "unknown material {:?} (known: {})",
            sweep.material,
            known.join(", ")
        ))
    })?;
    let (name, command): (&str, fn(&Context) -> spp_core::Result<output::Table>) = match cli.command
    {
        Command::Dispersion => ("dispersion", commands::dispersion),
        Command::CouplingMap => ("coupling-map", commands::coupling_map),
        Command::Optimize => ("optimize", commands::optimize),
        Command::Propagate => ("propagate", commands::propagate),
        Command::Stats { .. } => unreachable!("stats has its own path"),
    };
    let mut params: Vec<(String, String)> = sweep
        .echo()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    for (k, v) in [
        ("omega_p", metal.omega_p),
        ("gamma", metal.gamma),
        ("bg_real_coeff", metal.bg_real_coeff),
        ("bg_imag", metal.bg_imag),
    ] {
        params.push((format!("metal.{k}"), format!("{v:.16e}")));
    }
    let manifest = RunManifest::new(name, params);
    let table = command(&Context { sweep, metal })?;
    Ok(table.render(&manifest, cli.format.unwrap_or(Format::Csv)))
}
