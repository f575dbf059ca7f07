//! Command-line front end: single points, config sweeps, figure presets and
//! the self-check suite.
//!
//! Exit codes: 0 success, 1 configuration error, 2 solver failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use photon_blockade::analytic::analytic_g2;
use photon_blockade::correlations::Observables;
use photon_blockade::sweep::{
    apply_axis, figure_preset_with, load_config, parse_config, self_checks, run_sweep, write_csv, write_json,
    Engine, PresetOptions,
};
use photon_blockade::Error;

#[derive(Parser)]
#[command(name = "blockade", version, about = "Photon blockade in coupled Kerr cavities")]
struct Cli {
    /// Also write a JSON mirror next to CSV output, or print JSON for `point` and `validate`.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state statistics at one parameter point.
    Point {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a parameter, e.g. `--set delta=0.97`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// master, analytic or both
        #[arg(long, default_value = "master")]
        engine: String,
    },
    /// Sweep the axes of a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Regenerate the data of a named figure.
    Fig {
        preset: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Add master-equation rows on a 5x5 subgrid of contour panels.
        #[arg(long)]
        spot_check: bool,
    },
    /// Run the operator identities and invariant checks.
    Validate,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::UnknownPreset(_) | Error::InvalidParameter { .. } | Error::Io(_) => 1,
        _ => 2,
    }
}

fn json_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn point(config: Option<PathBuf>, overrides: &[String], engine: &str, json: bool) -> Result<(), Error> {
    let (mut p, hilbert, _) = match config {
        Some(path) => load_config(path)?,
        None => parse_config("")?,
    };
    for kv in overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{kv}` is not KEY=VALUE")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Config(format!("override `{kv}`: not a number")))?;
        apply_axis(&mut p, k.trim(), v)?;
    }
    p.validate()?;
    let engine = Engine::parse(engine).ok_or_else(|| Error::Config(format!("unknown engine `{engine}`")))?;
    let mut report = serde_json::Map::new();
    if engine != Engine::Analytic {
        let rho = photon_blockade::sweep::master_steady_state(&p, &hilbert)?;
        let r = Observables::new(&hilbert)?.report(&rho)?;
        report.insert("master".into(), serde_json::to_value(r).expect("serializable"));
    }
    if engine != Engine::Master {
        let g = analytic_g2(&p)?;
        let mut v = serde_json::to_value(g).expect("serializable");
        v["csi"] = photon_blockade::analytic::analytic_csi(&p).ok().into();
        report.insert("analytic".into(), v);
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        for (engine, fields) in &report {
            for (k, v) in fields.as_object().expect("object") {
                let shown = v.as_f64().map_or_else(|| "NA".to_string(), |x| format!("{x:.10}"));
                println!("{engine:<9} {k:<9} {shown}");
            }
        }
    }
    Ok(())
}

fn write_outputs(rows: &[photon_blockade::sweep::ResultRow], out: &Path, json: bool) -> Result<(), Error> {
    write_csv(rows, out)?;
    if json {
        write_json(rows, json_path(out))?;
    }
    let bad = rows.iter().filter(|r| !r.valid).count();
    eprintln!("wrote {} rows to {} ({bad} invalid)", rows.len(), out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Point { config, overrides, engine } => point(config, &overrides, &engine, cli.json),
        Command::Sweep { config, out, workers } => {
            let (_, _, mut spec) = load_config(config)?;
            if let Some(w) = workers {
                spec.workers = w;
            }
            let rows = run_sweep(&spec)?;
            write_outputs(&rows, &out, cli.json)
        }
        Command::Fig { preset, out, workers, spot_check } => {
            let opts = PresetOptions { workers, spot_check, ..Default::default() };
            let rows = figure_preset_with(&preset, &opts)?;
            write_outputs(&rows, &out, cli.json)
        }
        Command::Validate => {
            let checks = self_checks();
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&checks).expect("serializable"));
            } else {
                for c in &checks {
                    println!("{} {:<48} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                }
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Error::Singular("self checks failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
