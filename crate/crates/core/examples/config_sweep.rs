//! Run the sweep described by a TOML file and write CSV and JSON tables.
//!
//! cargo run --example config_sweep -- examples/sweep.toml /tmp/sweep.csv

use photon_blockade::sweep::{load_config, run_sweep, write_csv, write_json};

fn main() -> photon_blockade::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sweep.toml").into());
    let out = args.next().unwrap_or_else(|| std::env::temp_dir().join("sweep.csv").display().to_string());
    let (_, _, spec) = load_config(&config)?;
    let rows = run_sweep(&spec)?;
    write_csv(&rows, &out)?;
    write_json(&rows, std::path::Path::new(&out).with_extension("json"))?;
    println!("{} rows, {} invalid, written to {out}", rows.len(), rows.iter().filter(|r| !r.valid).count());
    Ok(())
}
