//! Detuning scan of g2 for the three blockade regimes; prints the location
//! and depth of each antibunching dip.

use photon_blockade::sweep::{figure_preset, dip_location, REGIMES};

fn main() -> photon_blockade::Result<()> {
    let rows = figure_preset("fig2a")?;
    for (j, u) in REGIMES {
        for key in ["g2_a1_master", "g2_a1_analytic"] {
            if let Some((delta, g2)) = dip_location(&rows, j, u, key) {
                println!("J = {j:<4} U = {u:<4} {key:<15} min g2 = {g2:.3e} at delta = {delta:+.3}");
            }
        }
    }
    Ok(())
}
