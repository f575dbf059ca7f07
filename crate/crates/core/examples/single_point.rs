//! Steady-state statistics at one parameter point, from the master equation
//! and from the weak-drive amplitudes.

use photon_blockade::analytic::{analytic_csi, analytic_g2};
use photon_blockade::correlations::Observables;
use photon_blockade::hilbert::HilbertSpec;
use photon_blockade::model::ModelParams;
use photon_blockade::sweep::master_steady_state;

fn main() -> photon_blockade::Result<()> {
    let p = ModelParams { j_hop: 0.75, ..ModelParams::default().with_kerr(1.0) }.with_detuning(0.97);
    let hilbert = HilbertSpec::two_mode(5)?;
    let rho = master_steady_state(&p, &hilbert)?;
    let r = Observables::new(&hilbert)?.report(&rho)?;
    println!("master   n1 = {:.4e}  n2 = {:.4e}", r.n1, r.n2);
    println!("master   g2_a1 = {:?}  g2_a2 = {:?}  g2_x = {:?}  csi = {:?}", r.g2_a1, r.g2_a2, r.g2_cross, r.csi);
    let g = analytic_g2(&p)?;
    println!("analytic g2_a1 = {:?}  g2_a2 = {:?}  g2_x = {:?}  csi = {:?}", g.g2_a1, g.g2_a2, g.g2_cross, analytic_csi(&p).ok());
    Ok(())
}
