//! Two-time correlation g2(tau) of both cavities via the regression theorem.

use photon_blockade::correlations::Observables;
use photon_blockade::hilbert::HilbertSpec;
use photon_blockade::lindblad::{liouvillian, steady_state, EvolveOptions};
use photon_blockade::model::{build_hamiltonian, collapse_operators, ModelParams};

fn main() -> photon_blockade::Result<()> {
    let p = ModelParams { j_hop: 0.75, ..ModelParams::default().with_kerr(1.0) }.with_detuning(0.97);
    let h = HilbertSpec::two_mode(5)?;
    let l = liouvillian(&build_hamiltonian(&p, &h)?, &collapse_operators(&p, &h)?)?;
    let rho = steady_state(&l)?;
    let obs = Observables::new(&h)?;
    let taus: Vec<f64> = (0..=40).map(|i| i as f64 * 0.5).collect();
    let g1 = obs.g2_tau(&rho, &l, 0, &taus, &EvolveOptions::default())?;
    let g2 = obs.g2_tau(&rho, &l, 1, &taus, &EvolveOptions::default())?;
    println!("{:>6} {:>12} {:>12}", "tau", "g2_a1", "g2_a2");
    for ((t, a), b) in taus.iter().zip(&g1).zip(&g2) {
        println!("{t:>6.2} {a:>12.6} {b:>12.6}");
    }
    Ok(())
}
