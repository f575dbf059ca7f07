//! Fidelity with the four Bell states while the cavities fill from vacuum.

use photon_blockade::bell::{bell_fidelity, qubit_subspace_weight, BellState};
use photon_blockade::hilbert::HilbertSpec;
use photon_blockade::lindblad::{evolve, liouvillian, DensityMatrix, EvolveOptions};
use photon_blockade::model::{build_hamiltonian, collapse_operators};
use photon_blockade::sweep::fidelity_params;

fn main() -> photon_blockade::Result<()> {
    let p = fidelity_params(1.0, 15.0);
    let h = HilbertSpec::two_mode(4)?;
    let l = liouvillian(&build_hamiltonian(&p, &h)?, &collapse_operators(&p, &h)?)?;
    let times: Vec<f64> = (0..=20).map(|i| i as f64).collect();
    let traj = evolve(&DensityMatrix::fock(&h, &[0, 0])?, &l, &times, &EvolveOptions::default())?;
    print!("{:>5}", "t");
    for b in BellState::ALL {
        print!(" {:>10}", b.label());
    }
    println!(" {:>10}", "weight");
    for (t, rho) in times.iter().zip(&traj) {
        print!("{t:>5.1}");
        for b in BellState::ALL {
            print!(" {:>10.6}", bell_fidelity(rho, &h, b)?);
        }
        println!(" {:>10.6}", qubit_subspace_weight(rho, &h)?);
    }
    Ok(())
}
