//! CHSH value of Bell states and of a driven steady state, from the angle
//! sum and the closed form.

use photon_blockade::analytic::analytic_chsh;
use photon_blockade::bell::{chsh_closed_form, chsh_from_state, AngleSet, BellState};
use photon_blockade::hilbert::HilbertSpec;
use photon_blockade::lindblad::DensityMatrix;
use photon_blockade::model::ModelParams;
use photon_blockade::sweep::master_steady_state;

fn main() -> photon_blockade::Result<()> {
    let h = HilbertSpec::two_mode(4)?;
    let angles = AngleSet::default();
    for b in BellState::ALL {
        let rho = DensityMatrix::from_ket(&b.ket(&h)?)?;
        // the single-photon Bell states have no pair amplitude, so B is undefined
        match chsh_from_state(&rho, &h, &angles) {
            Ok(v) => println!("{:<10} B = {v:.6}", b.label()),
            Err(e) => println!("{:<10} B = NA ({e})", b.label()),
        }
    }
    let p = ModelParams { j_hop: 0.5, ..ModelParams::default().with_kerr(1.0) }.with_detuning(0.5);
    let rho = master_steady_state(&p, &h)?;
    println!("steady state: angle sum {:.6}, closed form {:.6}, analytic {:.6}",
        chsh_from_state(&rho, &h, &angles)?, chsh_closed_form(&rho, &h)?, analytic_chsh(&p)?);
    Ok(())
}
