//! Effective Kerr model against the explicit optomechanical Hamiltonian.
//! Mechanical damping is raised well above the default so that recoil
//! phonons do not pile up in the truncated phonon space.

use photon_blockade::correlations::Observables;
use photon_blockade::model::{effective_kerr_u, ModelParams};
use photon_blockade::sweep::{master_steady_state, HilbertConfig};

fn main() -> photon_blockade::Result<()> {
    let (g, wm) = (10.0, 100.0);
    let u = effective_kerr_u(g, wm)?.u;
    let eff = ModelParams { j_hop: 0.75, g_om: g, omega_m: wm, ..ModelParams::default().with_kerr(u) }.with_detuning(0.97);
    let cfg = HilbertConfig { cutoff: 3, phonon_cutoff: 3 };
    let g_eff = Observables::new(&cfg.build(&eff)?)?.g2_auto(&master_steady_state(&eff, &cfg.build(&eff)?)?, 0)?;
    println!("effective U = {u:.3}: g2_a1 = {g_eff:.5}");
    for gamma in [1e-4, 1e-2, 1e-1] {
        let lab = ModelParams { include_mechanics: true, gamma, ..eff.with_kerr(0.0) };
        let h = cfg.build(&lab)?;
        let rho = master_steady_state(&lab, &h)?;
        println!("lab frame gamma = {gamma:.0e}: g2_a1 = {:.5}", Observables::new(&h)?.g2_auto(&rho, 0)?);
    }
    Ok(())
}
