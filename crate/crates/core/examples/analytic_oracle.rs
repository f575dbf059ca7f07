//! Weak-drive amplitudes and the correlators built from them.

use photon_blockade::analytic::{amplitudes, blockade_condition_residual, ChshForm};
use photon_blockade::model::ModelParams;

fn main() -> photon_blockade::Result<()> {
    for (j, u) in [(1.5, 0.09), (1.0, 0.5), (0.75, 1.0)] {
        let p = ModelParams { j_hop: j, ..ModelParams::default().with_kerr(u) }.with_detuning(0.3);
        let a = amplitudes(&p)?;
        println!("J = {j}, U = {u}");
        println!("  c10 = {:.4e}  c01 = {:.4e}", a.c10, a.c01);
        println!("  c20 = {:.4e}  c02 = {:.4e}  c11 = {:.4e}", a.c20, a.c02, a.c11);
        let g = a.g2();
        println!("  g2 = {:?} / {:?}, cross {:?}", g.g2_a1, g.g2_a2, g.g2_cross);
        println!("  csi = {:?}", a.csi().ok());
        println!("  chsh = {:?} (modulus form {:?})", a.chsh(ChshForm::PhaseAware).ok(), a.chsh(ChshForm::Modulus).ok());
        println!("  |c20 residual| = {:.3e}", blockade_condition_residual(&p)?.norm());
    }
    Ok(())
}
