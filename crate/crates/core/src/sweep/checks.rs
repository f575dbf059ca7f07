//! Quick invariant suite behind the `validate` command.

use serde::Serialize;

use super::master_steady_state;
use crate::analytic::{amplitudes, analytic_g2};
use crate::bell::{mode_transformation_check, ChshObservables};
use crate::correlations::Observables;
use crate::hilbert::HilbertSpec;
use crate::lindblad::{liouvillian, steady_state};
use crate::model::{build_hamiltonian, collapse_operators, ModelParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, result: crate::Result<(bool, String)>) -> Check {
    match result {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: e.to_string() },
    }
}

/// Deterministic quasi-random angles in `[-pi, pi)`.
fn angles(n: usize) -> impl Iterator<Item = (f64, f64)> {
    let tau = 2.0 * std::f64::consts::PI;
    (1..=n).map(move |k| {
        let a = (k as f64 * 0.618_033_988_749_895).fract();
        let b = (k as f64 * 0.754_877_666_246_693).fract();
        (tau * a - std::f64::consts::PI, tau * b - std::f64::consts::PI)
    })
}

pub fn self_checks() -> Vec<Check> {
    let mut out = Vec::new();

    out.push(check("beam-splitter sum and difference identities", (|| {
        let mut worst = 0.0f64;
        for (t, p) in angles(10).chain([(0.0, 0.0), (std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_8)]) {
            worst = worst.max(mode_transformation_check(t, p)?.max_error());
        }
        Ok((worst <= 1e-13, format!("max deviation {worst:.2e}")))
    })()));

    out.push(check("steady state stationary and physical", (|| {
        let h = HilbertSpec::two_mode(4)?;
        let p = ModelParams::default();
        let l = liouvillian(&build_hamiltonian(&p, &h)?, &collapse_operators(&p, &h)?)?;
        let rho = steady_state(&l)?;
        let res = l.residual_norm(rho.matrix());
        let tr = (rho.trace() - 1.0).norm();
        let ok = res < 1e-10 && tr < 1e-9 && rho.min_eigenvalue() > -1e-8;
        Ok((ok, format!("residual {res:.2e}, trace error {tr:.2e}")))
    })()));

    out.push(check("CHSH angle sum equals closed form", (|| {
        let h = HilbertSpec::two_mode(4)?;
        let p = ModelParams::symmetric(0.5, 1.0, 0.5).with_drives(0.1, 0.01);
        let rho = master_steady_state(&p, &h)?;
        let t = ChshObservables::new(&h)?.tensor(&rho)?;
        let d = (t.chsh(&Default::default())? - t.chsh_closed_form()?).abs();
        Ok((d <= 1e-10, format!("difference {d:.2e}")))
    })()));

    out.push(check("harmonic limit of the perturbative solution", (|| {
        let mut worst = 0.0f64;
        for (a, b) in angles(10) {
            let p = ModelParams::symmetric(a, 0.0, 0.1 + b.abs()).with_phase(a + b);
            let g = analytic_g2(&p)?;
            let c = amplitudes(&p)?.csi()?;
            for v in [g.g2_a1.unwrap_or(f64::NAN), g.g2_a2.unwrap_or(f64::NAN), c] {
                worst = worst.max((v - 1.0).abs());
            }
        }
        Ok((worst <= 1e-9, format!("max |g2 - 1| {worst:.2e}")))
    })()));

    out.push(check("single driven Kerr cavity", (|| {
        let p = ModelParams { j_hop: 0.0, ..ModelParams::symmetric(1.0, 1.0, 0.0) }.with_drives(0.01, 0.0);
        let exact = 0.2;
        let a = analytic_g2(&p)?.g2_a1.unwrap_or(f64::NAN);
        let h = HilbertSpec::two_mode(4)?;
        let rho = master_steady_state(&p, &h)?;
        let m = Observables::new(&h)?.g2_auto(&rho, 0)?;
        let ok = (a - exact).abs() < 1e-12 && (m - exact).abs() < 0.02 * exact;
        Ok((ok, format!("analytic {a:.6}, master {m:.6}, exact {exact}")))
    })()));

    out
}
