//! Weak-drive perturbative solution of the two-mode steady state.
//!
//! The wavefunction is truncated at two excitations with `c00 = 1`; the
//! single-excitation amplitudes follow in closed form and the two-excitation
//! amplitudes from one 3x3 complex linear solve. The resulting correlators
//! serve as an oracle for the master-equation numerics.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::C64;
use crate::model::ModelParams;

/// Single-excitation amplitudes below this are treated as vanishing.
pub const AMPLITUDE_THRESHOLD: f64 = 1e-12;
const TWO_PHOTON_THRESHOLD: f64 = 1e-15;
const MANIFOLD_THRESHOLD: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    pub c00: C64,
    pub c10: C64,
    pub c01: C64,
    pub c11: C64,
    pub c20: C64,
    pub c02: C64,
}

/// Perturbative correlators; `None` where a normalizing amplitude vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticG2 {
    pub g2_a1: Option<f64>,
    pub g2_a2: Option<f64>,
    pub g2_cross: Option<f64>,
}

/// Cross term of the amplitude CHSH expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChshForm {
    /// `4 Re(c20* c02)`, the form that follows from the normal-ordered correlators.
    #[default]
    PhaseAware,
    /// `4 |c20| |c02|`, for comparison with contour plots drawn from the modulus form.
    Modulus,
}

/// Complex detuning `Delta_j - i kappa_j / 2`.
fn shifted(p: &ModelParams) -> (C64, C64) {
    (C64::new(p.delta1, -0.5 * p.kappa1), C64::new(p.delta2, -0.5 * p.kappa2))
}

pub fn single_excitation_amplitudes(p: &ModelParams) -> Result<(C64, C64)> {
    let (d1, d2) = shifted(p);
    let (e1, e2) = (p.drive(0), p.drive(1));
    let j = C64::new(p.j_hop, 0.0);
    let a1 = d1 - p.u1;
    let a2 = d2 - p.u2;
    let den = a1 * a2 - j * j;
    if den.norm() < 1e-300 {
        return Err(Error::Singular("single-excitation denominator vanishes".into()));
    }
    let c10 = (j * e2 - e1 * a2) / den;
    let c01 = (j * e1 - e2 * a1) / den;
    Ok((c10, c01))
}

/// Returns `(c20, c02, c11)`.
pub fn two_excitation_amplitudes(p: &ModelParams, c10: C64, c01: C64) -> Result<(C64, C64, C64)> {
    let (d1, d2) = shifted(p);
    let (e1, e2) = (p.drive(0), p.drive(1));
    let s2 = std::f64::consts::SQRT_2;
    let sj = C64::new(s2 * p.j_hop, 0.0);
    let zero = C64::new(0.0, 0.0);
    let m = Matrix3::new(
        (d1 - 2.0 * p.u1) * 2.0, zero, sj,
        zero, (d2 - 2.0 * p.u2) * 2.0, sj,
        sj, sj, d1 + d2 - p.u1 - p.u2,
    );
    let rhs = -Vector3::new(e1 * c10 * s2, e2 * c01 * s2, e1 * c01 + e2 * c10);
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let lu = m.lu();
    let det = lu.determinant();
    if det.norm() <= 1e-14 * scale.powi(3) {
        return Err(Error::Singular(format!(
            "two-excitation coefficient matrix has determinant {det:.3e}"
        )));
    }
    let x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("two-excitation coefficient matrix is singular".into()))?;
    Ok((x[0], x[1], x[2]))
}

pub fn amplitudes(p: &ModelParams) -> Result<AmplitudeSet> {
    let (c10, c01) = single_excitation_amplitudes(p)?;
    let (c20, c02, c11) = two_excitation_amplitudes(p, c10, c01)?;
    Ok(AmplitudeSet { c00: C64::new(1.0, 0.0), c10, c01, c11, c20, c02 })
}

impl AmplitudeSet {
    pub fn g2(&self) -> AnalyticG2 {
        let p10 = self.c10.norm_sqr();
        let p01 = self.c01.norm_sqr();
        let ok10 = self.c10.norm() > AMPLITUDE_THRESHOLD;
        let ok01 = self.c01.norm() > AMPLITUDE_THRESHOLD;
        AnalyticG2 {
            g2_a1: ok10.then(|| 2.0 * self.c20.norm_sqr() / (p10 * p10)),
            g2_a2: ok01.then(|| 2.0 * self.c02.norm_sqr() / (p01 * p01)),
            g2_cross: (ok10 && ok01).then(|| self.c11.norm_sqr() / (p10 * p01)),
        }
    }

    pub fn csi(&self) -> Result<f64> {
        let (a, b) = (self.c20.norm(), self.c02.norm());
        if a <= TWO_PHOTON_THRESHOLD || b <= TWO_PHOTON_THRESHOLD {
            return Err(Error::UndefinedCorrelation(
                "two-photon amplitude vanishes; witness undefined".into(),
            ));
        }
        Ok(self.c11.norm_sqr() / (2.0 * a * b))
    }

    pub fn chsh(&self, form: ChshForm) -> Result<f64> {
        let (p20, p02, p11) = (self.c20.norm_sqr(), self.c02.norm_sqr(), self.c11.norm_sqr());
        let norm = p20 + p02 + p11;
        if norm <= MANIFOLD_THRESHOLD {
            return Err(Error::UndefinedCorrelation("two-photon manifold is empty".into()));
        }
        let cross = match form {
            ChshForm::PhaseAware => (self.c20.conj() * self.c02).re,
            ChshForm::Modulus => self.c20.norm() * self.c02.norm(),
        };
        let num = 2.0 * p20 + 2.0 * p02 - 4.0 * cross - 4.0 * p11;
        Ok(num.abs() / (std::f64::consts::SQRT_2 * norm))
    }
}

pub fn analytic_g2(p: &ModelParams) -> Result<AnalyticG2> {
    Ok(amplitudes(p)?.g2())
}

pub fn analytic_csi(p: &ModelParams) -> Result<f64> {
    amplitudes(p)?.csi()
}

pub fn analytic_chsh(p: &ModelParams) -> Result<f64> {
    analytic_chsh_with(p, ChshForm::PhaseAware)
}

pub fn analytic_chsh_with(p: &ModelParams, form: ChshForm) -> Result<f64> {
    amplitudes(p)?.chsh(form)
}

/// Complex residual whose zero marks the optimal blockade point.
pub fn blockade_condition_residual(p: &ModelParams) -> Result<C64> {
    if p.j_hop == 0.0 {
        return Err(Error::InvalidParameter {
            field: "j_hop".into(),
            reason: "blockade condition needs nonzero hopping".into(),
        });
    }
    let f1 = C64::new(p.delta1 - 2.0 * p.u1, -0.5 * p.kappa1);
    let f2 = C64::new(p.delta1 + p.delta2 - p.u1 - p.u2, -0.5 * (p.kappa1 + p.kappa2));
    let f3 = C64::new(p.delta2 - p.u2, -0.5 * p.kappa2);
    Ok(f1 * f2 - f3 * (p.e1 * p.e1 / (p.j_hop * p.j_hop)))
}
