//! Bell-CHSH parameters from density matrices and Bell-state fidelities.
//!
//! Both optical modes are mixed on a beam splitter with polarization angles
//! `Theta` (side A) and `Phi` (side B). Intensity differences of the output
//! ports are quadratic forms in `a1`, `a2`; their normal-ordered products
//! reduce to the two-photon correlation tensor
//! `G[i][k][j][l] = <a_i^dagger a_k^dagger a_j a_l>`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, SQRT_2};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{expect_matrix, mode_destroy, HilbertSpec, Operator, C64};
use crate::lindblad::DensityMatrix;

const MANIFOLD_THRESHOLD: f64 = 1e-15;

/// Polarization angles of the two analyzers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSet {
    pub theta: f64,
    pub theta_prime: f64,
    pub phi: f64,
    pub phi_prime: f64,
}

impl Default for AngleSet {
    fn default() -> Self {
        Self { theta: 0.0, theta_prime: FRAC_PI_4, phi: FRAC_PI_8, phi_prime: 3.0 * FRAC_PI_8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] =
        [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi_plus",
            BellState::PhiMinus => "phi_minus",
            BellState::PsiPlus => "psi_plus",
            BellState::PsiMinus => "psi_minus",
        }
    }

    /// Occupations of the two basis kets and the relative sign.
    fn components(self) -> ([usize; 2], [usize; 2], f64) {
        match self {
            BellState::PhiPlus => ([0, 0], [1, 1], 1.0),
            BellState::PhiMinus => ([0, 0], [1, 1], -1.0),
            BellState::PsiPlus => ([0, 1], [1, 0], 1.0),
            BellState::PsiMinus => ([0, 1], [1, 0], -1.0),
        }
    }

    /// The Bell state in photon numbers 0/1 of the optical modes, all other
    /// modes of `spec` in vacuum.
    pub fn ket(self, spec: &HilbertSpec) -> Result<DVector<C64>> {
        let (a, b, sign) = self.components();
        let pad = |occ: [usize; 2]| {
            let mut v = vec![0; spec.num_modes()];
            v[..2].copy_from_slice(&occ);
            v
        };
        let ka = spec.fock_ket(&pad(a))?;
        let kb = spec.fock_ket(&pad(b))?;
        Ok((ka + kb * C64::new(sign, 0.0)) * C64::new(1.0 / SQRT_2, 0.0))
    }
}

/// 2x2 coefficients of `Theta`'s intensity difference
/// `D cos 2Theta + X sin 2Theta`, with `D = n1 - n2`, `X = a1^dagger a2 + h.c.`.
fn side_a(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (2.0 * theta).sin_cos();
    [[c, s], [s, -c]]
}

/// Side B mixes with the opposite sign: `D cos 2Phi - X sin 2Phi`.
fn side_b(phi: f64) -> [[f64; 2]; 2] {
    let (s, c) = (2.0 * phi).sin_cos();
    [[c, -s], [-s, -c]]
}

/// Normal-ordered two-photon correlation tensor of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTensor {
    g: [[[[C64; 2]; 2]; 2]; 2],
}

impl PairTensor {
    /// `<a_i^dagger a_k^dagger a_j a_l>`
    pub fn get(&self, i: usize, k: usize, j: usize, l: usize) -> C64 {
        self.g[i][k][j][l]
    }

    /// `<:A B:>` for quadratic forms `A = sum m_ij a_i^dagger a_j`, `B = sum n_kl a_k^dagger a_l`.
    fn contract(&self, m: &[[f64; 2]; 2], n: &[[f64; 2]; 2]) -> f64 {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        s += self.g[i][k][j][l] * (m[i][j] * n[k][l]);
                    }
                }
            }
        }
        s.re
    }

    /// `<a1^dag2 a1^2> + <a2^dag2 a2^2> + 2 <a1^dagger a2^dagger a2 a1>`.
    pub fn manifold_norm(&self) -> f64 {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        self.contract(&id, &id)
    }

    fn checked_norm(&self) -> Result<f64> {
        let n = self.manifold_norm();
        if n <= MANIFOLD_THRESHOLD {
            return Err(Error::UndefinedCorrelation(format!(
                "two-photon manifold norm {n:.3e} too small for a CHSH correlator"
            )));
        }
        Ok(n)
    }

    pub fn correlator(&self, theta: f64, phi: f64) -> Result<f64> {
        let n = self.checked_norm()?;
        Ok(self.contract(&side_a(theta), &side_b(phi)) / n)
    }

    pub fn chsh(&self, angles: &AngleSet) -> Result<f64> {
        let e = |t, p| self.correlator(t, p);
        let s = e(angles.theta, angles.phi)? + e(angles.theta_prime, angles.phi_prime)?
            + e(angles.theta_prime, angles.phi)?
            - e(angles.theta, angles.phi_prime)?;
        Ok(s.abs())
    }

    /// The default-angle CHSH value written directly in the mode correlators.
    pub fn chsh_closed_form(&self) -> Result<f64> {
        let n = self.checked_norm()?;
        let g = &self.g;
        let num = g[0][0][0][0] + g[1][1][1][1] - g[0][0][1][1] - g[1][1][0][0] - g[0][1][1][0] * 4.0;
        Ok(SQRT_2 * num.norm() / n)
    }
}

/// Cached quartic ladder products for repeated CHSH evaluations.
#[derive(Debug, Clone)]
pub struct ChshObservables {
    dim: usize,
    ops: Vec<Operator>,
}

impl ChshObservables {
    pub fn new(spec: &HilbertSpec) -> Result<Self> {
        if spec.num_modes() < 2 {
            return Err(Error::InvalidDimension("need two optical modes".into()));
        }
        let a = [mode_destroy(spec, 0)?, mode_destroy(spec, 1)?];
        let ad = [a[0].dag(), a[1].dag()];
        let mut ops = Vec::with_capacity(16);
        for i in 0..2 {
            for k in 0..2 {
                let cre = &ad[i] * &ad[k];
                for j in 0..2 {
                    for l in 0..2 {
                        ops.push(&cre * &(&a[j] * &a[l]));
                    }
                }
            }
        }
        Ok(Self { dim: spec.total_dim(), ops })
    }

    pub fn tensor(&self, rho: &DensityMatrix) -> Result<PairTensor> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: rho.dim() });
        }
        let mut g = [[[[C64::new(0.0, 0.0); 2]; 2]; 2]; 2];
        let mut it = self.ops.iter();
        for gi in g.iter_mut() {
            for gik in gi.iter_mut() {
                for gikj in gik.iter_mut() {
                    for v in gikj.iter_mut() {
                        *v = expect_matrix(it.next().expect("16 operators"), rho.matrix())?;
                    }
                }
            }
        }
        Ok(PairTensor { g })
    }
}

pub fn chsh_correlator(rho: &DensityMatrix, spec: &HilbertSpec, theta: f64, phi: f64) -> Result<f64> {
    ChshObservables::new(spec)?.tensor(rho)?.correlator(theta, phi)
}

pub fn chsh_from_state(rho: &DensityMatrix, spec: &HilbertSpec, angles: &AngleSet) -> Result<f64> {
    ChshObservables::new(spec)?.tensor(rho)?.chsh(angles)
}

pub fn chsh_closed_form(rho: &DensityMatrix, spec: &HilbertSpec) -> Result<f64> {
    ChshObservables::new(spec)?.tensor(rho)?.chsh_closed_form()
}

/// Largest deviations found by [`mode_transformation_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformationReport {
    pub theta: f64,
    pub phi: f64,
    pub sum_rule_a: f64,
    pub sum_rule_b: f64,
    pub difference_a: f64,
    pub difference_b: f64,
}

impl TransformationReport {
    pub fn max_error(&self) -> f64 {
        self.sum_rule_a.max(self.sum_rule_b).max(self.difference_a).max(self.difference_b)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_error() <= tol
    }
}

/// Builds the rotated output modes on a cutoff-3 space and measures how far
/// their photon-number sums and differences are from the mode-space forms.
pub fn mode_transformation_check(theta: f64, phi: f64) -> Result<TransformationReport> {
    let spec = HilbertSpec::two_mode(3)?;
    let a1 = mode_destroy(&spec, 0)?;
    let a2 = mode_destroy(&spec, 1)?;
    let n1 = &a1.dag() * &a1;
    let n2 = &a2.dag() * &a2;
    let d = &n1 - &n2;
    let x = &(&a1.dag() * &a2) + &(&a2.dag() * &a1);
    let total = &n1 + &n2;
    let mix = |c: f64, s: f64| &a1.scale_re(c) + &a2.scale_re(s);
    let count = |op: &Operator| &op.dag() * op;

    let (st, ct) = theta.sin_cos();
    let ap = mix(ct, st);
    let am = mix(-st, ct);
    let (sp, cp) = phi.sin_cos();
    let bp = mix(cp, -sp);
    let bm = mix(sp, cp);

    let (s2t, c2t) = (2.0 * theta).sin_cos();
    let (s2p, c2p) = (2.0 * phi).sin_cos();
    let diff_a = &d.scale_re(c2t) + &x.scale_re(s2t);
    let diff_b = &d.scale_re(c2p) - &x.scale_re(s2p);

    Ok(TransformationReport {
        theta,
        phi,
        sum_rule_a: (&count(&ap) + &count(&am)).max_abs_diff(&total),
        sum_rule_b: (&count(&bp) + &count(&bm)).max_abs_diff(&total),
        difference_a: (&count(&ap) - &count(&am)).max_abs_diff(&diff_a),
        difference_b: (&count(&bp) - &count(&bm)).max_abs_diff(&diff_b),
    })
}

/// Raw overlap `<psi|rho|psi>` with the Bell state; weight outside the
/// 0/1 photon subspace is not renormalized away.
pub fn bell_fidelity(rho: &DensityMatrix, spec: &HilbertSpec, which: BellState) -> Result<f64> {
    if rho.dim() != spec.total_dim() {
        return Err(Error::DimensionMismatch { expected: spec.total_dim(), actual: rho.dim() });
    }
    let psi = which.ket(spec)?;
    let v = psi.adjoint() * rho.matrix() * &psi;
    Ok(v[(0, 0)].re.clamp(0.0, 1.0))
}

/// Population of the two-qubit block, the four kets with optical
/// occupations 0/1 and every other mode in vacuum.
pub fn qubit_subspace_weight(rho: &DensityMatrix, spec: &HilbertSpec) -> Result<f64> {
    let mut w = 0.0;
    for occ in [[0, 0], [0, 1], [1, 0], [1, 1]] {
        let mut full = vec![0; spec.num_modes()];
        full[..2].copy_from_slice(&occ);
        let idx = spec.fock_index(&full)?;
        w += rho.matrix()[(idx, idx)].re;
    }
    Ok(w)
}

/// Fidelity conditioned on the two-qubit block: the raw overlap divided by
/// [`qubit_subspace_weight`]. Undefined if that weight vanishes.
pub fn bell_fidelity_renormalized(rho: &DensityMatrix, spec: &HilbertSpec, which: BellState) -> Result<f64> {
    let w = qubit_subspace_weight(rho, spec)?;
    if w <= 1e-15 {
        return Err(Error::UndefinedCorrelation("no weight in the two-qubit subspace".into()));
    }
    Ok((bell_fidelity(rho, spec, which)? / w).min(1.0))
}
