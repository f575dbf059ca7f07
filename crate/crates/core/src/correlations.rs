//! Photon statistics of two-mode density matrices.
//!
//! Correlations divide by photon numbers; below [`PHOTON_THRESHOLD`] they are
//! reported as undefined instead of returning amplified noise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{expect_matrix, mode_destroy, HilbertSpec, Operator};
use crate::lindblad::{propagate, DensityMatrix, EvolveOptions, Superoperator};

pub const PHOTON_THRESHOLD: f64 = 1e-12;

/// Stationarity required of the input to [`g2_tau`].
pub const STATIONARITY_TOL: f64 = 1e-8;

/// Equal-time statistics of one state. `None` marks an undefined ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub n1: f64,
    pub n2: f64,
    pub g2_a1: Option<f64>,
    pub g2_a2: Option<f64>,
    pub g2_cross: Option<f64>,
    pub csi: Option<f64>,
}

/// Cached ladder-operator products for the optical modes of a spec.
#[derive(Debug, Clone)]
pub struct Observables {
    spec: HilbertSpec,
    lowering: Vec<Operator>,
    number: Vec<Operator>,
    /// `a^dagger a^dagger a a` per mode
    pair: Vec<Operator>,
}

impl Observables {
    /// Operators for the first two modes of `spec`, which must be optical.
    pub fn new(spec: &HilbertSpec) -> Result<Self> {
        if spec.num_modes() < 2 {
            return Err(Error::InvalidDimension("need two optical modes".into()));
        }
        let mut lowering = Vec::new();
        let mut number = Vec::new();
        let mut pair = Vec::new();
        for m in 0..2 {
            let a = mode_destroy(spec, m)?;
            let ad = a.dag();
            number.push(&ad * &a);
            pair.push(&(&ad * &ad) * &(&a * &a));
            lowering.push(a);
        }
        Ok(Self { spec: spec.clone(), lowering, number, pair })
    }

    pub fn spec(&self) -> &HilbertSpec {
        &self.spec
    }

    pub fn lowering(&self, mode: usize) -> Result<&Operator> {
        self.lowering.get(mode).ok_or(Error::ModeOutOfRange { index: mode, modes: 2 })
    }

    pub fn number(&self, mode: usize) -> Result<&Operator> {
        self.number.get(mode).ok_or(Error::ModeOutOfRange { index: mode, modes: 2 })
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.spec.total_dim() {
            return Err(Error::DimensionMismatch { expected: self.spec.total_dim(), actual: rho.dim() });
        }
        Ok(())
    }

    pub fn mean_photon(&self, rho: &DensityMatrix, mode: usize) -> Result<f64> {
        self.check(rho)?;
        Ok(expect_matrix(self.number(mode)?, rho.matrix())?.re)
    }

    fn defined_photon(&self, rho: &DensityMatrix, mode: usize) -> Result<f64> {
        let n = self.mean_photon(rho, mode)?;
        if n <= PHOTON_THRESHOLD {
            return Err(Error::UndefinedCorrelation(format!(
                "mode {mode} photon number {n:.3e} below threshold"
            )));
        }
        Ok(n)
    }

    pub fn g2_auto(&self, rho: &DensityMatrix, mode: usize) -> Result<f64> {
        let n = self.defined_photon(rho, mode)?;
        let num = expect_matrix(&self.pair[mode], rho.matrix())?.re;
        Ok(num / (n * n))
    }

    pub fn g2_cross(&self, rho: &DensityMatrix, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Err(Error::UndefinedCorrelation("cross-correlation needs two distinct modes".into()));
        }
        let ni = self.defined_photon(rho, i)?;
        let nj = self.defined_photon(rho, j)?;
        // a_i^dagger a_j^dagger a_j a_i = n_i n_j for distinct modes
        let joint = &self.number[i] * &self.number[j];
        let num = expect_matrix(&joint, rho.matrix())?.re;
        Ok(num / (ni * nj))
    }

    /// `g2_cross / sqrt(g2_a1 g2_a2)`; values above one violate the classical bound.
    pub fn csi_witness(&self, rho: &DensityMatrix) -> Result<f64> {
        let g1 = self.g2_auto(rho, 0)?;
        let g2 = self.g2_auto(rho, 1)?;
        let gx = self.g2_cross(rho, 0, 1)?;
        csi_ratio(gx, g1, g2)
    }

    /// `<n1 n2> - <n1><n2>`.
    pub fn photon_covariance(&self, rho: &DensityMatrix) -> Result<f64> {
        self.check(rho)?;
        let joint = &self.number[0] * &self.number[1];
        let n12 = expect_matrix(&joint, rho.matrix())?.re;
        Ok(n12 - self.mean_photon(rho, 0)? * self.mean_photon(rho, 1)?)
    }

    pub fn report(&self, rho: &DensityMatrix) -> Result<CorrelationReport> {
        let n1 = self.mean_photon(rho, 0)?;
        let n2 = self.mean_photon(rho, 1)?;
        let g2_a1 = defined(self.g2_auto(rho, 0))?;
        let g2_a2 = defined(self.g2_auto(rho, 1))?;
        let g2_cross = defined(self.g2_cross(rho, 0, 1))?;
        let csi = match (g2_cross, g2_a1, g2_a2) {
            (Some(x), Some(a), Some(b)) => defined(csi_ratio(x, a, b))?,
            _ => None,
        };
        Ok(CorrelationReport { n1, n2, g2_a1, g2_a2, g2_cross, csi })
    }

    /// Delayed autocorrelation from the regression theorem: the conditioned
    /// operator `a rho a^dagger` is propagated with the same Liouvillian and
    /// normalized only at readout.
    pub fn g2_tau(
        &self,
        rho_ss: &DensityMatrix,
        l: &Superoperator,
        mode: usize,
        tau_grid: &[f64],
        opts: &EvolveOptions,
    ) -> Result<Vec<f64>> {
        self.check(rho_ss)?;
        let res = l.residual_norm(rho_ss.matrix());
        if res > STATIONARITY_TOL {
            return Err(Error::NotStationary(res));
        }
        let n = self.defined_photon(rho_ss, mode)?;
        let a = self.lowering(mode)?;
        let conditioned = a.matrix() * rho_ss.matrix() * a.matrix().adjoint();
        let traj = propagate(&conditioned, l, tau_grid, opts)?;
        traj.iter()
            .map(|x| Ok(expect_matrix(&self.number[mode], x)?.re / (n * n)))
            .collect()
    }
}

fn csi_ratio(gx: f64, g1: f64, g2: f64) -> Result<f64> {
    let prod = g1 * g2;
    if !(prod > 0.0) || !prod.is_finite() {
        return Err(Error::UndefinedCorrelation(format!(
            "autocorrelation product {prod:.3e} leaves the witness undefined"
        )));
    }
    Ok(gx / prod.sqrt())
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedCorrelation(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn mean_photon(rho: &DensityMatrix, spec: &HilbertSpec, mode: usize) -> Result<f64> {
    check_mode(spec, mode)?;
    Observables::new(spec)?.mean_photon(rho, mode)
}

pub fn g2_auto(rho: &DensityMatrix, spec: &HilbertSpec, mode: usize) -> Result<f64> {
    check_mode(spec, mode)?;
    Observables::new(spec)?.g2_auto(rho, mode)
}

pub fn g2_cross(rho: &DensityMatrix, spec: &HilbertSpec, i: usize, j: usize) -> Result<f64> {
    check_mode(spec, i)?;
    check_mode(spec, j)?;
    Observables::new(spec)?.g2_cross(rho, i, j)
}

pub fn csi_witness(rho: &DensityMatrix, spec: &HilbertSpec) -> Result<f64> {
    Observables::new(spec)?.csi_witness(rho)
}

pub fn g2_tau(
    rho_ss: &DensityMatrix,
    l: &Superoperator,
    spec: &HilbertSpec,
    mode: usize,
    tau_grid: &[f64],
) -> Result<Vec<f64>> {
    check_mode(spec, mode)?;
    Observables::new(spec)?.g2_tau(rho_ss, l, mode, tau_grid, &EvolveOptions::default())
}

fn check_mode(spec: &HilbertSpec, mode: usize) -> Result<()> {
    if mode >= 2 || mode >= spec.num_modes() {
        return Err(Error::ModeOutOfRange { index: mode, modes: spec.num_modes().min(2) });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::C64;
    use nalgebra::DVector;

    fn spec() -> HilbertSpec {
        HilbertSpec::two_mode(4).unwrap()
    }

    fn bell(spec: &HilbertSpec, a: [usize; 2], b: [usize; 2], sign: f64) -> DensityMatrix {
        let v: DVector<C64> = spec.fock_ket(&a).unwrap() + spec.fock_ket(&b).unwrap() * C64::new(sign, 0.0);
        DensityMatrix::from_ket(&v).unwrap()
    }

    #[test]
    fn photon_numbers() {
        let s = spec();
        let vac = DensityMatrix::fock(&s, &[0, 0]).unwrap();
        assert_eq!(mean_photon(&vac, &s, 0).unwrap(), 0.0);
        let one_one = DensityMatrix::fock(&s, &[1, 1]).unwrap();
        assert!((mean_photon(&one_one, &s, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!((mean_photon(&one_one, &s, 1).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(mean_photon(&vac, &s, 2), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn fock_and_vacuum_autocorrelation() {
        let s = spec();
        let one = DensityMatrix::fock(&s, &[1, 0]).unwrap();
        assert_eq!(g2_auto(&one, &s, 0).unwrap(), 0.0);
        assert!(matches!(g2_auto(&one, &s, 1), Err(Error::UndefinedCorrelation(_))));
    }

    #[test]
    fn coherent_light_is_poissonian() {
        let s = HilbertSpec::two_mode(6).unwrap();
        let rho = DensityMatrix::coherent(&s, &[C64::new(0.1, 0.0), C64::new(0.0, 0.1)]).unwrap();
        assert!((g2_auto(&rho, &s, 0).unwrap() - 1.0).abs() < 1e-3);
        assert!((csi_witness(&rho, &s).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn bell_state_cross_correlations() {
        let s = spec();
        let psi_plus = bell(&s, [0, 1], [1, 0], 1.0);
        assert_eq!(g2_cross(&psi_plus, &s, 0, 1).unwrap(), 0.0);
        let phi_plus = bell(&s, [0, 0], [1, 1], 1.0);
        assert!((g2_cross(&phi_plus, &s, 0, 1).unwrap() - 2.0).abs() < 1e-13);
        let product = DensityMatrix::fock(&s, &[1, 1]).unwrap();
        assert!((g2_cross(&product, &s, 0, 1).unwrap() - 1.0).abs() < 1e-13);
        assert!(g2_cross(&product, &s, 1, 1).is_err());
        assert!(matches!(csi_witness(&phi_plus, &s), Err(Error::UndefinedCorrelation(_))));
    }

    #[test]
    fn report_marks_undefined_entries() {
        let s = spec();
        let obs = Observables::new(&s).unwrap();
        let vac = DensityMatrix::fock(&s, &[0, 0]).unwrap();
        let r = obs.report(&vac).unwrap();
        assert_eq!(r.n1, 0.0);
        assert_eq!((r.g2_a1, r.g2_a2, r.g2_cross, r.csi), (None, None, None, None));
    }
}
