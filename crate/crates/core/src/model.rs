//! Hamiltonians and dissipation channels of two coupled driven Kerr cavities.
//!
//! All rates are in units of the optical decay rate of the first cavity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{embed, mode_destroy, number, HilbertSpec, Operator, C64};

/// Physical parameters of the coupled system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    pub delta1: f64,
    pub delta2: f64,
    pub u1: f64,
    pub u2: f64,
    pub j_hop: f64,
    pub e1: f64,
    pub e2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub gamma: f64,
    pub n_th: f64,
    pub omega_m: f64,
    pub g_om: f64,
    pub include_mechanics: bool,
}

impl Default for ModelParams {
    /// Weak asymmetric drives, good-cavity mechanics with Q = 10^6 and the
    /// unconventional-blockade regime J = 1.5, U = 0.09 (g = 3, wm = 100).
    fn default() -> Self {
        let omega_m = 100.0;
        Self {
            delta1: 0.0,
            delta2: 0.0,
            u1: 0.09,
            u2: 0.09,
            j_hop: 1.5,
            e1: 0.1,
            e2: 0.01,
            theta1: 0.0,
            theta2: 0.0,
            kappa1: 1.0,
            kappa2: 1.0,
            gamma: omega_m / 1e6,
            n_th: 0.0,
            omega_m,
            g_om: 3.0,
            include_mechanics: false,
        }
    }
}

impl ModelParams {
    /// Identical cavities at common detuning `delta` with Kerr `u` and hopping `j`.
    pub fn symmetric(delta: f64, u: f64, j: f64) -> Self {
        Self { delta1: delta, delta2: delta, u1: u, u2: u, j_hop: j, ..Self::default() }
    }

    pub fn with_detuning(mut self, delta: f64) -> Self {
        self.delta1 = delta;
        self.delta2 = delta;
        self
    }

    pub fn with_kerr(mut self, u: f64) -> Self {
        self.u1 = u;
        self.u2 = u;
        self
    }

    pub fn with_drives(mut self, e1: f64, e2: f64) -> Self {
        self.e1 = e1;
        self.e2 = e2;
        self
    }

    /// Relative drive phase `theta1 - theta2`, carried on the first drive.
    pub fn with_phase(mut self, theta: f64) -> Self {
        self.theta1 = theta;
        self.theta2 = 0.0;
        self
    }

    /// Mirror image: cavity 1 and cavity 2 exchange every parameter.
    pub fn swapped(&self) -> Self {
        Self {
            delta1: self.delta2,
            delta2: self.delta1,
            u1: self.u2,
            u2: self.u1,
            e1: self.e2,
            e2: self.e1,
            theta1: self.theta2,
            theta2: self.theta1,
            kappa1: self.kappa2,
            kappa2: self.kappa1,
            ..*self
        }
    }

    /// Complex drive amplitude `E_j e^{i theta_j}`.
    pub fn drive(&self, mode: usize) -> C64 {
        match mode {
            0 => Complex64::from_polar(self.e1, self.theta1),
            _ => Complex64::from_polar(self.e2, self.theta2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("u1", self.u1),
            ("u2", self.u2),
            ("j_hop", self.j_hop),
            ("e1", self.e1),
            ("e2", self.e2),
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("gamma", self.gamma),
            ("n_th", self.n_th),
            ("omega_m", self.omega_m),
            ("g_om", self.g_om),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if self.kappa1 <= 0.0 {
            return Err(invalid("kappa1", "must be > 0"));
        }
        if self.kappa2 <= 0.0 {
            return Err(invalid("kappa2", "must be > 0"));
        }
        if self.gamma < 0.0 {
            return Err(invalid("gamma", "must be >= 0"));
        }
        if self.n_th < 0.0 {
            return Err(invalid("n_th", "must be >= 0"));
        }
        if self.include_mechanics && self.omega_m <= self.g_om {
            return Err(invalid("omega_m", "must exceed g_om for the lab-frame model"));
        }
        Ok(())
    }
}

fn invalid(field: &str, reason: &str) -> Error {
    Error::InvalidParameter { field: field.into(), reason: reason.into() }
}

/// Kerr coefficient obtained from the displacement transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrCoefficient {
    pub u: f64,
    /// False when `omega_m <= g`, outside the weak-coupling regime.
    pub valid: bool,
}

/// `U = g^2 / omega_m`.
pub fn effective_kerr_u(g_om: f64, omega_m: f64) -> Result<KerrCoefficient> {
    if !(omega_m > 0.0) {
        return Err(invalid("omega_m", "must be > 0"));
    }
    let valid = omega_m > g_om.abs();
    if !valid {
        log::warn!("omega_m = {omega_m} <= g = {g_om}: effective Kerr model outside its validity range");
    }
    Ok(KerrCoefficient { u: g_om * g_om / omega_m, valid })
}

/// `|E| = sqrt(P kappa / omega_L)`.
pub fn drive_amplitude_from_power(power: f64, kappa: f64, omega_laser: f64) -> Result<f64> {
    if !(power > 0.0) {
        return Err(invalid("power", "must be > 0"));
    }
    if !(kappa > 0.0) {
        return Err(invalid("kappa", "must be > 0"));
    }
    if !(omega_laser > 0.0) {
        return Err(invalid("omega_laser", "must be > 0"));
    }
    Ok((power * kappa / omega_laser).sqrt())
}

/// Bose-Einstein occupation for `hbar omega / (k_B T)`.
pub fn thermal_occupation(energy_over_kt: f64) -> f64 {
    1.0 / energy_over_kt.exp_m1()
}

fn require_modes(spec: &HilbertSpec, n: usize) -> Result<()> {
    if spec.num_modes() != n {
        return Err(Error::InvalidDimension(format!(
            "expected {n} modes, spec has {}",
            spec.num_modes()
        )));
    }
    Ok(())
}

/// Optical part shared by both builders: detunings, Kerr terms with the
/// given coefficients, coherent drives and hopping.
fn optical_terms(p: &ModelParams, spec: &HilbertSpec, kerr: [f64; 2]) -> Result<Operator> {
    let dim = spec.total_dim();
    let a = [mode_destroy(spec, 0)?, mode_destroy(spec, 1)?];
    let n = [
        embed(&number(spec.mode_dims()[0])?, 0, spec)?,
        embed(&number(spec.mode_dims()[1])?, 1, spec)?,
    ];
    let detunings = [p.delta1, p.delta2];
    let mut h = Operator::zeros(dim);
    for j in 0..2 {
        let n2 = &n[j] * &n[j];
        h = &h + &n[j].scale_re(detunings[j]);
        h = &h - &n2.scale_re(kerr[j]);
        let e = p.drive(j);
        h = &h + &a[j].dag().scale(e);
        h = &h + &a[j].scale(e.conj());
    }
    let hop = &(&a[0].dag() * &a[1]) + &(&a[1].dag() * &a[0]);
    h = &h + &hop.scale_re(p.j_hop);
    Ok(h)
}

/// Effective two-mode Kerr Hamiltonian with `-U (a^dagger a)^2` exactly.
pub fn build_effective_hamiltonian(params: &ModelParams, spec: &HilbertSpec) -> Result<Operator> {
    require_modes(spec, 2)?;
    optical_terms(params, spec, [params.u1, params.u2])
}

/// Rotating-frame Hamiltonian with explicit mechanical modes and linear
/// radiation-pressure coupling `-g n_j (b_j^dagger + b_j)`.
pub fn build_lab_hamiltonian(params: &ModelParams, spec: &HilbertSpec) -> Result<Operator> {
    require_modes(spec, 4)?;
    if !params.include_mechanics {
        return Err(invalid("include_mechanics", "must be set for the lab-frame model"));
    }
    let mut h = optical_terms(params, spec, [0.0, 0.0])?;
    for j in 0..2 {
        let b = mode_destroy(spec, 2 + j)?;
        let n_opt = embed(&number(spec.mode_dims()[j])?, j, spec)?;
        h = &h + &(&b.dag() * &b).scale_re(params.omega_m);
        let x = &b.dag() + &b;
        h = &h - &(&n_opt * &x).scale_re(params.g_om);
    }
    Ok(h)
}

/// Dispatch on `include_mechanics`.
pub fn build_hamiltonian(params: &ModelParams, spec: &HilbertSpec) -> Result<Operator> {
    if params.include_mechanics {
        build_lab_hamiltonian(params, spec)
    } else {
        build_effective_hamiltonian(params, spec)
    }
}

/// Jump operators with their rates. Zero-rate channels are dropped.
pub fn collapse_operators(params: &ModelParams, spec: &HilbertSpec) -> Result<Vec<(Operator, f64)>> {
    params.validate()?;
    let mut out = vec![
        (mode_destroy(spec, 0)?, params.kappa1),
        (mode_destroy(spec, 1)?, params.kappa2),
    ];
    if params.include_mechanics {
        require_modes(spec, 4)?;
        for j in 0..2 {
            let b = mode_destroy(spec, 2 + j)?;
            let cooling = (params.n_th + 1.0) * params.gamma;
            let heating = params.n_th * params.gamma;
            if cooling > 0.0 {
                out.push((b.clone(), cooling));
            }
            if heating > 0.0 {
                out.push((b.dag(), heating));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn elem(h: &Operator, spec: &HilbertSpec, bra: &[usize], ket: &[usize]) -> C64 {
        let b: DVector<C64> = spec.fock_ket(bra).unwrap();
        let k = spec.fock_ket(ket).unwrap();
        (b.adjoint() * h.matrix() * k)[(0, 0)]
    }

    #[test]
    fn kerr_from_coupling() {
        assert!((effective_kerr_u(3.0, 100.0).unwrap().u - 0.09).abs() < 1e-15);
        assert!((effective_kerr_u(10.0, 100.0).unwrap().u - 1.0).abs() < 1e-15);
        assert_eq!(effective_kerr_u(0.0, 100.0).unwrap().u, 0.0);
        assert!(!effective_kerr_u(200.0, 100.0).unwrap().valid);
        assert!(effective_kerr_u(1.0, 0.0).is_err());
    }

    #[test]
    fn drive_from_power() {
        assert!((drive_amplitude_from_power(1e-300, 1.0, 1.0).unwrap()).abs() < 1e-149);
        assert!((drive_amplitude_from_power(5.0, 1.0, 5.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((drive_amplitude_from_power(20.0, 1.0, 5.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(drive_amplitude_from_power(0.0, 1.0, 1.0).is_err());
        assert!(drive_amplitude_from_power(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn effective_matrix_elements() {
        let spec = HilbertSpec::two_mode(4).unwrap();
        let p = ModelParams { delta1: 0.7, u1: 0.3, j_hop: 1.25, ..ModelParams::default() };
        let h = build_effective_hamiltonian(&p, &spec).unwrap();
        assert!((elem(&h, &spec, &[1, 0], &[1, 0]) - C64::new(0.7 - 0.3, 0.0)).norm() < 1e-14);
        assert!((elem(&h, &spec, &[2, 0], &[2, 0]) - C64::new(1.4 - 1.2, 0.0)).norm() < 1e-14);
        assert!((elem(&h, &spec, &[1, 0], &[0, 1]) - C64::new(1.25, 0.0)).norm() < 1e-14);
        assert!(h.hermiticity_error() < 1e-13);
    }

    #[test]
    fn drive_phase_enters_creation_term() {
        let spec = HilbertSpec::two_mode(3).unwrap();
        let p = ModelParams::default().with_phase(0.4);
        let h = build_effective_hamiltonian(&p, &spec).unwrap();
        let want = Complex64::from_polar(0.1, 0.4);
        assert!((elem(&h, &spec, &[1, 0], &[0, 0]) - want).norm() < 1e-15);
    }

    #[test]
    fn effective_builder_needs_two_modes() {
        let spec = HilbertSpec::optomechanical(3, 2).unwrap();
        assert!(build_effective_hamiltonian(&ModelParams::default(), &spec).is_err());
    }

    #[test]
    fn lab_hamiltonian_diagonal_and_hermiticity() {
        let spec = HilbertSpec::optomechanical(3, 3).unwrap();
        let p = ModelParams {
            delta1: 0.3,
            delta2: -0.2,
            e1: 0.0,
            e2: 0.0,
            j_hop: 0.0,
            g_om: 0.0,
            include_mechanics: true,
            ..ModelParams::default()
        };
        let h = build_lab_hamiltonian(&p, &spec).unwrap();
        for occ in [[1, 2, 0, 1], [2, 0, 2, 2], [0, 0, 0, 0]] {
            let want = 0.3 * occ[0] as f64 - 0.2 * occ[1] as f64 + 100.0 * (occ[2] + occ[3]) as f64;
            assert!((elem(&h, &spec, &occ, &occ).re - want).abs() < 1e-12);
        }
        let coupled = ModelParams { g_om: 10.0, e1: 0.1, j_hop: 0.75, ..p };
        assert!(build_lab_hamiltonian(&coupled, &spec).unwrap().hermiticity_error() < 1e-13);
        let no_flag = ModelParams { include_mechanics: false, ..p };
        assert!(build_lab_hamiltonian(&no_flag, &spec).is_err());
    }

    #[test]
    fn lab_g_zero_optical_block_matches_effective_without_kerr() {
        let lab_spec = HilbertSpec::optomechanical(3, 2).unwrap();
        let opt_spec = HilbertSpec::two_mode(3).unwrap();
        let p = ModelParams { g_om: 0.0, include_mechanics: true, ..ModelParams::symmetric(0.4, 0.0, 0.8) };
        let lab = build_lab_hamiltonian(&p, &lab_spec).unwrap();
        let eff = build_effective_hamiltonian(&p, &opt_spec).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let a = elem(&lab, &lab_spec, &[i, j, 0, 0], &[k, l, 0, 0]);
                        let b = elem(&eff, &opt_spec, &[i, j], &[k, l]);
                        assert!((a - b).norm() < 1e-14);
                    }
                }
            }
        }
        // no coupling between phonon sectors
        assert!(elem(&lab, &lab_spec, &[1, 0, 1, 0], &[1, 0, 0, 0]).norm() == 0.0);
    }

    #[test]
    fn normal_mode_splitting() {
        let spec = HilbertSpec::two_mode(3).unwrap();
        let p = ModelParams::symmetric(0.5, 0.2, 0.8).with_drives(0.0, 0.0);
        let h = build_effective_hamiltonian(&p, &spec).unwrap();
        // single-excitation block spanned by |10>, |01>
        let idx = [spec.fock_index(&[1, 0]).unwrap(), spec.fock_index(&[0, 1]).unwrap()];
        let block = nalgebra::Matrix2::from_fn(|r, c| h.matrix()[(idx[r], idx[c])]);
        let eig = nalgebra::SymmetricEigen::new(block).eigenvalues;
        let mut e: Vec<f64> = eig.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        // level n = 1 sits at delta - u, split by +/- J
        assert!((e[0] - (0.3 - 0.8)).abs() < 1e-12);
        assert!((e[1] - (0.3 + 0.8)).abs() < 1e-12);
    }

    #[test]
    fn collapse_channels() {
        let spec = HilbertSpec::two_mode(3).unwrap();
        let c = collapse_operators(&ModelParams::default(), &spec).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 1.0);
        assert_eq!(c[1].1, 1.0);
        assert_eq!(c[0].0, mode_destroy(&spec, 0).unwrap());

        let lab = HilbertSpec::optomechanical(3, 2).unwrap();
        let cold = ModelParams { include_mechanics: true, ..ModelParams::default() };
        assert_eq!(collapse_operators(&cold, &lab).unwrap().len(), 4);
        let warm = ModelParams { n_th: 1.0, gamma: 1e-4, include_mechanics: true, ..ModelParams::default() };
        let ops = collapse_operators(&warm, &lab).unwrap();
        assert_eq!(ops.len(), 6);
        assert!((ops[2].1 - 2e-4).abs() < 1e-18);
        assert!((ops[3].1 - 1e-4).abs() < 1e-18);
        assert_eq!(ops[3].0, mode_destroy(&lab, 2).unwrap().dag());
    }

    #[test]
    fn validation_names_field() {
        let bad = ModelParams { kappa2: -1.0, ..ModelParams::default() };
        match bad.validate() {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "kappa2"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = ModelParams { g_om: 200.0, include_mechanics: true, ..ModelParams::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn bose_factor() {
        assert!((thermal_occupation(2f64.ln()) - 1.0).abs() < 1e-14);
    }
}
