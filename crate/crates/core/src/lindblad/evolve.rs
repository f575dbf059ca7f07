use nalgebra::DMatrix;

use super::density::{hermiticity_error, DensityMatrix, HERMITICITY_TOL, TRACE_TOL};
use super::Superoperator;
use crate::error::{Error, Result};
use crate::hilbert::C64;

/// Integrator settings for [`evolve`] and [`propagate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Fixed step, or the largest step when `adaptive_tol` is set.
    pub dt: f64,
    /// Per-step error tolerance for step-doubling control.
    pub adaptive_tol: Option<f64>,
    /// Smallest step the adaptive controller may take.
    pub min_dt: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { dt: 0.01, adaptive_tol: None, min_dt: 1e-10 }
    }
}

impl EvolveOptions {
    pub fn adaptive(tol: f64) -> Self {
        Self { adaptive_tol: Some(tol), ..Self::default() }
    }
}

fn rk4_step(l: &Superoperator, x: &DMatrix<C64>, h: f64) -> DMatrix<C64> {
    let half = C64::new(0.5 * h, 0.0);
    let k1 = l.apply(x);
    let k2 = l.apply(&(x + &k1 * half));
    let k3 = l.apply(&(x + &k2 * half));
    let k4 = l.apply(&(x + &k3 * C64::new(h, 0.0)));
    x + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0)
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        None => return Err(Error::Integration("empty time grid".into())),
        Some(&t0) if t0 != 0.0 => {
            return Err(Error::Integration(format!("time grid must start at 0, got {t0}")))
        }
        _ => {}
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Integration("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Integrate `dx/dt = L(x)` for an arbitrary operator `x` and return `x(t)`
/// at every grid time. No state invariants are imposed, so the conditioned
/// operators of the regression theorem can be propagated as well.
pub fn propagate(
    x0: &DMatrix<C64>,
    l: &Superoperator,
    t_grid: &[f64],
    opts: &EvolveOptions,
) -> Result<Vec<DMatrix<C64>>> {
    check_grid(t_grid)?;
    if x0.nrows() != l.dim() || x0.ncols() != l.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), actual: x0.nrows() });
    }
    if !(opts.dt > 0.0) {
        return Err(Error::Integration(format!("dt must be > 0, got {}", opts.dt)));
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut x = x0.clone();
    out.push(x.clone());
    let mut h = opts.dt;
    for w in t_grid.windows(2) {
        let span = w[1] - w[0];
        match opts.adaptive_tol {
            None => {
                let steps = (span / opts.dt - 1e-9).ceil().max(1.0) as usize;
                let step = span / steps as f64;
                for _ in 0..steps {
                    x = rk4_step(l, &x, step);
                }
            }
            Some(tol) => {
                let mut t = 0.0;
                while t < span {
                    let step = h.min(span - t);
                    let full = rk4_step(l, &x, step);
                    let halves = rk4_step(l, &rk4_step(l, &x, 0.5 * step), 0.5 * step);
                    let err = max_abs(&(&full - &halves));
                    if err > tol {
                        h = 0.5 * step;
                        if h < opts.min_dt {
                            return Err(Error::Integration(format!(
                                "step size underflow at t = {:.6} (error {err:.3e})",
                                w[0] + t
                            )));
                        }
                        continue;
                    }
                    x = halves;
                    t += step;
                    if err < tol / 32.0 {
                        h = (2.0 * step).min(opts.dt);
                    }
                }
            }
        }
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Integration(format!("non-finite state at t = {}", w[1])));
        }
        out.push(x.clone());
    }
    Ok(out)
}

/// Time evolution of a density matrix. Every snapshot is checked against
/// the [`DensityMatrix`] invariants; a breach aborts with the offending time.
pub fn evolve(
    rho0: &DensityMatrix,
    l: &Superoperator,
    t_grid: &[f64],
    opts: &EvolveOptions,
) -> Result<Vec<DensityMatrix>> {
    let raw = propagate(rho0.matrix(), l, t_grid, opts)?;
    raw.into_iter()
        .zip(t_grid)
        .map(|(m, &t)| {
            let tr = m.trace();
            if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
                return Err(Error::Integration(format!("trace drifted to {tr} at t = {t}")));
            }
            let herm = hermiticity_error(&m);
            if herm > HERMITICITY_TOL {
                return Err(Error::Integration(format!("hermiticity error {herm:.3e} at t = {t}")));
            }
            DensityMatrix::new(m).map_err(|e| Error::Integration(format!("at t = {t}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{destroy, number, HilbertSpec, Operator};
    use crate::lindblad::liouvillian;

    #[test]
    fn single_photon_decays_exponentially() {
        let spec = HilbertSpec::new(vec![3], vec!["a1".into()]).unwrap();
        let l = liouvillian(&Operator::zeros(3), &[(destroy(3).unwrap(), 1.0)]).unwrap();
        let rho0 = DensityMatrix::fock(&spec, &[1]).unwrap();
        let traj = evolve(&rho0, &l, &[0.0, 0.5, 1.0], &EvolveOptions::default()).unwrap();
        let n = crate::hilbert::expect(&number(3).unwrap(), &traj[2]).unwrap().re;
        assert!((n - (-1.0f64).exp()).abs() < 1e-6, "{n}");
    }

    #[test]
    fn adaptive_matches_fixed_step() {
        let spec = HilbertSpec::new(vec![4], vec!["a1".into()]).unwrap();
        let a = destroy(4).unwrap();
        let h = &(&a + &a.dag()).scale_re(0.3) + &number(4).unwrap().scale_re(0.5);
        let l = liouvillian(&h, &[(a, 1.0)]).unwrap();
        let rho0 = DensityMatrix::fock(&spec, &[2]).unwrap();
        let grid = [0.0, 0.7, 2.0];
        let fixed = evolve(&rho0, &l, &grid, &EvolveOptions::default()).unwrap();
        let adapt = evolve(&rho0, &l, &grid, &EvolveOptions::adaptive(1e-10)).unwrap();
        assert!(fixed[2].max_abs_diff(&adapt[2]) < 1e-8);
    }

    #[test]
    fn closed_trivial_dynamics_is_identity() {
        let spec = HilbertSpec::two_mode(2).unwrap();
        let l = liouvillian(&Operator::zeros(4), &[]).unwrap();
        let rho0 = DensityMatrix::fock(&spec, &[1, 0]).unwrap();
        let traj = evolve(&rho0, &l, &[0.0, 1.0, 3.0], &EvolveOptions::default()).unwrap();
        assert_eq!(traj[2], rho0);
    }

    #[test]
    fn grid_validation() {
        let l = liouvillian(&Operator::zeros(2), &[]).unwrap();
        let rho0 = DensityMatrix::maximally_mixed(2);
        let o = EvolveOptions::default();
        assert!(evolve(&rho0, &l, &[], &o).is_err());
        assert!(evolve(&rho0, &l, &[0.1, 0.2], &o).is_err());
        assert!(evolve(&rho0, &l, &[0.0, 0.2, 0.2], &o).is_err());
    }

    #[test]
    fn step_underflow_is_reported() {
        let a = destroy(2).unwrap();
        let l = liouvillian(&Operator::zeros(2), &[(a, 1.0)]).unwrap();
        let rho0 = DensityMatrix::maximally_mixed(2);
        let opts = EvolveOptions { dt: 0.5, adaptive_tol: Some(1e-300), min_dt: 1e-3 };
        assert!(matches!(evolve(&rho0, &l, &[0.0, 1.0], &opts), Err(Error::Integration(_))));
    }
}
