use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{HilbertSpec, C64};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalues below this are a hard error; values between it and zero are
/// truncation noise.
pub const POSITIVITY_TOL: f64 = -1e-8;

/// Validated density matrix: Hermitian, unit trace, positive semidefinite
/// within the crate tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidState(format!("not square: {}x{}", m.nrows(), m.ncols())));
        }
        let herm = hermiticity_error(&m);
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("hermiticity error {herm:.3e}")));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min_eig = min_eigenvalue(&m);
        if min_eig < POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { m })
    }

    /// `|psi><psi|` for the normalized ket.
    pub fn from_ket(ket: &DVector<C64>) -> Result<Self> {
        let norm = ket.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let psi = ket / C64::new(norm, 0.0);
        Ok(Self { m: &psi * psi.adjoint() })
    }

    pub fn fock(spec: &HilbertSpec, occupations: &[usize]) -> Result<Self> {
        Self::from_ket(&spec.fock_ket(occupations)?)
    }

    /// Product of truncated coherent states, one amplitude per mode,
    /// renormalized after truncation.
    pub fn coherent(spec: &HilbertSpec, alphas: &[C64]) -> Result<Self> {
        if alphas.len() != spec.num_modes() {
            return Err(Error::DimensionMismatch { expected: spec.num_modes(), actual: alphas.len() });
        }
        let mut ket = DVector::from_element(1, C64::new(1.0, 0.0));
        for (&alpha, &d) in alphas.iter().zip(spec.mode_dims()) {
            let mut v = DVector::zeros(d);
            let mut coeff = C64::new(1.0, 0.0);
            for n in 0..d {
                if n > 0 {
                    coeff *= alpha / (n as f64).sqrt();
                }
                v[n] = coeff;
            }
            ket = ket.kronecker(&v);
        }
        Self::from_ket(&ket)
    }

    /// Maximally mixed state.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { m: DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.m)
    }

    /// Eigenvalues with roundoff-level negatives clamped to zero. Reporting
    /// only; the stored matrix is untouched.
    pub fn clamped_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(&self.m))
            .eigenvalues
            .iter()
            .map(|&x| x.max(0.0))
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m.iter().zip(other.m.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let d = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..d {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub(crate) fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
