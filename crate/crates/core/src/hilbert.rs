//! Truncated Fock-space operator algebra.
//!
//! Every operator is a dense complex matrix. Mode ordering follows the
//! [`HilbertSpec`]: the first mode is the most significant index of the
//! Kronecker product, so `|n1, n2>` sits at row `n1 * dim2 + n2`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::DensityMatrix;

pub type C64 = Complex64;

/// Per-mode truncation dimensions and labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpec {
    mode_dims: Vec<usize>,
    mode_labels: Vec<String>,
}

impl HilbertSpec {
    pub fn new(mode_dims: Vec<usize>, mode_labels: Vec<String>) -> Result<Self> {
        if mode_dims.is_empty() {
            return Err(Error::InvalidDimension("no modes".into()));
        }
        if mode_dims.len() != mode_labels.len() {
            return Err(Error::InvalidDimension(format!(
                "{} dims but {} labels",
                mode_dims.len(),
                mode_labels.len()
            )));
        }
        if let Some(d) = mode_dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(format!("mode dimension {d} < 2")));
        }
        Ok(Self { mode_dims, mode_labels })
    }

    /// Two optical modes `a1`, `a2` with the same Fock cutoff.
    pub fn two_mode(cutoff: usize) -> Result<Self> {
        Self::new(vec![cutoff, cutoff], vec!["a1".into(), "a2".into()])
    }

    /// Optical modes `a1`, `a2` followed by mechanical modes `b1`, `b2`.
    pub fn optomechanical(optical_cutoff: usize, phonon_cutoff: usize) -> Result<Self> {
        Self::new(
            vec![optical_cutoff, optical_cutoff, phonon_cutoff, phonon_cutoff],
            vec!["a1".into(), "a2".into(), "b1".into(), "b2".into()],
        )
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn mode_labels(&self) -> &[String] {
        &self.mode_labels
    }

    pub fn num_modes(&self) -> usize {
        self.mode_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.mode_dims.iter().product()
    }

    pub fn mode_index(&self, label: &str) -> Option<usize> {
        self.mode_labels.iter().position(|l| l == label)
    }

    /// Fails unless every optical (`a*`) mode keeps the two-photon level.
    pub fn require_two_photon_levels(&self) -> Result<()> {
        for (d, l) in self.mode_dims.iter().zip(&self.mode_labels) {
            if l.starts_with('a') && *d < 3 {
                return Err(Error::InvalidDimension(format!(
                    "mode {l} has dimension {d}; two-photon correlators need at least 3"
                )));
            }
        }
        Ok(())
    }

    /// Row index of the product Fock state with the given occupations.
    pub fn fock_index(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.mode_dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mode_dims.len(),
                actual: occupations.len(),
            });
        }
        let mut idx = 0;
        for (&n, &d) in occupations.iter().zip(&self.mode_dims) {
            if n >= d {
                return Err(Error::InvalidDimension(format!(
                    "occupation {n} exceeds cutoff {d}"
                )));
            }
            idx = idx * d + n;
        }
        Ok(idx)
    }

    /// Normalized product Fock ket.
    pub fn fock_ket(&self, occupations: &[usize]) -> Result<DVector<C64>> {
        let mut v = DVector::zeros(self.total_dim());
        v[self.fock_index(occupations)?] = C64::new(1.0, 0.0);
        Ok(v)
    }
}

/// Dense square operator on a truncated Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(DMatrix<C64>);

impl Operator {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn dag(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Largest entry of `|H - H^dagger|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, ket: &DVector<C64>) -> DVector<C64> {
        &self.0 * ket
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

/// Bosonic lowering operator truncated to `dim` levels.
pub fn destroy(dim: usize) -> Result<Operator> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!("destroy needs dim >= 2, got {dim}")));
    }
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(Operator(m))
}

pub fn create(dim: usize) -> Result<Operator> {
    Ok(destroy(dim)?.dag())
}

/// `a^dagger a` on a single mode.
pub fn number(dim: usize) -> Result<Operator> {
    let a = destroy(dim)?;
    Ok(&a.dag() * &a)
}

/// Kronecker product in list order.
pub fn tensor(ops: &[Operator]) -> Result<Operator> {
    let (first, rest) = ops.split_first().ok_or(Error::EmptyTensor)?;
    let m = rest
        .iter()
        .fold(first.0.clone(), |acc, op| acc.kronecker(&op.0));
    Ok(Operator(m))
}

/// Lift a single-mode operator into the full space of `spec`.
pub fn embed(op: &Operator, mode_index: usize, spec: &HilbertSpec) -> Result<Operator> {
    let dims = spec.mode_dims();
    if mode_index >= dims.len() {
        return Err(Error::ModeOutOfRange { index: mode_index, modes: dims.len() });
    }
    if op.dim() != dims[mode_index] {
        return Err(Error::DimensionMismatch { expected: dims[mode_index], actual: op.dim() });
    }
    let factors: Vec<Operator> = dims
        .iter()
        .enumerate()
        .map(|(k, &d)| if k == mode_index { op.clone() } else { Operator::identity(d) })
        .collect();
    tensor(&factors)
}

/// Lowering operator of mode `mode_index` on the full space.
pub fn mode_destroy(spec: &HilbertSpec, mode_index: usize) -> Result<Operator> {
    let dims = spec.mode_dims();
    if mode_index >= dims.len() {
        return Err(Error::ModeOutOfRange { index: mode_index, modes: dims.len() });
    }
    embed(&destroy(dims[mode_index])?, mode_index, spec)
}

/// `Tr[op rho]`.
pub fn expect(op: &Operator, rho: &DensityMatrix) -> Result<C64> {
    expect_matrix(op, rho.matrix())
}

pub(crate) fn expect_matrix(op: &Operator, rho: &DMatrix<C64>) -> Result<C64> {
    if op.dim() != rho.nrows() {
        return Err(Error::DimensionMismatch { expected: op.dim(), actual: rho.nrows() });
    }
    // Tr[A B] = sum_ij A_ij B_ji without forming the product.
    let d = op.dim();
    let a = op.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..d {
        for i in 0..d {
            acc += a[(i, j)] * rho[(j, i)];
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn destroy_three_levels() {
        let a = destroy(3).unwrap();
        let s2 = 2f64.sqrt();
        let expected = DMatrix::from_row_slice(
            3,
            3,
            &[c(0.), c(1.), c(0.), c(0.), c(0.), c(s2), c(0.), c(0.), c(0.)],
        );
        assert_eq!(a.matrix(), &expected);
    }

    #[test]
    fn destroy_qubit() {
        let a = destroy(2).unwrap();
        assert_eq!(a.matrix(), &DMatrix::from_row_slice(2, 2, &[c(0.), c(1.), c(0.), c(0.)]));
    }

    #[test]
    fn destroy_lowers_fock_three() {
        let a = destroy(4).unwrap();
        let mut ket = DVector::zeros(4);
        ket[3] = c(1.0);
        let out = a.apply(&ket);
        assert!((out[2] - c(3f64.sqrt())).norm() < 1e-15);
        assert!(out[0].norm() + out[1].norm() + out[3].norm() == 0.0);
    }

    #[test]
    fn destroy_rejects_small_dims() {
        assert!(matches!(destroy(1), Err(Error::InvalidDimension(_))));
        assert!(destroy(0).is_err());
    }

    #[test]
    fn commutator_is_identity_below_cutoff() {
        for dim in 2..8 {
            let a = destroy(dim).unwrap();
            let comm = a.commutator(&a.dag());
            for i in 0..dim - 1 {
                for j in 0..dim - 1 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((comm.matrix()[(i, j)] - c(want)).norm() < 1e-14);
                }
            }
            // truncation artifact at the top level
            assert!((comm.matrix()[(dim - 1, dim - 1)] - c(-(dim as f64 - 1.0))).norm() < 1e-12);
        }
    }

    #[test]
    fn tensor_identities() {
        let i6 = tensor(&[Operator::identity(2), Operator::identity(3)]).unwrap();
        assert_eq!(i6, Operator::identity(6));
        let big = tensor(&[destroy(3).unwrap(), destroy(4).unwrap()]).unwrap();
        assert_eq!(big.dim(), 12);
        assert_eq!(tensor(&[]), Err(Error::EmptyTensor));
    }

    #[test]
    fn tensor_lowers_first_mode() {
        let spec = HilbertSpec::two_mode(2).unwrap();
        let op = tensor(&[destroy(2).unwrap(), Operator::identity(2)]).unwrap();
        let out = op.apply(&spec.fock_ket(&[1, 0]).unwrap());
        assert_eq!(out, spec.fock_ket(&[0, 0]).unwrap());
    }

    #[test]
    fn embed_matches_tensor() {
        let spec = HilbertSpec::two_mode(3).unwrap();
        let a = destroy(3).unwrap();
        let e = embed(&a, 0, &spec).unwrap();
        assert_eq!(e, tensor(&[a.clone(), Operator::identity(3)]).unwrap());
        for k in 0..2 {
            assert_eq!(embed(&Operator::identity(3), k, &spec).unwrap(), Operator::identity(9));
        }
        assert!(matches!(embed(&a, 2, &spec), Err(Error::ModeOutOfRange { .. })));
        assert!(matches!(
            embed(&destroy(4).unwrap(), 0, &spec),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn embedded_number_reads_occupation() {
        let spec = HilbertSpec::two_mode(3).unwrap();
        let n2 = embed(&number(3).unwrap(), 1, &spec).unwrap();
        let ket = spec.fock_ket(&[1, 1]).unwrap();
        let val = (ket.adjoint() * n2.matrix() * &ket)[(0, 0)];
        assert!((val - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn embedded_ops_on_different_modes_commute() {
        let spec = HilbertSpec::new(vec![3, 4, 2], vec!["a1".into(), "a2".into(), "b1".into()])
            .unwrap();
        let x = mode_destroy(&spec, 0).unwrap();
        let y = mode_destroy(&spec, 1).unwrap().dag();
        let z = mode_destroy(&spec, 2).unwrap();
        assert_eq!(x.commutator(&y).max_abs_diff(&Operator::zeros(24)), 0.0);
        assert_eq!(y.commutator(&z).max_abs_diff(&Operator::zeros(24)), 0.0);
    }

    #[test]
    fn expect_basic_values() {
        let n = number(3).unwrap();
        let vac = DensityMatrix::fock(&HilbertSpec::new(vec![3], vec!["a1".into()]).unwrap(), &[0])
            .unwrap();
        let two = DensityMatrix::fock(&HilbertSpec::new(vec![3], vec!["a1".into()]).unwrap(), &[2])
            .unwrap();
        assert!(expect(&n, &vac).unwrap().norm() < 1e-15);
        assert!((expect(&n, &two).unwrap() - c(2.0)).norm() < 1e-14);
        assert!((expect(&Operator::identity(3), &two).unwrap() - c(1.0)).norm() < 1e-14);
        assert!(matches!(
            expect(&Operator::identity(4), &two),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(HilbertSpec::new(vec![1, 3], vec!["a1".into(), "a2".into()]).is_err());
        assert!(HilbertSpec::new(vec![3], vec![]).is_err());
        let s = HilbertSpec::two_mode(2).unwrap();
        assert!(s.require_two_photon_levels().is_err());
        assert!(HilbertSpec::optomechanical(3, 2).unwrap().require_two_photon_levels().is_ok());
        assert_eq!(HilbertSpec::optomechanical(5, 3).unwrap().total_dim(), 225);
    }
}
