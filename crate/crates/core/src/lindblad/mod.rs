//! Lindblad master equation: density matrices, the Liouvillian, time
//! evolution and steady states.
//!
//! Vectorization is column stacking, `vec(rho)[i + d*j] = rho[i][j]`, which
//! is also nalgebra's storage order, so `rho.as_slice()` is `vec(rho)`.

mod density;
mod evolve;
mod gmres;
mod steady;

use std::sync::OnceLock;

use nalgebra::DMatrix;

pub use density::{DensityMatrix, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL};
pub use evolve::{evolve, propagate, EvolveOptions};
pub use steady::{steady_state, steady_state_with, SteadyStateMethod, DENSE_LIMIT};

use crate::error::{Error, Result};
use crate::hilbert::{Operator, C64};

/// Operator stored as a coordinate list of its nonzero entries.
#[derive(Debug, Clone)]
pub(crate) struct SparseOp {
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    fn from_operator(op: &Operator) -> Self {
        let m = op.matrix();
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let v = m[(i, j)];
                if v.re != 0.0 || v.im != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        Self { entries }
    }

    /// `out += s * (self * x)`
    fn left_mul_acc(&self, x: &DMatrix<C64>, s: C64, out: &mut DMatrix<C64>) {
        let n = x.ncols();
        for &(i, k, v) in &self.entries {
            let f = s * v;
            for c in 0..n {
                out[(i, c)] += f * x[(k, c)];
            }
        }
    }

    /// `out += s * (x * self^dagger)`
    fn right_dag_mul_acc(&self, x: &DMatrix<C64>, s: C64, out: &mut DMatrix<C64>) {
        let n = x.nrows();
        for &(j, k, v) in &self.entries {
            let f = s * v.conj();
            let src = x.column(k);
            let mut dst = out.column_mut(j);
            for r in 0..n {
                dst[r] += f * src[r];
            }
        }
    }

    fn diagonal(&self, dim: usize) -> Vec<C64> {
        let mut d = vec![C64::new(0.0, 0.0); dim];
        for &(i, j, v) in &self.entries {
            if i == j {
                d[i] += v;
            }
        }
        d
    }
}

/// Liouvillian generator `L` with `d vec(rho)/dt = L vec(rho)`.
///
/// The dense `d^2 x d^2` matrix is built lazily; time stepping and the
/// iterative steady-state path only use the matrix-free action.
#[derive(Debug)]
pub struct Superoperator {
    dim: usize,
    hamiltonian: Operator,
    collapses: Vec<(Operator, f64)>,
    h_eff: SparseOp,
    jumps: Vec<(SparseOp, f64)>,
    dense: OnceLock<DMatrix<C64>>,
}

/// Build the Liouvillian of `-i[H, rho] + sum rate (A rho A^dagger - {A^dagger A, rho}/2)`.
pub fn liouvillian(h: &Operator, collapses: &[(Operator, f64)]) -> Result<Superoperator> {
    let dim = h.dim();
    let mut anti = Operator::zeros(dim);
    for (a, rate) in collapses {
        if a.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: a.dim() });
        }
        if !(rate.is_finite() && *rate >= 0.0) {
            return Err(Error::InvalidParameter {
                field: "rate".into(),
                reason: format!("collapse rate {rate} must be finite and >= 0"),
            });
        }
        anti = &anti + &(&a.dag() * a).scale_re(*rate);
    }
    let h_eff = h - &anti.scale(C64::new(0.0, 0.5));
    Ok(Superoperator {
        dim,
        hamiltonian: h.clone(),
        collapses: collapses.to_vec(),
        h_eff: SparseOp::from_operator(&h_eff),
        jumps: collapses
            .iter()
            .filter(|(_, r)| *r > 0.0)
            .map(|(a, r)| (SparseOp::from_operator(a), *r))
            .collect(),
        dense: OnceLock::new(),
    })
}

impl Superoperator {
    /// Hilbert-space dimension `d`; the superoperator acts on `d^2` vectors.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn collapses(&self) -> &[(Operator, f64)] {
        &self.collapses
    }

    /// `L(rho)` without forming the superoperator.
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let d = self.dim;
        let mut out = DMatrix::zeros(d, d);
        let mi = C64::new(0.0, -1.0);
        self.h_eff.left_mul_acc(rho, mi, &mut out);
        self.h_eff.right_dag_mul_acc(rho, -mi, &mut out);
        let mut tmp = DMatrix::zeros(d, d);
        for (a, rate) in &self.jumps {
            tmp.fill(C64::new(0.0, 0.0));
            a.left_mul_acc(rho, C64::new(1.0, 0.0), &mut tmp);
            a.right_dag_mul_acc(&tmp, C64::new(*rate, 0.0), &mut out);
        }
        out
    }

    /// Dense column-stacking matrix
    /// `-i(I(x)H - H^T(x)I) + sum rate [conj(A)(x)A - (I(x)A^dagger A)/2 - ((A^dagger A)^T(x)I)/2]`.
    pub fn matrix(&self) -> &DMatrix<C64> {
        self.dense.get_or_init(|| self.build_dense())
    }

    fn build_dense(&self) -> DMatrix<C64> {
        let d = self.dim;
        let id = DMatrix::<C64>::identity(d, d);
        let h = self.hamiltonian.matrix();
        let mi = C64::new(0.0, -1.0);
        let mut l = (id.kronecker(h) - h.transpose().kronecker(&id)) * mi;
        for (a, rate) in &self.collapses {
            if *rate == 0.0 {
                continue;
            }
            let a = a.matrix();
            let ada = a.adjoint() * a;
            let term = a.conjugate().kronecker(a)
                - id.kronecker(&ada) * C64::new(0.5, 0.0)
                - ada.transpose().kronecker(&id) * C64::new(0.5, 0.0);
            l += term * C64::new(*rate, 0.0);
        }
        l
    }

    /// Diagonal of the dense matrix, computed without building it.
    pub(crate) fn diagonal(&self) -> Vec<C64> {
        let d = self.dim;
        let he = self.h_eff.diagonal(d);
        let jd: Vec<(Vec<C64>, f64)> =
            self.jumps.iter().map(|(a, r)| (a.diagonal(d), *r)).collect();
        let mut out = Vec::with_capacity(d * d);
        let mi = C64::new(0.0, -1.0);
        for j in 0..d {
            for i in 0..d {
                let mut v = mi * (he[i] - he[j].conj());
                for (ad, r) in &jd {
                    v += ad[i] * ad[j].conj() * *r;
                }
                out.push(v);
            }
        }
        out
    }

    /// Nonzero entries `(row, col, value)` of the dense matrix, duplicates
    /// not merged. Uses `vec(X rho Y) = (Y^T (x) X) vec(rho)` on the sparse
    /// factors, so the cost scales with the number of nonzeros.
    pub(crate) fn triplets(&self) -> Vec<(usize, usize, C64)> {
        let d = self.dim;
        let mut out = Vec::new();
        let mi = C64::new(0.0, -1.0);
        for &(i, k, v) in &self.h_eff.entries {
            for j in 0..d {
                out.push((i + d * j, k + d * j, mi * v));
            }
        }
        for &(j, l, v) in &self.h_eff.entries {
            let w = -mi * v.conj();
            for i in 0..d {
                out.push((i + d * j, i + d * l, w));
            }
        }
        for (a, rate) in &self.jumps {
            for &(j, l, u) in &a.entries {
                let f = u.conj() * *rate;
                for &(i, k, v) in &a.entries {
                    out.push((i + d * j, k + d * l, f * v));
                }
            }
        }
        out
    }

    /// `max |L(rho)|` entrywise.
    pub fn residual_norm(&self, rho: &DMatrix<C64>) -> f64 {
        self.apply(rho).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `vec(rho)` as a column vector (column stacking).
pub fn vectorize(rho: &DMatrix<C64>) -> nalgebra::DVector<C64> {
    nalgebra::DVector::from_column_slice(rho.as_slice())
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &[C64], dim: usize) -> Result<DMatrix<C64>> {
    if v.len() != dim * dim {
        return Err(Error::DimensionMismatch { expected: dim * dim, actual: v.len() });
    }
    Ok(DMatrix::from_column_slice(dim, dim, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{destroy, HilbertSpec};
    use crate::model::{build_effective_hamiltonian, collapse_operators, ModelParams};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn amplitude_damping_generator() {
        let a = destroy(2).unwrap();
        let l = liouvillian(&Operator::zeros(2), &[(a, 1.0)]).unwrap();
        let m = l.matrix();
        // vec index of |1><1| is 1 + 2*1 = 3, of |0><0| is 0
        assert!((m[(3, 3)] - c(-1.0)).norm() < 1e-15);
        assert!((m[(0, 3)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn dense_and_matrix_free_agree() {
        let spec = HilbertSpec::two_mode(3).unwrap();
        let p = ModelParams::symmetric(0.3, 0.7, 0.9).with_phase(0.6);
        let h = build_effective_hamiltonian(&p, &spec).unwrap();
        let l = liouvillian(&h, &collapse_operators(&p, &spec).unwrap()).unwrap();
        let d = 9;
        let rho = DMatrix::from_fn(d, d, |i, j| C64::new((i * 7 + j) as f64 * 0.01, (i as f64 - j as f64) * 0.02));
        let via_dense = l.matrix() * vectorize(&rho);
        let via_apply = vectorize(&l.apply(&rho));
        let err = (via_dense - via_apply).camax();
        assert!(err < 1e-13, "{err}");
        let diag = l.diagonal();
        for k in 0..d * d {
            assert!((diag[k] - l.matrix()[(k, k)]).norm() < 1e-13);
        }
        let mut assembled = DMatrix::<C64>::zeros(d * d, d * d);
        for (r, c, v) in l.triplets() {
            assembled[(r, c)] += v;
        }
        assert!((assembled - l.matrix()).camax() < 1e-13);
    }

    #[test]
    fn trace_is_left_null_vector() {
        let spec = HilbertSpec::two_mode(3).unwrap();
        let p = ModelParams::default();
        let h = build_effective_hamiltonian(&p, &spec).unwrap();
        let l = liouvillian(&h, &collapse_operators(&p, &spec).unwrap()).unwrap();
        let d = 9;
        let m = l.matrix();
        for col in 0..d * d {
            let mut s = c(0.0);
            for i in 0..d {
                s += m[(i + d * i, col)];
            }
            assert!(s.norm() < 1e-9);
        }
    }

    #[test]
    fn rejects_mismatched_collapse() {
        let h = Operator::zeros(3);
        assert!(matches!(
            liouvillian(&h, &[(destroy(2).unwrap(), 1.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(liouvillian(&h, &[(destroy(3).unwrap(), -1.0)]).is_err());
    }

    #[test]
    fn vectorize_round_trip() {
        let m = DMatrix::from_fn(3, 3, |i, j| C64::new(i as f64, j as f64));
        let v = vectorize(&m);
        assert_eq!(v[1], m[(1, 0)]);
        assert_eq!(unvectorize(v.as_slice(), 3).unwrap(), m);
    }
}
