//! Stationary states of a Liouvillian.
//!
//! The trace constraint replaces the first row of `L`, turning `L x = 0`
//! into the nonsingular system `L' x = e_0`. The default solver is a sparse
//! LU of that system. If it fails, small systems go through dense LU with a
//! condition estimate, which tells a degenerate null space from a merely
//! ill-conditioned one; large systems go through preconditioned GMRES.

use nalgebra::{DMatrix, DVector};

use super::density::{hermitian_part, DensityMatrix};
use super::gmres::gmres;
use super::Superoperator;
use crate::error::{Error, Result};
use crate::hilbert::C64;

/// Largest superoperator dimension `d^2` handled by the dense fallback.
pub const DENSE_LIMIT: usize = 1024;

/// Condition-number estimate above which the dense solve is abandoned in
/// favour of inverse iteration.
const MAX_CONDITION: f64 = 1e12;

/// Required stationarity `max |L rho|`.
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyStateMethod {
    /// Sparse LU, falling back to dense or GMRES on failure.
    Auto,
    Dense,
    /// Sparse LU of the trace-constrained system.
    SparseDirect,
    /// Jacobi-preconditioned GMRES through the matrix-free action.
    Iterative,
}

pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix> {
    steady_state_with(l, SteadyStateMethod::Auto)
}

pub fn steady_state_with(l: &Superoperator, method: SteadyStateMethod) -> Result<DensityMatrix> {
    let d = l.dim();
    match method {
        SteadyStateMethod::Dense => finish(l, dense_solve(l)?),
        SteadyStateMethod::SparseDirect => finish(l, sparse_solve(l)?),
        SteadyStateMethod::Iterative => finish(l, iterative_solve(l)?),
        SteadyStateMethod::Auto => match sparse_solve(l).and_then(|x| finish(l, x)) {
            Ok(rho) => Ok(rho),
            Err(e) => {
                log::debug!("sparse steady-state solve failed ({e}); falling back");
                if d * d <= DENSE_LIMIT {
                    finish(l, dense_solve(l)?)
                } else {
                    finish(l, iterative_solve(l)?)
                }
            }
        },
    }
}

fn finish(l: &Superoperator, x: DVector<C64>) -> Result<DensityMatrix> {
    let d = l.dim();
    let m = DMatrix::from_column_slice(d, d, x.as_slice());
    let tr = m.trace();
    if tr.norm() < 1e-14 {
        return Err(Error::Singular("stationary vector has vanishing trace".into()));
    }
    let rho = hermitian_part(&(m / tr));
    let res = l.residual_norm(&rho);
    if res > RESIDUAL_TOL {
        return Err(Error::Singular(format!("steady-state residual {res:.3e} above tolerance")));
    }
    DensityMatrix::new(rho)
}

fn trace_row_system(l: &Superoperator) -> DMatrix<C64> {
    let d = l.dim();
    let mut m = l.matrix().clone();
    m.row_mut(0).fill(C64::new(0.0, 0.0));
    for i in 0..d {
        m[(0, i + d * i)] = C64::new(1.0, 0.0);
    }
    m
}

fn one_norm(m: &DMatrix<C64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn probe_vectors(n: usize) -> [DVector<C64>; 2] {
    let ones = DVector::from_element(n, C64::new(1.0, 0.0));
    let wiggle = DVector::from_fn(n, |i, _| {
        let t = (i as f64 + 1.0) * 0.618_033_988_749_895;
        C64::new((t.fract() - 0.5) * 2.0, (3.0 * t).fract() - 0.5)
    });
    [ones, wiggle]
}

fn dense_solve(l: &Superoperator) -> Result<DVector<C64>> {
    let n = l.dim() * l.dim();
    let m = trace_row_system(l);
    let norm_m = one_norm(&m);
    let lu = m.clone().lu();
    let mut rhs = DVector::zeros(n);
    rhs[0] = C64::new(1.0, 0.0);

    let solved = lu.solve(&rhs).filter(|x| x.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    if let Some(mut x) = solved {
        // lower bound on |M^-1|_1 from a few probe solves
        let mut inv_norm = 0.0f64;
        for v in probe_vectors(n) {
            if let Some(y) = lu.solve(&v) {
                let ratio = y.iter().map(|z| z.norm()).sum::<f64>()
                    / v.iter().map(|z| z.norm()).sum::<f64>();
                inv_norm = inv_norm.max(ratio);
            }
        }
        let cond = norm_m * inv_norm;
        if cond.is_finite() && cond <= MAX_CONDITION {
            // one step of iterative refinement
            let r = &rhs - &m * &x;
            if let Some(dx) = lu.solve(&r) {
                x += dx;
            }
            return Ok(x);
        }
        log::debug!("trace-constrained system ill-conditioned (cond ~ {cond:.2e}); using inverse iteration");
    }
    inverse_iteration(l)
}

/// Smallest-magnitude eigenvector of `L` by shifted inverse iteration, run
/// from two starting vectors to detect a degenerate null space.
fn inverse_iteration(l: &Superoperator) -> Result<DVector<C64>> {
    let d = l.dim();
    let n = d * d;
    let lm = l.matrix();
    let scale = one_norm(lm).max(1.0);
    let shift = C64::new(1e-9 * scale, 0.0);
    let shifted = lm - DMatrix::<C64>::identity(n, n) * shift;
    let lu = shifted.lu();

    let mut starts = Vec::new();
    let mut mixed = DVector::zeros(n);
    for i in 0..d {
        mixed[i + d * i] = C64::new(1.0 / d as f64, 0.0);
    }
    starts.push(mixed);
    let mut skewed = DVector::zeros(n);
    for i in 0..d {
        skewed[i + d * i] = C64::new((i + 1) as f64, 0.0);
    }
    starts.push(skewed);

    let mut found: Vec<DMatrix<C64>> = Vec::new();
    for mut x in starts {
        for _ in 0..12 {
            x = lu
                .solve(&x)
                .ok_or_else(|| Error::Singular("shifted Liouvillian is singular".into()))?;
            let nrm = x.norm();
            if !(nrm.is_finite() && nrm > 0.0) {
                return Err(Error::Singular("inverse iteration diverged".into()));
            }
            x /= C64::new(nrm, 0.0);
        }
        let m = DMatrix::from_column_slice(d, d, x.as_slice());
        let tr = m.trace();
        if tr.norm() < 1e-12 {
            return Err(Error::Singular("null vector is traceless".into()));
        }
        found.push(m / tr);
    }
    let diff = found[0]
        .iter()
        .zip(found[1].iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if diff > 1e-6 {
        return Err(Error::DegenerateSteadyState(format!(
            "inverse iteration from distinct starts differs by {diff:.3e}"
        )));
    }
    Ok(DVector::from_column_slice(found[0].as_slice()))
}

/// `L' x` with the first row replaced by the trace functional.
fn constrained_apply(l: &Superoperator, v: &[C64]) -> Vec<C64> {
    let d = l.dim();
    let m = DMatrix::from_column_slice(d, d, v);
    let mut out = l.apply(&m);
    out[(0, 0)] = (0..d).map(|i| m[(i, i)]).sum();
    out.as_slice().to_vec()
}

fn sparse_solve(l: &Superoperator) -> Result<DVector<C64>> {
    use faer::linalg::solvers::Solve;
    use faer::sparse::{SparseColMat, Triplet};

    let d = l.dim();
    let n = d * d;
    let mut entries: Vec<Triplet<usize, usize, C64>> = l
        .triplets()
        .into_iter()
        .filter(|&(r, _, _)| r != 0)
        .map(|(r, c, v)| Triplet::new(r, c, v))
        .collect();
    entries.extend((0..d).map(|i| Triplet::new(0, i + d * i, C64::new(1.0, 0.0))));
    let m = SparseColMat::<usize, C64>::try_new_from_triplets(n, n, &entries)
        .map_err(|e| Error::Singular(format!("sparse assembly failed: {e:?}")))?;
    let lu = m.sp_lu().map_err(|e| Error::Singular(format!("sparse LU failed: {e:?}")))?;
    let mut rhs = faer::Col::<C64>::zeros(n);
    rhs[0] = C64::new(1.0, 0.0);
    let sol = lu.solve(&rhs);
    let mut x: Vec<C64> = (0..n).map(|i| sol[i]).collect();
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular("sparse LU produced a non-finite solution".into()));
    }
    // one step of iterative refinement
    let ax = constrained_apply(l, &x);
    let mut r = faer::Col::<C64>::zeros(n);
    for i in 0..n {
        r[i] = -ax[i];
    }
    r[0] += C64::new(1.0, 0.0);
    let dx = lu.solve(&r);
    for (i, xi) in x.iter_mut().enumerate() {
        *xi += dx[i];
    }
    Ok(DVector::from_vec(x))
}

fn iterative_solve(l: &Superoperator) -> Result<DVector<C64>> {
    let d = l.dim();
    let n = d * d;
    let mut diag = l.diagonal();
    diag[0] = C64::new(1.0, 0.0);
    for z in diag.iter_mut() {
        if z.norm() < 1e-3 {
            *z = C64::new(1.0, 0.0);
        }
    }
    let apply = |v: &[C64]| constrained_apply(l, v);
    let precond = |v: &[C64]| -> Vec<C64> { v.iter().zip(&diag).map(|(a, b)| a / b).collect() };
    let mut rhs = vec![C64::new(0.0, 0.0); n];
    rhs[0] = C64::new(1.0, 0.0);
    let out = gmres(apply, precond, &rhs, 200, 20_000, 1e-14);
    log::debug!("gmres: {} iterations, relative residual {:.3e}", out.iterations, out.residual);
    if !out.converged && out.residual > 1e-11 {
        return Err(Error::Singular(format!(
            "GMRES stalled at relative residual {:.3e} after {} iterations",
            out.residual, out.iterations
        )));
    }
    Ok(DVector::from_vec(out.x))
}
