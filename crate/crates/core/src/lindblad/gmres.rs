//! Restarted GMRES with right preconditioning for complex systems.

use crate::hilbert::C64;

pub(crate) struct GmresOutcome {
    pub x: Vec<C64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Solve `A x = b` where `apply` computes `A v` and `precond` applies an
/// approximate inverse of `A`. Stops once `|b - A x| <= tol * |b|`.
pub(crate) fn gmres<A, P>(
    apply: A,
    precond: P,
    b: &[C64],
    restart: usize,
    max_iter: usize,
    tol: f64,
) -> GmresOutcome
where
    A: Fn(&[C64]) -> Vec<C64>,
    P: Fn(&[C64]) -> Vec<C64>,
{
    let n = b.len();
    let bnorm = norm(b).max(f64::MIN_POSITIVE);
    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut total = 0;
    let mut residual = 1.0;

    while total < max_iter {
        let ax = apply(&x);
        let r: Vec<C64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm(&r);
        residual = beta / bnorm;
        if residual <= tol {
            return GmresOutcome { x, residual, iterations: total, converged: true };
        }
        let m = restart.min(max_iter - total);
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|z| z / beta).collect());
        // Hessenberg columns after Givens rotation
        let mut hess: Vec<Vec<C64>> = Vec::with_capacity(m);
        let mut cs: Vec<f64> = Vec::with_capacity(m);
        let mut sn: Vec<C64> = Vec::with_capacity(m);
        let mut g = vec![C64::new(0.0, 0.0); m + 1];
        g[0] = C64::new(beta, 0.0);
        let mut k_done = 0;

        for k in 0..m {
            let z = precond(&basis[k]);
            let mut w = apply(&z);
            let mut h = vec![C64::new(0.0, 0.0); k + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                h[i] = hij;
                for (wj, vj) in w.iter_mut().zip(v) {
                    *wj -= hij * vj;
                }
            }
            let wn = norm(&w);
            h[k + 1] = C64::new(wn, 0.0);
            for i in 0..k {
                let t = cs[i] * h[i] + sn[i] * h[i + 1];
                h[i + 1] = -sn[i].conj() * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            let (c, s) = givens(h[k], h[k + 1]);
            h[k] = c * h[k] + s * h[k + 1];
            h[k + 1] = C64::new(0.0, 0.0);
            g[k + 1] = -s.conj() * g[k];
            g[k] *= c;
            cs.push(c);
            sn.push(s);
            hess.push(h);
            total += 1;
            k_done = k + 1;
            residual = g[k + 1].norm() / bnorm;
            if residual <= tol || wn == 0.0 {
                break;
            }
            basis.push(w.iter().map(|z| z / wn).collect());
        }

        // back substitution on the triangular system
        let mut y = vec![C64::new(0.0, 0.0); k_done];
        for i in (0..k_done).rev() {
            let mut s = g[i];
            for j in i + 1..k_done {
                s -= hess[j][i] * y[j];
            }
            y[i] = s / hess[i][i];
        }
        let mut update = vec![C64::new(0.0, 0.0); n];
        for (j, yj) in y.iter().enumerate() {
            for (u, v) in update.iter_mut().zip(&basis[j]) {
                *u += yj * v;
            }
        }
        let dz = precond(&update);
        for (xi, d) in x.iter_mut().zip(dz) {
            *xi += d;
        }
    }
    let ax = apply(&x);
    let r: Vec<C64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    residual = residual.min(norm(&r) / bnorm);
    GmresOutcome { x, residual, iterations: total, converged: residual <= tol }
}

/// Complex Givens rotation zeroing `b` in `(a, b)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    if b.norm() == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if a.norm() == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = a.norm() / r;
    let s = (a / a.norm()) * b.conj() / r;
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_nonsymmetric_system() {
        let a = [
            [C64::new(4.0, 1.0), C64::new(1.0, 0.0), C64::new(0.0, -1.0)],
            [C64::new(0.5, 0.0), C64::new(3.0, -2.0), C64::new(1.0, 0.0)],
            [C64::new(0.0, 2.0), C64::new(1.0, 1.0), C64::new(5.0, 0.0)],
        ];
        let b = vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(2.0, -1.0)];
        let apply = |v: &[C64]| -> Vec<C64> {
            (0..3).map(|i| (0..3).map(|j| a[i][j] * v[j]).sum()).collect()
        };
        let out = gmres(apply, |v: &[C64]| v.to_vec(), &b, 2, 100, 1e-14);
        assert!(out.converged);
        let ax = apply(&out.x);
        for i in 0..3 {
            assert!((ax[i] - b[i]).norm() < 1e-12);
        }
    }
}
