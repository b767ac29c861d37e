//! Small dense and sparse linear-algebra kernels.

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::{Error, Result};

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by bisection on
/// the Sturm count.
pub(crate) fn tridiagonal_lowest_eigenvalue(diag: &[f64], off: &[f64]) -> Result<f64> {
    if diag.is_empty() || off.len() + 1 != diag.len() {
        return Err(Error::arg("tridiagonal matrix has inconsistent sizes"));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Compressed sparse rows.
#[derive(Debug, Clone)]
pub(crate) struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl Csr {
    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            y[i] = s;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = alloc::vec![0.0; self.n];
        for (i, di) in d.iter_mut().enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.cols[k] == i {
                    *di += self.vals[k];
                }
            }
        }
        d
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Outcome of an iterative solve.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SolveStats {
    pub relative_residual: f64,
}

/// Jacobi-preconditioned BiCGStab for `A x = b`, starting from `x`.
/// Converges when `|b - A x| <= tol |b|`. When the recurred residual drifts
/// away from the true one the iteration restarts from the current iterate.
pub(crate) fn bicgstab(
    a: &Csr,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> Result<SolveStats> {
    let mut used = 0;
    let mut last = None;
    for _ in 0..5 {
        match bicgstab_once(a, b, x, tol, max_iter - used) {
            Ok(st) => return Ok(st),
            Err(Drift {
                iterations,
                residual,
            }) if iterations < max_iter - used => {
                used += iterations;
                last = Some(residual);
            }
            Err(Drift { residual, .. }) => {
                last = Some(residual);
                break;
            }
        }
    }
    Err(Error::numerical(format!(
        "BiCGStab did not reach relative residual {tol:e} in {max_iter} iterations (last {:e})",
        last.unwrap_or(f64::NAN)
    )))
}

struct Drift {
    iterations: usize,
    residual: f64,
}

fn bicgstab_once(
    a: &Csr,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> core::result::Result<SolveStats, Drift> {
    let n = a.n;
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|d| if *d != 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(SolveStats {
            relative_residual: 0.0,
        });
    }
    let mut r = alloc::vec![0.0; n];
    a.mul(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut best = norm2(&r) / bnorm;
    if best <= tol {
        return Ok(SolveStats {
            relative_residual: best,
        });
    }
    let mut r_hat = r.clone();
    let mut p = alloc::vec![0.0; n];
    let mut v = alloc::vec![0.0; n];
    let mut s = alloc::vec![0.0; n];
    let mut t = alloc::vec![0.0; n];
    let mut y = alloc::vec![0.0; n];
    let mut z = alloc::vec![0.0; n];
    let (mut rho, mut alpha, mut omega) = (1.0f64, 1.0f64, 1.0f64);
    let mut restarts = 0;

    for it in 1..=max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new.abs() < 1e-300 || omega == 0.0 {
            // breakdown: restart from the current residual
            restarts += 1;
            if restarts > 20 {
                break;
            }
            r_hat.copy_from_slice(&r);
            p.iter_mut().for_each(|e| *e = 0.0);
            v.iter_mut().for_each(|e| *e = 0.0);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            continue;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
            y[i] = inv_diag[i] * p[i];
        }
        a.mul(&y, &mut v);
        let den = dot(&r_hat, &v);
        if den == 0.0 {
            omega = 0.0;
            continue;
        }
        alpha = rho / den;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm2(&s) / bnorm <= tol {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            return finish(a, b, x, bnorm, it, tol);
        }
        for i in 0..n {
            z[i] = inv_diag[i] * s[i];
        }
        a.mul(&z, &mut t);
        let tt = dot(&t, &t);
        omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        let rel = norm2(&r) / bnorm;
        best = best.min(rel);
        if rel <= tol {
            return finish(a, b, x, bnorm, it, tol);
        }
    }
    Err(Drift {
        iterations: max_iter,
        residual: best,
    })
}

/// Recomputes the true residual so that drift in the recurrence cannot
/// report false convergence.
fn finish(
    a: &Csr,
    b: &[f64],
    x: &[f64],
    bnorm: f64,
    it: usize,
    tol: f64,
) -> core::result::Result<SolveStats, Drift> {
    let mut r = alloc::vec![0.0; a.n];
    a.mul(x, &mut r);
    for i in 0..a.n {
        r[i] = b[i] - r[i];
    }
    let rel = norm2(&r) / bnorm;
    if rel > tol {
        return Err(Drift {
            iterations: it,
            residual: rel,
        });
    }
    Ok(SolveStats {
        relative_residual: rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_eigenvalue_of_laplacian_tridiagonal() {
        let m = 99;
        let h = 1.0 / (m + 1) as f64;
        let diag = alloc::vec![2.0 / (h * h); m];
        let off = alloc::vec![-1.0 / (h * h); m - 1];
        let l = tridiagonal_lowest_eigenvalue(&diag, &off).unwrap();
        let exact = 2.0 / (h * h) * (1.0 - (core::f64::consts::PI * h).cos());
        assert!((l - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn bicgstab_solves_nonsymmetric_system() {
        // 1-D convection-diffusion, nonsymmetric
        let n = 200;
        let mut row_ptr = alloc::vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..n {
            if i > 0 {
                cols.push(i - 1);
                vals.push(-1.3);
            }
            cols.push(i);
            vals.push(2.5);
            if i + 1 < n {
                cols.push(i + 1);
                vals.push(-0.7);
            }
            row_ptr.push(cols.len());
        }
        let a = Csr {
            n,
            row_ptr,
            cols,
            vals,
        };
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.1).sin()).collect();
        let mut b = alloc::vec![0.0; n];
        a.mul(&x_true, &mut b);
        let mut x = alloc::vec![0.0; n];
        let st = bicgstab(&a, &b, &mut x, 1e-12, 1000).unwrap();
        assert!(st.relative_residual <= 1e-11);
        for i in 0..n {
            assert!((x[i] - x_true[i]).abs() < 1e-9);
        }
    }
}
