//! Minimal dense linear algebra: Cholesky solve for the barrier Newton step.
//! Problem sizes here are tens of variables, so a textbook O(n^3) factor is
//! plenty.

use alloc::vec::Vec;

use crate::math;

/// In-place Cholesky factorization of a row-major symmetric matrix (lower
/// triangle is written). Returns false if the matrix is not positive definite.
fn cholesky(a: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= math::sq(a[j * n + k]);
        }
        if !(d > 0.0) || !d.is_finite() {
            return false;
        }
        let ljj = math::sqrt(d);
        a[j * n + j] = ljj;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / ljj;
        }
    }
    true
}

/// Solves `A x = b` for symmetric positive definite `A` (row-major, n x n).
/// If the factorization fails, retries with an escalating ridge on the
/// diagonal; returns None once the ridge would dominate the matrix.
pub(crate) fn solve_spd(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    if a.iter().any(|v| !v.is_finite()) || b.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let max_diag = (0..n).fold(0.0_f64, |m, i| m.max(math::abs(a[i * n + i])));
    let mut ridge = 0.0;
    for _ in 0..16 {
        let mut l = a.to_vec();
        if ridge > 0.0 {
            for i in 0..n {
                l[i * n + i] += ridge;
            }
        }
        if cholesky(&mut l, n) {
            let mut x = b.to_vec();
            // forward: L y = b
            for i in 0..n {
                let mut s = x[i];
                for k in 0..i {
                    s -= l[i * n + k] * x[k];
                }
                x[i] = s / l[i * n + i];
            }
            // backward: L^T x = y
            for i in (0..n).rev() {
                let mut s = x[i];
                for k in (i + 1)..n {
                    s -= l[k * n + i] * x[k];
                }
                x[i] = s / l[i * n + i];
            }
            if x.iter().all(|v| v.is_finite()) {
                return Some(x);
            }
        }
        ridge = if ridge == 0.0 {
            max_diag.max(1.0) * 1e-14
        } else {
            ridge * 100.0
        };
        if ridge > max_diag.max(1.0) {
            return None;
        }
    }
    None
}
