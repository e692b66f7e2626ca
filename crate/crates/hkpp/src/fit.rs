//! Small dense least-squares solver (modified Gram–Schmidt QR) used by the
//! tail and front regressions. A handful of columns only — no BLAS needed.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::num;

/// Solve min ‖A x − y‖₂ for A given by columns. Returns the coefficient
/// vector; errors on rank deficiency (relative pivot below 1e-12).
pub fn least_squares(cols: &[&[f64]], y: &[f64]) -> Result<Vec<f64>> {
    let p = cols.len();
    let n = y.len();
    if p == 0 || n < p || cols.iter().any(|c| c.len() != n) {
        return Err(Error::IllConditionedFit);
    }
    // Q (n x p) built in place, R (p x p) upper triangular.
    let mut q: Vec<Vec<f64>> = cols.iter().map(|c| c.to_vec()).collect();
    let mut r = vec![vec![0.0; p]; p];
    let mut norm0 = 0.0f64;
    for j in 0..p {
        for i in 0..j {
            let dot: f64 = q[i].iter().zip(&q[j]).map(|(a, b)| a * b).sum();
            r[i][j] = dot;
            let qi = q[i].clone();
            for (v, w) in q[j].iter_mut().zip(&qi) {
                *v -= dot * w;
            }
        }
        let nrm = num::sqrt(q[j].iter().map(|v| v * v).sum::<f64>());
        if j == 0 {
            norm0 = nrm;
        }
        if nrm <= 1e-12 * norm0.max(1.0) {
            return Err(Error::IllConditionedFit);
        }
        r[j][j] = nrm;
        for v in q[j].iter_mut() {
            *v /= nrm;
        }
    }
    // rhs = Q^T y, then back substitution
    let mut beta = vec![0.0; p];
    for j in 0..p {
        beta[j] = q[j].iter().zip(y).map(|(a, b)| a * b).sum();
    }
    for j in (0..p).rev() {
        for i in j + 1..p {
            beta[j] -= r[j][i] * beta[i];
        }
        beta[j] /= r[j][j];
    }
    Ok(beta)
}

/// Root-mean-square residual of a fitted linear model.
pub fn rms_residual(cols: &[&[f64]], coef: &[f64], y: &[f64]) -> f64 {
    let n = y.len();
    let mut ss = 0.0;
    for i in 0..n {
        let pred: f64 = cols.iter().zip(coef).map(|(c, b)| c[i] * b).sum();
        let r = y[i] - pred;
        ss += r * r;
    }
    num::sqrt(ss / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_recovery() {
        let n = 200;
        let t: Vec<f64> = (0..n).map(|i| 100.0 + i as f64 * 4.5).collect();
        let lt: Vec<f64> = t.iter().map(|&x| crate::num::ln(x)).collect();
        let one = vec![1.0; n];
        let y: Vec<f64> = (0..n).map(|i| 2.0 * t[i] - 0.75 * lt[i] + 1.0).collect();
        let c = least_squares(&[&t, &lt, &one], &y).unwrap();
        assert_abs_diff_eq!(c[0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c[1], -0.75, epsilon = 1e-9);
        assert_abs_diff_eq!(c[2], 1.0, epsilon = 1e-9);
        assert!(rms_residual(&[&t, &lt, &one], &c, &y) < 1e-9);
    }

    #[test]
    fn rank_deficiency_detected() {
        let a = vec![1.0, 2.0, 3.0, 4.0];
        let b = vec![2.0, 4.0, 6.0, 8.0];
        let y = vec![1.0, 1.0, 1.0, 1.0];
        assert!(matches!(least_squares(&[&a, &b], &y), Err(Error::IllConditionedFit)));
    }
}
