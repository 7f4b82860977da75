//! Real symmetric tridiagonal eigensolvers.
//!
//! [`ql_implicit`] is the QL algorithm with implicit Wilkinson shifts and
//! accumulated Givens rotations (eigenvalues and eigenvectors).
//! [`bisect_eigenvalues`] counts sign changes of the LDL^T pivots (Sturm
//! sequence) and only needs the products of paired off-diagonal entries, so
//! it also applies to non-symmetric tridiagonal matrices with positive
//! products such as a birth-and-death transition matrix.

use crate::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenpairs in ascending eigenvalue order; `vectors[k]` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Full eigendecomposition of the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off` (`off.len() + 1 == diag.len()`).
pub fn ql_implicit(diag: &[f64], off: &[f64]) -> Result<TridiagonalEigen> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1), "off-diagonal length must be n - 1");
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    // vecs[i] is the i-th column of the accumulated rotation
    let mut vecs: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        })
        .collect();

    let scale = (0..n)
        .map(|i| d[i].abs() + e[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 })
        .fold(0.0, f64::max);
    let tol = f64::EPSILON * scale;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n && e[m].abs() > tol {
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: sweeps,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (lo, hi) = vecs.split_at_mut(i + 1);
                let (vi, vn) = (&mut lo[i], &mut hi[0]);
                for k in 0..n {
                    let t = vn[k];
                    vn[k] = s * vi[k] + c * t;
                    vi[k] = c * vi[k] - s * t;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(TridiagonalEigen {
        values: order.iter().map(|&i| d[i]).collect(),
        vectors: order.into_iter().map(|i| std::mem::take(&mut vecs[i])).collect(),
    })
}

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], off_products: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut pivot = 1.0;
    for (i, &a) in diag.iter().enumerate() {
        let coupling = if i > 0 { off_products[i - 1] / pivot } else { 0.0 };
        pivot = a - x - coupling;
        if pivot == 0.0 {
            pivot = -tiny;
        }
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues in ascending order by Sturm bisection. `off_products[i]`
/// is `A[i][i+1] * A[i+1][i]` and must be nonnegative.
pub fn bisect_eigenvalues(diag: &[f64], off_products: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let radius = (0..n)
        .map(|i| {
            let left = if i > 0 { off_products[i - 1].sqrt() } else { 0.0 };
            let right = if i + 1 < n { off_products[i].sqrt() } else { 0.0 };
            diag[i].abs() + left + right
        })
        .fold(0.0, f64::max);
    let (lo0, hi0) = (-radius - 1e-300, radius + 1e-300);
    (0..n)
        .map(|k| {
            // the k-th eigenvalue is the smallest x with count(x) > k
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(diag, off_products, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
        let n = diag.len();
        (0..n)
            .map(|i| {
                let mut s = diag[i] * v[i];
                if i > 0 {
                    s += off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += off[i] * v[i + 1];
                }
                (s - lambda * v[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn three_by_three_zero_diagonal() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let eig = ql_implicit(&[0.0; 3], &[h, h]).unwrap();
        for (a, b) in eig.values.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        for (l, v) in eig.values.iter().zip(&eig.vectors) {
            assert!(residual(&[0.0; 3], &[h, h], *l, v) < 1e-14);
        }
    }

    #[test]
    fn one_by_one() {
        let eig = ql_implicit(&[2.5], &[]).unwrap();
        assert_eq!(eig.values, vec![2.5]);
        assert_eq!(eig.vectors, vec![vec![1.0]]);
    }

    #[test]
    fn orthonormal_vectors_and_small_residual() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| ((i * 37) % 11) as f64 / 7.0 - 0.5).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.2 + ((i * 13) % 7) as f64 / 9.0).collect();
        let eig = ql_implicit(&diag, &off).unwrap();
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for (l, v) in eig.values.iter().zip(&eig.vectors) {
            assert!(residual(&diag, &off, *l, v) < 1e-13);
        }
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = eig.vectors[i].iter().zip(&eig.vectors[j]).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((dot - target).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn bisection_agrees_with_ql() {
        let n = 25;
        let diag: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.3 + (i as f64 * 1.3).cos().abs()).collect();
        let products: Vec<f64> = off.iter().map(|b| b * b).collect();
        let ql = ql_implicit(&diag, &off).unwrap();
        let bis = bisect_eigenvalues(&diag, &products);
        for (a, b) in ql.values.iter().zip(&bis) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn sturm_counts_are_monotone() {
        let diag = [0.0; 6];
        let products = [0.5, 0.25, 0.25, 0.25, 0.5];
        let mut last = 0;
        for k in 0..=40 {
            let x = -1.2 + k as f64 * 0.06;
            let c = sturm_count(&diag, &products, x);
            assert!(c >= last);
            last = c;
        }
        assert_eq!(last, 6);
    }
}
