#![allow(clippy::needless_range_loop)]

//! Small dense symmetric-matrix routines for correlation-sized problems.

use crate::error::{Error, Result};

/// Row-major square matrix.
pub type Matrix = Vec<Vec<f64>>;

/// Largest absolute off-diagonal entry at which Jacobi iteration stops.
pub const JACOBI_THRESHOLD: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi diagonalization.
///
/// Sweeps visit pairs `(p, q)` with `p < q` in row order and rotate away any
/// off-diagonal entry; iteration stops once every off-diagonal magnitude is
/// below [`JACOBI_THRESHOLD`]. The sweep order is fixed, so results are
/// bit-reproducible.
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> Result<SymmetricEigen> {
    let n = matrix.len();
    let mut a: Matrix = matrix.to_vec();
    let mut v: Matrix = identity(n);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if max_off_diagonal(&a) < JACOBI_THRESHOLD {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] != 0.0 {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }
    if !converged && max_off_diagonal(&a) >= JACOBI_THRESHOLD {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]).then(i.cmp(&j)));
    Ok(SymmetricEigen {
        values: order.iter().map(|&k| a[k][k]).collect(),
        vectors: order.iter().map(|&k| (0..n).map(|r| v[r][k]).collect()).collect(),
    })
}

fn max_off_diagonal(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut max = 0.0_f64;
    for p in 0..n {
        for q in (p + 1)..n {
            max = max.max(a[p][q].abs());
        }
    }
    max
}

/// Applies the plane rotation that zeroes `a[p][q]`, accumulating it into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let n = a.len();
    let apq = a[p][q];
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[k][p];
        let akq = a[k][q];
        a[k][p] = c * akp - s * akq;
        a[k][q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[p][k];
        let aqk = a[q][k];
        a[p][k] = c * apk - s * aqk;
        a[q][k] = s * apk + c * aqk;
    }
    a[p][q] = 0.0;
    a[q][p] = 0.0;
    for row in v.iter_mut() {
        let vkp = row[p];
        let vkq = row[q];
        row[p] = c * vkp - s * vkq;
        row[q] = s * vkp + c * vkq;
    }
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(r, x)| r * x).sum()).collect()
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn invert(matrix: &[Vec<f64>]) -> Result<Matrix> {
    let n = matrix.len();
    let scale = matrix
        .iter()
        .flatten()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let tiny = scale * 1e-13;
    let mut a: Matrix = matrix.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .ok_or(Error::Singular)?;
        if a[pivot][col].abs() <= tiny {
            return Err(Error::Singular);
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    for j in 0..n {
                        a[row][j] -= f * a[col][j];
                        inv[row][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// Natural log of the determinant via Cholesky factorization; fails unless
/// the matrix is positive definite.
pub fn ln_det_spd(matrix: &[Vec<f64>]) -> Result<f64> {
    let n = matrix.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut ln_det = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let dot: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = matrix[i][i] - dot;
                if d <= 0.0 || !d.is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                l[i][i] = d.sqrt();
                ln_det += 2.0 * l[i][i].ln();
            } else {
                l[i][j] = (matrix[i][j] - dot) / l[j][j];
            }
        }
    }
    Ok(ln_det)
}
