//! One-component principal component analysis of a correlation matrix, with
//! the sampling-adequacy (KMO) and sphericity (Bartlett) checks that justify
//! it.

use serde::{Deserialize, Serialize};

use super::correlation::CorrelationMatrix;
use super::linalg::{invert, jacobi_eigen, ln_det_spd};
use super::special::chi2_sf;
use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

/// Inflation of the ordinary correlation standard error applied to loadings.
pub const LOADING_SE_FACTOR: f64 = 1.5;

/// Negative eigenvalues down to this size are rounding noise and clipped to 0.
const NEGATIVE_EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BartlettTest {
    pub chi2: f64,
    pub df: usize,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaReport {
    pub names: Vec<String>,
    pub n_samples: usize,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub pct_variance: Vec<f64>,
    pub cumulative_pct: Vec<f64>,
    /// Correlation of each variable with the first component: `sqrt(λ1) v_i1`.
    pub loadings: Vec<f64>,
    pub communalities: Vec<f64>,
    /// `loading / λ1`.
    pub score_coefficients: Vec<f64>,
    pub ci_lower: Vec<f64>,
    pub ci_upper: Vec<f64>,
    /// `None` when undefined (no off-diagonal correlation) or the matrix is singular.
    pub kmo: Option<f64>,
    /// `None` when the matrix is not positive definite or `n_samples <= dim`.
    pub bartlett: Option<BartlettTest>,
    /// Standard error of an ordinary correlation, `1 / sqrt(n - 1)`.
    pub sigma: f64,
    pub se_factor: f64,
}

/// Runs the decomposition and fills every field of the report.
///
/// The first eigenvector's sign is chosen so that its largest-magnitude
/// entry is positive. Confidence bounds on the score coefficients are the
/// loading bounds `loading ∓ 1.96 · 1.5 · σ` divided by `λ1`.
pub fn pca_from_correlation(matrix: &CorrelationMatrix) -> Result<PcaReport> {
    matrix.validate()?;
    if matrix.n_samples < 2 {
        return Err(Error::Input(format!(
            "at least 2 samples are required for a standard error, got {}",
            matrix.n_samples
        )));
    }
    let p = matrix.dim();
    let eig = jacobi_eigen(&matrix.entries)?;

    let mut eigenvalues = eig.values;
    for v in eigenvalues.iter_mut() {
        if *v < 0.0 {
            if *v < -NEGATIVE_EIGEN_TOL {
                return Err(Error::InvalidMatrix(format!(
                    "negative eigenvalue {v}; not a correlation matrix"
                )));
            }
            *v = 0.0;
        }
    }

    let pct_variance: Vec<f64> = eigenvalues.iter().map(|l| 100.0 * l / p as f64).collect();
    let cumulative_pct = pct_variance
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();

    let lambda1 = eigenvalues[0];
    let mut v1 = eig.vectors[0].clone();
    let dominant = v1
        .iter()
        .copied()
        .reduce(|a, b| if b.abs() > a.abs() { b } else { a })
        .unwrap_or(0.0);
    if dominant < 0.0 {
        v1.iter_mut().for_each(|x| *x = -*x);
    }

    let loadings: Vec<f64> = v1.iter().map(|v| lambda1.sqrt() * v).collect();
    let communalities = loadings.iter().map(|l| l * l).collect();
    let score_coefficients = loadings.iter().map(|l| l / lambda1).collect();

    let sigma = 1.0 / ((matrix.n_samples - 1) as f64).sqrt();
    let half_width = Z_95 * LOADING_SE_FACTOR * sigma;
    let ci_lower = loadings.iter().map(|l| (l - half_width) / lambda1).collect();
    let ci_upper = loadings.iter().map(|l| (l + half_width) / lambda1).collect();

    let kmo = kmo(matrix).ok().flatten();
    let bartlett = bartlett(matrix, matrix.n_samples).ok();

    Ok(PcaReport {
        names: matrix.names.clone(),
        n_samples: matrix.n_samples,
        eigenvalues,
        pct_variance,
        cumulative_pct,
        loadings,
        communalities,
        score_coefficients,
        ci_lower,
        ci_upper,
        kmo,
        bartlett,
        sigma,
        se_factor: LOADING_SE_FACTOR,
    })
}

/// Kaiser-Meyer-Olkin sampling adequacy.
///
/// Compares squared off-diagonal correlations with squared anti-image partial
/// correlations `q_ij = -inv_ij / sqrt(inv_ii inv_jj)`. Returns `Ok(None)` when
/// both sums vanish (an identity matrix).
pub fn kmo(matrix: &CorrelationMatrix) -> Result<Option<f64>> {
    matrix.validate()?;
    let inv = invert(&matrix.entries)?;
    let p = matrix.dim();
    let mut r2 = 0.0;
    let mut q2 = 0.0;
    for i in 0..p {
        for j in 0..p {
            if i != j {
                let r = matrix.entries[i][j];
                let denom = inv[i][i] * inv[j][j];
                if denom <= 0.0 {
                    return Err(Error::NotPositiveDefinite);
                }
                let q = -inv[i][j] / denom.sqrt();
                r2 += r * r;
                q2 += q * q;
            }
        }
    }
    let total = r2 + q2;
    Ok((total > 0.0).then(|| r2 / total))
}

/// Bartlett's test that the correlation matrix is the identity:
/// `chi2 = -(n - 1 - (2p + 5) / 6) ln det R` on `p (p - 1) / 2` degrees of freedom.
pub fn bartlett(matrix: &CorrelationMatrix, n: usize) -> Result<BartlettTest> {
    matrix.validate()?;
    let p = matrix.dim();
    if n <= p {
        return Err(Error::Input(format!(
            "sample size {n} must exceed the number of variables {p}"
        )));
    }
    let ln_det = ln_det_spd(&matrix.entries)?;
    let factor = n as f64 - 1.0 - (2.0 * p as f64 + 5.0) / 6.0;
    let chi2 = -factor * ln_det;
    // det(I) = 1 gives -0.0
    let chi2 = if chi2 == 0.0 { 0.0 } else { chi2 };
    let df = p * (p - 1) / 2;
    let p_value = if df == 0 { 1.0 } else { chi2_sf(chi2, df as f64) };
    Ok(BartlettTest { chi2, df, p: p_value })
}
