use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Pearson correlation matrix with the names of the variables it relates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub entries: Vec<Vec<f64>>,
    pub n_samples: usize,
}

impl CorrelationMatrix {
    /// Wraps a pre-computed matrix after checking shape, symmetry, unit
    /// diagonal and range.
    pub fn new(names: Vec<String>, entries: Vec<Vec<f64>>, n_samples: usize) -> Result<Self> {
        let m = Self {
            names,
            entries,
            n_samples,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.entries.len();
        if p == 0 {
            return Err(Error::InvalidMatrix("matrix is empty".into()));
        }
        if self.names.len() != p {
            return Err(Error::InvalidMatrix(format!(
                "{} names for a {p}x{p} matrix",
                self.names.len()
            )));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {p}",
                    i + 1,
                    row.len()
                )));
            }
            if row[i] != 1.0 {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry {} is {}, expected 1",
                    i + 1,
                    row[i]
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({}, {}) = {v} is outside [-1, 1]",
                        i + 1,
                        j + 1
                    )));
                }
                if (v - self.entries[j][i]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidMatrix(format!(
                        "entries ({0}, {1}) and ({1}, {0}) differ",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Pearson correlations between named columns of equal length.
pub fn correlation_matrix(columns: &[(String, Vec<f64>)]) -> Result<CorrelationMatrix> {
    if columns.is_empty() {
        return Err(Error::Input("no indicators supplied".into()));
    }
    let n = columns[0].1.len();
    if n < 3 {
        return Err(Error::Input(format!("at least 3 samples are required, got {n}")));
    }
    let mut centered = Vec::with_capacity(columns.len());
    for (name, values) in columns {
        if values.len() != n {
            return Err(Error::Input(format!(
                "indicator {name} has {} samples, expected {n}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Input(format!("indicator {name} contains non-finite value {v}")));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let dev: Vec<f64> = values.iter().map(|v| v - mean).collect();
        let norm = dev.iter().map(|d| d * d).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Input(format!("indicator {name} has zero variance")));
        }
        centered.push(dev.into_iter().map(|d| d / norm).collect::<Vec<_>>());
    }

    let p = columns.len();
    let mut entries = vec![vec![0.0; p]; p];
    for i in 0..p {
        entries[i][i] = 1.0;
        for j in (i + 1)..p {
            let r: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
            let r = r.clamp(-1.0, 1.0);
            entries[i][j] = r;
            entries[j][i] = r;
        }
    }
    CorrelationMatrix::new(columns.iter().map(|(n, _)| n.clone()).collect(), entries, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(name: &str, v: &[f64]) -> (String, Vec<f64>) {
        (name.to_string(), v.to_vec())
    }

    #[test]
    fn self_and_affine_correlation_is_one() {
        let x = [1.0, 4.0, 2.0, 8.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 3.0).collect();
        let m = correlation_matrix(&[col("x", &x), col("y", &y), col("x2", &x)]).unwrap();
        assert!((m.entries[0][1] - 1.0).abs() < 1e-12);
        assert!((m.entries[0][2] - 1.0).abs() < 1e-12);
        assert_eq!(m.n_samples, 5);
    }

    #[test]
    fn anti_correlation() {
        let m = correlation_matrix(&[col("x", &[1.0, 2.0, 3.0]), col("y", &[3.0, 2.0, 1.0])]).unwrap();
        assert!((m.entries[1][0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_named() {
        let err = correlation_matrix(&[col("x", &[1.0, 2.0, 3.0]), col("flat", &[2.0, 2.0, 2.0])]).unwrap_err();
        assert!(err.to_string().contains("flat"), "{err}");
    }

    #[test]
    fn too_few_samples() {
        assert!(correlation_matrix(&[col("x", &[1.0, 2.0])]).is_err());
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(CorrelationMatrix::new(names.clone(), vec![vec![1.0, 0.5], vec![0.4, 1.0]], 10).is_err());
        assert!(CorrelationMatrix::new(names.clone(), vec![vec![0.9, 0.5], vec![0.5, 1.0]], 10).is_err());
        assert!(CorrelationMatrix::new(names.clone(), vec![vec![1.0, 1.5], vec![1.5, 1.0]], 10).is_err());
        assert!(CorrelationMatrix::new(names, vec![vec![1.0, 0.5], vec![0.5, 1.0]], 10).is_ok());
    }
}
