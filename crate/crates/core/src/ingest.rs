//! Observation matrices and the transforms applied before correlation:
//! standardization, noise augmentation and row subsampling.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// An `n × p` table of observations, stored column-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataMatrix {
    n: usize,
    p: usize,
    values: Vec<f64>,
    column_names: Option<Vec<String>>,
}

impl DataMatrix {
    /// Builds a matrix from column-major storage.
    pub fn from_columns(n: usize, p: usize, values: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::Dimension(format!("need at least 3 observations, got {n}")));
        }
        if p < 2 {
            return Err(Error::Dimension(format!("need at least 2 variables, got {p}")));
        }
        if values.len() != n * p {
            return Err(Error::Dimension(format!(
                "expected {} values for a {n}x{p} matrix, got {}",
                n * p,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos % n,
                column: pos / n,
            });
        }
        Ok(Self {
            n,
            p,
            values,
            column_names: None,
        })
    }

    /// Builds a matrix from a list of rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} entries, expected {p}",
                rows[bad].len()
            )));
        }
        let mut values = Vec::with_capacity(n * p);
        for j in 0..p {
            values.extend(rows.iter().map(|r| r[j]));
        }
        Self::from_columns(n, p, values)
    }

    pub fn with_column_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p {
            return Err(Error::Dimension(format!(
                "{} column names for {} columns",
                names.len(),
                self.p
            )));
        }
        self.column_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.n..(j + 1) * self.n]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[col * self.n + row]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.p).map(|j| self.get(i, j)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    pub fn column_name(&self, j: usize) -> Option<&str> {
        self.column_names.as_ref().map(|c| c[j].as_str())
    }

    fn degenerate(&self, column: usize) -> Error {
        Error::DegenerateColumn {
            column,
            name: self.column_name(column).map(String::from),
        }
    }

    /// Checks that column `j` has nonzero spread relative to its magnitude.
    pub(crate) fn check_spread(&self, j: usize, mean: f64, sum_sq: f64) -> Result<()> {
        let scale = self.column(j).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sd = libm::sqrt(sum_sq / self.n as f64);
        if !(sd > 1e-14 * scale) || !mean.is_finite() {
            return Err(self.degenerate(j));
        }
        Ok(())
    }
}

pub(crate) fn mean_and_ss(col: &[f64]) -> (f64, f64) {
    let n = col.len() as f64;
    let mean = col.iter().sum::<f64>() / n;
    let ss = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    (mean, ss)
}

/// Centers each column and scales it to unit population standard deviation.
pub fn standardize(d: &DataMatrix) -> Result<DataMatrix> {
    let n = d.n;
    let mut values = Vec::with_capacity(d.values.len());
    for j in 0..d.p {
        let col = d.column(j);
        let (mean, ss) = mean_and_ss(col);
        d.check_spread(j, mean, ss)?;
        let sd = libm::sqrt(ss / n as f64);
        values.extend(col.iter().map(|v| (v - mean) / sd));
    }
    Ok(DataMatrix {
        n,
        p: d.p,
        values,
        column_names: d.column_names.clone(),
    })
}

/// Appends `q` columns of independent standard normal draws.
pub fn augment_noise(d: &DataMatrix, q: usize, seed: u64) -> DataMatrix {
    let mut out = d.clone();
    if q == 0 {
        return out;
    }
    let mut rng = rng::seeded(seed);
    out.values.reserve(q * d.n);
    for _ in 0..q * d.n {
        out.values.push(StandardNormal.sample(&mut rng));
    }
    if let Some(names) = out.column_names.as_mut() {
        names.extend((0..q).map(|k| format!("noise_{}", k + 1)));
    }
    out.p += q;
    out
}

/// Draws `m` distinct rows, keeping them in sampled order.
pub fn subsample_rows(d: &DataMatrix, m: usize, seed: u64) -> Result<DataMatrix> {
    if m < 3 || m > d.n {
        return Err(Error::Dimension(format!(
            "subsample size {m} must lie in [3, {}]",
            d.n
        )));
    }
    let mut rng = rng::seeded(seed);
    let rows = index::sample(&mut rng, d.n, m).into_vec();
    let mut values = Vec::with_capacity(m * d.p);
    for j in 0..d.p {
        let col = d.column(j);
        values.extend(rows.iter().map(|&i| col[i]));
    }
    Ok(DataMatrix {
        n: m,
        p: d.p,
        values,
        column_names: d.column_names.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn small() -> DataMatrix {
        DataMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap()
    }

    #[test]
    fn shape_checks() {
        let d = small();
        assert_eq!((d.n(), d.p()), (3, 2));
        assert_eq!(d.row(1), vec![3.0, 4.0]);
        assert!(DataMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).is_err());
        assert!(DataMatrix::from_rows(&[vec![1.0], vec![3.0], vec![4.0]]).is_err());
        assert!(matches!(
            DataMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0], vec![4.0, 1.0]]),
            Err(Error::Dimension(_))
        ));
        assert_eq!(
            DataMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, f64::NAN], vec![4.0, 1.0]]),
            Err(Error::NonFinite { row: 1, column: 1 })
        );
    }

    #[test]
    fn standardize_unit_column() {
        let s = standardize(&small()).unwrap();
        let c = s.column(0);
        assert_abs_diff_eq!(c.iter().sum::<f64>(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.iter().map(|v| v * v).sum::<f64>() / 3.0, 1.0, epsilon = 1e-14);
        let again = standardize(&s).unwrap();
        for (a, b) in s.values().iter().zip(again.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_column_is_degenerate() {
        let d = DataMatrix::from_rows(&[vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0]])
            .unwrap()
            .with_column_names(vec!["a".into(), "b".into()])
            .unwrap();
        assert_eq!(
            standardize(&d),
            Err(Error::DegenerateColumn {
                column: 1,
                name: Some("b".into())
            })
        );
    }

    #[test]
    fn augmentation() {
        let d = small().with_column_names(vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(augment_noise(&d, 0, 1), d);
        let a = augment_noise(&d, 4, 9);
        assert_eq!(a.p(), 6);
        assert_eq!(&a.values()[..6], d.values());
        assert_eq!(a, augment_noise(&d, 4, 9));
        assert_ne!(a, augment_noise(&d, 4, 10));
        assert_eq!(a.column_name(5), Some("noise_4"));
    }

    #[test]
    fn subsampling() {
        let d = small();
        assert!(subsample_rows(&d, 2, 0).is_err());
        assert!(subsample_rows(&d, 4, 0).is_err());
        let s = subsample_rows(&d, 3, 5).unwrap();
        let mut rows: Vec<Vec<f64>> = (0..3).map(|i| s.row(i)).collect();
        rows.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(rows, (0..3).map(|i| d.row(i)).collect::<Vec<_>>());
    }
}
