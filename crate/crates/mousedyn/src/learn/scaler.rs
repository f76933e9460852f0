//! Per-feature standardization fitted on training data.

const SD_FLOOR: f64 = 1e-12;

/// Mean/standard-deviation scaler. Standard deviations are floored so
/// the transform stays defined for constant features (which map to 0).
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    means: Vec<f64>,
    sds: Vec<f64>,
}

impl Scaler {
    /// Fit on a non-empty training matrix (rows are samples).
    /// Uses the population standard deviation.
    pub fn fit(rows: &[Vec<f64>]) -> Scaler {
        assert!(!rows.is_empty(), "cannot fit a scaler on no data");
        let d = rows[0].len();
        let n = rows.len() as f64;
        let mut means = vec![0.0; d];
        for row in rows {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut sds = vec![0.0; d];
        for row in rows {
            for j in 0..d {
                let e = row[j] - means[j];
                sds[j] += e * e;
            }
        }
        for s in &mut sds {
            *s = (*s / n).sqrt().max(SD_FLOOR);
        }
        Scaler { means, sds }
    }

    /// Identity scaler (mean 0, sd 1) of dimension `d`.
    pub fn identity(d: usize) -> Scaler {
        Scaler {
            means: vec![0.0; d],
            sds: vec![1.0; d],
        }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.sds))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn inverse_transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.sds))
            .map(|(v, (m, s))| v * s + m)
            .collect()
    }
}
