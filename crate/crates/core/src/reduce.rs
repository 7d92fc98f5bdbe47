//! PCA through a cyclic Jacobi eigen-solve of the sample covariance, plus
//! per-column z-score standardization.

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// p × d, row-major; rows are orthonormal.
    pub components: Vec<f64>,
    /// Descending, one per component.
    pub explained_variance: Vec<f64>,
}

impl PcaModel {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn n_components(&self) -> usize {
        self.explained_variance.len()
    }

    pub fn component(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.components[i * d..(i + 1) * d]
    }
}

/// Eigen-decomposition of a symmetric `n × n` matrix.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvector `i` stored in
/// column `i` of the row-major output, unsorted.
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Sample covariance with 1/(N-1) normalization, and the column means.
pub fn covariance(data: &DataMatrix) -> (Vec<f64>, Vec<f64>) {
    let (n, d) = (data.n_samples(), data.dim());
    let mut mean = vec![0.0; d];
    for row in data.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut cov = vec![0.0; d * d];
    for row in data.rows() {
        for i in 0..d {
            let di = row[i] - mean[i];
            for j in i..d {
                cov[i * d + j] += di * (row[j] - mean[j]);
            }
        }
    }
    let denom = (n - 1) as f64;
    for i in 0..d {
        for j in i..d {
            cov[i * d + j] /= denom;
            cov[j * d + i] = cov[i * d + j];
        }
    }
    (mean, cov)
}

/// Fits the top `p` principal components.
///
/// Each component is signed so its largest-magnitude coordinate is positive
/// (ties to the earliest coordinate), which makes projections reproducible.
pub fn pca_fit(data: &DataMatrix, p: usize) -> Result<PcaModel> {
    let (n, d) = (data.n_samples(), data.dim());
    if p == 0 || p > d {
        return Err(Error::DimensionError {
            expected: d,
            found: p,
        });
    }
    if n < 2 {
        return Err(Error::DegenerateInput("PCA needs at least 2 samples".into()));
    }
    let (mean, cov) = covariance(data);
    if (0..d).all(|i| cov[i * d + i] == 0.0) {
        return Err(Error::DegenerateInput("data has zero variance".into()));
    }

    let (values, vectors) = jacobi_eigen(&cov, d);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let mut components = Vec::with_capacity(p * d);
    let mut explained_variance = Vec::with_capacity(p);
    for &col in &order[..p] {
        let mut axis: Vec<f64> = (0..d).map(|r| vectors[r * d + col]).collect();
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        axis.iter_mut().for_each(|x| *x /= norm);
        let mut lead = 0;
        for (i, x) in axis.iter().enumerate() {
            if x.abs() > axis[lead].abs() {
                lead = i;
            }
        }
        if axis[lead] < 0.0 {
            axis.iter_mut().for_each(|x| *x = -*x);
        }
        components.extend(axis);
        explained_variance.push(values[col].max(0.0));
    }
    Ok(PcaModel {
        mean,
        components,
        explained_variance,
    })
}

/// Projects `(x - mean)` onto the model's components; labels are kept.
pub fn pca_transform(model: &PcaModel, data: &DataMatrix) -> Result<DataMatrix> {
    if data.dim() != model.dim() {
        return Err(Error::DimensionError {
            expected: model.dim(),
            found: data.dim(),
        });
    }
    let p = model.n_components();
    let mut centered = vec![0.0; model.dim()];
    let mut out = Vec::with_capacity(data.n_samples() * p);
    for row in data.rows() {
        for ((c, x), m) in centered.iter_mut().zip(row).zip(&model.mean) {
            *c = x - m;
        }
        for i in 0..p {
            out.push(model.component(i).iter().zip(&centered).map(|(a, b)| a * b).sum());
        }
    }
    data.with_values(p, out)
}

/// Column-wise z-scores (sample standard deviation).
pub fn standardize(data: &DataMatrix) -> Result<DataMatrix> {
    let d = data.dim();
    if data.n_samples() < 2 {
        return Err(Error::DegenerateInput("standardizing needs at least 2 samples".into()));
    }
    let (mean, cov) = covariance(data);
    let std: Vec<f64> = (0..d).map(|i| cov[i * d + i].sqrt()).collect();
    if let Some(col) = std.iter().position(|&s| s == 0.0) {
        return Err(Error::DegenerateInput(format!("column {col} is constant")));
    }
    let values = data
        .rows()
        .flat_map(|row| (0..d).map(|j| (row[j] - mean[j]) / std[j]).collect::<Vec<_>>())
        .collect();
    data.with_values(d, values)
}
