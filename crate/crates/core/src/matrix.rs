//! Row-major sample tables and centroid sets.

use crate::error::{Error, Result};

/// Read-only access to an indexed collection of equal-dimension points.
pub trait PointSet {
    fn len(&self) -> usize;
    fn dim(&self) -> usize;
    fn point(&self, index: usize) -> &[f64];

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl PointSet for [Vec<f64>] {
    fn len(&self) -> usize {
        <[Vec<f64>]>::len(self)
    }
    fn dim(&self) -> usize {
        self.first().map_or(0, Vec::len)
    }
    fn point(&self, index: usize) -> &[f64] {
        &self[index]
    }
}

impl PointSet for Vec<Vec<f64>> {
    fn len(&self) -> usize {
        Vec::len(self)
    }
    fn dim(&self) -> usize {
        self.as_slice().dim()
    }
    fn point(&self, index: usize) -> &[f64] {
        &self[index]
    }
}

impl<const D: usize> PointSet for [[f64; D]] {
    fn len(&self) -> usize {
        <[[f64; D]]>::len(self)
    }
    fn dim(&self) -> usize {
        D
    }
    fn point(&self, index: usize) -> &[f64] {
        &self[index]
    }
}

impl<const D: usize> PointSet for Vec<[f64; D]> {
    fn len(&self) -> usize {
        Vec::len(self)
    }
    fn dim(&self) -> usize {
        D
    }
    fn point(&self, index: usize) -> &[f64] {
        &self[index]
    }
}

#[inline]
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

/// N samples by d attributes, with optional integer class labels.
///
/// Labels are dense indices into `class_names`; loaders assign them in
/// first-occurrence order. Rows are never reordered after construction, so
/// sample indices are stable for every deterministic tie-break downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    name: String,
    dim: usize,
    values: Vec<f64>,
    labels: Option<Vec<usize>>,
    class_names: Vec<String>,
}

impl DataMatrix {
    pub fn from_flat(
        name: impl Into<String>,
        dim: usize,
        values: Vec<f64>,
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DegenerateInput("zero attributes".into()));
        }
        if values.is_empty() {
            return Err(Error::DegenerateInput("no samples".into()));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(Error::ShapeError(format!(
                "{} values do not divide into rows of {dim}",
                values.len()
            )));
        }
        let n = values.len() / dim;
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dim,
                column: pos % dim,
            });
        }
        let class_names = match &labels {
            Some(l) => {
                if l.len() != n {
                    return Err(Error::ShapeError(format!(
                        "{} labels for {n} samples",
                        l.len()
                    )));
                }
                let classes = l.iter().max().map_or(0, |m| m + 1);
                (0..classes).map(|c| c.to_string()).collect()
            }
            None => Vec::new(),
        };
        Ok(Self {
            name: name.into(),
            dim,
            values,
            labels,
            class_names,
        })
    }

    pub fn from_rows(
        name: impl Into<String>,
        rows: &[Vec<f64>],
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionError {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_flat(name, dim, rows.concat(), labels)
    }

    /// Replaces the class names; `names.len()` must cover every label.
    pub fn with_class_names(mut self, names: Vec<String>) -> Result<Self> {
        if let Some(labels) = &self.labels {
            if let Some(&max) = labels.iter().max() {
                if max >= names.len() {
                    return Err(Error::ShapeError(format!(
                        "label {max} has no class name ({} given)",
                        names.len()
                    )));
                }
            }
        }
        self.class_names = names;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_samples(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Keeps only the listed attribute columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::DegenerateInput("no columns selected".into()));
        }
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.dim) {
            return Err(Error::DimensionError {
                expected: self.dim,
                found: bad + 1,
            });
        }
        let values = self
            .rows()
            .flat_map(|r| columns.iter().map(move |&c| r[c]))
            .collect();
        Ok(Self {
            name: self.name.clone(),
            dim: columns.len(),
            values,
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
        })
    }

    /// Same labels and name, new attribute values (e.g. after a projection).
    pub fn with_values(&self, dim: usize, values: Vec<f64>) -> Result<Self> {
        let out = Self::from_flat(self.name.clone(), dim, values, self.labels.clone())?;
        if out.n_samples() != self.n_samples() {
            return Err(Error::ShapeError(format!(
                "{} rows replace {}",
                out.n_samples(),
                self.n_samples()
            )));
        }
        Ok(Self {
            class_names: self.class_names.clone(),
            ..out
        })
    }

    /// Per-class attribute means, ordered by class index.
    ///
    /// Returns `None` when the matrix carries no labels.
    pub fn class_means(&self) -> Option<CentroidSet> {
        let labels = self.labels.as_ref()?;
        let k = self.class_names.len().max(labels.iter().max().map_or(0, |m| m + 1));
        let mut sums = vec![0.0; k * self.dim];
        let mut counts = vec![0usize; k];
        for (row, &l) in self.rows().zip(labels) {
            counts[l] += 1;
            for (s, v) in sums[l * self.dim..(l + 1) * self.dim].iter_mut().zip(row) {
                *s += v;
            }
        }
        for (chunk, &c) in sums.chunks_exact_mut(self.dim).zip(&counts) {
            if c > 0 {
                chunk.iter_mut().for_each(|s| *s /= c as f64);
            }
        }
        Some(CentroidSet {
            dim: self.dim,
            values: sums,
        })
    }
}

impl PointSet for DataMatrix {
    fn len(&self) -> usize {
        self.n_samples()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn point(&self, index: usize) -> &[f64] {
        self.row(index)
    }
}

/// An ordered list of K centers in attribute space.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet {
    dim: usize,
    values: Vec<f64>,
}

impl CentroidSet {
    pub fn from_flat(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 || values.is_empty() || !values.len().is_multiple_of(dim) {
            return Err(Error::ShapeError(format!(
                "{} values do not form centers of dimension {dim}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dim,
                column: pos % dim,
            });
        }
        Ok(Self { dim, values })
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionError {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_flat(dim, points.concat())
    }

    /// Copies the indexed sample rows; later edits never touch `data`.
    pub fn from_samples(data: &DataMatrix, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= data.n_samples()) {
            return Err(Error::ShapeError(format!(
                "sample index {bad} out of range for {} samples",
                data.n_samples()
            )));
        }
        let values = indices.iter().flat_map(|&i| data.row(i).iter().copied()).collect();
        Self::from_flat(data.dim(), values)
    }

    pub fn k(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn centers(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_points(&self) -> Vec<Vec<f64>> {
        self.centers().map(<[f64]>::to_vec).collect()
    }

    /// Reorders centers so that new center `i` is old center `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        let values = order.iter().flat_map(|&i| self.center(i).iter().copied()).collect();
        Self {
            dim: self.dim,
            values,
        }
    }
}

impl PointSet for CentroidSet {
    fn len(&self) -> usize {
        self.k()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn point(&self, index: usize) -> &[f64] {
        self.center(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ragged_rows_rejected() {
        let err = DataMatrix::from_rows("x", &[vec![1.0, 2.0], vec![3.0]], None).unwrap_err();
        assert!(matches!(err, Error::DimensionError { expected: 2, found: 1 }));
    }

    #[test]
    fn non_finite_rejected() {
        let err = DataMatrix::from_rows("x", &[vec![1.0, f64::NAN]], None).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 0, column: 1 }));
    }

    #[test]
    fn label_length_checked() {
        assert!(DataMatrix::from_rows("x", &[vec![1.0]], Some(vec![0, 1])).is_err());
    }

    #[test]
    fn class_means_and_columns() {
        let d = DataMatrix::from_rows(
            "x",
            &[vec![0.0, 1.0, 5.0], vec![2.0, 3.0, 5.0], vec![10.0, 0.0, 5.0]],
            Some(vec![0, 0, 1]),
        )
        .unwrap();
        let means = d.class_means().unwrap();
        assert_eq!(means.center(0), &[1.0, 2.0, 5.0]);
        assert_eq!(means.center(1), &[10.0, 0.0, 5.0]);
        let sub = d.select_columns(&[2, 0]).unwrap();
        assert_eq!(sub.row(2), &[5.0, 10.0]);
        assert_eq!(sub.labels(), d.labels());
    }

    #[test]
    fn centroids_copy_rows() {
        let d = DataMatrix::from_rows("x", &[vec![1.0], vec![2.0]], None).unwrap();
        let c = CentroidSet::from_samples(&d, &[1, 0]).unwrap();
        assert_eq!(c.values(), &[2.0, 1.0]);
        assert_eq!(c.reordered(&[1, 0]).values(), &[1.0, 2.0]);
    }
}
