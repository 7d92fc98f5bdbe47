//! Clustering validity: matched misclassification error, Rand index, and the
//! cluster center proximity index (CCPI).

use crate::assignment::{min_cost_assignment, pad_square};
use crate::error::{Error, Result};
use crate::matrix::{euclidean, CentroidSet};

/// Cross-tabulation of predicted clusters (rows) against true classes (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    /// Distinct predicted cluster ids, ascending; row `i` is `pred_ids[i]`.
    pub pred_ids: Vec<usize>,
    /// Distinct true class ids, ascending; column `j` is `true_ids[j]`.
    pub true_ids: Vec<usize>,
    counts: Vec<u64>,
}

impl ContingencyTable {
    pub fn rows(&self) -> usize {
        self.pred_ids.len()
    }

    pub fn cols(&self) -> usize {
        self.true_ids.len()
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.cols() + col]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.chunks_exact(self.cols()).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// Builds a table from raw counts with identity id maps.
    pub fn from_counts(rows: usize, cols: usize, counts: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 || counts.len() != rows * cols {
            return Err(Error::ShapeError(format!(
                "{} counts for a {rows}x{cols} table",
                counts.len()
            )));
        }
        Ok(Self {
            pred_ids: (0..rows).collect(),
            true_ids: (0..cols).collect(),
            counts,
        })
    }
}

pub fn contingency(pred: &[usize], truth: &[usize]) -> Result<ContingencyTable> {
    if pred.len() != truth.len() {
        return Err(Error::ShapeError(format!(
            "{} predictions for {} labels",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::ShapeError("empty labelling".into()));
    }
    let ids = |v: &[usize]| {
        let mut u = v.to_vec();
        u.sort_unstable();
        u.dedup();
        u
    };
    let pred_ids = ids(pred);
    let true_ids = ids(truth);
    let cols = true_ids.len();
    let mut counts = vec![0u64; pred_ids.len() * cols];
    for (p, t) in pred.iter().zip(truth) {
        let r = pred_ids.binary_search(p).unwrap();
        let c = true_ids.binary_search(t).unwrap();
        counts[r * cols + c] += 1;
    }
    Ok(ContingencyTable {
        pred_ids,
        true_ids,
        counts,
    })
}

/// Best injective cluster→class relabelling and the error it leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// `(cluster id, class id)` for every cluster; `None` when there are more
    /// clusters than classes and this one stays unmatched.
    pub pairs: Vec<(usize, Option<usize>)>,
    pub matched: u64,
    pub misclassified: u64,
    pub error_percent: f64,
}

/// Maximizes the number of samples whose cluster maps to their class.
pub fn match_and_error(table: &ContingencyTable) -> Matching {
    let (rows, cols) = (table.rows(), table.cols());
    let cost: Vec<f64> = table.counts.iter().map(|&c| -(c as f64)).collect();
    let (square, n) = pad_square(&cost, rows, cols, 0.0);
    let perm = min_cost_assignment(&square, n);
    let mut matched = 0;
    let pairs = (0..rows)
        .map(|r| {
            let c = perm[r];
            let class = (c < cols).then(|| {
                matched += table.get(r, c);
                table.true_ids[c]
            });
            (table.pred_ids[r], class)
        })
        .collect();
    let total = table.total();
    let misclassified = total - matched;
    Matching {
        pairs,
        matched,
        misclassified,
        error_percent: 100.0 * misclassified as f64 / total as f64,
    }
}

/// Unordered sample-pair agreement counts between two partitions A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// Same subset in A and in B.
    pub a: u64,
    /// Different subsets in A, same subset in B.
    pub b: u64,
    /// Same subset in A, different subsets in B.
    pub c: u64,
    /// Different subsets in both.
    pub d: u64,
}

impl PairCounts {
    pub fn rand(&self) -> f64 {
        (self.a + self.d) as f64 / (self.a + self.b + self.c + self.d) as f64
    }
}

fn pairs_of(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Pair counts from the table via sums of binomial coefficients.
pub fn pair_counts(table: &ContingencyTable) -> PairCounts {
    let total = pairs_of(table.total());
    let a: u64 = table.counts.iter().map(|&n| pairs_of(n)).sum();
    let same_pred: u64 = table.row_sums().into_iter().map(pairs_of).sum();
    let same_true: u64 = table.col_sums().into_iter().map(pairs_of).sum();
    let c = same_pred - a;
    let b = same_true - a;
    PairCounts {
        a,
        b,
        c,
        d: total - a - b - c,
    }
}

/// Fraction of sample pairs on which the two partitions agree.
pub fn rand_index(pred: &[usize], truth: &[usize]) -> Result<f64> {
    if pred.len() < 2 {
        return Err(Error::ShapeError(format!(
            "Rand index needs at least 2 samples, got {}",
            pred.len()
        )));
    }
    Ok(pair_counts(&contingency(pred, truth)?).rand())
}

/// `pairing[i]` is the produced center matched to actual center `i`,
/// minimizing total Euclidean distance.
pub fn pair_centers(actual: &CentroidSet, produced: &CentroidSet) -> Result<Vec<usize>> {
    if actual.k() != produced.k() {
        return Err(Error::ShapeError(format!(
            "{} actual centers vs {} produced",
            actual.k(),
            produced.k()
        )));
    }
    if actual.dim() != produced.dim() {
        return Err(Error::DimensionError {
            expected: actual.dim(),
            found: produced.dim(),
        });
    }
    let k = actual.k();
    let cost: Vec<f64> = actual
        .centers()
        .flat_map(|a| produced.centers().map(move |p| euclidean(a, p)))
        .collect();
    Ok(min_cost_assignment(&cost, k))
}

/// Mean relative coordinate deviation of `init` from `actual`, center `i`
/// against center `i`. Pair the sets first with [`pair_centers`].
pub fn ccpi(actual: &CentroidSet, init: &CentroidSet) -> Result<f64> {
    if actual.k() != init.k() {
        return Err(Error::ShapeError(format!(
            "{} actual centers vs {} initial",
            actual.k(),
            init.k()
        )));
    }
    if actual.dim() != init.dim() {
        return Err(Error::DimensionError {
            expected: actual.dim(),
            found: init.dim(),
        });
    }
    let mut sum = 0.0;
    for (i, (a, c)) in actual.centers().zip(init.centers()).enumerate() {
        for (j, (&aij, &cij)) in a.iter().zip(c).enumerate() {
            if aij == 0.0 {
                return Err(Error::ZeroReferenceCoordinate {
                    center: i,
                    coordinate: j,
                });
            }
            sum += (aij - cij).abs() / aij.abs();
        }
    }
    Ok(sum / (actual.k() * actual.dim()) as f64)
}

/// [`pair_centers`] followed by [`ccpi`].
pub fn ccpi_paired(actual: &CentroidSet, produced: &CentroidSet) -> Result<f64> {
    let pairing = pair_centers(actual, produced)?;
    ccpi(actual, &produced.reordered(&pairing))
}

/// Scores for one clustering against ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub error_percent: f64,
    pub misclassified: u64,
    pub rand_score: f64,
    pub ccpi: Option<f64>,
    pub matching: Vec<(usize, Option<usize>)>,
}

pub fn evaluate(pred: &[usize], truth: &[usize], ccpi: Option<f64>) -> Result<MetricReport> {
    let table = contingency(pred, truth)?;
    let m = match_and_error(&table);
    Ok(MetricReport {
        error_percent: m.error_percent,
        misclassified: m.misclassified,
        rand_score: rand_index(pred, truth)?,
        ccpi,
        matching: m.pairs,
    })
}
