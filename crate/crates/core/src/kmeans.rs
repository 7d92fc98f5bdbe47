//! Lloyd's K-means: nearest-centroid assignment alternating with mean update.
//!
//! Cost and convergence checks use squared Euclidean distance, the quantity
//! the mean update minimizes, so cost never increases between iterations.

use crate::error::{Error, Result};
use crate::matrix::{squared_euclidean, CentroidSet, DataMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LloydParams {
    pub max_iter: usize,
    /// Secondary stop: maximum centroid displacement. 0 means exact stability.
    pub tol: f64,
}

impl Default for LloydParams {
    fn default() -> Self {
        Self {
            max_iter: 300,
            tol: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub centroids: CentroidSet,
    pub assignment: Vec<usize>,
    pub cost: f64,
    /// Number of centroid updates performed.
    pub iterations: usize,
    pub converged: bool,
    /// Sample-to-centroid distance evaluations spent in assignment passes.
    pub distance_evals: u64,
    /// Cost after the initial assignment and after every iteration.
    pub cost_trace: Vec<f64>,
}

fn check_dim(data: &DataMatrix, centroids: &CentroidSet) -> Result<()> {
    if data.dim() != centroids.dim() {
        return Err(Error::DimensionError {
            expected: data.dim(),
            found: centroids.dim(),
        });
    }
    Ok(())
}

fn check_assignment(data: &DataMatrix, assignment: &[usize], k: usize) -> Result<()> {
    if assignment.len() != data.n_samples() {
        return Err(Error::ShapeError(format!(
            "{} assignments for {} samples",
            assignment.len(),
            data.n_samples()
        )));
    }
    if let Some(&bad) = assignment.iter().find(|&&c| c >= k) {
        return Err(Error::ShapeError(format!("cluster index {bad} not below K = {k}")));
    }
    Ok(())
}

/// Nearest centroid per sample; ties go to the lowest centroid index.
pub fn assign(data: &DataMatrix, centroids: &CentroidSet) -> Result<Vec<usize>> {
    check_dim(data, centroids)?;
    Ok(data
        .rows()
        .map(|row| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, center) in centroids.centers().enumerate() {
                let d = squared_euclidean(row, center);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            best
        })
        .collect())
}

/// Cluster means. An empty cluster is re-seeded at the sample farthest from
/// the new mean of its own cluster (ties to the lowest sample index); each
/// sample re-seeds at most one cluster.
pub fn update_centroids(data: &DataMatrix, assignment: &[usize], k: usize) -> Result<CentroidSet> {
    check_assignment(data, assignment, k)?;
    let dim = data.dim();
    let mut sums = vec![0.0; k * dim];
    let mut counts = vec![0usize; k];
    for (row, &c) in data.rows().zip(assignment) {
        counts[c] += 1;
        for (s, v) in sums[c * dim..(c + 1) * dim].iter_mut().zip(row) {
            *s += v;
        }
    }
    for (chunk, &n) in sums.chunks_exact_mut(dim).zip(&counts) {
        if n > 0 {
            let n = n as f64;
            chunk.iter_mut().for_each(|s| *s /= n);
        }
    }

    let empty: Vec<usize> = (0..k).filter(|&c| counts[c] == 0).collect();
    if !empty.is_empty() {
        let mut slack: Vec<f64> = data
            .rows()
            .zip(assignment)
            .map(|(row, &c)| squared_euclidean(row, &sums[c * dim..(c + 1) * dim]))
            .collect();
        for c in empty {
            let mut far = 0;
            for i in 1..slack.len() {
                if slack[i] > slack[far] {
                    far = i;
                }
            }
            sums[c * dim..(c + 1) * dim].copy_from_slice(data.row(far));
            slack[far] = f64::NEG_INFINITY;
        }
    }
    CentroidSet::from_flat(dim, sums)
}

/// Sum of squared distances from each sample to its assigned centroid.
pub fn cost(data: &DataMatrix, centroids: &CentroidSet, assignment: &[usize]) -> Result<f64> {
    check_dim(data, centroids)?;
    check_assignment(data, assignment, centroids.k())?;
    Ok(data
        .rows()
        .zip(assignment)
        .map(|(row, &c)| squared_euclidean(row, centroids.center(c)))
        .sum())
}

/// Runs Lloyd iterations from `init` until the assignment stops changing,
/// the largest centroid move is within `tol`, or `max_iter` updates ran.
pub fn run_lloyd(data: &DataMatrix, init: &CentroidSet, params: LloydParams) -> Result<ClusterModel> {
    check_dim(data, init)?;
    let k = init.k();
    let n = data.n_samples();
    if k > n {
        return Err(Error::InvalidK {
            k,
            reason: format!("more centroids than the {n} samples"),
        });
    }
    if params.max_iter == 0 {
        return Err(Error::Usage("max_iter must be at least 1".into()));
    }
    if !(params.tol >= 0.0 && params.tol.is_finite()) {
        return Err(Error::Usage(format!("tol must be finite and non-negative, got {}", params.tol)));
    }

    let per_pass = (n * k) as u64;
    let mut centroids = init.clone();
    let mut assignment = assign(data, &centroids)?;
    let mut distance_evals = per_pass;
    let mut cost_trace = vec![cost(data, &centroids, &assignment)?];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_iter {
        let next = update_centroids(data, &assignment, k)?;
        let shift = next
            .centers()
            .zip(centroids.centers())
            .map(|(a, b)| squared_euclidean(a, b))
            .fold(0.0, f64::max)
            .sqrt();
        centroids = next;
        iterations += 1;

        let reassigned = assign(data, &centroids)?;
        distance_evals += per_pass;
        cost_trace.push(cost(data, &centroids, &reassigned)?);
        let unchanged = reassigned == assignment;
        assignment = reassigned;
        if unchanged || shift <= params.tol {
            converged = true;
            break;
        }
    }

    Ok(ClusterModel {
        cost: *cost_trace.last().unwrap(),
        centroids,
        assignment,
        iterations,
        converged,
        distance_evals,
        cost_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn matrix(rows: &[Vec<f64>]) -> DataMatrix {
        DataMatrix::from_rows("t", rows, None).unwrap()
    }

    fn random_rows(seed: u64, n: usize, d: usize) -> Vec<Vec<f64>> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-10.0..10.0)).collect())
            .collect()
    }

    #[test]
    fn assign_examples() {
        let data = matrix(&[vec![0.0, 0.0], vec![10.0, 10.0]]);
        let c = CentroidSet::from_points(&[vec![0.0, 0.0], vec![10.0, 10.0]]).unwrap();
        assert_eq!(assign(&data, &c).unwrap(), vec![0, 1]);

        let mid = matrix(&[vec![5.0, 5.0]]);
        assert_eq!(assign(&mid, &c).unwrap(), vec![0]);

        let c3 = CentroidSet::from_points(&[vec![0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(assign(&data, &c3), Err(Error::DimensionError { .. })));
    }

    #[test]
    fn assign_matches_double_loop() {
        let rows = random_rows(50, 50, 2);
        let data = matrix(&rows);
        let cents = random_rows(51, 3, 2);
        let c = CentroidSet::from_points(&cents).unwrap();
        let expected: Vec<usize> = rows
            .iter()
            .map(|r| {
                let d: Vec<f64> = cents
                    .iter()
                    .map(|c| (r[0] - c[0]).powi(2) + (r[1] - c[1]).powi(2))
                    .collect();
                let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
                d.iter().position(|&x| x == min).unwrap()
            })
            .collect();
        assert_eq!(assign(&data, &c).unwrap(), expected);
    }

    #[test]
    fn update_examples() {
        let data = matrix(&[vec![0.0, 0.0], vec![2.0, 0.0]]);
        let c = update_centroids(&data, &[0, 0], 1).unwrap();
        assert_eq!(c.center(0), &[1.0, 0.0]);

        let rows = random_rows(2, 6, 3);
        let data = matrix(&rows);
        let c = update_centroids(&data, &[0, 1, 2, 3, 4, 5], 6).unwrap();
        assert_eq!(c.to_points(), rows);
    }

    #[test]
    fn update_matches_per_cluster_mean() {
        let rows = random_rows(30, 30, 4);
        let data = matrix(&rows);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let mut assignment: Vec<usize> = (0..30).map(|_| rng.random_range(0..4)).collect();
        assignment[..4].copy_from_slice(&[0, 1, 2, 3]);
        let c = update_centroids(&data, &assignment, 4).unwrap();
        for k in 0..4 {
            let members: Vec<&Vec<f64>> = rows
                .iter()
                .zip(&assignment)
                .filter(|(_, &a)| a == k)
                .map(|(r, _)| r)
                .collect();
            for j in 0..4 {
                let mean = members.iter().map(|r| r[j]).sum::<f64>() / members.len() as f64;
                assert!((c.center(k)[j] - mean).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn empty_cluster_reseeded_at_farthest_sample() {
        let data = matrix(&[vec![0.0], vec![1.0], vec![2.0], vec![10.0]]);
        let c = update_centroids(&data, &[0, 0, 0, 0], 3).unwrap();
        // Mean is 3.25: sample 3 is farthest, then sample 0.
        assert_eq!(c.center(0), &[3.25]);
        assert_eq!(c.center(1), &[10.0]);
        assert_eq!(c.center(2), &[0.0]);
    }

    #[test]
    fn cost_examples() {
        let data = matrix(&[vec![0.0, 0.0]]);
        let c = CentroidSet::from_points(&[vec![3.0, 4.0]]).unwrap();
        assert_eq!(cost(&data, &c, &[0]).unwrap(), 25.0);

        let rows = random_rows(9, 5, 2);
        let data = matrix(&rows);
        let at = CentroidSet::from_points(&rows).unwrap();
        assert_eq!(cost(&data, &at, &[0, 1, 2, 3, 4]).unwrap(), 0.0);
    }

    #[test]
    fn cost_matches_summation_oracle() {
        let rows = random_rows(70, 40, 3);
        let cents = random_rows(71, 4, 3);
        let data = matrix(&rows);
        let c = CentroidSet::from_points(&cents).unwrap();
        let assignment: Vec<usize> = (0..40).map(|i| i % 4).collect();
        let mut oracle = 0.0;
        for (r, &a) in rows.iter().zip(&assignment) {
            for j in 0..3 {
                oracle += (r[j] - cents[a][j]) * (r[j] - cents[a][j]);
            }
        }
        let got = cost(&data, &c, &assignment).unwrap();
        assert!((got - oracle).abs() <= 1e-9 * oracle);
    }

    #[test]
    fn lloyd_from_true_centers_is_a_fixed_point() {
        let mut rows = Vec::new();
        let mut truth = Vec::new();
        for (k, center) in [[0.0, 0.0], [50.0, 0.0], [0.0, 50.0]].iter().enumerate() {
            for i in 0..10 {
                let t = i as f64;
                rows.push(vec![center[0] + (t * 0.7).sin(), center[1] + (t * 1.3).cos()]);
                truth.push(k);
            }
        }
        let data = matrix(&rows);
        let init = update_centroids(&data, &truth, 3).unwrap();
        let model = run_lloyd(&data, &init, LloydParams::default()).unwrap();
        assert!(model.converged);
        assert!(model.iterations <= 2);
        assert_eq!(model.assignment, truth);
    }

    #[test]
    fn single_cluster_is_global_mean() {
        let rows = random_rows(4, 25, 2);
        let data = matrix(&rows);
        let init = CentroidSet::from_points(&rows[3..4]).unwrap();
        let model = run_lloyd(&data, &init, LloydParams::default()).unwrap();
        let mean: Vec<f64> = (0..2)
            .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / 25.0)
            .collect();
        let scatter: f64 = rows
            .iter()
            .map(|r| (r[0] - mean[0]).powi(2) + (r[1] - mean[1]).powi(2))
            .sum();
        for j in 0..2 {
            assert!((model.centroids.center(0)[j] - mean[j]).abs() < 1e-12);
        }
        assert!((model.cost - scatter).abs() < 1e-9 * scatter);
    }

    #[test]
    fn k_equals_n_has_zero_cost() {
        let rows = random_rows(8, 12, 3);
        let data = matrix(&rows);
        let init = CentroidSet::from_points(&rows).unwrap();
        let model = run_lloyd(&data, &init, LloydParams::default()).unwrap();
        assert_eq!(model.cost, 0.0);
        assert_eq!(model.assignment, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_bad_parameters() {
        let data = matrix(&[vec![0.0], vec![1.0]]);
        let init = CentroidSet::from_points(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert!(matches!(
            run_lloyd(&data, &init, LloydParams::default()),
            Err(Error::InvalidK { k: 3, .. })
        ));
        let init = CentroidSet::from_points(&[vec![0.0]]).unwrap();
        let zero = LloydParams { max_iter: 0, tol: 0.0 };
        assert!(run_lloyd(&data, &init, zero).is_err());
    }

    #[test]
    fn rerun_on_converged_model_changes_nothing() {
        let rows = random_rows(12, 60, 2);
        let data = matrix(&rows);
        let init = CentroidSet::from_points(&rows[..4]).unwrap();
        let first = run_lloyd(&data, &init, LloydParams::default()).unwrap();
        assert!(first.converged);
        let second = run_lloyd(&data, &first.centroids, LloydParams::default()).unwrap();
        assert_eq!(second.centroids, first.centroids);
        assert_eq!(second.assignment, first.assignment);
        assert_eq!(second.cost, first.cost);
        assert_eq!(second.iterations, 1);
        let again = run_lloyd(&data, &init, LloydParams::default()).unwrap();
        assert_eq!(again, first);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn cost_never_increases(
            seed in any::<u64>(),
            n in 5usize..60,
            d in 1usize..4,
            k in 1usize..6,
        ) {
            let k = k.min(n);
            let rows = random_rows(seed, n, d);
            let data = matrix(&rows);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let picks = rand::seq::index::sample(&mut rng, n, k).into_vec();
            let init = CentroidSet::from_samples(&data, &picks).unwrap();
            let model = run_lloyd(&data, &init, LloydParams::default()).unwrap();
            for w in model.cost_trace.windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12);
            }
            let recomputed = cost(&data, &model.centroids, &model.assignment).unwrap();
            prop_assert_eq!(recomputed, model.cost);
            prop_assert!(model.assignment.iter().all(|&c| c < k));
        }
    }
}
