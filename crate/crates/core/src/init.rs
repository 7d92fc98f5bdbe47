//! Initial centroid selection.
//!
//! [`proposed_init`] is deterministic: the first two centroids are the
//! farthest pair of samples (found over the convex hull in 2-D), each further
//! centroid is the remaining candidate with the largest sum of Euclidean
//! distances to the centroids chosen so far, and after every pick the new
//! centroid's `M` nearest remaining samples are removed from candidacy so that
//! two centroids are unlikely to land in one cluster.
//!
//! [`random_init`] is the seeded uniform baseline.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::farthest_pair;
use crate::matrix::{euclidean, squared_euclidean, CentroidSet, DataMatrix};

/// How many nearest neighbors to discard around each selected centroid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MPolicy {
    /// `m = floor(N / K)`, capped at the largest feasible value.
    #[default]
    Auto,
    Explicit(usize),
}

impl std::fmt::Display for MPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MPolicy::Auto => f.write_str("auto"),
            MPolicy::Explicit(m) => write!(f, "{m}"),
        }
    }
}

impl std::str::FromStr for MPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(MPolicy::Auto);
        }
        s.parse()
            .map(MPolicy::Explicit)
            .map_err(|_| format!("expected `auto` or a non-negative integer, got `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InitParams {
    pub k: usize,
    pub m: MPolicy,
    /// Find the farthest pair over the convex hull when the data is 2-D.
    pub hull_shortcut: bool,
}

impl InitParams {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            m: MPolicy::Auto,
            hull_shortcut: true,
        }
    }

    pub fn with_m(mut self, m: MPolicy) -> Self {
        self.m = m;
        self
    }
}

/// Boolean mask of samples still eligible to become a centroid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    active: Vec<bool>,
    remaining: usize,
}

impl CandidateSet {
    pub fn all(n: usize) -> Self {
        Self {
            active: vec![true; n],
            remaining: n,
        }
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn deactivate(&mut self, i: usize) {
        if std::mem::replace(&mut self.active[i], false) {
            self.remaining -= 1;
        }
    }

    pub fn active_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.active.iter().enumerate().filter(|(_, &a)| a).map(|(i, _)| i)
    }
}

/// What [`discard_neighbors`] removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscardOutcome {
    /// Neighbors removed, nearest first; excludes the center itself.
    pub removed: Vec<usize>,
    /// How many of the requested `M` could not be removed.
    pub shortfall: usize,
}

/// The result of [`proposed_seeds`]: which samples were picked, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeding {
    pub indices: Vec<usize>,
    pub m: usize,
}

fn check_k(n: usize, k: usize, min_k: usize) -> Result<()> {
    if k < min_k {
        return Err(Error::InvalidK {
            k,
            reason: format!("at least {min_k} centroids are required"),
        });
    }
    if k > n {
        return Err(Error::InvalidK {
            k,
            reason: format!("more centroids than the {n} samples"),
        });
    }
    Ok(())
}

/// Largest M that still leaves a candidate for the K-th selection:
/// `(K - 1)(M + 1) <= N - 1`. With K = 2 the discard never matters.
pub fn max_feasible_m(n: usize, k: usize) -> usize {
    if k <= 2 || n < k {
        return n.saturating_sub(1);
    }
    ((n - 1) / (k - 1)).saturating_sub(1)
}

/// Turns an M policy into a concrete discard count for N samples and K clusters.
pub fn resolve_m(n: usize, k: usize, policy: MPolicy) -> Result<usize> {
    check_k(n, k, 2)?;
    let max_feasible = max_feasible_m(n, k);
    match policy {
        MPolicy::Auto => Ok((n / k).min(max_feasible)),
        MPolicy::Explicit(m) if m <= max_feasible => Ok(m),
        MPolicy::Explicit(m) => Err(Error::InvalidM {
            m,
            n,
            k,
            max_feasible,
        }),
    }
}

/// Deactivates `center` and its `m` nearest active samples.
///
/// Nearness is Euclidean with ties to the lower index. Running out of active
/// samples is reported as a shortfall, not an error.
pub fn discard_neighbors(
    data: &DataMatrix,
    center: usize,
    m: usize,
    candidates: &mut CandidateSet,
) -> DiscardOutcome {
    candidates.deactivate(center);
    let origin = data.row(center);
    let mut near: Vec<(f64, usize)> = candidates
        .active_indices()
        .map(|i| (squared_euclidean(origin, data.row(i)), i))
        .collect();
    let take = m.min(near.len());
    if take < near.len() {
        near.select_nth_unstable_by(take, |a, b| a.partial_cmp(b).unwrap());
        near.truncate(take);
    }
    near.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let removed: Vec<usize> = near.into_iter().map(|(_, i)| i).collect();
    for &i in &removed {
        candidates.deactivate(i);
    }
    DiscardOutcome {
        shortfall: m - removed.len(),
        removed,
    }
}

/// Active sample with the largest summed Euclidean distance to `chosen`.
pub fn select_next_centroid(
    data: &DataMatrix,
    chosen: &CentroidSet,
    candidates: &CandidateSet,
) -> Result<usize> {
    if chosen.dim() != data.dim() {
        return Err(Error::DimensionError {
            expected: data.dim(),
            found: chosen.dim(),
        });
    }
    let mut best: Option<(usize, f64)> = None;
    for i in candidates.active_indices() {
        let row = data.row(i);
        let total: f64 = chosen.centers().map(|c| euclidean(c, row)).sum();
        if best.is_none_or(|(_, b)| total > b) {
            best = Some((i, total));
        }
    }
    best.map(|(i, _)| i).ok_or(Error::ExhaustedCandidates {
        m: 0,
        k: chosen.k() + 1,
        selected: chosen.k(),
        largest_feasible_m: max_feasible_m(data.n_samples(), chosen.k() + 1),
    })
}

/// Runs the selection with a fixed discard count and no feasibility pre-check.
pub fn seeds_with_m(data: &DataMatrix, k: usize, m: usize, hull_shortcut: bool) -> Result<Vec<usize>> {
    let n = data.n_samples();
    check_k(n, k, 2)?;

    let pair = farthest_pair(data, hull_shortcut)?;
    let mut chosen = vec![pair.index_a, pair.index_b];
    let mut candidates = CandidateSet::all(n);
    candidates.deactivate(pair.index_a);
    candidates.deactivate(pair.index_b);
    if k > 2 {
        discard_neighbors(data, pair.index_a, m, &mut candidates);
        discard_neighbors(data, pair.index_b, m, &mut candidates);
    }

    while chosen.len() < k {
        if candidates.remaining() == 0 {
            return Err(Error::ExhaustedCandidates {
                m,
                k,
                selected: chosen.len(),
                largest_feasible_m: max_feasible_m(n, k),
            });
        }
        let centers = CentroidSet::from_samples(data, &chosen)?;
        let next = select_next_centroid(data, &centers, &candidates)?;
        chosen.push(next);
        candidates.deactivate(next);
        if chosen.len() < k {
            discard_neighbors(data, next, m, &mut candidates);
        }
    }
    Ok(chosen)
}

/// Sample indices picked by the hull/farthest-sum procedure, in pick order.
pub fn proposed_seeds(data: &DataMatrix, params: &InitParams) -> Result<Seeding> {
    let m = resolve_m(data.n_samples(), params.k, params.m)?;
    let indices = seeds_with_m(data, params.k, m, params.hull_shortcut)?;
    Ok(Seeding { indices, m })
}

/// Initial centroids (copies of data rows) from the hull/farthest-sum procedure.
pub fn proposed_init(data: &DataMatrix, params: &InitParams) -> Result<CentroidSet> {
    let seeding = proposed_seeds(data, params)?;
    CentroidSet::from_samples(data, &seeding.indices)
}

/// K distinct sample indices drawn uniformly without replacement.
pub fn random_seeds(n: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    check_k(n, k, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(rand::seq::index::sample(&mut rng, n, k).into_vec())
}

pub fn random_init(data: &DataMatrix, k: usize, seed: u64) -> Result<CentroidSet> {
    let indices = random_seeds(data.n_samples(), k, seed)?;
    CentroidSet::from_samples(data, &indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::farthest_pair_bruteforce;
    use proptest::prelude::*;
    use rand::Rng;

    fn matrix(rows: &[Vec<f64>]) -> DataMatrix {
        DataMatrix::from_rows("t", rows, None).unwrap()
    }

    /// Straight transcription of the procedure: every distance recomputed
    /// from scratch with plain loops, active set as a list.
    fn simulate(rows: &[Vec<f64>], k: usize, m: usize) -> Option<Vec<usize>> {
        let n = rows.len();
        let dist = |a: usize, b: usize| -> f64 {
            rows[a].iter().zip(&rows[b]).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
        };
        let mut best = (0, 1, -1.0);
        for i in 0..n {
            for j in i + 1..n {
                if dist(i, j) > best.2 {
                    best = (i, j, dist(i, j));
                }
            }
        }
        let mut chosen = vec![best.0, best.1];
        let mut active: Vec<usize> = (0..n).filter(|&i| i != best.0 && i != best.1).collect();
        let discard = |c: usize, active: &mut Vec<usize>| {
            active.retain(|&i| i != c);
            let mut order = active.clone();
            order.sort_by(|&a, &b| dist(c, a).partial_cmp(&dist(c, b)).unwrap().then(a.cmp(&b)));
            let gone: Vec<usize> = order.into_iter().take(m).collect();
            active.retain(|i| !gone.contains(i));
        };
        if k > 2 {
            discard(best.0, &mut active);
            discard(best.1, &mut active);
        }
        while chosen.len() < k {
            if active.is_empty() {
                return None;
            }
            let mut pick = active[0];
            let mut pick_sum = f64::NEG_INFINITY;
            for &j in &active {
                let s: f64 = chosen.iter().map(|&c| dist(c, j)).sum();
                if s > pick_sum {
                    pick_sum = s;
                    pick = j;
                }
            }
            chosen.push(pick);
            active.retain(|&i| i != pick);
            if chosen.len() < k {
                discard(pick, &mut active);
            }
        }
        Some(chosen)
    }

    #[test]
    fn k_two_is_the_farthest_pair() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|_| vec![rng.random_range(0.0..5.0), rng.random_range(0.0..5.0)])
            .collect();
        let data = matrix(&rows);
        let fp = farthest_pair_bruteforce(&data).unwrap();
        for m in [MPolicy::Auto, MPolicy::Explicit(0), MPolicy::Explicit(38)] {
            let s = proposed_seeds(&data, &InitParams::new(2).with_m(m)).unwrap();
            assert_eq!(s.indices, vec![fp.index_a, fp.index_b]);
        }
    }

    #[test]
    fn select_next_hand_example() {
        let data = matrix(&[vec![0.0, 0.0], vec![10.0, 0.0], vec![5.0, 5.0], vec![1.0, 1.0]]);
        let chosen = CentroidSet::from_samples(&data, &[0, 1]).unwrap();
        let mut cand = CandidateSet::all(4);
        cand.deactivate(0);
        cand.deactivate(1);
        assert_eq!(select_next_centroid(&data, &chosen, &cand).unwrap(), 2);
        cand.deactivate(2);
        assert_eq!(select_next_centroid(&data, &chosen, &cand).unwrap(), 3);
        cand.deactivate(3);
        assert!(matches!(
            select_next_centroid(&data, &chosen, &cand),
            Err(Error::ExhaustedCandidates { .. })
        ));
    }

    #[test]
    fn discard_examples() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let data = matrix(&rows);

        let mut c = CandidateSet::all(10);
        let out = discard_neighbors(&data, 4, 0, &mut c);
        assert!(out.removed.is_empty());
        assert_eq!(c.remaining(), 9);
        assert!(!c.is_active(4));

        let mut c = CandidateSet::all(10);
        let out = discard_neighbors(&data, 0, 3, &mut c);
        assert_eq!(out.removed, vec![1, 2, 3]);
        assert_eq!(c.active_indices().collect::<Vec<_>>(), vec![4, 5, 6, 7, 8, 9]);

        let mut c = CandidateSet::all(10);
        let out = discard_neighbors(&data, 5, 12, &mut c);
        assert_eq!(c.remaining(), 0);
        assert_eq!(out.shortfall, 3);
        // Equidistant neighbors 4 and 6: lower index first.
        assert_eq!(&out.removed[..2], &[4, 6]);
    }

    #[test]
    fn resolve_m_examples() {
        assert_eq!(resolve_m(150, 3, MPolicy::Auto).unwrap(), 50);
        assert_eq!(resolve_m(75, 4, MPolicy::Auto).unwrap(), 18);
        assert_eq!(resolve_m(75, 4, MPolicy::Explicit(0)).unwrap(), 0);
        assert_eq!(resolve_m(75, 4, MPolicy::Explicit(23)).unwrap(), 23);
        assert!(matches!(
            resolve_m(75, 4, MPolicy::Explicit(24)),
            Err(Error::InvalidM { max_feasible: 23, .. })
        ));
        // Auto capped by feasibility on tiny inputs.
        assert_eq!(resolve_m(7, 3, MPolicy::Auto).unwrap(), 2);
        assert!(matches!(resolve_m(5, 1, MPolicy::Auto), Err(Error::InvalidK { .. })));
        assert!(matches!(resolve_m(5, 6, MPolicy::Auto), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn exhaustion_reports_largest_feasible_m() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let data = matrix(&rows);
        let err = seeds_with_m(&data, 4, 3, true).unwrap_err();
        assert!(matches!(
            err,
            Error::ExhaustedCandidates { selected: 3, largest_feasible_m: 2, .. }
        ));
        assert_eq!(seeds_with_m(&data, 4, 2, true).unwrap().len(), 4);
    }

    #[test]
    fn five_blobs_get_one_seed_each() {
        let centers = [[2.0, 2.0], [18.0, 3.0], [10.0, 10.0], [3.0, 17.0], [17.0, 18.0]];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(35);
        let mut rows = Vec::new();
        let mut truth = Vec::new();
        for (k, c) in centers.iter().enumerate() {
            for _ in 0..7 {
                rows.push(vec![c[0] + rng.random_range(-1.0..1.0), c[1] + rng.random_range(-1.0..1.0)]);
                truth.push(k);
            }
        }
        let data = matrix(&rows);
        let s = proposed_seeds(&data, &InitParams::new(5)).unwrap();
        let mut hit: Vec<usize> = s.indices.iter().map(|&i| truth[i]).collect();
        hit.sort_unstable();
        assert_eq!(hit, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn random_init_examples() {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
        let data = matrix(&rows);
        let mut all = random_seeds(6, 6, 99).unwrap();
        all.sort_unstable();
        assert_eq!(all, (0..6).collect::<Vec<_>>());
        assert_eq!(random_init(&data, 3, 7).unwrap(), random_init(&data, 3, 7).unwrap());
        assert!(matches!(random_init(&data, 7, 1), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn random_single_draw_is_uniform() {
        let mut counts = [0usize; 4];
        for seed in 0..10_000u64 {
            counts[random_seeds(4, 1, seed).unwrap()[0]] += 1;
        }
        // Binomial(10000, 1/4): sigma = sqrt(10000 * 0.25 * 0.75) ~ 43.3
        let sigma = (10_000.0f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - 2500.0).abs() <= 4.0 * sigma, "{counts:?}");
        }
    }

    fn small_instance() -> impl Strategy<Value = (Vec<Vec<f64>>, usize)> {
        (4usize..=12, 1usize..=3).prop_flat_map(|(n, d)| {
            (
                prop::collection::vec(prop::collection::vec(-20i32..20, d), n)
                    .prop_map(|v| v.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect()),
                Just(n),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn matches_bruteforce_simulator((rows, n) in small_instance(), k in 2usize..=4, m in 0usize..4) {
            prop_assume!(k <= n);
            let data = matrix(&rows);
            let expected = simulate(&rows, k, m);
            // Hull and brute force give the same pair; exercise both paths.
            for hull in [false, true] {
                match seeds_with_m(&data, k, m, hull) {
                    Ok(got) => prop_assert_eq!(Some(got), expected.clone()),
                    Err(Error::ExhaustedCandidates { .. }) => prop_assert!(expected.is_none()),
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                }
            }
        }

        #[test]
        fn seeds_are_distinct_and_separated(
            (rows, n) in small_instance(),
            k in 2usize..=4,
            m in 0usize..3,
        ) {
            prop_assume!(k <= n);
            let data = matrix(&rows);
            let Ok(seeds) = seeds_with_m(&data, k, m, true) else { return Ok(()) };
            let mut uniq = seeds.clone();
            uniq.sort_unstable();
            uniq.dedup();
            prop_assert_eq!(uniq.len(), k);

            let fp = farthest_pair_bruteforce(&data).unwrap();
            prop_assert_eq!(&seeds[..2], &[fp.index_a, fp.index_b]);

            // Replay: a later seed never sits among an earlier seed's
            // discarded neighbors.
            let mut cand = CandidateSet::all(n);
            cand.deactivate(seeds[0]);
            cand.deactivate(seeds[1]);
            let mut gone = Vec::new();
            if k > 2 {
                gone.extend(discard_neighbors(&data, seeds[0], m, &mut cand).removed);
                gone.extend(discard_neighbors(&data, seeds[1], m, &mut cand).removed);
            }
            for t in 2..k {
                prop_assert!(!gone.contains(&seeds[t]));
                cand.deactivate(seeds[t]);
                gone.extend(discard_neighbors(&data, seeds[t], m, &mut cand).removed);
            }
        }

        #[test]
        fn proposed_is_deterministic((rows, n) in small_instance()) {
            let data = matrix(&rows);
            let k = 3.min(n);
            let a = proposed_init(&data, &InitParams::new(k));
            let b = proposed_init(&data, &InitParams::new(k));
            prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        }
    }
}
