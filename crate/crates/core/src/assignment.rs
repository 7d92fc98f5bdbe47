//! Minimum-cost square assignment: exhaustive for small n, Hungarian beyond.

/// Largest size solved by permutation enumeration (8! = 40320 candidates).
pub(crate) const EXHAUSTIVE_LIMIT: usize = 8;

/// Solves an `n × n` row-major cost matrix; returns the column for each row.
///
/// For `n <= EXHAUSTIVE_LIMIT` the lexicographically first optimal
/// permutation is returned, which makes tie-breaking deterministic.
pub(crate) fn min_cost_assignment(cost: &[f64], n: usize) -> Vec<usize> {
    debug_assert_eq!(cost.len(), n * n);
    if n == 0 {
        return Vec::new();
    }
    if n <= EXHAUSTIVE_LIMIT {
        exhaustive(cost, n)
    } else {
        hungarian(cost, n)
    }
}

/// Pads a `rows × cols` matrix to square with `fill`.
pub(crate) fn pad_square(cost: &[f64], rows: usize, cols: usize, fill: f64) -> (Vec<f64>, usize) {
    let n = rows.max(cols);
    let mut out = vec![fill; n * n];
    for r in 0..rows {
        out[r * n..r * n + cols].copy_from_slice(&cost[r * cols..(r + 1) * cols]);
    }
    (out, n)
}

fn exhaustive(cost: &[f64], n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let total = |p: &[usize]| p.iter().enumerate().map(|(r, &c)| cost[r * n + c]).sum::<f64>();
    let mut best = perm.clone();
    let mut best_cost = total(&perm);
    while next_permutation(&mut perm) {
        let c = total(&perm);
        if c < best_cost {
            best_cost = c;
            best.copy_from_slice(&perm);
        }
    }
    best
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Shortest augmenting path Hungarian method with potentials, O(n³).
fn hungarian(cost: &[f64], n: usize) -> Vec<usize> {
    let inf = f64::INFINITY;
    // 1-based with a virtual column 0.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = inf;
            let mut col1 = 0;
            for c in 1..=n {
                if !used[c] {
                    let cur = cost[(r0 - 1) * n + (c - 1)] - u[r0] - v[c];
                    if cur < minv[c] {
                        minv[c] = cur;
                        way[c] = col0;
                    }
                    if minv[c] < delta {
                        delta = minv[c];
                        col1 = c;
                    }
                }
            }
            for c in 0..=n {
                if used[c] {
                    u[owner[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut result = vec![0; n];
    for c in 1..=n {
        if owner[c] != 0 {
            result[owner[c] - 1] = c - 1;
        }
    }
    result
}
