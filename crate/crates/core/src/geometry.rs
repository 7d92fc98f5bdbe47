//! 2-D convex hull and farthest-pair search.
//!
//! The diameter of a point set is always realized by two hull vertices, so in
//! two dimensions the O(N²) pair scan only needs to run over the hull.

use crate::error::{Error, Result};
use crate::matrix::{squared_euclidean, PointSet};

/// Hull vertices as indices into the source point set, counter-clockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullPolygon {
    pub vertices: Vec<usize>,
}

impl HullPolygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// The two samples at maximum Euclidean distance. `index_a < index_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarthestPair {
    pub index_a: usize,
    pub index_b: usize,
    pub distance: f64,
}

/// Twice the signed area of triangle (o, a, b); positive when o→a→b turns left.
#[inline]
pub fn orientation(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Quickhull over a 2-D point set.
///
/// Points lying on a hull edge (including duplicates of a vertex) are not
/// reported as vertices. Among coincident candidates the lowest index wins.
pub fn convex_hull_2d<P: PointSet + ?Sized>(points: &P) -> Result<HullPolygon> {
    if points.dim() != 2 {
        return Err(Error::DimensionError {
            expected: 2,
            found: points.dim(),
        });
    }
    let n = points.len();
    if n < 3 {
        return Err(Error::DegenerateInput(format!(
            "convex hull needs at least 3 points, got {n}"
        )));
    }

    let key = |i: usize| {
        let p = points.point(i);
        (p[0], p[1])
    };
    let mut left = 0;
    let mut right = 0;
    for i in 1..n {
        let (x, y) = key(i);
        let (lx, ly) = key(left);
        if x < lx || (x == lx && y < ly) {
            left = i;
        }
        let (rx, ry) = key(right);
        if x > rx || (x == rx && y > ry) {
            right = i;
        }
    }

    let all: Vec<usize> = (0..n).collect();
    let below = outside(points, left, right, &all);
    let above = outside(points, right, left, &all);

    let mut vertices = vec![left];
    chain(points, left, right, &below, &mut vertices);
    vertices.push(right);
    chain(points, right, left, &above, &mut vertices);

    if vertices.len() < 3 {
        return Err(Error::DegenerateInput("all points are collinear".into()));
    }
    Ok(HullPolygon { vertices })
}

/// Indices strictly to the right of the directed line `from → to`.
fn outside<P: PointSet + ?Sized>(points: &P, from: usize, to: usize, set: &[usize]) -> Vec<usize> {
    let (a, b) = (points.point(from), points.point(to));
    set.iter()
        .copied()
        .filter(|&i| orientation(a, b, points.point(i)) < 0.0)
        .collect()
}

/// Appends, in order, the hull vertices strictly between `from` and `to`.
fn chain<P: PointSet + ?Sized>(
    points: &P,
    from: usize,
    to: usize,
    set: &[usize],
    out: &mut Vec<usize>,
) {
    let (a, b) = (points.point(from), points.point(to));
    // Deepest point; among equally deep ones the extreme one along a→b, so a
    // point in the middle of a flat edge is never picked.
    let mut far: Option<(usize, f64, f64)> = None;
    for &i in set {
        let p = points.point(i);
        let depth = -orientation(a, b, p);
        let along = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]);
        let better = match far {
            None => true,
            Some((f, fd, fa)) => depth > fd || (depth == fd && (along > fa || (along == fa && i < f))),
        };
        if better {
            far = Some((i, depth, along));
        }
    }
    let Some((far, _, _)) = far else { return };

    let first = outside(points, from, far, set);
    chain(points, from, far, &first, out);
    out.push(far);
    let second = outside(points, far, to, set);
    chain(points, far, to, &second, out);
}

fn best_pair<P: PointSet + ?Sized>(points: &P, candidates: &[usize]) -> (usize, usize, f64) {
    let mut best = (candidates[0], candidates[1], -1.0);
    for (pos, &i) in candidates.iter().enumerate() {
        let p = points.point(i);
        for &j in &candidates[pos + 1..] {
            let d = squared_euclidean(p, points.point(j));
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            if d > best.2 || (d == best.2 && (a, b) < (best.0, best.1)) {
                best = (a, b, d);
            }
        }
    }
    best
}

/// Exhaustive O(N²) farthest pair in any dimension.
///
/// Ties are broken by the lexicographically smallest `(index_a, index_b)`.
pub fn farthest_pair_bruteforce<P: PointSet + ?Sized>(points: &P) -> Result<FarthestPair> {
    let n = points.len();
    if n < 2 {
        return Err(Error::DegenerateInput(format!(
            "farthest pair needs at least 2 points, got {n}"
        )));
    }
    let all: Vec<usize> = (0..n).collect();
    let (index_a, index_b, d2) = best_pair(points, &all);
    Ok(FarthestPair {
        index_a,
        index_b,
        distance: d2.sqrt(),
    })
}

/// Farthest pair restricted to hull vertices; same answer as brute force.
pub fn farthest_pair_via_hull<P: PointSet + ?Sized>(points: &P) -> Result<FarthestPair> {
    let hull = convex_hull_2d(points)?;
    let (index_a, index_b, d2) = best_pair(points, &hull.vertices);
    Ok(FarthestPair {
        index_a,
        index_b,
        distance: d2.sqrt(),
    })
}

/// Uses the hull shortcut for non-collinear 2-D input, brute force otherwise.
pub fn farthest_pair<P: PointSet + ?Sized>(points: &P, use_hull: bool) -> Result<FarthestPair> {
    if use_hull && points.dim() == 2 && points.len() >= 3 {
        match farthest_pair_via_hull(points) {
            Err(Error::DegenerateInput(_)) => {}
            other => return other,
        }
    }
    farthest_pair_bruteforce(points)
}
