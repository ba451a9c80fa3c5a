//! Exact Euclidean projection onto the convex hull of a finite point set
//! (Wolfe's min-norm-point algorithm).
//!
//! With rational arithmetic every comparison is exact, so the algorithm
//! terminates finitely and the result is certifiable: `x` is the projection
//! of `u` onto `conv(V)` iff `<u - x, v - x> <= 0` for every `v` in `V`.

use num::{One, Signed, Zero};

use crate::linalg::solve_any;
use crate::rational::{dist_sq, dot, Rational};

/// Exact projection of `target` onto the convex hull of `points`.
///
/// Panics if `points` is empty or the iteration cap is exceeded (the cap is
/// a safety net; Wolfe's method terminates finitely in exact arithmetic).
pub(crate) fn min_norm_point(target: &[Rational], points: &[Vec<Rational>]) -> Vec<Rational> {
    assert!(!points.is_empty(), "projection onto empty hull");
    let dim = target.len();

    // Start from the closest point.
    let start = (0..points.len())
        .min_by(|&a, &b| {
            dist_sq(&points[a], target)
                .cmp(&dist_sq(&points[b], target))
                .then(points[a].cmp(&points[b]))
        })
        .unwrap();
    let mut active: Vec<usize> = vec![start];
    let mut weights: Vec<Rational> = vec![Rational::one()];
    let mut x: Vec<Rational> = points[start].clone();

    let cap = 100 + 50 * points.len();
    for _ in 0..cap {
        // Linear minimization of <x - target, .> over the point set.
        let dir: Vec<Rational> = x.iter().zip(target).map(|(a, b)| a - b).collect();
        let (q, qval) = (0..points.len())
            .map(|i| (i, dot(&dir, &points[i])))
            .min_by(|a, b| a.1.cmp(&b.1).then(points[a.0].cmp(&points[b.0])))
            .unwrap();
        if dot(&dir, &x) <= qval {
            return x; // optimality: no point improves the linearization
        }
        if !active.contains(&q) {
            active.push(q);
            weights.push(Rational::zero());
        }

        // Minor cycle: move to the min-norm point of the affine hull of the
        // active set, shrinking the set until the affine solution is a
        // convex combination.
        loop {
            let affine = affine_min_norm(target, &active, points, dim);
            if affine.iter().all(|w| w.is_positive()) {
                weights = affine;
                x = combine(&active, &weights, points, dim);
                break;
            }
            // Step from `weights` toward `affine` until a coordinate hits zero.
            let mut theta: Option<Rational> = None;
            for (w, a) in weights.iter().zip(&affine) {
                if a >= w {
                    continue;
                }
                let t = w / (w - a); // in (0, 1]
                if theta.as_ref().is_none_or(|best| t < *best) {
                    theta = Some(t);
                }
            }
            let theta = theta.expect("no blocking coordinate in minor cycle");
            let mut next_active = Vec::with_capacity(active.len());
            let mut next_weights = Vec::with_capacity(active.len());
            for ((&idx, w), a) in active.iter().zip(&weights).zip(&affine) {
                let nw = w + &theta * &(a - w);
                if nw.is_positive() {
                    next_active.push(idx);
                    next_weights.push(nw);
                }
            }
            active = next_active;
            weights = next_weights;
        }
    }
    panic!("min-norm projection failed to terminate within the iteration cap");
}

/// Min-norm-to-target point of the affine hull of the active points,
/// returned as affine weights (may be negative). Solves the KKT system
/// `[2G 1; 1^T 0] [w; nu] = [2c; 1]` with `G` the Gram matrix.
fn affine_min_norm(
    target: &[Rational],
    active: &[usize],
    points: &[Vec<Rational>],
    _dim: usize,
) -> Vec<Rational> {
    let m = active.len();
    let two = Rational::from_integer(2.into());
    let mut a = vec![vec![Rational::zero(); m + 1]; m + 1];
    let mut b = vec![Rational::zero(); m + 1];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = &two * &dot(&points[active[i]], &points[active[j]]);
        }
        a[i][m] = Rational::one();
        a[m][i] = Rational::one();
        b[i] = &two * &dot(&points[active[i]], target);
    }
    b[m] = Rational::one();
    // The KKT system is always consistent (a minimum over the affine hull
    // exists); rank deficiency just means several weight representations.
    let sol = solve_any(&a, &b).expect("inconsistent projection KKT system");
    sol[..m].to_vec()
}

fn combine(
    active: &[usize],
    weights: &[Rational],
    points: &[Vec<Rational>],
    dim: usize,
) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); dim];
    for (&idx, w) in active.iter().zip(weights) {
        for (xi, pi) in x.iter_mut().zip(&points[idx]) {
            *xi += w * pi;
        }
    }
    x
}

/// Exact optimality certificate: true iff `x` is the projection of `target`
/// onto `conv(points)`. Used by tests; kept here so the check and the
/// algorithm stay in one place.
#[cfg(test)]
pub(crate) fn is_projection(x: &[Rational], target: &[Rational], points: &[Vec<Rational>]) -> bool {
    let residual: Vec<Rational> = target.iter().zip(x).map(|(t, xi)| t - xi).collect();
    points.iter().all(|v| {
        let gap: Vec<Rational> = v.iter().zip(x).map(|(vi, xi)| vi - xi).collect();
        !dot(&residual, &gap).is_positive()
    })
}
