//! The fairness constraint set and its exact geometry.
//!
//! A `FairPolytope` is the slice of the probability simplex where every
//! group's total mass sits inside its `[lower, upper]` band. Vertices are
//! enumerated exactly (rational arithmetic, no tolerances) by scanning
//! active constraint sets, which is what makes the optimality-gap and
//! lower-bound checks meaningful as number-theoretic statements.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use itertools::Itertools;
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{det_bareiss, solve_unique};
use crate::projection::min_norm_point;
use crate::rational::{common_denominator, dot, in_unit_interval, to_f64, Rational};
use crate::simplex::StandardForm;

/// Hard cap on the arm count for vertex enumeration; the active-set scan is
/// combinatorial in `k`.
pub const DEFAULT_VERTEX_CAP: usize = 12;

/// Default cap (rows and columns) for the brute-force total-unimodularity
/// scan over all square submatrices.
pub const DEFAULT_TU_CAP: usize = 8;

/// Arms and the (possibly overlapping, possibly non-covering) groups over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    arm_count: usize,
    groups: Vec<Vec<usize>>,
}

impl GroupStructure {
    /// Validates that every group is a nonempty set of in-range arm indices.
    /// Group member lists are stored sorted and deduplicated.
    pub fn new(arm_count: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        if arm_count == 0 {
            return Err(Error::InvalidArgument("arm count must be positive".into()));
        }
        let mut cleaned = Vec::with_capacity(groups.len());
        for (i, g) in groups.into_iter().enumerate() {
            if g.is_empty() {
                return Err(Error::InvalidArgument(format!("group {i} is empty")));
            }
            if let Some(&bad) = g.iter().find(|&&a| a >= arm_count) {
                return Err(Error::InvalidArgument(format!(
                    "group {i} references arm {bad}, but there are only {arm_count} arms"
                )));
            }
            let set: BTreeSet<usize> = g.into_iter().collect();
            cleaned.push(set.into_iter().collect());
        }
        Ok(Self {
            arm_count,
            groups: cleaned,
        })
    }

    pub fn arm_count(&self) -> usize {
        self.arm_count
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Indices of the groups containing `arm`.
    pub fn memberships(&self, arm: usize) -> Vec<usize> {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.contains(&arm))
            .map(|(i, _)| i)
            .collect()
    }

    /// Maximum number of groups any single arm belongs to; 0 when there are
    /// no groups, 1 when the groups are disjoint.
    pub fn overlap_degree(&self) -> usize {
        (0..self.arm_count)
            .map(|a| self.groups.iter().filter(|g| g.contains(&a)).count())
            .max()
            .unwrap_or(0)
    }

    /// Total mass a distribution places on group `i`.
    pub fn group_mass_f64(&self, i: usize, p: &[f64]) -> f64 {
        self.groups[i].iter().map(|&a| p[a]).sum()
    }

    /// Group masses for all groups at once.
    pub fn group_masses_f64(&self, p: &[f64]) -> Vec<f64> {
        (0..self.groups.len())
            .map(|i| self.group_mass_f64(i, p))
            .collect()
    }

    fn group_mass_exact(&self, i: usize, p: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for &a in &self.groups[i] {
            acc += &p[a];
        }
        acc
    }
}

/// Per-group mass bands `lower[i] <= mass(G_i) <= upper[i]`, exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessBounds {
    lower: Vec<Rational>,
    upper: Vec<Rational>,
}

impl FairnessBounds {
    pub fn new(lower: Vec<Rational>, upper: Vec<Rational>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                context: "fairness bounds",
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !in_unit_interval(l) || !in_unit_interval(u) || l > u {
                return Err(Error::InvalidArgument(format!(
                    "bounds for group {i} must satisfy 0 <= lower <= upper <= 1"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    /// Smallest `N` such that every bound lies in `(1/N)·Z`.
    pub fn common_denominator(&self) -> BigInt {
        let mut all = self.lower.clone();
        all.extend_from_slice(&self.upper);
        common_denominator(&all)
    }

    /// Random upward shifts of every bound by an integer multiple of `1/N'`
    /// in `[0, magnitude]`, over a refined common denominator `N'`, clamped
    /// so `0 <= lower <= upper <= 1` still holds. Deterministic per seed;
    /// magnitude zero returns the bounds unchanged.
    ///
    /// Breaking ties this way restores a unique best vertex on degenerate
    /// instances with probability close to one.
    pub fn perturbed(&self, magnitude: &Rational, seed: u64) -> Self {
        if magnitude.is_zero() || self.lower.is_empty() {
            return self.clone();
        }
        let magnitude = magnitude.clone().min(Rational::one());
        // Refine the denominator until at least 64 offset levels fit under
        // the magnitude, so a zero offset is unlikely.
        let base = num::integer::lcm(self.common_denominator(), magnitude.denom().clone());
        let span = &magnitude * Rational::from_integer(base.clone());
        let factor = (Rational::from_integer(BigInt::from(64)) / &span)
            .ceil()
            .to_integer()
            .max(BigInt::one());
        let denom = base * &factor;
        let levels = (&magnitude * Rational::from_integer(denom.clone())).floor();
        let levels: u64 = num::ToPrimitive::to_u64(&levels.to_integer())
            .expect("perturbation granularity overflow");

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lower = Vec::with_capacity(self.lower.len());
        let mut upper = Vec::with_capacity(self.upper.len());
        for (l, u) in self.lower.iter().zip(&self.upper) {
            let dl = Rational::new(BigInt::from(rng.gen_range(0..=levels)), denom.clone());
            let du = Rational::new(BigInt::from(rng.gen_range(0..=levels)), denom.clone());
            let nu = (u + du).min(Rational::one());
            let nl = (l + dl).min(nu.clone());
            lower.push(nl);
            upper.push(nu);
        }
        Self { lower, upper }
    }
}

/// Top-two separation of a linear objective over the vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapValue {
    Finite(Rational),
    /// Single-vertex set: there is no runner-up to separate from.
    Infinite,
}

impl GapValue {
    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            GapValue::Finite(r) => Some(r),
            GapValue::Infinite => None,
        }
    }

    pub fn display(&self) -> String {
        match self {
            GapValue::Finite(r) => crate::rational::format_rational(r),
            GapValue::Infinite => "inf".to_string(),
        }
    }
}

/// Result of [`FairPolytope::optimality_gap`].
#[derive(Debug, Clone)]
pub struct GapResult {
    pub gap: GapValue,
    /// Maximizing vertex (lexicographically smallest among ties).
    pub best: Vec<Rational>,
    /// Second-best vertex; absent when the set has a single vertex.
    pub runner_up: Option<Vec<Rational>>,
    /// Set when two or more distinct vertices attain the maximum (gap 0).
    pub degenerate: bool,
}

/// The fairness constraint set: simplex intersected with the group bands.
#[derive(Debug)]
pub struct FairPolytope {
    structure: GroupStructure,
    bounds: FairnessBounds,
    vertex_cap: usize,
    lower_f64: Vec<f64>,
    upper_f64: Vec<f64>,
    vertices: OnceLock<Vec<Vec<Rational>>>,
    vertices_f64: OnceLock<Vec<Vec<f64>>>,
}

impl FairPolytope {
    /// Binds a group structure to its bounds. Feasibility is *not* checked
    /// here; see [`FairPolytope::is_feasible`].
    pub fn new(structure: GroupStructure, bounds: FairnessBounds) -> Result<Self> {
        if structure.group_count() != bounds.len() {
            return Err(Error::DimensionMismatch {
                context: "polytope bounds",
                expected: structure.group_count(),
                actual: bounds.len(),
            });
        }
        let lower_f64 = bounds.lower().iter().map(to_f64).collect();
        let upper_f64 = bounds.upper().iter().map(to_f64).collect();
        Ok(Self {
            structure,
            bounds,
            vertex_cap: DEFAULT_VERTEX_CAP,
            lower_f64,
            upper_f64,
            vertices: OnceLock::new(),
            vertices_f64: OnceLock::new(),
        })
    }

    /// Overrides the enumeration cap (still a hard combinatorial guard).
    pub fn with_vertex_cap(mut self, cap: usize) -> Self {
        self.vertex_cap = cap;
        self
    }

    pub fn structure(&self) -> &GroupStructure {
        &self.structure
    }

    pub fn bounds(&self) -> &FairnessBounds {
        &self.bounds
    }

    pub fn arm_count(&self) -> usize {
        self.structure.arm_count()
    }

    /// Membership with slack `tol` on every constraint (simplex sum,
    /// nonnegativity and group bands).
    pub fn contains(&self, p: &[f64], tol: f64) -> Result<bool> {
        if tol < 0.0 || !tol.is_finite() {
            return Err(Error::InvalidArgument(
                "containment tolerance must be nonnegative".into(),
            ));
        }
        if p.len() != self.arm_count() {
            return Err(Error::DimensionMismatch {
                context: "containment query",
                expected: self.arm_count(),
                actual: p.len(),
            });
        }
        let sum: f64 = p.iter().sum();
        if !(sum >= 1.0 - tol && sum <= 1.0 + tol) {
            return Ok(false);
        }
        if p.iter().any(|&x| x < -tol) {
            return Ok(false);
        }
        for i in 0..self.structure.group_count() {
            let mass = self.structure.group_mass_f64(i, p);
            if mass < self.lower_f64[i] - tol || mass > self.upper_f64[i] + tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact membership, no tolerance.
    pub fn contains_exact(&self, p: &[Rational]) -> bool {
        if p.len() != self.arm_count() {
            return false;
        }
        let mut sum = Rational::zero();
        for x in p {
            if x.is_negative() {
                return false;
            }
            sum += x;
        }
        if !sum.is_one() {
            return false;
        }
        for i in 0..self.structure.group_count() {
            let mass = self.structure.group_mass_exact(i, p);
            if mass < self.bounds.lower[i] || mass > self.bounds.upper[i] {
                return false;
            }
        }
        true
    }

    /// True iff the set is nonempty. Decided by exact phase-1 simplex, so it
    /// works above the vertex cap and independently of the enumeration path.
    pub fn is_feasible(&self) -> bool {
        let k = self.arm_count();
        let g = self.structure.group_count();
        // Variables: p (k), per-group surplus (lower rows), slack (upper rows).
        let cols = k + 2 * g;
        let mut rows = Vec::with_capacity(1 + 2 * g);
        let mut rhs = Vec::with_capacity(1 + 2 * g);
        let mut simplex_row = vec![Rational::zero(); cols];
        for c in simplex_row.iter_mut().take(k) {
            *c = Rational::one();
        }
        rows.push(simplex_row);
        rhs.push(Rational::one());
        for (i, group) in self.structure.groups().iter().enumerate() {
            let mut low = vec![Rational::zero(); cols];
            let mut high = vec![Rational::zero(); cols];
            for &a in group {
                low[a] = Rational::one();
                high[a] = Rational::one();
            }
            low[k + i] = -Rational::one();
            high[k + g + i] = Rational::one();
            rows.push(low);
            rhs.push(self.bounds.lower[i].clone());
            rows.push(high);
            rhs.push(self.bounds.upper[i].clone());
        }
        StandardForm { rows, rhs }.is_feasible()
    }

    /// The exact vertex set, lexicographically sorted and cached.
    pub fn vertices(&self) -> Result<&[Vec<Rational>]> {
        let k = self.arm_count();
        if k > self.vertex_cap {
            return Err(Error::CapacityExceeded {
                what: "vertex enumeration arm count",
                cap: self.vertex_cap,
                actual: k,
            });
        }
        Ok(self
            .vertices
            .get_or_init(|| enumerate(&self.structure, &self.bounds, true)))
    }

    /// Float image of the vertex set, in the same (lexicographic) order.
    pub fn vertices_f64(&self) -> Result<&[Vec<f64>]> {
        let exact = self.vertices()?;
        Ok(self.vertices_f64.get_or_init(|| {
            exact
                .iter()
                .map(|v| v.iter().map(to_f64).collect())
                .collect()
        }))
    }

    /// Uncached enumeration (parallel when the `parallel` feature is on).
    pub fn enumerate_vertices(&self) -> Result<Vec<Vec<Rational>>> {
        let k = self.arm_count();
        if k > self.vertex_cap {
            return Err(Error::CapacityExceeded {
                what: "vertex enumeration arm count",
                cap: self.vertex_cap,
                actual: k,
            });
        }
        Ok(enumerate(&self.structure, &self.bounds, true))
    }

    /// Uncached strictly sequential enumeration; exists so benches can
    /// compare against the data-parallel path.
    pub fn enumerate_vertices_sequential(&self) -> Result<Vec<Vec<Rational>>> {
        let k = self.arm_count();
        if k > self.vertex_cap {
            return Err(Error::CapacityExceeded {
                what: "vertex enumeration arm count",
                cap: self.vertex_cap,
                actual: k,
            });
        }
        Ok(enumerate(&self.structure, &self.bounds, false))
    }

    /// Maximizes `<weights, p>` over the set. Ties break toward the
    /// lexicographically smallest vertex. Errors when the set is empty.
    pub fn maximize_linear(&self, weights: &[Rational]) -> Result<(Vec<Rational>, Rational)> {
        if weights.len() != self.arm_count() {
            return Err(Error::DimensionMismatch {
                context: "objective",
                expected: self.arm_count(),
                actual: weights.len(),
            });
        }
        let verts = self.vertices()?;
        let mut best: Option<(usize, Rational)> = None;
        for (i, v) in verts.iter().enumerate() {
            let val = dot(weights, v);
            // Strict improvement only: the list is sorted, so the earliest
            // maximizer is the lexicographically smallest.
            if best.as_ref().is_none_or(|(_, b)| val > *b) {
                best = Some((i, val));
            }
        }
        match best {
            Some((i, val)) => Ok((verts[i].clone(), val)),
            None => Err(Error::Infeasible),
        }
    }

    /// Float twin of [`maximize_linear`] for the policy hot loop; returns the
    /// index into [`FairPolytope::vertices_f64`] and the attained value.
    pub fn maximize_linear_f64(&self, weights: &[f64]) -> Result<(usize, f64)> {
        let verts = self.vertices_f64()?;
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in verts.iter().enumerate() {
            let val: f64 = v.iter().zip(weights).map(|(a, b)| a * b).sum();
            if best.is_none_or(|(_, b)| val > b) {
                best = Some((i, val));
            }
        }
        best.ok_or(Error::Infeasible)
    }

    /// Gap between the maximum and second maximum of `<means, .>` over the
    /// vertex set. A single-vertex set reports [`GapValue::Infinite`]; two or
    /// more tied maximizers report a zero gap with `degenerate` set.
    pub fn optimality_gap(&self, means: &[Rational]) -> Result<GapResult> {
        if means.len() != self.arm_count() {
            return Err(Error::DimensionMismatch {
                context: "objective",
                expected: self.arm_count(),
                actual: means.len(),
            });
        }
        let verts = self.vertices()?;
        if verts.is_empty() {
            return Err(Error::Infeasible);
        }
        let values: Vec<Rational> = verts.iter().map(|v| dot(means, v)).collect();
        let mut best_i = 0;
        for i in 1..verts.len() {
            if values[i] > values[best_i] {
                best_i = i;
            }
        }
        if verts.len() == 1 {
            return Ok(GapResult {
                gap: GapValue::Infinite,
                best: verts[0].clone(),
                runner_up: None,
                degenerate: false,
            });
        }
        let mut second_i: Option<usize> = None;
        for i in 0..verts.len() {
            if i == best_i {
                continue;
            }
            if second_i.is_none_or(|s| values[i] > values[s]) {
                second_i = Some(i);
            }
        }
        let second_i = second_i.expect("two or more vertices");
        let gap = &values[best_i] - &values[second_i];
        Ok(GapResult {
            degenerate: gap.is_zero(),
            gap: GapValue::Finite(gap),
            best: verts[best_i].clone(),
            runner_up: Some(verts[second_i].clone()),
        })
    }

    /// Euclidean projection of the uniform distribution onto the set; exact,
    /// and equal to uniform whenever uniform is already inside.
    pub fn most_uniform(&self) -> Result<Vec<Rational>> {
        let k = self.arm_count();
        let uniform = vec![Rational::new(BigInt::one(), BigInt::from(k as i64)); k];
        if self.contains_exact(&uniform) {
            return Ok(uniform);
        }
        let verts = self.vertices()?;
        if verts.is_empty() {
            return Err(Error::Infeasible);
        }
        Ok(min_norm_point(&uniform, verts))
    }
}

/// Active-set vertex enumeration. Candidate rows: each `p_a = 0`, each group
/// band edge (`mass = lower_i`, `mass = upper_i`). Together with the simplex
/// equality, every full-rank selection of `k - 1` of them pins a candidate
/// point; the exactly-feasible solutions, deduplicated, are the vertex set.
fn enumerate(
    structure: &GroupStructure,
    bounds: &FairnessBounds,
    parallel: bool,
) -> Vec<Vec<Rational>> {
    let k = structure.arm_count();
    let g = structure.group_count();
    let mut row_lhs: Vec<Vec<Rational>> = Vec::with_capacity(k + 2 * g);
    let mut row_rhs: Vec<Rational> = Vec::with_capacity(k + 2 * g);
    for a in 0..k {
        let mut row = vec![Rational::zero(); k];
        row[a] = Rational::one();
        row_lhs.push(row);
        row_rhs.push(Rational::zero());
    }
    for (i, group) in structure.groups().iter().enumerate() {
        for rhs in [bounds.lower()[i].clone(), bounds.upper()[i].clone()] {
            let mut row = vec![Rational::zero(); k];
            for &a in group {
                row[a] = Rational::one();
            }
            row_lhs.push(row);
            row_rhs.push(rhs);
        }
    }
    let ones = vec![Rational::one(); k];

    let combos: Vec<Vec<usize>> = (0..row_lhs.len()).combinations(k - 1).collect();
    let solve_one = |combo: &Vec<usize>| -> Option<Vec<Rational>> {
        let mut a: Vec<Vec<Rational>> = Vec::with_capacity(k);
        let mut b: Vec<Rational> = Vec::with_capacity(k);
        a.push(ones.clone());
        b.push(Rational::one());
        for &r in combo {
            a.push(row_lhs[r].clone());
            b.push(row_rhs[r].clone());
        }
        let p = solve_unique(&a, &b)?;
        let polytope_check = |p: &[Rational]| -> bool {
            if p.iter().any(Signed::is_negative) {
                return false;
            }
            for i in 0..g {
                let mass = structure.group_mass_exact(i, p);
                if mass < bounds.lower()[i] || mass > bounds.upper()[i] {
                    return false;
                }
            }
            true
        };
        polytope_check(&p).then_some(p)
    };

    let candidates: Vec<Option<Vec<Rational>>> = if parallel {
        exec::map_vec(combos, |c| solve_one(&c))
    } else {
        combos.iter().map(solve_one).collect()
    };
    let set: BTreeSet<Vec<Rational>> = candidates.into_iter().flatten().collect();
    set.into_iter().collect()
}

/// Conditional lower bound on the optimality gap implied by the structure:
/// `1/(M*N)` for disjoint groups, `1/(D^g * M * N)` when arms may belong to
/// up to `D` groups. Valid whenever the gap is nonzero; `M` and `N` are the
/// common denominators of the means and the bounds.
pub fn gap_lower_bound(
    structure: &GroupStructure,
    means_denominator: &BigInt,
    bounds_denominator: &BigInt,
) -> Rational {
    let d = structure.overlap_degree();
    let mn = means_denominator * bounds_denominator;
    if d <= 1 {
        Rational::new(BigInt::one(), mn)
    } else {
        let scale = BigInt::from(d).pow(structure.group_count() as u32);
        Rational::new(BigInt::one(), scale * mn)
    }
}

/// The 0/1 constraint matrix whose row space pins the vertices for a group
/// structure: one all-ones row, one indicator row per group, then the
/// identity. Used by the unimodularity checks.
pub fn constraint_matrix(structure: &GroupStructure) -> Vec<Vec<i64>> {
    let k = structure.arm_count();
    let mut rows = Vec::with_capacity(1 + structure.group_count() + k);
    rows.push(vec![1i64; k]);
    for group in structure.groups() {
        let mut row = vec![0i64; k];
        for &a in group {
            row[a] = 1;
        }
        rows.push(row);
    }
    for a in 0..k {
        let mut row = vec![0i64; k];
        row[a] = 1;
        rows.push(row);
    }
    rows
}

/// Brute-force total unimodularity at the default cap; see
/// [`is_totally_unimodular_with_cap`].
pub fn is_totally_unimodular(matrix: &[Vec<i64>]) -> Result<bool> {
    is_totally_unimodular_with_cap(matrix, DEFAULT_TU_CAP)
}

/// True iff every square submatrix has determinant in `{-1, 0, 1}`, checked
/// by exhaustive scan. Refuses matrices whose row or column count exceeds
/// `cap` (the scan is exponential in the dimensions).
pub fn is_totally_unimodular_with_cap(matrix: &[Vec<i64>], cap: usize) -> Result<bool> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument("ragged matrix".into()));
    }
    if rows.max(cols) > cap {
        return Err(Error::CapacityExceeded {
            what: "total-unimodularity scan dimension",
            cap,
            actual: rows.max(cols),
        });
    }
    let m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let one = BigInt::one();
    for size in 1..=rows.min(cols) {
        let row_sets: Vec<Vec<usize>> = (0..rows).combinations(size).collect();
        let col_sets: Vec<Vec<usize>> = (0..cols).combinations(size).collect();
        let ok = exec::all_vec(row_sets, |rs| {
            col_sets.iter().all(|cs| {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                    .collect();
                let d = det_bareiss(&sub);
                d.magnitude() <= one.magnitude()
            })
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    pub(crate) fn band_polytope() -> FairPolytope {
        // Two arms, singleton groups, both banded to [1/4, 3/4].
        let s = GroupStructure::new(2, vec![vec![0], vec![1]]).unwrap();
        let b =
            FairnessBounds::new(vec![rat(1, 4), rat(1, 4)], vec![rat(3, 4), rat(3, 4)]).unwrap();
        FairPolytope::new(s, b).unwrap()
    }

    fn three_arm_polytope() -> FairPolytope {
        let s = GroupStructure::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let b =
            FairnessBounds::new(vec![rat(1, 5), rat(1, 5)], vec![rat(4, 5), rat(4, 5)]).unwrap();
        FairPolytope::new(s, b).unwrap()
    }

    fn rv(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn construction_validates_dimensions() {
        let s = GroupStructure::new(2, vec![vec![0]]).unwrap();
        let b =
            FairnessBounds::new(vec![rat(1, 4), rat(1, 4)], vec![rat(3, 4), rat(3, 4)]).unwrap();
        assert!(matches!(
            FairPolytope::new(s, b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(GroupStructure::new(3, vec![vec![0, 3]]).is_err());
        assert!(GroupStructure::new(3, vec![vec![]]).is_err());
        assert!(FairnessBounds::new(vec![rat(3, 4)], vec![rat(1, 4)]).is_err());
        assert!(FairnessBounds::new(vec![rat(-1, 4)], vec![rat(1, 4)]).is_err());
        assert!(FairnessBounds::new(vec![rat(1, 4)], vec![rat(5, 4)]).is_err());
    }

    #[test]
    fn no_groups_is_the_simplex() {
        let s = GroupStructure::new(3, vec![]).unwrap();
        let b = FairnessBounds::new(vec![], vec![]).unwrap();
        let p = FairPolytope::new(s, b).unwrap();
        let verts = p.vertices().unwrap();
        assert_eq!(
            verts,
            &[
                rv(&[(0, 1), (0, 1), (1, 1)]),
                rv(&[(0, 1), (1, 1), (0, 1)]),
                rv(&[(1, 1), (0, 1), (0, 1)]),
            ]
        );
    }

    #[test]
    fn feasibility_matches_mass_conservation() {
        let p = band_polytope();
        assert!(p.is_feasible());

        let s = GroupStructure::new(2, vec![vec![0], vec![1]]).unwrap();
        let b =
            FairnessBounds::new(vec![rat(3, 5), rat(3, 5)], vec![rat(1, 1), rat(1, 1)]).unwrap();
        assert!(!FairPolytope::new(s, b).unwrap().is_feasible());

        let s = GroupStructure::new(2, vec![vec![0], vec![1]]).unwrap();
        let b =
            FairnessBounds::new(vec![rat(0, 1), rat(0, 1)], vec![rat(2, 5), rat(2, 5)]).unwrap();
        assert!(!FairPolytope::new(s, b).unwrap().is_feasible());
    }

    #[test]
    fn containment_examples() {
        let p = band_polytope();
        assert!(p.contains(&[0.5, 0.5], 0.0).unwrap());
        assert!(!p.contains(&[0.9, 0.1], 1e-9).unwrap());
        assert!(p.contains(&[0.75, 0.25], 0.0).unwrap());
        assert!(p.contains(&[0.0, 0.0], -1.0).is_err());
        assert!(p.contains(&[1.0], 0.0).is_err());
    }

    #[test]
    fn band_vertices_are_the_segment_endpoints() {
        let p = band_polytope();
        let verts = p.vertices().unwrap();
        assert_eq!(verts, &[rv(&[(1, 4), (3, 4)]), rv(&[(3, 4), (1, 4)])]);
    }

    #[test]
    fn single_arm_simplex_is_one_point() {
        let s = GroupStructure::new(1, vec![]).unwrap();
        let b = FairnessBounds::new(vec![], vec![]).unwrap();
        let p = FairPolytope::new(s, b).unwrap();
        assert_eq!(p.vertices().unwrap(), &[rv(&[(1, 1)])]);
        let r = p.optimality_gap(&rv(&[(1, 2)])).unwrap();
        assert_eq!(r.gap, GapValue::Infinite);
        assert_eq!(p.most_uniform().unwrap(), rv(&[(1, 1)]));
    }

    #[test]
    fn three_arm_vertices() {
        let p = three_arm_polytope();
        let verts = p.vertices().unwrap();
        let expected = [
            rv(&[(0, 1), (1, 5), (4, 5)]),
            rv(&[(0, 1), (4, 5), (1, 5)]),
            rv(&[(1, 5), (0, 1), (4, 5)]),
            rv(&[(4, 5), (0, 1), (1, 5)]),
        ];
        assert_eq!(verts, &expected[..]);
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let s = GroupStructure::new(13, vec![]).unwrap();
        let b = FairnessBounds::new(vec![], vec![]).unwrap();
        let p = FairPolytope::new(s, b).unwrap();
        assert!(matches!(p.vertices(), Err(Error::CapacityExceeded { .. })));
    }

    #[test]
    fn maximize_linear_examples() {
        let p = band_polytope();
        let (v, val) = p.maximize_linear(&rv(&[(9, 10), (2, 10)])).unwrap();
        assert_eq!(v, rv(&[(3, 4), (1, 4)]));
        assert_eq!(val, rat(29, 40));

        let p3 = three_arm_polytope();
        let (v, val) = p3.maximize_linear(&rv(&[(1, 2), (3, 10), (2, 5)])).unwrap();
        assert_eq!(v, rv(&[(4, 5), (0, 1), (1, 5)]));
        assert_eq!(val, rat(12, 25));

        // Constant objective: value is the constant, tie broken toward the
        // lexicographically smallest vertex.
        let (v, val) = p.maximize_linear(&rv(&[(1, 3), (1, 3)])).unwrap();
        assert_eq!(v, rv(&[(1, 4), (3, 4)]));
        assert_eq!(val, rat(1, 3));
    }

    #[test]
    fn gap_examples() {
        let p = band_polytope();
        let r = p.optimality_gap(&rv(&[(9, 10), (2, 10)])).unwrap();
        assert_eq!(r.gap, GapValue::Finite(rat(7, 20)));
        assert_eq!(r.best, rv(&[(3, 4), (1, 4)]));
        assert_eq!(r.runner_up.unwrap(), rv(&[(1, 4), (3, 4)]));
        assert!(!r.degenerate);

        let p3 = three_arm_polytope();
        let r = p3.optimality_gap(&rv(&[(1, 2), (3, 10), (2, 5)])).unwrap();
        assert_eq!(r.gap, GapValue::Finite(rat(3, 50)));

        let r = p.optimality_gap(&rv(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(r.gap, GapValue::Finite(rat(0, 1)));
        assert!(r.degenerate);
    }

    #[test]
    fn single_vertex_gap_is_infinite() {
        // Pinned bounds: both groups fixed to 1/2 leaves exactly one point.
        let s = GroupStructure::new(2, vec![vec![0], vec![1]]).unwrap();
        let b =
            FairnessBounds::new(vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]).unwrap();
        let p = FairPolytope::new(s, b).unwrap();
        let r = p.optimality_gap(&rv(&[(9, 10), (2, 10)])).unwrap();
        assert_eq!(r.gap, GapValue::Infinite);
        assert!(r.runner_up.is_none());
        assert!(!r.degenerate);
    }

    #[test]
    fn gap_scales_linearly() {
        let p = band_polytope();
        let means = rv(&[(9, 10), (2, 10)]);
        let scaled: Vec<Rational> = means.iter().map(|m| m * rat(3, 7)).collect();
        let r1 = p.optimality_gap(&means).unwrap();
        let r2 = p.optimality_gap(&scaled).unwrap();
        assert_eq!(
            r2.gap.as_finite().unwrap(),
            &(r1.gap.as_finite().unwrap() * rat(3, 7))
        );
        assert_eq!(r1.best, r2.best);
    }

    #[test]
    fn gap_lower_bound_formula() {
        let disjoint = GroupStructure::new(2, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(
            gap_lower_bound(&disjoint, &BigInt::from(10), &BigInt::from(4)),
            rat(1, 40)
        );
        let overlapping = GroupStructure::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(
            gap_lower_bound(&overlapping, &BigInt::from(10), &BigInt::from(4)),
            rat(1, 160)
        );
        let free = GroupStructure::new(2, vec![]).unwrap();
        assert_eq!(
            gap_lower_bound(&free, &BigInt::one(), &BigInt::one()),
            rat(1, 1)
        );
    }

    #[test]
    fn overlap_degree_examples() {
        let disjoint = GroupStructure::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(disjoint.overlap_degree(), 1);
        let overlapping = GroupStructure::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(overlapping.overlap_degree(), 2);
        let free = GroupStructure::new(3, vec![]).unwrap();
        assert_eq!(free.overlap_degree(), 0);
    }

    #[test]
    fn tu_examples() {
        assert!(is_totally_unimodular(&[vec![1, 0], vec![0, 1]]).unwrap());
        assert!(!is_totally_unimodular(&[vec![1, 1], vec![-1, 1]]).unwrap());
        let s = GroupStructure::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let m = constraint_matrix(&s);
        assert!(is_totally_unimodular_with_cap(&m, 8).unwrap());
        // Cap refusal.
        let wide = vec![vec![0i64; 9]];
        assert!(matches!(
            is_totally_unimodular(&wide),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn most_uniform_examples() {
        let p = band_polytope();
        assert_eq!(p.most_uniform().unwrap(), rv(&[(1, 2), (1, 2)]));

        let s = GroupStructure::new(2, vec![vec![0]]).unwrap();
        let b = FairnessBounds::new(vec![rat(3, 5)], vec![rat(1, 1)]).unwrap();
        let p = FairPolytope::new(s, b).unwrap();
        assert_eq!(p.most_uniform().unwrap(), rv(&[(3, 5), (2, 5)]));

        let s = GroupStructure::new(3, vec![]).unwrap();
        let b = FairnessBounds::new(vec![], vec![]).unwrap();
        let p = FairPolytope::new(s, b).unwrap();
        assert_eq!(p.most_uniform().unwrap(), rv(&[(1, 3), (1, 3), (1, 3)]));
    }

    #[test]
    fn perturbation_respects_magnitude_and_invariants() {
        let p = band_polytope();
        let b = p.bounds();
        assert_eq!(&b.perturbed(&rat(0, 1), 7), b);

        let shifted = b.perturbed(&rat(1, 100), 7);
        for i in 0..2 {
            let dl = &shifted.lower()[i] - &b.lower()[i];
            let du = &shifted.upper()[i] - &b.upper()[i];
            assert!(!dl.is_negative() && dl <= rat(1, 100));
            assert!(!du.is_negative() && du <= rat(1, 100));
            assert!(shifted.lower()[i] <= shifted.upper()[i]);
            assert!(in_unit_interval(&shifted.upper()[i]));
        }
        // Deterministic per seed.
        assert_eq!(shifted, b.perturbed(&rat(1, 100), 7));
        assert_ne!(shifted, b.perturbed(&rat(1, 100), 8));
    }

    #[test]
    fn perturbation_clamps_at_one() {
        let s = GroupStructure::new(2, vec![vec![0]]).unwrap();
        let b = FairnessBounds::new(vec![rat(99, 100)], vec![rat(1, 1)]).unwrap();
        for seed in 0..20 {
            let shifted = b.perturbed(&rat(1, 10), seed);
            assert!(in_unit_interval(&shifted.upper()[0]));
            assert!(shifted.lower()[0] <= shifted.upper()[0]);
        }
        let _ = s;
    }
}
