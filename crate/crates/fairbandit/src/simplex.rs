//! Exact phase-1 simplex over rationals.
//!
//! Only feasibility is needed here: the experiment geometry works off the
//! enumerated vertex set, while this module answers "is the constraint set
//! nonempty?" without any vertex cap. Bland's rule keeps the exact pivoting
//! cycle-free.

// Pivot loops read clearest with explicit indices.
#![allow(clippy::needless_range_loop)]

use num::{One, Signed, Zero};

use crate::rational::Rational;

/// `A x = b`, `x >= 0`, with `b >= 0` (callers flip row signs as needed).
pub struct StandardForm {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl StandardForm {
    /// True iff some `x >= 0` satisfies every row exactly.
    pub fn is_feasible(&self) -> bool {
        let m = self.rows.len();
        if m == 0 {
            return true;
        }
        let n = self.rows[0].len();
        debug_assert!(self.rows.iter().all(|r| r.len() == n));
        debug_assert!(self.rhs.iter().all(|b| !b.is_negative()));

        // Tableau with one artificial variable per row; phase-1 objective
        // minimizes their sum. Columns: n structural + m artificial + rhs.
        let cols = n + m;
        let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
        for i in 0..m {
            let mut row = vec![Rational::zero(); cols + 1];
            row[..n].clone_from_slice(&self.rows[i]);
            row[n + i] = Rational::one();
            row[cols] = self.rhs[i].clone();
            t.push(row);
        }
        // Objective row: reduced costs for cost vector (0,...,0,1,...,1)
        // with the artificial basis. Structural columns get -sum of the
        // constraint rows; artificial columns are basic, reduced cost 0.
        let mut obj = vec![Rational::zero(); cols + 1];
        for row in &t {
            for j in 0..n {
                obj[j] -= &row[j];
            }
            obj[cols] -= &row[cols];
        }
        let mut basis: Vec<usize> = (n..cols).collect();

        // Bland: entering column = lowest index with negative reduced cost.
        while let Some(enter) = (0..cols).find(|&j| obj[j].is_negative()) {
            // Ratio test; ties broken by lowest basis variable index (Bland).
            let mut leave: Option<usize> = None;
            let mut best: Option<Rational> = None;
            for i in 0..m {
                if !t[i][enter].is_positive() {
                    continue;
                }
                let ratio = &t[i][cols] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
            let Some(r) = leave else {
                // Unbounded phase-1 objective cannot happen (bounded below by 0).
                debug_assert!(false, "phase-1 ratio test found no pivot row");
                return false;
            };
            // Pivot on (r, enter).
            let inv = t[r][enter].clone();
            for c in 0..=cols {
                t[r][c] = &t[r][c] / &inv;
            }
            for i in 0..m {
                if i == r || t[i][enter].is_zero() {
                    continue;
                }
                let f = t[i][enter].clone();
                for c in 0..=cols {
                    let sub = &f * &t[r][c];
                    t[i][c] -= sub;
                }
            }
            if !obj[enter].is_zero() {
                let f = obj[enter].clone();
                for c in 0..=cols {
                    let sub = &f * &t[r][c];
                    obj[c] -= sub;
                }
            }
            basis[r] = enter;
        }

        // Optimal phase-1 value is -obj[rhs]; feasible iff it is zero.
        obj[cols].is_zero()
    }
}
