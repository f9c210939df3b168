//! Exact feasibility linear programming.
//!
//! Phase-I simplex over the rationals with Bland's rule, which rules out
//! cycling. Problems here are tiny, so a dense tableau is fine.

use num_traits::{One, Signed, Zero};

use crate::rational::{QVec, Rat};

/// Finds `x >= 0` with `a x = b`, or `None` if the system is infeasible.
pub fn feasible_point(a: &[QVec], b: &[Rat], nvars: usize) -> Option<QVec> {
    let m = a.len();
    let width = nvars + m + 1;
    let rhs = width - 1;
    let mut t: Vec<QVec> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let neg = bi.is_negative();
        let mut r = vec![Rat::zero(); width];
        for (j, x) in row.iter().enumerate() {
            r[j] = if neg { -x.clone() } else { x.clone() };
        }
        r[nvars + i] = Rat::one();
        r[rhs] = if neg { -bi.clone() } else { bi.clone() };
        t.push(r);
    }
    let mut basis: Vec<usize> = (nvars..nvars + m).collect();

    // reduced costs of the phase-I objective (sum of artificials)
    let mut cost = vec![Rat::zero(); width];
    for r in &t {
        for j in 0..nvars {
            cost[j] -= &r[j];
        }
        cost[rhs] -= &r[rhs];
    }

    while let Some(enter) = (0..nvars + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // phase I is bounded below by zero, so an entering column always has a pivot
        let (pr, _) = leave?;
        pivot(&mut t, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    if !cost[rhs].is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); nvars];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < nvars {
            x[bj] = t[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [QVec], cost: &mut QVec, pr: usize, pc: usize) {
    let inv = Rat::one() / &t[pr][pc];
    for x in t[pr].iter_mut() {
        *x *= &inv;
    }
    let prow = t[pr].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != pr && !row[pc].is_zero() {
            let f = row[pc].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                *x -= &f * p;
            }
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for (x, p) in cost.iter_mut().zip(&prow) {
            *x -= &f * p;
        }
    }
}

/// Coefficients `c >= 0` with `sum c = 1` and `sum c_i p_i = target`.
pub fn convex_combination(points: &[QVec], target: &[Rat]) -> Option<QVec> {
    let k = points.len();
    let n = target.len();
    let mut a: Vec<QVec> = (0..n)
        .map(|r| points.iter().map(|p| p[r].clone()).collect())
        .collect();
    a.push(vec![Rat::one(); k]);
    let mut b = target.to_vec();
    b.push(Rat::one());
    feasible_point(&a, &b, k)
}

/// Coefficients `c >= 0` with `sum c_i g_i = target`.
pub fn cone_combination(generators: &[QVec], target: &[Rat]) -> Option<QVec> {
    let k = generators.len();
    let a: Vec<QVec> = (0..target.len())
        .map(|r| generators.iter().map(|g| g[r].clone()).collect())
        .collect();
    feasible_point(&a, target, k)
}

/// A linear functional `w` with `w · g >= 1` for every generator; exists iff
/// the generators span a pointed cone and none of them is zero.
pub fn positive_grading(generators: &[QVec]) -> Option<QVec> {
    let d = generators.first()?.len();
    let k = generators.len();
    // variables: w+ (d), w- (d), slack (k)
    let nvars = 2 * d + k;
    let a: Vec<QVec> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut row = vec![Rat::zero(); nvars];
            for j in 0..d {
                row[j] = g[j].clone();
                row[d + j] = -g[j].clone();
            }
            row[2 * d + i] = -Rat::one();
            row
        })
        .collect();
    let b = vec![Rat::one(); k];
    let x = feasible_point(&a, &b, nvars)?;
    Some((0..d).map(|j| &x[j] - &x[d + j]).collect())
}
