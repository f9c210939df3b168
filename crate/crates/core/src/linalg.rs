//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::{sub, QVec, Rat};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[QVec], ncols: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<QVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVec]) -> usize {
    match rows.first() {
        None => 0,
        Some(row) => rref(rows, row.len()).1.len(),
    }
}

/// Affine rank of a point set (the dimension of its affine hull); `None` when empty.
pub fn affine_rank(points: &[QVec]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<QVec> = rest.iter().map(|p| sub(p, first)).collect();
    Some(rank(&diffs))
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a x = b`, or `None` when the system is inconsistent.
pub fn solve(a: &[QVec], b: &[Rat], ncols: usize) -> Option<QVec> {
    let aug: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &pc) in r.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Column-vector matrix product.
pub fn mat_vec(a: &[QVec], x: &[Rat]) -> QVec {
    a.iter().map(|row| crate::rational::dot(row, x)).collect()
}

pub fn mat_mul(a: &[QVec], b: &[QVec]) -> Vec<QVec> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rat::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[QVec]) -> Vec<QVec> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Negative definiteness by Sylvester's criterion on the leading principal minors.
pub fn is_negative_definite(m: &[QVec]) -> bool {
    let n = m.len();
    (1..=n).all(|k| {
        let minor: Vec<QVec> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = determinant(&minor);
        // (-1)^k det > 0
        if k % 2 == 0 {
            d > Rat::zero()
        } else {
            d < Rat::zero()
        }
    })
}

pub fn determinant(m: &[QVec]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ivec};

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![ivec(&[1, 2, 3]), ivec(&[2, 4, 6]), ivec(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(crate::rational::dot(r, &ns[0]).is_zero());
        }
    }

    #[test]
    fn solve_and_inconsistent() {
        let a = vec![ivec(&[1, 1]), ivec(&[1, -1])];
        assert_eq!(solve(&a, &ivec(&[2, 0]), 2), Some(ivec(&[1, 1])));
        let b = vec![ivec(&[1, 1]), ivec(&[2, 2])];
        assert_eq!(solve(&b, &ivec(&[1, 3]), 2), None);
    }

    #[test]
    fn definiteness() {
        let chain = vec![ivec(&[-2, 1]), ivec(&[1, -2])];
        assert!(is_negative_definite(&chain));
        assert_eq!(determinant(&chain), int(3));
        let bad = vec![ivec(&[-1, 2]), ivec(&[2, -1])];
        assert!(!is_negative_definite(&bad));
    }
}
