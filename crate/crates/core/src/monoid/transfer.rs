//! Moving generators from the rings of a simplex covering back to the ring
//! of the covered simplex.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::hilbert::saturated_reweight;
use super::ops::{truncation_implies_fg_weighted, Reweighted, TruncationReport};
use super::{generation_check, Element, GeneratorSet, SliceOracle};
use crate::error::{Error, Result};
use crate::linalg::{determinant, mat_mul, solve};
use crate::rational::{lcm_denominators, QVec, Rat};

/// Integer change of grading between a sub-simplex and the simplex it sits in.
///
/// Row `i` of `b` is `q` times the barycentric coordinates of the `i`-th
/// vertex of the sub-simplex; `a = p q b^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferMatrices {
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub p: i64,
    pub q: i64,
}

fn int_of(x: &Rat) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::TransferIdentity(format!("non-integral entry {x}")));
    }
    x.to_integer()
        .to_i64()
        .ok_or_else(|| Error::TransferIdentity("entry exceeds i64".into()))
}

fn inverse(m: &[QVec]) -> Result<Vec<QVec>> {
    let n = m.len();
    if determinant(m).is_zero() {
        return Err(Error::Degenerate(
            "sub-simplex vertices are affinely dependent".into(),
        ));
    }
    // Column j of the inverse solves m x = e_j.
    let cols: Vec<QVec> = (0..n)
        .map(|j| {
            let e: QVec = (0..n)
                .map(|i| if i == j { Rat::one() } else { Rat::zero() })
                .collect();
            solve(m, &e, n).expect("invertible")
        })
        .collect();
    Ok((0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect())
}

impl TransferMatrices {
    /// Checks non-negativity of `b`, the row sums and `a b = p q I`.
    pub fn new(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>, p: i64, q: i64) -> Result<TransferMatrices> {
        let t = TransferMatrices { a, b, p, q };
        t.check()?;
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn check(&self) -> Result<()> {
        let n = self.b.len();
        let fail = |msg: String| Err(Error::TransferIdentity(msg));
        if self.p <= 0 || self.q <= 0 {
            return fail(format!("p = {}, q = {} must be positive", self.p, self.q));
        }
        if self.a.len() != n || self.a.iter().chain(&self.b).any(|r| r.len() != n) {
            return fail("matrices are not square of equal size".into());
        }
        if self.b.iter().flatten().any(|&x| x < 0) {
            return fail("b has a negative entry".into());
        }
        for i in 0..n {
            if self.b[i].iter().sum::<i64>() != self.q {
                return fail(format!("row {i} of b does not sum to q"));
            }
            if self.a[i].iter().sum::<i64>() != self.p {
                return fail(format!("row {i} of a does not sum to p"));
            }
        }
        let pq = self.p as i128 * self.q as i128;
        for i in 0..n {
            for k in 0..n {
                let s: i128 = (0..n)
                    .map(|j| self.a[i][j] as i128 * self.b[j][k] as i128)
                    .sum();
                if s != if i == k { pq } else { 0 } {
                    return fail(format!(
                        "(a b)[{i}][{k}] = {s}, expected {}",
                        if i == k { pq } else { 0 }
                    ));
                }
            }
        }
        Ok(())
    }

    /// One matrix pair per sub-simplex, sharing `p` and `q`. Each entry of
    /// `sub_simplices` lists barycentric coordinates of the vertices, one row
    /// per vertex; rows must be non-negative and sum to one.
    pub fn for_cover(sub_simplices: &[Vec<QVec>]) -> Result<Vec<TransferMatrices>> {
        let mut inverses = Vec::with_capacity(sub_simplices.len());
        for bary in sub_simplices {
            for row in bary {
                if row.len() != bary.len() {
                    return Err(Error::DimensionMismatch {
                        expected: bary.len(),
                        found: row.len(),
                    });
                }
                if row.iter().any(|x| x.is_negative()) || row.iter().sum::<Rat>() != Rat::one() {
                    return Err(Error::NotContained(
                        "sub-simplex vertex outside the simplex".into(),
                    ));
                }
            }
            inverses.push(inverse(bary)?);
        }
        let q = lcm_denominators(sub_simplices.iter().flatten().flatten());
        let p = lcm_denominators(inverses.iter().flatten().flatten());
        let q = Rat::from_integer(q);
        let p = Rat::from_integer(p);
        let mut out = Vec::with_capacity(sub_simplices.len());
        for (bary, inv) in sub_simplices.iter().zip(&inverses) {
            let b = bary
                .iter()
                .map(|r| r.iter().map(|x| int_of(&(x * &q))).collect())
                .collect::<Result<_>>()?;
            let a = inv
                .iter()
                .map(|r| r.iter().map(|x| int_of(&(x * &p))).collect())
                .collect::<Result<_>>()?;
            out.push(TransferMatrices::new(a, b, int_of(&p)?, int_of(&q)?)?);
        }
        Ok(out)
    }

    /// Re-grades an element of the `q`-truncated sub-simplex ring:
    /// degree `m'` goes to `b^T m'`, the payload is kept.
    pub fn tau(&self, e: &Element) -> Element {
        let n = self.n();
        let deg = (0..n)
            .map(|j| (0..n).map(|i| self.b[i][j] * e.deg[i]).sum())
            .collect();
        Element::new(deg, e.payload.clone())
    }

    /// `(1/pq) a b` as an exact rational matrix.
    pub fn normalized_product(&self) -> Vec<QVec> {
        let conv = |m: &[Vec<i64>]| -> Vec<QVec> {
            m.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
                .collect()
        };
        let pq = Rat::from_integer((self.p * self.q).into());
        mat_mul(&conv(&self.a), &conv(&self.b))
            .into_iter()
            .map(|r| r.into_iter().map(|x| x / &pq).collect())
            .collect()
    }
}

/// Generators of one sub-simplex ring with the oracle they are checked against.
/// A ring of the covering with generators. Rings are taken to be saturated,
/// so their truncations come from a Hilbert basis.
pub struct VertexRing<'a> {
    pub oracle: &'a dyn SliceOracle,
    pub generators: GeneratorSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransferReport {
    pub p: i64,
    pub q: i64,
    /// Generators of each `q`-truncated sub-simplex ring.
    pub truncated: Vec<Vec<Element>>,
    /// Their images in the big ring.
    pub images: GeneratorSet,
    pub truncation: TruncationReport,
    pub generators: GeneratorSet,
    pub ok: bool,
}

/// Pushes sub-simplex generators into the ring `m`: truncate each at `q`,
/// re-grade with `b`, and extend from the `pq`-truncation to all of `m`.
/// Everything is checked exhaustively up to total degree `bound`.
pub fn simplex_transfer(
    vertex_rings: &[VertexRing<'_>],
    matrices: &[TransferMatrices],
    m: &dyn SliceOracle,
    bound: i64,
) -> Result<TransferReport> {
    if vertex_rings.is_empty() {
        return Err(Error::EmptyInput("vertex rings"));
    }
    if vertex_rings.len() != matrices.len() {
        return Err(Error::DimensionMismatch {
            expected: vertex_rings.len(),
            found: matrices.len(),
        });
    }
    let (p, q) = (matrices[0].p, matrices[0].q);
    for t in matrices {
        t.check()?;
        if (t.p, t.q) != (p, q) || t.n() != m.n() {
            return Err(Error::TransferIdentity(
                "matrices disagree on p, q or size".into(),
            ));
        }
    }
    let mut truncated = Vec::with_capacity(vertex_rings.len());
    let mut images = GeneratorSet::default();
    for (l, (ring, t)) in vertex_rings.iter().zip(matrices).enumerate() {
        let gens = ring.generators.elements();
        let check = generation_check(ring.oracle, &gens, bound);
        if !check.ok {
            return Err(Error::Verification(format!(
                "generators of sub-simplex ring {l} fail: {} foreign, {} missing",
                check.foreign.len(),
                check.missing.len()
            )));
        }
        let (n, k) = (ring.oracle.n(), ring.oracle.k());
        let weights = vec![q; n];
        let cut = saturated_reweight(n, k, &gens, &weights)?;
        let cut_check = generation_check(
            &Reweighted::new(ring.oracle, &weights)?,
            &cut,
            (bound / q).max(1),
        );
        if !cut_check.ok {
            return Err(Error::Verification(format!(
                "truncation of sub-simplex ring {l} at {q} is not generated by its Hilbert basis"
            )));
        }
        for g in &cut {
            images.push(t.tau(g), format!("tau_{l}"));
        }
        truncated.push(cut);
    }
    let weights = vec![p * q; m.n()];
    let truncation = truncation_implies_fg_weighted(m, &weights, &images, bound)?;
    Ok(TransferReport {
        p,
        q,
        truncated,
        images,
        ok: truncation.ok,
        generators: truncation.generators.clone(),
        truncation,
    })
}
