use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::{nullspace, rank, rref};
use crate::rational::{dot, is_zero_vec, primitive_integer, QVec, Rat};

/// A finitely generated rational cone with its inequality description.
///
/// Facet normals are inward (`c · x >= 0`), lie in the linear span of the
/// cone and are scaled to primitive integer vectors. `equalities` is a basis
/// of the orthogonal complement of the span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    ambient: usize,
    generators: Vec<QVec>,
    facets: Vec<QVec>,
    equalities: Vec<QVec>,
    span_rank: usize,
}

impl Cone {
    pub fn from_generators(generators: &[QVec], ambient: usize) -> Cone {
        let mut gens: Vec<QVec> = generators
            .iter()
            .filter(|g| !is_zero_vec(g))
            .map(|g| {
                primitive_integer(g)
                    .into_iter()
                    .map(Rat::from_integer)
                    .collect()
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        gens.sort();
        let span_rank = rank(&gens);
        // Drop generators inside the cone of the rest, one at a time so the
        // cone never changes; facet enumeration is exponential in the count.
        // Small sets enumerate faster than they prune.
        if gens.len() > 3 * span_rank {
            let mut i = gens.len();
            while i > 0 {
                i -= 1;
                let rest: Vec<QVec> = gens
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, g)| g.clone())
                    .collect();
                if crate::lp::cone_combination(&rest, &gens[i]).is_some() {
                    gens.remove(i);
                }
            }
        }
        let equalities = nullspace(&gens, ambient)
            .iter()
            .map(|e| {
                primitive_integer(e)
                    .into_iter()
                    .map(Rat::from_integer)
                    .collect()
            })
            .collect();
        let facets = enumerate_facets(&gens, ambient, span_rank);
        Cone {
            ambient,
            generators: gens,
            facets,
            equalities,
            span_rank,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    pub fn facets(&self) -> &[QVec] {
        &self.facets
    }

    pub fn equalities(&self) -> &[QVec] {
        &self.equalities
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.span_rank
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equalities.iter().all(|e| dot(e, x).is_zero())
            && self.facets.iter().all(|f| !dot(f, x).is_negative())
    }

    /// Integer copy of the inequality description for fast lattice tests.
    pub fn lattice_view(&self) -> LatticeCone {
        let conv = |rows: &[QVec]| -> Vec<Vec<i128>> {
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.numer().to_i128().expect("facet entry fits in i128"))
                        .collect()
                })
                .collect()
        };
        LatticeCone {
            facets: conv(&self.facets),
            equalities: conv(&self.equalities),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LatticeCone {
    facets: Vec<Vec<i128>>,
    equalities: Vec<Vec<i128>>,
}

impl LatticeCone {
    pub fn contains(&self, x: &[i64]) -> bool {
        let ev = |r: &Vec<i128>| -> i128 { r.iter().zip(x).map(|(a, b)| a * (*b as i128)).sum() };
        self.equalities.iter().all(|e| ev(e) == 0) && self.facets.iter().all(|f| ev(f) >= 0)
    }
}

fn enumerate_facets(gens: &[QVec], ambient: usize, s: usize) -> Vec<QVec> {
    if s == 0 {
        return Vec::new();
    }
    let (basis, _) = rref(gens, ambient);
    let mut found: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut subset = Vec::with_capacity(s - 1);
    for_each_subset(gens.len(), s - 1, 0, &mut subset, &mut |idx| {
        let rows: Vec<QVec> = idx
            .iter()
            .map(|&i| basis.iter().map(|b| dot(b, &gens[i])).collect())
            .collect();
        let ns = if rows.is_empty() {
            vec![vec![Rat::from_integer(1.into())]]
        } else {
            if rank(&rows) != s - 1 {
                return;
            }
            nullspace(&rows, s)
        };
        if ns.len() != 1 {
            return;
        }
        let alpha = &ns[0];
        let mut c = vec![Rat::zero(); ambient];
        for (a, b) in alpha.iter().zip(&basis) {
            for (ci, bi) in c.iter_mut().zip(b) {
                *ci += a * bi;
            }
        }
        let (mut pos, mut neg) = (false, false);
        for g in gens {
            let v = dot(&c, g);
            pos |= v.is_positive();
            neg |= v.is_negative();
        }
        let oriented = match (pos, neg) {
            (true, false) => c,
            (false, true) => c.iter().map(|x| -x).collect(),
            _ => return,
        };
        found.insert(primitive_integer(&oriented));
    });
    found
        .into_iter()
        .map(|v| v.into_iter().map(Rat::from_integer).collect())
        .collect()
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(
    n: usize,
    k: usize,
    start: usize,
    cur: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        for_each_subset(n, k, i + 1, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ivec;

    #[test]
    fn quadrant() {
        let c = Cone::from_generators(&[ivec(&[1, 0]), ivec(&[0, 1])], 2);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.facets().len(), 2);
        assert!(c.contains(&ivec(&[3, 4])));
        assert!(!c.contains(&ivec(&[-1, 4])));
    }

    #[test]
    fn halfplane_and_line() {
        let half = Cone::from_generators(&[ivec(&[1, 0]), ivec(&[-1, 0]), ivec(&[0, 1])], 2);
        assert_eq!(half.facets(), &[ivec(&[0, 1])]);
        let line = Cone::from_generators(&[ivec(&[1, 1]), ivec(&[-1, -1])], 2);
        assert!(line.facets().is_empty());
        assert!(line.contains(&ivec(&[-5, -5])));
        assert!(!line.contains(&ivec(&[1, 0])));
    }

    #[test]
    fn ray_in_3d() {
        let r = Cone::from_generators(&[ivec(&[0, 2, 0])], 3);
        assert_eq!(r.dim(), 1);
        assert!(r.contains(&ivec(&[0, 7, 0])));
        assert!(!r.contains(&ivec(&[0, -1, 0])));
        assert!(r.lattice_view().contains(&[0, 3, 0]));
    }
}
