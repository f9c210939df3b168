//! Saturated monoids: lattice points of rational cones, and their Hilbert bases.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use super::{minimal_generators, Element, GeneratorSet, Slice, SliceOracle};
use crate::error::{Error, Result};
use crate::geometry::cone::for_each_subset;
use crate::geometry::{Cone, HalfSpace, Polytope};
use crate::linalg::{nullspace, rank};
use crate::lp::positive_grading;
use crate::rational::{ceil_i64, dot, floor_i64, primitive_integer, QVec, Rat};

fn to_q(v: &[i64]) -> QVec {
    v.iter().map(|&x| Rat::from_integer(x.into())).collect()
}

fn to_int(v: &[Rat]) -> Result<Vec<i64>> {
    primitive_integer(v)
        .into_iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| Error::Precondition("entry exceeds i64".into()))
        })
        .collect()
}

/// Minimal generating set of the monoid of lattice points in the cone
/// spanned by `cone_generators`. The cone must be pointed.
///
/// Candidates are scanned level by level for a positive grading; a lattice
/// point is kept when subtracting no earlier basis element stays in the cone.
/// Every basis element lies in a half-open parallelepiped of some simplicial
/// subcone, which caps the level.
pub fn hilbert_basis(cone_generators: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let first = cone_generators
        .first()
        .ok_or(Error::EmptyInput("cone generators"))?;
    let dim = first.len();
    if let Some(g) = cone_generators.iter().find(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: g.len(),
        });
    }
    let nonzero: Vec<QVec> = cone_generators
        .iter()
        .filter(|g| g.iter().any(|&x| x != 0))
        .map(|g| to_q(g))
        .collect();
    if nonzero.is_empty() {
        return Ok(Vec::new());
    }
    let cone = Cone::from_generators(&nonzero, dim);
    let grading = positive_grading(cone.generators())
        .ok_or_else(|| Error::NonPointedCone("no positive grading exists".into()))?;
    let w = to_int(&grading)?;
    let rays: Vec<Vec<i64>> = cone
        .generators()
        .iter()
        .map(|g| to_int(g))
        .collect::<Result<_>>()?;
    let level = |x: &[i64]| -> i64 { w.iter().zip(x).map(|(a, b)| a * b).sum() };
    let mut levels: Vec<i64> = rays.iter().map(|r| level(r)).collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    let max_level: i64 = levels.iter().take(cone.dim()).sum();

    let lattice = cone.lattice_view();
    // A coordinate whose weight is nonzero gets solved for rather than scanned.
    let pivot = w.iter().position(|&x| x != 0).expect("grading is nonzero");
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for l in 1..=max_level {
        let corners: Vec<QVec> = rays
            .iter()
            .map(|r| {
                let s = Rat::new(l.into(), level(r).into());
                r.iter()
                    .map(|&x| &s * Rat::from_integer(x.into()))
                    .collect()
            })
            .collect();
        let lo: Vec<i64> = (0..dim)
            .map(|j| corners.iter().map(|c| ceil_i64(&c[j])).min().expect("rays"))
            .collect();
        let hi: Vec<i64> = (0..dim)
            .map(|j| {
                corners
                    .iter()
                    .map(|c| floor_i64(&c[j]))
                    .max()
                    .expect("rays")
            })
            .collect();
        let mut found = Vec::new();
        scan_box(&lo, &hi, pivot, &mut |x| {
            let rest: i64 = (0..dim).filter(|&j| j != pivot).map(|j| w[j] * x[j]).sum();
            let num = l - rest;
            if num % w[pivot] != 0 {
                return;
            }
            x[pivot] = num / w[pivot];
            if x[pivot] < lo[pivot] || x[pivot] > hi[pivot] || !lattice.contains(x) {
                return;
            }
            let reducible = basis.iter().any(|h| {
                let diff: Vec<i64> = x.iter().zip(h).map(|(a, b)| a - b).collect();
                lattice.contains(&diff)
            });
            if !reducible {
                found.push(x.to_vec());
            }
        });
        basis.extend(found);
    }
    basis.sort();
    Ok(basis)
}

/// Visits every integer point of the box with coordinate `skip` left free.
fn scan_box(lo: &[i64], hi: &[i64], skip: usize, f: &mut dyn FnMut(&mut Vec<i64>)) {
    let n = lo.len();
    if (0..n).any(|j| j != skip && lo[j] > hi[j]) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&mut cur);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if i != skip && cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
    }
}

/// Extreme rays of `{x : a·x >= 0 for a in inequalities, e·x = 0 for e in equalities}`.
/// Fails with `NonPointedCone` if the cone contains a line.
pub fn cone_rays(inequalities: &[QVec], equalities: &[QVec], ambient: usize) -> Result<Vec<QVec>> {
    let mut all: Vec<QVec> = inequalities.to_vec();
    all.extend(equalities.iter().cloned());
    if rank(&all) < ambient {
        return Err(Error::NonPointedCone("the cone contains a line".into()));
    }
    let inside = |x: &QVec| {
        inequalities.iter().all(|a| !dot(a, x).is_negative())
            && equalities.iter().all(|e| dot(e, x).is_zero())
    };
    let eq_rank = rank(equalities);
    let mut rays: BTreeSet<QVec> = BTreeSet::new();
    let need = ambient - 1;
    if need < eq_rank {
        return Ok(Vec::new());
    }
    let mut idx = Vec::new();
    for_each_subset(
        inequalities.len(),
        need - eq_rank,
        0,
        &mut idx,
        &mut |sel| {
            let mut rows: Vec<QVec> = equalities.to_vec();
            rows.extend(sel.iter().map(|&i| inequalities[i].clone()));
            if rank(&rows) != need {
                return;
            }
            let ns = nullspace(&rows, ambient);
            if ns.len() != 1 {
                return;
            }
            let r: QVec = primitive_integer(&ns[0])
                .into_iter()
                .map(Rat::from_integer)
                .collect();
            let neg: QVec = r.iter().map(|x| -x).collect();
            for cand in [r, neg] {
                if inside(&cand) {
                    rays.insert(cand);
                }
            }
        },
    );
    Ok(rays.into_iter().collect())
}

/// The lattice points of a rational cone in `Z^n x Z^k`, graded by the first
/// `n` coordinates. Every ray must have a nonzero degree part, so that slices
/// are bounded.
#[derive(Debug, Clone)]
pub struct ConeMonoid {
    n: usize,
    k: usize,
    cone: Cone,
}

impl ConeMonoid {
    pub fn from_generators(n: usize, k: usize, generators: &[Element]) -> Result<ConeMonoid> {
        let rays: Vec<QVec> = generators
            .iter()
            .map(|g| {
                if g.deg.len() != n || g.payload.len() != k {
                    return Err(Error::DimensionMismatch {
                        expected: n + k,
                        found: g.deg.len() + g.payload.len(),
                    });
                }
                let mut v = to_q(&g.deg);
                v.extend(to_q(&g.payload));
                Ok(v)
            })
            .collect::<Result<_>>()?;
        ConeMonoid::from_rays(n, k, &rays)
    }

    /// Cone cut out by `a·(m, u) >= 0` for each row, together with `m >= 0`.
    pub fn from_inequalities(n: usize, k: usize, rows: &[QVec]) -> Result<ConeMonoid> {
        let d = n + k;
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: r.len(),
            });
        }
        let mut all = rows.to_vec();
        for i in 0..n {
            let mut e = vec![Rat::zero(); d];
            e[i] = Rat::from_integer(1.into());
            all.push(e);
        }
        let rays = cone_rays(&all, &[], d)?;
        ConeMonoid::from_rays(n, k, &rays)
    }

    /// Cone spanned by rational rays in `Q^n x Q^k`.
    pub fn from_rays(n: usize, k: usize, rays: &[QVec]) -> Result<ConeMonoid> {
        if let Some(r) = rays
            .iter()
            .find(|r| r[..n].iter().all(|x| x.is_zero()) && r.iter().any(|x| !x.is_zero()))
        {
            return Err(Error::Precondition(format!(
                "ray with zero degree part {:?} makes slices unbounded",
                r.iter()
                    .map(crate::rational::format_rat)
                    .collect::<Vec<_>>()
            )));
        }
        if let Some(r) = rays.iter().find(|r| r[..n].iter().any(|x| x.is_negative())) {
            return Err(Error::Precondition(format!(
                "ray with negative degree {:?}",
                r.iter()
                    .map(crate::rational::format_rat)
                    .collect::<Vec<_>>()
            )));
        }
        Ok(ConeMonoid {
            n,
            k,
            cone: Cone::from_generators(rays, n + k),
        })
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// The Hilbert basis, split into degree and payload: slice enumeration
    /// and minimalization under the total-degree grading, up to the sum of
    /// the `dim` largest ray degrees.
    pub fn generators(&self) -> Result<Vec<Element>> {
        let mut levels: Vec<i64> = self
            .cone
            .generators()
            .iter()
            .map(|g| to_int(g).map(|v| v[..self.n].iter().sum()))
            .collect::<Result<_>>()?;
        if levels.is_empty() {
            return Ok(Vec::new());
        }
        levels.sort_unstable_by(|a, b| b.cmp(a));
        let bound: i64 = levels.iter().take(self.cone.dim()).sum();
        Ok(minimal_generators(self, bound))
    }

    /// The polytope of payloads over a rational degree.
    pub fn section(&self, deg: &[Rat]) -> Polytope {
        let n = self.n;
        let mut hs = Vec::new();
        let mut empty = false;
        let mut push = |c: &QVec, equality: bool| {
            let offset = dot(&c[..n], deg);
            match HalfSpace::new(c[n..].to_vec(), offset.clone()) {
                Ok(h) => {
                    if equality {
                        hs.push(h.flipped());
                    }
                    hs.push(h);
                }
                Err(_) => {
                    if offset.is_negative() || (equality && !offset.is_zero()) {
                        empty = true;
                    }
                }
            }
        };
        for f in self.cone.facets() {
            push(f, false);
        }
        for e in self.cone.equalities() {
            push(e, true);
        }
        if empty {
            return Polytope::empty(self.k);
        }
        Polytope::from_halfspaces(self.k, &hs).expect("dimensions agree")
    }
}

impl SliceOracle for ConeMonoid {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn slice(&self, deg: &[i64]) -> Slice {
        self.section(&to_q(deg))
            .lattice_points()
            .into_iter()
            .collect()
    }
}

/// Slices are the lattice points of Minkowski sums `sum m_i P_i` of fixed
/// lattice polygons, computed directly from vertex sums.
#[derive(Debug, Clone)]
pub struct CayleyMonoid {
    k: usize,
    polytopes: Vec<Polytope>,
}

impl CayleyMonoid {
    pub fn new(polytopes: Vec<Polytope>) -> Result<CayleyMonoid> {
        let k = polytopes
            .first()
            .ok_or(Error::EmptyInput("polytopes"))?
            .ambient();
        for p in &polytopes {
            if p.ambient() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: p.ambient(),
                });
            }
            if p.is_empty() {
                return Err(Error::Precondition("empty polytope in a Cayley sum".into()));
            }
        }
        Ok(CayleyMonoid { k, polytopes })
    }

    /// The Minkowski sum at a degree.
    pub fn sum(&self, deg: &[i64]) -> Polytope {
        let mut points: Vec<QVec> = vec![vec![Rat::zero(); self.k]];
        for (p, &m) in self.polytopes.iter().zip(deg) {
            if m == 0 {
                continue;
            }
            let s = Rat::from_integer(m.into());
            let mut next = BTreeSet::new();
            for a in &points {
                for v in p.vertices() {
                    next.insert(a.iter().zip(v).map(|(x, y)| x + &s * y).collect::<QVec>());
                }
            }
            points = Polytope::convex_hull(&next.into_iter().collect::<Vec<_>>())
                .expect("dimensions agree")
                .vertices()
                .to_vec();
        }
        Polytope::convex_hull(&points).expect("dimensions agree")
    }
}

impl SliceOracle for CayleyMonoid {
    fn n(&self) -> usize {
        self.polytopes.len()
    }
    fn k(&self) -> usize {
        self.k
    }
    fn slice(&self, deg: &[i64]) -> Slice {
        self.sum(deg).lattice_points().into_iter().collect()
    }
}

/// Generators of the multigraded ring whose degree-`m` piece is spanned by
/// the lattice points of `sum m_i P_i`: the Hilbert basis of the cone over
/// the Cayley polytope (vertices `(e_i, v)` for `v` a vertex of `P_i`).
/// Every ray has total degree one, so the basis sits in total degree at most
/// the cone's dimension and slice minimalization up to there finds it.
pub fn semiample_generators(polytopes: &[Polytope]) -> Result<GeneratorSet> {
    let oracle = CayleyMonoid::new(polytopes.to_vec())?;
    for (i, p) in polytopes.iter().enumerate() {
        if !p.is_lattice() {
            return Err(Error::Precondition(format!(
                "polytope {i} has a non-integral vertex"
            )));
        }
    }
    let bound = (oracle.n() + oracle.k()) as i64;
    Ok(GeneratorSet::from_elements(
        minimal_generators(&oracle, bound),
        "semiample",
    ))
}

/// Generators of the `w`-reweighting of a saturated monoid, given generators
/// of the monoid: the Hilbert basis of the cone they span, with degrees
/// divided by `w`. Exact when the generated monoid is saturated.
pub fn saturated_reweight(
    n: usize,
    k: usize,
    generators: &[Element],
    w: &[i64],
) -> Result<Vec<Element>> {
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    if w.iter().any(|&x| x <= 0) {
        return Err(Error::InvalidWeight(format!(
            "weights must be positive, got {w:?}"
        )));
    }
    let rays: Vec<QVec> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let mut v: QVec = g
                .deg
                .iter()
                .zip(w)
                .map(|(&d, &x)| Rat::new(d.into(), x.into()))
                .collect();
            v.extend(to_q(&g.payload));
            v
        })
        .collect();
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    ConeMonoid::from_rays(n, k, &rays)?.generators()
}

#[cfg(test)]
mod tests {
    use super::super::{generation_check, minimal_generators, tests::el};
    use super::*;
    use crate::rational::ivec;

    fn segment(a: i64, b: i64) -> Polytope {
        Polytope::convex_hull(&[ivec(&[a]), ivec(&[b])]).unwrap()
    }

    #[test]
    fn hilbert_bases_of_plane_cones() {
        assert_eq!(
            hilbert_basis(&[vec![1, 0], vec![1, 2]]).unwrap(),
            vec![vec![1, 0], vec![1, 1], vec![1, 2]]
        );
        assert_eq!(hilbert_basis(&[vec![1, 0], vec![1, 3]]).unwrap().len(), 4);
        // A cone of determinant 3.
        assert_eq!(
            hilbert_basis(&[vec![0, 1], vec![3, -2]]).unwrap(),
            vec![vec![0, 1], vec![1, 0], vec![2, -1], vec![3, -2]]
        );
        assert!(matches!(
            hilbert_basis(&[vec![1, 0], vec![-1, 0]]),
            Err(Error::NonPointedCone(_))
        ));
    }

    #[test]
    fn hilbert_basis_of_a_non_simplicial_cone() {
        // Cone over the unit square at height 1: the square is normal.
        let gens = vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![1, 1, 1]];
        assert_eq!(hilbert_basis(&gens).unwrap(), {
            let mut g = gens.clone();
            g.sort();
            g
        });
        // Reeve-type tetrahedron with height 2 needs an interior generator.
        let reeve = vec![
            vec![1, 0, 0, 0],
            vec![1, 1, 0, 0],
            vec![1, 0, 1, 0],
            vec![1, 1, 1, 2],
        ];
        let hb = hilbert_basis(&reeve).unwrap();
        assert!(hb.contains(&vec![2, 1, 1, 1]));
        assert_eq!(hb.len(), 5);
    }

    #[test]
    fn semiample_generators_of_segments() {
        let single = semiample_generators(&[segment(0, 2)]).unwrap();
        assert_eq!(
            single.elements(),
            vec![el(&[1], &[0]), el(&[1], &[1]), el(&[1], &[2])]
        );
        let pair = semiample_generators(&[segment(0, 1), segment(0, 1)]).unwrap();
        assert_eq!(
            pair.elements(),
            vec![
                el(&[0, 1], &[0]),
                el(&[0, 1], &[1]),
                el(&[1, 0], &[0]),
                el(&[1, 0], &[1])
            ]
        );
    }

    #[test]
    fn cayley_oracle_agrees_with_generators() {
        let tri = Polytope::convex_hull(&[ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])]).unwrap();
        let sq =
            Polytope::convex_hull(&[ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])])
                .unwrap();
        let polys = vec![tri, sq];
        let gens = semiample_generators(&polys).unwrap();
        let oracle = CayleyMonoid::new(polys).unwrap();
        assert_eq!(oracle.slice(&[1, 1]).len(), 8);
        assert!(generation_check(&oracle, &gens.elements(), 5).ok);
        assert_eq!(minimal_generators(&oracle, 5), gens.elements());
        let rays = vec![
            vec![1, 0, 0, 0],
            vec![1, 0, 1, 0],
            vec![1, 0, 0, 1],
            vec![0, 1, 0, 0],
            vec![0, 1, 1, 0],
            vec![0, 1, 0, 1],
            vec![0, 1, 1, 1],
        ];
        let hb: Vec<Element> = hilbert_basis(&rays)
            .unwrap()
            .into_iter()
            .map(|v| Element::new(v[..2].to_vec(), v[2..].to_vec()))
            .collect();
        let mut sorted = gens.elements();
        sorted.sort();
        assert_eq!(hb, sorted);
    }

    #[test]
    fn saturated_reweighting() {
        let gens = vec![el(&[1], &[0]), el(&[1], &[1])];
        let cut = saturated_reweight(1, 1, &gens, &[3]).unwrap();
        assert_eq!(
            cut,
            vec![
                el(&[1], &[0]),
                el(&[1], &[1]),
                el(&[1], &[2]),
                el(&[1], &[3])
            ]
        );
        let pair = vec![el(&[1, 0], &[1]), el(&[0, 1], &[1])];
        assert_eq!(
            saturated_reweight(2, 1, &pair, &[2, 3]).unwrap(),
            vec![el(&[0, 1], &[3]), el(&[1, 0], &[2])]
        );
    }

    #[test]
    fn cone_monoid_from_inequalities() {
        // u >= 0 and 2m - u >= 0: slice at degree m is {0..2m}.
        let m = ConeMonoid::from_inequalities(1, 1, &[ivec(&[0, 1]), ivec(&[2, -1])]).unwrap();
        assert_eq!(m.slice(&[3]).len(), 7);
        assert_eq!(
            m.generators().unwrap(),
            vec![el(&[1], &[0]), el(&[1], &[1]), el(&[1], &[2])]
        );
        assert_eq!(minimal_generators(&m, 6), m.generators().unwrap());
        // A payload direction with no degree cost is rejected.
        assert!(ConeMonoid::from_inequalities(1, 1, &[ivec(&[0, 1])]).is_err());
    }

    #[test]
    fn cone_rays_of_an_orthant_slice() {
        let rays = cone_rays(
            &[ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])],
            &[ivec(&[1, -1, 0])],
            3,
        )
        .unwrap();
        assert_eq!(rays, vec![ivec(&[0, 0, 1]), ivec(&[1, 1, 0])]);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        #[test]
        fn hilbert_basis_is_minimal_and_generating(
            rays in proptest::collection::vec((1i64..=3, -3i64..=3), 1..=3)
        ) {
            let gens: Vec<Element> = rays.iter().map(|&(d, p)| el(&[d], &[p])).collect();
            let m = ConeMonoid::from_generators(1, 1, &gens).unwrap();
            let basis = m.generators().unwrap();
            proptest::prop_assert!(generation_check(&m, &basis, 6).ok);
            for i in 0..basis.len() {
                let mut fewer = basis.clone();
                fewer.remove(i);
                let bound = 6.max(basis[i].total_degree());
                proptest::prop_assert!(!generation_check(&m, &fewer, bound).ok);
            }
        }
    }
}
