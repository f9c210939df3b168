use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::cone::Cone;
use crate::error::{Error, Result};
use crate::linalg::{affine_rank, rank};
use crate::rational::{
    add, ceil_i64, dot, floor_i64, is_zero_vec, primitive_integer, scale, serde_rat, sub, QVec, Rat,
};

/// The closed half-space `{x : normal · x + offset >= 0}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfSpace {
    #[serde(with = "serde_rat::vec")]
    pub normal: QVec,
    #[serde(with = "serde_rat")]
    pub offset: Rat,
}

impl HalfSpace {
    pub fn new(normal: QVec, offset: Rat) -> Result<HalfSpace> {
        if is_zero_vec(&normal) {
            return Err(Error::Degenerate("half-space with zero normal".into()));
        }
        Ok(HalfSpace { normal, offset })
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.normal, x) + &self.offset
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.eval(x).is_negative()
    }

    /// The opposite closed half-space.
    pub fn flipped(&self) -> HalfSpace {
        HalfSpace {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -self.offset.clone(),
        }
    }
}

/// A bounded rational polytope holding both its vertex and inequality
/// descriptions. An empty vertex list is the empty polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<QVec>,
    facets: Vec<HalfSpace>,
    equalities: Vec<HalfSpace>,
}

impl Polytope {
    pub fn empty(ambient: usize) -> Polytope {
        Polytope {
            ambient,
            vertices: Vec::new(),
            facets: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn convex_hull(points: &[QVec]) -> Result<Polytope> {
        let first = points
            .first()
            .ok_or(Error::EmptyInput("convex_hull needs points"))?;
        let n = first.len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        let pts: Vec<QVec> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if n == 2 {
            if let Some(p) = planar_hull(&pts) {
                return Ok(p);
            }
        }
        Ok(Polytope::hull_of_sorted(n, pts))
    }

    fn hull_of_sorted(n: usize, pts: Vec<QVec>) -> Polytope {
        let lifted: Vec<QVec> = pts.iter().map(|p| homogenize(p)).collect();
        let cone = Cone::from_generators(&lifted, n + 1);
        let dim = cone.dim() - 1;
        let split = |c: &QVec| HalfSpace {
            normal: c[1..].to_vec(),
            offset: c[0].clone(),
        };
        let equalities: Vec<HalfSpace> = cone.equalities().iter().map(split).collect();
        let facets: Vec<HalfSpace> = if dim == 0 {
            Vec::new()
        } else {
            cone.facets().iter().map(split).collect()
        };
        let vertices = if dim == 0 {
            pts.clone()
        } else {
            pts.iter()
                .filter(|p| {
                    let active: Vec<QVec> = facets
                        .iter()
                        .chain(&equalities)
                        .filter(|h| h.eval(p).is_zero())
                        .map(|h| h.normal.clone())
                        .collect();
                    rank(&active) == n
                })
                .cloned()
                .collect()
        };
        Polytope {
            ambient: n,
            vertices,
            facets,
            equalities,
        }
    }

    /// Bounded polytope from an inequality description, by brute-force vertex
    /// enumeration over linearly independent `n`-subsets. Unbounded input
    /// yields the hull of its vertices, so callers must ensure boundedness.
    pub fn from_halfspaces(ambient: usize, halfspaces: &[HalfSpace]) -> Result<Polytope> {
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: h.normal.len(),
            });
        }
        if ambient == 0 {
            return Ok(if halfspaces.iter().all(|h| !h.offset.is_negative()) {
                Polytope::convex_hull(&[Vec::new()])?
            } else {
                Polytope::empty(0)
            });
        }
        let mut vertices: BTreeSet<QVec> = BTreeSet::new();
        let mut idx = Vec::with_capacity(ambient);
        super::cone::for_each_subset(halfspaces.len(), ambient, 0, &mut idx, &mut |sel| {
            let rows: Vec<QVec> = sel.iter().map(|&i| halfspaces[i].normal.clone()).collect();
            if rank(&rows) != ambient {
                return;
            }
            let rhs: Vec<Rat> = sel.iter().map(|&i| -halfspaces[i].offset.clone()).collect();
            if let Some(x) = crate::linalg::solve(&rows, &rhs, ambient) {
                if halfspaces.iter().all(|h| h.contains(&x)) {
                    vertices.insert(x);
                }
            }
        });
        if vertices.is_empty() {
            return Ok(Polytope::empty(ambient));
        }
        Polytope::convex_hull(&vertices.into_iter().collect::<Vec<_>>())
    }

    /// All integer points, by scanning the bounding box.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        if self.is_empty() {
            return Vec::new();
        }
        let n = self.ambient;
        let lo: Vec<i64> = (0..n)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| ceil_i64(&v[i]))
                    .min()
                    .expect("nonempty")
            })
            .collect();
        let hi: Vec<i64> = (0..n)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| floor_i64(&v[i]))
                    .max()
                    .expect("nonempty")
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return out;
        }
        loop {
            let x: QVec = cur.iter().map(|&c| Rat::from_integer(c.into())).collect();
            if self.contains_unchecked(&x) {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
        }
    }

    /// Whether every vertex has integer coordinates.
    pub fn is_lattice(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.iter().all(|x| x.is_integer()))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension; `None` for the empty polytope.
    pub fn dim(&self) -> Option<usize> {
        affine_rank(&self.vertices)
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    pub fn equalities(&self) -> &[HalfSpace] {
        &self.equalities
    }

    /// Full inequality description; each equality appears as a pair of
    /// opposite half-spaces.
    pub fn halfspaces(&self) -> Vec<HalfSpace> {
        let mut out = self.facets.clone();
        for e in &self.equalities {
            out.push(e.clone());
            out.push(e.flipped());
        }
        out
    }

    pub fn barycenter(&self) -> Option<QVec> {
        (!self.is_empty()).then(|| crate::rational::barycenter(&self.vertices))
    }

    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &[Rat]) -> bool {
        !self.is_empty()
            && self.equalities.iter().all(|e| e.eval(x).is_zero())
            && self.facets.iter().all(|f| f.contains(x))
    }

    /// Whether every vertex of `other` lies in `self`.
    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        other.vertices.iter().all(|v| self.contains_unchecked(v))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found,
            });
        }
        Ok(())
    }

    fn active_normals(&self, x: &[Rat]) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.eval(x).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Pairs of vertex indices spanning an edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.ambient;
        let eq: Vec<QVec> = self.equalities.iter().map(|e| e.normal.clone()).collect();
        let active: Vec<BTreeSet<usize>> = self
            .vertices
            .iter()
            .map(|v| self.active_normals(v).into_iter().collect())
            .collect();
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                if n == 2 && eq.is_empty() {
                    // polygon: endpoints of a common side
                    if active[i].intersection(&active[j]).next().is_some() {
                        out.push((i, j));
                    }
                    continue;
                }
                let mut rows = eq.clone();
                rows.extend(
                    active[i]
                        .intersection(&active[j])
                        .map(|&f| self.facets[f].normal.clone()),
                );
                if rank(&rows) == n - 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn intersect_halfspace(&self, h: &HalfSpace) -> Result<Polytope> {
        self.check_dim(h.normal.len())?;
        if self.is_empty() {
            return Ok(self.clone());
        }
        let values: Vec<Rat> = self.vertices.iter().map(|v| h.eval(v)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            return Ok(self.clone());
        }
        let mut points: Vec<QVec> = self
            .vertices
            .iter()
            .zip(&values)
            .filter(|(_, v)| !v.is_negative())
            .map(|(p, _)| p.clone())
            .collect();
        for (i, j) in self.edges() {
            let (a, b) = (&values[i], &values[j]);
            if (a.is_positive() && b.is_negative()) || (a.is_negative() && b.is_positive()) {
                let t = a / (a - b);
                let (u, v) = (&self.vertices[i], &self.vertices[j]);
                points.push(add(u, &scale(&sub(v, u), &t)));
            }
        }
        if points.is_empty() {
            return Ok(Polytope::empty(self.ambient));
        }
        Polytope::convex_hull(&points)
    }

    pub fn intersect(&self, other: &Polytope) -> Result<Polytope> {
        self.check_dim(other.ambient)?;
        if other.is_empty() {
            return Ok(Polytope::empty(self.ambient));
        }
        let mut acc = self.clone();
        for h in other.halfspaces() {
            if acc.is_empty() {
                break;
            }
            acc = acc.intersect_halfspace(&h)?;
        }
        Ok(acc)
    }

    /// Vertex sets (as index sets) of all nonempty faces.
    fn face_vertex_sets(&self) -> BTreeSet<Vec<usize>> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let on_facet: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| {
                all.iter()
                    .copied()
                    .filter(|&i| f.eval(&self.vertices[i]).is_zero())
                    .collect()
            })
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![all];
        while let Some(face) = stack.pop() {
            if !seen.insert(face.clone()) {
                continue;
            }
            for fv in &on_facet {
                let sub: Vec<usize> = face.iter().copied().filter(|i| fv.contains(i)).collect();
                if !sub.is_empty() && !seen.contains(&sub) {
                    stack.push(sub);
                }
            }
        }
        seen
    }

    /// All `k`-dimensional faces, including the polytope itself when `k = dim`.
    pub fn faces(&self, k: usize) -> Result<Vec<Polytope>> {
        let dim = self
            .dim()
            .ok_or(Error::EmptyInput("faces of the empty polytope"))?;
        if k > dim {
            return Err(Error::FaceDimensionOutOfRange { k, dim });
        }
        let mut out = Vec::new();
        for set in self.face_vertex_sets() {
            let pts: Vec<QVec> = set.iter().map(|&i| self.vertices[i].clone()).collect();
            if affine_rank(&pts) == Some(k) {
                out.push(Polytope::convex_hull(&pts)?);
            }
        }
        out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        Ok(out)
    }

    /// A half-space valid on `self` whose contact set is exactly `face`;
    /// `Ok(None)` when `face` is not a face. The improper face `self` is
    /// supported by the trivial half-space `0·x + 0 >= 0`, reported as a
    /// zero normal.
    pub fn supporting_halfspace(&self, face: &Polytope) -> Result<Option<(QVec, Rat)>> {
        self.check_dim(face.ambient)?;
        if !self.contains_polytope(face) {
            return Err(Error::NotContained(
                "face candidate is not a subset of the polytope".into(),
            ));
        }
        let mut normal = vec![Rat::zero(); self.ambient];
        let mut offset = Rat::zero();
        for f in &self.facets {
            if face.vertices.iter().all(|v| f.eval(v).is_zero()) {
                normal = add(&normal, &f.normal);
                offset += &f.offset;
            }
        }
        let contact: Vec<QVec> = self
            .vertices
            .iter()
            .filter(|v| (dot(&normal, v) + &offset).is_zero())
            .cloned()
            .collect();
        Ok((contact == face.vertices).then_some((normal, offset)))
    }

    /// Face test; the empty set counts as a face of every polytope.
    pub fn is_face_of(face: &Polytope, p: &Polytope) -> Result<bool> {
        if face.is_empty() {
            return Ok(true);
        }
        Ok(p.supporting_halfspace(face)?.is_some())
    }

    /// Affine frame `(origin, directions)` of the affine hull.
    pub fn affine_frame(&self) -> Option<(QVec, Vec<QVec>)> {
        let (o, rest) = self.vertices.split_first()?;
        let mut dirs: Vec<QVec> = Vec::new();
        for v in rest {
            let d = sub(v, o);
            let mut trial = dirs.clone();
            trial.push(d.clone());
            if rank(&trial) > dirs.len() {
                dirs.push(d);
            }
        }
        Some((o.clone(), dirs))
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            ambient: Some(self.ambient),
            vertices: self.vertices.clone(),
        }
    }

    pub fn from_json(j: &PolytopeJson) -> Result<Polytope> {
        if j.vertices.is_empty() {
            let ambient = j
                .ambient
                .ok_or(Error::Parse("empty polytope needs \"ambient\"".into()))?;
            return Ok(Polytope::empty(ambient));
        }
        let p = Polytope::convex_hull(&j.vertices)?;
        if let Some(a) = j.ambient {
            p.check_dim(a)?;
        }
        Ok(p)
    }
}

fn cross(o: &[Rat], a: &[Rat], b: &[Rat]) -> Rat {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Monotone chain over lexicographically sorted distinct points, with facets
/// normalized as in the general path. `None` for degenerate input.
fn planar_hull(pts: &[QVec]) -> Option<Polytope> {
    if pts.len() < 3 {
        return None;
    }
    let mut ring: Vec<&QVec> = Vec::with_capacity(pts.len() + 1);
    for pass in [
        &mut pts.iter() as &mut dyn Iterator<Item = &QVec>,
        &mut pts.iter().rev(),
    ] {
        let floor = ring.len();
        for p in pass {
            while ring.len() >= floor + 2
                && !cross(ring[ring.len() - 2], ring[ring.len() - 1], p).is_positive()
            {
                ring.pop();
            }
            ring.push(p);
        }
        ring.pop();
    }
    if ring.len() < 3 {
        return None;
    }
    let mut facets: BTreeSet<Vec<num_bigint::BigInt>> = BTreeSet::new();
    for (i, a) in ring.iter().enumerate() {
        let b = ring[(i + 1) % ring.len()];
        let normal = vec![-(&b[1] - &a[1]), &b[0] - &a[0]];
        let offset = -dot(&normal, a);
        facets.insert(primitive_integer(&[
            offset,
            normal[0].clone(),
            normal[1].clone(),
        ]));
    }
    let mut vertices: Vec<QVec> = ring.into_iter().cloned().collect();
    vertices.sort();
    Some(Polytope {
        ambient: 2,
        vertices,
        facets: facets
            .into_iter()
            .map(|c| {
                let c: QVec = c.into_iter().map(Rat::from_integer).collect();
                HalfSpace {
                    normal: c[1..].to_vec(),
                    offset: c[0].clone(),
                }
            })
            .collect(),
        equalities: Vec::new(),
    })
}

fn homogenize(p: &[Rat]) -> QVec {
    let mut v = Vec::with_capacity(p.len() + 1);
    v.push(Rat::one());
    v.extend_from_slice(p);
    v
}

/// JSON shape of a polytope: its vertex list; the inequality description is
/// derived on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<usize>,
    #[serde(with = "serde_rat::mat")]
    pub vertices: Vec<QVec>,
}

/// An affinely independent vertex list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<QVec>,
}

impl Simplex {
    pub fn new(mut vertices: Vec<QVec>) -> Result<Simplex> {
        if vertices.is_empty() {
            return Err(Error::EmptyInput("simplex needs vertices"));
        }
        if affine_rank(&vertices) != Some(vertices.len() - 1) {
            return Err(Error::Degenerate(
                "simplex vertices are affinely dependent".into(),
            ));
        }
        vertices.sort();
        Ok(Simplex { vertices })
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn to_polytope(&self) -> Polytope {
        Polytope::convex_hull(&self.vertices).expect("simplex vertices are valid points")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ivec, qvec};

    fn square() -> Polytope {
        Polytope::convex_hull(&[
            ivec(&[0, 0]),
            ivec(&[1, 0]),
            ivec(&[0, 1]),
            ivec(&[1, 1]),
            qvec(&[(1, 2), (1, 2)]),
        ])
        .unwrap()
    }

    #[test]
    fn hull_drops_interior_points() {
        let sq = square();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.facets().len(), 4);
        assert_eq!(sq.dim(), Some(2));
        assert!(sq.contains(&qvec(&[(1, 3), (2, 3)])).unwrap());
        assert!(!sq.contains(&ivec(&[2, 0])).unwrap());
        assert!(sq.contains(&ivec(&[1])).is_err());
    }

    #[test]
    fn lower_dimensional_hulls() {
        let seg =
            Polytope::convex_hull(&[ivec(&[0, 0, 0]), ivec(&[2, 2, 2]), ivec(&[1, 1, 1])]).unwrap();
        assert_eq!(seg.vertices(), &[ivec(&[0, 0, 0]), ivec(&[2, 2, 2])]);
        assert_eq!(seg.dim(), Some(1));
        assert!(seg.contains(&qvec(&[(1, 2), (1, 2), (1, 2)])).unwrap());
        assert!(!seg.contains(&ivec(&[1, 1, 0])).unwrap());
        let pt = Polytope::convex_hull(&[ivec(&[3, 4])]).unwrap();
        assert_eq!(pt.dim(), Some(0));
        assert!(pt.contains(&ivec(&[3, 4])).unwrap());
    }

    #[test]
    fn face_lattice_of_cube() {
        let mut pts = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    pts.push(ivec(&[a, b, c]));
                }
            }
        }
        let cube = Polytope::convex_hull(&pts).unwrap();
        assert_eq!(cube.faces(0).unwrap().len(), 8);
        assert_eq!(cube.faces(1).unwrap().len(), 12);
        assert_eq!(cube.faces(2).unwrap().len(), 6);
        assert_eq!(cube.faces(3).unwrap().len(), 1);
        assert!(cube.faces(4).is_err());
        assert_eq!(cube.edges().len(), 12);
    }

    #[test]
    fn cutting_and_intersection() {
        let sq = square();
        let h = HalfSpace::new(ivec(&[-1, -1]), int(1)).unwrap();
        let tri = sq.intersect_halfspace(&h).unwrap();
        assert_eq!(
            tri.vertices(),
            &[ivec(&[0, 0]), ivec(&[0, 1]), ivec(&[1, 0])]
        );
        let shifted =
            Polytope::convex_hull(&[ivec(&[1, 1]), ivec(&[2, 1]), ivec(&[1, 2])]).unwrap();
        let corner = sq.intersect(&shifted).unwrap();
        assert_eq!(corner.vertices(), &[ivec(&[1, 1])]);
        let far = Polytope::convex_hull(&[ivec(&[5, 5])]).unwrap();
        assert!(sq.intersect(&far).unwrap().is_empty());
    }

    #[test]
    fn faces_and_non_faces() {
        let sq = square();
        let edge = Polytope::convex_hull(&[ivec(&[0, 0]), ivec(&[1, 0])]).unwrap();
        assert!(Polytope::is_face_of(&edge, &sq).unwrap());
        let diag = Polytope::convex_hull(&[ivec(&[0, 0]), ivec(&[1, 1])]).unwrap();
        assert!(!Polytope::is_face_of(&diag, &sq).unwrap());
        assert!(Polytope::is_face_of(&sq, &sq).unwrap());
        assert!(Polytope::is_face_of(&Polytope::empty(2), &sq).unwrap());
        let outside = Polytope::convex_hull(&[ivec(&[3, 3])]).unwrap();
        assert!(Polytope::is_face_of(&outside, &sq).is_err());
    }

    #[test]
    fn halfspace_construction_and_lattice_points() {
        let hs = vec![
            HalfSpace::new(ivec(&[1, 0]), int(0)).unwrap(),
            HalfSpace::new(ivec(&[0, 1]), int(0)).unwrap(),
            HalfSpace::new(ivec(&[-2, -2]), int(3)).unwrap(),
        ];
        let tri = Polytope::from_halfspaces(2, &hs).unwrap();
        assert_eq!(
            tri.vertices(),
            &[
                ivec(&[0, 0]),
                qvec(&[(0, 1), (3, 2)]),
                qvec(&[(3, 2), (0, 1)])
            ]
        );
        assert_eq!(
            tri.lattice_points(),
            vec![vec![0, 0], vec![1, 0], vec![0, 1]]
        );
        assert!(!tri.is_lattice());
        let mut flipped = hs.clone();
        flipped.push(HalfSpace::new(ivec(&[1, 1]), int(-5)).unwrap());
        assert!(Polytope::from_halfspaces(2, &flipped).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let sq = square();
        let text = serde_json::to_string(&sq.to_json()).unwrap();
        assert!(text.contains("\"1/1\""));
        let back: PolytopeJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Polytope::from_json(&back).unwrap(), sq);
    }

    proptest::proptest! {
        #[test]
        fn planar_hull_matches_the_general_path(
            raw in proptest::collection::vec((-6i64..=6, -6i64..=6, 1i64..=3), 1..9)
        ) {
            let pts: Vec<QVec> = raw
                .iter()
                .map(|&(x, y, d)| vec![Rat::new(x.into(), d.into()), Rat::new(y.into(), d.into())])
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let general = Polytope::hull_of_sorted(2, pts.clone());
            proptest::prop_assert_eq!(Polytope::convex_hull(&pts).unwrap(), general);
        }
    }
}
