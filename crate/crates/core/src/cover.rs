//! Common points of facet-deleted hulls and simplex coverings aligned to a
//! union of sub-polytopes.
//!
//! A covering here is only a covering: simplices may overlap in full
//! dimension, so nothing checks interior-disjointness.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HalfSpace, Polytope, PolytopeJson, Simplex};
use crate::linalg::{affine_rank, solve, transpose};
use crate::lp::convex_combination;
use crate::rational::{add, scale, serde_rat, sub, zeros, QVec, Rat};

/// A point together with exact convex-combination witnesses for its
/// membership in every facet-deleted hull.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommonPointCertificate {
    #[serde(with = "serde_rat::vec")]
    pub point: QVec,
    /// The polytope's vertices in the order the indices refer to.
    #[serde(with = "serde_rat::mat")]
    pub vertices: Vec<QVec>,
    pub memberships: Vec<Membership>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    /// Index of the deleted vertex.
    pub deleted: usize,
    /// Coefficients over the remaining vertices, in order.
    #[serde(with = "serde_rat::vec")]
    pub coefficients: QVec,
}

impl CommonPointCertificate {
    pub fn verify(&self) -> bool {
        let m = self.vertices.len();
        if self.memberships.len() != m {
            return false;
        }
        self.memberships.iter().enumerate().all(|(i, mem)| {
            if mem.deleted != i || mem.coefficients.len() + 1 != m {
                return false;
            }
            let rest = without(&self.vertices, i);
            let total: Rat = mem.coefficients.iter().sum();
            let mut acc = zeros(self.point.len());
            for (c, v) in mem.coefficients.iter().zip(&rest) {
                acc = add(&acc, &scale(v, c));
            }
            total.is_one() && mem.coefficients.iter().all(|c| !c.is_negative()) && acc == self.point
        })
    }
}

fn without(points: &[QVec], i: usize) -> Vec<QVec> {
    points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, p)| p.clone())
        .collect()
}

/// A rational point lying in the hull of every `m - 1` of the `m` vertices.
///
/// The vertices must be exactly the vertices of a full-dimensional polytope
/// with `m > n + 1`.
pub fn common_point(vertices: &[QVec]) -> Result<CommonPointCertificate> {
    let first = vertices
        .first()
        .ok_or(Error::EmptyInput("common_point needs vertices"))?;
    let n = first.len();
    let m = vertices.len();
    if m <= n + 1 {
        return Err(Error::Precondition(format!(
            "need more than n+1 = {} vertices, got {m}",
            n + 1
        )));
    }
    let hull = Polytope::convex_hull(vertices)?;
    if hull.dim() != Some(n) {
        return Err(Error::Precondition(format!(
            "polytope has dimension {:?}, expected {n}",
            hull.dim()
        )));
    }
    if hull.vertices().len() != m {
        return Err(Error::Precondition(
            "input points are not exactly the vertices".into(),
        ));
    }
    let point = reduce_and_solve(vertices.to_vec(), n);
    let mut memberships = Vec::with_capacity(m);
    for i in 0..m {
        let coefficients = convex_combination(&without(vertices, i), &point).ok_or_else(|| {
            Error::Verification(format!("common point misses the hull without vertex {i}"))
        })?;
        memberships.push(Membership {
            deleted: i,
            coefficients,
        });
    }
    Ok(CommonPointCertificate {
        point,
        vertices: vertices.to_vec(),
        memberships,
    })
}

fn reduce_and_solve(mut pts: Vec<QVec>, n: usize) -> QVec {
    while pts.len() > n + 2 {
        // smallest index whose deletion keeps the hull full-dimensional
        let j = (0..pts.len())
            .find(|&j| affine_rank(&without(&pts, j)) == Some(n))
            .expect("some deletion keeps full dimension when m > n + 2");
        pts.remove(j);
    }
    base_case(&pts, n)
}

/// The `m = n + 2` case in affine coordinates where `n` chosen vertices are
/// the unit vectors and one more is the origin.
fn base_case(pts: &[QVec], n: usize) -> QVec {
    let mut frame: Option<Vec<usize>> = None;
    crate::geometry::cone::for_each_subset(pts.len(), n + 1, 0, &mut Vec::new(), &mut |idx| {
        if frame.is_none() {
            let sel: Vec<QVec> = idx.iter().map(|&i| pts[i].clone()).collect();
            if affine_rank(&sel) == Some(n) {
                frame = Some(idx.to_vec());
            }
        }
    });
    let frame = frame.expect("a full-dimensional point set has an affine frame");
    let origin = &pts[frame[n]];
    let basis: Vec<QVec> = frame[..n].iter().map(|&i| sub(&pts[i], origin)).collect();
    let last = (0..pts.len())
        .find(|i| !frame.contains(i))
        .expect("n + 2 points");
    let cols = transpose(&basis);
    let a = solve(&cols, &sub(&pts[last], origin), n).expect("frame is a basis");

    let coords: QVec = if a.iter().all(|x| !x.is_negative()) {
        let total: Rat = a.iter().sum();
        a.iter().map(|x| x / &total).collect()
    } else {
        let neg: Rat = -a.iter().filter(|x| x.is_negative()).sum::<Rat>();
        let pos: Rat = a.iter().filter(|x| !x.is_negative()).sum();
        let one_plus = Rat::one() + &neg;
        let denom = if one_plus <= pos { pos } else { one_plus };
        a.iter()
            .map(|x| {
                if x.is_negative() {
                    Rat::zero()
                } else {
                    x / &denom
                }
            })
            .collect()
    };
    let mut p = origin.clone();
    for (c, b) in coords.iter().zip(&basis) {
        p = add(&p, &scale(b, c));
    }
    p
}

/// Where the covered region meets a simplex, and which part contains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub face: Polytope,
    pub part: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexCover {
    pub simplices: Vec<Simplex>,
    pub alignment: Vec<Alignment>,
}

/// Cones every simplex of a cover of a face to the apex `p`.
///
/// The alignment carries over unchanged: when `p` lies strictly on the
/// negative side of the hyperplane containing the covered region, the region
/// meets a cone only along its base.
pub fn fan_triangulate(p: &[Rat], face_cover: &SimplexCover) -> Result<SimplexCover> {
    let mut simplices = Vec::with_capacity(face_cover.simplices.len());
    for s in &face_cover.simplices {
        simplices.push(cone_over(p, s)?);
    }
    Ok(SimplexCover {
        simplices,
        alignment: face_cover.alignment.clone(),
    })
}

fn cone_over(p: &[Rat], s: &Simplex) -> Result<Simplex> {
    let mut vs = s.vertices().to_vec();
    vs.push(p.to_vec());
    Simplex::new(vs)
        .map_err(|_| Error::Degenerate("apex lies in the affine span of the base".into()))
}

/// Pulling triangulation from the lexicographically least vertex.
pub fn triangulate(p: &Polytope) -> Result<Vec<Simplex>> {
    let d = p
        .dim()
        .ok_or(Error::EmptyInput("cannot triangulate the empty polytope"))?;
    let apex = p.vertices()[0].clone();
    if d == 0 {
        return Ok(vec![Simplex::new(vec![apex])?]);
    }
    let mut out = Vec::new();
    for f in p.faces(d - 1)? {
        if f.vertices().contains(&apex) {
            continue;
        }
        for s in triangulate(&f)? {
            out.push(cone_over(&apex, &s)?);
        }
    }
    Ok(out)
}

/// Hull of the parts after checking that their union is already convex.
fn convex_union(parts: &[Polytope], ambient: usize) -> Result<Polytope> {
    let pts: Vec<QVec> = parts
        .iter()
        .flat_map(|p| p.vertices().iter().cloned())
        .collect();
    if pts.is_empty() {
        return Ok(Polytope::empty(ambient));
    }
    let hull = Polytope::convex_hull(&pts)?;
    let nonempty: Vec<Polytope> = parts.iter().filter(|p| !p.is_empty()).cloned().collect();
    if !covers(&hull, &nonempty)? {
        return Err(Error::Precondition(
            "the union of the parts is not convex".into(),
        ));
    }
    Ok(hull)
}

/// A covering of `c` by full-dimensional simplices such that the union `D`
/// of `parts` meets each simplex in a face contained in a single part.
///
/// `D` must itself be convex; this is checked by exact region subtraction.
pub fn cover_respecting(c: &Polytope, parts: &[Polytope]) -> Result<SimplexCover> {
    let n = c.ambient();
    if c.dim() != Some(n) {
        return Err(Error::Precondition(format!(
            "polytope has dimension {:?}, expected {n}",
            c.dim()
        )));
    }
    for p in parts {
        if p.ambient() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.ambient(),
            });
        }
        if !c.contains_polytope(p) {
            return Err(Error::NotContained(
                "a part is not contained in the polytope".into(),
            ));
        }
    }
    let d = convex_union(parts, n)?;
    let simplices = cover_rec(c, parts)?;
    let alignment = simplices
        .iter()
        .map(|s| align(s, &d, parts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimplexCover {
        simplices,
        alignment,
    })
}

fn cover_rec(c: &Polytope, parts: &[Polytope]) -> Result<Vec<Simplex>> {
    let dim = c.dim().expect("recursion only sees nonempty polytopes");
    if dim == 0 {
        return Ok(vec![Simplex::new(c.vertices().to_vec())?]);
    }
    let d = convex_union(parts, c.ambient())?;
    let pieces: Vec<Polytope> = if d.is_empty() {
        vec![c.clone()]
    } else {
        let mut out = Vec::new();
        for h in d.halfspaces() {
            if c.vertices().iter().all(|v| h.eval(v).is_zero()) {
                continue;
            }
            let piece = c.intersect_halfspace(&h.flipped())?;
            if piece.dim() == Some(dim) && !out.contains(&piece) {
                out.push(piece);
            }
        }
        out
    };
    let mut simplices = Vec::new();
    for piece in &pieces {
        let apex = piece.barycenter().expect("nonempty piece");
        for f in piece.faces(dim - 1)? {
            let sub_parts: Vec<Polytope> = parts
                .iter()
                .map(|p| f.intersect(p))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|p| !p.is_empty())
                .collect();
            for s in cover_rec(&f, &sub_parts)? {
                simplices.push(cone_over(&apex, &s)?);
            }
        }
    }
    for p in parts {
        if p.dim() == Some(dim) {
            simplices.extend(triangulate(p)?);
        }
    }
    simplices.sort();
    simplices.dedup();
    Ok(simplices)
}

fn align(s: &Simplex, d: &Polytope, parts: &[Polytope]) -> Result<Alignment> {
    let sp = s.to_polytope();
    let face = sp.intersect(d)?;
    if face.is_empty() {
        return Ok(Alignment { face, part: None });
    }
    if !Polytope::is_face_of(&face, &sp)? {
        return Err(Error::Verification(
            "covered region meets a simplex outside a face".into(),
        ));
    }
    let part = parts
        .iter()
        .position(|p| p.contains_polytope(&face))
        .ok_or_else(|| Error::Verification("face of a simplex lies in no single part".into()))?;
    Ok(Alignment {
        face,
        part: Some(part),
    })
}

/// Whether the union of `pieces` contains `region`, decided by exact
/// subtraction. Remainders of lower dimension are dropped: the pieces are
/// closed, so they cover the region as soon as they cover a dense subset.
pub fn covers(region: &Polytope, pieces: &[Polytope]) -> Result<bool> {
    let Some(dim) = region.dim() else {
        return Ok(true);
    };
    Ok(!uncovered(region, dim, pieces)?)
}

fn uncovered(region: &Polytope, dim: usize, pieces: &[Polytope]) -> Result<bool> {
    let Some((p, rest)) = pieces.split_first() else {
        return Ok(true);
    };
    if p.contains_polytope(region) {
        return Ok(false);
    }
    if separated(region, p) || region.intersect(p)?.dim() != Some(dim) {
        return uncovered(region, dim, rest);
    }
    let mut remaining = region.clone();
    for h in p.halfspaces() {
        // the open side of a half-space vanishing on the region is empty
        if remaining.vertices().iter().all(|v| h.eval(v).is_zero()) {
            continue;
        }
        let outside = remaining.intersect_halfspace(&h.flipped())?;
        if outside.dim() == Some(dim) && uncovered(&outside, dim, rest)? {
            return Ok(true);
        }
        remaining = remaining.intersect_halfspace(&h)?;
        if remaining.dim() != Some(dim) {
            break;
        }
    }
    Ok(false)
}

/// Cheap sufficient test for disjoint interiors: some facet of one polytope
/// has the other entirely on its closed outer side.
fn separated(a: &Polytope, b: &Polytope) -> bool {
    let outside = |p: &Polytope, q: &Polytope| {
        p.facets()
            .iter()
            .any(|h| q.vertices().iter().all(|v| !h.eval(v).is_positive()))
    };
    outside(a, b) || outside(b, a)
}

/// Per-invariant outcome of re-checking a cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub simplices_inside: bool,
    pub full_dimensional: bool,
    pub union_exact: bool,
    pub faces_aligned: bool,
    pub parts_contain_faces: bool,
    pub size: usize,
}

impl CoverReport {
    pub fn ok(&self) -> bool {
        self.simplices_inside
            && self.full_dimensional
            && self.union_exact
            && self.faces_aligned
            && self.parts_contain_faces
    }
}

/// Re-derives every cover invariant from scratch.
pub fn verify_cover(c: &Polytope, parts: &[Polytope], cover: &SimplexCover) -> Result<CoverReport> {
    let n = c.ambient();
    let polys: Vec<Polytope> = cover.simplices.iter().map(Simplex::to_polytope).collect();
    let d = convex_union(parts, n)?;
    let mut faces_aligned = cover.alignment.len() == polys.len();
    let mut parts_contain_faces = faces_aligned;
    for (sp, al) in polys.iter().zip(&cover.alignment) {
        let face = sp.intersect(&d)?;
        faces_aligned &= face == al.face && Polytope::is_face_of(&face, sp)?;
        parts_contain_faces &= match al.part {
            None => face.is_empty(),
            Some(i) => parts.get(i).is_some_and(|p| p.contains_polytope(&face)),
        };
    }
    Ok(CoverReport {
        simplices_inside: polys.iter().all(|s| c.contains_polytope(s)),
        full_dimensional: cover.simplices.iter().all(|s| s.dim() == n),
        union_exact: covers(c, &polys)?,
        faces_aligned,
        parts_contain_faces,
        size: polys.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverInput {
    #[serde(rename = "C")]
    pub polytope: PolytopeJson,
    #[serde(rename = "D", default)]
    pub parts: Vec<PolytopeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentJson {
    pub face: PolytopeJson,
    pub part: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexCoverJson {
    pub simplices: Vec<PolytopeJson>,
    pub alignment: Vec<AlignmentJson>,
}

impl SimplexCover {
    pub fn to_json(&self) -> SimplexCoverJson {
        SimplexCoverJson {
            simplices: self
                .simplices
                .iter()
                .map(|s| PolytopeJson {
                    ambient: None,
                    vertices: s.vertices().to_vec(),
                })
                .collect(),
            alignment: self
                .alignment
                .iter()
                .map(|a| AlignmentJson {
                    face: a.face.to_json(),
                    part: a.part,
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SimplexCoverJson) -> Result<SimplexCover> {
        let simplices = j
            .simplices
            .iter()
            .map(|s| Simplex::new(s.vertices.clone()))
            .collect::<Result<Vec<_>>>()?;
        let alignment = j
            .alignment
            .iter()
            .map(|a| {
                Ok(Alignment {
                    face: Polytope::from_json(&a.face)?,
                    part: a.part,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplexCover {
            simplices,
            alignment,
        })
    }
}

/// The half-space `{x : x_i <= c}`.
pub fn upper_bound(n: usize, i: usize, c: Rat) -> HalfSpace {
    let mut normal = zeros(n);
    normal[i] = -Rat::one();
    HalfSpace { normal, offset: c }
}
