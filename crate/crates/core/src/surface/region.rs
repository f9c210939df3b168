//! The pseudo-effective part of a polytope of boundaries and its chambers,
//! each carrying one MMP that is a weak log canonical model throughout.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{MMPTrace, NumericalSurface};
use crate::cover::covers;
use crate::error::{Error, Result};
use crate::geometry::{Cone, HalfSpace, Polytope};
use crate::linalg::mat_vec;
use crate::rational::{add, dot, scale, serde_rat, sub, QVec, Rat};

/// `t -> base + sum_k t_k directions[k]`, from parameters to boundary divisors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(with = "serde_rat::vec")]
    pub base: QVec,
    #[serde(with = "serde_rat::mat")]
    pub directions: Vec<QVec>,
}

impl AffineMap {
    pub fn new(base: QVec, directions: Vec<QVec>) -> Result<AffineMap> {
        if let Some(d) = directions.iter().find(|d| d.len() != base.len()) {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: d.len(),
            });
        }
        Ok(AffineMap { base, directions })
    }

    /// The map sending the standard simplex's barycentric corner `t` to
    /// `last + sum t_k (points[k] - last)`.
    pub fn through_points(points: &[QVec]) -> Result<AffineMap> {
        let last = points.last().ok_or(Error::EmptyInput("points"))?.clone();
        let dirs = points[..points.len() - 1]
            .iter()
            .map(|p| sub(p, &last))
            .collect();
        AffineMap::new(last, dirs)
    }

    pub fn params(&self) -> usize {
        self.directions.len()
    }

    pub fn eval(&self, t: &[Rat]) -> QVec {
        self.directions
            .iter()
            .zip(t)
            .fold(self.base.clone(), |acc, (d, x)| add(&acc, &scale(d, x)))
    }
}

fn check_dims(s: &NumericalSurface, c: &Polytope, map: &AffineMap) -> Result<()> {
    if c.ambient() != map.params() {
        return Err(Error::DimensionMismatch {
            expected: map.params(),
            found: c.ambient(),
        });
    }
    if map.base.len() != s.rank() {
        return Err(Error::DimensionMismatch {
            expected: s.rank(),
            found: map.base.len(),
        });
    }
    Ok(())
}

/// `{t : sum_k normal_k t_k + offset}` for each coordinate of an affine
/// vector-valued function, found by evaluating at `0` and the unit vectors.
fn affine_parts(params: usize, f: &dyn Fn(&[Rat]) -> Result<QVec>) -> Result<Vec<(QVec, Rat)>> {
    let at0 = f(&vec![Rat::zero(); params])?;
    let mut normals = vec![vec![Rat::zero(); params]; at0.len()];
    for k in 0..params {
        let t = crate::rational::unit(params, k);
        let v = f(&t)?;
        for (i, x) in v.iter().enumerate() {
            normals[i][k] = x - &at0[i];
        }
    }
    Ok(normals.into_iter().zip(at0).collect())
}

fn halfspace_or_constant(normal: QVec, offset: Rat) -> Option<HalfSpace> {
    HalfSpace::new(normal, offset).ok()
}

/// `{t in c : K + Δ(t) pseudo-effective}`, exactly: the preimage of the
/// effective cone's inequalities.
pub fn pseff_region(s: &NumericalSurface, c: &Polytope, map: &AffineMap) -> Result<Polytope> {
    check_dims(s, c, map)?;
    let cone = Cone::from_generators(&s.effective_cone, s.rank());
    let d_of = |t: &[Rat]| -> QVec { add(&s.k, &map.eval(t)) };
    let f = |t: &[Rat]| -> Result<QVec> {
        let d = d_of(t);
        Ok(cone.facets().iter().map(|n| dot(n, &d)).collect())
    };
    let g = |t: &[Rat]| -> Result<QVec> {
        let d = d_of(t);
        Ok(cone.equalities().iter().map(|n| dot(n, &d)).collect())
    };
    let mut region = c.clone();
    for (normal, offset) in affine_parts(map.params(), &f)? {
        match halfspace_or_constant(normal, offset.clone()) {
            Some(h) => region = region.intersect_halfspace(&h)?,
            None if offset.is_negative() => return Ok(Polytope::empty(c.ambient())),
            None => {}
        }
    }
    for (normal, offset) in affine_parts(map.params(), &g)? {
        match halfspace_or_constant(normal, offset.clone()) {
            Some(h) => {
                region = region
                    .intersect_halfspace(&h)?
                    .intersect_halfspace(&h.flipped())?;
            }
            None if !offset.is_zero() => return Ok(Polytope::empty(c.ambient())),
            None => {}
        }
    }
    Ok(region)
}

/// A chamber of boundaries sharing one contraction sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WLCRegion {
    pub region: Polytope,
    /// Contracted curves, as original basis indices.
    pub sequence: Vec<usize>,
    /// The MMP run at the region's barycenter.
    pub model: MMPTrace,
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Polytope, D::Error> {
        let j = crate::geometry::PolytopeJson::deserialize(d)?;
        Polytope::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// Contracts original basis curves in order. Returns the final surface and
/// the composite pushforward.
pub fn apply_sequence(
    s: &NumericalSurface,
    sequence: &[usize],
) -> Result<(NumericalSurface, Vec<QVec>)> {
    let r = s.rank();
    let mut labels: Vec<usize> = (0..r).collect();
    let mut surface = s.clone();
    let mut push: Vec<QVec> = (0..r).map(|i| crate::rational::unit(r, i)).collect();
    for &c in sequence {
        let j = labels
            .iter()
            .position(|&l| l == c)
            .ok_or(Error::NotContractible(c))?;
        let (next, p) = surface.contract(j)?;
        push = crate::linalg::mat_mul(&p, &push);
        labels.remove(j);
        surface = next;
    }
    Ok((surface, push))
}

/// Whether contracting `sequence` is a weak log canonical model of `d`:
/// the pushforward is nef and `d - f^* f_* d` is effective.
pub fn is_weak_lc_model(s: &NumericalSurface, sequence: &[usize], d: &[Rat]) -> Result<bool> {
    let (y, push) = apply_sequence(s, sequence)?;
    if !y.is_nef(&mat_vec(&push, d))? {
        return Ok(false);
    }
    let e = s.discrepancy(d, sequence)?;
    Ok(e.iter().all(|x| !x.is_negative()))
}

/// Every quantity whose sign the MMP run or the model check depends on:
/// `(K+Δ)·C` for every curve at every step, the final nef tests and the
/// discrepancy coefficients.
fn wall_values(s: &NumericalSurface, sequence: &[usize], d: &[Rat]) -> Result<QVec> {
    let mut out = QVec::new();
    let mut labels: Vec<usize> = (0..s.rank()).collect();
    let mut surface = s.clone();
    let mut dk = d.to_vec();
    for &c in sequence {
        out.extend(surface.q.iter().map(|row| dot(row, &dk)));
        let j = labels
            .iter()
            .position(|&l| l == c)
            .ok_or(Error::NotContractible(c))?;
        let (next, p) = surface.contract(j)?;
        dk = mat_vec(&p, &dk);
        labels.remove(j);
        surface = next;
    }
    let qd = mat_vec(&surface.q, &dk);
    out.extend(surface.q.iter().map(|row| dot(row, &dk)));
    out.extend(surface.mori_curves.iter().map(|m| dot(&qd, m)));
    out.extend(s.discrepancy(d, sequence)?);
    Ok(out)
}

/// Both closed sides, when the hyperplane passes through the cell's relative
/// interior; a hyperplane containing a lower-dimensional cell does not cut it.
fn cuts(cell: &Polytope, h: &HalfSpace) -> Result<Option<(Polytope, Polytope)>> {
    let values: Vec<Rat> = cell.vertices().iter().map(|v| h.eval(v)).collect();
    if !values.iter().any(|v| v.is_positive()) || !values.iter().any(|v| v.is_negative()) {
        return Ok(None);
    }
    let dim = cell.dim();
    let a = cell.intersect_halfspace(h)?;
    let b = cell.intersect_halfspace(&h.flipped())?;
    Ok((a.dim() == dim && b.dim() == dim).then_some((a, b)))
}

/// Chambers of the pseudo-effective part of `c`.
///
/// Cells are split by the walls of the MMP run at their barycenter until no
/// wall cuts a cell; each cell is then checked at its vertices (the defining
/// conditions are affine, so this covers the cell), and cells with equal
/// contraction sequences are merged while their union stays convex.
pub fn wlc_decomposition(
    s: &NumericalSurface,
    c: &Polytope,
    map: &AffineMap,
) -> Result<Vec<WLCRegion>> {
    let e = pseff_region(s, c, map)?;
    if e.is_empty() {
        return Err(Error::Precondition(
            "no boundary in the polytope is pseudo-effective".into(),
        ));
    }
    let d_of = |t: &[Rat]| -> QVec { add(&s.k, &map.eval(t)) };
    let mut pending = vec![e];
    let mut done: Vec<(Polytope, MMPTrace)> = Vec::new();
    while let Some(cell) = pending.pop() {
        let t0 = cell.barycenter().expect("cells are nonempty");
        let trace = s.run_mmp(&map.eval(&t0))?;
        let seq = trace.sequence();
        let walls = affine_parts(map.params(), &|t| wall_values(s, &seq, &d_of(t)))?;
        let mut split = None;
        for (normal, offset) in walls {
            if let Some(h) = halfspace_or_constant(normal, offset) {
                if let Some(parts) = cuts(&cell, &h)? {
                    split = Some(parts);
                    break;
                }
            }
        }
        match split {
            Some((a, b)) => {
                pending.push(b);
                pending.push(a);
            }
            None => done.push((cell, trace)),
        }
    }
    for (cell, trace) in &done {
        for v in cell.vertices() {
            if !is_weak_lc_model(s, &trace.sequence(), &d_of(v))? {
                return Err(Error::Verification(format!(
                    "contraction sequence {:?} is not a weak lc model at vertex {}",
                    trace.sequence(),
                    super::fmt_vec(v)
                )));
            }
        }
    }
    let mut regions: Vec<WLCRegion> = Vec::new();
    for (cell, trace) in done {
        regions.push(WLCRegion {
            sequence: trace.sequence(),
            region: cell,
            model: trace,
        });
    }
    merge_regions(&mut regions)?;
    for r in regions.iter_mut() {
        let t0 = r.region.barycenter().expect("nonempty");
        r.model = s.run_mmp(&map.eval(&t0))?;
    }
    regions.sort_by(|a, b| {
        (&a.sequence, a.region.vertices()).cmp(&(&b.sequence, b.region.vertices()))
    });
    Ok(regions)
}

fn merge_regions(regions: &mut Vec<WLCRegion>) -> Result<()> {
    loop {
        let mut merged = None;
        'search: for i in 0..regions.len() {
            for j in i + 1..regions.len() {
                if regions[i].sequence != regions[j].sequence {
                    continue;
                }
                let mut pts = regions[i].region.vertices().to_vec();
                pts.extend_from_slice(regions[j].region.vertices());
                let hull = Polytope::convex_hull(&pts)?;
                if covers(
                    &hull,
                    &[regions[i].region.clone(), regions[j].region.clone()],
                )? {
                    merged = Some((i, j, hull));
                    break 'search;
                }
            }
        }
        match merged {
            Some((i, j, hull)) => {
                regions.remove(j);
                regions[i].region = hull;
            }
            None => return Ok(()),
        }
    }
}
