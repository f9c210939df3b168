//! End-to-end generators for the adjoint ring of a boundary tuple on a toric
//! surface.
//!
//! A tuple is handled by shape. If some boundary is a convex combination of
//! the others it is dropped and the ring is rebuilt from the smaller tuples by
//! reweighting and lifting. If the boundaries are the vertices of a polytope
//! with too many vertices to be a simplex, a common point is inserted and the
//! ring is read off a face of the enlarged tuple's ring. A simplex is covered
//! compatibly with its chambers; each sub-simplex ring comes from section
//! polygons on a model where every adjoint divisor is nef, and the results are
//! transferred back.

mod trace;

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use trace::{
    verify_trace, Membership, PipelineTrace, Record, RegionRecord, StepCheck, VerifyReport,
};

use crate::cover::{common_point, cover_respecting};
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::linalg::{affine_rank, mat_vec, solve, transpose};
use crate::lp::convex_combination;
use crate::monoid::{
    generation_check, lift_generators, saturated_reweight, semiample_generators, simplex_transfer,
    truncation_implies_fg_weighted, Element, GeneratorSet, Reweighted, SliceOracle,
    TransferMatrices, VertexRing,
};
use crate::rational::{add, lcm_denominators, scale, serde_rat, sub, unit, zeros, QVec, Rat};
use crate::surface::region::apply_sequence;
use crate::surface::{pseff_region, wlc_decomposition, AffineMap, NumericalSurface, ToricModel};

const PAYLOAD: usize = 2;

/// Boundaries over the torus-invariant curves of a toric surface. A numerical
/// surface, when given, must agree with the toric one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjointInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<NumericalSurface>,
    #[serde(with = "serde_rat::mat")]
    pub boundaries: Vec<QVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toric_model: Option<ToricModel>,
}

impl AdjointInstance {
    pub fn new(toric: ToricModel, boundaries: Vec<QVec>) -> AdjointInstance {
        AdjointInstance {
            surface: None,
            boundaries,
            toric_model: Some(toric),
        }
    }

    /// The toric model and its numerical surface.
    pub fn validate(&self) -> Result<(ToricModel, NumericalSurface)> {
        let toric = self.toric_model.clone().ok_or(Error::MissingToricModel)?;
        toric.validate()?;
        let surface = toric.surface();
        if let Some(s) = &self.surface {
            s.validate()?;
            if s.q != surface.q || s.k != surface.k {
                return Err(Error::Precondition(
                    "surface disagrees with the toric model's intersection form or canonical class"
                        .into(),
                ));
            }
        }
        if self.boundaries.is_empty() {
            return Err(Error::EmptyInput("boundaries"));
        }
        for (i, b) in self.boundaries.iter().enumerate() {
            if b.len() != toric.len() {
                return Err(Error::DimensionMismatch {
                    expected: toric.len(),
                    found: b.len(),
                });
            }
            if !ToricModel::is_boundary(b) {
                return Err(Error::BoundaryViolation(format!("boundary {i}")));
            }
        }
        Ok((toric, surface))
    }
}

/// The standard simplex with one vertex per boundary (the last at the
/// origin) and the affine map sending its vertices to the boundaries.
pub(crate) fn simplex_frame(pts: &[QVec]) -> Result<(Polytope, AffineMap)> {
    let n = pts.len() - 1;
    let mut verts: Vec<QVec> = (0..n).map(|i| unit(n, i)).collect();
    verts.push(zeros(n));
    Ok((
        Polytope::convex_hull(&verts)?,
        AffineMap::through_points(pts)?,
    ))
}

fn barycentric(t: &[Rat]) -> QVec {
    let mut b = t.to_vec();
    b.push(Rat::one() - t.iter().sum::<Rat>());
    b
}

/// Toric contraction along a sequence of original ray indices.
pub(crate) fn contract_toric(toric: &ToricModel, sequence: &[usize]) -> Result<ToricModel> {
    let mut labels: Vec<usize> = (0..toric.len()).collect();
    let mut y = toric.clone();
    for &c in sequence {
        let j = labels
            .iter()
            .position(|&l| l == c)
            .ok_or(Error::NotContractible(c))?;
        y = y.contract(j)?;
        labels.remove(j);
    }
    Ok(y)
}

/// How a tuple is reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    /// Member `dropped` is the convex combination `lambda` of the others.
    Dependent {
        dropped: usize,
        lambda: QVec,
    },
    /// Vertices of a polytope that is not a simplex.
    Split,
    Simplex,
}

/// The last member lying in the hull of the others wins.
pub fn classify(pts: &[QVec]) -> Shape {
    for t in (0..pts.len()).rev() {
        if pts.len() < 2 {
            break;
        }
        let others: Vec<QVec> = (0..pts.len())
            .filter(|&i| i != t)
            .map(|i| pts[i].clone())
            .collect();
        if let Some(lambda) = convex_combination(&others, &pts[t]) {
            return Shape::Dependent { dropped: t, lambda };
        }
    }
    match affine_rank(pts) {
        Some(r) if pts.len() > r + 1 => Shape::Split,
        _ => Shape::Simplex,
    }
}

fn without(v: &[usize], i: usize) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, &x)| x)
        .collect()
}

fn to_i64(x: &Rat) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::Verification(format!("expected an integer, got {x}")));
    }
    x.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Verification("integer exceeds i64".into()))
}

/// A point of the hull of `pts` lying in the hull of every `|pts| - 1` of
/// them, computed in affine coordinates on their span.
fn common_point_of(pts: &[QVec]) -> Result<(QVec, Vec<Membership>)> {
    let hull = Polytope::convex_hull(pts)?;
    let (base, dirs) = hull
        .affine_frame()
        .ok_or_else(|| Error::Degenerate("empty boundary hull".into()))?;
    let cols = transpose(&dirs);
    let coords = pts
        .iter()
        .map(|p| {
            solve(&cols, &sub(p, &base), dirs.len())
                .ok_or_else(|| Error::Degenerate("point off its span".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let cert = common_point(&coords)?;
    let point = dirs
        .iter()
        .zip(&cert.point)
        .fold(base, |acc, (d, c)| add(&acc, &scale(d, c)));
    let memberships = (0..pts.len())
        .map(|i| {
            let others: Vec<QVec> = (0..pts.len())
                .filter(|&k| k != i)
                .map(|k| pts[k].clone())
                .collect();
            convex_combination(&others, &point)
                .map(|coefficients| Membership {
                    deleted: i,
                    coefficients,
                })
                .ok_or_else(|| {
                    Error::Verification(format!("common point misses the hull without member {i}"))
                })
        })
        .collect::<Result<_>>()?;
    Ok((point, memberships))
}

/// The reduction of a tuple without computing any rings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionNode {
    Simplex {
        tuple: Vec<usize>,
    },
    Dependent {
        tuple: Vec<usize>,
        dropped: usize,
        support: Vec<usize>,
        coefficients: Vec<i64>,
        q: i64,
        children: Vec<ReductionNode>,
    },
    Split {
        tuple: Vec<usize>,
        id: usize,
        #[serde(with = "serde_rat::vec")]
        point: QVec,
        child: Box<ReductionNode>,
    },
}

/// The reduction tree together with the boundary table it refers to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    #[serde(with = "serde_rat::mat")]
    pub points: Vec<QVec>,
    pub root: ReductionNode,
}

impl Reduction {
    /// Tuples at the leaves.
    pub fn simplices(&self) -> Vec<Vec<usize>> {
        fn walk(n: &ReductionNode, out: &mut Vec<Vec<usize>>) {
            match n {
                ReductionNode::Simplex { tuple } => out.push(tuple.clone()),
                ReductionNode::Dependent { children, .. } => {
                    children.iter().for_each(|c| walk(c, out))
                }
                ReductionNode::Split { child, .. } => walk(child, out),
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

/// Integer form of a dependency: support positions among the other members,
/// their numerators, and the common denominator.
fn dependency(lambda: &[Rat]) -> Result<(Vec<usize>, Vec<i64>, i64)> {
    let q = Rat::from_integer(lcm_denominators(lambda));
    let mut support = Vec::new();
    let mut coefficients = Vec::new();
    for (j, l) in lambda.iter().enumerate() {
        if !l.is_zero() {
            support.push(j);
            coefficients.push(to_i64(&(l * &q))?);
        }
    }
    Ok((support, coefficients, to_i64(&q)?))
}

/// Drops duplicates and non-vertices and splits non-simplices, recursively.
pub fn reduce_tuple(instance: &AdjointInstance) -> Result<Reduction> {
    instance.validate()?;
    fn go(points: &mut Vec<QVec>, tuple: Vec<usize>) -> Result<ReductionNode> {
        let pts: Vec<QVec> = tuple.iter().map(|&i| points[i].clone()).collect();
        match classify(&pts) {
            Shape::Simplex => Ok(ReductionNode::Simplex { tuple }),
            Shape::Dependent { dropped, lambda } => {
                let (support, coefficients, q) = dependency(&lambda)?;
                let others = without(&tuple, dropped);
                let support: Vec<usize> = support
                    .iter()
                    .map(|&j| tuple.iter().position(|&x| x == others[j]).expect("member"))
                    .collect();
                let children = support
                    .iter()
                    .map(|&j| go(points, without(&tuple, j)))
                    .collect::<Result<_>>()?;
                Ok(ReductionNode::Dependent {
                    tuple,
                    dropped,
                    support,
                    coefficients,
                    q,
                    children,
                })
            }
            Shape::Split => {
                let (point, _) = common_point_of(&pts)?;
                let id = points.len();
                points.push(point.clone());
                let mut plus = tuple.clone();
                plus.push(id);
                Ok(ReductionNode::Split {
                    tuple,
                    id,
                    point,
                    child: Box::new(go(points, plus)?),
                })
            }
        }
    }
    let mut points = instance.boundaries.clone();
    let root = go(&mut points, (0..instance.boundaries.len()).collect())?;
    Ok(Reduction { points, root })
}

struct Engine {
    toric: ToricModel,
    surface: NumericalSurface,
    points: Vec<QVec>,
    bound: i64,
    memo: BTreeMap<Vec<usize>, Vec<Element>>,
    records: Vec<Record>,
}

fn stage(what: &str, tuple: &[usize], e: Error) -> Error {
    match e {
        Error::Verification(m) => Error::Verification(format!("{what} for tuple {tuple:?}: {m}")),
        other => other,
    }
}

fn require(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(what()))
    }
}

impl Engine {
    fn boundaries(&self, tuple: &[usize]) -> Vec<QVec> {
        tuple.iter().map(|&i| self.points[i].clone()).collect()
    }

    fn oracle(&self, boundaries: &[QVec]) -> Result<crate::monoid::ConeMonoid> {
        self.toric.adjoint_monoid(boundaries)
    }

    fn adjoint(&self, b: &[Rat]) -> QVec {
        add(&self.toric.canonical(), b)
    }

    fn check(&self, oracle: &dyn SliceOracle, gens: &[Element], what: &str) -> Result<()> {
        let c = generation_check(oracle, gens, self.bound);
        require(c.ok, || {
            format!(
                "{what}: {} foreign, {} missing up to degree {}",
                c.foreign.len(),
                c.missing.len(),
                self.bound
            )
        })
    }

    fn process(&mut self, tuple: &[usize]) -> Result<Vec<Element>> {
        if let Some(g) = self.memo.get(tuple) {
            return Ok(g.clone());
        }
        let pts = self.boundaries(tuple);
        let gens = match classify(&pts) {
            Shape::Dependent { dropped, lambda } => self.dependent(tuple, dropped, &lambda),
            Shape::Split => self.split(tuple),
            Shape::Simplex if tuple.len() == 1 => self.single(tuple),
            Shape::Simplex => self.simplex(tuple),
        }?;
        self.memo.insert(tuple.to_vec(), gens.clone());
        Ok(gens)
    }

    /// `Δ_t = sum (a_j / q) Δ_j`. With weights `q` on `t`, `a_j` on the
    /// support and one elsewhere, the reweighted ring of the tuple is the
    /// augmentation of the reweighted ring without `t`, and the faces of the
    /// augmentation are reweighted rings of the tuples without some `j`.
    fn dependent(&mut self, tuple: &[usize], t: usize, lambda: &[Rat]) -> Result<Vec<Element>> {
        let m = tuple.len();
        let rest = without(tuple, t);
        let (support_s, coefficients, q) = dependency(lambda)?;
        let support: Vec<usize> = support_s
            .iter()
            .map(|&j| if j < t { j } else { j + 1 })
            .collect();
        let mut weights = vec![1i64; m];
        weights[t] = q;
        for (&j, &a) in support.iter().zip(&coefficients) {
            weights[j] = a;
        }
        self.records.push(Record::Dependency {
            tuple: tuple.to_vec(),
            dropped: t,
            support: support.clone(),
            coefficients: coefficients.clone(),
            q,
            weights: weights.clone(),
        });

        // Layout of the augmentation: members of `rest` in order, then `t`.
        let mut faces = Vec::with_capacity(support.len());
        for &j in &support {
            let child = without(tuple, j);
            let gens = self.process(&child)?;
            let child_w: Vec<i64> = without(&(0..m).collect::<Vec<_>>(), j)
                .iter()
                .map(|&i| weights[i])
                .collect();
            let scaled = saturated_reweight(m - 1, PAYLOAD, &gens, &child_w)?;
            // Child position of each layout slot.
            let layout: Vec<usize> = rest
                .iter()
                .filter(|&&id| id != tuple[j])
                .chain(std::iter::once(&tuple[t]))
                .map(|id| child.iter().position(|x| x == id).expect("member"))
                .collect();
            faces.push(
                scaled
                    .into_iter()
                    .map(|g| Element::new(layout.iter().map(|&c| g.deg[c]).collect(), g.payload))
                    .collect::<Vec<_>>(),
            );
        }
        let rest_oracle = self.oracle(&self.boundaries(&rest))?;
        let rest_w: Vec<i64> = without(&(0..m).collect::<Vec<_>>(), t)
            .iter()
            .map(|&i| weights[i])
            .collect();
        let reweighted = Reweighted::new(&rest_oracle, &rest_w)?;
        let lifted = lift_generators(&faces, &support_s, &reweighted, self.bound)
            .map_err(|e| stage("lift", tuple, e))?;

        let mut ambient = GeneratorSet::default();
        for g in &lifted.generators {
            let mut deg = g.element.deg[..m - 1].to_vec();
            deg.insert(t, g.element.deg[m - 1]);
            let deg = deg.iter().zip(&weights).map(|(x, w)| x * w).collect();
            ambient.push(Element::new(deg, g.element.payload.clone()), g.tag.clone());
        }
        let oracle = self.oracle(&self.boundaries(tuple))?;
        let report = truncation_implies_fg_weighted(&oracle, &weights, &ambient, self.bound)?;
        require(report.ok, || {
            format!("weighted truncation for tuple {tuple:?} does not generate")
        })?;
        let gens = report.minimal;
        self.check(&oracle, &gens, "lifted generators")?;
        self.records.push(Record::Lift {
            tuple: tuple.to_vec(),
            generators: gens.clone(),
        });
        Ok(gens)
    }

    /// Adds a common point, which the enlarged tuple then drops again; the
    /// ring of the tuple is the face where the new degree vanishes.
    fn split(&mut self, tuple: &[usize]) -> Result<Vec<Element>> {
        let (point, memberships) = common_point_of(&self.boundaries(tuple))?;
        let id = self.points.len();
        self.points.push(point.clone());
        self.records.push(Record::CommonPoint {
            tuple: tuple.to_vec(),
            id,
            point,
            memberships,
        });
        let mut plus = tuple.to_vec();
        plus.push(id);
        let m = tuple.len();
        let gens: Vec<Element> = self
            .process(&plus)?
            .into_iter()
            .filter(|g| g.deg[m] == 0)
            .map(|g| Element::new(g.deg[..m].to_vec(), g.payload))
            .collect();
        let oracle = self.oracle(&self.boundaries(tuple))?;
        self.check(&oracle, &gens, "face generators")?;
        self.records.push(Record::Face {
            tuple: tuple.to_vec(),
            parent: plus,
            generators: gens.clone(),
        });
        Ok(gens)
    }
}

impl Engine {
    /// Generators of the ring of a sub-simplex with boundaries `psi`:
    /// contract along `sequence`, take the section polygons of the pushed
    /// forward adjoint divisors, clear denominators, and read generators off
    /// the Cayley cone. Vertices outside the pseudo-effective region carry
    /// no sections in any degree where they appear.
    fn vertex_ring(
        &mut self,
        tuple: &[usize],
        simplex: usize,
        psi: &[QVec],
        sequence: &[usize],
    ) -> Result<Vec<Element>> {
        let pseff: Vec<bool> = psi
            .iter()
            .map(|b| self.surface.is_pseff(&self.adjoint(b)))
            .collect::<Result<_>>()?;
        let oracle = self.oracle(psi)?;
        let mut scales = vec![1i64; psi.len()];
        let mut gens = Vec::new();
        if pseff.iter().any(|&p| p) {
            let (y, push) = apply_sequence(&self.surface, sequence)?;
            let ytoric = contract_toric(&self.toric, sequence)?;
            let positions: Vec<usize> = (0..psi.len()).filter(|&i| pseff[i]).collect();
            let mut polygons = Vec::new();
            for b in positions.iter().map(|&i| &psi[i]) {
                let pushed = mat_vec(&push, &self.adjoint(b));
                require(y.is_nef(&pushed)?, || {
                    format!("pushforward is not nef on simplex {simplex} of {tuple:?}")
                })?;
                polygons.push(ytoric.polygon(&pushed)?);
            }
            // Each polygon is scaled by its own denominator; coordinates
            // that never carry sections keep weight one.
            let mut weights = vec![1i64; psi.len()];
            let mut scaled = Vec::with_capacity(polygons.len());
            for (&i, p) in positions.iter().zip(&polygons) {
                let d = Rat::from_integer(lcm_denominators(p.vertices().iter().flatten()));
                weights[i] = to_i64(&d)?;
                scaled.push(Polytope::convex_hull(
                    &p.vertices()
                        .iter()
                        .map(|v| scale(v, &d))
                        .collect::<Vec<_>>(),
                )?);
            }
            let cayley = semiample_generators(&scaled)?;
            let mut images = GeneratorSet::default();
            for g in &cayley.generators {
                let mut deg = vec![0i64; psi.len()];
                for (&i, &x) in positions.iter().zip(&g.element.deg) {
                    deg[i] = x * weights[i];
                }
                images.push(Element::new(deg, g.element.payload.clone()), g.tag.clone());
            }
            let report = truncation_implies_fg_weighted(&oracle, &weights, &images, self.bound)?;
            require(report.ok, || {
                format!("section generators fail on simplex {simplex} of {tuple:?}")
            })?;
            scales = weights;
            gens = report.minimal;
        }
        self.check(
            &oracle,
            &gens,
            &format!("ring of simplex {simplex} of {tuple:?}"),
        )?;
        self.records.push(Record::Model {
            tuple: tuple.to_vec(),
            simplex,
            boundaries: psi.to_vec(),
            pseff,
            sequence: sequence.to_vec(),
            scales,
        });
        self.records.push(Record::Generation {
            tuple: tuple.to_vec(),
            simplex,
            boundaries: psi.to_vec(),
            generators: gens.clone(),
        });
        Ok(gens)
    }

    fn single(&mut self, tuple: &[usize]) -> Result<Vec<Element>> {
        let psi = self.boundaries(tuple);
        let sequence = if self.surface.is_pseff(&self.adjoint(&psi[0]))? {
            self.surface.run_mmp(&psi[0])?.sequence()
        } else {
            Vec::new()
        };
        self.vertex_ring(tuple, 0, &psi, &sequence)
    }

    fn simplex(&mut self, tuple: &[usize]) -> Result<Vec<Element>> {
        let pts = self.boundaries(tuple);
        let (c, map) = simplex_frame(&pts)?;
        let e = pseff_region(&self.surface, &c, &map)?;
        let regions = if e.is_empty() {
            Vec::new()
        } else {
            wlc_decomposition(&self.surface, &c, &map)?
        };
        let parts: Vec<Polytope> = regions.iter().map(|r| r.region.clone()).collect();
        let cover = cover_respecting(&c, &parts)?;
        self.records.push(Record::Covering {
            tuple: tuple.to_vec(),
            regions: regions
                .iter()
                .map(|r| RegionRecord {
                    region: r.region.to_json(),
                    sequence: r.sequence.clone(),
                })
                .collect(),
            cover: cover.to_json(),
        });

        let mut barys = Vec::with_capacity(cover.simplices.len());
        let mut rings = Vec::with_capacity(cover.simplices.len());
        for (l, (s, a)) in cover.simplices.iter().zip(&cover.alignment).enumerate() {
            let psi: Vec<QVec> = s.vertices().iter().map(|v| map.eval(v)).collect();
            let sequence = match a.part {
                Some(p) => regions[p].sequence.clone(),
                None => Vec::new(),
            };
            let gens = self.vertex_ring(tuple, l, &psi, &sequence)?;
            barys.push(
                s.vertices()
                    .iter()
                    .map(|v| barycentric(v))
                    .collect::<Vec<_>>(),
            );
            rings.push((psi, gens));
        }

        let matrices = TransferMatrices::for_cover(&barys)?;
        // (1/pq) a b = I for every pair, whatever the construction did.
        let identity_violations = matrices
            .iter()
            .filter(|t| {
                let n = t.n();
                t.normalized_product() != (0..n).map(|i| unit(n, i)).collect::<Vec<_>>()
            })
            .count();
        require(identity_violations == 0, || {
            format!(
                "{identity_violations} transfer matrix pairs violate the identity for {tuple:?}"
            )
        })?;
        let oracles = rings
            .iter()
            .map(|(psi, _)| self.oracle(psi))
            .collect::<Result<Vec<_>>>()?;
        let vertex_rings: Vec<VertexRing<'_>> = oracles
            .iter()
            .zip(&rings)
            .map(|(o, (_, g))| VertexRing {
                oracle: o,
                generators: GeneratorSet::from_elements(g.iter().cloned(), "simplex"),
            })
            .collect();
        let oracle = self.oracle(&pts)?;
        let report = simplex_transfer(&vertex_rings, &matrices, &oracle, self.bound)
            .map_err(|e| stage("transfer", tuple, e))?;
        require(report.ok, || {
            format!("transferred generators do not generate the ring of {tuple:?}")
        })?;
        let gens = report.truncation.minimal;
        self.check(&oracle, &gens, "transferred generators")?;
        self.records.push(Record::Transfer {
            tuple: tuple.to_vec(),
            matrices,
            identity_violations,
            generators: gens.clone(),
        });
        Ok(gens)
    }
}

/// Runs the whole reduction and returns the trace. Errors abort with the
/// failing step named; a final generating set that fails the exhaustive
/// comparison is reported in the final record instead.
pub fn run_pipeline(instance: &AdjointInstance, bound: i64) -> Result<PipelineTrace> {
    if bound < 1 {
        return Err(Error::Precondition(format!(
            "verification bound must be positive, got {bound}"
        )));
    }
    let (toric, surface) = instance.validate()?;
    let mut engine = Engine {
        toric,
        surface,
        points: instance.boundaries.clone(),
        bound,
        memo: BTreeMap::new(),
        records: vec![Record::Instance {
            instance: instance.clone(),
            bound,
        }],
    };
    let root: Vec<usize> = (0..instance.boundaries.len()).collect();
    let gens = engine.process(&root)?;
    let oracle = engine.oracle(&instance.boundaries)?;
    let check = generation_check(&oracle, &gens, bound);
    engine.records.push(Record::Final {
        generators: GeneratorSet::from_elements(gens, "adjoint"),
        bound,
        missing: check.missing.len(),
        foreign: check.foreign.len(),
        ok: check.ok,
    });
    Ok(PipelineTrace {
        records: engine.records,
    })
}
