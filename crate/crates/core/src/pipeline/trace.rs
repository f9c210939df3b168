//! Trace records, one JSON object per line, and their replay.

use serde::{Deserialize, Serialize};

use super::AdjointInstance;
use crate::cover::{verify_cover, SimplexCover, SimplexCoverJson};
use crate::error::{Error, Result};
use crate::geometry::PolytopeJson;
use crate::linalg::mat_vec;
use crate::monoid::{generation_check, Element, GeneratorSet, TransferMatrices};
use crate::rational::{add, serde_rat, QVec, Rat};
use crate::surface::region::{apply_sequence, is_weak_lc_model};
use crate::surface::{NumericalSurface, ToricModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    /// Tuple member left out.
    pub deleted: usize,
    #[serde(with = "serde_rat::vec")]
    pub coefficients: QVec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub region: PolytopeJson,
    pub sequence: Vec<usize>,
}

/// Tuples list boundary ids: instance boundaries first, inserted points after.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Instance {
        instance: AdjointInstance,
        bound: i64,
    },
    /// `dropped` is a convex combination `sum (a_j / q) Δ_j` of `support`.
    Dependency {
        tuple: Vec<usize>,
        dropped: usize,
        support: Vec<usize>,
        coefficients: Vec<i64>,
        q: i64,
        weights: Vec<i64>,
    },
    CommonPoint {
        tuple: Vec<usize>,
        id: usize,
        #[serde(with = "serde_rat::vec")]
        point: QVec,
        memberships: Vec<Membership>,
    },
    Covering {
        tuple: Vec<usize>,
        regions: Vec<RegionRecord>,
        cover: SimplexCoverJson,
    },
    Model {
        tuple: Vec<usize>,
        simplex: usize,
        #[serde(with = "serde_rat::mat")]
        boundaries: Vec<QVec>,
        pseff: Vec<bool>,
        sequence: Vec<usize>,
        /// Denominator cleared from each vertex's section polygon.
        scales: Vec<i64>,
    },
    Generation {
        tuple: Vec<usize>,
        simplex: usize,
        #[serde(with = "serde_rat::mat")]
        boundaries: Vec<QVec>,
        generators: Vec<Element>,
    },
    Transfer {
        tuple: Vec<usize>,
        matrices: Vec<TransferMatrices>,
        identity_violations: usize,
        generators: Vec<Element>,
    },
    Lift {
        tuple: Vec<usize>,
        generators: Vec<Element>,
    },
    Face {
        tuple: Vec<usize>,
        parent: Vec<usize>,
        generators: Vec<Element>,
    },
    Final {
        generators: GeneratorSet,
        bound: i64,
        missing: usize,
        foreign: usize,
        ok: bool,
    },
}

impl Record {
    pub fn kind(&self) -> &'static str {
        match self {
            Record::Instance { .. } => "instance",
            Record::Dependency { .. } => "dependency",
            Record::CommonPoint { .. } => "common_point",
            Record::Covering { .. } => "covering",
            Record::Model { .. } => "model",
            Record::Generation { .. } => "generation",
            Record::Transfer { .. } => "transfer",
            Record::Lift { .. } => "lift",
            Record::Face { .. } => "face",
            Record::Final { .. } => "final",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub records: Vec<Record>,
}

impl PipelineTrace {
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_json_lines(text: &str) -> Result<PipelineTrace> {
        let records = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l)
                    .map_err(|e| Error::Parse(format!("trace line {}: {e}", i + 1)))
            })
            .collect::<Result<_>>()?;
        Ok(PipelineTrace { records })
    }

    pub fn final_record(&self) -> Option<&Record> {
        self.records
            .iter()
            .rev()
            .find(|r| matches!(r, Record::Final { .. }))
    }

    /// Generators of the whole tuple, if the run finished.
    pub fn generators(&self) -> Option<&GeneratorSet> {
        match self.final_record() {
            Some(Record::Final { generators, .. }) => Some(generators),
            _ => None,
        }
    }

    pub fn ok(&self) -> bool {
        matches!(self.final_record(), Some(Record::Final { ok: true, .. }))
    }

    /// Transfer identity violations over all transfer steps.
    pub fn identity_violations(&self) -> usize {
        self.records
            .iter()
            .map(|r| match r {
                Record::Transfer {
                    identity_violations,
                    ..
                } => *identity_violations,
                _ => 0,
            })
            .sum()
    }

    pub fn count(&self, kind: &str) -> usize {
        self.records.iter().filter(|r| r.kind() == kind).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCheck {
    pub index: usize,
    pub kind: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub steps: Vec<StepCheck>,
    pub ok: bool,
}

struct Context {
    toric: ToricModel,
    surface: NumericalSurface,
    points: Vec<QVec>,
    root: usize,
    bound: i64,
}

impl Context {
    fn boundaries(&self, tuple: &[usize]) -> Result<Vec<QVec>> {
        tuple
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::Verification(format!("unknown boundary id {i}")))
            })
            .collect()
    }

    fn generated(&self, boundaries: &[QVec], gens: &[Element]) -> Result<String> {
        let oracle = self.toric.adjoint_monoid(boundaries)?;
        let check = generation_check(&oracle, gens, self.bound);
        if check.ok {
            Ok(format!(
                "{} generators verified up to degree {}",
                gens.len(),
                self.bound
            ))
        } else {
            Err(Error::Verification(format!(
                "{} foreign, {} missing up to degree {}",
                check.foreign.len(),
                check.missing.len(),
                self.bound
            )))
        }
    }

    fn adjoint(&self, b: &[Rat]) -> QVec {
        add(&self.toric.canonical(), b)
    }
}

fn combination_ok(points: &[QVec], coefficients: &[Rat], target: &[Rat]) -> bool {
    if points.len() != coefficients.len()
        || coefficients
            .iter()
            .any(|c| *c < Rat::from_integer(0.into()))
    {
        return false;
    }
    if coefficients.iter().sum::<Rat>() != Rat::from_integer(1.into()) {
        return false;
    }
    let mut sum = vec![Rat::from_integer(0.into()); target.len()];
    for (p, c) in points.iter().zip(coefficients) {
        for (s, x) in sum.iter_mut().zip(p) {
            *s += x * c;
        }
    }
    sum == target
}

fn replay(ctx: &mut Option<Context>, record: &Record) -> Result<String> {
    if let Record::Instance { instance, bound } = record {
        let (toric, surface) = instance.validate()?;
        *ctx = Some(Context {
            toric,
            surface,
            points: instance.boundaries.clone(),
            root: instance.boundaries.len(),
            bound: *bound,
        });
        return Ok("instance validated".into());
    }
    let ctx = ctx
        .as_mut()
        .ok_or_else(|| Error::Verification("no instance record precedes this step".into()))?;
    match record {
        Record::Instance { .. } => unreachable!(),
        Record::Dependency {
            tuple,
            dropped,
            support,
            coefficients,
            q,
            weights,
        } => {
            let pts = ctx.boundaries(tuple)?;
            let others: Vec<usize> = (0..tuple.len()).filter(|i| i != dropped).collect();
            let mut lambda = vec![Rat::from_integer(0.into()); others.len()];
            for (&j, &a) in support.iter().zip(coefficients) {
                let pos = others.iter().position(|&o| o == j).ok_or_else(|| {
                    Error::Verification(format!("support index {j} not in the tuple"))
                })?;
                lambda[pos] = Rat::new(a.into(), (*q).into());
            }
            let sub: Vec<QVec> = others.iter().map(|&i| pts[i].clone()).collect();
            if !combination_ok(&sub, &lambda, &pts[*dropped]) {
                return Err(Error::Verification(
                    "dependency does not reproduce the dropped boundary".into(),
                ));
            }
            let expected: Vec<i64> = (0..tuple.len())
                .map(|i| {
                    if i == *dropped {
                        *q
                    } else {
                        support
                            .iter()
                            .position(|&j| j == i)
                            .map_or(1, |k| coefficients[k])
                    }
                })
                .collect();
            if &expected != weights {
                return Err(Error::Verification(
                    "weights disagree with the dependency".into(),
                ));
            }
            Ok(format!(
                "boundary {} = combination of {} others",
                tuple[*dropped],
                support.len()
            ))
        }
        Record::CommonPoint {
            tuple,
            id,
            point,
            memberships,
        } => {
            if *id != ctx.points.len() {
                return Err(Error::Verification(format!(
                    "inserted id {id} is out of sequence"
                )));
            }
            let pts = ctx.boundaries(tuple)?;
            if memberships.len() != tuple.len() {
                return Err(Error::Verification(
                    "one membership per deleted boundary expected".into(),
                ));
            }
            for m in memberships {
                let sub: Vec<QVec> = (0..pts.len())
                    .filter(|&i| i != m.deleted)
                    .map(|i| pts[i].clone())
                    .collect();
                if !combination_ok(&sub, &m.coefficients, point) {
                    return Err(Error::Verification(format!(
                        "point is not in the hull without member {}",
                        m.deleted
                    )));
                }
            }
            ctx.points.push(point.clone());
            Ok(format!(
                "point lies in all {} facet-deleted hulls",
                memberships.len()
            ))
        }
        Record::Covering {
            tuple,
            regions,
            cover,
        } => {
            let pts = ctx.boundaries(tuple)?;
            let (c, map) = super::simplex_frame(&pts)?;
            let cover = SimplexCover::from_json(cover)?;
            let parts = regions
                .iter()
                .map(|r| crate::geometry::Polytope::from_json(&r.region))
                .collect::<Result<Vec<_>>>()?;
            let report = verify_cover(&c, &parts, &cover)?;
            if !report.ok() {
                return Err(Error::Verification(
                    "covering fails union, face or part alignment".into(),
                ));
            }
            let e = crate::surface::pseff_region(&ctx.surface, &c, &map)?;
            if !crate::cover::covers(&e, &parts)? || parts.iter().any(|p| !e.contains_polytope(p)) {
                return Err(Error::Verification(
                    "regions do not tile the pseudo-effective region".into(),
                ));
            }
            for (r, part) in regions.iter().zip(&parts) {
                for v in part.vertices() {
                    let d = ctx.adjoint(&map.eval(v));
                    if !is_weak_lc_model(&ctx.surface, &r.sequence, &d)? {
                        return Err(Error::Verification("region model fails at a vertex".into()));
                    }
                }
            }
            Ok(format!(
                "{} simplices over {} regions",
                cover.simplices.len(),
                regions.len()
            ))
        }
        Record::Model {
            boundaries,
            pseff,
            sequence,
            scales,
            ..
        } => {
            if boundaries.len() != pseff.len()
                || scales.len() != pseff.len()
                || scales.iter().any(|&s| s < 1)
            {
                return Err(Error::Verification("malformed model record".into()));
            }
            let (y, push) = apply_sequence(&ctx.surface, sequence)?;
            let ytoric = super::contract_toric(&ctx.toric, sequence)?;
            for ((b, &flag), &scale) in boundaries.iter().zip(pseff).zip(scales) {
                let d = ctx.adjoint(b);
                if ctx.surface.is_pseff(&d)? != flag {
                    return Err(Error::Verification(
                        "pseudo-effectivity flag is wrong".into(),
                    ));
                }
                if !flag {
                    continue;
                }
                if !is_weak_lc_model(&ctx.surface, sequence, &d)? {
                    return Err(Error::Verification(
                        "model is not weak log canonical".into(),
                    ));
                }
                let pushed: QVec = mat_vec(&push, &d);
                if !y.is_nef(&pushed)? {
                    return Err(Error::Verification("pushforward is not nef".into()));
                }
                let s = Rat::from_integer(scale.into());
                let scaled: QVec = pushed.iter().map(|x| x * &s).collect();
                if !ytoric.polygon(&scaled)?.is_lattice() {
                    return Err(Error::Verification(
                        "scaled polygon is not a lattice polygon".into(),
                    ));
                }
            }
            Ok(format!(
                "{} contractions, scales {scales:?}",
                sequence.len()
            ))
        }
        Record::Generation {
            boundaries,
            generators,
            ..
        } => ctx.generated(boundaries, generators),
        Record::Transfer {
            tuple,
            matrices,
            identity_violations,
            generators,
        } => {
            let broken = matrices.iter().filter(|t| t.check().is_err()).count();
            if broken != *identity_violations || broken > 0 {
                return Err(Error::TransferIdentity(format!(
                    "{broken} matrix pairs violate the identity"
                )));
            }
            let detail = ctx.generated(&ctx.boundaries(tuple)?, generators)?;
            Ok(format!("{} matrix pairs; {detail}", matrices.len()))
        }
        Record::Lift { tuple, generators }
        | Record::Face {
            tuple, generators, ..
        } => ctx.generated(&ctx.boundaries(tuple)?, generators),
        Record::Final {
            generators,
            bound,
            ok,
            ..
        } => {
            if *bound != ctx.bound {
                return Err(Error::Verification(
                    "final bound disagrees with the instance record".into(),
                ));
            }
            let root: Vec<usize> = (0..ctx.root).collect();
            let detail = ctx.generated(&ctx.boundaries(&root)?, &generators.elements())?;
            if !ok {
                return Err(Error::Verification("final record claims failure".into()));
            }
            Ok(detail)
        }
    }
}

/// Replays every record against the owning oracle. An empty trace passes.
pub fn verify_trace(trace: &PipelineTrace) -> VerifyReport {
    let mut ctx = None;
    let steps: Vec<StepCheck> = trace
        .records
        .iter()
        .enumerate()
        .map(|(index, r)| {
            let (ok, detail) = match replay(&mut ctx, r) {
                Ok(d) => (true, d),
                Err(e) => (false, e.to_string()),
            };
            StepCheck {
                index,
                kind: r.kind().to_string(),
                ok,
                detail,
            }
        })
        .collect();
    let ok = steps.iter().all(|s| s.ok);
    VerifyReport { steps, ok }
}
