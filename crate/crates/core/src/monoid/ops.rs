use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{
    complete_up_to, degrees_up_to, dp_slices, generation_check, minimal_generators, Element,
    GeneratorSet, GradedMonoid, Slice, SliceOracle, SliceTable,
};
use crate::error::{Error, Result};

fn check_weights(w: &[i64], n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    if let Some(bad) = w.iter().find(|&&x| x <= 0) {
        return Err(Error::InvalidWeight(format!(
            "weights must be positive, got {bad}"
        )));
    }
    Ok(())
}

/// Batch slices through a degree map into an inner oracle.
fn mapped_slices(
    inner: &dyn SliceOracle,
    degrees: &[Vec<i64>],
    map: impl Fn(&[i64]) -> Vec<i64>,
) -> SliceTable {
    let mapped: Vec<Vec<i64>> = degrees.iter().map(|d| map(d)).collect();
    let table = inner.slices_at(&mapped);
    degrees
        .iter()
        .zip(&mapped)
        .map(|(d, m)| (d.clone(), table.get(m).cloned().unwrap_or_default()))
        .collect()
}

/// The sub-monoid over multidegrees `(w_1 a_1, ..., w_n a_n)`, indexed by `a`.
pub struct Reweighted<'a> {
    inner: &'a dyn SliceOracle,
    w: Vec<i64>,
}

impl<'a> Reweighted<'a> {
    pub fn new(inner: &'a dyn SliceOracle, w: &[i64]) -> Result<Reweighted<'a>> {
        check_weights(w, inner.n())?;
        Ok(Reweighted {
            inner,
            w: w.to_vec(),
        })
    }

    fn scaled(&self, a: &[i64]) -> Vec<i64> {
        a.iter().zip(&self.w).map(|(x, w)| x * w).collect()
    }
}

impl SliceOracle for Reweighted<'_> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn k(&self) -> usize {
        self.inner.k()
    }
    fn slice(&self, deg: &[i64]) -> Slice {
        self.inner.slice(&self.scaled(deg))
    }
    fn slices_at(&self, degrees: &[Vec<i64>]) -> SliceTable {
        mapped_slices(self.inner, degrees, |a| self.scaled(a))
    }
}

/// Degree bound for generators of a reweighting of the monoid generated by
/// `gens`: an exponent vector with some entry at least `L = lcm(w)` splits off
/// `L` copies of that generator, so minimal ones have all entries below `L`
/// or are `L e_g`.
fn reweight_bound(gens: &[Element], w: &[i64]) -> i64 {
    let l = w.iter().fold(1i64, |acc, &x| acc.lcm(&x));
    let max = gens.iter().map(Element::total_degree).max().unwrap_or(0);
    let sum: i64 = gens.iter().map(Element::total_degree).sum();
    let orig = (l * max).max((l - 1) * sum);
    orig / w.iter().min().copied().unwrap_or(1)
}

/// Presents the sub-monoid on multidegrees divisible coordinatewise by `w`,
/// re-indexed by division. Exact: the generator search runs to a degree that
/// provably contains every minimal generator.
pub fn reweight(m: &GradedMonoid, w: &[i64]) -> Result<GradedMonoid> {
    let r = Reweighted::new(m, w)?;
    let bound = reweight_bound(&m.generators, w);
    GradedMonoid::new(m.n, m.k, minimal_generators(&r, bound))
}

pub fn truncate(m: &GradedMonoid, d: i64) -> Result<GradedMonoid> {
    if d <= 0 {
        return Err(Error::InvalidWeight(format!(
            "truncation degree must be positive, got {d}"
        )));
    }
    reweight(m, &vec![d; m.n])
}

/// Adjoins a grading coordinate `b`; degree `(a, b)` reads the inner monoid at
/// `a + b e` where `e` is the indicator of `support`.
pub struct AugmentedMonoid<'a> {
    inner: &'a dyn SliceOracle,
    support: Vec<usize>,
}

impl AugmentedMonoid<'_> {
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    fn shifted(&self, deg: &[i64]) -> Vec<i64> {
        let n = self.inner.n();
        let b = deg[n];
        let mut a = deg[..n].to_vec();
        for &j in &self.support {
            a[j] += b;
        }
        a
    }
}

pub fn augment<'a>(m: &'a dyn SliceOracle, support: &[usize]) -> Result<AugmentedMonoid<'a>> {
    if support.is_empty() {
        return Err(Error::Precondition("augmentation support is empty".into()));
    }
    let mut s = support.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != support.len() || s.iter().any(|&j| j >= m.n()) {
        return Err(Error::Precondition(
            "support indices must be distinct grading coordinates".into(),
        ));
    }
    Ok(AugmentedMonoid {
        inner: m,
        support: s,
    })
}

impl SliceOracle for AugmentedMonoid<'_> {
    fn n(&self) -> usize {
        self.inner.n() + 1
    }
    fn k(&self) -> usize {
        self.inner.k()
    }
    fn slice(&self, deg: &[i64]) -> Slice {
        self.inner.slice(&self.shifted(deg))
    }
    fn slices_at(&self, degrees: &[Vec<i64>]) -> SliceTable {
        mapped_slices(self.inner, degrees, |d| self.shifted(d))
    }
}

/// The face of a monoid where grading coordinate `j` vanishes, with that
/// coordinate removed.
pub struct FaceMonoid<'a> {
    inner: &'a dyn SliceOracle,
    j: usize,
}

impl<'a> FaceMonoid<'a> {
    pub fn new(inner: &'a dyn SliceOracle, j: usize) -> Result<FaceMonoid<'a>> {
        if j >= inner.n() {
            return Err(Error::Precondition(format!("no grading coordinate {j}")));
        }
        Ok(FaceMonoid { inner, j })
    }

    fn widened(&self, deg: &[i64]) -> Vec<i64> {
        let mut d = deg.to_vec();
        d.insert(self.j, 0);
        d
    }
}

impl SliceOracle for FaceMonoid<'_> {
    fn n(&self) -> usize {
        self.inner.n() - 1
    }
    fn k(&self) -> usize {
        self.inner.k()
    }
    fn slice(&self, deg: &[i64]) -> Slice {
        self.inner.slice(&self.widened(deg))
    }
    fn slices_at(&self, degrees: &[Vec<i64>]) -> SliceTable {
        mapped_slices(self.inner, degrees, |d| self.widened(d))
    }
}

/// Degree in the augmented monoid of the lift `g(s)` of a generator of the
/// face where support coordinate `j` vanishes. `face_deg` lists the other
/// `n - 1` coordinates followed by `b`.
pub fn lifted_degree(face_deg: &[i64], j: usize, support: &[usize], s: i64) -> Vec<i64> {
    let n = face_deg.len();
    let b = face_deg[n - 1];
    let mut a = face_deg[..n - 1].to_vec();
    a.insert(j, 0);
    let mut out: Vec<i64> = (0..n)
        .map(|k| {
            if k == j {
                b - s
            } else if support.contains(&k) {
                a[k] + b - s
            } else {
                a[k]
            }
        })
        .collect();
    out.push(s);
    out
}

/// Generators of the augmented monoid from generators of each of its faces
/// `{a_j = 0}`, `j` in the support: every face generator `g` of `b`-degree
/// `b_g` contributes `g(s)` for `0 <= s <= b_g`.
///
/// `face_gens[i]` belongs to the face of `support[i]` (in the order given).
/// Both the inputs and the output are checked exhaustively up to `bound`.
pub fn lift_generators(
    face_gens: &[Vec<Element>],
    support: &[usize],
    m: &dyn SliceOracle,
    bound: i64,
) -> Result<GeneratorSet> {
    let aug = augment(m, support)?;
    if face_gens.len() != support.len() {
        return Err(Error::DimensionMismatch {
            expected: support.len(),
            found: face_gens.len(),
        });
    }
    let mut out = GeneratorSet::default();
    for (i, (gens, &j)) in face_gens.iter().zip(support).enumerate() {
        let face = FaceMonoid::new(&aug, j)?;
        let check = generation_check(&face, gens, bound);
        if !check.ok {
            return Err(Error::Verification(format!(
                "generators of face {j} fail: {} foreign, {} missing",
                check.foreign.len(),
                check.missing.len()
            )));
        }
        for (l, g) in gens.iter().enumerate() {
            let b = *g.deg.last().expect("face degrees end with b");
            for s in 0..=b {
                let deg = lifted_degree(&g.deg, j, aug.support(), s);
                out.push(
                    Element::new(deg, g.payload.clone()),
                    format!("g_{{{},{}}}(s={s})", i + 1, l + 1),
                );
            }
        }
    }
    let check = generation_check(&aug, &out.elements(), bound);
    if !check.ok {
        return Err(Error::Verification(format!(
            "lifted generators fail on the augmented monoid: {} missing",
            check.missing.len()
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub weights: Vec<i64>,
    pub bound: i64,
    /// The truncation lies in the algebra of the ambient generators up to the bound.
    pub truncation_covered: bool,
    /// Residue-box elements outside the ambient algebra.
    pub residues: Vec<Element>,
    /// Elements beyond ambient generators and residues needed to finish.
    pub extra: Vec<Element>,
    pub generators: GeneratorSet,
    /// The generators with redundant members removed.
    pub minimal: Vec<Element>,
    pub generated: bool,
    pub ok: bool,
}

/// Scalar form of [`truncation_implies_fg_weighted`].
pub fn truncation_implies_fg(
    m: &dyn SliceOracle,
    d: i64,
    ambient: &GeneratorSet,
    bound: i64,
) -> Result<TruncationReport> {
    truncation_implies_fg_weighted(m, &vec![d; m.n()], ambient, bound)
}

/// Generators of `m` from generators of an algebra containing its `w`-reweighting.
///
/// `ambient` holds elements of `m` in `m`'s own degrees. The result adjoins
/// every element of total degree at most `bound` in the residue box
/// `0 <= a_i < w_i` that the ambient generators miss, then any further
/// module generators needed up to `bound`.
pub fn truncation_implies_fg_weighted(
    m: &dyn SliceOracle,
    w: &[i64],
    ambient: &GeneratorSet,
    bound: i64,
) -> Result<TruncationReport> {
    check_weights(w, m.n())?;
    let n = m.n();
    let degrees = degrees_up_to(n, bound);
    let table = m.table(bound);
    let amb = ambient.elements();
    let in_m = amb.iter().all(|g| m.contains(g));
    let reach = dp_slices(&amb, m.k(), &degrees);
    let truncation_covered = in_m
        && degrees
            .iter()
            .filter(|d| d.iter().zip(w).all(|(x, wi)| x % wi == 0))
            .all(|d| table[d].is_subset(&reach[d]));

    let mut residues = Vec::new();
    let box_top: Vec<i64> = w.iter().map(|x| x - 1).collect();
    // Residues past the bound are never checked, and those already in the
    // ambient algebra add nothing.
    for d in super::box_below(&box_top) {
        if d.iter().all(|&x| x == 0) || d.iter().sum::<i64>() > bound {
            continue;
        }
        residues.extend(
            table[&d]
                .iter()
                .filter(|p| !reach[&d].contains(*p))
                .map(|p| Element::new(d.clone(), p.clone())),
        );
    }

    let mut gens = GeneratorSet::default();
    for g in &ambient.generators {
        gens.push(g.element.clone(), g.tag.clone());
    }
    for r in &residues {
        gens.push(r.clone(), "residue".into());
    }
    let mut all = gens.elements();
    let extra = complete_up_to(m, &mut all, bound);
    for e in &extra {
        gens.push(e.clone(), "module".into());
    }
    let elements = gens.elements();
    let generated = generation_check(m, &elements, bound).ok;
    let minimal = if generated {
        irreducible_members(m, &elements)
    } else {
        minimalize(&elements, m.k())
    };
    Ok(TruncationReport {
        weights: w.to_vec(),
        bound,
        truncation_covered,
        residues,
        extra,
        generators: gens,
        minimal,
        generated,
        ok: truncation_covered && generated,
    })
}

/// Drops every element generated by the others, largest degrees first.
/// Members of a generating set of `m` that are irreducible in `m`, which
/// is the minimal generating set: `g` goes when `g - h` lies in `m` for some
/// other member `h`. Only oracle lookups, so it scales to high degrees where
/// [`minimalize`] does not; but it trusts that `gens` generates.
pub fn irreducible_members(m: &dyn SliceOracle, gens: &[Element]) -> Vec<Element> {
    let mut slices: BTreeMap<Vec<i64>, Slice> = BTreeMap::new();
    let mut out: Vec<Element> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .filter(|g| {
            !gens.iter().any(|h| {
                if h == *g || h.is_zero() || h.deg.iter().zip(&g.deg).any(|(a, b)| a > b) {
                    return false;
                }
                let deg: Vec<i64> = g.deg.iter().zip(&h.deg).map(|(a, b)| a - b).collect();
                let payload: Vec<i64> = g
                    .payload
                    .iter()
                    .zip(&h.payload)
                    .map(|(a, b)| a - b)
                    .collect();
                slices
                    .entry(deg)
                    .or_insert_with_key(|d| m.slice(d))
                    .contains(&payload)
            })
        })
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn minimalize(gens: &[Element], k: usize) -> Vec<Element> {
    let mut kept: Vec<Element> = gens.to_vec();
    kept.sort_by_key(|g| std::cmp::Reverse(g.total_degree()));
    let mut i = 0;
    while i < kept.len() {
        let g = kept[i].clone();
        let others: Vec<Element> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, e)| e.clone())
            .collect();
        let degs = super::box_below(&g.deg);
        let reach = dp_slices(&others, k, &degs);
        if g.total_degree() > 0 && reach[&g.deg].contains(&g.payload) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept.sort();
    kept
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgEquivalenceReport {
    pub generators: Vec<Element>,
    pub reweighted_generators: Vec<Element>,
    /// Low-degree generators of the monoid determine its reweighting.
    pub forward: bool,
    /// Low-degree generators of the reweighting, plus residues, recover the monoid.
    pub backward: bool,
    pub consistent: bool,
}

/// Bounded witness that a monoid and its `w`-reweighting determine each other.
pub fn fg_equivalence_check(
    m: &dyn SliceOracle,
    w: &[i64],
    bound: i64,
) -> Result<FgEquivalenceReport> {
    let r = Reweighted::new(m, w)?;
    let generators = minimal_generators(m, bound);
    let reweighted_generators = minimal_generators(&r, bound);

    let presented = GradedMonoid::new(m.n(), m.k(), generators.clone())?;
    let from_gens = minimal_generators(&Reweighted::new(&presented, w)?, bound);
    let forward = generation_check(&r, &from_gens, bound).ok;

    let ambient = GeneratorSet::from_elements(
        reweighted_generators.iter().map(|g| {
            let deg = g.deg.iter().zip(w).map(|(a, x)| a * x).collect();
            Element::new(deg, g.payload.clone())
        }),
        "reweighted",
    );
    let backward = truncation_implies_fg_weighted(m, w, &ambient, bound)?.ok;
    Ok(FgEquivalenceReport {
        generators,
        reweighted_generators,
        forward,
        backward,
        consistent: forward && backward,
    })
}
