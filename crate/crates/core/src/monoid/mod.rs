//! Multigraded lattice-point monoids standing in for multigraded section rings.
//!
//! An element is a multidegree in `Z_{>=0}^n` together with a payload in
//! `Z^k` (a lattice point of the section polytope). Multiplication is
//! addition of both parts. Every monoid here is exposed through
//! [`SliceOracle`]: the finite set of payloads sitting over a multidegree.

pub mod hilbert;
pub mod ops;
pub mod transfer;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hilbert::{
    cone_rays, hilbert_basis, saturated_reweight, semiample_generators, CayleyMonoid, ConeMonoid,
};
pub use ops::{
    augment, fg_equivalence_check, irreducible_members, lift_generators, minimalize, reweight,
    truncate, truncation_implies_fg, truncation_implies_fg_weighted, AugmentedMonoid, FaceMonoid,
    FgEquivalenceReport, Reweighted, TruncationReport,
};
pub use transfer::{simplex_transfer, TransferMatrices, TransferReport, VertexRing};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element {
    pub deg: Vec<i64>,
    pub payload: Vec<i64>,
}

impl Element {
    pub fn new(deg: Vec<i64>, payload: Vec<i64>) -> Element {
        Element { deg, payload }
    }

    pub fn total_degree(&self) -> i64 {
        self.deg.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.deg.iter().all(|&d| d == 0) && self.payload.iter().all(|&p| p == 0)
    }
}

/// A generator with a free-text lineage tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    #[serde(flatten)]
    pub element: Element,
    pub tag: String,
}

/// Generators with provenance; kept sorted and free of duplicate elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn from_elements(elements: impl IntoIterator<Item = Element>, tag: &str) -> GeneratorSet {
        let mut g = GeneratorSet::default();
        for e in elements {
            g.push(e, tag.to_string());
        }
        g
    }

    /// Adds an element unless an equal one is already present.
    pub fn push(&mut self, element: Element, tag: String) {
        if let Err(pos) = self
            .generators
            .binary_search_by(|g| g.element.cmp(&element))
        {
            self.generators.insert(pos, Generator { element, tag });
        }
    }

    pub fn extend(&mut self, other: &GeneratorSet) {
        for g in &other.generators {
            self.push(g.element.clone(), g.tag.clone());
        }
    }

    pub fn elements(&self) -> Vec<Element> {
        self.generators.iter().map(|g| g.element.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

pub type Slice = BTreeSet<Vec<i64>>;
pub type SliceTable = HashMap<Vec<i64>, Slice>;

/// Finite payload sets indexed by multidegree. Implementors promise the
/// slices form a monoid: the zero degree holds only the zero payload and
/// sums of members are members.
pub trait SliceOracle {
    /// Number of grading coordinates.
    fn n(&self) -> usize;
    /// Payload lattice rank.
    fn k(&self) -> usize;
    fn slice(&self, deg: &[i64]) -> Slice;

    fn table(&self, bound: i64) -> SliceTable {
        self.slices_at(&degrees_up_to(self.n(), bound))
    }

    /// Slices at the given degrees; implementors with a cheaper batch
    /// computation override this.
    fn slices_at(&self, degrees: &[Vec<i64>]) -> SliceTable {
        degrees.iter().map(|d| (d.clone(), self.slice(d))).collect()
    }

    fn contains(&self, e: &Element) -> bool {
        e.deg.len() == self.n()
            && e.payload.len() == self.k()
            && e.deg.iter().all(|&d| d >= 0)
            && self.slice(&e.deg).contains(&e.payload)
    }
}

impl<T: SliceOracle + ?Sized> SliceOracle for &T {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn k(&self) -> usize {
        (**self).k()
    }
    fn slice(&self, deg: &[i64]) -> Slice {
        (**self).slice(deg)
    }
    fn table(&self, bound: i64) -> SliceTable {
        (**self).table(bound)
    }
    fn slices_at(&self, degrees: &[Vec<i64>]) -> SliceTable {
        (**self).slices_at(degrees)
    }
}

impl<T: SliceOracle + ?Sized> SliceOracle for Box<T> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn k(&self) -> usize {
        (**self).k()
    }
    fn slice(&self, deg: &[i64]) -> Slice {
        (**self).slice(deg)
    }
    fn table(&self, bound: i64) -> SliceTable {
        (**self).table(bound)
    }
    fn slices_at(&self, degrees: &[Vec<i64>]) -> SliceTable {
        (**self).slices_at(degrees)
    }
}

/// All multidegrees of total degree at most `bound`, by total degree and then
/// lexicographically.
pub fn degrees_up_to(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for total in 0..=bound.max(-1) {
        let mut cur = Vec::with_capacity(n);
        compositions(n, total, &mut cur, &mut out);
    }
    out
}

fn compositions(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if cur.len() + 1 == n {
        cur.push(left);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    if n == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for x in (0..=left).rev() {
        cur.push(x);
        compositions(n, left - x, cur, out);
        cur.pop();
    }
}

fn le(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn sub_deg(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_payload(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Slices of the monoid generated by `gens` over a down-closed list of
/// degrees sorted by total degree.
pub fn dp_slices(gens: &[Element], k: usize, degrees: &[Vec<i64>]) -> SliceTable {
    let mut table: SliceTable = HashMap::with_capacity(degrees.len());
    for m in degrees {
        let mut s = Slice::new();
        if m.iter().all(|&x| x == 0) {
            s.insert(vec![0; k]);
        } else {
            for g in gens {
                if le(&g.deg, m) && g.total_degree() > 0 {
                    if let Some(rest) = table.get(&sub_deg(m, &g.deg)) {
                        for p in rest {
                            s.insert(add_payload(p, &g.payload));
                        }
                    }
                }
            }
        }
        table.insert(m.clone(), s);
    }
    table
}

/// A monoid presented by finitely many generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedMonoid {
    pub n: usize,
    pub k: usize,
    pub generators: Vec<Element>,
}

impl GradedMonoid {
    pub fn new(n: usize, k: usize, generators: Vec<Element>) -> Result<GradedMonoid> {
        for g in &generators {
            check_shape(g, n, k)?;
            if g.total_degree() == 0 && !g.is_zero() {
                return Err(Error::Precondition(
                    "the zero multidegree carries only the zero payload".into(),
                ));
            }
        }
        let mut generators: Vec<Element> =
            generators.into_iter().filter(|g| !g.is_zero()).collect();
        generators.sort();
        generators.dedup();
        Ok(GradedMonoid { n, k, generators })
    }

    /// Exact membership by dynamic programming over the degree box below `x`.
    pub fn membership(&self, x: &Element) -> Result<bool> {
        check_shape(x, self.n, self.k)?;
        if x.deg.iter().any(|&d| d < 0) {
            return Ok(false);
        }
        Ok(self.slice(&x.deg).contains(&x.payload))
    }
}

fn check_shape(e: &Element, n: usize, k: usize) -> Result<()> {
    if e.deg.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: e.deg.len(),
        });
    }
    if e.payload.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: e.payload.len(),
        });
    }
    if e.deg.iter().any(|&d| d < 0) {
        return Err(Error::Precondition("multidegrees are non-negative".into()));
    }
    Ok(())
}

/// Degrees componentwise below `top`, sorted by total degree.
pub(crate) fn box_below(top: &[i64]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for &t in top {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=t).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.sort_by_key(|d| d.iter().sum::<i64>());
    out
}

impl SliceOracle for GradedMonoid {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn slice(&self, deg: &[i64]) -> Slice {
        if deg.iter().any(|&d| d < 0) {
            return Slice::new();
        }
        let degs = box_below(deg);
        dp_slices(&self.generators, self.k, &degs)
            .remove(deg)
            .unwrap_or_default()
    }
    fn table(&self, bound: i64) -> SliceTable {
        dp_slices(&self.generators, self.k, &degrees_up_to(self.n, bound))
    }
    fn slices_at(&self, degrees: &[Vec<i64>]) -> SliceTable {
        let mut top = vec![0i64; self.n];
        for d in degrees {
            if d.iter().any(|&x| x < 0) {
                continue;
            }
            for (t, x) in top.iter_mut().zip(d) {
                *t = (*t).max(*x);
            }
        }
        let full = dp_slices(&self.generators, self.k, &box_below(&top));
        degrees
            .iter()
            .map(|d| (d.clone(), full.get(d).cloned().unwrap_or_default()))
            .collect()
    }
}

/// Minimal generators of an oracle's monoid among elements of total degree
/// at most `bound`: an element is new exactly when it is not a generator
/// plus an element of lower total degree.
pub fn minimal_generators(m: &dyn SliceOracle, bound: i64) -> Vec<Element> {
    let degrees = degrees_up_to(m.n(), bound);
    let table = m.table(bound);
    let mut gens: Vec<Element> = Vec::new();
    for d in &degrees {
        if d.iter().all(|&x| x == 0) {
            continue;
        }
        let here = &table[d];
        let mut reachable = Slice::new();
        for g in &gens {
            if le(&g.deg, d) && g.deg != *d {
                for p in &table[&sub_deg(d, &g.deg)] {
                    reachable.insert(add_payload(p, &g.payload));
                }
            }
        }
        for p in here.difference(&reachable) {
            gens.push(Element::new(d.clone(), p.clone()));
        }
    }
    gens.sort();
    gens
}

/// Where a candidate generator set disagrees with a monoid up to a bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationCheck {
    pub ok: bool,
    /// Generators that are not elements of the monoid.
    pub foreign: Vec<Element>,
    /// Monoid elements the generators miss.
    pub missing: Vec<Element>,
}

/// Exhaustive comparison of the monoid generated by `gens` with `m` over all
/// multidegrees of total degree at most `bound`.
pub fn generation_check(m: &dyn SliceOracle, gens: &[Element], bound: i64) -> GenerationCheck {
    let degrees = degrees_up_to(m.n(), bound);
    let table = m.table(bound);
    let foreign: Vec<Element> = gens
        .iter()
        .filter(|g| {
            g.deg.len() != m.n()
                || g.payload.len() != m.k()
                || match table.get(&g.deg) {
                    Some(s) => !s.contains(&g.payload),
                    None => !m.contains(g),
                }
        })
        .cloned()
        .collect();
    let usable: Vec<Element> = gens
        .iter()
        .filter(|g| g.deg.len() == m.n() && g.payload.len() == m.k())
        .cloned()
        .collect();
    let generated = dp_slices(&usable, m.k(), &degrees);
    let mut missing = Vec::new();
    for d in &degrees {
        for p in table[d].difference(&generated[d]) {
            missing.push(Element::new(d.clone(), p.clone()));
        }
    }
    GenerationCheck {
        ok: foreign.is_empty() && missing.is_empty(),
        foreign,
        missing,
    }
}

pub fn is_generated_up_to(m: &dyn SliceOracle, gens: &[Element], bound: i64) -> bool {
    generation_check(m, gens, bound).ok
}

/// Adds, degree by degree, whatever elements of `m` the current set fails to
/// reach; the result generates `m` up to `bound`. Returns the added elements.
pub fn complete_up_to(m: &dyn SliceOracle, gens: &mut Vec<Element>, bound: i64) -> Vec<Element> {
    let degrees = degrees_up_to(m.n(), bound);
    let table = m.table(bound);
    let mut generated: SliceTable = HashMap::with_capacity(degrees.len());
    let mut added = Vec::new();
    for d in &degrees {
        let mut s = Slice::new();
        if d.iter().all(|&x| x == 0) {
            s.insert(vec![0; m.k()]);
        } else {
            for g in gens.iter() {
                if le(&g.deg, d) && g.total_degree() > 0 {
                    if let Some(rest) = generated.get(&sub_deg(d, &g.deg)) {
                        for p in rest {
                            s.insert(add_payload(p, &g.payload));
                        }
                    }
                }
            }
            let gaps: Vec<Vec<i64>> = table[d].difference(&s).cloned().collect();
            for p in gaps {
                let e = Element::new(d.clone(), p.clone());
                gens.push(e.clone());
                added.push(e);
                s.insert(p);
            }
        }
        generated.insert(d.clone(), s);
    }
    added
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn el(deg: &[i64], payload: &[i64]) -> Element {
        Element::new(deg.to_vec(), payload.to_vec())
    }

    #[test]
    fn membership_examples() {
        let diag = GradedMonoid::new(1, 1, vec![el(&[1], &[1])]).unwrap();
        assert!(diag.membership(&el(&[3], &[3])).unwrap());
        assert!(!diag.membership(&el(&[1], &[0])).unwrap());
        let two = GradedMonoid::new(1, 1, vec![el(&[1], &[0]), el(&[1], &[2])]).unwrap();
        assert!(two.membership(&el(&[2], &[2])).unwrap());
        assert!(!two.membership(&el(&[2], &[1])).unwrap());
        assert!(two.membership(&el(&[2, 0], &[2])).is_err());
    }

    #[test]
    fn degree_enumeration() {
        let d = degrees_up_to(2, 2);
        assert_eq!(d.len(), 6);
        assert_eq!(d[0], vec![0, 0]);
        assert!(d
            .windows(2)
            .all(|w| w[0].iter().sum::<i64>() <= w[1].iter().sum::<i64>()));
        assert_eq!(degrees_up_to(0, 3), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn generation_examples() {
        let diag = GradedMonoid::new(1, 1, vec![el(&[1], &[1])]).unwrap();
        assert!(is_generated_up_to(&diag, &[el(&[1], &[1])], 5));
        let two = GradedMonoid::new(1, 1, vec![el(&[1], &[0]), el(&[1], &[2])]).unwrap();
        let check = generation_check(&two, &[el(&[1], &[0])], 3);
        assert!(!check.ok);
        assert_eq!(check.missing[0], el(&[1], &[2]));
        assert_eq!(
            minimal_generators(&two, 4),
            vec![el(&[1], &[0]), el(&[1], &[2])]
        );
    }

    #[test]
    fn completion_adds_only_gaps() {
        let two = GradedMonoid::new(1, 1, vec![el(&[1], &[0]), el(&[1], &[2])]).unwrap();
        let mut gens = vec![el(&[1], &[0])];
        let added = complete_up_to(&two, &mut gens, 4);
        assert_eq!(added, vec![el(&[1], &[2])]);
        assert!(is_generated_up_to(&two, &gens, 4));
    }

    #[test]
    fn zero_degree_payload_rejected() {
        assert!(GradedMonoid::new(1, 1, vec![el(&[0], &[1])]).is_err());
    }
}
