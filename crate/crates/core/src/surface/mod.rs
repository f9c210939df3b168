//! Numerical surfaces: a basis of curve classes with an intersection form.
//! Zariski decomposition, contraction of negative curves and the MMP all
//! act on this data alone.

pub mod region;
pub mod toric;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_negative_definite, mat_vec, solve};
use crate::lp::cone_combination;
use crate::rational::{dot, serde_rat, sub, unit, QVec, Rat};

pub use region::{pseff_region, wlc_decomposition, AffineMap, WLCRegion};
pub use toric::ToricModel;

/// Curve basis `C_1..C_r`, intersection matrix, canonical class and the two
/// finite cones the model needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericalSurface {
    pub curves: Vec<String>,
    #[serde(rename = "Q", with = "serde_rat::mat")]
    pub q: Vec<QVec>,
    #[serde(rename = "K", with = "serde_rat::vec")]
    pub k: QVec,
    #[serde(with = "serde_rat::mat")]
    pub effective_cone: Vec<QVec>,
    #[serde(with = "serde_rat::mat")]
    pub mori_curves: Vec<QVec>,
}

impl NumericalSurface {
    pub fn new(
        curves: Vec<String>,
        q: Vec<QVec>,
        k: QVec,
        effective_cone: Vec<QVec>,
        mori_curves: Vec<QVec>,
    ) -> Result<NumericalSurface> {
        let s = NumericalSurface {
            curves,
            q,
            k,
            effective_cone,
            mori_curves,
        };
        s.validate()?;
        Ok(s)
    }

    /// Surface whose effective and Mori cones are both spanned by the basis.
    pub fn with_basis_cones(
        curves: Vec<String>,
        q: Vec<QVec>,
        k: QVec,
    ) -> Result<NumericalSurface> {
        let r = curves.len();
        let units: Vec<QVec> = (0..r).map(|i| unit(r, i)).collect();
        NumericalSurface::new(curves, q, k, units.clone(), units)
    }

    pub fn rank(&self) -> usize {
        self.curves.len()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.curves.len();
        let mismatch = |found: usize| Err(Error::DimensionMismatch { expected: r, found });
        if self.q.len() != r {
            return mismatch(self.q.len());
        }
        if let Some(row) = self.q.iter().find(|row| row.len() != r) {
            return mismatch(row.len());
        }
        if self.k.len() != r {
            return mismatch(self.k.len());
        }
        if let Some(v) = self
            .effective_cone
            .iter()
            .chain(&self.mori_curves)
            .find(|v| v.len() != r)
        {
            return mismatch(v.len());
        }
        for i in 0..r {
            for j in 0..i {
                if self.q[i][j] != self.q[j][i] {
                    return Err(Error::Precondition(format!(
                        "Q is not symmetric at ({i}, {j})"
                    )));
                }
            }
            if !self.effective_cone.contains(&unit(r, i)) {
                return Err(Error::Precondition(format!(
                    "basis curve {} is missing from the effective cone generators",
                    self.curves[i]
                )));
            }
        }
        Ok(())
    }

    fn check_len(&self, d: &[Rat]) -> Result<()> {
        if d.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: d.len(),
            });
        }
        Ok(())
    }

    /// `d^T Q c`.
    pub fn intersect(&self, d: &[Rat], c: &[Rat]) -> Result<Rat> {
        self.check_len(d)?;
        self.check_len(c)?;
        Ok(dot(&mat_vec(&self.q, c), d))
    }

    fn dot_curve(&self, d: &[Rat], j: usize) -> Rat {
        dot(&self.q[j], d)
    }

    pub fn is_nef(&self, d: &[Rat]) -> Result<bool> {
        self.check_len(d)?;
        let qd = mat_vec(&self.q, d);
        Ok(self.mori_curves.iter().all(|c| !dot(&qd, c).is_negative()))
    }

    pub fn is_pseff(&self, d: &[Rat]) -> Result<bool> {
        self.check_len(d)?;
        Ok(d.iter().all(|x| x.is_zero()) || cone_combination(&self.effective_cone, d).is_some())
    }

    /// Zariski decomposition, growing the negative part's support by all
    /// offending curves at once.
    pub fn zariski(&self, d: &[Rat]) -> Result<ZariskiDecomp> {
        self.zariski_inner(d, None)
    }

    /// As [`Self::zariski`], but the support grows by one curve per round:
    /// the first offending curve in `order`.
    pub fn zariski_ordered(&self, d: &[Rat], order: &[usize]) -> Result<ZariskiDecomp> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.rank()).collect::<Vec<_>>() {
            return Err(Error::Precondition(
                "order must be a permutation of the curves".into(),
            ));
        }
        self.zariski_inner(d, Some(order))
    }

    fn zariski_inner(&self, d: &[Rat], order: Option<&[usize]>) -> Result<ZariskiDecomp> {
        if !self.is_pseff(d)? {
            return Err(Error::NotPseudoEffective(fmt_vec(d)));
        }
        let r = self.rank();
        let one_at_a_time = order.is_some();
        let natural: Vec<usize> = (0..r).collect();
        let order = order.unwrap_or(&natural);
        let mut support: Vec<usize> = Vec::new();
        let mut neg = vec![Rat::zero(); r];
        loop {
            let p = sub(d, &neg);
            let offending: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&j| !support.contains(&j) && self.dot_curve(&p, j).is_negative())
                .collect();
            if offending.is_empty() {
                break;
            }
            if let Some(&j) = offending.iter().find(|&&j| !self.q[j][j].is_negative()) {
                return Err(Error::Precondition(format!(
                    "positive part meets curve {} negatively but its square is not negative",
                    self.curves[j]
                )));
            }
            if one_at_a_time {
                support.push(offending[0]);
            } else {
                support.extend(offending);
            }
            neg = self.negative_part_on(d, &support)?;
        }
        support.sort_unstable();
        let dec = ZariskiDecomp {
            p: sub(d, &neg),
            n: neg,
            support,
        };
        dec.check(self, d)?;
        Ok(dec)
    }

    fn gram(&self, support: &[usize]) -> Vec<QVec> {
        support
            .iter()
            .map(|&i| support.iter().map(|&j| self.q[i][j].clone()).collect())
            .collect()
    }

    /// `N` supported on `support` with `(d - N) · C_j = 0` for `j` in the support.
    fn negative_part_on(&self, d: &[Rat], support: &[usize]) -> Result<QVec> {
        let gram = self.gram(support);
        if !is_negative_definite(&gram) {
            return Err(Error::NotNegativeDefinite(format!(
                "support {:?}",
                support.iter().map(|&i| &self.curves[i]).collect::<Vec<_>>()
            )));
        }
        let rhs: QVec = support.iter().map(|&j| self.dot_curve(d, j)).collect();
        let nu = solve(&gram, &rhs, support.len()).expect("definite systems are solvable");
        let mut n = vec![Rat::zero(); self.rank()];
        for (&j, v) in support.iter().zip(nu) {
            n[j] = v;
        }
        Ok(n)
    }

    /// Contracts basis curve `j`: the form on the remaining basis is the one
    /// induced by `D -> D - (D·C_j / C_j²) C_j`. Returns the new surface and the
    /// pushforward matrix, which drops coordinate `j`.
    pub fn contract(&self, j: usize) -> Result<(NumericalSurface, Vec<QVec>)> {
        let r = self.rank();
        if j >= r || !self.q[j][j].is_negative() {
            return Err(Error::NotContractible(j));
        }
        let keep: Vec<usize> = (0..r).filter(|&i| i != j).collect();
        let qjj = &self.q[j][j];
        let q = keep
            .iter()
            .map(|&a| {
                keep.iter()
                    .map(|&b| &self.q[a][b] - &self.q[a][j] * &self.q[b][j] / qjj)
                    .collect()
            })
            .collect();
        let push: Vec<QVec> = keep.iter().map(|&i| unit(r, i)).collect();
        let project = |vs: &[QVec]| -> Vec<QVec> {
            let mut out: Vec<QVec> = Vec::new();
            for v in vs {
                let w = mat_vec(&push, v);
                if w.iter().any(|x| !x.is_zero()) && !out.contains(&w) {
                    out.push(w);
                }
            }
            out
        };
        let surface = NumericalSurface {
            curves: keep.iter().map(|&i| self.curves[i].clone()).collect(),
            q,
            k: mat_vec(&push, &self.k),
            effective_cone: project(&self.effective_cone),
            mori_curves: project(&self.mori_curves),
        };
        Ok((surface, push))
    }

    /// `E = D - f^* f_* D` for the morphism contracting the listed basis curves:
    /// supported on them and making `D - E` orthogonal to each.
    pub fn discrepancy(&self, d: &[Rat], contracted: &[usize]) -> Result<QVec> {
        self.check_len(d)?;
        if contracted.is_empty() {
            return Ok(vec![Rat::zero(); self.rank()]);
        }
        self.negative_part_on(d, contracted)
    }

    /// Runs the `(K + Δ)`-MMP, contracting the lowest-index negative curve
    /// with `(K + Δ) · C < 0` at each step.
    pub fn run_mmp(&self, boundary: &[Rat]) -> Result<MMPTrace> {
        self.check_len(boundary)?;
        let mut surface = self.clone();
        let mut delta = boundary.to_vec();
        let mut labels: Vec<usize> = (0..self.rank()).collect();
        let mut steps = Vec::new();
        let outcome = loop {
            let d: QVec = surface.k.iter().zip(&delta).map(|(a, b)| a + b).collect();
            let negative: Vec<usize> = (0..surface.rank())
                .filter(|&j| surface.dot_curve(&d, j).is_negative())
                .collect();
            match negative.iter().find(|&&j| surface.q[j][j].is_negative()) {
                Some(&j) => {
                    let (next, push) = surface.contract(j)?;
                    steps.push(MMPStep {
                        curve: labels[j],
                        name: surface.curves[j].clone(),
                        intersection: surface.dot_curve(&d, j),
                        self_intersection: surface.q[j][j].clone(),
                        pushforward: push.clone(),
                    });
                    delta = mat_vec(&push, &delta);
                    labels.remove(j);
                    surface = next;
                }
                None => {
                    if surface.is_nef(&d)? {
                        break Outcome::MinimalModel;
                    }
                    break Outcome::FiberType;
                }
            }
        };
        Ok(MMPTrace {
            steps,
            final_surface: surface,
            final_boundary: delta,
            outcome,
        })
    }
}

pub(crate) fn fmt_vec(v: &[Rat]) -> String {
    format!(
        "[{}]",
        v.iter()
            .map(crate::rational::format_rat)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiDecomp {
    #[serde(rename = "P", with = "serde_rat::vec")]
    pub p: QVec,
    #[serde(rename = "N", with = "serde_rat::vec")]
    pub n: QVec,
    pub support: Vec<usize>,
}

impl ZariskiDecomp {
    /// The five defining properties, exactly.
    pub fn check(&self, s: &NumericalSurface, d: &[Rat]) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::Verification(format!(
                "Zariski decomposition: {what}"
            )))
        };
        let sum: QVec = self.p.iter().zip(&self.n).map(|(a, b)| a + b).collect();
        if sum != d {
            return fail("P + N != D");
        }
        if self.n.iter().any(|x| x.is_negative()) {
            return fail("N is not effective");
        }
        if self
            .n
            .iter()
            .enumerate()
            .any(|(j, x)| !x.is_zero() && !self.support.contains(&j))
        {
            return fail("N has a component outside the support");
        }
        if !s.is_nef(&self.p)? {
            return fail("P is not nef");
        }
        if self
            .support
            .iter()
            .any(|&j| !s.dot_curve(&self.p, j).is_zero())
        {
            return fail("P meets the support");
        }
        if !is_negative_definite(&s.gram(&self.support)) {
            return fail("support is not negative definite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    MinimalModel,
    FiberType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MMPStep {
    /// Index of the contracted curve in the original basis.
    pub curve: usize,
    pub name: String,
    /// `(K + Δ) · C` and `C²` on the surface being contracted.
    #[serde(with = "serde_rat")]
    pub intersection: Rat,
    #[serde(with = "serde_rat")]
    pub self_intersection: Rat,
    #[serde(with = "serde_rat::mat")]
    pub pushforward: Vec<QVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MMPTrace {
    pub steps: Vec<MMPStep>,
    pub final_surface: NumericalSurface,
    #[serde(with = "serde_rat::vec")]
    pub final_boundary: QVec,
    pub outcome: Outcome,
}

impl MMPTrace {
    /// Original indices of the contracted curves, in order.
    pub fn sequence(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.curve).collect()
    }

    /// Composite pushforward from the original basis to the final one.
    pub fn pushforward(&self, r: usize) -> Vec<QVec> {
        let mut m: Vec<QVec> = (0..r).map(|i| unit(r, i)).collect();
        for s in &self.steps {
            m = crate::linalg::mat_mul(&s.pushforward, &m);
        }
        m
    }

    pub fn check(&self) -> Result<()> {
        for s in &self.steps {
            if !s.intersection.is_negative() || !s.self_intersection.is_negative() {
                return Err(Error::Verification(format!(
                    "step contracting {} is not (K+Δ)-negative on a negative curve",
                    s.name
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ivec, qvec};

    fn imat(rows: &[&[i64]]) -> Vec<QVec> {
        rows.iter().map(|r| ivec(r)).collect()
    }

    pub(crate) fn exceptional_curve() -> NumericalSurface {
        // K = E numerically, so K·E = -1.
        NumericalSurface::with_basis_cones(vec!["E".into()], imat(&[&[-1]]), ivec(&[1])).unwrap()
    }

    pub(crate) fn two_chain() -> NumericalSurface {
        NumericalSurface::with_basis_cones(
            vec!["C1".into(), "C2".into()],
            imat(&[&[-2, 1], &[1, -2]]),
            ivec(&[0, 0]),
        )
        .unwrap()
    }

    #[test]
    fn intersections_and_positivity() {
        let e = exceptional_curve();
        assert_eq!(e.intersect(&ivec(&[1]), &ivec(&[1])).unwrap(), int(-1));
        assert_eq!(e.intersect(&ivec(&[0]), &ivec(&[1])).unwrap(), int(0));
        assert!(!e.is_nef(&ivec(&[1])).unwrap());
        assert!(e.is_nef(&ivec(&[0])).unwrap());
        assert!(e.is_pseff(&ivec(&[0])).unwrap());
        assert!(!e.is_pseff(&ivec(&[-1])).unwrap());
        let c = two_chain();
        assert_eq!(c.intersect(&ivec(&[1, 0]), &ivec(&[0, 1])).unwrap(), int(1));
        assert!(c.is_nef(&ivec(&[-1, -1])).unwrap());
        assert!(c.intersect(&ivec(&[1]), &ivec(&[1, 0])).is_err());
    }

    #[test]
    fn zariski_examples() {
        let e = exceptional_curve();
        let z = e.zariski(&ivec(&[1])).unwrap();
        assert_eq!((z.p, z.n, z.support), (ivec(&[0]), ivec(&[1]), vec![0]));
        let c = two_chain();
        let z = c.zariski(&ivec(&[1, 0])).unwrap();
        assert_eq!((z.p, z.n), (ivec(&[0, 0]), ivec(&[1, 0])));
        // 2C1 + C2 first meets C1 negatively; after removing 3/2 C1 it meets
        // C2 negatively, and on the whole chain everything is negative.
        let z = c.zariski(&ivec(&[2, 1])).unwrap();
        assert_eq!((z.p, z.n), (ivec(&[0, 0]), ivec(&[2, 1])));
        // Blow-up of the plane: H + 2E has positive part H.
        let blowup = NumericalSurface::new(
            vec!["H".into(), "E".into()],
            imat(&[&[1, 0], &[0, -1]]),
            ivec(&[-3, 1]),
            vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, -1])],
            vec![ivec(&[0, 1]), ivec(&[1, -1])],
        )
        .unwrap();
        let z = blowup.zariski(&qvec(&[(1, 1), (3, 2)])).unwrap();
        assert_eq!((z.p, z.n), (ivec(&[1, 0]), qvec(&[(0, 1), (3, 2)])));
        assert!(matches!(
            e.zariski(&ivec(&[-1])),
            Err(Error::NotPseudoEffective(_))
        ));
    }

    #[test]
    fn contraction_examples() {
        let s = NumericalSurface::with_basis_cones(
            vec!["C".into(), "E".into()],
            imat(&[&[0, 1], &[1, -1]]),
            ivec(&[-2, -1]),
        )
        .unwrap();
        let (t, push) = s.contract(1).unwrap();
        assert_eq!(t.q, imat(&[&[1]]));
        assert_eq!(push, imat(&[&[1, 0]]));
        assert!(matches!(s.contract(0), Err(Error::NotContractible(0))));
        let isolated = NumericalSurface::with_basis_cones(
            vec!["A".into(), "B".into()],
            imat(&[&[-1, 0], &[0, -3]]),
            ivec(&[0, 0]),
        )
        .unwrap();
        assert_eq!(isolated.contract(0).unwrap().0.q, imat(&[&[-3]]));
    }

    #[test]
    fn mmp_examples() {
        let e = exceptional_curve();
        let t = e.run_mmp(&ivec(&[0])).unwrap();
        assert_eq!(t.sequence(), vec![0]);
        assert_eq!(t.outcome, Outcome::MinimalModel);
        t.check().unwrap();
        let nef = two_chain().run_mmp(&ivec(&[0, 0])).unwrap();
        assert!(nef.steps.is_empty());
        assert_eq!(nef.outcome, Outcome::MinimalModel);
        // P1 x P1: two rulings, K·F = -2 and no negative curves.
        let quadric = NumericalSurface::with_basis_cones(
            vec!["F".into(), "G".into()],
            imat(&[&[0, 1], &[1, 0]]),
            ivec(&[-2, -2]),
        )
        .unwrap();
        let run = quadric.run_mmp(&ivec(&[0, 0])).unwrap();
        assert_eq!(run.outcome, Outcome::FiberType);
        assert!(run.steps.is_empty());
    }

    #[test]
    fn discrepancy_of_a_blow_down() {
        let e = exceptional_curve();
        // f_*K = 0, so the whole of K = E is exceptional.
        assert_eq!(e.discrepancy(&ivec(&[1]), &[0]).unwrap(), ivec(&[1]));
        assert_eq!(e.discrepancy(&ivec(&[1]), &[]).unwrap(), ivec(&[0]));
    }

    #[test]
    fn json_uses_rational_strings() {
        let s = two_chain();
        let j = serde_json::to_value(&s).unwrap();
        assert_eq!(j["Q"][0][0], "-2/1");
        let back: NumericalSurface = serde_json::from_value(j).unwrap();
        assert_eq!(back, s);
    }

    fn definite_config() -> impl proptest::strategy::Strategy<Value = NumericalSurface> {
        use proptest::prelude::*;
        (2usize..=4).prop_flat_map(|r| {
            (
                prop::collection::vec(0i64..=1, r * (r - 1) / 2),
                prop::collection::vec(1i64..=2, r),
                prop::collection::vec(-2i64..=2, r),
            )
                .prop_map(move |(off, extra, k)| {
                    let mut q = vec![vec![0i64; r]; r];
                    let mut it = off.into_iter();
                    for i in 0..r {
                        for j in 0..i {
                            let x = it.next().unwrap();
                            q[i][j] = x;
                            q[j][i] = x;
                        }
                    }
                    // Strict diagonal dominance keeps the form negative definite.
                    for i in 0..r {
                        let row: i64 = q[i].iter().sum();
                        q[i][i] = -(row + extra[i]);
                    }
                    NumericalSurface::with_basis_cones(
                        (0..r).map(|i| format!("C{i}")).collect(),
                        q.iter().map(|row| ivec(row)).collect(),
                        ivec(&k),
                    )
                    .unwrap()
                })
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn zariski_is_order_independent(
            s in definite_config(),
            coeffs in proptest::collection::vec(0i64..=4, 4),
            perm_seed in 0usize..24,
        ) {
            let r = s.rank();
            let d: QVec = coeffs[..r].iter().map(|&c| int(c)).collect();
            let base = s.zariski(&d).unwrap();
            let mut order: Vec<usize> = (0..r).collect();
            let mut seed = perm_seed;
            for i in (1..r).rev() {
                order.swap(i, seed % (i + 1));
                seed /= i + 1;
            }
            let other = s.zariski_ordered(&d, &order).unwrap();
            proptest::prop_assert_eq!(base, other);
        }

        #[test]
        fn contraction_obeys_the_projection_formula(
            s in definite_config(),
            a in proptest::collection::vec(-3i64..=3, 4),
            b in proptest::collection::vec(-3i64..=3, 4),
        ) {
            let r = s.rank();
            let (t, push) = s.contract(0).unwrap();
            let (a, b): (QVec, QVec) = (ivec(&a[..r]), ivec(&b[..r]));
            let pull = |d: &QVec| -> QVec {
                let pushed = mat_vec(&push, d);
                let mut up = vec![Rat::zero(); r];
                for (i, x) in pushed.into_iter().enumerate() {
                    up[i + 1] = x;
                }
                let c = s.dot_curve(&up, 0) / &s.q[0][0];
                up[0] = -c;
                up
            };
            let lhs = t.intersect(&mat_vec(&push, &a), &mat_vec(&push, &b)).unwrap();
            let rhs = s.intersect(&pull(&a), &pull(&b)).unwrap();
            proptest::prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mmp_terminates_with_valid_steps(
            s in definite_config(),
            delta in proptest::collection::vec(0i64..=1, 4),
        ) {
            let r = s.rank();
            let t = s.run_mmp(&ivec(&delta[..r])).unwrap();
            proptest::prop_assert!(t.steps.len() <= r);
            t.check().unwrap();
        }
    }
}
