//! Complete toric surfaces from a fan, with divisors written over the
//! torus-invariant curves `D_ρ`. Sections of `D` are the lattice points of
//! `P_D = {u : <u, v_ρ> + D_ρ >= 0}`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::NumericalSurface;
use crate::error::{Error, Result};
use crate::geometry::{HalfSpace, Polytope};
use crate::monoid::ConeMonoid;
use crate::rational::{serde_rat, unit, QVec, Rat};

/// Rays in counterclockwise order. `canonical` overrides the class used as
/// `K`; without it `K = -sum D_ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricModel {
    pub rays: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub canonical: Option<QVec>,
}

mod opt_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<QVec>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strings: Option<Vec<String>> = v
            .as_ref()
            .map(|v| v.iter().map(crate::rational::format_rat).collect());
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<QVec>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "serde_rat::vec")] QVec);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

fn det(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl ToricModel {
    pub fn new(rays: Vec<[i64; 2]>, canonical: Option<QVec>) -> Result<ToricModel> {
        let t = ToricModel { rays, canonical };
        t.validate()?;
        Ok(t)
    }

    pub fn projective_plane() -> ToricModel {
        ToricModel::new(vec![[1, 0], [0, 1], [-1, -1]], None).expect("valid fan")
    }

    /// The Hirzebruch surface with a curve of self-intersection `-a`.
    pub fn hirzebruch(a: i64) -> ToricModel {
        ToricModel::new(vec![[1, 0], [0, 1], [-1, a], [0, -1]], None).expect("valid fan")
    }

    pub fn with_canonical(mut self, k: QVec) -> Result<ToricModel> {
        self.canonical = Some(k);
        self.validate()?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Complete, simplicial, counterclockwise, with primitive rays.
    pub fn validate(&self) -> Result<()> {
        let r = self.len();
        if r < 3 {
            return Err(Error::InvalidFan(
                "a complete fan needs at least three rays".into(),
            ));
        }
        for (i, v) in self.rays.iter().enumerate() {
            if gcd(v[0], v[1]) != 1 {
                return Err(Error::InvalidFan(format!("ray {i} is not primitive")));
            }
            if det(*v, self.rays[self.next(i)]) <= 0 {
                return Err(Error::InvalidFan(format!(
                    "rays {i} and {} do not span a strictly convex counterclockwise cone",
                    self.next(i)
                )));
            }
        }
        // Every turn is in (0, pi); together they must make exactly one revolution.
        let total: f64 = (0..r)
            .map(|i| {
                let (a, b) = (self.rays[i], self.rays[self.next(i)]);
                let dot = (a[0] * b[0] + a[1] * b[1]) as f64;
                (det(a, b) as f64).atan2(dot)
            })
            .sum();
        if (total / std::f64::consts::TAU).round() as i64 != 1 {
            return Err(Error::InvalidFan(
                "rays wind around the origin more than once".into(),
            ));
        }
        if let Some(k) = &self.canonical {
            if k.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: k.len(),
                });
            }
        }
        Ok(())
    }

    /// `D_ρ · D_σ` for all pairs.
    pub fn intersection_matrix(&self) -> Vec<QVec> {
        let r = self.len();
        let mut q = vec![vec![Rat::zero(); r]; r];
        for i in 0..r {
            let (p, n) = (self.prev(i), self.next(i));
            let d_next = det(self.rays[i], self.rays[n]);
            let d_prev = det(self.rays[p], self.rays[i]);
            let adj = Rat::new(1.into(), d_next.into());
            q[i][n] = adj.clone();
            q[n][i] = adj;
            q[i][i] = Rat::new(
                (-det(self.rays[p], self.rays[n])).into(),
                (d_prev * d_next).into(),
            );
        }
        q
    }

    /// `div(χ^u)` for `u = e_1, e_2`.
    pub fn principal_divisors(&self) -> Vec<QVec> {
        (0..2)
            .map(|c| {
                self.rays
                    .iter()
                    .map(|v| Rat::from_integer(v[c].into()))
                    .collect()
            })
            .collect()
    }

    pub fn canonical(&self) -> QVec {
        self.canonical
            .clone()
            .unwrap_or_else(|| vec![-Rat::from_integer(1.into()); self.len()])
    }

    pub fn surface(&self) -> NumericalSurface {
        let r = self.len();
        let mut effective: Vec<QVec> = (0..r).map(|i| unit(r, i)).collect();
        for p in self.principal_divisors() {
            effective.push(p.iter().map(|x| -x).collect());
            effective.push(p);
        }
        NumericalSurface::new(
            (0..r).map(|i| format!("D{i}")).collect(),
            self.intersection_matrix(),
            self.canonical(),
            effective,
            (0..r).map(|i| unit(r, i)).collect(),
        )
        .expect("toric data is consistent")
    }

    /// The fan with ray `j` removed, matching the numerical contraction of `D_j`.
    pub fn contract(&self, j: usize) -> Result<ToricModel> {
        if j >= self.len() || self.len() <= 3 {
            return Err(Error::NotContractible(j));
        }
        if det(self.rays[self.prev(j)], self.rays[self.next(j)]) <= 0 {
            return Err(Error::NotContractible(j));
        }
        let mut rays = self.rays.clone();
        rays.remove(j);
        let canonical = self.canonical.clone().map(|mut k| {
            k.remove(j);
            k
        });
        ToricModel::new(rays, canonical)
    }

    /// Section polygon of a divisor.
    pub fn polygon(&self, d: &[Rat]) -> Result<Polytope> {
        if d.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: d.len(),
            });
        }
        let hs: Vec<HalfSpace> = self
            .rays
            .iter()
            .zip(d)
            .map(|(v, c)| {
                HalfSpace::new(
                    vec![
                        Rat::from_integer(v[0].into()),
                        Rat::from_integer(v[1].into()),
                    ],
                    c.clone(),
                )
            })
            .collect::<Result<_>>()?;
        Polytope::from_halfspaces(2, &hs)
    }

    /// The monoid of `(m, u)` with `u` a section of `sum m_i D_i`; the
    /// divisors' fractional parts are rounded down implicitly.
    pub fn section_monoid(&self, divisors: &[QVec]) -> Result<ConeMonoid> {
        let n = divisors.len();
        let mut rows = Vec::with_capacity(self.len());
        for (rho, v) in self.rays.iter().enumerate() {
            let mut row: QVec = Vec::with_capacity(n + 2);
            for d in divisors {
                if d.len() != self.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.len(),
                        found: d.len(),
                    });
                }
                row.push(d[rho].clone());
            }
            row.push(Rat::from_integer(v[0].into()));
            row.push(Rat::from_integer(v[1].into()));
            rows.push(row);
        }
        ConeMonoid::from_inequalities(n, 2, &rows)
    }

    /// The adjoint monoid of a tuple of boundaries: sections of
    /// `sum m_i (K + Δ_i)`.
    pub fn adjoint_monoid(&self, boundaries: &[QVec]) -> Result<ConeMonoid> {
        let k = self.canonical();
        let divisors: Vec<QVec> = boundaries
            .iter()
            .map(|b| k.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        self.section_monoid(&divisors)
    }

    /// Whether every coefficient lies in `[0, 1]`.
    pub fn is_boundary(d: &[Rat]) -> bool {
        d.iter()
            .all(|c| !c.is_negative() && *c <= Rat::from_integer(1.into()))
    }
}
