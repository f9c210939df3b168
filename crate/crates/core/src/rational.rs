//! Exact rational scalars and vectors.
//!
//! `Rat` is an arbitrary-precision rational kept in lowest terms with a
//! positive denominator. Vectors are plain `Vec<Rat>`; the lexicographic
//! `Ord` on them is the canonical vertex order used throughout the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type QVec = Vec<Rat>;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn qvec(values: &[(i64, i64)]) -> QVec {
    values.iter().map(|&(p, q)| rat(p, q)).collect()
}

pub fn ivec(values: &[i64]) -> QVec {
    values.iter().map(|&p| int(p)).collect()
}

/// Canonical `"p/q"` string.
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rat], s: &Rat) -> QVec {
    a.iter().map(|x| x * s).collect()
}

pub fn zeros(n: usize) -> QVec {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Vertex barycenter of a nonempty point list.
pub fn barycenter(points: &[QVec]) -> QVec {
    let n = points[0].len();
    let mut acc = zeros(n);
    for p in points {
        for (a, x) in acc.iter_mut().zip(p) {
            *a += x;
        }
    }
    let k = int(points.len() as i64);
    acc.iter().map(|x| x / &k).collect()
}

pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a nonzero vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let l = lcm_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn to_i64(x: &Rat) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn floor_i64(x: &Rat) -> i64 {
    x.floor().numer().to_i64().expect("value fits in i64")
}

pub fn ceil_i64(x: &Rat) -> i64 {
    x.ceil().numer().to_i64().expect("value fits in i64")
}

pub fn is_nonneg(x: &Rat) -> bool {
    !x.is_negative()
}

/// Serde adapters writing rationals as `"p/q"` strings. Integers in the input
/// are accepted as well.
pub mod serde_rat {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Str(String),
        Int(i64),
    }

    fn from_raw<E: de::Error>(raw: Raw) -> std::result::Result<Rat, E> {
        match raw {
            Raw::Str(s) => parse_rat(&s).map_err(E::custom),
            Raw::Int(i) => Ok(int(i)),
        }
    }

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        from_raw(Raw::deserialize(d)?)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&format_rat(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rat>, D::Error> {
            Vec::<Raw>::deserialize(d)?
                .into_iter()
                .map(from_raw)
                .collect()
        }
    }

    pub mod mat {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(
            m: &[Vec<Rat>],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(m.len()))?;
            for row in m {
                let row: Vec<String> = row.iter().map(format_rat).collect();
                seq.serialize_element(&row)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<Rat>>, D::Error> {
            Vec::<Vec<Raw>>::deserialize(d)?
                .into_iter()
                .map(|row| row.into_iter().map(from_raw).collect())
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(format_rat(&rat(2, -4)), "-1/2");
        assert_eq!(format_rat(&int(0)), "0/1");
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-7").unwrap(), int(-7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer(&qvec(&[(2, 3), (-4, 3), (0, 1)]));
        assert_eq!(v, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(0)]);
    }
}
