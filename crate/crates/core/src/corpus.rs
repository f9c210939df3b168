//! Seeded random instances for property checks and the `--seed` flag.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cover::CoverInput;
use crate::error::Result;
use crate::geometry::{HalfSpace, Polytope};
use crate::rational::{rat, QVec};

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    Rng8::seed_from_u64(seed)
}

fn point(rng: &mut Rng8, n: usize, den: i64) -> QVec {
    (0..n)
        .map(|_| rat(rng.gen_range(-4 * den..=4 * den), den))
        .collect()
}

/// A full-dimensional polytope in `Q^n` with between `lo` and `hi` vertices.
pub fn polytope_with_vertices(rng: &mut Rng8, n: usize, lo: usize, hi: usize) -> Result<Polytope> {
    loop {
        let target = rng.gen_range(lo..=hi);
        let pts: Vec<QVec> = (0..target + 2)
            .map(|_| {
                let den = rng.gen_range(1..=3);
                point(rng, n, den)
            })
            .collect();
        let p = Polytope::convex_hull(&pts)?;
        if p.dim() == Some(n) && (lo..=hi).contains(&p.vertices().len()) {
            return Ok(p);
        }
    }
}

/// A polygon `C` and parts whose union is a convex polygon inside it: two
/// pieces of a polygon cut by a line, sometimes with the cutting segment
/// added as a lower-dimensional part.
pub fn cover_instance(rng: &mut Rng8) -> Result<CoverInput> {
    loop {
        let c = polytope_with_vertices(rng, 2, 3, 6)?;
        let verts = c.vertices().to_vec();
        // A sub-polygon: hull of random convex combinations of C's vertices.
        let pts: Vec<QVec> = (0..rng.gen_range(3..=5))
            .map(|_| {
                let w: Vec<i64> = verts.iter().map(|_| rng.gen_range(0..=3)).collect();
                let total: i64 = w.iter().sum::<i64>().max(1);
                (0..2)
                    .map(|k| {
                        verts
                            .iter()
                            .zip(&w)
                            .map(|(v, &x)| &v[k] * rat(x, total))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let d = Polytope::convex_hull(&pts)?;
        if d.dim() != Some(2) {
            continue;
        }
        let Some(centre) = d.barycenter() else {
            continue;
        };
        let normal = vec![rat(rng.gen_range(-3..=3), 1), rat(rng.gen_range(-3..=3), 1)];
        if normal.iter().all(|x| *x == rat(0, 1)) {
            continue;
        }
        let offset = -crate::rational::dot(&normal, &centre);
        let h = HalfSpace::new(normal, offset)?;
        let mut parts = vec![
            d.intersect_halfspace(&h)?,
            d.intersect_halfspace(&h.flipped())?,
        ];
        if rng.gen_bool(0.5) {
            parts.push(parts[0].intersect(&parts[1])?);
        }
        if parts.iter().any(|p| p.is_empty()) {
            continue;
        }
        return Ok(CoverInput {
            polytope: c.to_json(),
            parts: parts.iter().map(Polytope::to_json).collect(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_instances_are_reproducible() {
        let a = cover_instance(&mut rng(7)).unwrap();
        let b = cover_instance(&mut rng(7)).unwrap();
        assert_eq!(a, b);
        let p = polytope_with_vertices(&mut rng(3), 3, 5, 8).unwrap();
        assert!((5..=8).contains(&p.vertices().len()));
    }
}
