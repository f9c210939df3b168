//! Exact polyhedral geometry: rational cones and polytopes.

pub mod cone;
pub mod polytope;

pub use cone::{Cone, LatticeCone};
pub use polytope::{HalfSpace, Polytope, PolytopeJson, Simplex};
