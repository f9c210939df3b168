//! Exact tools for finite generation of adjoint rings on surfaces.

pub mod corpus;
pub mod cover;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod monoid;
pub mod pipeline;
pub mod rational;
pub mod surface;

pub use error::{Error, Result};
pub use rational::{QVec, Rat};
