//! Decompositions of symplectic-spinor-valued exterior forms over
//! `sp(2l, ℂ)`, together with exact formal-character machinery that
//! verifies each decomposition independently.

pub mod charpoly;
pub mod cli;
pub mod derham;
pub mod error;
pub mod guards;
pub mod findim;
pub mod half;
pub mod reference;
pub mod report;
pub mod spinor_decomp;
pub mod weights;
pub mod weyl;

pub use error::{Error, Result};
pub use half::Half;
pub use weights::Weight;
