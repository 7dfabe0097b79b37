//! Exact invariant almost Hermitian geometry on generalized flag manifolds.
//!
//! The layers build on each other: [`rootsys`] (root systems in the Killing
//! normalization), [`flagspace`] (complementary roots, isotropy summands,
//! zero-sum triples), [`hermitian`] (metrics, almost complex structures,
//! tensor norms, Gray–Hervella classes), [`curvature`] (Riemannian and
//! Hermitian scalar curvatures) and [`solver`] (the equation `2s₁ − s = 0`).

pub mod curvature;
pub mod error;
pub mod exact;
pub mod flagspace;
pub mod hermitian;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod render;
pub mod reproduce;
pub mod rootsys;
pub mod scalar;
pub mod solver;
pub mod surd;
pub mod upoly;

pub use error::{Error, Result};
pub use exact::Q;
