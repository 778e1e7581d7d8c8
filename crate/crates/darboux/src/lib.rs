//! Exact desk-scale machinery for covering closed symplectic manifolds by
//! Darboux charts: lattice cube covers, a planar cube-transport planner,
//! Hamiltonian translation and displacement kernels, and the covering-number
//! calculus with its catalog of manifold families.

pub mod catalog;
pub mod geometry;
pub mod hamiltonian;
pub mod invariants;
pub mod lattice_cover;
pub mod par;
pub mod transport;

pub use par::Exec;
