//! Exact computer algebra for Poisson structures: Schouten brackets,
//! Lichnerowicz–Poisson cohomology (affine and via Čech hypercohomology),
//! Maurer–Cartan solutions of finite-dimensional DGLAs, Jacobi complexes
//! and first-order deformations of affine Poisson schemes.
//!
//! Everything is computed over ℚ with no tolerances.

pub mod exact_algebra;
pub mod multivector;
pub mod random;
pub mod lp_affine;
pub mod cech_hyper;
pub mod dgla;
pub mod mc_solver;
pub mod jacobi;
pub mod poisson_scheme;
