//! Čech hypercohomology of the truncated Lichnerowicz–Poisson complex
//! `0 → T → ∧²T → … → ∧ⁿT → 0` (differential `[Λ,−]`) on a chart atlas.
//!
//! Every cochain is stored in the coordinates and frame of the reference
//! chart 0, so restriction maps are identities and δ is a plain alternating
//! sum. A component on `U_J` is admissible when, rewritten in chart `J[0]`,
//! it is polynomial in the variables not inverted on the overlap. Spaces are
//! cut to a Laurent window and dimensions are accepted once they agree at
//! windows W and W+1.

mod atlas;
mod complex;
mod generators;
mod ks;

pub use atlas::{Atlas, Chart, GluePair, GlueReport, GlueStatus};
pub use complex::{
    cech_row, global_sections, hp_cech, CechHyperComplex, HpCechResult, HyperCochain, Mode, SectionsResult, Stabilization,
    WindowedCohomology, WindowedComplex,
};
pub use generators::{hirzebruch, pn, pn_names};
pub use ks::{ks_class, KsClass};

use thiserror::Error;

use crate::exact_algebra::AlgebraError;
use crate::multivector::MultivectorError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CechError {
    #[error("malformed atlas: {0}")]
    Atlas(String),
    #[error("not a global field: {0}")]
    NotGlobal(String),
    #[error("bivectors do not glue on {0}")]
    NotGlued(String),
    #[error("the bivector is not Poisson")]
    NotPoisson,
    #[error("cochain does not fit the window {0}")]
    OutsideWindow(i32),
    #[error("cocycle condition fails: {0}")]
    Cocycle(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Multivector(#[from] MultivectorError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
