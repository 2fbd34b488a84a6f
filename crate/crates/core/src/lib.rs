//! Desk-scale numerical laboratory for Daugavet-type norm identities of
//! bounded (generally nonlinear) maps between finite-dimensional normed
//! spaces.
//!
//! The crate estimates sup norms over unit balls with certified lower
//! bounds, checks slice inclusions and slice-continuity relations, runs
//! the local `(Γ, 𝒲, Δ)` Daugavet tests with their witness pipelines, and
//! replays a registry of concrete scenarios with expected verdicts.

pub mod daugavet;
mod interval;
pub mod maps;
pub mod optim;
pub mod scalar;
pub mod scenario;
pub mod slices;
pub mod spaces;

pub use maps::{BoundedMap, MapError, MapTraits, ScalarMap};
pub use optim::{
    alt_defect, defect, sup_norm, sup_on_slice, AltDefectReport, DefectReport, DefectVerdict,
    NormEstimate, OptimError, Region,
};
pub use scalar::{ScalarField, UnitScalarGrid};
pub use spaces::{DualFunctional, Space, SpaceError, SpaceKind, Vector};
