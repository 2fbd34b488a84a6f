//! Theorem-level procedures: rank-one characterizations with witness
//! extraction, quotient and local `(Γ, 𝒲, Δ)` Daugavet tests, the exposed
//! slice construction with its weakly-compact pipeline, certificate
//! searches via the finite max-min game, and the L¹ small-support
//! machinery.
//!
//! Every verdict here carries a witness that re-verifies its defining
//! inequalities by direct evaluation; no stored values are trusted.

mod exposed;
mod kyfan;
mod l1;
mod local;
mod pipeline;
mod quotient;
mod witness;

pub use exposed::{exposed_slice, ExposedSlice};
pub use kyfan::{
    hull_distance_test, kyfan_certificate_search, kyfan_inequality_sample, CertificateOutcome,
    CertificateProblem, ConsequenceCheck, HullDistanceReport, KyFanSampleReport,
};
pub use l1::{
    admissibility_check, l1_small_support_witness, AdmissibilityReport, AdmissibilityVerdict,
    L1Witness, L1WitnessOutcome,
};
pub use local::{
    local_daugavet_check, small_image_check, theorem_t1_pipeline, LocalCell, LocalContext,
    LocalTable, LocalVerdict, NormDetermination, SmallImageVerdict, T1Outcome, T1Params, T1Report,
};
pub use pipeline::{
    weakly_compact_pipeline, PipelineMode, PipelineOutcome, PipelineParams, PipelineReport,
};
pub use quotient::{quotient_check, QuotientVerdict};
pub use witness::{
    certify_from_witness, extract_alt_witness, extract_witness, AltWitness, AltWitnessOutcome,
    CharacterizationWitness, WitnessOutcome,
};

use crate::maps::MapError;
use crate::optim::OptimError;
use crate::slices::SliceError;
use crate::spaces::SpaceError;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum DaugavetError {
    #[error("the perturbation direction y must be nonzero")]
    ZeroVector,
    #[error("stale witness: {0}")]
    StaleWitness(String),
    #[error("no exposed point: every hull point has norm <= {0}")]
    NoExposedPoint(f64),
    #[error("wrong domain: {0}")]
    WrongDomain(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("inverse oracle violated its contract: {0}")]
    OracleViolation(String),
    #[error("hull is empty")]
    EmptyHull,
    #[error(transparent)]
    Optim(#[from] OptimError),
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}
