//! The covering `τ`, the lifted map `F`, the domains `Θ(R)` and `Σ_Q`, a quasi-conformal
//! approximate Fatou coordinate with exact Abel stepping, and sector extraction.

mod checks;
mod constants;
mod coord;
mod frame;
mod nearly;
mod regions;
mod sector;

pub use checks::{abel_report, fundamental_grid, random_valid_points, semiconjugacy_report, AbelOptions};
pub use constants::{fit_constants, ConstantEntry, ConstantsLedger, ConstantsProtocol, Provenance};
pub use coord::{BaseChoice, FatouFrame, FrameConfig, StripPoint};
pub use frame::{Lift, LiftEval, BRANCH_CUT_MARGIN, QUADRATIC_DOMAIN_RADIUS};
pub use nearly::{
    deviation, deviations, fit_near_translation, near_translation_report, Deviation, NearTranslationFit, PolarGrid,
    NEAR_TRANSLATION_BOUND,
};
pub use regions::{sigma_contains, theta_contains, SigmaStrip, ThetaSpec};
pub use sector::{SectorCloud, SectorKind, SectorSpec, CSHARP_TRUNCATION};

use crate::dynamics::DynError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FatouError {
    #[error("τ has a pole here (αw is an integer)")]
    PoleHit,
    #[error("logarithm argument within {margin:e} of the branch cut")]
    BranchCutHit { margin: f64 },
    #[error("τ(w) leaves the domain of the map")]
    DomainExit,
    #[error("no landing in the fundamental strip within {steps} steps")]
    Unreachable { steps: usize },
    #[error("inversion did not converge (residual {residual:e})")]
    InversionFailed { residual: f64 },
    #[error("Re ζ = {re} outside the image band [0, {right}]")]
    OutsideImageBand { re: f64, right: f64 },
    #[error("backward branch of the pullback could not be continued")]
    PullbackBranchLost,
    #[error("Fatou frames are built for the polynomial kinds only")]
    UnsupportedMap,
    #[error(transparent)]
    Dynamics(#[from] DynError),
}
