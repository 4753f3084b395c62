//! Near-parabolic renormalization evaluated through the approximate Fatou coordinate,
//! rotation-number measurement, sector-count bookkeeping for the renormalization tower,
//! and the critical-orbit gate experiment.

mod gate;
mod tower;
mod transit;

pub use gate::{
    critical_gate_experiment, critical_orbit_min, gate_diameter_bound, GateCase, GateOptions, GateRecord, GateReport,
};
pub use tower::{sector_count, sector_count_check, SectorCount, TowerLedger, TowerLevel, Transfer};
pub use transit::{
    multiplier_secant, renormalize, return_window_report, rotation_number_estimate, LinearStub, MultiplierSecant,
    RenormMap, RenormOptions, RenormResult, RotationEstimate, RotationSource, VALIDATION_RADII,
};

use crate::cf::CfError;
use crate::fatou::FatouError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum RenormError {
    #[error("no return to the fundamental band within {steps} steps")]
    NoReturn { steps: usize },
    #[error("|ζ| = {radius:e} exceeds the validated radius {validated:e}")]
    DiskTooLarge { radius: f64, validated: f64 },
    #[error("ζ = 0 is the fixed point and has no lift")]
    ZeroInput,
    #[error(transparent)]
    Fatou(#[from] FatouError),
    #[error(transparent)]
    Cf(#[from] CfError),
}
