//! The implemented map family, fixed and critical points, the domain `U`, orbits and `𝔼xp`.

mod domain;
mod expmap;
mod map;
mod orbit;

pub use domain::{cubic_p, DomainU, DEFAULT_MASK_RESOLUTION};
pub use expmap::{exp_lift, exp_project, exp_project_plain};
pub use map::{MapKind, MapSpec};
pub use orbit::{orbit, OrbitRecord};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DynError {
    #[error("α is an integer: σ merges with the fixed point 0")]
    ParabolicCase,
    #[error("0 has no preimage under 𝔼xp")]
    ZeroNotInImage,
    #[error("point outside the validated disk of radius {radius}")]
    OutsideDomain { radius: f64 },
    #[error("not available for this map kind: {0}")]
    Unsupported(&'static str),
    #[error("renormalization evaluation failed: {0}")]
    Renorm(String),
}
