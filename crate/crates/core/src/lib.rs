//! Numerical laboratory for near-parabolic renormalization of `e^{2πiα}z + z²` and the cubic
//! model `e^{2πiα}z(1+z)²`.
//!
//! * [`cf`]: nearest-integer continued fractions, Brjuno sums, product sequences.
//! * [`dynamics`]: map evaluation, fixed and critical points, the domain `U`, orbits, `𝔼xp`.
//! * [`fatou`]: the covering `τ`, the lift `F`, approximate Fatou coordinates and sectors.
//! * [`renorm`]: the renormalization return map, tower bookkeeping and the gate experiment.
//! * [`report`]: structured pass/fail records shared by all checks.

pub mod cf;
pub mod prec;
pub mod report;
pub mod dynamics;
pub mod fatou;
pub mod renorm;
