//! Simulated experiment pipeline.
//!
//! Replaces the physical rig with three pieces: a plant model
//! ([`plant`]: regulator voltage map, first-order pressure dynamics, sensor
//! noise), the force-thresholding grasp protocol run against that plant
//! ([`protocol`]), and analysis of recorded data ([`analysis`]: sliding
//! friction traces, trial aggregation, roundness).

pub mod analysis;
pub mod plant;
pub mod protocol;
