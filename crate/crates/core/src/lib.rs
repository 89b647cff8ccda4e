//! Contact mechanics and grasp feasibility for soft-rigid hybrid gripper
//! fingers whose friction is tuned by inflating silicone pockets.
//!
//! A rigid finger carries a row of thin silicone membranes ("bulges").
//! Regulated air pressure bows each membrane outward; past the rim recess the
//! bulge touches the object first and Hertzian contact against the soft cap
//! takes over from hard rim contact. Because interfacial shear on soft rubber
//! scales with real contact area rather than load, the effective friction
//! coefficient rises with pressure — the gripper trades grip strength for
//! pressure on demand.
//!
//! The crate is organized bottom-up:
//!
//! * [`membrane`] — inflation mechanics of one pocket: pressure–height
//!   relation, spherical-cap geometry, protrusion past the rim.
//! * [`contact`] — pressure-stiffened Hertzian contact and the three-regime
//!   (rim / mixed / full-membrane) friction model.
//! * [`grasp`] — lift feasibility, inverse solvers (minimum force, minimum
//!   pressure) and grid sweeps.
//! * [`harness`] — a simulated plant (regulator, load cells, noise), the
//!   grasp protocol state machine, Monte Carlo trials, and measurement
//!   analysis (slide traces, roundness, success tables).
//! * [`config`] — plain-text configuration parsing and serialization.
//!
//! All quantities are SI: pascals, metres, newtons, kilograms, seconds.

pub mod config;
pub mod contact;
pub mod error;
pub mod grasp;
pub mod harness;
pub mod membrane;

mod solve;

pub use config::{load_config, parse_config, serialize_config, GraspDefaults, LoadedConfig, SweepDef};
pub use contact::{
    effective_modulus, hertz_area, hertz_indentation, hertz_load, resolve_contact, ContactRegime,
    ContactSolution,
};
pub use error::{Error, Result};
pub use grasp::{
    check_grasp, min_normal_force, min_pressure, sweep_grid, GraspProblem, GraspQuery,
    GraspVerdict, SweepCell,
};
pub use harness::analysis::{
    friction_from_trace, roundness_ratio, success_table, RateCell, SlideTrace, TraceSample,
    TraceWindow, TrialRecord,
};
pub use harness::plant::{voltage_to_pressure, PlantConfig};
pub use harness::protocol::{
    monte_carlo_success, monte_carlo_trials, run_grasp_protocol, GraspOutcome, GraspTranscript,
    ProtocolState, TranscriptStep,
};
pub use membrane::{
    bulge_height_exact, bulge_height_linear, bulge_pressure, resolve_bulge, spherical_cap_radius,
    BulgeMode, BulgeState, MembraneSpec,
};
