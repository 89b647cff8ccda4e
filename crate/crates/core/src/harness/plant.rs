//! Simulated hardware parameters: the pneumatic regulator and the sensors.
//!
//! The real rig drives a proportional regulator with a 0–5 V analogue signal
//! mapped linearly onto 0–500 kPa, reads fingertip normal force from load
//! cells, and observes grasp outcomes. Here the regulator is a first-order
//! lag, the load cell carries additive Gaussian noise, and the realized
//! friction capacity carries multiplicative noise; everything else is exact.

use crate::error::{Error, Result};

/// Everything the simulated plant needs: actuator map, dynamics, noise
/// magnitudes, protocol timing, and the RNG seed.
///
/// The timing parameters (closing speed, hold/lift/transport durations,
/// transport demand factor) have no measured counterparts; the defaults are
/// round numbers chosen so a trial lasts about a second of simulated time.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantConfig {
    /// Regulator map slope, Pa/V; 1e5 puts 5 V at 500 kPa.
    pub volts_to_pascals: f64,
    /// First-order regulator time constant, s.
    pub pressure_tau: f64,
    /// Load-cell additive Gaussian noise std, N.
    pub loadcell_sigma: f64,
    /// Multiplicative noise std on friction capacity, dimensionless.
    pub mu_sigma: f64,
    /// Simulation step, s.
    pub timestep: f64,
    /// Base RNG seed; trial k runs on stream k of this seed.
    pub seed: u64,
    /// Commanded-force ramp rate while closing, N/s.
    pub close_rate: f64,
    /// Dwell after the force threshold is reached, s.
    pub hold_time: f64,
    /// Duration of the vertical lift, s.
    pub lift_time: f64,
    /// Duration of the transport move, s.
    pub transport_time: f64,
    /// Demand multiplier during transport; >1 makes slips reachable.
    pub transport_factor: f64,
}

impl Default for PlantConfig {
    fn default() -> Self {
        PlantConfig {
            volts_to_pascals: 1.0e5,
            pressure_tau: 0.05,
            loadcell_sigma: 0.02,
            mu_sigma: 0.05,
            timestep: 0.01,
            seed: 0,
            close_rate: 10.0,
            hold_time: 0.2,
            lift_time: 0.3,
            transport_time: 0.5,
            transport_factor: 1.1,
        }
    }
}

impl PlantConfig {
    /// Deterministic variant: both noise sources off and the transport
    /// demand factor neutralized, so a trial reduces exactly to the static
    /// feasibility check.
    pub fn zero_noise(&self) -> Self {
        PlantConfig {
            loadcell_sigma: 0.0,
            mu_sigma: 0.0,
            transport_factor: 1.0,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, f64); 3] = [
            ("volts_to_pascals", self.volts_to_pascals),
            ("timestep", self.timestep),
            ("close_rate", self.close_rate),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Validation {
                    field: field.to_string(),
                    message: format!("must be positive and finite, got {v}"),
                });
            }
        }
        let non_negative: [(&'static str, f64); 6] = [
            ("pressure_tau", self.pressure_tau),
            ("loadcell_sigma", self.loadcell_sigma),
            ("mu_sigma", self.mu_sigma),
            ("hold_time", self.hold_time),
            ("lift_time", self.lift_time),
            ("transport_time", self.transport_time),
        ];
        for (field, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Validation {
                    field: field.to_string(),
                    message: format!("must be non-negative and finite, got {v}"),
                });
            }
        }
        if !(self.transport_factor.is_finite() && self.transport_factor > 0.0) {
            return Err(Error::Validation {
                field: "transport_factor".to_string(),
                message: format!(
                    "must be positive and finite, got {}",
                    self.transport_factor
                ),
            });
        }
        Ok(())
    }
}

/// Regulator command map: pressure = slope * volts, exact and linear over
/// the 0–5 V command range.
pub fn voltage_to_pressure(volts: f64, cfg: &PlantConfig) -> Result<f64> {
    cfg.validate()?;
    if !(volts.is_finite() && (0.0..=5.0).contains(&volts)) {
        return Err(Error::Domain {
            op: "voltage_to_pressure",
            message: format!("command voltage must lie in [0, 5] V, got {volts}"),
        });
    }
    Ok(cfg.volts_to_pascals * volts)
}
