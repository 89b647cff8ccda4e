//! Quasi-static grasp feasibility and inverse solvers.
//!
//! A grasp of an object of mass `m` held by `contacts` identical fingers,
//! each squeezing with normal force `N` at inflation pressure `p`, is
//! feasible when the summed tangential capacity covers the weight:
//!
//! ```text
//! capacity(N, p) = contacts * friction_force(N, p)
//! demand         = m * gravity * safety_factor
//! feasible      <=> capacity >= demand          (ties feasible)
//! ```
//!
//! At fixed pressure the capacity never decreases with load (rising through
//! full-membrane contact as `N^(2/3)`, then linearly once the rim shares the
//! load), which makes the minimum-force problem a bracketed root find. The
//! minimum-pressure problem scans the regulator range for the first feasible
//! interval and refines it by bisection.

use crate::contact::{hertz_load, resolve_contact, ContactRegime};
use crate::error::{Error, Result};
use crate::membrane::{resolve_bulge, BulgeMode, MembraneSpec};
use std::f64::consts::PI;

/// Standard gravity used by the default constructors, m/s^2.
pub const STANDARD_GRAVITY: f64 = 9.81;

/// Default number of fingers in contact.
pub const DEFAULT_CONTACTS: u32 = 2;

/// Default number of pockets per finger groove row.
pub const DEFAULT_BULGES: u32 = 3;

/// A fully specified grasp instance: payload plus actuation set-point.
#[derive(Debug, Clone, PartialEq)]
pub struct GraspQuery {
    /// Payload mass, kg.
    pub mass: f64,
    /// Gravitational acceleration, m/s^2.
    pub gravity: f64,
    /// Number of fingers in contact with the object.
    pub contacts: u32,
    /// Pockets per finger sharing the normal load.
    pub bulges: u32,
    /// Normal force applied by each finger, N.
    pub normal_force: f64,
    /// Inflation pressure, Pa.
    pub pressure: f64,
    /// Multiplier on the weight demand; 1.0 means bare weight.
    pub safety_factor: f64,
}

impl GraspQuery {
    /// Query with conventional defaults: two fingers, three pockets each,
    /// standard gravity, no extra safety margin.
    pub fn new(mass: f64, normal_force: f64, pressure: f64) -> Self {
        GraspQuery {
            mass,
            gravity: STANDARD_GRAVITY,
            contacts: DEFAULT_CONTACTS,
            bulges: DEFAULT_BULGES,
            normal_force,
            pressure,
            safety_factor: 1.0,
        }
    }

    /// The payload-side parameters of this query.
    pub fn problem(&self) -> GraspProblem {
        GraspProblem {
            mass: self.mass,
            gravity: self.gravity,
            contacts: self.contacts,
            bulges: self.bulges,
            safety_factor: self.safety_factor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.problem().validate()?;
        if !(self.normal_force.is_finite() && self.normal_force >= 0.0) {
            return Err(Error::Domain {
                op: "GraspQuery",
                message: format!(
                    "normal_force must be non-negative and finite, got {}",
                    self.normal_force
                ),
            });
        }
        if !(self.pressure.is_finite() && self.pressure >= 0.0) {
            return Err(Error::Domain {
                op: "GraspQuery",
                message: format!("pressure must be non-negative and finite, got {}", self.pressure),
            });
        }
        Ok(())
    }
}

/// A grasp problem with the actuation set-point left open: what the inverse
/// solvers and sweeps iterate over.
#[derive(Debug, Clone, PartialEq)]
pub struct GraspProblem {
    pub mass: f64,
    pub gravity: f64,
    pub contacts: u32,
    pub bulges: u32,
    pub safety_factor: f64,
}

impl GraspProblem {
    pub fn new(mass: f64) -> Self {
        GraspProblem {
            mass,
            gravity: STANDARD_GRAVITY,
            contacts: DEFAULT_CONTACTS,
            bulges: DEFAULT_BULGES,
            safety_factor: 1.0,
        }
    }

    /// Close the problem over a concrete set-point.
    pub fn query(&self, normal_force: f64, pressure: f64) -> GraspQuery {
        GraspQuery {
            mass: self.mass,
            gravity: self.gravity,
            contacts: self.contacts,
            bulges: self.bulges,
            normal_force,
            pressure,
            safety_factor: self.safety_factor,
        }
    }

    /// Weight-side demand in newtons: `mass * gravity * safety_factor`.
    pub fn demand(&self) -> f64 {
        self.mass * self.gravity * self.safety_factor
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass >= 0.0) {
            return Err(Error::Domain {
                op: "GraspProblem",
                message: format!("mass must be non-negative and finite, got {}", self.mass),
            });
        }
        if !(self.gravity.is_finite() && self.gravity > 0.0) {
            return Err(Error::Domain {
                op: "GraspProblem",
                message: format!("gravity must be positive and finite, got {}", self.gravity),
            });
        }
        if self.contacts == 0 {
            return Err(Error::Domain {
                op: "GraspProblem",
                message: "contacts must be at least 1".into(),
            });
        }
        if self.bulges == 0 {
            return Err(Error::Domain {
                op: "GraspProblem",
                message: "bulges must be at least 1".into(),
            });
        }
        if !(self.safety_factor.is_finite() && self.safety_factor > 0.0) {
            return Err(Error::Domain {
                op: "GraspProblem",
                message: format!(
                    "safety_factor must be positive and finite, got {}",
                    self.safety_factor
                ),
            });
        }
        Ok(())
    }
}

/// Outcome of a feasibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct GraspVerdict {
    /// `capacity >= demand`; ties count as feasible.
    pub feasible: bool,
    /// Total tangential capacity across all contacts, N.
    pub capacity: f64,
    /// Weight-side demand, N.
    pub demand: f64,
    /// `capacity - demand`, N.
    pub margin: f64,
    /// Contact regime at the queried set-point.
    pub regime: ContactRegime,
}

/// One cell of a feasibility sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub normal_force: f64,
    pub pressure: f64,
    pub verdict: GraspVerdict,
}

/// Check whether a fully specified grasp holds the payload.
pub fn check_grasp(q: &GraspQuery, spec: &MembraneSpec) -> Result<GraspVerdict> {
    q.validate()?;
    let sol = resolve_contact(q.normal_force, q.pressure, spec, q.bulges)?;
    let capacity = q.contacts as f64 * sol.friction_force;
    let demand = q.problem().demand();
    let margin = capacity - demand;
    Ok(GraspVerdict {
        feasible: margin >= 0.0,
        capacity,
        demand,
        margin,
        regime: sol.regime,
    })
}

fn capacity_at(prob: &GraspProblem, n: f64, p: f64, spec: &MembraneSpec) -> Result<f64> {
    let sol = resolve_contact(n, p, spec, prob.bulges)?;
    Ok(prob.contacts as f64 * sol.friction_force)
}

/// Smallest per-finger normal force that makes the grasp feasible at the
/// given pressure, or `None` when the capacity is bounded below the demand
/// (e.g. frictionless rim with a short bulge).
///
/// The capacity curve is monotone in load, so after seeding the bracket with
/// the closed-form full-membrane/rim inversions the answer is refined by
/// bisection; the returned force sits on the feasible side of the boundary,
/// within 1e-6 N (or 1 part in 1e4 for sub-millinewton answers).
pub fn min_normal_force(
    prob: &GraspProblem,
    pressure: f64,
    spec: &MembraneSpec,
) -> Result<Option<f64>> {
    prob.validate()?;
    let demand = prob.demand();
    if demand <= 0.0 {
        return Ok(Some(0.0));
    }

    let state = resolve_bulge(pressure, spec, BulgeMode::Exact)?;
    let s = state.protrusion;
    let contacts = prob.contacts as f64;
    let bulges = prob.bulges as f64;
    let e_star = crate::contact::effective_modulus(pressure, spec);

    // Upper bound of the capacity as load grows without limit. With rim
    // friction present the mixed branch grows linearly forever; without it
    // the membrane contribution saturates once the rim carries the surplus.
    let mut hi = match state.cap_radius {
        Some(radius) if s > 0.0 => {
            let saturation_load = bulges * hertz_load(s, e_star, radius);
            let saturation_capacity =
                contacts * bulges * spec.shear_strength * PI * radius * s;
            if spec.rim_friction == 0.0 && demand > saturation_capacity {
                return Ok(None);
            }
            // Closed-form full-membrane inversion as a bracket seed:
            // capacity = contacts * bulges * tau * pi * (3 n_b R / (4E*))^(2/3).
            let beta = demand / (contacts * bulges * spec.shear_strength * PI);
            let full_seed = beta.powf(1.5) * 4.0 * e_star * bulges / (3.0 * radius);
            if demand <= saturation_capacity {
                full_seed.min(saturation_load).max(f64::MIN_POSITIVE)
            } else {
                // Rim picks up the shortfall past saturation.
                saturation_load
                    + (demand - saturation_capacity) / (contacts * spec.rim_friction)
            }
        }
        _ => {
            if spec.rim_friction == 0.0 {
                return Ok(None);
            }
            demand / (contacts * spec.rim_friction)
        }
    };

    // The seeds land on the boundary analytically; expand until the top of
    // the bracket is strictly feasible.
    let mut guard = 0;
    while capacity_at(prob, hi, pressure, spec)? < demand {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Ok(None);
        }
    }

    let mut lo = 0.0_f64;
    for _ in 0..200 {
        let tol = 1.0e-6_f64.min(1.0e-4 * hi);
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if capacity_at(prob, mid, pressure, spec)? >= demand {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Number of intervals in the coarse feasibility scan of `min_pressure`.
const PRESSURE_SCAN_STEPS: usize = 256;

/// Smallest regulator pressure in `[0, cap_pressure]` that makes the grasp
/// feasible at the given per-finger force, or `None` when even a fully
/// inflated pocket cannot hold the payload.
///
/// A 256-interval scan brackets the first feasible interval, then bisection
/// tightens it to 1 Pa; the returned pressure sits on the feasible side.
pub fn min_pressure(
    prob: &GraspProblem,
    normal_force: f64,
    spec: &MembraneSpec,
) -> Result<Option<f64>> {
    prob.validate()?;
    let demand = prob.demand();
    if demand <= 0.0 || capacity_at(prob, normal_force, 0.0, spec)? >= demand {
        return Ok(Some(0.0));
    }

    let p_cap = spec.cap_pressure();
    let feasible = |p: f64| -> Result<bool> {
        Ok(capacity_at(prob, normal_force, p, spec)? >= demand)
    };

    let mut bracket = None;
    let mut prev = 0.0;
    for i in 1..=PRESSURE_SCAN_STEPS {
        let p = p_cap * i as f64 / PRESSURE_SCAN_STEPS as f64;
        if feasible(p)? {
            bracket = Some((prev, p));
            break;
        }
        prev = p;
    }
    let (mut lo, mut hi) = match bracket {
        Some(b) => b,
        None => return Ok(None),
    };

    for _ in 0..200 {
        if hi - lo <= 1.0 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Evaluate feasibility over the cross product of sorted force and pressure
/// grids. Cells are emitted row-major: forces outermost, pressures inner.
pub fn sweep_grid(
    prob: &GraspProblem,
    n_values: &[f64],
    p_values: &[f64],
    spec: &MembraneSpec,
) -> Result<Vec<SweepCell>> {
    prob.validate()?;
    check_grid("n_values", n_values)?;
    check_grid("p_values", p_values)?;
    let mut cells = Vec::with_capacity(n_values.len() * p_values.len());
    for &n in n_values {
        for &p in p_values {
            let verdict = check_grasp(&prob.query(n, p), spec)?;
            cells.push(SweepCell {
                normal_force: n,
                pressure: p,
                verdict,
            });
        }
    }
    Ok(cells)
}

fn check_grid(name: &'static str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Domain {
            op: "sweep_grid",
            message: format!("{name} must be non-empty"),
        });
    }
    for w in values.windows(2) {
        // Negated `<` instead of `>=` so a NaN entry fails the check.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(w[0] < w[1]) {
            return Err(Error::Domain {
                op: "sweep_grid",
                message: format!("{name} must be strictly ascending, got {} then {}", w[0], w[1]),
            });
        }
    }
    if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::Domain {
            op: "sweep_grid",
            message: format!("{name} entries must be non-negative and finite"),
        });
    }
    Ok(())
}
