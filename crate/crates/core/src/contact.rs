//! Pressure-stiffened Hertzian contact and regime-dependent friction.
//!
//! A pressurized bulge pressed on a flat object is treated as a Hertzian
//! sphere-on-flat contact with an effective modulus that stiffens linearly
//! with inflation pressure:
//!
//! ```text
//! E*(p)   = E0 * (1 + eta * p)
//! delta   = ( 3N / (4 E* sqrt(R)) )^(2/3)        indentation under load N
//! a_c     = ( 3NR / (4 E*) )^(1/3)               contact circle radius
//! A       = pi * a_c^2 = pi * (3NR / (4 E*))^(2/3)
//! ```
//!
//! (the identity `a_c^2 = R * delta` ties the two together). Following the
//! adhesion model of elastic friction (Archard), the tangential capacity of
//! soft contact is interfacial shear strength times real contact area,
//! `F_f = tau_s * A`, which grows like `N^(2/3)`; dividing by `N` gives a
//! load-dependent friction coefficient `mu = tau_s * A / N ~ N^(-1/3)`.
//!
//! Which surface carries the object depends on how far the bulge leads the
//! rim (protrusion `s`) compared with how deep the membrane would indent
//! under the full load (`delta_full`):
//!
//! * `s <= 0` — **rim only**: hard rim contact, plain Coulomb friction.
//! * `0 < s < delta_full` — **mixed**: the membrane compresses by exactly
//!   the protrusion and carries the matching Hertzian load, the rim carries
//!   the remainder.
//! * `s >= delta_full` — **full membrane**: the bulge absorbs the entire
//!   load before the rim can touch.
//!
//! The per-finger normal load is shared equally by `bulges` identical
//! pockets; areas and forces reported here are per-finger totals.

use crate::error::{Error, Result};
use crate::membrane::{resolve_bulge, BulgeMode, MembraneSpec};
use std::f64::consts::PI;

/// Which surfaces carry the normal load.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactRegime {
    RimOnly,
    Mixed,
    FullMembrane,
}

impl ContactRegime {
    /// Stable lower-case tag used in CSV/JSON output.
    pub fn tag(&self) -> &'static str {
        match self {
            ContactRegime::RimOnly => "rim_only",
            ContactRegime::Mixed => "mixed",
            ContactRegime::FullMembrane => "full_membrane",
        }
    }
}

/// Resolved contact state of one finger against a flat object face.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactSolution {
    pub regime: ContactRegime,
    /// Effective contact modulus at this pressure, Pa.
    pub effective_modulus: f64,
    /// Indentation of one membrane under its share of the load, m.
    pub indentation: f64,
    /// Portion of the finger load carried by the membranes, N.
    pub membrane_load: f64,
    /// Portion of the finger load carried by the rim, N.
    pub rim_load: f64,
    /// Total real membrane contact area across all bulges, m^2.
    pub contact_area: f64,
    /// Tangential (friction) capacity of the finger, N.
    pub friction_force: f64,
    /// `friction_force / load`; defined as 0 at zero load.
    pub mu_eff: f64,
}

/// Pressure-stiffened effective modulus `E*(p) = E0 * (1 + eta * p)`.
///
/// Callers guarantee `p >= 0` (enforced by [`resolve_contact`]).
pub fn effective_modulus(pressure: f64, spec: &MembraneSpec) -> f64 {
    spec.contact_modulus * (1.0 + spec.stiffening * pressure)
}

fn check_hertz_args(op: &'static str, load: f64, e_star: f64, radius: f64) -> Result<()> {
    if !(load.is_finite() && load >= 0.0) {
        return Err(Error::Domain {
            op,
            message: format!("load must be non-negative and finite, got {load}"),
        });
    }
    if !(e_star.is_finite() && e_star > 0.0) {
        return Err(Error::Domain {
            op,
            message: format!("effective modulus must be positive, got {e_star}"),
        });
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Domain {
            op,
            message: format!("cap radius must be positive, got {radius}"),
        });
    }
    Ok(())
}

/// Hertz indentation of a sphere of radius `radius` pressed with `load`:
/// `delta = (3N / (4 E* sqrt(R)))^(2/3)`.
pub fn hertz_indentation(load: f64, e_star: f64, radius: f64) -> Result<f64> {
    check_hertz_args("hertz_indentation", load, e_star, radius)?;
    Ok((3.0 * load / (4.0 * e_star * radius.sqrt())).powf(2.0 / 3.0))
}

/// Real contact area of the same contact: `A = pi * (3NR / (4 E*))^(2/3)`.
pub fn hertz_area(load: f64, e_star: f64, radius: f64) -> Result<f64> {
    check_hertz_args("hertz_area", load, e_star, radius)?;
    Ok(PI * (3.0 * load * radius / (4.0 * e_star)).powf(2.0 / 3.0))
}

/// Inverse Hertz relation: load that produces a given indentation,
/// `N = (4/3) E* sqrt(R) * delta^(3/2)`. Zero for non-positive indentation.
pub fn hertz_load(indentation: f64, e_star: f64, radius: f64) -> f64 {
    if indentation <= 0.0 {
        return 0.0;
    }
    (4.0 / 3.0) * e_star * radius.sqrt() * indentation.powf(1.5)
}

/// Split `total` into membrane and rim shares so the reported pair sums back
/// to `total` exactly in floating point. Whichever share is at least half of
/// `total` makes its complement exact by Sterbenz's lemma, so the smaller
/// share is replaced with that exact complement and `membrane + rim ==
/// total` holds bitwise.
fn split_load(total: f64, membrane_raw: f64) -> (f64, f64) {
    let membrane = membrane_raw.clamp(0.0, total);
    let rim = total - membrane;
    if membrane >= rim {
        // membrane >= total/2, so the subtraction above was already exact.
        (membrane, rim)
    } else {
        // rim >= total/2, so this complement is exact even though the first
        // subtraction may have rounded.
        (total - rim, rim)
    }
}

/// Resolve regime, load split, contact area and friction capacity for one
/// finger pressing with `load` newtons at inflation pressure `pressure`,
/// its groove row holding `bulges` identical pockets.
pub fn resolve_contact(
    load: f64,
    pressure: f64,
    spec: &MembraneSpec,
    bulges: u32,
) -> Result<ContactSolution> {
    if !(load.is_finite() && load >= 0.0) {
        return Err(Error::Domain {
            op: "resolve_contact",
            message: format!("load must be non-negative and finite, got {load}"),
        });
    }
    if !(pressure.is_finite() && pressure >= 0.0) {
        return Err(Error::Domain {
            op: "resolve_contact",
            message: format!("pressure must be non-negative and finite, got {pressure}"),
        });
    }
    if bulges == 0 {
        return Err(Error::Domain {
            op: "resolve_contact",
            message: "bulge count must be at least 1".into(),
        });
    }

    let state = resolve_bulge(pressure, spec, BulgeMode::Exact)?;
    let e_star = effective_modulus(pressure, spec);
    let s = state.protrusion;

    let mu_of = |friction: f64| if load > 0.0 { friction / load } else { 0.0 };

    // Rim leads (or membrane still flat): hard contact only.
    let radius = match state.cap_radius {
        Some(r) if s > 0.0 => r,
        _ => {
            let friction = spec.rim_friction * load;
            return Ok(ContactSolution {
                regime: ContactRegime::RimOnly,
                effective_modulus: e_star,
                indentation: 0.0,
                membrane_load: 0.0,
                rim_load: load,
                contact_area: 0.0,
                friction_force: friction,
                mu_eff: mu_of(friction),
            });
        }
    };

    let n_bulge = load / bulges as f64;
    let delta_full = hertz_indentation(n_bulge, e_star, radius)?;

    if s >= delta_full {
        // Bulges swallow the whole load before the rim touches.
        let area_bulge = hertz_area(n_bulge, e_star, radius)?;
        let area = bulges as f64 * area_bulge;
        let friction = spec.shear_strength * area;
        return Ok(ContactSolution {
            regime: ContactRegime::FullMembrane,
            effective_modulus: e_star,
            indentation: delta_full,
            membrane_load: load,
            rim_load: 0.0,
            contact_area: area,
            friction_force: friction,
            mu_eff: mu_of(friction),
        });
    }

    // Mixed: each membrane is compressed by exactly the protrusion and
    // carries the Hertzian load matching that indentation (capped at its
    // share); the rim takes the rest.
    let n_mem_bulge = hertz_load(s, e_star, radius).min(n_bulge);
    let area_bulge = hertz_area(n_mem_bulge, e_star, radius)?;
    let area = bulges as f64 * area_bulge;
    let (membrane_load, rim_load) = split_load(load, bulges as f64 * n_mem_bulge);
    let friction = spec.shear_strength * area + spec.rim_friction * rim_load;
    Ok(ContactSolution {
        regime: ContactRegime::Mixed,
        effective_modulus: e_star,
        indentation: s,
        membrane_load,
        rim_load,
        contact_area: area,
        friction_force: friction,
        mu_eff: mu_of(friction),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> MembraneSpec {
        MembraneSpec::reference()
    }

    #[test]
    fn effective_modulus_hand_check() {
        // E0 = 1e5 Pa, eta = 2e-6 /Pa, p = 1e5 Pa -> E* = 1.2e5 Pa.
        let mut s = spec();
        s.contact_modulus = 1.0e5;
        s.stiffening = 2.0e-6;
        assert_relative_eq!(effective_modulus(1.0e5, &s), 1.2e5, max_relative = 1e-12);
        assert_relative_eq!(
            effective_modulus(0.0, &s),
            s.contact_modulus,
            max_relative = 1e-15
        );
    }

    #[test]
    fn hertz_indentation_hand_check() {
        // N = 3 N, E* = 1 MPa, R = 0.02 m:
        //   delta = (9 / (4e6 * sqrt(0.02)))^(2/3) ~= 6.32574e-4 m.
        let d = hertz_indentation(3.0, 1.0e6, 0.02).unwrap();
        assert!((d - 6.325745e-4).abs() < 1.0e-9, "delta {d}");
        // Area identity A = pi * R * delta at the same operating point.
        let a = hertz_area(3.0, 1.0e6, 0.02).unwrap();
        assert!((a - 3.9745828e-5).abs() < 1.0e-11, "area {a}");
        assert_relative_eq!(a, PI * 0.02 * d, max_relative = 1e-12);
    }

    #[test]
    fn hertz_identity_contact_radius_squared() {
        // a_c^2 == R * delta across decades of load.
        for &n in &[1e-3, 0.1, 1.0, 3.0, 10.0, 250.0] {
            let (e, r) = (3.4e5, 6.1e-3);
            let delta = hertz_indentation(n, e, r).unwrap();
            let area = hertz_area(n, e, r).unwrap();
            assert_relative_eq!(area / PI, r * delta, max_relative = 1e-12);
        }
    }

    #[test]
    fn hertz_load_inverts_indentation() {
        let (e, r) = (2.0e5, 5.0e-3);
        for &n in &[0.05, 0.8, 2.5, 7.0] {
            let d = hertz_indentation(n, e, r).unwrap();
            assert_relative_eq!(hertz_load(d, e, r), n, max_relative = 1e-12);
        }
        assert_eq!(hertz_load(0.0, e, r), 0.0);
        assert_eq!(hertz_load(-1.0e-5, e, r), 0.0);
    }

    #[test]
    fn zero_pressure_is_rim_only() {
        let sol = resolve_contact(3.0, 0.0, &spec(), 3).unwrap();
        assert_eq!(sol.regime, ContactRegime::RimOnly);
        assert_eq!(sol.contact_area, 0.0);
        assert_eq!(sol.membrane_load, 0.0);
        assert_eq!(sol.rim_load, 3.0);
        assert_relative_eq!(sol.friction_force, 0.2 * 3.0, max_relative = 1e-15);
        assert_relative_eq!(sol.mu_eff, 0.2, max_relative = 1e-15);
    }

    #[test]
    fn zero_load_has_zero_mu() {
        let s = spec();
        let low = resolve_contact(0.0, 0.0, &s, 3).unwrap();
        assert_eq!(low.mu_eff, 0.0);
        assert_eq!(low.friction_force, 0.0);
        // Protruding bulge with no load: full-membrane regime, empty contact.
        let high = resolve_contact(0.0, 1.0e5, &s, 3).unwrap();
        assert_eq!(high.regime, ContactRegime::FullMembrane);
        assert_eq!(high.mu_eff, 0.0);
        assert_eq!(high.contact_area, 0.0);
    }

    #[test]
    fn reference_spec_mixed_at_moderate_pressure() {
        // At 125 kPa and 3 N the reference finger is deep in mixed contact.
        let sol = resolve_contact(3.0, 1.25e5, &spec(), 3).unwrap();
        assert_eq!(sol.regime, ContactRegime::Mixed);
        assert!(sol.membrane_load > 0.0 && sol.rim_load > 0.0);
        assert!(sol.mu_eff > 0.25, "mu {}", sol.mu_eff);
    }

    #[test]
    fn load_split_sums_exactly() {
        let s = spec();
        for &(n, p) in &[
            (0.3, 4.0e4),
            (3.0, 6.0e4),
            (3.0, 1.25e5),
            (8.0, 9.0e4),
            (0.1, 2.0e4),
        ] {
            let sol = resolve_contact(n, p, &s, 3).unwrap();
            assert_eq!(
                sol.membrane_load + sol.rim_load,
                n,
                "split {} + {} != {n} at p {p}",
                sol.membrane_load,
                sol.rim_load
            );
        }
    }

    #[test]
    fn split_load_is_exact_on_awkward_floats() {
        // 0.3 - 0.1 famously rounds; the complement trick must still sum
        // back exactly.
        let (m, r) = split_load(0.3, 0.1);
        assert_eq!(m + r, 0.3);
        let (m, r) = split_load(1.0, 1e-18);
        assert_eq!(m + r, 1.0);
        let (m, r) = split_load(2.5, 2.4999999999);
        assert_eq!(m + r, 2.5);
        let (m, r) = split_load(1.0, 2.0); // over-cap clamps
        assert_eq!((m, r), (1.0, 0.0));
    }

    #[test]
    fn regime_boundaries_are_continuous() {
        // Friction must match across each regime boundary to high accuracy.
        let s = spec();
        let n = 3.0;
        // Rim/mixed boundary: pressure where protrusion crosses zero.
        let p0 = crate::membrane::bulge_pressure(s.rim_gap, &s).unwrap();
        let below = resolve_contact(n, p0 - 0.01, &s, 3).unwrap();
        let above = resolve_contact(n, p0 + 0.01, &s, 3).unwrap();
        assert_eq!(below.regime, ContactRegime::RimOnly);
        assert_eq!(above.regime, ContactRegime::Mixed);
        // Onset slope d(friction)/dp = bulges * tau_s * pi * R(g) * h'(p0)
        // ~= 1.6e-4 N/Pa here, so +-0.01 Pa may differ by a few 1e-6 N.
        assert!(
            (below.friction_force - above.friction_force).abs() < 5e-6,
            "jump {} vs {}",
            below.friction_force,
            above.friction_force
        );

        // Mixed/full boundary, crossed in load at fixed pressure: the mixed
        // branch degenerates to the full-membrane one exactly at the
        // boundary, so a tiny load step must not jump.
        let mut stiff = spec();
        stiff.contact_modulus = 1.0e6;
        stiff.stiffening = 0.0;
        let p = 1.2e5;
        let state = crate::membrane::resolve_bulge(p, &stiff, crate::membrane::BulgeMode::Exact)
            .unwrap();
        let e_star = effective_modulus(p, &stiff);
        let n_star = 3.0 * hertz_load(state.protrusion, e_star, state.cap_radius.unwrap());
        let full = resolve_contact(n_star * (1.0 - 1e-9), p, &stiff, 3).unwrap();
        let mixed = resolve_contact(n_star * (1.0 + 1e-9), p, &stiff, 3).unwrap();
        assert_eq!(full.regime, ContactRegime::FullMembrane);
        assert_eq!(mixed.regime, ContactRegime::Mixed);
        assert_relative_eq!(full.friction_force, mixed.friction_force, max_relative = 1e-6);
    }

    #[test]
    fn full_membrane_friction_scales_two_thirds() {
        // Craft a spec that stays full-membrane up to 8 N: stiff contact
        // layer, large protrusion.
        let mut s = spec();
        s.contact_modulus = 1.0e6;
        s.stiffening = 0.0;
        let p = 1.2e5;
        let n8 = resolve_contact(8.0, p, &s, 3).unwrap();
        assert_eq!(n8.regime, ContactRegime::FullMembrane);
        let n1 = resolve_contact(1.0, p, &s, 3).unwrap();
        assert_eq!(n1.regime, ContactRegime::FullMembrane);
        assert_relative_eq!(
            n8.friction_force / n1.friction_force,
            8.0_f64.powf(2.0 / 3.0),
            max_relative = 1e-9
        );
        // Equivalent statement: mu * N^(1/3) is constant.
        assert_relative_eq!(
            n8.mu_eff * 8.0_f64.powf(1.0 / 3.0),
            n1.mu_eff,
            max_relative = 1e-9
        );
    }

    #[test]
    fn domain_errors() {
        let s = spec();
        assert!(resolve_contact(-1.0, 0.0, &s, 3).is_err());
        assert!(resolve_contact(1.0, -2.0, &s, 3).is_err());
        assert!(resolve_contact(1.0, 0.0, &s, 0).is_err());
        assert!(hertz_indentation(1.0, 0.0, 0.01).is_err());
        assert!(hertz_indentation(1.0, 1.0e5, -0.01).is_err());
        assert!(hertz_area(-0.5, 1.0e5, 0.01).is_err());
    }

    #[test]
    fn mu_eff_times_load_recovers_friction() {
        let sol = resolve_contact(3.5, 8.0e4, &spec(), 3).unwrap();
        assert_relative_eq!(
            sol.mu_eff * 3.5,
            sol.friction_force,
            max_relative = 4.0 * f64::EPSILON
        );
    }
}
