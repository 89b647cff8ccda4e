//! Inflation mechanics of a single rectangular silicone pocket.
//!
//! The pocket is a thin pre-tensioned membrane clamped over a groove of full
//! width `W = 2a`. Under internal pressure it bows outward into (to first
//! order) a spherical cap of centre height `h`. The standard bulge-test
//! relation links pressure to centre height through a membrane (pre-stress)
//! term and a bending/stretching term:
//!
//! ```text
//! p(h) = 2*sigma0*t/a^2 * h  +  (4/3) * E*t / ((1 - nu^2) * a^4) * h^3
//! ```
//!
//! Dropping the cubic term gives the low-pressure approximation
//! `h = k_h * p` with `k_h = a^2 / (2*sigma0*t)`, clamped at the pocket's
//! geometric limit `h_max`.

use crate::error::{Error, Result};
use crate::solve;

/// Geometry and material description of one pocket, plus the contact-layer
/// parameters used by the friction model. All SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct MembraneSpec {
    /// Residual (pre-tension) stress in the membrane, Pa.
    pub residual_stress: f64,
    /// Membrane thickness, m.
    pub thickness: f64,
    /// Half-span of the pocket: half the groove width, m.
    pub half_span: f64,
    /// Young's modulus of the membrane material, Pa.
    pub youngs_modulus: f64,
    /// Poisson's ratio of the membrane material; rubbers sit near 0.5.
    pub poisson_ratio: f64,
    /// Largest centre height the pocket can reach, m.
    pub max_height: f64,
    /// Rim recess: how far the bulge must rise before it leads the rim, m.
    pub rim_gap: f64,
    /// Effective contact modulus of the unpressurized bulge, Pa.
    pub contact_modulus: f64,
    /// Pressure stiffening rate of the contact modulus, 1/Pa.
    pub stiffening: f64,
    /// Interfacial shear strength of membrane-on-object contact, Pa.
    pub shear_strength: f64,
    /// Coulomb friction coefficient of the rigid rim on the object.
    pub rim_friction: f64,
}

impl MembraneSpec {
    /// Illustrative defaults for a moulded silicone pocket finger with an
    /// 8 mm groove. These are representative magnitudes chosen to exercise
    /// all three contact regimes — not measured values; calibrate against
    /// your own hardware for quantitative work.
    pub fn reference() -> Self {
        MembraneSpec {
            residual_stress: 1.5e5,
            thickness: 1.2e-3,
            half_span: 4.0e-3,
            youngs_modulus: 1.2e6,
            poisson_ratio: 0.48,
            max_height: 3.0e-3,
            rim_gap: 6.0e-4,
            contact_modulus: 1.2e5,
            stiffening: 2.0e-6,
            shear_strength: 4.0e4,
            rim_friction: 0.2,
        }
    }

    /// Check every field against its legal range, consuming and returning
    /// the spec so construction reads `MembraneSpec { .. }.validated()?`.
    pub fn validated(self) -> Result<Self> {
        fn positive(field: &'static str, v: f64) -> Result<()> {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Spec {
                    field,
                    message: format!("must be a positive finite number, got {v}"),
                });
            }
            Ok(())
        }
        fn non_negative(field: &'static str, v: f64) -> Result<()> {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Spec {
                    field,
                    message: format!("must be a non-negative finite number, got {v}"),
                });
            }
            Ok(())
        }

        positive("residual_stress", self.residual_stress)?;
        positive("thickness", self.thickness)?;
        positive("half_span", self.half_span)?;
        positive("youngs_modulus", self.youngs_modulus)?;
        if !(self.poisson_ratio.is_finite()
            && self.poisson_ratio > 0.0
            && self.poisson_ratio < 0.5)
        {
            return Err(Error::Spec {
                field: "poisson_ratio",
                message: format!("must lie in (0, 0.5), got {}", self.poisson_ratio),
            });
        }
        positive("max_height", self.max_height)?;
        non_negative("rim_gap", self.rim_gap)?;
        if self.max_height <= self.rim_gap {
            return Err(Error::Spec {
                field: "max_height",
                message: format!(
                    "must exceed rim_gap ({} m) or the bulge can never lead the rim, got {} m",
                    self.rim_gap, self.max_height
                ),
            });
        }
        positive("contact_modulus", self.contact_modulus)?;
        non_negative("stiffening", self.stiffening)?;
        positive("shear_strength", self.shear_strength)?;
        non_negative("rim_friction", self.rim_friction)?;
        Ok(self)
    }

    /// Low-pressure height gain `k_h = a^2 / (2*sigma0*t)` in m/Pa.
    pub fn height_gain(&self) -> f64 {
        self.half_span * self.half_span / (2.0 * self.residual_stress * self.thickness)
    }

    /// Pressure at which the centre height saturates at `max_height`.
    pub fn cap_pressure(&self) -> f64 {
        // max_height is validated positive, so this cannot fail.
        bulge_pressure(self.max_height, self).expect("max_height is in domain")
    }

    /// Coefficient of the linear (pre-stress) term of the bulge relation.
    fn linear_coeff(&self) -> f64 {
        2.0 * self.residual_stress * self.thickness / (self.half_span * self.half_span)
    }

    /// Coefficient of the cubic (stretching) term of the bulge relation.
    fn cubic_coeff(&self) -> f64 {
        let a2 = self.half_span * self.half_span;
        (4.0 / 3.0) * self.youngs_modulus * self.thickness
            / ((1.0 - self.poisson_ratio * self.poisson_ratio) * a2 * a2)
    }
}

/// Which pressure-to-height inversion to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BulgeMode {
    /// Clamped linear approximation `h = min(k_h * p, h_max)`.
    Linear,
    /// Exact inversion of the full cubic relation, clamped at `h_max`.
    #[default]
    Exact,
}

/// Resolved geometry of one inflated pocket.
#[derive(Debug, Clone, PartialEq)]
pub struct BulgeState {
    /// Applied gauge pressure, Pa.
    pub pressure: f64,
    /// Centre height of the bulge, m. Always in `[0, max_height]`.
    pub height: f64,
    /// Radius of the osculating spherical cap, m; `None` while the membrane
    /// is flat (`height == 0`) and no cap exists.
    pub cap_radius: Option<f64>,
    /// Protrusion past the rim plane, m: `height - rim_gap`. Negative while
    /// the rim still leads.
    pub protrusion: f64,
}

/// Pressure required to hold the bulge at centre height `height`.
///
/// Domain: `0 <= height <= max_height`. Strictly increasing in `height`.
pub fn bulge_pressure(height: f64, spec: &MembraneSpec) -> Result<f64> {
    if !(height.is_finite() && height >= 0.0 && height <= spec.max_height) {
        return Err(Error::Domain {
            op: "bulge_pressure",
            message: format!(
                "height must lie in [0, {}] m, got {height}",
                spec.max_height
            ),
        });
    }
    Ok(spec.linear_coeff() * height + spec.cubic_coeff() * height * height * height)
}

/// Clamped linear inversion: `h = min(k_h * p, h_max)`.
pub fn bulge_height_linear(pressure: f64, spec: &MembraneSpec) -> Result<f64> {
    if !(pressure.is_finite() && pressure >= 0.0) {
        return Err(Error::Domain {
            op: "bulge_height_linear",
            message: format!("pressure must be non-negative and finite, got {pressure}"),
        });
    }
    Ok((spec.height_gain() * pressure).min(spec.max_height))
}

/// Exact inversion of the pressure–height relation, clamped at `h_max`.
///
/// The cubic is strictly increasing, so the root is unique. A bisection
/// bracket on `[0, h_max]` is seeded with the linear estimate and polished
/// by safeguarded Newton steps to a relative tolerance of 1e-12.
pub fn bulge_height_exact(pressure: f64, spec: &MembraneSpec) -> Result<f64> {
    if !(pressure.is_finite() && pressure >= 0.0) {
        return Err(Error::Domain {
            op: "bulge_height_exact",
            message: format!("pressure must be non-negative and finite, got {pressure}"),
        });
    }
    if pressure == 0.0 {
        return Ok(0.0);
    }
    if pressure >= spec.cap_pressure() {
        return Ok(spec.max_height);
    }
    let c1 = spec.linear_coeff();
    let c3 = spec.cubic_coeff();
    let f = |h: f64| c1 * h + c3 * h * h * h - pressure;
    let df = |h: f64| c1 + 3.0 * c3 * h * h;
    let seed = (spec.height_gain() * pressure).min(spec.max_height);
    Ok(solve::newton_bisect(f, df, 0.0, spec.max_height, seed, 1e-12))
}

/// Radius of the sphere osculating a cap of the given `height` over a chord
/// half-width `half_span`: `R = (a^2 + h^2) / (2h)`.
///
/// Over increasing height the radius first shrinks (flat caps are nearly
/// planar, so their sphere is huge), reaches its minimum `R = a` at `h = a`
/// (a hemisphere), and grows again beyond. Domain: `height > 0`.
pub fn spherical_cap_radius(half_span: f64, height: f64) -> Result<f64> {
    if !(half_span.is_finite() && half_span > 0.0 && height.is_finite() && height > 0.0) {
        return Err(Error::Domain {
            op: "spherical_cap_radius",
            message: format!(
                "requires half_span > 0 and height > 0, got half_span {half_span}, height {height}"
            ),
        });
    }
    Ok((half_span * half_span + height * height) / (2.0 * height))
}

/// Resolve the full bulge state at a given pressure.
pub fn resolve_bulge(pressure: f64, spec: &MembraneSpec, mode: BulgeMode) -> Result<BulgeState> {
    let height = match mode {
        BulgeMode::Linear => bulge_height_linear(pressure, spec)?,
        BulgeMode::Exact => bulge_height_exact(pressure, spec)?,
    };
    let cap_radius = if height > 0.0 {
        Some(spherical_cap_radius(spec.half_span, height)?)
    } else {
        None
    };
    Ok(BulgeState {
        pressure,
        height,
        cap_radius,
        protrusion: height - spec.rim_gap,
    })
}
