//! Analysis of measured (or simulated) experiment data.
//!
//! Three consumers of recorded data live here: sliding-friction estimation
//! from force-sensor traces (mean |f_y|/|f_z| over the sliding window),
//! aggregation of repeated grasp trials into per-cell success rates, and the
//! roundness ratio d_min/d_max used to score deformable-object grasps.

use crate::error::{Error, Result};
use crate::harness::protocol::GraspOutcome;

/// Force readings below this magnitude make the friction ratio meaningless.
pub const NORMAL_FORCE_EPSILON: f64 = 1.0e-3;

/// Fraction of the peak tangential force that counts as "sliding" when the
/// window is detected automatically.
pub const AUTO_WINDOW_FRACTION: f64 = 0.05;

/// One force-plate sample: tangential along the slide direction, normal
/// against the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    /// Time, s.
    pub t: f64,
    /// Tangential force, N.
    pub f_y: f64,
    /// Normal force, N.
    pub f_z: f64,
}

/// A recorded sliding test: samples with strictly increasing timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct SlideTrace {
    samples: Vec<TraceSample>,
}

impl SlideTrace {
    pub fn new(samples: Vec<TraceSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain {
                op: "SlideTrace",
                message: "trace must contain at least one sample".into(),
            });
        }
        for s in &samples {
            if !(s.t.is_finite() && s.f_y.is_finite() && s.f_z.is_finite()) {
                return Err(Error::Domain {
                    op: "SlideTrace",
                    message: format!("non-finite sample at t = {}", s.t),
                });
            }
        }
        for w in samples.windows(2) {
            // Negated `<` instead of `>=` so a NaN timestamp fails the check.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(w[0].t < w[1].t) {
                return Err(Error::Domain {
                    op: "SlideTrace",
                    message: format!(
                        "timestamps must be strictly increasing, got {} then {}",
                        w[0].t, w[1].t
                    ),
                });
            }
        }
        Ok(SlideTrace { samples })
    }

    pub fn samples(&self) -> &[TraceSample] {
        &self.samples
    }
}

/// Which part of a trace to average over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceWindow {
    /// Longest contiguous run where |f_y| exceeds 5 % of its trace maximum —
    /// the sliding portion, between initial sticking and final separation.
    Auto,
    /// Samples with `start <= t <= end`.
    Explicit { start: f64, end: f64 },
}

/// Sliding friction coefficient: mean of |f_y|/|f_z| over the window.
///
/// Absolute values make the estimate independent of the sign convention of
/// either channel, and the samplewise mean is invariant under any
/// monotone time rescaling.
pub fn friction_from_trace(trace: &SlideTrace, window: TraceWindow) -> Result<f64> {
    let samples = trace.samples();
    let selected: Vec<&TraceSample> = match window {
        TraceWindow::Explicit { start, end } => samples
            .iter()
            .filter(|s| start <= s.t && s.t <= end)
            .collect(),
        TraceWindow::Auto => {
            let peak = samples.iter().map(|s| s.f_y.abs()).fold(0.0, f64::max);
            let threshold = AUTO_WINDOW_FRACTION * peak;
            longest_run(samples, |s| s.f_y.abs() > threshold)
        }
    };
    if selected.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut sum = 0.0;
    for s in &selected {
        if s.f_z.abs() <= NORMAL_FORCE_EPSILON {
            return Err(Error::DegenerateNormal { time: s.t });
        }
        sum += s.f_y.abs() / s.f_z.abs();
    }
    Ok(sum / selected.len() as f64)
}

/// Longest contiguous run of samples satisfying `keep`; first one wins ties.
fn longest_run<F: Fn(&TraceSample) -> bool>(
    samples: &[TraceSample],
    keep: F,
) -> Vec<&TraceSample> {
    let mut best: &[TraceSample] = &[];
    let mut start = None;
    for (i, s) in samples.iter().enumerate() {
        match (keep(s), start) {
            (true, None) => start = Some(i),
            (false, Some(b)) => {
                if i - b > best.len() {
                    best = &samples[b..i];
                }
                start = None;
            }
            _ => {}
        }
    }
    if let Some(b) = start {
        if samples.len() - b > best.len() {
            best = &samples[b..];
        }
    }
    best.iter().collect()
}

/// Roundness of a grasped deformable rim: d_min/d_max in (0, 1], 1 meaning
/// the rim stayed circular.
pub fn roundness_ratio(d_min: f64, d_max: f64) -> Result<f64> {
    if !(d_min.is_finite() && d_max.is_finite() && d_min > 0.0 && d_min <= d_max) {
        return Err(Error::Domain {
            op: "roundness_ratio",
            message: format!("need 0 < d_min <= d_max, got d_min = {d_min}, d_max = {d_max}"),
        });
    }
    Ok(d_min / d_max)
}

/// One observed grasp trial at a grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    /// Per-contact normal force, N.
    pub normal_force: f64,
    /// Pocket pressure, Pa.
    pub pressure: f64,
    pub outcome: GraspOutcome,
}

/// Aggregated success rate for one (normal force, pressure) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCell {
    pub normal_force: f64,
    pub pressure: f64,
    /// Number of trials observed at this cell.
    pub trials: u64,
    /// Fraction of those trials that ended in success.
    pub success_rate: f64,
}

/// Group trial records by exact (normal force, pressure) coordinates and
/// report the success fraction per cell, sorted by force then pressure.
pub fn success_table(records: &[TrialRecord]) -> Vec<RateCell> {
    let mut sorted: Vec<&TrialRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        a.normal_force
            .total_cmp(&b.normal_force)
            .then(a.pressure.total_cmp(&b.pressure))
    });
    let mut cells: Vec<RateCell> = Vec::new();
    for r in sorted {
        let same_cell = cells.last().is_some_and(|c| {
            c.normal_force.total_cmp(&r.normal_force).is_eq()
                && c.pressure.total_cmp(&r.pressure).is_eq()
        });
        if !same_cell {
            cells.push(RateCell {
                normal_force: r.normal_force,
                pressure: r.pressure,
                trials: 0,
                success_rate: 0.0,
            });
        }
        let cell = cells.last_mut().expect("cell pushed above");
        // success_rate temporarily holds the raw success count.
        cell.trials += 1;
        if r.outcome == GraspOutcome::Success {
            cell.success_rate += 1.0;
        }
    }
    for c in &mut cells {
        c.success_rate /= c.trials as f64;
    }
    cells
}
