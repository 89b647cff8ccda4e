//! The force-thresholding grasp protocol against the simulated plant.
//!
//! A trial walks a fixed state graph:
//!
//! ```text
//! Idle -> Pressurize -> Close -> Hold -> Lift -> Transport -> Release
//!                                          \         \
//!                                           Dropped   Dropped
//! ```
//!
//! Pressurize runs the regulator's first-order lag until the pocket pressure
//! settles at the set-point; Close ramps the commanded grip force until the
//! noisy load-cell reading crosses the target, then latches the set-point;
//! Lift and Transport compare the friction capacity — perturbed each step by
//! multiplicative noise — against the payload demand. An early drop during
//! Lift is a Failure (the object never came up), a drop during Transport is
//! a Slip, and reaching Release is a Success.
//!
//! Every simulation step appends one transcript record, so transcripts are
//! replayable and byte-identical for a fixed seed.

use crate::contact::resolve_contact;
use crate::error::Result;
use crate::grasp::GraspQuery;
use crate::harness::plant::PlantConfig;
use crate::membrane::MembraneSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::fmt::Write as _;

/// Protocol automaton states, in graph order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolState {
    Idle,
    Pressurize,
    Close,
    Hold,
    Lift,
    Transport,
    Release,
    Dropped,
}

impl ProtocolState {
    /// Lower-case text tag used in transcripts.
    pub fn tag(self) -> &'static str {
        match self {
            ProtocolState::Idle => "idle",
            ProtocolState::Pressurize => "pressurize",
            ProtocolState::Close => "close",
            ProtocolState::Hold => "hold",
            ProtocolState::Lift => "lift",
            ProtocolState::Transport => "transport",
            ProtocolState::Release => "release",
            ProtocolState::Dropped => "dropped",
        }
    }
}

/// Trial verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraspOutcome {
    /// The object reached Release still held.
    Success,
    /// Lifted, then dropped during Transport.
    Slip,
    /// Never made it off the table.
    Failure,
}

impl GraspOutcome {
    /// Lower-case text tag used in transcripts and record CSVs.
    pub fn tag(self) -> &'static str {
        match self {
            GraspOutcome::Success => "success",
            GraspOutcome::Slip => "slip",
            GraspOutcome::Failure => "failure",
        }
    }

    /// Inverse of [`tag`](Self::tag); `None` for unrecognized text.
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "success" => Some(GraspOutcome::Success),
            "slip" => Some(GraspOutcome::Slip),
            "failure" => Some(GraspOutcome::Failure),
            _ => None,
        }
    }
}

/// One simulation step of a trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptStep {
    /// Simulated time, s.
    pub time: f64,
    pub state: ProtocolState,
    /// Pocket pressure, Pa.
    pub pressure: f64,
    /// Load-cell reading (Close) or held set-point (later phases), N.
    pub force: f64,
}

/// Complete record of one grasp trial.
#[derive(Debug, Clone, PartialEq)]
pub struct GraspTranscript {
    pub steps: Vec<TranscriptStep>,
    pub outcome: GraspOutcome,
}

impl GraspTranscript {
    /// Line-oriented text form: one `time state pressure force` record per
    /// step, then a trailing `outcome:` line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            writeln!(out, "{} {} {} {}", s.time, s.state.tag(), s.pressure, s.force)
                .expect("writing to a String cannot fail");
        }
        writeln!(out, "outcome: {}", self.outcome.tag())
            .expect("writing to a String cannot fail");
        out
    }
}

/// Fraction of the regulator set-point error at which the pressure is
/// considered settled; models the integral action a real regulator applies.
const SETTLE_FRACTION: f64 = 0.005;

/// Hard per-phase step bounds so a trial always terminates.
const MAX_PRESSURIZE_STEPS: u64 = 100_000;
const MAX_CLOSE_STEPS: u64 = 1_000_000;

struct Trial<'a> {
    cfg: &'a PlantConfig,
    steps: Vec<TranscriptStep>,
    tick: u64,
}

impl Trial<'_> {
    fn record(&mut self, state: ProtocolState, pressure: f64, force: f64) {
        self.steps.push(TranscriptStep {
            time: self.tick as f64 * self.cfg.timestep,
            state,
            pressure,
            force,
        });
        self.tick += 1;
    }
}

fn phase_steps(duration: f64, dt: f64) -> u64 {
    // Every phase contributes at least one transcript step.
    ((duration / dt).round() as u64).max(1)
}

/// Run one trial on the given RNG stream of `cfg.seed`.
fn run_on_stream(
    q: &GraspQuery,
    spec: &MembraneSpec,
    cfg: &PlantConfig,
    stream: u64,
) -> Result<GraspTranscript> {
    q.validate()?;
    cfg.validate()?;
    let spec = spec.clone().validated()?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let loadcell = Normal::new(0.0, cfg.loadcell_sigma)
        .expect("validated sigma is a legal std dev");
    let mu_noise = Normal::new(0.0, cfg.mu_sigma)
        .expect("validated sigma is a legal std dev");

    let dt = cfg.timestep;
    let mut trial = Trial {
        cfg,
        steps: Vec::new(),
        tick: 0,
    };
    trial.record(ProtocolState::Idle, 0.0, 0.0);

    // Pressurize: first-order lag toward the set-point, declared settled
    // (and pinned) once the error falls under SETTLE_FRACTION.
    let target_p = q.pressure;
    let decay = if cfg.pressure_tau == 0.0 {
        0.0
    } else {
        (-dt / cfg.pressure_tau).exp()
    };
    let mut p = 0.0;
    for _ in 0..MAX_PRESSURIZE_STEPS {
        p = target_p + (p - target_p) * decay;
        let settled = (p - target_p).abs() <= SETTLE_FRACTION * target_p.abs();
        if settled {
            p = target_p;
        }
        trial.record(ProtocolState::Pressurize, p, 0.0);
        if settled {
            break;
        }
    }
    p = target_p;

    // Close: ramp the commanded force until the noisy reading crosses the
    // threshold, then latch the set-point itself for the rest of the trial.
    // The command never exceeds target + 3 sigma, so the servo cannot
    // meaningfully overshoot while waiting for an unlucky reading.
    let target_n = q.normal_force;
    let command_cap = target_n + 3.0 * cfg.loadcell_sigma;
    let mut commanded = 0.0;
    for _ in 0..MAX_CLOSE_STEPS {
        commanded = (commanded + cfg.close_rate * dt).min(command_cap);
        let measured = commanded + loadcell.sample(&mut rng);
        trial.record(ProtocolState::Close, p, measured);
        if measured >= target_n {
            break;
        }
    }

    for _ in 0..phase_steps(cfg.hold_time, dt) {
        trial.record(ProtocolState::Hold, p, target_n);
    }

    // The held force and settled pressure are constant from here on, so the
    // noise-free capacity is too.
    let sol = resolve_contact(target_n, p, &spec, q.bulges)?;
    let capacity = q.contacts as f64 * sol.friction_force;
    let demand = q.problem().demand();

    let dropped = |rng: &mut ChaCha8Rng, load: f64| -> bool {
        let eps = mu_noise.sample(rng).max(-0.9);
        capacity * (1.0 + eps) < load
    };

    for _ in 0..phase_steps(cfg.lift_time, dt) {
        trial.record(ProtocolState::Lift, p, target_n);
        if dropped(&mut rng, demand) {
            trial.record(ProtocolState::Dropped, p, 0.0);
            return Ok(GraspTranscript {
                steps: trial.steps,
                outcome: GraspOutcome::Failure,
            });
        }
    }

    let transport_demand = demand * cfg.transport_factor;
    for _ in 0..phase_steps(cfg.transport_time, dt) {
        trial.record(ProtocolState::Transport, p, target_n);
        if dropped(&mut rng, transport_demand) {
            trial.record(ProtocolState::Dropped, p, 0.0);
            return Ok(GraspTranscript {
                steps: trial.steps,
                outcome: GraspOutcome::Slip,
            });
        }
    }

    trial.record(ProtocolState::Release, p, 0.0);
    Ok(GraspTranscript {
        steps: trial.steps,
        outcome: GraspOutcome::Success,
    })
}

/// Simulate one grasp trial. Deterministic for fixed `(q, spec, cfg)`;
/// identical to trial 0 of [`monte_carlo_trials`].
pub fn run_grasp_protocol(
    q: &GraspQuery,
    spec: &MembraneSpec,
    cfg: &PlantConfig,
) -> Result<GraspTranscript> {
    run_on_stream(q, spec, cfg, 0)
}

/// Simulate `trials` independent grasp trials. Trial `k` runs on RNG stream
/// `k` of `cfg.seed`, so the set of outcomes does not depend on execution
/// order and any single trial can be reproduced in isolation.
pub fn monte_carlo_trials(
    q: &GraspQuery,
    spec: &MembraneSpec,
    cfg: &PlantConfig,
    trials: u32,
) -> Result<Vec<GraspTranscript>> {
    if trials == 0 {
        return Err(crate::error::Error::Domain {
            op: "monte_carlo_trials",
            message: "trials must be at least 1".into(),
        });
    }
    (0..trials as u64)
        .map(|k| run_on_stream(q, spec, cfg, k))
        .collect()
}

/// Fraction of `trials` independent trials that end in
/// [`GraspOutcome::Success`].
pub fn monte_carlo_success(
    q: &GraspQuery,
    spec: &MembraneSpec,
    cfg: &PlantConfig,
    trials: u32,
) -> Result<f64> {
    let runs = monte_carlo_trials(q, spec, cfg, trials)?;
    let successes = runs
        .iter()
        .filter(|t| t.outcome == GraspOutcome::Success)
        .count();
    Ok(successes as f64 / trials as f64)
}
