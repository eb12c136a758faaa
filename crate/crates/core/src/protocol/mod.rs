//! Step sequences: execution, measurement post-selection and the canonical
//! N = 8 NOON protocol.

mod noon;
mod timing;

use std::collections::BTreeMap;

pub use noon::{
    build_noon8, noon_fidelity, noon_target, noon_target_on, Drive, NoonFidelity, RECOMBINE,
    RESET_TO_EXCITED, SPLIT,
};
pub use timing::{
    resolve_duration, superposition_pulse_time, superposition_search, vacuum_pulse_time,
    ResolvedDuration, SuperpositionTiming,
};

use crate::error::{Error, Result};
use crate::fock::{Axis, Level, Truncation};
use crate::sideband::{apply_pulse, apply_rotation, PulseSpec, RotationSpec};
use crate::state::HybridState;

/// Branches below this probability are rejected rather than renormalized.
pub const DEGENERATE_BRANCH: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Step {
    Prepare {
        level: Level,
        n_x: usize,
        n_y: usize,
    },
    SidebandPulse(PulseSpec),
    Rotate(RotationSpec),
    MeasureQubit(Level),
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::Prepare { .. } => "prepare",
            Step::SidebandPulse(_) => "pulse",
            Step::Rotate(_) => "rotate",
            Step::MeasureQubit(_) => "measure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    /// Maximum guard-band population tolerated after any pulse.
    pub leakage_limit: f64,
    /// Replaces the outcome of every `MeasureQubit` step.
    pub outcome_override: Option<Level>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            leakage_limit: 1e-6,
            outcome_override: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub state: HybridState,
    /// Guard-band population: of the driven mode after a pulse, the larger
    /// of the two modes otherwise.
    pub leakage: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseRecord {
    pub step: usize,
    pub duration: f64,
    pub predicted_infidelity: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub step: usize,
    pub outcome: Level,
    /// Probability of the retained branch.
    pub probability: f64,
    pub p_excited: f64,
    pub p_ground: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub snapshots: Vec<Snapshot>,
    pub pulses: Vec<PulseRecord>,
    pub measurements: Vec<Measurement>,
    pub final_state: HybridState,
    pub diagnostics: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl RunResult {
    /// Product of all retained-branch probabilities (1 with no measurement).
    pub fn postselect_probability(&self) -> f64 {
        self.measurements.iter().map(|m| m.probability).product()
    }

    pub fn max_leakage(&self) -> f64 {
        self.snapshots.iter().map(|s| s.leakage).fold(0.0, f64::max)
    }

    pub fn snapshot(&self, step: usize) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| s.step == step)
    }
}

/// Checks sequence structure and every pulse against the truncation.
pub fn validate_sequence(steps: &[Step], trunc: &Truncation) -> Result<()> {
    match steps.first() {
        None => return Err(Error::InvalidSequence("empty step list".into())),
        Some(Step::Prepare { level: _, n_x, n_y }) => {
            trunc.check_fock(*n_x, *n_y)?;
            if trunc.in_guard_band(Axis::X, *n_x) || trunc.in_guard_band(Axis::Y, *n_y) {
                return Err(Error::TruncationTooSmall(format!(
                    "prepared state ({n_x}, {n_y}) lies in the guard band"
                )));
            }
        }
        Some(other) => {
            return Err(Error::InvalidSequence(format!(
                "first step must be prepare, found {}",
                other.kind()
            )))
        }
    }
    for (i, step) in steps.iter().enumerate().skip(1) {
        match step {
            Step::Prepare { .. } => {
                return Err(Error::InvalidSequence(format!(
                    "step {i}: prepare may only appear first"
                )))
            }
            Step::SidebandPulse(p) => p.validate(trunc)?,
            Step::Rotate(r) if !(r.theta.is_finite() && r.phi.is_finite()) => {
                return Err(Error::InvalidArgument(format!(
                    "step {i}: rotation angles must be finite"
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn run_sequence(steps: &[Step], trunc: &Truncation) -> Result<RunResult> {
    run_sequence_with(steps, trunc, &RunOptions::default())
}

pub fn run_sequence_with(
    steps: &[Step],
    trunc: &Truncation,
    opts: &RunOptions,
) -> Result<RunResult> {
    validate_sequence(steps, trunc)?;
    let mut snapshots = Vec::with_capacity(steps.len());
    let mut pulses = Vec::new();
    let mut measurements = Vec::new();
    let mut warnings = Vec::new();
    let mut diagnostics = BTreeMap::new();

    let mut state = HybridState::zeros(*trunc);
    for (i, step) in steps.iter().enumerate() {
        let mut leakage = None;
        state = match *step {
            Step::Prepare { level, n_x, n_y } => HybridState::basis(*trunc, level, n_x, n_y)?,
            Step::SidebandPulse(spec) => {
                warnings.extend(
                    spec.warnings()
                        .into_iter()
                        .map(|w| format!("step {i}: {w}")),
                );
                let out = apply_pulse(&state, &spec)?;
                if out.leakage > opts.leakage_limit {
                    return Err(Error::Leakage {
                        step: i,
                        leakage: out.leakage,
                        limit: opts.leakage_limit,
                    });
                }
                diagnostics.insert(format!("step{i}.duration"), out.duration);
                if let Some(p) = out.predicted_infidelity {
                    diagnostics.insert(format!("step{i}.predicted_infidelity"), p);
                }
                pulses.push(PulseRecord {
                    step: i,
                    duration: out.duration,
                    predicted_infidelity: out.predicted_infidelity,
                });
                leakage = Some(out.leakage);
                out.state
            }
            Step::Rotate(r) => apply_rotation(&state, &r),
            Step::MeasureQubit(requested) => {
                let outcome = opts.outcome_override.unwrap_or(requested);
                let p_excited = state.level_population(Level::Excited);
                let p_ground = state.level_population(Level::Ground);
                let probability = if outcome == Level::Excited {
                    p_excited
                } else {
                    p_ground
                };
                if probability < DEGENERATE_BRANCH {
                    return Err(Error::DegenerateBranch {
                        step: i,
                        probability,
                    });
                }
                measurements.push(Measurement {
                    step: i,
                    outcome,
                    probability,
                    p_excited,
                    p_ground,
                });
                state
                    .project(outcome)
                    .scaled((1.0 / probability.sqrt()).into())
            }
        };
        let leakage = leakage.unwrap_or_else(|| {
            state
                .guard_population(Axis::X)
                .max(state.guard_population(Axis::Y))
        });
        snapshots.push(Snapshot {
            step: i,
            state: state.clone(),
            leakage,
        });
    }

    let result = RunResult {
        snapshots,
        pulses,
        measurements,
        final_state: state,
        diagnostics,
        warnings,
    };
    let mut result = result;
    let post = result.postselect_probability();
    let leak = result.max_leakage();
    result
        .diagnostics
        .insert("postselect_probability".into(), post);
    result.diagnostics.insert("max_leakage".into(), leak);
    Ok(result)
}
