use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sideband::{coupling_g, AutoDuration, Form, PulseDuration, PulseSpec};

/// Smallest `t > 0` completing `|e, 0⟩ → |g, 4⟩` under coupling `g`:
/// `π / (2 √24 g)`.
pub fn vacuum_pulse_time(g: f64) -> Result<f64> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "coupling g must be positive, got {g}"
        )));
    }
    Ok(PI / (2.0 * 24f64.sqrt() * g))
}

/// Result of the simultaneous-transfer search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuperpositionTiming {
    pub t: f64,
    /// Winning grid index `m`.
    pub m: u32,
    /// `1 - min(sin²(ω_a t), sin²(ω_b t))`.
    pub predicted_infidelity: f64,
}

/// Scans `t_m = (2m + 3/2) π / ω_a` for `m = 0..=horizon`, which all complete
/// the transition at `ω_a` exactly, and keeps the one that best completes the
/// transition at `ω_b`. Ties go to the smaller `m`.
pub fn superposition_search(
    omega_a: f64,
    omega_b: f64,
    horizon: u32,
) -> Result<SuperpositionTiming> {
    if !(omega_a > 0.0 && omega_a.is_finite() && omega_b > 0.0 && omega_b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "transition frequencies must be positive, got {omega_a} and {omega_b}"
        )));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument(
            "search horizon must be at least 1".into(),
        ));
    }
    let mut best: Option<(f64, SuperpositionTiming)> = None;
    for m in 0..=horizon {
        let t = (2.0 * f64::from(m) + 1.5) * PI / omega_a;
        let (sa, sb) = ((omega_a * t).sin(), (omega_b * t).sin());
        let score = (sa * sa).min(sb * sb);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((
                score,
                SuperpositionTiming {
                    t,
                    m,
                    predicted_infidelity: 1.0 - score,
                },
            ));
        }
    }
    Ok(best.expect("horizon >= 1").1)
}

/// Four-phonon superposition timing for coupling `g`: the transitions
/// `|g,4⟩ ↔ |e,0⟩` at `√24 g` and `|e,4⟩ ↔ |g,8⟩` at `√1680 g`. Their ratio
/// `√70` is irrational, so the transfer is never exact for both.
pub fn superposition_pulse_time(g: f64, horizon: u32) -> Result<SuperpositionTiming> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "coupling g must be positive, got {g}"
        )));
    }
    superposition_search(24f64.sqrt() * g, 1680f64.sqrt() * g, horizon)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolvedDuration {
    pub t: f64,
    pub predicted_infidelity: Option<f64>,
}

/// Turns a pulse's duration into seconds. Automatic durations are solved
/// against the pulse's own generator: for closed-form pulses these are the
/// `g`-based formulas above, for full pulses the exact Laguerre-dressed
/// matrix elements.
pub fn resolve_duration(spec: &PulseSpec) -> Result<ResolvedDuration> {
    let auto = match spec.duration {
        PulseDuration::Seconds(t) => {
            return Ok(ResolvedDuration {
                t,
                predicted_infidelity: None,
            })
        }
        PulseDuration::Auto(a) => a,
    };
    match (spec.form, auto) {
        (Form::Closed, AutoDuration::VacuumPi) => Ok(ResolvedDuration {
            t: vacuum_pulse_time(coupling_g(spec)?)?,
            predicted_infidelity: None,
        }),
        (Form::Closed, AutoDuration::SuperpositionPi { horizon }) => {
            let s = superposition_pulse_time(coupling_g(spec)?, horizon)?;
            Ok(ResolvedDuration {
                t: s.t,
                predicted_infidelity: Some(s.predicted_infidelity),
            })
        }
        (Form::Full, AutoDuration::VacuumPi) => {
            let w = spec.transition_frequency(0)?;
            if w <= 0.0 || w.is_nan() {
                return Err(Error::InvalidArgument(
                    "vacuum transition has zero coupling".into(),
                ));
            }
            Ok(ResolvedDuration {
                t: PI / (2.0 * w),
                predicted_infidelity: None,
            })
        }
        (Form::Full, AutoDuration::SuperpositionPi { horizon }) => {
            let k = spec.k as usize;
            let s = superposition_search(
                spec.transition_frequency(0)?,
                spec.transition_frequency(k)?,
                horizon,
            )?;
            Ok(ResolvedDuration {
                t: s.t,
                predicted_infidelity: Some(s.predicted_infidelity),
            })
        }
    }
}
