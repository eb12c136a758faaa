use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use super::Step;
use crate::error::{Error, Result};
use crate::fock::{Axis, Level, Truncation};
use crate::sideband::{AutoDuration, Form, PulseDuration, PulseSpec, RotationSpec};
use crate::state::HybridState;

/// Full qubit flip used to return the ion to `|e⟩` between the vacuum pulses.
pub const RESET_TO_EXCITED: RotationSpec = RotationSpec {
    theta: PI,
    phi: -FRAC_PI_2,
};
/// `|g⟩ → (|e⟩ + |g⟩)/√2`.
pub const SPLIT: RotationSpec = RotationSpec {
    theta: FRAC_PI_2,
    phi: FRAC_PI_2,
};
/// `|e⟩ → (|e⟩ + |g⟩)/√2`, `|g⟩ → (|g⟩ - |e⟩)/√2`; maps the entangled
/// pair onto `|e⟩ ⊗ NOON₋ + |g⟩ ⊗ NOON₊`.
pub const RECOMBINE: RotationSpec = RotationSpec {
    theta: FRAC_PI_2,
    phi: -FRAC_PI_2,
};

/// Sideband drive parameters for one mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Drive {
    pub eta: f64,
    pub omega: f64,
    pub form: Form,
}

impl Drive {
    /// Drive whose four-phonon coupling `Ω η⁴ / 24` equals `g`.
    pub fn from_coupling(g: f64, eta: f64, form: Form) -> Self {
        Drive {
            eta,
            omega: 24.0 * g / (eta * eta * eta * eta),
            form,
        }
    }

    fn pulse(&self, axis: Axis, auto: AutoDuration) -> Step {
        Step::SidebandPulse(PulseSpec::four_phonon(
            axis,
            self.eta,
            self.omega,
            PulseDuration::Auto(auto),
            self.form,
        ))
    }
}

/// The canonical N = 8 sequence: two vacuum pulses build `|4⟩_x|4⟩_y`, the
/// qubit is split, two superposition pulses entangle the modes, and a final
/// rotation plus measurement post-selects a NOON state.
pub fn build_noon8(x: Drive, y: Drive, horizon: u32, outcome: Level) -> Vec<Step> {
    let sup = AutoDuration::SuperpositionPi { horizon };
    vec![
        Step::Prepare {
            level: Level::Excited,
            n_x: 0,
            n_y: 0,
        },
        x.pulse(Axis::X, AutoDuration::VacuumPi),
        Step::Rotate(RESET_TO_EXCITED),
        y.pulse(Axis::Y, AutoDuration::VacuumPi),
        Step::Rotate(SPLIT),
        x.pulse(Axis::X, sup),
        y.pulse(Axis::Y, sup),
        Step::Rotate(RECOMBINE),
        Step::MeasureQubit(outcome),
    ]
}

/// `(|N⟩_x|0⟩_y + e^{iχ}|0⟩_x|N⟩_y)/√2` attached to `|g⟩`.
pub fn noon_target(n: usize, chi: f64, trunc: &Truncation) -> Result<HybridState> {
    noon_target_on(Level::Ground, n, chi, trunc)
}

pub fn noon_target_on(level: Level, n: usize, chi: f64, trunc: &Truncation) -> Result<HybridState> {
    if n == 0 {
        return Err(Error::InvalidArgument("NOON state needs N >= 1".into()));
    }
    trunc.check_fock(n, n)?;
    let mut s = HybridState::zeros(*trunc);
    s.set_amp(level, n, 0, C64::from(FRAC_1_SQRT_2));
    s.set_amp(level, 0, n, C64::from_polar(FRAC_1_SQRT_2, chi));
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoonFidelity {
    /// `max_χ |⟨NOON(N, χ)|ψ⟩|²`.
    pub best: f64,
    /// Maximizing relative phase in `(-π, π]`; 0 when either amplitude vanishes.
    pub chi: f64,
    /// Fidelities at `χ = 0` and `χ = π`.
    pub fixed: (f64, f64),
    /// Qubit level the mode state was read from.
    pub level: Level,
    /// `⟨level, N, 0|ψ⟩`.
    pub amp_n0: C64,
    /// `⟨level, 0, N|ψ⟩`.
    pub amp_0n: C64,
}

/// NOON overlap of the mode state on the more populated qubit level.
///
/// With `a = ⟨N,0|ψ⟩` and `b = ⟨0,N|ψ⟩`, the overlap is
/// `|a + e^{-iχ} b|² / 2`, maximal at `χ = arg(b) - arg(a)` with value
/// `(|a| + |b|)² / 2`.
pub fn noon_fidelity(state: &HybridState, n: usize) -> Result<NoonFidelity> {
    let trunc = state.truncation();
    trunc.check_fock(n, n)?;
    if n == 0 {
        return Err(Error::InvalidArgument("NOON state needs N >= 1".into()));
    }
    let level = if state.level_population(Level::Excited) > state.level_population(Level::Ground) {
        Level::Excited
    } else {
        Level::Ground
    };
    let a = state.amp(level, n, 0);
    let b = state.amp(level, 0, n);
    let best = (a.norm() + b.norm()).powi(2) / 2.0;
    let chi = if a.norm() == 0.0 || b.norm() == 0.0 {
        0.0
    } else {
        wrap_phase((b * a.conj()).arg())
    };
    let fixed = ((a + b).norm_sqr() / 2.0, (a - b).norm_sqr() / 2.0);
    Ok(NoonFidelity {
        best,
        chi,
        fixed,
        level,
        amp_n0: a,
        amp_0n: b,
    })
}

fn wrap_phase(p: f64) -> f64 {
    if p <= -PI {
        p + 2.0 * PI
    } else {
        p
    }
}
