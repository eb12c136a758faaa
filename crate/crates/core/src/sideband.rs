//! Sideband Hamiltonians, their propagators, and carrier rotations.
//!
//! Couplings are taken real and positive: the `i^k` phase of the plane-wave
//! expansion is a per-pulse gauge and is dropped.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{Axis, Factor, Level, ModeOperator, Truncation};
use crate::laguerre::laguerre_table;
use crate::operator::{embed, expm_hermitian, FullOperator, LocalOperator};
use crate::state::HybridState;

/// Which generator a pulse is propagated with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// Small-η four-phonon Hamiltonian `g (σ⁺ a⁴ + h.c.)` in closed form.
    Closed,
    /// Full nonlinear k-th sideband Hamiltonian, exponentiated numerically.
    Full,
}

impl Form {
    pub fn keyword(self) -> &'static str {
        match self {
            Form::Closed => "closed",
            Form::Full => "full",
        }
    }
}

/// Durations solved from the pulse's own transition frequencies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutoDuration {
    /// Complete transfer `|e, 0⟩ → |g, k⟩`.
    VacuumPi,
    /// A single time that (approximately) completes both `|g, k⟩ → |e, 0⟩`
    /// and `|e, k⟩ → |g, 2k⟩`; searched over `horizon + 1` candidates.
    SuperpositionPi { horizon: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PulseDuration {
    Seconds(f64),
    Auto(AutoDuration),
}

/// One sideband pulse on one mode. The undriven mode has η = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSpec {
    pub axis: Axis,
    /// Sideband order; the laser sits at detuning `k ν` of the driven mode.
    pub k: u32,
    pub eta: f64,
    /// Rabi frequency, absorbing the dipole element and field amplitude.
    pub omega: f64,
    pub duration: PulseDuration,
    pub form: Form,
}

impl PulseSpec {
    /// Four-phonon pulse with the given drive parameters.
    pub fn four_phonon(
        axis: Axis,
        eta: f64,
        omega: f64,
        duration: PulseDuration,
        form: Form,
    ) -> Self {
        PulseSpec {
            axis,
            k: 4,
            eta,
            omega,
            duration,
            form,
        }
    }

    pub fn with_duration(mut self, duration: PulseDuration) -> Self {
        self.duration = duration;
        self
    }

    pub fn validate(&self, trunc: &Truncation) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidArgument(
                "sideband order k must be at least 1".into(),
            ));
        }
        if self.form == Form::Closed && self.k != 4 {
            return Err(Error::UnsupportedOrder(self.k));
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "eta must be finite and >= 0, got {}",
                self.eta
            )));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "omega must be finite and > 0, got {}",
                self.omega
            )));
        }
        match self.duration {
            PulseDuration::Seconds(t) if !(t.is_finite() && t >= 0.0) => {
                return Err(Error::InvalidArgument(format!(
                    "pulse duration must be finite and >= 0, got {t}"
                )));
            }
            PulseDuration::Auto(AutoDuration::SuperpositionPi { horizon: 0 }) => {
                return Err(Error::InvalidArgument(
                    "search horizon must be at least 1".into(),
                ));
            }
            _ => {}
        }
        check_room(trunc, self.axis, self.k)
    }

    /// Non-fatal remarks about the parameters.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.eta >= 1.0 {
            out.push(format!(
                "eta = {} is outside the Lamb-Dicke regime (eta < 1)",
                self.eta
            ));
        }
        out
    }

    /// `|⟨e, n| H |g, n + k⟩|` for this pulse's generator.
    pub fn transition_frequency(&self, n: usize) -> Result<f64> {
        match self.form {
            Form::Closed => Ok(coupling_g(self)? * four_phonon_rate(n)),
            Form::Full => Ok(full_element(
                self,
                n,
                crate::laguerre::laguerre_assoc(n as u32, self.k, self.eta * self.eta),
            )
            .abs()),
        }
    }
}

/// Carrier rotation `exp(-i θ/2 (cos φ σx + sin φ σy))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationSpec {
    pub theta: f64,
    pub phi: f64,
}

fn check_room(trunc: &Truncation, axis: Axis, k: u32) -> Result<()> {
    if trunc.guard() < k as usize {
        return Err(Error::GuardViolation {
            guard: trunc.guard(),
            order: k,
        });
    }
    if trunc.n_max(axis) < k as usize {
        return Err(Error::TruncationTooSmall(format!(
            "{axis}-mode cutoff {} cannot hold a {k}-phonon exchange",
            trunc.n_max(axis)
        )));
    }
    Ok(())
}

/// `√((n+4)(n+3)(n+2)(n+1))`, the four-phonon Rabi factor of `|e, n⟩ ↔ |g, n+4⟩`.
pub fn four_phonon_rate(n: usize) -> f64 {
    let n = n as f64;
    ((n + 4.0) * (n + 3.0) * (n + 2.0) * (n + 1.0)).sqrt()
}

/// `g = Ω η⁴ / 4!`.
// powi is avoided in these formulas: LLVM may const-fold it to a different
// value than the runtime call, breaking bit-reproducibility.
pub fn coupling_g(spec: &PulseSpec) -> Result<f64> {
    if spec.k != 4 {
        return Err(Error::UnsupportedOrder(spec.k));
    }
    let e2 = spec.eta * spec.eta;
    Ok(spec.omega * (e2 * e2) / 24.0)
}

fn full_element(spec: &PulseSpec, n: usize, laguerre: f64) -> f64 {
    let x = spec.eta * spec.eta;
    let falling: f64 = (1..=spec.k as usize).map(|j| (n + j) as f64).product();
    let eta_k: f64 = (0..spec.k).map(|_| spec.eta).product();
    spec.omega * (-x / 2.0).exp() * eta_k * laguerre / falling.sqrt()
}

/// Nonlinear k-th sideband Hamiltonian on qubit ⊗ driven mode:
/// `⟨e, n| H |g, n+k⟩ = Ω e^{-η²/2} η^k L_n^(k)(η²) √(n!/(n+k)!)`, plus the
/// Hermitian conjugate.
pub fn sideband_hamiltonian_local(spec: &PulseSpec, trunc: &Truncation) -> Result<LocalOperator> {
    check_room(trunc, spec.axis, spec.k)?;
    let d = trunc.dim(spec.axis);
    let k = spec.k as usize;
    let lag = laguerre_table((d - 1 - k) as u32, spec.k, spec.eta * spec.eta);
    let mut h = DMatrix::zeros(2 * d, 2 * d);
    for (n, &l) in lag.iter().enumerate().take(d - k) {
        let v = C64::from(full_element(spec, n, l));
        let e = Level::Excited.index() * d + n;
        let g = Level::Ground.index() * d + n + k;
        h[(e, g)] = v;
        h[(g, e)] = v;
    }
    LocalOperator::from_matrix(h, spec.axis)
}

pub fn sideband_hamiltonian(spec: &PulseSpec, trunc: &Truncation) -> Result<FullOperator> {
    sideband_hamiltonian_local(spec, trunc)?.embed(*trunc)
}

/// `g (|e⟩⟨g| a⁴ + h.c.)` on qubit ⊗ `axis`.
pub fn four_phonon_hamiltonian_local(
    g: f64,
    axis: Axis,
    trunc: &Truncation,
) -> Result<LocalOperator> {
    check_room(trunc, axis, 4)?;
    let d = trunc.dim(axis);
    let mut h = DMatrix::zeros(2 * d, 2 * d);
    for n in 0..d - 4 {
        let v = C64::from(g * four_phonon_rate(n));
        let e = Level::Excited.index() * d + n;
        let gr = Level::Ground.index() * d + n + 4;
        h[(e, gr)] = v;
        h[(gr, e)] = v;
    }
    LocalOperator::from_matrix(h, axis)
}

pub fn four_phonon_hamiltonian(g: f64, axis: Axis, trunc: &Truncation) -> Result<FullOperator> {
    four_phonon_hamiltonian_local(g, axis, trunc)?.embed(*trunc)
}

/// Closed-form propagator of the four-phonon Hamiltonian, in 2×2 blocks on
/// `{|e, n⟩, |g, n+4⟩}`:
///
/// ```text
/// |e, n⟩   → cos(ω_n t)|e, n⟩   - i sin(ω_n t)|g, n+4⟩
/// |g, n+4⟩ → cos(ω_n t)|g, n+4⟩ - i sin(ω_n t)|e, n⟩,    ω_n = g √((n+4)!/n!)
/// ```
///
/// `|g, n < 4⟩` is fixed, as is `|e, n⟩` when its partner `|g, n+4⟩` lies
/// above the cutoff.
pub fn closed_form_local(g: f64, t: f64, axis: Axis, trunc: &Truncation) -> Result<LocalOperator> {
    check_room(trunc, axis, 4)?;
    let d = trunc.dim(axis);
    let mut u = DMatrix::identity(2 * d, 2 * d);
    for n in 0..d - 4 {
        let (s, c) = (four_phonon_rate(n) * g * t).sin_cos();
        let e = Level::Excited.index() * d + n;
        let gr = Level::Ground.index() * d + n + 4;
        u[(e, e)] = C64::from(c);
        u[(gr, gr)] = C64::from(c);
        u[(e, gr)] = C64::new(0.0, -s);
        u[(gr, e)] = C64::new(0.0, -s);
    }
    LocalOperator::from_matrix(u, axis)
}

pub fn closed_form_unitary(g: f64, t: f64, trunc: &Truncation, axis: Axis) -> Result<FullOperator> {
    closed_form_local(g, t, axis, trunc)?.embed(*trunc)
}

/// `exp(-i H t)` by Hermitian eigendecomposition.
pub fn expm_oracle(h: &FullOperator, t: f64) -> Result<FullOperator> {
    FullOperator::from_matrix(expm_hermitian(h.matrix(), t)?, h.truncation())
}

/// 2×2 carrier rotation in the `(g, e)` basis.
pub fn rotation_matrix(spec: &RotationSpec) -> ModeOperator {
    let (s, c) = (spec.theta / 2.0).sin_cos();
    let minus_i_s = C64::new(0.0, -s);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::from(c),
            minus_i_s * C64::from_polar(1.0, -spec.phi),
            minus_i_s * C64::from_polar(1.0, spec.phi),
            C64::from(c),
        ],
    );
    ModeOperator::from_matrix(m).expect("2x2 is square")
}

pub fn carrier_rotation(spec: &RotationSpec, trunc: &Truncation) -> FullOperator {
    embed(&rotation_matrix(spec), Factor::Qubit, *trunc).expect("qubit factor has dimension 2")
}

/// Applies a carrier rotation without materializing the full operator.
pub fn apply_rotation(state: &HybridState, spec: &RotationSpec) -> HybridState {
    let r = rotation_matrix(spec);
    let m = r.matrix();
    let g = state.mode_slice(Level::Ground);
    let e = state.mode_slice(Level::Excited);
    let mut amp = Vec::with_capacity(2 * g.len());
    amp.extend(
        g.iter()
            .zip(e)
            .map(|(&a, &b)| m[(0, 0)] * a + m[(0, 1)] * b),
    );
    amp.extend(
        g.iter()
            .zip(e)
            .map(|(&a, &b)| m[(1, 0)] * a + m[(1, 1)] * b),
    );
    HybridState::from_amplitudes(state.truncation(), amp).expect("rotation preserves layout")
}

#[derive(Clone, Debug, PartialEq)]
pub struct PulseOutcome {
    pub state: HybridState,
    /// Population in the guard band of the driven mode after the pulse.
    pub leakage: f64,
    /// Duration actually applied, in seconds.
    pub duration: f64,
    /// For [`AutoDuration::SuperpositionPi`], `1 - min` of the two transfer
    /// probabilities at the chosen time.
    pub predicted_infidelity: Option<f64>,
}

/// The local propagator a pulse applies for duration `t`.
pub fn pulse_propagator(spec: &PulseSpec, t: f64, trunc: &Truncation) -> Result<LocalOperator> {
    match spec.form {
        Form::Closed => closed_form_local(coupling_g(spec)?, t, spec.axis, trunc),
        Form::Full => {
            let h = sideband_hamiltonian_local(spec, trunc)?;
            LocalOperator::from_matrix(expm_hermitian(h.matrix(), t)?, spec.axis)
        }
    }
}

pub fn apply_pulse(state: &HybridState, spec: &PulseSpec) -> Result<PulseOutcome> {
    let trunc = state.truncation();
    spec.validate(&trunc)?;
    let resolved = crate::protocol::resolve_duration(spec)?;
    let out = if resolved.t == 0.0 {
        state.clone()
    } else {
        pulse_propagator(spec, resolved.t, &trunc)?.apply(state)?
    };
    Ok(PulseOutcome {
        leakage: out.guard_population(spec.axis),
        state: out,
        duration: resolved.t,
        predicted_infidelity: resolved.predicted_infidelity,
    })
}
