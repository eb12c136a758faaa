//! State-vector simulation of a trapped ion with two vibrational modes driven
//! on fourth-order sidebands, building N = 8 NOON states of the motion.
//!
//! The crate is organized bottom-up:
//!
//! * [`fock`], [`state`], [`operator`]: truncated Fock spaces, the hybrid
//!   qubit ⊗ x ⊗ y state, dense operators and tensor embedding.
//! * [`laguerre`]: associated Laguerre polynomials for sideband couplings.
//! * [`sideband`]: sideband Hamiltonians, the closed-form four-phonon
//!   propagator, an eigendecomposition oracle, carrier rotations.
//! * [`protocol`]: pulse timing, sequence execution with post-selection, NOON
//!   targets and fidelities.
//! * [`program`]: the line-oriented pulse-program text format.

pub mod error;
pub mod fock;
pub mod laguerre;
pub mod operator;
pub mod program;
pub mod protocol;
pub mod sideband;
pub mod state;

pub use error::{Error, Result};
pub use fock::{
    ladder, lamb_dicke, sg_lower, Axis, Factor, Ladder, LambDickeInput, Level, ModeOperator,
    Truncation,
};
pub use laguerre::laguerre_assoc;
pub use num_complex::Complex64 as C64;
pub use operator::{embed, FullOperator, LocalOperator};
pub use program::{parse, serialize, Program, ProgramError};
pub use protocol::{
    build_noon8, noon_fidelity, noon_target, run_sequence, run_sequence_with,
    superposition_pulse_time, vacuum_pulse_time, Drive, NoonFidelity, RunOptions, RunResult, Step,
};
pub use sideband::{
    apply_pulse, carrier_rotation, closed_form_unitary, coupling_g, expm_oracle,
    sideband_hamiltonian, AutoDuration, Form, PulseDuration, PulseOutcome, PulseSpec, RotationSpec,
};
pub use state::{fidelity, inner, norm, HybridState};
