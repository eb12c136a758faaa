#![allow(dead_code)]

use noon_core::{Axis, HybridState, Level, Truncation, C64};
use rand::Rng;

/// Random normalized state with both modes kept below the guard band.
pub fn random_safe_state<R: Rng>(rng: &mut R, trunc: Truncation) -> HybridState {
    let mut s = HybridState::zeros(trunc);
    for q in Level::ALL {
        for nx in 0..=trunc.safe_max(Axis::X) {
            for ny in 0..=trunc.safe_max(Axis::Y) {
                s.set_amp(
                    q,
                    nx,
                    ny,
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
        }
    }
    s.normalized().unwrap()
}

pub fn max_amp_diff(a: &HybridState, b: &HybridState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
