//! Truncated Fock spaces and single-factor operators.
//!
//! The full Hilbert space is qubit ⊗ x-mode ⊗ y-mode. Amplitudes are laid
//! out with the qubit index slowest, then `n_x`, then `n_y`; the qubit index
//! is 0 for `|g⟩` and 1 for `|e⟩`.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Electronic level of the ion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Ground,
    Excited,
}

impl Level {
    pub const ALL: [Level; 2] = [Level::Ground, Level::Excited];

    pub fn index(self) -> usize {
        match self {
            Level::Ground => 0,
            Level::Excited => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Level> {
        match i {
            0 => Some(Level::Ground),
            1 => Some(Level::Excited),
            _ => None,
        }
    }

    pub fn flipped(self) -> Level {
        match self {
            Level::Ground => Level::Excited,
            Level::Excited => Level::Ground,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Level::Ground => "g",
            Level::Excited => "e",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One of the two vibrational modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A tensor factor of the full space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Qubit,
    Mode(Axis),
}

impl From<Axis> for Factor {
    fn from(axis: Axis) -> Self {
        Factor::Mode(axis)
    }
}

/// Fock-space cutoffs for both modes plus the width of the guard band, the
/// top `guard` levels of each mode that should stay empty during a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    n_max_x: usize,
    n_max_y: usize,
    guard: usize,
}

impl Truncation {
    pub const DEFAULT_N_MAX: usize = 12;
    pub const DEFAULT_GUARD: usize = 4;

    pub fn new(n_max_x: usize, n_max_y: usize, guard: usize) -> Result<Self> {
        if guard > n_max_x || guard > n_max_y {
            return Err(Error::TruncationTooSmall(format!(
                "guard band {guard} is wider than the mode cutoffs ({n_max_x}, {n_max_y})"
            )));
        }
        Ok(Truncation {
            n_max_x,
            n_max_y,
            guard,
        })
    }

    /// Same cutoff on both modes.
    pub fn square(n_max: usize, guard: usize) -> Result<Self> {
        Self::new(n_max, n_max, guard)
    }

    pub fn n_max_x(&self) -> usize {
        self.n_max_x
    }

    pub fn n_max_y(&self) -> usize {
        self.n_max_y
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn n_max(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.n_max_x,
            Axis::Y => self.n_max_y,
        }
    }

    pub fn dim(&self, axis: Axis) -> usize {
        self.n_max(axis) + 1
    }

    pub fn factor_dim(&self, factor: Factor) -> usize {
        match factor {
            Factor::Qubit => 2,
            Factor::Mode(axis) => self.dim(axis),
        }
    }

    /// Highest Fock index below the guard band.
    pub fn safe_max(&self, axis: Axis) -> usize {
        self.n_max(axis) - self.guard
    }

    pub fn in_guard_band(&self, axis: Axis, n: usize) -> bool {
        n > self.safe_max(axis)
    }

    pub fn full_dim(&self) -> usize {
        2 * self.dim(Axis::X) * self.dim(Axis::Y)
    }

    /// Flat amplitude index of `|level, n_x, n_y⟩`.
    pub fn index(&self, level: Level, n_x: usize, n_y: usize) -> usize {
        debug_assert!(n_x <= self.n_max_x && n_y <= self.n_max_y);
        (level.index() * self.dim(Axis::X) + n_x) * self.dim(Axis::Y) + n_y
    }

    /// Inverse of [`Truncation::index`].
    pub fn unindex(&self, i: usize) -> (Level, usize, usize) {
        let dy = self.dim(Axis::Y);
        let dx = self.dim(Axis::X);
        let n_y = i % dy;
        let n_x = (i / dy) % dx;
        let q = i / (dx * dy);
        (Level::from_index(q).expect("index out of range"), n_x, n_y)
    }

    pub fn check_fock(&self, n_x: usize, n_y: usize) -> Result<()> {
        if n_x > self.n_max_x || n_y > self.n_max_y {
            return Err(Error::TruncationTooSmall(format!(
                "Fock state ({n_x}, {n_y}) exceeds cutoffs ({}, {})",
                self.n_max_x, self.n_max_y
            )));
        }
        Ok(())
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            n_max_x: Self::DEFAULT_N_MAX,
            n_max_y: Self::DEFAULT_N_MAX,
            guard: Self::DEFAULT_GUARD,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Lower,
    Raise,
}

/// Dense operator on a single tensor factor (one mode, or the qubit).
#[derive(Clone, Debug, PartialEq)]
pub struct ModeOperator {
    mat: DMatrix<C64>,
}

impl ModeOperator {
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "mode operator must be square and non-empty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(ModeOperator { mat })
    }

    pub fn identity(dim: usize) -> Self {
        ModeOperator {
            mat: DMatrix::identity(dim, dim),
        }
    }

    /// `a` or `a†` truncated to `dim` levels.
    pub fn ladder(dim: usize, which: Ladder) -> Self {
        let mut mat = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            let v = C64::from((n as f64).sqrt());
            match which {
                Ladder::Lower => mat[(n - 1, n)] = v,
                Ladder::Raise => mat[(n, n - 1)] = v,
            }
        }
        ModeOperator { mat }
    }

    pub fn number(dim: usize) -> Self {
        let diag = nalgebra::DVector::from_fn(dim, |n, _| C64::from(n as f64));
        ModeOperator {
            mat: DMatrix::from_diagonal(&diag),
        }
    }

    /// Susskind-Glogower lowering operator: `|n⟩ → |n-1⟩`, `|0⟩ → 0`.
    pub fn sg_lower(dim: usize) -> Self {
        let mut mat = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            mat[(n - 1, n)] = C64::from(1.0);
        }
        ModeOperator { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        ModeOperator {
            mat: self.mat.adjoint(),
        }
    }

    pub fn compose(&self, rhs: &ModeOperator) -> Self {
        ModeOperator {
            mat: &self.mat * &rhs.mat,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(ModeOperator::identity(self.dim()), |acc, _| {
            acc.compose(self)
        })
    }

    /// Applies the operator to `|n⟩` and returns the resulting column.
    pub fn apply_fock(&self, n: usize) -> Vec<C64> {
        self.mat.column(n).iter().copied().collect()
    }
}

pub fn ladder(dim: usize, which: Ladder) -> ModeOperator {
    ModeOperator::ladder(dim, which)
}

pub fn sg_lower(dim: usize) -> ModeOperator {
    ModeOperator::sg_lower(dim)
}

/// Ground-state spread `√⟨Δx²⟩` and laser wavelength along one axis, in the
/// same length unit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambDickeInput {
    pub ground_state_spread: f64,
    pub wavelength: f64,
}

/// `η = 2π · spread / wavelength`.
pub fn lamb_dicke(input: LambDickeInput) -> Result<f64> {
    let LambDickeInput {
        ground_state_spread,
        wavelength,
    } = input;
    if !(ground_state_spread > 0.0 && ground_state_spread.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "ground-state spread must be positive, got {ground_state_spread}"
        )));
    }
    if !(wavelength > 0.0 && wavelength.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    Ok(TAU * ground_state_spread / wavelength)
}
