use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{Axis, Level, Truncation};

/// Amplitudes over `(level, n_x, n_y)`, laid out qubit-slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridState {
    amp: Vec<C64>,
    trunc: Truncation,
}

impl HybridState {
    pub fn zeros(trunc: Truncation) -> Self {
        HybridState {
            amp: vec![C64::from(0.0); trunc.full_dim()],
            trunc,
        }
    }

    /// Product basis state `|level⟩|n_x⟩|n_y⟩`.
    pub fn basis(trunc: Truncation, level: Level, n_x: usize, n_y: usize) -> Result<Self> {
        trunc.check_fock(n_x, n_y)?;
        let mut s = Self::zeros(trunc);
        s.amp[trunc.index(level, n_x, n_y)] = C64::from(1.0);
        Ok(s)
    }

    pub fn from_amplitudes(trunc: Truncation, amp: Vec<C64>) -> Result<Self> {
        if amp.len() != trunc.full_dim() {
            return Err(Error::DimensionMismatch {
                expected: trunc.full_dim(),
                found: amp.len(),
            });
        }
        if amp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "state amplitudes must be finite".into(),
            ));
        }
        Ok(HybridState { amp, trunc })
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn amp(&self, level: Level, n_x: usize, n_y: usize) -> C64 {
        self.amp[self.trunc.index(level, n_x, n_y)]
    }

    pub fn set_amp(&mut self, level: Level, n_x: usize, n_y: usize, value: C64) {
        let i = self.trunc.index(level, n_x, n_y);
        self.amp[i] = value;
    }

    /// Contiguous block of mode amplitudes attached to one qubit level,
    /// indexed `n_x * (n_max_y + 1) + n_y`.
    pub fn mode_slice(&self, level: Level) -> &[C64] {
        let block = self.trunc.dim(Axis::X) * self.trunc.dim(Axis::Y);
        let start = level.index() * block;
        &self.amp[start..start + block]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument(
                "cannot normalize a zero state".into(),
            ));
        }
        Ok(self.scaled(C64::from(1.0 / n)))
    }

    pub fn scaled(&self, c: C64) -> Self {
        HybridState {
            amp: self.amp.iter().map(|z| z * c).collect(),
            trunc: self.trunc,
        }
    }

    /// Unnormalized projection onto one qubit level.
    pub fn project(&self, level: Level) -> Self {
        let mut out = Self::zeros(self.trunc);
        let block = self.mode_slice(level).len();
        let start = level.index() * block;
        out.amp[start..start + block].copy_from_slice(self.mode_slice(level));
        out
    }

    pub fn level_population(&self, level: Level) -> f64 {
        self.mode_slice(level).iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn excited_population(&self) -> f64 {
        self.level_population(Level::Excited)
    }

    /// Phonon-number distribution of one mode, summed over everything else.
    pub fn marginal(&self, axis: Axis) -> Vec<f64> {
        let mut out = vec![0.0; self.trunc.dim(axis)];
        for (i, z) in self.amp.iter().enumerate() {
            let (_, nx, ny) = self.trunc.unindex(i);
            let n = match axis {
                Axis::X => nx,
                Axis::Y => ny,
            };
            out[n] += z.norm_sqr();
        }
        out
    }

    pub fn mean_phonons(&self, axis: Axis) -> f64 {
        self.marginal(axis)
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// Population in the Fock sector `(n_x, n_y)`, both qubit levels.
    pub fn sector_population(&self, n_x: usize, n_y: usize) -> f64 {
        Level::ALL
            .iter()
            .map(|&q| self.amp(q, n_x, n_y).norm_sqr())
            .sum()
    }

    /// Probability mass in the top `guard` levels of `axis`.
    pub fn guard_population(&self, axis: Axis) -> f64 {
        self.marginal(axis)
            .iter()
            .enumerate()
            .filter(|(n, _)| self.trunc.in_guard_band(axis, *n))
            .map(|(_, p)| p)
            .sum()
    }

    /// Applies an operator on qubit ⊗ `axis`, indexed `level * (n_max + 1) + n`,
    /// acting as the identity on the other mode.
    pub fn apply_local(&self, op: &DMatrix<C64>, axis: Axis) -> Result<Self> {
        let d = self.trunc.dim(axis);
        let other = self.trunc.dim(axis.other());
        if op.nrows() != 2 * d || op.ncols() != 2 * d {
            return Err(Error::DimensionMismatch {
                expected: 2 * d,
                found: op.nrows(),
            });
        }
        let mut out = Self::zeros(self.trunc);
        let mut buf = nalgebra::DVector::zeros(2 * d);
        let site = |q: Level, n: usize, m: usize| match axis {
            Axis::X => self.trunc.index(q, n, m),
            Axis::Y => self.trunc.index(q, m, n),
        };
        for m in 0..other {
            for q in Level::ALL {
                for n in 0..d {
                    buf[q.index() * d + n] = self.amp[site(q, n, m)];
                }
            }
            let res = op * &buf;
            for q in Level::ALL {
                for n in 0..d {
                    out.amp[site(q, n, m)] = res[q.index() * d + n];
                }
            }
        }
        Ok(out)
    }

    pub fn check_same_truncation(&self, other: &HybridState) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }
}

/// `⟨a|b⟩`.
pub fn inner(a: &HybridState, b: &HybridState) -> Result<C64> {
    a.check_same_truncation(b)?;
    Ok(mode_inner(&a.amp, &b.amp))
}

pub fn norm(a: &HybridState) -> f64 {
    a.norm()
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &HybridState, b: &HybridState) -> Result<f64> {
    Ok(inner(a, b)?.norm_sqr())
}

/// Hermitian inner product of two raw amplitude slices.
pub fn mode_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
