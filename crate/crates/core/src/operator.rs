//! Operators on the full qubit ⊗ x ⊗ y space, and on qubit ⊗ single-mode
//! blocks.

use std::ops::Mul;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{Axis, Factor, Level, ModeOperator, Truncation};
use crate::state::HybridState;

/// Dense operator on the full space, in the amplitude layout of
/// [`Truncation::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct FullOperator {
    mat: DMatrix<C64>,
    trunc: Truncation,
}

impl FullOperator {
    pub fn from_matrix(mat: DMatrix<C64>, trunc: Truncation) -> Result<Self> {
        let d = trunc.full_dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: mat.nrows(),
            });
        }
        Ok(FullOperator { mat, trunc })
    }

    pub fn identity(trunc: Truncation) -> Self {
        let d = trunc.full_dim();
        FullOperator {
            mat: DMatrix::identity(d, d),
            trunc,
        }
    }

    pub fn zeros(trunc: Truncation) -> Self {
        let d = trunc.full_dim();
        FullOperator {
            mat: DMatrix::zeros(d, d),
            trunc,
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn adjoint(&self) -> Self {
        FullOperator {
            mat: self.mat.adjoint(),
            trunc: self.trunc,
        }
    }

    pub fn element(&self, row: (Level, usize, usize), col: (Level, usize, usize)) -> C64 {
        let r = self.trunc.index(row.0, row.1, row.2);
        let c = self.trunc.index(col.0, col.1, col.2);
        self.mat[(r, c)]
    }

    pub fn apply(&self, state: &HybridState) -> Result<HybridState> {
        if state.truncation() != self.trunc {
            return Err(Error::TruncationMismatch {
                left: self.trunc,
                right: state.truncation(),
            });
        }
        let v = DVector::from_column_slice(state.amplitudes());
        let out = &self.mat * v;
        HybridState::from_amplitudes(self.trunc, out.as_slice().to_vec())
    }

    pub fn compose(&self, rhs: &FullOperator) -> Result<Self> {
        if rhs.trunc != self.trunc {
            return Err(Error::TruncationMismatch {
                left: self.trunc,
                right: rhs.trunc,
            });
        }
        Ok(FullOperator {
            mat: &self.mat * &rhs.mat,
            trunc: self.trunc,
        })
    }

    /// `max |H - H†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.mat)
    }

    pub fn max_abs_diff(&self, other: &FullOperator) -> f64 {
        (&self.mat - &other.mat)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `max |A_ij - B_ij|` restricted to rows and columns whose `axis`
    /// phonon number lies below the guard band.
    pub fn max_abs_diff_safe(&self, other: &FullOperator, axis: Axis) -> f64 {
        let keep = safe_indices(&self.trunc, axis);
        let mut worst = 0.0f64;
        for &r in &keep {
            for &c in &keep {
                worst = worst.max((self.mat[(r, c)] - other.mat[(r, c)]).norm());
            }
        }
        worst
    }
}

impl Mul<&FullOperator> for &FullOperator {
    type Output = FullOperator;

    fn mul(self, rhs: &FullOperator) -> FullOperator {
        self.compose(rhs)
            .expect("truncation mismatch in operator product")
    }
}

/// Flat indices whose `axis` phonon number is outside the guard band.
pub fn safe_indices(trunc: &Truncation, axis: Axis) -> Vec<usize> {
    (0..trunc.full_dim())
        .filter(|&i| {
            let (_, nx, ny) = trunc.unindex(i);
            let n = if axis == Axis::X { nx } else { ny };
            !trunc.in_guard_band(axis, n)
        })
        .collect()
}

pub(crate) fn hermiticity_defect(mat: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..mat.nrows() {
        for c in r..mat.ncols() {
            worst = worst.max((mat[(r, c)] - mat[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Operator on qubit ⊗ one mode, indexed `level * (n_max + 1) + n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    mat: DMatrix<C64>,
    axis: Axis,
}

impl LocalOperator {
    pub fn from_matrix(mat: DMatrix<C64>, axis: Axis) -> Result<Self> {
        if mat.nrows() != mat.ncols() || !mat.nrows().is_multiple_of(2) || mat.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "local operator must be square with even dimension, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(LocalOperator { mat, axis })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn mode_dim(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn element(&self, row: (Level, usize), col: (Level, usize)) -> C64 {
        let d = self.mode_dim();
        self.mat[(row.0.index() * d + row.1, col.0.index() * d + col.1)]
    }

    pub fn apply(&self, state: &HybridState) -> Result<HybridState> {
        state.apply_local(&self.mat, self.axis)
    }

    /// Lifts to the full space, identity on the undriven mode.
    pub fn embed(&self, trunc: Truncation) -> Result<FullOperator> {
        let d = trunc.dim(self.axis);
        if self.mode_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: 2 * d,
                found: self.mat.nrows(),
            });
        }
        let other = trunc.dim(self.axis.other());
        let full = trunc.full_dim();
        let mut mat = DMatrix::zeros(full, full);
        let site = |q: Level, n: usize, m: usize| match self.axis {
            Axis::X => trunc.index(q, n, m),
            Axis::Y => trunc.index(q, m, n),
        };
        for m in 0..other {
            for qr in Level::ALL {
                for nr in 0..d {
                    for qc in Level::ALL {
                        for nc in 0..d {
                            let v = self.mat[(qr.index() * d + nr, qc.index() * d + nc)];
                            if v != C64::from(0.0) {
                                mat[(site(qr, nr, m), site(qc, nc, m))] = v;
                            }
                        }
                    }
                }
            }
        }
        Ok(FullOperator { mat, trunc })
    }
}

/// Lifts a single-factor operator to the full space, identity elsewhere.
pub fn embed(op: &ModeOperator, factor: Factor, trunc: Truncation) -> Result<FullOperator> {
    let expected = trunc.factor_dim(factor);
    if op.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: op.dim(),
        });
    }
    let q = DMatrix::<C64>::identity(2, 2);
    let x = DMatrix::<C64>::identity(trunc.dim(Axis::X), trunc.dim(Axis::X));
    let y = DMatrix::<C64>::identity(trunc.dim(Axis::Y), trunc.dim(Axis::Y));
    let m = op.matrix();
    let mat = match factor {
        Factor::Qubit => m.kronecker(&x).kronecker(&y),
        Factor::Mode(Axis::X) => q.kronecker(m).kronecker(&y),
        Factor::Mode(Axis::Y) => q.kronecker(&x).kronecker(m),
    };
    Ok(FullOperator { mat, trunc })
}

/// `exp(-i H t)` of a Hermitian matrix through its eigendecomposition.
pub fn expm_hermitian(h: &DMatrix<C64>, t: f64) -> Result<DMatrix<C64>> {
    let defect = hermiticity_defect(h);
    if defect > 1e-12 {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.nrows();
    if t == 0.0 {
        return Ok(DMatrix::identity(n, n));
    }
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let phases = DVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&e| C64::new(0.0, -e * t).exp()),
    );
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(scaled * v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ladder, Ladder};

    fn trunc() -> Truncation {
        Truncation::square(6, 2).unwrap()
    }

    fn sample_state(t: Truncation) -> HybridState {
        let amp = (0..t.full_dim())
            .map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        HybridState::from_amplitudes(t, amp)
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn embedded_identity_is_identity() {
        let t = trunc();
        let s = sample_state(t);
        for factor in [Factor::Qubit, Factor::Mode(Axis::X), Factor::Mode(Axis::Y)] {
            let id = embed(&ModeOperator::identity(t.factor_dim(factor)), factor, t).unwrap();
            assert_eq!(id.apply(&s).unwrap(), s);
        }
    }

    #[test]
    fn embedded_ladder_actions() {
        let t = trunc();
        let a = ladder(7, Ladder::Lower);
        let ax = embed(&a, Factor::Mode(Axis::X), t).unwrap();
        let out = ax
            .apply(&HybridState::basis(t, Level::Ground, 4, 4).unwrap())
            .unwrap();
        let want = HybridState::basis(t, Level::Ground, 3, 4)
            .unwrap()
            .scaled(C64::from(2.0));
        assert!(out
            .amplitudes()
            .iter()
            .zip(want.amplitudes())
            .all(|(x, y)| (x - y).norm() < 1e-15));

        let ay = embed(&a, Factor::Mode(Axis::Y), t).unwrap();
        let out = ay
            .apply(&HybridState::basis(t, Level::Excited, 4, 0).unwrap())
            .unwrap();
        assert_eq!(out.norm_sqr(), 0.0);
    }

    #[test]
    fn embed_checks_dimension() {
        let t = trunc();
        let a = ladder(5, Ladder::Lower);
        assert!(matches!(
            embed(&a, Factor::Mode(Axis::X), t),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(embed(&a, Factor::Qubit, t).is_err());
    }

    #[test]
    fn different_axes_commute_exactly() {
        let t = Truncation::new(5, 4, 1).unwrap();
        let a = embed(&ladder(6, Ladder::Lower), Factor::Mode(Axis::X), t).unwrap();
        let b = embed(&ladder(5, Ladder::Raise), Factor::Mode(Axis::Y), t).unwrap();
        assert_eq!((&a * &b).matrix(), (&b * &a).matrix());
        let q = embed(
            &ModeOperator::from_matrix(DMatrix::from_row_slice(
                2,
                2,
                &[
                    C64::from(0.0),
                    C64::from(1.0),
                    C64::from(1.0),
                    C64::from(0.0),
                ],
            ))
            .unwrap(),
            Factor::Qubit,
            t,
        )
        .unwrap();
        assert_eq!((&a * &q).matrix(), (&q * &a).matrix());
    }

    #[test]
    fn local_apply_matches_embedding() {
        let t = Truncation::new(5, 4, 1).unwrap();
        let s = sample_state(t);
        for axis in [Axis::X, Axis::Y] {
            let d = 2 * t.dim(axis);
            let mat = DMatrix::from_fn(d, d, |r, c| {
                C64::new((r * 7 + c) as f64 * 0.01, (r as f64 - c as f64) * 0.02)
            });
            let local = LocalOperator::from_matrix(mat, axis).unwrap();
            let a = local.apply(&s).unwrap();
            let b = local.embed(t).unwrap().apply(&s).unwrap();
            let diff = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-14, "{axis}: {diff}");
        }
    }

    #[test]
    fn expm_trivial_cases() {
        let h = DMatrix::from_fn(6, 6, |r, c| {
            C64::new(
                (r + c) as f64,
                if r == c { 0.0 } else { (r as f64) - (c as f64) },
            )
        });
        assert!((expm_hermitian(&h, 0.0).unwrap() - DMatrix::identity(6, 6)).camax() == 0.0);
        let zero = DMatrix::<C64>::zeros(6, 6);
        assert!(
            (expm_hermitian(&zero, 2.5).unwrap() - DMatrix::identity(6, 6))
                .iter()
                .all(|z| z.norm() < 1e-15)
        );
        let u = expm_hermitian(&h, 0.8).unwrap();
        let uu = u.adjoint() * &u;
        assert!((uu - DMatrix::identity(6, 6))
            .iter()
            .all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let mut h = DMatrix::<C64>::zeros(3, 3);
        h[(0, 1)] = C64::from(1.0);
        assert!(matches!(
            expm_hermitian(&h, 1.0),
            Err(Error::NotHermitian(_))
        ));
    }
}
