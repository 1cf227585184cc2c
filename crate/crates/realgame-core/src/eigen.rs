//! Hermitian eigendecomposition via cyclic Jacobi rotations.
//!
//! The matrices this crate diagonalizes are small (dimension at most 64), so
//! Jacobi's quadratically convergent sweeps are both fast and exceptionally
//! accurate: eigenvectors come out orthonormal to machine precision, which
//! matters because the optimizer rebuilds observables as V sign(D) V† and any
//! loss of orthogonality would leak into the score.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::Matrix;
use crate::scalar::Scalar;

/// Eigendecomposition of a Hermitian matrix: `m = vectors · diag(values) · vectors†`.
///
/// Eigenvalues are real and sorted ascending; column `k` of `vectors` is the
/// eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigh<S: Scalar> {
    pub values: Vec<f64>,
    pub vectors: Matrix<S>,
}

/// Relative tolerance accepted on `hermiticity_error` before refusing input.
const HERMITIAN_TOL: f64 = 1e-9;
/// Off-diagonal entries below `scale * OFF_TOL` count as zero.
const OFF_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 64;

/// Diagonalizes a Hermitian matrix.
///
/// Fails on non-square or visibly non-Hermitian input. Roundoff-level
/// asymmetry is folded away by symmetrizing before the sweeps.
pub fn eigh<S: Scalar>(m: &Matrix<S>) -> Result<Eigh<S>> {
    m.check_square()?;
    let n = m.rows();
    let herm = m.hermiticity_error();
    let scale0 = m.max_abs().max(1.0);
    if herm > HERMITIAN_TOL * scale0 {
        return Err(Error::NotHermitian(herm));
    }

    let mut a = m.symmetrize();
    let mut v = Matrix::<S>::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let tol = scale * OFF_TOL;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].abs());
            }
        }
        if off <= tol {
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let beta_abs = beta.abs();
                if beta_abs <= tol {
                    continue;
                }
                let alpha = a[(p, p)].re();
                let gamma = a[(q, q)].re();
                // Unit phase of the off-diagonal entry; the rotation absorbs it
                // so the 2x2 problem reduces to the real symmetric case.
                let w = beta.scale(1.0 / beta_abs);
                let tau = (gamma - alpha) / (2.0 * beta_abs);
                // Smaller root of t^2 - 2 tau t - 1 = 0 keeps the rotation angle
                // below 45 degrees, which is what makes Jacobi stable.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + Float::sqrt(1.0 + tau * tau))
                } else {
                    1.0 / (-tau + Float::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / Float::sqrt(1.0 + t * t);
                let s = t * c;

                // New diagonal; the rotated off-diagonal entry is exactly zero.
                let app = alpha * c * c + gamma * s * s + 2.0 * beta_abs * c * s;
                let aqq = alpha * s * s + gamma * c * c - 2.0 * beta_abs * c * s;

                let cw = w.scale(s); // s * w
                let cwc = w.conj().scale(s); // s * conj(w)

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = akp.scale(c) + akq * cwc;
                    let new_kq = akq.scale(c) - akp * cw;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp.conj();
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq.conj();
                }
                a[(p, p)] = S::from_re(app);
                a[(q, q)] = S::from_re(aqq);
                a[(p, q)] = S::ZERO;
                a[(q, p)] = S::ZERO;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp.scale(c) + vkq * cwc;
                    v[(k, q)] = vkq.scale(c) - vkp * cw;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| a[(i, i)].re()).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).expect("finite eigenvalues"));

    let values: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

impl<S: Scalar> Eigh<S> {
    /// Rebuilds `vectors · diag(f(values)) · vectors†` for a spectral function `f`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> Matrix<S> {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = Matrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.values[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)].scale(fk);
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Eigenvector for the largest eigenvalue.
    pub fn top_vector(&self) -> Vec<S> {
        let n = self.values.len();
        let k = n - 1;
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Spectral sign: `V sign(D) V†` with zero eigenvalues mapped to +1, so the
/// result is always an involution (a valid ±1-outcome observable).
pub fn sign_of_hermitian<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let e = eigh(m)?;
    Ok(e.apply_spectral(|x| if x < 0.0 { -1.0 } else { 1.0 }))
}

/// Projection onto the positive semidefinite cone (negative eigenvalues clipped).
pub fn psd_project<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let e = eigh(m)?;
    Ok(e.apply_spectral(|x| x.max(0.0)))
}

/// Inverse square root with eigenvalues floored at `floor > 0`; used to
/// renormalize a nearly complete set of POVM elements.
pub fn inv_sqrt_psd<S: Scalar>(m: &Matrix<S>, floor: f64) -> Result<Matrix<S>> {
    let e = eigh(m)?;
    Ok(e.apply_spectral(|x| 1.0 / Float::sqrt(x.max(floor))))
}

/// Principal square root of a PSD matrix (small negative eigenvalues clipped).
pub fn sqrt_psd<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let e = eigh(m)?;
    Ok(e.apply_spectral(|x| Float::sqrt(x.max(0.0))))
}

/// Projector onto the strictly positive eigenspace.
pub fn positive_projector<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let e = eigh(m)?;
    Ok(e.apply_spectral(|x| if x > 0.0 { 1.0 } else { 0.0 }))
}

/// Smallest eigenvalue; negative values witness indefiniteness.
pub fn min_eigenvalue<S: Scalar>(m: &Matrix<S>) -> Result<f64> {
    let e = eigh(m)?;
    Ok(e.values[0])
}
