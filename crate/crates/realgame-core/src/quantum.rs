//! States and canonical constants: kets, density matrices, Paulis, Bell
//! states, partial trace, fidelity.
//!
//! Convention used across the whole workspace: subsystem 0 is the most
//! significant digit of a basis label, so |q1 q2 q3 q4⟩ reads left to right
//! and the composite index of |a⟩⊗|b⟩ is `a * dim_b + b`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::eigen;
use crate::error::{Error, Result};
use crate::mat::CMatrix;
use crate::scalar::c64;

pub const HERM_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const EIG_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-12;

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Pure state: normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: Vec<Complex64>,
}

impl Ket {
    /// Validates squared norm = 1 within `NORM_TOL`.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !n2.is_finite() || Float::abs(n2 - 1.0) > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Ket { amps })
    }

    /// Normalizes a nonzero vector; errors on the zero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::NotNormalized(n2));
        }
        let s = 1.0 / Float::sqrt(n2);
        Ok(Ket {
            amps: amps.iter().map(|a| a * s).collect(),
        })
    }

    /// Computational basis state |k⟩ in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        debug_assert!(k < dim);
        let mut amps = vec![Complex64 { re: 0.0, im: 0.0 }; dim];
        amps[k] = Complex64 { re: 1.0, im: 0.0 };
        Ket { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// ⟨self|other⟩ with self conjugated.
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product |self⟩⊗|other⟩.
    pub fn kron(&self, other: &Ket) -> Ket {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ket { amps }
    }

    /// Projector |self⟩⟨self|.
    pub fn outer(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj())
    }
}

/// Mixed state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Full validation: Hermitian within 1e-10, trace 1 within 1e-10,
    /// minimum eigenvalue ≥ -1e-9. Use on untrusted input.
    pub fn new(mat: CMatrix) -> Result<Self> {
        mat.check_square()?;
        if !mat.is_finite() {
            return Err(Error::NotFinite);
        }
        let herm = mat.hermiticity_error();
        if herm > HERM_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = mat.trace();
        if Float::abs(tr.re - 1.0) > TRACE_TOL || Float::abs(tr.im) > TRACE_TOL {
            return Err(Error::TraceNotOne(tr.re));
        }
        let min = eigen::min_eigenvalue(&mat)?;
        if min < -EIG_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(DensityMatrix { mat })
    }

    /// Skips validation. For matrices produced by internal trace-preserving
    /// arithmetic (channels, measurements) where the invariants hold by
    /// construction; keeps inner loops free of eigen-solves.
    pub fn new_unchecked(mat: CMatrix) -> Self {
        debug_assert!(mat.is_square());
        DensityMatrix { mat }
    }

    pub fn from_pure(psi: &Ket) -> Self {
        DensityMatrix { mat: psi.outer() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: CMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    /// ρ_A ⊗ ρ_B.
    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            mat: self.mat.kron(&other.mat),
        }
    }

    /// Convex mixture λ·self + (1-λ)·other.
    pub fn mix(&self, other: &DensityMatrix, lambda: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
            });
        }
        Ok(DensityMatrix {
            mat: self.mat.scale(lambda).add(&other.mat.scale(1.0 - lambda))?,
        })
    }
}

/// Mixed-radix strides for a subsystem list: `stride[k] = Π dims[k+1..]`.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut s = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Traces out every subsystem not listed in `keep`.
///
/// `dims` are the subsystem dimensions in most-significant-first order and
/// must multiply to the state dimension; `keep` must be nonempty, strictly
/// ascending, and in range. The kept subsystems retain their relative order.
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: total,
        });
    }
    if keep.is_empty()
        || keep.windows(2).any(|w| w[0] >= w[1])
        || keep.iter().any(|&k| k >= dims.len())
    {
        return Err(Error::BadTargets(
            "keep must be a nonempty ascending subset",
        ));
    }

    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let stride = strides(dims);
    let dk: usize = keep.iter().map(|&k| dims[k]).product();
    let dt: usize = traced.iter().map(|&k| dims[k]).product();

    // Base index of a kept (or traced) multi-index within the full register.
    let expand = |subsys: &[usize], mut flat: usize| -> usize {
        let mut base = 0usize;
        for &k in subsys.iter().rev() {
            base += (flat % dims[k]) * stride[k];
            flat /= dims[k];
        }
        base
    };

    let m = rho.mat();
    let mut out = CMatrix::zeros(dk, dk);
    for r in 0..dk {
        let rb = expand(keep, r);
        for c in 0..dk {
            let cb = expand(keep, c);
            let mut acc = Complex64 { re: 0.0, im: 0.0 };
            for t in 0..dt {
                let tb = expand(&traced, t);
                acc += m[(rb + tb, cb + tb)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// ⟨ψ|ρ|ψ⟩ as a real number; tiny negatives from roundoff clamp to 0.
pub fn fidelity_pure(rho: &DensityMatrix, psi: &Ket) -> Result<f64> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: psi.dim(),
        });
    }
    let m = rho.mat();
    let d = psi.dim();
    let mut acc = Complex64 { re: 0.0, im: 0.0 };
    for i in 0..d {
        for j in 0..d {
            acc += psi.amps[i].conj() * m[(i, j)] * psi.amps[j];
        }
    }
    let f = acc.re;
    if f < -1e-10 {
        return Err(Error::NotPositive(f));
    }
    Ok(f.max(0.0))
}

/// Pauli matrix by index: 0=I, 1=X, 2=Y, 3=Z.
pub fn pauli(k: usize) -> CMatrix {
    let z = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let entries = match k {
        0 => [one, z, z, one],
        1 => [z, one, one, z],
        2 => [z, c64(0.0, -1.0), c64(0.0, 1.0), z],
        3 => [one, z, z, -one],
        _ => panic!("pauli index out of range"),
    };
    CMatrix::from_slice(2, 2, &entries).expect("2x2")
}

pub fn sigma_x() -> CMatrix {
    pauli(1)
}

pub fn sigma_y() -> CMatrix {
    pauli(2)
}

pub fn sigma_z() -> CMatrix {
    pauli(3)
}

/// The four Bell states, labeled by two bits: 0=|φ⁺⟩, 1=|ψ⁺⟩, 2=|φ⁻⟩, 3=|ψ⁻⟩.
pub fn bell_state(b: usize) -> Result<Ket> {
    let h = FRAC_1_SQRT_2;
    let amps = match b {
        0 => vec![c64(h, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(h, 0.0)],
        1 => vec![c64(0.0, 0.0), c64(h, 0.0), c64(h, 0.0), c64(0.0, 0.0)],
        2 => vec![c64(h, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-h, 0.0)],
        3 => vec![c64(0.0, 0.0), c64(h, 0.0), c64(-h, 0.0), c64(0.0, 0.0)],
        _ => {
            return Err(Error::InvalidLabel("bell label must be in 0..4"));
        }
    };
    Ok(Ket { amps })
}

/// (|0⟩ + i|1⟩)/√2, the +1 eigenvector of Y.
pub fn plus_i() -> Ket {
    Ket {
        amps: vec![c64(FRAC_1_SQRT_2, 0.0), c64(0.0, FRAC_1_SQRT_2)],
    }
}

/// (|0⟩ - i|1⟩)/√2, the -1 eigenvector of Y.
pub fn minus_i() -> Ket {
    Ket {
        amps: vec![c64(FRAC_1_SQRT_2, 0.0), c64(0.0, -FRAC_1_SQRT_2)],
    }
}
