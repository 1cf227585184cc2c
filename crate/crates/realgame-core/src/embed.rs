//! Real-Hilbert-space embedding: any d-dimensional complex state and
//! observable map to a 2d-dimensional real pair with the same Born values.
//!
//! With an ancilla qubit appended as the last tensor factor and
//! P± = |±i⟩⟨±i|, the maps are
//!
//!   ρ̃ = (ρ ⊗ P₊ + ρ* ⊗ P₋) / 2,     H̃ = H ⊗ P₊ + H* ⊗ P₋.
//!
//! Both come out exactly real: in block form over the ancilla index,
//! ρ̃ interleaves [[Re ρ, Im ρ], [−Im ρ, Re ρ]] / 2 and H̃ the same without
//! the 1/2. The state map halves the spectrum and doubles its multiplicity,
//! so ρ̃ stays positive with unit trace, and tr(ρ̃ H̃) = tr(ρ H) identically.

use crate::error::{Error, Result};
use crate::mat::{CMatrix, RMatrix};
use crate::quantum::{minus_i, plus_i, DensityMatrix, HERM_TOL};

/// Imaginary residue above this means the construction itself is broken.
const REAL_TOL: f64 = 1e-12;

fn embed_with(m: &CMatrix, half: bool) -> Result<RMatrix> {
    let plus = plus_i().outer();
    let minus = minus_i().outer();
    let mut out = m.kron(&plus).add(&m.conj().kron(&minus))?;
    if half {
        out = out.scale(0.5);
    }
    let resid = out.max_imag();
    if resid > REAL_TOL {
        return Err(Error::OutOfRange {
            name: "embedding imaginary residue",
            value: resid,
        });
    }
    Ok(out.re_part())
}

/// Doubles the dimension of a state; the result is a real, symmetric,
/// positive, trace-one matrix.
pub fn embed_state(rho: &DensityMatrix) -> Result<RMatrix> {
    embed_with(rho.mat(), true)
}

/// Doubles the dimension of an observable; the input must be Hermitian and
/// the result is real symmetric with the same spectrum, twice over.
pub fn embed_observable(h: &CMatrix) -> Result<RMatrix> {
    h.check_square()?;
    let herm = h.hermiticity_error();
    // NaN must fail this gate too, hence the explicit check.
    if herm.is_nan() || herm > HERM_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(herm));
    }
    embed_with(h, false)
}

/// A matched (ρ̃, H̃) pair, validated on construction.
#[derive(Debug, Clone)]
pub struct RealEmbedding {
    rho_tilde: RMatrix,
    h_tilde: RMatrix,
}

impl RealEmbedding {
    pub fn new(rho: &DensityMatrix, h: &CMatrix) -> Result<Self> {
        if h.rows() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                got: h.rows(),
            });
        }
        let rho_tilde = embed_state(rho)?;
        let h_tilde = embed_observable(h)?;
        let sym = rho_tilde
            .hermiticity_error()
            .max(h_tilde.hermiticity_error());
        if sym > HERM_TOL {
            return Err(Error::NotHermitian(sym));
        }
        let tr = rho_tilde.trace();
        let tr_dev = (tr - 1.0).abs();
        // NaN must fail this gate too, hence the explicit check.
        if tr_dev.is_nan() || tr_dev > 1e-10 {
            return Err(Error::TraceNotOne(tr));
        }
        let min_eig = crate::eigen::min_eigenvalue(&rho_tilde)?;
        if min_eig < -1e-9 {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { rho_tilde, h_tilde })
    }

    pub fn state(&self) -> &RMatrix {
        &self.rho_tilde
    }

    pub fn observable(&self) -> &RMatrix {
        &self.h_tilde
    }

    /// tr(ρ̃ H̃) in the doubled real space.
    pub fn expectation(&self) -> f64 {
        expectation_real(&self.rho_tilde, &self.h_tilde)
    }
}

fn expectation_real(rho: &RMatrix, h: &RMatrix) -> f64 {
    let mut tr = 0.0;
    for i in 0..rho.rows() {
        for k in 0..rho.cols() {
            tr += rho[(i, k)] * h[(k, i)];
        }
    }
    tr
}

/// |tr(ρH) − tr(ρ̃H̃)|, which the construction keeps at rounding error.
pub fn check_trace_equality(rho: &DensityMatrix, h: &CMatrix) -> Result<f64> {
    let emb = RealEmbedding::new(rho, h)?;
    let complex_val = rho.mat().matmul(h)?.trace().re;
    Ok((complex_val - emb.expectation()).abs())
}
