//! Gate-level circuit layer: unitaries embedded on qubit targets, plus the
//! iSWAP-based decompositions used for EPR preparation and the Bell-state
//! measurement.
//!
//! The native two-qubit gate is iSWAP (|01⟩→i|10⟩, |10⟩→i|01⟩). Both
//! circuits below follow from the identity iSWAP = SWAP·CZ·(S⊗S): the SWAP
//! factor is absorbed into the symmetric input state (EPR prep) or into a
//! relabeling of the measured bits (BSM), leaving iSWAP plus local gates.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::CMatrix;
use crate::quantum::DensityMatrix;
use crate::scalar::c64;

/// Largest accepted ‖U†U - I‖ entrywise.
pub const UNITARY_TOL: f64 = 1e-10;

/// A unitary bound to specific qubits of a register.
#[derive(Debug, Clone)]
pub struct GateOp {
    unitary: CMatrix,
    targets: Vec<usize>,
}

impl GateOp {
    /// Validates shape (2^k where k = target count, k ∈ {1,2}), distinct
    /// targets, and unitarity within `UNITARY_TOL`.
    pub fn new(unitary: CMatrix, targets: Vec<usize>) -> Result<Self> {
        if targets.is_empty() || targets.len() > 2 {
            return Err(Error::BadTargets("gates act on 1 or 2 qubits"));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::BadTargets("targets must be distinct"));
        }
        unitary.check_square()?;
        let want = 1usize << targets.len();
        if unitary.rows() != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                got: unitary.rows(),
            });
        }
        let err = unitary.unitarity_error();
        if err > UNITARY_TOL {
            return Err(Error::NotUnitary(err));
        }
        Ok(GateOp { unitary, targets })
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }
}

pub fn hadamard() -> CMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_slice(2, 2, &[c64(h, 0.0), c64(h, 0.0), c64(h, 0.0), c64(-h, 0.0)]).expect("2x2")
}

/// Phase gate S = diag(1, i).
pub fn s_gate() -> CMatrix {
    CMatrix::from_slice(
        2,
        2,
        &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 1.0)],
    )
    .expect("2x2")
}

/// S† = diag(1, -i).
pub fn sdg_gate() -> CMatrix {
    s_gate().adjoint()
}

/// iSWAP: |00⟩→|00⟩, |01⟩→i|10⟩, |10⟩→i|01⟩, |11⟩→|11⟩.
pub fn iswap() -> CMatrix {
    let z = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    CMatrix::from_slice(
        4,
        4,
        &[
            one, z, z, z, //
            z, z, i, z, //
            z, i, z, z, //
            z, z, z, one,
        ],
    )
    .expect("4x4")
}

pub fn cz() -> CMatrix {
    CMatrix::from_fn(4, 4, |i, j| {
        if i != j {
            c64(0.0, 0.0)
        } else if i == 3 {
            c64(-1.0, 0.0)
        } else {
            c64(1.0, 0.0)
        }
    })
}

pub fn swap_gate() -> CMatrix {
    CMatrix::from_fn(4, 4, |i, j| {
        let swapped = (i & 1) << 1 | (i >> 1);
        if j == swapped {
            c64(1.0, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

fn qubit_count(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() && dim >= 2 {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::BadTargets(
            "register dimension must be a power of two",
        ))
    }
}

/// Expands a 2^k-dimensional unitary to the full register.
///
/// `targets[0]` is the gate's most significant qubit; qubit 0 is the
/// register's most significant bit.
pub fn embed_on_targets(u: &CMatrix, n_qubits: usize, targets: &[usize]) -> Result<CMatrix> {
    let k = targets.len();
    if u.rows() != (1 << k) {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            got: u.rows(),
        });
    }
    if targets.iter().any(|&t| t >= n_qubits) {
        return Err(Error::BadTargets("target outside register"));
    }
    let dim = 1usize << n_qubits;
    let bitpos = |q: usize| n_qubits - 1 - q;
    let mut out = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        let mut grow = 0usize;
        let mut rest = row;
        for (j, &t) in targets.iter().enumerate() {
            let bit = (row >> bitpos(t)) & 1;
            grow |= bit << (k - 1 - j);
            rest &= !(1 << bitpos(t));
        }
        for gcol in 0..(1 << k) {
            let entry = u[(grow, gcol)];
            if entry == (Complex64 { re: 0.0, im: 0.0 }) {
                continue;
            }
            let mut col = rest;
            for (j, &t) in targets.iter().enumerate() {
                let bit = (gcol >> (k - 1 - j)) & 1;
                col |= bit << bitpos(t);
            }
            out[(row, col)] = entry;
        }
    }
    Ok(out)
}

/// ρ → UρU† for a full-register unitary.
pub fn apply_unitary_full(rho: &DensityMatrix, u: &CMatrix) -> Result<DensityMatrix> {
    let m = u.matmul(rho.mat())?.matmul(&u.adjoint())?;
    Ok(DensityMatrix::new_unchecked(m))
}

/// ρ → UρU† with the gate's unitary embedded on its targets.
pub fn apply_gate(rho: &DensityMatrix, g: &GateOp) -> Result<DensityMatrix> {
    let n = qubit_count(rho.dim())?;
    let u = embed_on_targets(g.unitary(), n, g.targets())?;
    apply_unitary_full(rho, &u)
}

/// Applies gates in list order (first element acts first).
pub fn apply_circuit(rho: &DensityMatrix, gates: &[GateOp]) -> Result<DensityMatrix> {
    let mut state = rho.clone();
    for g in gates {
        state = apply_gate(&state, g)?;
    }
    Ok(state)
}

/// EPR preparation from |00⟩ on qubits (a, b):
///
/// ```text
/// H(a), H(b), S†(a), S†(b), iSWAP(a,b), H(b)   →   |φ⁺⟩ exactly
/// ```
///
/// This is (I⊗H)·CZ·(H⊗H) with CZ rewritten through iSWAP; the leftover SWAP
/// acts on a symmetric state and vanishes.
pub fn epr_circuit(a: usize, b: usize) -> Result<Vec<GateOp>> {
    Ok(vec![
        GateOp::new(hadamard(), vec![a])?,
        GateOp::new(hadamard(), vec![b])?,
        GateOp::new(sdg_gate(), vec![a])?,
        GateOp::new(sdg_gate(), vec![b])?,
        GateOp::new(iswap(), vec![a, b])?,
        GateOp::new(hadamard(), vec![b])?,
    ])
}

/// Bell-basis rotation on qubits (a, b) before computational readout:
///
/// ```text
/// S†(a), H(b), S†(b), iSWAP(a,b), H(a), H(b)
/// ```
///
/// Maps |B_label⟩ to the computational state |swap(label)⟩, so the measured
/// bits identify the Bell state after [`bsm_relabel`]. The swap comes from
/// rewriting CZ through iSWAP and commuting the SWAP into the readout.
pub fn bsm_circuit(a: usize, b: usize) -> Result<Vec<GateOp>> {
    Ok(vec![
        GateOp::new(sdg_gate(), vec![a])?,
        GateOp::new(hadamard(), vec![b])?,
        GateOp::new(sdg_gate(), vec![b])?,
        GateOp::new(iswap(), vec![a, b])?,
        GateOp::new(hadamard(), vec![a])?,
        GateOp::new(hadamard(), vec![b])?,
    ])
}

/// Undoes the bit swap left in the hardware BSM: measured bits `m` identify
/// Bell state `bsm_relabel(m)`. Involution on {0,1,2,3}.
pub fn bsm_relabel(m: usize) -> usize {
    debug_assert!(m < 4);
    ((m & 1) << 1) | (m >> 1)
}
