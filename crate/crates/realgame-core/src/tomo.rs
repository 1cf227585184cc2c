//! State tomography: Pauli expectation values and linear-inversion
//! reconstruction with projection back to the physical set.
//!
//! Pauli strings are indexed in base 4, one digit per qubit with qubit 0 as
//! the most significant digit: 0=I, 1=X, 2=Y, 3=Z. A string P acts on a
//! basis state as P|k⟩ = c_k |k ⊕ mask⟩ with a single nonzero per column, so
//! expectations cost O(2ⁿ) each instead of a dense trace.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::CMatrix;
use crate::quantum::DensityMatrix;
use crate::scalar::c64;

/// Register size cap: 4ⁿ·2ⁿ work keeps n ≤ 6 comfortably in memory and time.
pub const MAX_QUBITS: usize = 6;

/// Per-qubit action of one Pauli digit on bit `b`: (flips bit?, coefficient).
fn digit_action(digit: usize, b: usize) -> (bool, Complex64) {
    match digit {
        0 => (false, c64(1.0, 0.0)),
        1 => (true, c64(1.0, 0.0)),
        2 => (
            true,
            if b == 0 {
                c64(0.0, 1.0)
            } else {
                c64(0.0, -1.0)
            },
        ),
        3 => (
            false,
            if b == 0 {
                c64(1.0, 0.0)
            } else {
                c64(-1.0, 0.0)
            },
        ),
        _ => unreachable!(),
    }
}

/// Bit-flip mask and per-basis-state coefficients of a Pauli string.
/// `P|k⟩ = coeff(k) · |k XOR mask⟩`.
fn string_action(idx: usize, n: usize, k: usize) -> (usize, Complex64) {
    let mut mask = 0usize;
    let mut coeff = c64(1.0, 0.0);
    let mut rest = idx;
    for q in (0..n).rev() {
        let digit = rest & 3;
        rest >>= 2;
        let bit = (k >> (n - 1 - q)) & 1;
        let (flips, c) = digit_action(digit, bit);
        if flips {
            mask |= 1 << (n - 1 - q);
        }
        coeff *= c;
    }
    (mask, coeff)
}

fn qubit_count(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::BadTargets(
            "register dimension must be a power of two",
        ));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::OutOfRange {
            name: "qubit count",
            value: n as f64,
        });
    }
    Ok(n)
}

/// tr(Pρ) for all 4ⁿ Pauli strings, indexed as documented above.
pub fn pauli_expectations(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let n = qubit_count(rho.dim())?;
    let dim = rho.dim();
    let m = rho.mat();
    let mut out = Vec::with_capacity(1 << (2 * n));
    for idx in 0..(1usize << (2 * n)) {
        // tr(Pρ) = Σ_k coeff(k) · ρ[k, k ⊕ mask]; real for Hermitian ρ.
        let mut acc = c64(0.0, 0.0);
        for k in 0..dim {
            let (mask, coeff) = string_action(idx, n, k);
            acc += coeff * m[(k, k ^ mask)];
        }
        out.push(acc.re);
    }
    Ok(out)
}

/// Human-readable label ("IXYZ"-style) for a string index.
pub fn pauli_label(idx: usize, n: usize) -> String {
    let mut s = String::with_capacity(n);
    for q in 0..n {
        let digit = (idx >> (2 * (n - 1 - q))) & 3;
        s.push(match digit {
            0 => 'I',
            1 => 'X',
            2 => 'Y',
            _ => 'Z',
        });
    }
    s
}

/// Index of a label such as "ZZ" or "IXYI".
pub fn pauli_index(label: &str) -> Result<usize> {
    let mut idx = 0usize;
    for ch in label.chars() {
        let digit = match ch {
            'I' => 0,
            'X' => 1,
            'Y' => 2,
            'Z' => 3,
            _ => return Err(Error::InvalidLabel("Pauli labels use I, X, Y, Z")),
        };
        idx = (idx << 2) | digit;
    }
    Ok(idx)
}

/// Linear inversion ρ = 2⁻ⁿ Σ ⟨P⟩·P, then projection to the physical set:
/// eigenvalues clipped at 0 and the spectrum renormalized to unit trace.
pub fn tomographic_reconstruct(expectations: &[f64]) -> Result<DensityMatrix> {
    let len = expectations.len();
    // len = 4ⁿ.
    let mut n = 0usize;
    while (1usize << (2 * n)) < len {
        n += 1;
    }
    if (1usize << (2 * n)) != len || n == 0 || n > MAX_QUBITS {
        return Err(Error::DimensionMismatch {
            expected: 1 << (2 * n),
            got: len,
        });
    }
    let dim = 1usize << n;
    let scale = 1.0 / dim as f64;
    let mut m = CMatrix::zeros(dim, dim);
    for (idx, &v) in expectations.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        for k in 0..dim {
            let (mask, coeff) = string_action(idx, n, k);
            // P[k ⊕ mask, k] = coeff(k).
            m[(k ^ mask, k)] += coeff.scale(v * scale);
        }
    }

    let eig = crate::eigen::eigh(&m.symmetrize())?;
    let clipped: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::NotPositive(total));
    }
    let mut out = CMatrix::zeros(dim, dim);
    for (k, &lam) in clipped.iter().enumerate() {
        if lam == 0.0 {
            continue;
        }
        let w = lam / total;
        for i in 0..dim {
            let vik = eig.vectors[(i, k)].scale(w);
            for j in 0..dim {
                out[(i, j)] += vik * eig.vectors[(j, k)].conj();
            }
        }
    }
    DensityMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::gates::{apply_circuit, epr_circuit};
    use crate::quantum::{bell_state, fidelity_pure, pauli, Ket};
    use crate::scalar::Scalar;

    fn random_density(dim: usize, seed: u64) -> DensityMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CMatrix::from_fn(dim, dim, |_, _| Complex64::sample_gaussian(&mut rng));
        let p = g.matmul(&g.adjoint()).unwrap();
        let tr = p.trace().re;
        DensityMatrix::new_unchecked(p.scale(1.0 / tr))
    }

    /// Dense oracle: build the Pauli string by kron and take the full trace.
    fn dense_expectation(rho: &DensityMatrix, idx: usize, n: usize) -> f64 {
        let mut p = CMatrix::identity(1);
        for q in 0..n {
            let digit = (idx >> (2 * (n - 1 - q))) & 3;
            p = p.kron(&pauli(digit));
        }
        p.matmul(rho.mat()).unwrap().trace().re
    }

    #[test]
    fn maximally_mixed_has_trivial_expectations() {
        let rho = DensityMatrix::maximally_mixed(8);
        let e = pauli_expectations(&rho).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-15);
        for &v in &e[1..] {
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn bell_state_correlators() {
        let rho = DensityMatrix::from_pure(&bell_state(0).unwrap());
        let e = pauli_expectations(&rho).unwrap();
        assert!((e[pauli_index("ZZ").unwrap()] - 1.0).abs() < 1e-14);
        assert!((e[pauli_index("XX").unwrap()] - 1.0).abs() < 1e-14);
        assert!((e[pauli_index("YY").unwrap()] + 1.0).abs() < 1e-14);
        assert!((e[pauli_index("II").unwrap()] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sparse_expectations_match_dense_oracle() {
        let rho = random_density(4, 31);
        let e = pauli_expectations(&rho).unwrap();
        for idx in 0..16 {
            let oracle = dense_expectation(&rho, idx, 2);
            assert!(
                (e[idx] - oracle).abs() < 1e-13,
                "string {}",
                pauli_label(idx, 2)
            );
        }
    }

    #[test]
    fn identity_expectation_is_always_one() {
        for seed in [1, 2, 3] {
            let rho = random_density(8, seed);
            let e = pauli_expectations(&rho).unwrap();
            assert!((e[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn label_round_trip() {
        assert_eq!(pauli_label(pauli_index("IXYZ").unwrap(), 4), "IXYZ");
        assert_eq!(pauli_index("ZZ").unwrap(), 0b1111);
        assert!(pauli_index("AB").is_err());
    }

    #[test]
    fn reconstruction_round_trip_exact() {
        for (dim, seed) in [(2, 41), (4, 42), (8, 43)] {
            let rho = random_density(dim, seed);
            let e = pauli_expectations(&rho).unwrap();
            let back = tomographic_reconstruct(&e).unwrap();
            assert!(
                rho.mat().max_abs_diff(back.mat()) < 1e-8,
                "dim {dim}: {:.2e}",
                rho.mat().max_abs_diff(back.mat())
            );
        }
    }

    #[test]
    fn reconstruction_of_post_epr_product_state() {
        // Two EPR circuits on a 4-qubit register, reconstructed from exact
        // expectations; fidelity to |φ⁺⟩⊗|φ⁺⟩ must be 1.
        let zero = DensityMatrix::from_pure(&Ket::basis(16, 0));
        let mut circuit = epr_circuit(0, 1).unwrap();
        circuit.extend(epr_circuit(2, 3).unwrap());
        let state = apply_circuit(&zero, &circuit).unwrap();
        let e = pauli_expectations(&state).unwrap();
        let back = tomographic_reconstruct(&e).unwrap();
        let target = bell_state(0).unwrap().kron(&bell_state(0).unwrap());
        let f = fidelity_pure(&back, &target).unwrap();
        assert!((f - 1.0).abs() < 1e-8, "fidelity {f}");
    }

    #[test]
    fn perturbed_expectations_still_reconstruct_physically() {
        let rho = random_density(4, 77);
        let mut e = pauli_expectations(&rho).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for v in e.iter_mut().skip(1) {
            *v += rng.gen_range(-0.01..0.01);
        }
        let back = tomographic_reconstruct(&e).unwrap();
        // new() already validated Hermitian/trace/PSD; double-check trace.
        assert!((back.mat().trace().re - 1.0).abs() < 1e-10);
    }
}
