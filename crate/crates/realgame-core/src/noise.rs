//! Kraus noise channels: depolarizing (one and two qubit), amplitude and
//! phase damping, and Werner mixing.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::gates::embed_on_targets;
use crate::mat::CMatrix;
use crate::quantum::{pauli, DensityMatrix};
use crate::scalar::c64;

/// Largest accepted ‖ΣK†K - I‖ entrywise.
pub const TP_TOL: f64 = 1e-10;

/// A completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct NoiseChannel {
    kraus: Vec<CMatrix>,
}

impl NoiseChannel {
    /// Validates equal shapes and trace preservation within `TP_TOL`.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::NotTracePreserving(1.0))?;
        first.check_square()?;
        let dim = first.rows();
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &kraus {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: k.rows(),
                });
            }
            sum = sum.add(&k.adjoint().matmul(k)?)?;
        }
        let err = sum.max_abs_diff(&CMatrix::identity(dim));
        if err > TP_TOL {
            return Err(Error::NotTracePreserving(err));
        }
        Ok(NoiseChannel { kraus })
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].rows()
    }
}

fn check_prob(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value: p })
    }
}

/// Single-qubit depolarizing: Kraus {√(1-3p/4)·I, √(p/4)·X, √(p/4)·Y, √(p/4)·Z}.
///
/// Equivalent map: ρ → (1-p)ρ + p·I/2. Acting on one half of a Bell pair it
/// produces a Werner state with visibility 1-p, hence Bell fidelity 1-3p/4.
pub fn depolarizing1(p: f64) -> Result<NoiseChannel> {
    check_prob("depolarizing probability", p)?;
    let w0 = Float::sqrt(1.0 - 3.0 * p / 4.0);
    let w = Float::sqrt(p / 4.0);
    NoiseChannel::new(vec![
        pauli(0).scale(w0),
        pauli(1).scale(w),
        pauli(2).scale(w),
        pauli(3).scale(w),
    ])
}

/// Two-qubit depolarizing: weight 1-15p/16 on I⊗I, p/16 on the other 15
/// Pauli products. At p=1 this is the full twirl onto I/4.
pub fn depolarizing2(p: f64) -> Result<NoiseChannel> {
    check_prob("depolarizing probability", p)?;
    let mut kraus = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let weight = if i == 0 && j == 0 {
                1.0 - 15.0 * p / 16.0
            } else {
                p / 16.0
            };
            kraus.push(pauli(i).kron(&pauli(j)).scale(Float::sqrt(weight)));
        }
    }
    NoiseChannel::new(kraus)
}

/// Amplitude damping toward |0⟩ with decay probability γ.
pub fn amplitude_damping(gamma: f64) -> Result<NoiseChannel> {
    check_prob("damping probability", gamma)?;
    let z = c64(0.0, 0.0);
    let k0 = CMatrix::from_slice(
        2,
        2,
        &[c64(1.0, 0.0), z, z, c64(Float::sqrt(1.0 - gamma), 0.0)],
    )?;
    let k1 = CMatrix::from_slice(2, 2, &[z, c64(Float::sqrt(gamma), 0.0), z, z])?;
    NoiseChannel::new(vec![k0, k1])
}

/// Phase damping: off-diagonal decay by √(1-λ) without population transfer.
pub fn phase_damping(lambda: f64) -> Result<NoiseChannel> {
    check_prob("damping probability", lambda)?;
    let z = c64(0.0, 0.0);
    let k0 = CMatrix::from_slice(
        2,
        2,
        &[c64(1.0, 0.0), z, z, c64(Float::sqrt(1.0 - lambda), 0.0)],
    )?;
    let k1 = CMatrix::from_slice(2, 2, &[z, z, z, c64(Float::sqrt(lambda), 0.0)])?;
    NoiseChannel::new(vec![k0, k1])
}

/// ρ → Σ K ρ K† with each Kraus operator embedded on `targets`.
pub fn apply_channel(
    rho: &DensityMatrix,
    ch: &NoiseChannel,
    targets: &[usize],
) -> Result<DensityMatrix> {
    let dim = rho.dim();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::BadTargets(
            "register dimension must be a power of two",
        ));
    }
    let n = dim.trailing_zeros() as usize;
    if ch.dim() != (1 << targets.len()) {
        return Err(Error::DimensionMismatch {
            expected: 1 << targets.len(),
            got: ch.dim(),
        });
    }
    let mut out = CMatrix::zeros(dim, dim);
    for k in ch.kraus() {
        let kf = embed_on_targets(k, n, targets)?;
        out = out.add(&kf.matmul(rho.mat())?.matmul(&kf.adjoint())?)?;
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Werner mixing: ρ → v·ρ + (1-v)·I/d.
pub fn werner_mix(rho: &DensityMatrix, v: f64) -> Result<DensityMatrix> {
    check_prob("visibility", v)?;
    let d = rho.dim();
    let mixed = CMatrix::identity(d).scale((1.0 - v) / d as f64);
    Ok(DensityMatrix::new_unchecked(
        rho.mat().scale(v).add(&mixed)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::quantum::{bell_state, fidelity_pure, Ket};
    use crate::scalar::Scalar;

    fn random_density(dim: usize, seed: u64) -> DensityMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CMatrix::from_fn(dim, dim, |_, _| Complex64::sample_gaussian(&mut rng));
        let p = g.matmul(&g.adjoint()).unwrap();
        let tr = p.trace().re;
        DensityMatrix::new_unchecked(p.scale(1.0 / tr))
    }

    #[test]
    fn zero_depolarizing_is_identity_map() {
        let rho = random_density(4, 5);
        let out = apply_channel(&rho, &depolarizing1(0.0).unwrap(), &[1]).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-15);
        let out2 = apply_channel(&rho, &depolarizing2(0.0).unwrap(), &[0, 1]).unwrap();
        assert!(out2.mat().max_abs_diff(rho.mat()) < 1e-14);
    }

    #[test]
    fn depolarized_half_of_bell_pair_is_werner() {
        // Closed-form oracle: v = 1-p, so fidelity (3v+1)/4 = 1 - 3p/4.
        let bell = DensityMatrix::from_pure(&bell_state(0).unwrap());
        for p in [0.0, 0.1, 0.37, 1.0] {
            let out = apply_channel(&bell, &depolarizing1(p).unwrap(), &[0]).unwrap();
            let f = fidelity_pure(&out, &bell_state(0).unwrap()).unwrap();
            assert!((f - (1.0 - 0.75 * p)).abs() < 1e-14, "p={p}");
            let werner = werner_mix(&bell, 1.0 - p).unwrap();
            assert!(out.mat().max_abs_diff(werner.mat()) < 1e-14, "p={p}");
        }
    }

    #[test]
    fn full_amplitude_damping_decays_to_ground() {
        let rho = random_density(2, 9);
        let out = apply_channel(&rho, &amplitude_damping(1.0).unwrap(), &[0]).unwrap();
        let ground = DensityMatrix::from_pure(&Ket::basis(2, 0));
        assert!(out.mat().max_abs_diff(ground.mat()) < 1e-14);
    }

    #[test]
    fn phase_damping_kills_coherence_only() {
        let plus = Ket::normalized(vec![c64(1.0, 0.0), c64(1.0, 0.0)]).unwrap();
        let rho = DensityMatrix::from_pure(&plus);
        let out = apply_channel(&rho, &phase_damping(1.0).unwrap(), &[0]).unwrap();
        assert!((out.mat()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(out.mat()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn full_two_qubit_depolarizing_is_the_twirl() {
        let rho = random_density(4, 13);
        let out = apply_channel(&rho, &depolarizing2(1.0).unwrap(), &[0, 1]).unwrap();
        let mixed = CMatrix::identity(4).scale(0.25);
        assert!(out.mat().max_abs_diff(&mixed) < 1e-14);
    }

    #[test]
    fn channels_preserve_trace_and_hermiticity() {
        let rho = random_density(8, 17);
        let channels: Vec<(NoiseChannel, Vec<usize>)> = vec![
            (depolarizing1(0.23).unwrap(), vec![1]),
            (depolarizing2(0.4).unwrap(), vec![0, 2]),
            (amplitude_damping(0.31).unwrap(), vec![2]),
            (phase_damping(0.6).unwrap(), vec![0]),
        ];
        for (ch, targets) in &channels {
            let out = apply_channel(&rho, ch, targets).unwrap();
            assert!((out.mat().trace().re - 1.0).abs() < 1e-10);
            assert!(out.mat().hermiticity_error() < 1e-10);
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(depolarizing1(-0.1).is_err());
        assert!(depolarizing1(1.1).is_err());
        assert!(werner_mix(&random_density(4, 1), 1.5).is_err());
        // Non-trace-preserving Kraus set.
        assert!(NoiseChannel::new(vec![pauli(1).scale(0.5)]).is_err());
    }
}
