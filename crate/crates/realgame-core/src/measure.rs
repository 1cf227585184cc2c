//! Projective measurement, shot sampling, and readout error.
//!
//! Readout is modeled per qubit: a 2x2 confusion matrix R_q with
//! R_q[m, t] = P(measured m | true t). The joint confusion matrix is the
//! tensor product of the per-qubit ones, so inverting qubit by qubit along
//! each axis IS the exact inverse on the joint distribution; "joint" versus
//! "per-qubit" correction only differ when crosstalk couples qubits, which
//! this model deliberately leaves out.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::embed_on_targets;
use crate::mat::CMatrix;
use crate::quantum::{bell_state, DensityMatrix, Ket};

pub const PROJ_TOL: f64 = 1e-10;
pub const SUM_TOL: f64 = 1e-10;
pub const NEG_TOL: f64 = -1e-12;
/// Outcomes with probability below this keep no post-measurement state.
pub const POST_STATE_MIN_P: f64 = 1e-12;

/// Probability distribution over fixed-width bit strings, with optional
/// post-measurement states per outcome.
#[derive(Debug, Clone)]
pub struct OutcomeDist {
    width: usize,
    probs: Vec<f64>,
    post_states: Vec<Option<DensityMatrix>>,
}

impl OutcomeDist {
    /// Validates length 2^width, entries ≥ -1e-12, sum 1 within 1e-10.
    pub fn new(width: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != (1 << width) {
            return Err(Error::DimensionMismatch {
                expected: 1 << width,
                got: probs.len(),
            });
        }
        let mut sum = 0.0;
        for &p in &probs {
            if !p.is_finite() {
                return Err(Error::NotFinite);
            }
            if p < NEG_TOL {
                return Err(Error::NotPositive(p));
            }
            sum += p;
        }
        if Float::abs(sum - 1.0) > SUM_TOL {
            return Err(Error::TraceNotOne(sum));
        }
        let n = probs.len();
        Ok(OutcomeDist {
            width,
            probs,
            post_states: vec![None; n],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    pub fn post_state(&self, outcome: usize) -> Option<&DensityMatrix> {
        self.post_states[outcome].as_ref()
    }
}

fn check_projectors(projectors: &[CMatrix]) -> Result<usize> {
    let k = projectors.len();
    if k < 2 || !k.is_power_of_two() {
        return Err(Error::BadProjectors(k as f64));
    }
    let dim = projectors[0].rows();
    let mut sum = CMatrix::zeros(dim, dim);
    for (i, p) in projectors.iter().enumerate() {
        p.check_square()?;
        if p.rows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.rows(),
            });
        }
        // Idempotence.
        let sq = p.matmul(p)?;
        let idem = sq.max_abs_diff(p);
        if idem > PROJ_TOL {
            return Err(Error::BadProjectors(idem));
        }
        // Mutual orthogonality against earlier projectors.
        for q in projectors.iter().take(i) {
            let cross = p.matmul(q)?.max_abs();
            if cross > PROJ_TOL {
                return Err(Error::BadProjectors(cross));
            }
        }
        sum = sum.add(p)?;
    }
    let complete = sum.max_abs_diff(&CMatrix::identity(dim));
    if complete > PROJ_TOL {
        return Err(Error::BadProjectors(complete));
    }
    Ok(k.trailing_zeros() as usize)
}

/// Born rule: p_k = tr(P_k ρ), post-state P_k ρ P_k / p_k.
///
/// The projector set must be idempotent, mutually orthogonal, and complete.
/// Outcomes with p ≤ 1e-12 carry no post-state.
pub fn measure_projective(rho: &DensityMatrix, projectors: &[CMatrix]) -> Result<OutcomeDist> {
    let width = check_projectors(projectors)?;
    if projectors[0].rows() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: projectors[0].rows(),
        });
    }
    let mut probs = Vec::with_capacity(projectors.len());
    let mut posts = Vec::with_capacity(projectors.len());
    for p in projectors {
        let pk = p.matmul(rho.mat())?.trace().re;
        probs.push(pk.max(0.0));
        if pk > POST_STATE_MIN_P {
            let m = p.matmul(rho.mat())?.matmul(p)?.scale(1.0 / pk);
            posts.push(Some(DensityMatrix::new_unchecked(m)));
        } else {
            posts.push(None);
        }
    }
    let mut dist = OutcomeDist::new(width, probs)?;
    dist.post_states = posts;
    Ok(dist)
}

/// ±1-eigenspace projectors (Π₊, Π₋) = (I ± O)/2 of an involution observable.
pub fn observable_projectors(obs: &CMatrix) -> Result<[CMatrix; 2]> {
    obs.check_square()?;
    let d = obs.rows();
    let id = CMatrix::identity(d);
    // O² = I is what makes (I ± O)/2 projectors; verify instead of trusting.
    let sq = obs.matmul(obs)?;
    let err = sq.max_abs_diff(&id);
    if err > PROJ_TOL {
        return Err(Error::BadProjectors(err));
    }
    Ok([id.add(obs)?.scale(0.5), id.sub(obs)?.scale(0.5)])
}

/// |k⟩⟨k| for every computational basis state of an n-qubit register.
pub fn computational_projectors(n_qubits: usize) -> Vec<CMatrix> {
    let dim = 1usize << n_qubits;
    (0..dim)
        .map(|k| DensityMatrix::from_pure(&Ket::basis(dim, k)).into_mat())
        .collect()
}

/// The four Bell projectors |B_b⟩⟨B_b| embedded on `targets` of an n-qubit
/// register, ordered by Bell label.
pub fn bell_projectors(n_qubits: usize, targets: &[usize; 2]) -> Result<Vec<CMatrix>> {
    (0..4)
        .map(|b| {
            let p = DensityMatrix::from_pure(&bell_state(b)?).into_mat();
            embed_on_targets(&p, n_qubits, targets)
        })
        .collect()
}

/// Exact binomial sampler: inverse transform walking outward from the mode.
///
/// Interval lengths are the exact pmf values (via lgamma), enumerated in a
/// fixed order, so the draw is exact up to f64 roundoff; expected work is
/// O(√(np(1-p))).
fn sample_binomial<R: Rng + ?Sized>(rng: &mut R, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    let nf = n as f64;
    let ln_p = Float::ln(p);
    let ln_q = Float::ln_1p(-p);
    let ln_pmf = |k: u64| -> f64 {
        let kf = k as f64;
        libm::lgamma(nf + 1.0) - libm::lgamma(kf + 1.0) - libm::lgamma(nf - kf + 1.0)
            + kf * ln_p
            + (nf - kf) * ln_q
    };
    let mode = Float::floor((nf + 1.0) * p).min(nf) as u64;
    let u: f64 = rng.gen();

    // Enumerate mode, mode+1, mode-1, mode+2, ... accumulating mass.
    let mut acc = 0.0f64;
    let mut hi = mode;
    let mut lo = mode;
    let mut f_hi = Float::exp(ln_pmf(mode));
    let mut f_lo = f_hi;
    acc += f_hi;
    if u < acc {
        return mode;
    }
    loop {
        let hi_alive = hi < n;
        let lo_alive = lo > 0;
        if hi_alive {
            // f(k+1) = f(k) · (n-k)/(k+1) · p/q
            f_hi *= (nf - hi as f64) / (hi as f64 + 1.0) * p / (1.0 - p);
            hi += 1;
            acc += f_hi;
            if u < acc {
                return hi;
            }
        }
        if lo_alive {
            // f(k-1) = f(k) · k/(n-k+1) · q/p
            f_lo *= lo as f64 / (nf - lo as f64 + 1.0) * (1.0 - p) / p;
            lo -= 1;
            acc += f_lo;
            if u < acc {
                return lo;
            }
        }
        if !hi_alive && !lo_alive {
            // Roundoff left a sliver of unassigned mass; the mode is the
            // least-wrong answer.
            return mode;
        }
    }
}

/// Multinomial counts by chained conditional binomials; deterministic for a
/// fixed seed.
pub fn sample_multinomial(probs: &[f64], n: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_multinomial_with(&mut rng, probs, n)
}

pub(crate) fn sample_multinomial_with<R: Rng + ?Sized>(
    rng: &mut R,
    probs: &[f64],
    n: u64,
) -> Vec<u64> {
    let k = probs.len();
    let mut counts = vec![0u64; k];
    let mut remaining = n;
    let mut mass_left = 1.0f64;
    for i in 0..k {
        if remaining == 0 {
            break;
        }
        if i == k - 1 {
            counts[i] = remaining;
            break;
        }
        let p = (probs[i].max(0.0) / mass_left.max(f64::MIN_POSITIVE)).clamp(0.0, 1.0);
        let c = sample_binomial(rng, remaining, p);
        counts[i] = c;
        remaining -= c;
        mass_left -= probs[i].max(0.0);
    }
    counts
}

/// Counts per outcome from `n` independent shots of the distribution.
pub fn sample_shots(dist: &OutcomeDist, n: u64, seed: u64) -> Vec<u64> {
    sample_multinomial(dist.probs(), n, seed)
}

/// Per-qubit readout confusion: `mats[q][m][t]` = P(measured m | true t).
#[derive(Debug, Clone)]
pub struct ReadoutModel {
    mats: Vec<[[f64; 2]; 2]>,
}

impl ReadoutModel {
    /// Validates entries in [0,1] and columns summing to 1 within 1e-10.
    pub fn new(mats: Vec<[[f64; 2]; 2]>) -> Result<Self> {
        for m in &mats {
            for col in [m[0][0] + m[1][0], m[0][1] + m[1][1]] {
                if Float::abs(col - 1.0) > SUM_TOL {
                    return Err(Error::TraceNotOne(col));
                }
            }
            for row in m {
                for &e in row {
                    if !(0.0..=1.0).contains(&e) {
                        return Err(Error::OutOfRange {
                            name: "confusion entry",
                            value: e,
                        });
                    }
                }
            }
        }
        Ok(ReadoutModel { mats })
    }

    /// Identity readout (no error) on `n` qubits.
    pub fn identity(n: usize) -> Self {
        ReadoutModel {
            mats: vec![[[1.0, 0.0], [0.0, 1.0]]; n],
        }
    }

    /// Symmetric bit flip with probability ε on every qubit.
    pub fn symmetric(eps: f64, n: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::OutOfRange {
                name: "readout eps",
                value: eps,
            });
        }
        Ok(ReadoutModel {
            mats: vec![[[1.0 - eps, eps], [eps, 1.0 - eps]]; n],
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.mats.len()
    }

    /// Applies one 2x2 matrix along the axis of qubit `q` (qubit 0 = MSB).
    fn apply_axis(&self, probs: &mut [f64], q: usize, m: &[[f64; 2]; 2]) {
        let n = self.mats.len();
        let bit = 1usize << (n - 1 - q);
        for idx in 0..probs.len() {
            if idx & bit != 0 {
                continue;
            }
            let p0 = probs[idx];
            let p1 = probs[idx | bit];
            probs[idx] = m[0][0] * p0 + m[0][1] * p1;
            probs[idx | bit] = m[1][0] * p0 + m[1][1] * p1;
        }
    }
}

/// Pushes a distribution through the confusion model: p ← (⊗R_q)·p.
pub fn apply_readout_error(dist: &OutcomeDist, model: &ReadoutModel) -> Result<OutcomeDist> {
    if model.n_qubits() != dist.width() {
        return Err(Error::DimensionMismatch {
            expected: dist.width(),
            got: model.n_qubits(),
        });
    }
    let mut probs = dist.probs().to_vec();
    for (q, m) in model.mats.iter().enumerate() {
        model.apply_axis(&mut probs, q, m);
    }
    OutcomeDist::new(dist.width(), probs)
}

/// Inverts the confusion model, clamping negative entries to 0 and
/// renormalizing (the standard, mildly biased estimator).
pub fn correct_readout(dist: &OutcomeDist, model: &ReadoutModel) -> Result<OutcomeDist> {
    if model.n_qubits() != dist.width() {
        return Err(Error::DimensionMismatch {
            expected: dist.width(),
            got: model.n_qubits(),
        });
    }
    let mut probs = dist.probs().to_vec();
    for (q, m) in model.mats.iter().enumerate() {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if Float::abs(det) < 1e-12 {
            return Err(Error::SingularReadout);
        }
        let inv = [
            [m[1][1] / det, -m[0][1] / det],
            [-m[1][0] / det, m[0][0] / det],
        ];
        model.apply_axis(&mut probs, q, &inv);
    }
    let mut total = 0.0;
    for p in probs.iter_mut() {
        *p = p.max(0.0);
        total += *p;
    }
    if total <= 0.0 {
        return Err(Error::SingularReadout);
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    OutcomeDist::new(dist.width(), probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::quantum::{fidelity_pure, partial_trace};

    #[test]
    fn computational_measurement_of_ground_state() {
        let rho = DensityMatrix::from_pure(&Ket::basis(2, 0));
        let dist = measure_projective(&rho, &computational_projectors(1)).unwrap();
        assert!((dist.prob(0) - 1.0).abs() < 1e-15);
        assert!(dist.prob(1) < 1e-15);
    }

    #[test]
    fn bell_basis_measurement_of_phi_plus() {
        let rho = DensityMatrix::from_pure(&bell_state(0).unwrap());
        let projs = bell_projectors(2, &[0, 1]).unwrap();
        let dist = measure_projective(&rho, &projs).unwrap();
        assert!((dist.prob(0) - 1.0).abs() < 1e-14);
        for b in 1..4 {
            assert!(dist.prob(b) < 1e-14);
        }
    }

    #[test]
    fn entanglement_swapping_conditionals() {
        // |φ⁺⟩₁₂ ⊗ |φ⁺⟩₃₄, Bell measurement on qubits 2,3: every outcome has
        // p = 1/4 and leaves qubits 1,4 in the matching Bell state.
        let pair = DensityMatrix::from_pure(&bell_state(0).unwrap());
        let full = pair.kron(&pair);
        let projs = bell_projectors(4, &[1, 2]).unwrap();
        let dist = measure_projective(&full, &projs).unwrap();
        for b in 0..4 {
            assert!((dist.prob(b) - 0.25).abs() < 1e-12, "outcome {b}");
            let post = dist.post_state(b).unwrap();
            let outer = partial_trace(post, &[2, 2, 2, 2], &[0, 3]).unwrap();
            let f = fidelity_pure(&outer, &bell_state(b).unwrap()).unwrap();
            assert!((f - 1.0).abs() < 1e-10, "outcome {b}: fidelity {f}");
        }
    }

    #[test]
    fn incomplete_projector_set_is_rejected() {
        let projs = vec![
            DensityMatrix::from_pure(&Ket::basis(4, 0)).into_mat(),
            DensityMatrix::from_pure(&Ket::basis(4, 1)).into_mat(),
        ];
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(measure_projective(&rho, &projs).is_err());
    }

    #[test]
    fn observable_projectors_split_the_spectrum() {
        let obs = gates::hadamard(); // (X+Z)/√2: involution with eigenvalues ±1
        let [pp, pm] = observable_projectors(&obs).unwrap();
        assert!(pp.matmul(&pp).unwrap().max_abs_diff(&pp) < 1e-14);
        assert!(pm.matmul(&pm).unwrap().max_abs_diff(&pm) < 1e-14);
        assert!(pp.matmul(&pm).unwrap().max_abs() < 1e-14);
        // Non-involution input is rejected.
        assert!(observable_projectors(&gates::s_gate()).is_err());
    }

    #[test]
    fn deterministic_distribution_sampling() {
        let mut probs = vec![0.0; 16];
        probs[0] = 1.0;
        let dist = OutcomeDist::new(4, probs).unwrap();
        let counts = sample_shots(&dist, 100, 7);
        assert_eq!(counts[0], 100);
        assert!(counts[1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let dist = OutcomeDist::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = sample_shots(&dist, 10_000, 42);
        let b = sample_shots(&dist, 10_000, 42);
        let c = sample_shots(&dist, 10_000, 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.iter().sum::<u64>(), 10_000);
    }

    #[test]
    fn law_of_large_numbers_uniform_16() {
        let dist = OutcomeDist::new(4, vec![1.0 / 16.0; 16]).unwrap();
        let n = 1_000_000u64;
        let counts = sample_shots(&dist, n, 2024);
        let p = 1.0 / 16.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        for (k, &c) in counts.iter().enumerate() {
            let freq = c as f64 / n as f64;
            assert!(
                (freq - p).abs() < 3.0 * sigma,
                "outcome {k}: freq {freq} vs {p} (3σ = {:.2e})",
                3.0 * sigma
            );
        }
    }

    #[test]
    fn binomial_sampler_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (n, p) = (50u64, 0.3f64);
        let draws = 40_000usize;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..draws {
            let x = sample_binomial(&mut rng, n, p) as f64;
            sum += x;
            sum2 += x * x;
        }
        let mean = sum / draws as f64;
        let var = sum2 / draws as f64 - mean * mean;
        let true_mean = n as f64 * p;
        let true_var = n as f64 * p * (1.0 - p);
        // 5σ band on the sample mean; 10% on the variance.
        let mean_sigma = (true_var / draws as f64).sqrt();
        assert!((mean - true_mean).abs() < 5.0 * mean_sigma);
        assert!((var - true_var).abs() < 0.1 * true_var);
    }

    #[test]
    fn binomial_sampler_large_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (n, p) = (10_000_000u64, 1.0 / 16.0);
        let x = sample_binomial(&mut rng, n, p) as f64;
        let mean = n as f64 * p;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((x - mean).abs() < 6.0 * sigma, "draw {x} vs mean {mean}");
    }

    #[test]
    fn readout_identity_is_noop() {
        let dist = OutcomeDist::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let model = ReadoutModel::identity(2);
        let out = apply_readout_error(&dist, &model).unwrap();
        for k in 0..4 {
            assert!((out.prob(k) - dist.prob(k)).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_flip_on_certain_outcome() {
        let dist = OutcomeDist::new(1, vec![1.0, 0.0]).unwrap();
        let model = ReadoutModel::symmetric(0.05, 1).unwrap();
        let out = apply_readout_error(&dist, &model).unwrap();
        assert!((out.prob(0) - 0.95).abs() < 1e-15);
        assert!((out.prob(1) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn two_qubit_readout_matches_kron_oracle() {
        let r0 = [[0.98, 0.03], [0.02, 0.97]];
        let r1 = [[0.95, 0.10], [0.05, 0.90]];
        let model = ReadoutModel::new(vec![r0, r1]).unwrap();
        let dist = OutcomeDist::new(2, vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let out = apply_readout_error(&dist, &model).unwrap();
        // Explicit 4x4 confusion matrix: K[(m0 m1),(t0 t1)] = r0[m0,t0]·r1[m1,t1].
        for m in 0..4usize {
            let mut expect = 0.0;
            for t in 0..4usize {
                expect += r0[m >> 1][t >> 1] * r1[m & 1][t & 1] * dist.prob(t);
            }
            assert!((out.prob(m) - expect).abs() < 1e-14, "outcome {m}");
        }
    }

    #[test]
    fn correction_inverts_application() {
        let dist = OutcomeDist::new(2, vec![0.37, 0.23, 0.28, 0.12]).unwrap();
        let model = ReadoutModel::symmetric(0.0034, 2).unwrap();
        let noisy = apply_readout_error(&dist, &model).unwrap();
        let fixed = correct_readout(&noisy, &model).unwrap();
        for k in 0..4 {
            assert!((fixed.prob(k) - dist.prob(k)).abs() < 1e-10);
        }
    }

    #[test]
    fn singular_readout_is_rejected() {
        let model = ReadoutModel::symmetric(0.5, 1).unwrap();
        let dist = OutcomeDist::new(1, vec![0.6, 0.4]).unwrap();
        assert!(correct_readout(&dist, &model).is_err());
    }
}
