//! Cross-module laws that no single unit test pins down: algebraic
//! identities on random inputs, physicality of every pipeline output, and
//! agreement between independent implementations of the same map.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use realgame_core::constants::COMPLEX_BOUND;
use realgame_core::eigen::{min_eigenvalue, sign_of_hermitian};
use realgame_core::embed::RealEmbedding;
use realgame_core::estimate::estimate_score;
use realgame_core::game::{
    conditional_swapped_states, run_noisy_game, score, werner_score, BsmMode, NoiseConfig,
    ProbTable, WeightTable, N_OUTCOMES, N_SETTINGS,
};
use realgame_core::measure::{
    apply_readout_error, correct_readout, measure_projective, observable_projectors, ReadoutModel,
};
use realgame_core::noise::{
    amplitude_damping, apply_channel, depolarizing1, depolarizing2, phase_damping,
};
use realgame_core::quantum::{bell_state, fidelity_pure, partial_trace};
use realgame_core::scalar::Scalar;
use realgame_core::seesaw::{
    prob_table, random_strategy, refine, seesaw_restart, strategy_score, Dims, SeesawConfig,
};
use realgame_core::tomo::{pauli_expectations, tomographic_reconstruct};
use realgame_core::{CMatrix, DensityMatrix, Ket};

use num_complex::Complex64;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_cmatrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::sample_gaussian(r))
}

fn random_hermitian(r: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let m = random_cmatrix(r, d, d);
    m.add(&m.adjoint()).unwrap().scale(0.5)
}

/// Ginibre-induced random mixed state of full rank.
fn random_density(r: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let g = random_cmatrix(r, d, d);
    let m = g.matmul(&g.adjoint()).unwrap();
    let t = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / t)).unwrap()
}

fn random_ket(r: &mut ChaCha8Rng, d: usize) -> Ket {
    Ket::normalized((0..d).map(|_| Complex64::sample_gaussian(r)).collect()).unwrap()
}

fn random_prob_table(r: &mut ChaCha8Rng) -> ProbTable {
    let mut rows = [[0.0f64; N_OUTCOMES]; N_SETTINGS];
    for row in rows.iter_mut() {
        let mut total = 0.0;
        for cell in row.iter_mut() {
            *cell = r.gen::<f64>();
            total += *cell;
        }
        for cell in row.iter_mut() {
            *cell /= total;
        }
    }
    ProbTable::new(rows).unwrap()
}

// ---------------------------------------------------------------------------
// Linear-algebra identities
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kron_is_associative_and_trace_multiplicative(
        seed in 0u64..1 << 48,
        da in 2usize..4,
        db in 2usize..4,
        dc in 2usize..4,
    ) {
        let mut r = rng(seed);
        let a = random_cmatrix(&mut r, da, da);
        let b = random_cmatrix(&mut r, db, db);
        let c = random_cmatrix(&mut r, dc, dc);

        let left = a.kron(&b).kron(&c);
        let right = a.kron(&b.kron(&c));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);

        let t = a.kron(&b).trace();
        let expect = a.trace() * b.trace();
        prop_assert!((t - expect).norm() < 1e-10);
    }

    #[test]
    fn partial_trace_composes_and_is_trace_preserving(
        seed in 0u64..1 << 48,
        da in 2usize..4,
        db in 2usize..4,
        dc in 2usize..4,
    ) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, da * db * dc);
        let dims = [da, db, dc];

        // Tracing out B then C equals tracing out both at once.
        let keep_ac = partial_trace(&rho, &dims, &[0, 2]).unwrap();
        let one_step = partial_trace(&rho, &dims, &[0]).unwrap();
        let two_step = partial_trace(&keep_ac, &[da, dc], &[0]).unwrap();
        prop_assert!(one_step.mat().max_abs_diff(two_step.mat()) < 1e-12);

        let t = keep_ac.mat().trace();
        prop_assert!((t.re - 1.0).abs() < 1e-10 && t.im.abs() < 1e-12);
    }

    #[test]
    fn fidelity_to_pure_states_is_a_probability(
        seed in 0u64..1 << 48,
        d in 2usize..6,
    ) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, d);
        let psi = random_ket(&mut r, d);
        let f = fidelity_pure(&rho, &psi).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));

        let pure = DensityMatrix::from_pure(&psi);
        let self_f = fidelity_pure(&pure, &psi).unwrap();
        prop_assert!((self_f - 1.0).abs() < 1e-12);
    }
}

// ---------------------------------------------------------------------------
// Physicality of pipeline outputs
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn channels_preserve_trace_and_hermiticity(
        seed in 0u64..1 << 48,
        p in 0.0f64..1.0,
    ) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, 4);
        let single = [
            depolarizing1(p).unwrap(),
            amplitude_damping(p).unwrap(),
            phase_damping(p).unwrap(),
        ];
        for ch in &single {
            for target in 0..2usize {
                let out = apply_channel(&rho, ch, &[target]).unwrap();
                prop_assert!((out.mat().trace().re - 1.0).abs() < 1e-10);
                prop_assert!(out.mat().hermiticity_error() < 1e-10);
                prop_assert!(min_eigenvalue(out.mat()).unwrap() > -1e-10);
            }
        }
        let out = apply_channel(&rho, &depolarizing2(p).unwrap(), &[0, 1]).unwrap();
        prop_assert!((out.mat().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(out.mat().hermiticity_error() < 1e-10);
    }

    #[test]
    fn projective_measurements_are_normalized(
        seed in 0u64..1 << 48,
        d in 2usize..5,
    ) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, d);
        let obs = sign_of_hermitian(&random_hermitian(&mut r, d)).unwrap();
        let projs = observable_projectors(&obs).unwrap();
        let dist = measure_projective(&rho, &projs).unwrap();
        let total: f64 = dist.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        prop_assert!(dist.probs().iter().all(|&q| q >= -1e-12));
    }

    #[test]
    fn perturbed_tomography_stays_physical(
        seed in 0u64..1 << 48,
        amp in 0.0f64..0.01,
    ) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, 4);
        let mut exps = pauli_expectations(&rho).unwrap();
        for e in exps.iter_mut().skip(1) {
            *e += amp * (2.0 * r.gen::<f64>() - 1.0);
        }
        let rec = tomographic_reconstruct(&exps).unwrap();
        prop_assert!((rec.mat().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(rec.mat().hermiticity_error() < 1e-10);
        prop_assert!(min_eigenvalue(rec.mat()).unwrap() > -1e-10);
    }

    #[test]
    fn readout_correction_inverts_readout_error(
        seed in 0u64..1 << 48,
        eps in 0.0f64..0.2,
    ) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, 4);
        let obs = sign_of_hermitian(&random_hermitian(&mut r, 4)).unwrap();
        let projs = observable_projectors(&obs).unwrap();
        let dist = measure_projective(&rho, &projs).unwrap();
        let model = ReadoutModel::symmetric(eps, 1).unwrap();
        let corrupted = apply_readout_error(&dist, &model).unwrap();
        let restored = correct_readout(&corrupted, &model).unwrap();
        for (a, b) in restored.probs().iter().zip(dist.probs()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}

/// Round trip ρ → Pauli expectations → linear inversion, for every register
/// size the tomography module accepts states on up to four qubits.
#[test]
fn tomography_round_trips_random_states() {
    let mut r = rng(0x746f_6d6f);
    for n in 1..=4usize {
        let d = 1usize << n;
        for _ in 0..3 {
            let rho = random_density(&mut r, d);
            let exps = pauli_expectations(&rho).unwrap();
            let rec = tomographic_reconstruct(&exps).unwrap();
            assert!(
                rec.mat().max_abs_diff(rho.mat()) < 1e-8,
                "round trip drifted at n={n}"
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Real embedding of complex expectation values
// ---------------------------------------------------------------------------

/// 1000 random state/observable pairs across dimensions 2..=8: the doubled
/// real-space expectation matches the complex one to near machine precision.
#[test]
fn embedding_preserves_expectations_across_dimensions() {
    let mut r = rng(0x656d_6264);
    let mut worst = 0.0f64;
    for t in 0..1000usize {
        let d = 2 + t % 7;
        let rho = random_density(&mut r, d);
        let h = random_hermitian(&mut r, d);
        let emb = RealEmbedding::new(&rho, &h).unwrap();
        let complex_value = h.matmul(rho.mat()).unwrap().trace().re;
        let residual = (emb.expectation() - complex_value).abs();
        worst = worst.max(residual);
    }
    assert!(worst < 1e-11, "max residual {worst:.3e}");
}

// ---------------------------------------------------------------------------
// Game-level laws
// ---------------------------------------------------------------------------

/// The score functional is affine: mixing tables mixes scores exactly.
#[test]
fn score_is_affine_in_the_probability_table() {
    let w = WeightTable::build();
    let mut r = rng(0x6166_6669);
    for _ in 0..50 {
        let p = random_prob_table(&mut r);
        let q = random_prob_table(&mut r);
        let lambda = r.gen::<f64>();
        let mut rows = [[0.0f64; N_OUTCOMES]; N_SETTINGS];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = lambda * p.prob(i, j) + (1.0 - lambda) * q.prob(i, j);
            }
        }
        let mixed = ProbTable::new(rows).unwrap();
        let expect = lambda * score(&p, &w) + (1.0 - lambda) * score(&q, &w);
        assert!((score(&mixed, &w) - expect).abs() < 1e-12);
    }
}

/// Werner mixing scales every correlator uniformly, so the score is exactly
/// linear in the visibility with slope 6√2.
#[test]
fn werner_score_is_linear_in_visibility() {
    for k in 0..=20 {
        let v = k as f64 / 20.0;
        let s = werner_score(v).unwrap();
        assert!(
            (s - v * COMPLEX_BOUND).abs() < 1e-10,
            "v={v}: score {s} vs {}",
            v * COMPLEX_BOUND
        );
    }
}

/// Noiseless pipeline: the four swap outcomes are uniform and each leaves
/// the outer pair exactly in the Bell state matching the outcome label.
#[test]
fn noiseless_swap_is_uniform_and_bell_faithful() {
    for bsm in [BsmMode::Reference, BsmMode::Circuit] {
        let cfg = NoiseConfig {
            bsm,
            ..NoiseConfig::default()
        };
        let (probs, states) = conditional_swapped_states(&cfg).unwrap();
        for b in 0..4usize {
            assert!((probs[b] - 0.25).abs() < 1e-12, "outcome {b} not uniform");
            let cond = states[b].as_ref().expect("conditional state missing");
            let f = fidelity_pure(cond, &bell_state(b).unwrap()).unwrap();
            assert!((f - 1.0).abs() < 1e-10, "outcome {b} fidelity {f}");
        }
    }
}

/// The projective reference BSM and the gate-level circuit BSM produce the
/// same 12-setting table, with and without noise that acts before the swap.
#[test]
fn reference_and_circuit_bsm_agree() {
    for (depol1, werner_v) in [(0.0, 1.0), (0.01, 1.0), (0.0, 0.9), (0.02, 0.95)] {
        let mut cfg = NoiseConfig {
            depol1,
            werner_v,
            ..NoiseConfig::default()
        };
        cfg.bsm = BsmMode::Reference;
        let reference = run_noisy_game(&cfg, 0).unwrap();
        cfg.bsm = BsmMode::Circuit;
        let circuit = run_noisy_game(&cfg, 0).unwrap();
        assert!(
            reference.max_abs_diff(&circuit) < 1e-10,
            "tables diverge at depol1={depol1}, v={werner_v}"
        );
    }
}

/// Any table produced by a valid quantum strategy is non-signaling: Bob's
/// marginal cannot depend on the distant settings.
#[test]
fn quantum_strategies_are_non_signaling() {
    let mut r = rng(0x6e6f_7369);
    for trial in 0..12usize {
        let dims = Dims::new(
            2 + trial % 3,
            2 + (trial / 3) % 3,
            2 + (trial / 3) % 3,
            2 + (trial / 9) % 3,
        )
        .unwrap();
        let table = if trial % 2 == 0 {
            prob_table(&random_strategy::<f64, _>(&mut r, dims).unwrap()).unwrap()
        } else {
            prob_table(&random_strategy::<Complex64, _>(&mut r, dims).unwrap()).unwrap()
        };
        assert!(table.no_signaling_error() < 1e-10);
    }
}

// ---------------------------------------------------------------------------
// Optimizer laws
// ---------------------------------------------------------------------------

/// Block ascent never decreases the score beyond rounding, its output
/// passes strategy validation, and its reported score matches an
/// independent rescoring of the returned strategy.
#[test]
fn seesaw_ascent_is_monotone_and_self_consistent() {
    let w = WeightTable::build();
    let cfg = SeesawConfig::default();
    for (index, dims) in [
        Dims::new(2, 2, 2, 2).unwrap(),
        Dims::new(3, 2, 2, 3).unwrap(),
        Dims::new(2, 4, 4, 2).unwrap(),
    ]
    .into_iter()
    .enumerate()
    {
        let real = seesaw_restart::<f64>(dims, &cfg, 7, index).unwrap();
        let complex = seesaw_restart::<Complex64>(dims, &cfg, 7, index).unwrap();
        for ascent in [&real.trace, &complex.trace] {
            for pair in ascent.windows(2) {
                assert!(pair[1] >= pair[0] - 1e-9, "trace decreased: {pair:?}");
            }
        }
        assert!(real.max_decrease <= 1e-9 && complex.max_decrease <= 1e-9);

        real.strategy.validate().unwrap();
        let rescored = strategy_score(&real.strategy, &w).unwrap();
        assert!((rescored - real.trace.last().unwrap()).abs() < 1e-9);

        complex.strategy.validate().unwrap();
        let rescored = strategy_score(&complex.strategy, &w).unwrap();
        assert!((rescored - complex.trace.last().unwrap()).abs() < 1e-9);
    }
}

/// Complex amplitudes strictly extend real ones, so at identical dims and
/// matched restart budget the complex optimum can never fall below the real
/// one (up to merge tolerance).
#[test]
fn complex_field_dominates_real_field() {
    let cfg = SeesawConfig::default();
    for dims in [
        Dims::new(2, 2, 2, 2).unwrap(),
        Dims::new(3, 2, 2, 3).unwrap(),
    ] {
        let mut best_real = f64::NEG_INFINITY;
        let mut best_complex = f64::NEG_INFINITY;
        for i in 0..6usize {
            let r = seesaw_restart::<f64>(dims, &cfg, 41, i).unwrap();
            let c = seesaw_restart::<Complex64>(dims, &cfg, 41, i).unwrap();
            best_real = best_real.max(*r.trace.last().unwrap());
            best_complex = best_complex.max(*c.trace.last().unwrap());
        }
        assert!(
            best_complex >= best_real - 1e-6,
            "complex {best_complex} fell below real {best_real} at {dims:?}"
        );
    }
}

/// Polishing an already-converged strategy must not move it: refine is
/// idempotent at its own fixed points.
#[test]
fn refine_is_idempotent_at_fixed_points() {
    let w = WeightTable::build();
    let cfg = SeesawConfig::default();
    let first = seesaw_restart::<Complex64>(Dims::new(2, 2, 2, 2).unwrap(), &cfg, 3, 0).unwrap();
    let score_a = strategy_score(&first.strategy, &w).unwrap();
    let second = refine(first.strategy, &cfg, &w).unwrap();
    let score_b = strategy_score(&second.strategy, &w).unwrap();
    assert!(score_b >= score_a - 1e-9);
    assert!(
        score_b - score_a < 1e-6,
        "fixed point drifted: {score_a} -> {score_b}"
    );
}

// ---------------------------------------------------------------------------
// Shot-based estimation
// ---------------------------------------------------------------------------

/// Sampled estimates are deterministic per seed, carry positive error bars,
/// and land near the exact score; quadrupling the shots roughly halves the
/// closed-form error bar.
#[test]
fn sampled_estimates_are_deterministic_and_calibrated() {
    let w = WeightTable::build();
    let cfg = NoiseConfig {
        werner_v: 0.95,
        ..Default::default()
    };
    let table = run_noisy_game(&cfg, 0).unwrap();
    let exact = score(&table, &w);

    let a = estimate_score(&table, &w, 40_000, 5).unwrap();
    let b = estimate_score(&table, &w, 40_000, 5).unwrap();
    assert_eq!(
        a.score.to_bits(),
        b.score.to_bits(),
        "same seed must reproduce"
    );

    let sigma = a.std_dev.unwrap();
    assert!(sigma > 0.0);
    assert!((a.score - exact).abs() < 6.0 * sigma);

    let big = estimate_score(&table, &w, 160_000, 5).unwrap();
    let ratio = sigma / big.std_dev.unwrap();
    assert!((ratio - 2.0).abs() < 0.2, "sigma scaling ratio {ratio}");

    let boot = a.std_dev_bootstrap.unwrap();
    assert!(boot > 0.0 && (boot / sigma - 1.0).abs() < 0.25);
}
