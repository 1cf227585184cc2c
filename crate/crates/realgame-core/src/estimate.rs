//! Finite-shot score estimation with two independent error bars.

use alloc::vec::Vec;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constants::{classify_regime, Regime};
use crate::error::{Error, Result};
use crate::game::{score, ProbTable, WeightTable, N_OUTCOMES, N_SETTINGS};
use crate::measure::sample_multinomial_with;

/// Largest |Γ| any 12-row probability table can produce with ±1 weights:
/// each row's weighted sum lies in [−1, 1]. Estimates from finite shots can
/// exceed the quantum value 6√2, but never this.
pub const FUNCTIONAL_RANGE: f64 = N_SETTINGS as f64;

pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 1000;

/// Estimated score with its uncertainty and regime classification.
#[derive(Debug, Clone)]
pub struct ScoreReport {
    /// Γ̂ from sampled frequencies (or the exact score when shots = 0).
    pub score: f64,
    /// Closed-form multinomial error propagation; 0 in exact mode.
    pub std_dev: Option<f64>,
    /// Parametric bootstrap standard deviation; None in exact mode.
    pub std_dev_bootstrap: Option<f64>,
    pub regime: Regime,
    /// Shots per setting; 0 = exact mode.
    pub shots: u64,
    pub seed: Option<u64>,
}

fn weighted_row_sum(w: &WeightTable, setting: usize, freqs: &[f64; N_OUTCOMES]) -> f64 {
    let mut m = 0.0;
    for (o, &f) in freqs.iter().enumerate() {
        m += w.weight(setting, o) * f;
    }
    m
}

/// Closed-form variance of Γ̂: the rows are independent multinomials and all
/// weights square to 1, so Var(Γ̂) = Σ_s (1 − m_s²)/n with m_s the row's
/// weighted sum. Evaluated at the plug-in frequencies.
fn closed_form_std(w: &WeightTable, freqs: &[[f64; N_OUTCOMES]; N_SETTINGS], n: u64) -> f64 {
    let mut var = 0.0;
    for (s, row) in freqs.iter().enumerate() {
        let m = weighted_row_sum(w, s, row);
        var += (1.0 - m * m).max(0.0) / n as f64;
    }
    Float::sqrt(var)
}

/// Fixed ChaCha stream for the parametric bootstrap in
/// [`report_from_frequencies`], so the resamples never replay the stream
/// that produced the observed counts under the same seed.
const BOOTSTRAP_STREAM: u64 = 0x626f_6f74;

/// Builds a [`ScoreReport`] for a table of *observed frequencies* from
/// `shots` samples per setting: the plug-in score, the closed-form
/// multinomial error bar, and a parametric bootstrap around the observed
/// frequencies. Use this when the sampling already happened upstream (for
/// example inside the gate-level pipeline); [`estimate_score`] is the
/// variant that draws the samples itself.
pub fn report_from_frequencies(
    freqs: &ProbTable,
    w: &WeightTable,
    shots: u64,
    seed: u64,
    bootstrap_resamples: usize,
) -> Result<ScoreReport> {
    if shots == 0 {
        return Err(Error::OutOfRange {
            name: "shots",
            value: 0.0,
        });
    }
    let gamma = score(freqs, w);
    if Float::abs(gamma) > FUNCTIONAL_RANGE + 1e-9 {
        return Err(Error::OutOfRange {
            name: "estimated score",
            value: gamma,
        });
    }
    let std_closed = closed_form_std(w, freqs.rows(), shots);

    let std_boot = if bootstrap_resamples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(BOOTSTRAP_STREAM);
        let mut samples = Vec::with_capacity(bootstrap_resamples);
        for _ in 0..bootstrap_resamples {
            let mut g = 0.0;
            for s in 0..N_SETTINGS {
                let counts = sample_multinomial_with(&mut rng, &freqs.rows()[s], shots);
                let mut m = 0.0;
                for (o, &c) in counts.iter().enumerate() {
                    m += w.weight(s, o) * (c as f64 / shots as f64);
                }
                g += m;
            }
            samples.push(g);
        }
        let mean: f64 = samples.iter().sum::<f64>() / samples.len() as f64;
        let var: f64 = samples
            .iter()
            .map(|&g| (g - mean) * (g - mean))
            .sum::<f64>()
            / (samples.len() - 1).max(1) as f64;
        Some(Float::sqrt(var))
    } else {
        None
    };

    Ok(ScoreReport {
        score: gamma,
        std_dev: Some(std_closed),
        std_dev_bootstrap: std_boot,
        regime: classify_regime(gamma),
        shots,
        seed: Some(seed),
    })
}

/// Samples `shots` per setting from `p`, scores the frequencies, and reports
/// both error bars. `shots = 0` returns the exact score with zero spread.
/// Deterministic for a fixed seed.
pub fn estimate_score(
    p: &ProbTable,
    w: &WeightTable,
    shots: u64,
    seed: u64,
) -> Result<ScoreReport> {
    estimate_score_with(p, w, shots, seed, DEFAULT_BOOTSTRAP_RESAMPLES)
}

/// [`estimate_score`] with an explicit bootstrap resample count (0 skips the
/// bootstrap).
pub fn estimate_score_with(
    p: &ProbTable,
    w: &WeightTable,
    shots: u64,
    seed: u64,
    bootstrap_resamples: usize,
) -> Result<ScoreReport> {
    if shots == 0 {
        let exact = score(p, w);
        return Ok(ScoreReport {
            score: exact,
            std_dev: Some(0.0),
            std_dev_bootstrap: None,
            regime: classify_regime(exact),
            shots: 0,
            seed: None,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut freqs = [[0.0f64; N_OUTCOMES]; N_SETTINGS];
    for (row, freq) in p.rows().iter().zip(freqs.iter_mut()) {
        let counts = sample_multinomial_with(&mut rng, row, shots);
        for (f, &c) in freq.iter_mut().zip(counts.iter()) {
            *f = c as f64 / shots as f64;
        }
    }

    let mut gamma = 0.0;
    for (s, freq) in freqs.iter().enumerate() {
        gamma += weighted_row_sum(w, s, freq);
    }
    if Float::abs(gamma) > FUNCTIONAL_RANGE + 1e-9 {
        return Err(Error::OutOfRange {
            name: "estimated score",
            value: gamma,
        });
    }

    let std_closed = closed_form_std(w, &freqs, shots);

    let std_boot = if bootstrap_resamples > 0 {
        let mut samples = Vec::with_capacity(bootstrap_resamples);
        for _ in 0..bootstrap_resamples {
            let mut g = 0.0;
            for (s, freq) in freqs.iter().enumerate() {
                let counts = sample_multinomial_with(&mut rng, freq, shots);
                let mut m = 0.0;
                for (o, &c) in counts.iter().enumerate() {
                    m += w.weight(s, o) * (c as f64 / shots as f64);
                }
                g += m;
            }
            samples.push(g);
        }
        let mean: f64 = samples.iter().sum::<f64>() / samples.len() as f64;
        let var: f64 = samples
            .iter()
            .map(|&g| (g - mean) * (g - mean))
            .sum::<f64>()
            / (samples.len() - 1).max(1) as f64;
        Some(Float::sqrt(var))
    } else {
        None
    };

    Ok(ScoreReport {
        score: gamma,
        std_dev: Some(std_closed),
        std_dev_bootstrap: std_boot,
        regime: classify_regime(gamma),
        shots,
        seed: Some(seed),
    })
}
