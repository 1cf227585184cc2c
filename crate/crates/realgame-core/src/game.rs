//! The entanglement-swapping Bell game: settings, weight table, scoring, the
//! ideal complex strategy, the classical bound by enumeration, Werner-noise
//! analysis, and the full noisy pipeline.
//!
//! Layout of a game round: two independent EPR sources feed qubits (1,2) and
//! (3,4); Bob performs a Bell-state measurement on qubits 2,3 with 2-bit
//! outcome b; Alice measures observable A_x on qubit 1 (a ∈ {0,1}, 0 = +1
//! eigenspace) and Charlie C_z on qubit 4 (c likewise). The score is
//! Γ = Σ_{abc,xz} w[xz][abc]·P(abc|xz) over 12 setting pairs and 16 outcomes,
//! with outcome index (a<<3)|(b<<1)|c.

use alloc::vec::Vec;

use num_traits::Float;

use crate::constants::COMPLEX_BOUND;
use crate::error::{Error, Result};
use crate::gates::{apply_gate, bsm_circuit, bsm_relabel, embed_on_targets, epr_circuit, GateOp};
use crate::mat::CMatrix;
use crate::measure::{
    apply_readout_error, bell_projectors, correct_readout, measure_projective,
    observable_projectors, sample_multinomial_with, OutcomeDist, ReadoutModel,
};
use crate::noise::{
    amplitude_damping, apply_channel, depolarizing1, depolarizing2, phase_damping, werner_mix,
};
use crate::quantum::{bell_state, partial_trace, pauli, DensityMatrix, Ket};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const N_SETTINGS: usize = 12;
pub const N_OUTCOMES: usize = 16;

/// The 12 admissible (x, z) pairs, in canonical row order. Each group of four
/// is one CHSH block: {Z,X} vs (Z±X)/√2, {Z,Y} vs (Z±Y)/√2, {X,Y} vs (X±Y)/√2.
pub const SETTINGS: [(u8, u8); N_SETTINGS] = [
    (1, 1),
    (1, 2),
    (2, 1),
    (2, 2),
    (1, 3),
    (1, 4),
    (3, 3),
    (3, 4),
    (2, 5),
    (2, 6),
    (3, 5),
    (3, 6),
];

/// One admissible measurement-setting pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SettingPair {
    x: u8,
    z: u8,
}

impl SettingPair {
    pub fn new(x: u8, z: u8) -> Result<Self> {
        if SETTINGS.contains(&(x, z)) {
            Ok(SettingPair { x, z })
        } else {
            Err(Error::InvalidLabel(
                "setting pair outside the 12-element set",
            ))
        }
    }

    pub fn x(self) -> u8 {
        self.x
    }

    pub fn z(self) -> u8 {
        self.z
    }

    /// Row position in [`SETTINGS`].
    pub fn index(self) -> usize {
        SETTINGS
            .iter()
            .position(|&(x, z)| x == self.x && z == self.z)
            .expect("validated at construction")
    }
}

/// Alice's observable: A₁ = Z, A₂ = X, A₃ = Y.
pub fn alice_observable(x: u8) -> Result<CMatrix> {
    match x {
        1 => Ok(pauli(3)),
        2 => Ok(pauli(1)),
        3 => Ok(pauli(2)),
        _ => Err(Error::InvalidLabel("Alice setting must be 1, 2, or 3")),
    }
}

/// Charlie's observable: C₁..C₆ = (Z+X, Z−X, Z+Y, Z−Y, X+Y, X−Y)/√2.
pub fn charlie_observable(z: u8) -> Result<CMatrix> {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let (p, q, sign) = match z {
        1 => (3, 1, 1.0),
        2 => (3, 1, -1.0),
        3 => (3, 2, 1.0),
        4 => (3, 2, -1.0),
        5 => (1, 2, 1.0),
        6 => (1, 2, -1.0),
        _ => return Err(Error::InvalidLabel("Charlie setting must be in 1..=6")),
    };
    Ok(pauli(p).add(&pauli(q).scale(sign))?.scale(s))
}

/// ⟨B_b|P⊗P|B_b⟩ for P ∈ {Z, X, Y}, indexed by Bell label b.
const BELL_SIGN_Z: [i8; 4] = [1, -1, 1, -1];
const BELL_SIGN_X: [i8; 4] = [1, 1, -1, -1];
const BELL_SIGN_Y: [i8; 4] = [-1, 1, 1, -1];

fn bell_sign(pauli_idx: usize, b: usize) -> i8 {
    match pauli_idx {
        1 => BELL_SIGN_X[b],
        2 => BELL_SIGN_Y[b],
        3 => BELL_SIGN_Z[b],
        _ => unreachable!(),
    }
}

/// The ±1 weight table, 12 settings × 16 outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    w: [[i8; N_OUTCOMES]; N_SETTINGS],
}

impl WeightTable {
    /// The canonical table. Per CHSH block with Paulis (P, Q) and Bob
    /// outcome b, the correlator sign is t = s_P(b) for the block's
    /// first-Pauli Alice setting, and t = ±s_Q(b) for the second-Pauli
    /// setting paired with the block's "+"/"−" Charlie setting; then
    /// w[xz][abc] = (−1)^(a⊕c)·t. Each block contributes a CHSH expression
    /// worth 2√2 on the ideal strategy, 2 classically.
    pub fn build() -> Self {
        // (first-Pauli x, second-Pauli x, "+" z, first Pauli, second Pauli)
        const BLOCKS: [(u8, u8, u8, usize, usize); 3] = [
            (1, 2, 1, 3, 1), // Z,X block: z ∈ {1,2}
            (1, 3, 3, 3, 2), // Z,Y block: z ∈ {3,4}
            (2, 3, 5, 1, 2), // X,Y block: z ∈ {5,6}
        ];
        let mut w = [[0i8; N_OUTCOMES]; N_SETTINGS];
        for (row, &(x, z)) in SETTINGS.iter().enumerate() {
            let &(x1, _x2, zp, p, q) = BLOCKS
                .iter()
                .find(|&&(x1, x2, zp, _, _)| (x == x1 || x == x2) && (z == zp || z == zp + 1))
                .expect("every setting pair belongs to one block");
            for b in 0..4usize {
                let t = if x == x1 {
                    bell_sign(p, b)
                } else if z == zp {
                    bell_sign(q, b)
                } else {
                    -bell_sign(q, b)
                };
                for a in 0..2usize {
                    for c in 0..2usize {
                        let parity = if (a ^ c) == 0 { 1 } else { -1 };
                        w[row][(a << 3) | (b << 1) | c] = parity * t;
                    }
                }
            }
        }
        WeightTable { w }
    }

    /// Validates entries ∈ {−1, +1} and the pure-correlator constraint
    /// Σ_{a,c} w = 0 at every (setting, b).
    pub fn from_rows(w: [[i8; N_OUTCOMES]; N_SETTINGS]) -> Result<Self> {
        for row in &w {
            for &e in row {
                if e != 1 && e != -1 {
                    return Err(Error::InvalidLabel("weights must be ±1"));
                }
            }
        }
        for row in &w {
            for b in 0..4usize {
                let sum: i32 = (0..2)
                    .flat_map(|a| (0..2).map(move |c| (a, c)))
                    .map(|(a, c)| row[(a << 3) | (b << 1) | c] as i32)
                    .sum();
                if sum != 0 {
                    return Err(Error::InvalidLabel(
                        "weights must cancel over (a,c) at fixed b",
                    ));
                }
            }
        }
        Ok(WeightTable { w })
    }

    pub fn weight(&self, setting: usize, outcome: usize) -> f64 {
        self.w[setting][outcome] as f64
    }

    pub fn rows(&self) -> &[[i8; N_OUTCOMES]; N_SETTINGS] {
        &self.w
    }
}

/// P(abc|xz) for the 12 settings × 16 outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    p: [[f64; N_OUTCOMES]; N_SETTINGS],
}

pub const ROW_SUM_TOL: f64 = 1e-9;
pub const PROB_NEG_TOL: f64 = -1e-12;

impl ProbTable {
    /// Validates each row: entries ≥ −1e−12, sum 1 within 1e−9.
    pub fn new(p: [[f64; N_OUTCOMES]; N_SETTINGS]) -> Result<Self> {
        for row in &p {
            let mut sum = 0.0;
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::NotFinite);
                }
                if v < PROB_NEG_TOL {
                    return Err(Error::NotPositive(v));
                }
                sum += v;
            }
            if Float::abs(sum - 1.0) > ROW_SUM_TOL {
                return Err(Error::TraceNotOne(sum));
            }
        }
        Ok(ProbTable { p })
    }

    pub fn prob(&self, setting: usize, outcome: usize) -> f64 {
        self.p[setting][outcome]
    }

    pub fn rows(&self) -> &[[f64; N_OUTCOMES]; N_SETTINGS] {
        &self.p
    }

    /// Marginal P(b) of row `setting`.
    pub fn bob_marginal(&self, setting: usize) -> [f64; 4] {
        let mut m = [0.0; 4];
        for (o, &v) in self.p[setting].iter().enumerate() {
            m[(o >> 1) & 3] += v;
        }
        m
    }

    /// Largest spread of the Bob marginal across settings; 0 for a
    /// no-signaling table.
    pub fn no_signaling_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for b in 0..4 {
            let vals: Vec<f64> = (0..N_SETTINGS).map(|s| self.bob_marginal(s)[b]).collect();
            let max = vals.iter().fold(f64::MIN, |a, &v| a.max(v));
            let min = vals.iter().fold(f64::MAX, |a, &v| a.min(v));
            worst = worst.max(max - min);
        }
        worst
    }

    /// Per-row maximum entrywise difference.
    pub fn max_abs_diff(&self, other: &ProbTable) -> f64 {
        let mut worst = 0.0f64;
        for s in 0..N_SETTINGS {
            for o in 0..N_OUTCOMES {
                worst = worst.max(Float::abs(self.p[s][o] - other.p[s][o]));
            }
        }
        worst
    }
}

/// Γ = Σ w·p.
pub fn score(p: &ProbTable, w: &WeightTable) -> f64 {
    let mut total = 0.0;
    for s in 0..N_SETTINGS {
        for o in 0..N_OUTCOMES {
            total += w.weight(s, o) * p.prob(s, o);
        }
    }
    total
}

/// ±1-eigenspace projector pairs, one `[P₊, P₋]` entry per setting.
type ProjectorPairs<const N: usize> = [[CMatrix; 2]; N];

/// Projector pairs for all Alice and Charlie settings.
fn local_projectors() -> Result<(ProjectorPairs<3>, ProjectorPairs<6>)> {
    let mk_a = |x: u8| -> Result<[CMatrix; 2]> { observable_projectors(&alice_observable(x)?) };
    let mk_c = |z: u8| -> Result<[CMatrix; 2]> { observable_projectors(&charlie_observable(z)?) };
    Ok((
        [mk_a(1)?, mk_a(2)?, mk_a(3)?],
        [mk_c(1)?, mk_c(2)?, mk_c(3)?, mk_c(4)?, mk_c(5)?, mk_c(6)?],
    ))
}

/// Assembles P(abc|xz) from Bob's outcome distribution and the conditional
/// two-qubit states held by Alice and Charlie.
fn table_from_conditionals(
    p_b: &[f64; 4],
    conditionals: &[Option<DensityMatrix>; 4],
) -> Result<ProbTable> {
    let (alice, charlie) = local_projectors()?;
    let mixed = DensityMatrix::maximally_mixed(4);
    let mut p = [[0.0; N_OUTCOMES]; N_SETTINGS];
    for (row, &(x, z)) in SETTINGS.iter().enumerate() {
        let pa = &alice[(x - 1) as usize];
        let pc = &charlie[(z - 1) as usize];
        for b in 0..4usize {
            let rho = conditionals[b].as_ref().unwrap_or(&mixed);
            for a in 0..2usize {
                for c in 0..2usize {
                    let proj = pa[a].kron(&pc[c]);
                    let cond = proj.matmul(rho.mat())?.trace().re;
                    p[row][(a << 3) | (b << 1) | c] = p_b[b] * cond.max(0.0);
                }
            }
        }
    }
    ProbTable::new(p)
}

/// The noiseless table of the ideal complex strategy, computed analytically:
/// every Bell outcome has probability 1/4 and projects the outer qubits into
/// exactly |B_b⟩, so the conditionals are the Bell states themselves. Serves
/// as an independent oracle for the gate-level pipeline.
pub fn ideal_strategy_probs() -> Result<ProbTable> {
    let p_b = [0.25; 4];
    let mut conds: [Option<DensityMatrix>; 4] = [None, None, None, None];
    for (b, cond) in conds.iter_mut().enumerate() {
        *cond = Some(DensityMatrix::from_pure(&bell_state(b)?));
    }
    table_from_conditionals(&p_b, &conds)
}

/// A deterministic local strategy: fixed Alice bits per x, Charlie bits per
/// z, and one constant Bob outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterministicStrategy {
    /// a(x) for x = 1..3, stored little-endian in 3 bits.
    pub alice_bits: u8,
    /// c(z) for z = 1..6, stored little-endian in 6 bits.
    pub charlie_bits: u8,
    /// Constant Bob outcome in 0..4.
    pub bob: u8,
}

impl DeterministicStrategy {
    fn a(self, x: u8) -> usize {
        ((self.alice_bits >> (x - 1)) & 1) as usize
    }

    fn c(self, z: u8) -> usize {
        ((self.charlie_bits >> (z - 1)) & 1) as usize
    }

    /// The strategy's deterministic probability table.
    pub fn prob_table(self) -> Result<ProbTable> {
        let mut p = [[0.0; N_OUTCOMES]; N_SETTINGS];
        for (row, &(x, z)) in SETTINGS.iter().enumerate() {
            let o = (self.a(x) << 3) | ((self.bob as usize) << 1) | self.c(z);
            p[row][o] = 1.0;
        }
        ProbTable::new(p)
    }
}

/// Exhaustive maximum over all 2³·2⁶·4 = 2048 deterministic local
/// strategies. Local randomness is a convex mixture of these, so this is the
/// LHV bound. Ties keep the first strategy in enumeration order
/// (alice_bits, then charlie_bits, then bob).
pub fn lhv_max(w: &WeightTable) -> (f64, DeterministicStrategy) {
    let mut best = f64::MIN;
    let mut witness = DeterministicStrategy {
        alice_bits: 0,
        charlie_bits: 0,
        bob: 0,
    };
    for alice_bits in 0..8u8 {
        for charlie_bits in 0..64u8 {
            for bob in 0..4u8 {
                let s = DeterministicStrategy {
                    alice_bits,
                    charlie_bits,
                    bob,
                };
                // Integer accumulation: sums of ±1 are exact.
                let mut total = 0i32;
                for (row, &(x, z)) in SETTINGS.iter().enumerate() {
                    let o = (s.a(x) << 3) | ((bob as usize) << 1) | s.c(z);
                    total += w.rows()[row][o] as i32;
                }
                if (total as f64) > best {
                    best = total as f64;
                    witness = s;
                }
            }
        }
    }
    (best, witness)
}

/// Score of the game when every conditional swapped pair is a Werner state
/// of visibility v: all correlators scale by v, so the score is 6√2·v.
pub fn werner_score(v: f64) -> Result<f64> {
    check_visibility(v)?;
    Ok(COMPLEX_BOUND * v)
}

/// Bell-state fidelity of a Werner state: F = (3v+1)/4.
pub fn werner_fidelity(v: f64) -> Result<f64> {
    check_visibility(v)?;
    Ok((3.0 * v + 1.0) / 4.0)
}

/// Inverse of [`werner_fidelity`]: v = (4F−1)/3.
pub fn visibility_of_fidelity(f: f64) -> Result<f64> {
    if !(0.25..=1.0).contains(&f) {
        return Err(Error::OutOfRange {
            name: "fidelity",
            value: f,
        });
    }
    Ok((4.0 * f - 1.0) / 3.0)
}

/// Fidelity at which the Werner score crosses the real bound:
/// F = (3·(7.66/6√2) + 1)/4 ≈ 0.9271.
pub fn threshold_fidelity() -> f64 {
    (3.0 * (crate::constants::REAL_BOUND / COMPLEX_BOUND) + 1.0) / 4.0
}

fn check_visibility(v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "visibility",
            value: v,
        })
    }
}

/// Which Bell-state-measurement implementation the pipeline uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BsmMode {
    /// Direct projection onto the four Bell states.
    #[default]
    Reference,
    /// iSWAP-plus-locals rotation followed by computational readout, with
    /// the outcome relabeling folded in.
    Circuit,
}

/// Noise and sampling configuration for [`run_noisy_game`]. The default is
/// the exact, noiseless pipeline.
#[derive(Debug, Clone, Copy)]
pub struct NoiseConfig {
    /// Single-qubit depolarizing probability applied to every qubit after
    /// state preparation.
    pub depol1: f64,
    /// Two-qubit depolarizing probability applied after every iSWAP.
    pub depol2: f64,
    /// Amplitude-damping probability per qubit after preparation.
    pub amp_damp: f64,
    /// Phase-damping probability per qubit after preparation.
    pub phase_damp: f64,
    /// Werner visibility applied to each conditional swapped pair (1 = none).
    pub werner_v: f64,
    /// Symmetric readout flip probability per measured bit (0 = none).
    pub readout_eps: f64,
    /// Apply inverse-confusion correction to the final distributions.
    pub readout_correct: bool,
    /// BSM implementation.
    pub bsm: BsmMode,
    /// Shots per setting; 0 = exact probabilities (no randomness consumed).
    pub shots: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            depol1: 0.0,
            depol2: 0.0,
            amp_damp: 0.0,
            phase_damp: 0.0,
            werner_v: 1.0,
            readout_eps: 0.0,
            readout_correct: false,
            bsm: BsmMode::Reference,
            shots: 0,
        }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("depol1", self.depol1),
            ("depol2", self.depol2),
            ("amp_damp", self.amp_damp),
            ("phase_damp", self.phase_damp),
            ("werner_v", self.werner_v),
            ("readout_eps", self.readout_eps),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        Ok(())
    }
}

fn apply_gate_with_noise(
    state: &DensityMatrix,
    gate: &GateOp,
    cfg: &NoiseConfig,
) -> Result<DensityMatrix> {
    let mut out = apply_gate(state, gate)?;
    if gate.targets().len() == 2 && cfg.depol2 > 0.0 {
        out = apply_channel(&out, &depolarizing2(cfg.depol2)?, gate.targets())?;
    }
    Ok(out)
}

/// Bob's outcome probabilities and the conditional states left on qubits
/// 1 and 4, after preparation noise, the configured BSM, and Werner mixing.
pub fn conditional_swapped_states(
    cfg: &NoiseConfig,
) -> Result<([f64; 4], [Option<DensityMatrix>; 4])> {
    cfg.validate()?;
    let mut state = DensityMatrix::from_pure(&Ket::basis(16, 0));
    let mut prep = epr_circuit(0, 1)?;
    prep.extend(epr_circuit(2, 3)?);
    for gate in &prep {
        state = apply_gate_with_noise(&state, gate, cfg)?;
    }
    for q in 0..4usize {
        if cfg.depol1 > 0.0 {
            state = apply_channel(&state, &depolarizing1(cfg.depol1)?, &[q])?;
        }
        if cfg.amp_damp > 0.0 {
            state = apply_channel(&state, &amplitude_damping(cfg.amp_damp)?, &[q])?;
        }
        if cfg.phase_damp > 0.0 {
            state = apply_channel(&state, &phase_damping(cfg.phase_damp)?, &[q])?;
        }
    }

    // BSM on qubits 1, 2 of the register. Outcome order is normalized to the
    // Bell labeling in both modes.
    let dist: OutcomeDist;
    let label_of: fn(usize) -> usize;
    match cfg.bsm {
        BsmMode::Reference => {
            dist = measure_projective(&state, &bell_projectors(4, &[1, 2])?)?;
            label_of = |m| m;
        }
        BsmMode::Circuit => {
            for gate in &bsm_circuit(1, 2)? {
                state = apply_gate_with_noise(&state, gate, cfg)?;
            }
            let projs: Vec<CMatrix> = (0..4)
                .map(|m| {
                    let p = DensityMatrix::from_pure(&Ket::basis(4, m)).into_mat();
                    embed_on_targets(&p, 4, &[1, 2])
                })
                .collect::<Result<_>>()?;
            dist = measure_projective(&state, &projs)?;
            label_of = bsm_relabel;
        }
    }

    let mut p_b = [0.0f64; 4];
    let mut conds: [Option<DensityMatrix>; 4] = [None, None, None, None];
    for m in 0..4usize {
        let b = label_of(m);
        p_b[b] = dist.prob(m);
        if let Some(post) = dist.post_state(m) {
            let outer = partial_trace(post, &[2, 2, 2, 2], &[0, 3])?;
            conds[b] = Some(werner_mix(&outer, cfg.werner_v)?);
        }
    }
    Ok((p_b, conds))
}

/// Runs the full pipeline: gate-level preparation with noise, BSM,
/// conditional local measurements, readout error and optional correction,
/// and (if `cfg.shots > 0`) multinomial sampling. Exact mode consumes no
/// randomness; shot mode is deterministic for a fixed seed.
pub fn run_noisy_game(cfg: &NoiseConfig, seed: u64) -> Result<ProbTable> {
    let (p_b, conds) = conditional_swapped_states(cfg)?;
    let mut table = table_from_conditionals(&p_b, &conds)?;

    let model = if cfg.readout_eps > 0.0 {
        Some(ReadoutModel::symmetric(cfg.readout_eps, 4)?)
    } else {
        None
    };
    if let Some(m) = &model {
        let mut rows = *table.rows();
        for row in rows.iter_mut() {
            let dist = OutcomeDist::new(4, row.to_vec())?;
            let noisy = apply_readout_error(&dist, m)?;
            row.copy_from_slice(noisy.probs());
        }
        table = ProbTable::new(rows)?;
    }

    if cfg.shots > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = *table.rows();
        for row in rows.iter_mut() {
            let counts = sample_multinomial_with(&mut rng, row, cfg.shots);
            for (v, &c) in row.iter_mut().zip(&counts) {
                *v = c as f64 / cfg.shots as f64;
            }
        }
        table = ProbTable::new(rows)?;
    }

    if cfg.readout_correct {
        let m = model.unwrap_or_else(|| ReadoutModel::identity(4));
        let mut rows = *table.rows();
        for row in rows.iter_mut() {
            let dist = OutcomeDist::new(4, row.to_vec())?;
            let fixed = correct_readout(&dist, &m)?;
            row.copy_from_slice(fixed.probs());
        }
        table = ProbTable::new(rows)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::CLASSICAL_BOUND;
    use crate::quantum::fidelity_pure;

    #[test]
    fn weight_table_entries_and_correlator_constraint() {
        let w = WeightTable::build();
        for row in w.rows() {
            for &e in row {
                assert!(e == 1 || e == -1);
            }
        }
        // from_rows re-validates both constraints.
        assert!(WeightTable::from_rows(*w.rows()).is_ok());
        // Deterministic rebuild.
        assert_eq!(WeightTable::build(), w);
    }

    #[test]
    fn weight_table_first_row_outcome_b00() {
        // Setting (1,1), b = 00: t = s_Z(φ⁺) = +1, so w = (−1)^(a⊕c).
        let w = WeightTable::build();
        for a in 0..2usize {
            for c in 0..2usize {
                let expect = if (a ^ c) == 0 { 1.0 } else { -1.0 };
                assert_eq!(w.weight(0, (a << 3) | c), expect);
            }
        }
    }

    #[test]
    fn ideal_strategy_reaches_the_complex_bound() {
        let p = ideal_strategy_probs().unwrap();
        let w = WeightTable::build();
        assert!((score(&p, &w) - COMPLEX_BOUND).abs() < 1e-9);
    }

    #[test]
    fn ideal_table_rows_and_bob_marginals() {
        let p = ideal_strategy_probs().unwrap();
        for s in 0..N_SETTINGS {
            let sum: f64 = p.rows()[s].iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            for m in p.bob_marginal(s) {
                assert!((m - 0.25).abs() < 1e-12);
            }
        }
        assert!(p.no_signaling_error() < 1e-12);
    }

    #[test]
    fn uniform_table_scores_zero() {
        let p = ProbTable::new([[1.0 / 16.0; N_OUTCOMES]; N_SETTINGS]).unwrap();
        let w = WeightTable::build();
        assert!(score(&p, &w).abs() < 1e-12);
    }

    #[test]
    fn score_is_linear() {
        let w = WeightTable::build();
        let p1 = ideal_strategy_probs().unwrap();
        let p2 = ProbTable::new([[1.0 / 16.0; N_OUTCOMES]; N_SETTINGS]).unwrap();
        for lam in [0.0, 0.3, 0.8, 1.0] {
            let mut rows = [[0.0; N_OUTCOMES]; N_SETTINGS];
            for (s, row) in rows.iter_mut().enumerate() {
                for (o, e) in row.iter_mut().enumerate() {
                    *e = lam * p1.prob(s, o) + (1.0 - lam) * p2.prob(s, o);
                }
            }
            let mix = ProbTable::new(rows).unwrap();
            let expect = lam * score(&p1, &w) + (1.0 - lam) * score(&p2, &w);
            assert!((score(&mix, &w) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn classical_bound_is_exactly_six() {
        let w = WeightTable::build();
        let (best, witness) = lhv_max(&w);
        assert_eq!(best, CLASSICAL_BOUND);
        // The witness re-scores to exactly the same value.
        let table = witness.prob_table().unwrap();
        assert_eq!(score(&table, &w), best);
    }

    #[test]
    fn flipped_weights_give_minus_the_minimum() {
        let w = WeightTable::build();
        // Enumerate the minimum directly.
        let mut min = f64::MAX;
        for alice_bits in 0..8u8 {
            for charlie_bits in 0..64u8 {
                for bob in 0..4u8 {
                    let s = DeterministicStrategy {
                        alice_bits,
                        charlie_bits,
                        bob,
                    };
                    let v = score(&s.prob_table().unwrap(), &w);
                    min = min.min(v);
                }
            }
        }
        let mut flipped = *w.rows();
        for row in flipped.iter_mut() {
            for e in row.iter_mut() {
                *e = -*e;
            }
        }
        let wf = WeightTable::from_rows(flipped).unwrap();
        let (best_flipped, _) = lhv_max(&wf);
        assert_eq!(best_flipped, -min);
    }

    #[test]
    fn lhv_invariant_under_alice_relabel() {
        // Flip a → 1−a and compensate in the weights: the maximum is
        // unchanged because the strategy set is closed under the relabel.
        let w = WeightTable::build();
        let mut relabeled = [[0i8; N_OUTCOMES]; N_SETTINGS];
        for (s, row) in relabeled.iter_mut().enumerate() {
            for (o, e) in row.iter_mut().enumerate() {
                *e = w.rows()[s][o ^ 0b1000];
            }
        }
        let wr = WeightTable::from_rows(relabeled).unwrap();
        assert_eq!(lhv_max(&wr).0, lhv_max(&w).0);
    }

    #[test]
    fn werner_relations() {
        let w = WeightTable::build();
        assert!((werner_score(1.0).unwrap() - COMPLEX_BOUND).abs() < 1e-12);
        assert!(werner_score(1.2).is_err());
        // Threshold fidelity ≈ 0.9266 within the stated half-millipoint.
        assert!((threshold_fidelity() - 0.9266).abs() < 5e-4);
        // Model evaluation agrees with the closed form.
        for v in [0.2, 0.7, 0.936] {
            let cfg = NoiseConfig {
                werner_v: v,
                ..NoiseConfig::default()
            };
            let p = run_noisy_game(&cfg, 0).unwrap();
            assert!((score(&p, &w) - werner_score(v).unwrap()).abs() < 1e-9);
        }
        assert!((visibility_of_fidelity(0.952).unwrap() - 0.936).abs() < 1e-12);
    }

    #[test]
    fn noiseless_pipeline_matches_analytic_table() {
        let cfg = NoiseConfig::default();
        let p = run_noisy_game(&cfg, 0).unwrap();
        let ideal = ideal_strategy_probs().unwrap();
        assert!(p.max_abs_diff(&ideal) < 1e-12);
    }

    #[test]
    fn circuit_bsm_matches_reference_bsm() {
        let reference = run_noisy_game(&NoiseConfig::default(), 0).unwrap();
        let circuit = run_noisy_game(
            &NoiseConfig {
                bsm: BsmMode::Circuit,
                ..NoiseConfig::default()
            },
            0,
        )
        .unwrap();
        assert!(circuit.max_abs_diff(&reference) < 1e-10);
    }

    #[test]
    fn swapped_conditionals_are_bell_states() {
        for bsm in [BsmMode::Reference, BsmMode::Circuit] {
            let cfg = NoiseConfig {
                bsm,
                ..NoiseConfig::default()
            };
            let (p_b, conds) = conditional_swapped_states(&cfg).unwrap();
            for b in 0..4 {
                assert!((p_b[b] - 0.25).abs() < 1e-12, "{bsm:?} outcome {b}");
                let rho = conds[b].as_ref().unwrap();
                let f = fidelity_pure(rho, &bell_state(b).unwrap()).unwrap();
                assert!((f - 1.0).abs() < 1e-10, "{bsm:?} outcome {b}: {f}");
            }
        }
    }

    #[test]
    fn full_depolarizing_kills_the_score() {
        let cfg = NoiseConfig {
            depol1: 1.0,
            ..NoiseConfig::default()
        };
        let p = run_noisy_game(&cfg, 0).unwrap();
        let w = WeightTable::build();
        assert!(score(&p, &w).abs() < 1e-9);
    }

    #[test]
    fn model_tables_respect_no_signaling() {
        for cfg in [
            NoiseConfig {
                depol2: 0.05,
                ..NoiseConfig::default()
            },
            NoiseConfig {
                werner_v: 0.9,
                amp_damp: 0.03,
                ..NoiseConfig::default()
            },
        ] {
            let p = run_noisy_game(&cfg, 0).unwrap();
            assert!(p.no_signaling_error() < 1e-9);
        }
    }

    #[test]
    fn readout_error_and_correction_round_trip() {
        let w = WeightTable::build();
        let clean = run_noisy_game(&NoiseConfig::default(), 0).unwrap();
        let noisy = run_noisy_game(
            &NoiseConfig {
                readout_eps: 0.0034,
                ..NoiseConfig::default()
            },
            0,
        )
        .unwrap();
        // Readout flips strictly reduce the score.
        assert!(score(&noisy, &w) < score(&clean, &w));
        let corrected = run_noisy_game(
            &NoiseConfig {
                readout_eps: 0.0034,
                readout_correct: true,
                ..NoiseConfig::default()
            },
            0,
        )
        .unwrap();
        assert!(corrected.max_abs_diff(&clean) < 1e-10);
    }

    #[test]
    fn shot_mode_is_deterministic_and_normalized() {
        let cfg = NoiseConfig {
            shots: 2000,
            ..NoiseConfig::default()
        };
        let a = run_noisy_game(&cfg, 11).unwrap();
        let b = run_noisy_game(&cfg, 11).unwrap();
        let c = run_noisy_game(&cfg, 12).unwrap();
        assert_eq!(a.rows(), b.rows());
        assert!(a.max_abs_diff(&c) > 0.0);
        for s in 0..N_SETTINGS {
            let sum: f64 = a.rows()[s].iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn setting_pair_validation() {
        assert!(SettingPair::new(1, 1).is_ok());
        assert_eq!(SettingPair::new(3, 6).unwrap().index(), 11);
        assert!(SettingPair::new(1, 5).is_err());
        assert!(SettingPair::new(2, 3).is_err());
        assert!(SettingPair::new(4, 1).is_err());
    }
}
