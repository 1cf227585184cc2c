//! The three score bounds and the regime classifier.

/// Best score of any deterministic local-hidden-variable strategy, confirmed
/// by exhaustive enumeration in [`crate::game::lhv_max`].
pub const CLASSICAL_BOUND: f64 = 6.0;

/// Numerical upper bound on strategies restricted to real Hilbert spaces
/// (dimensions unrestricted). Quoted to two decimals; treated as a target
/// ceiling, not re-derived here.
pub const REAL_BOUND: f64 = 7.66;

/// Complex-quantum maximum of the score: 6√2.
pub const COMPLEX_BOUND: f64 = 6.0 * core::f64::consts::SQRT_2;

/// Which theory class a score is compatible with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// score ≤ 6: a local deterministic model suffices.
    ClassicalCompatible,
    /// 6 < score ≤ 7.66: needs entanglement but real amplitudes suffice.
    RealQuantumCompatible,
    /// score > 7.66: no real-Hilbert-space model reaches this.
    ComplexRequired,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::ClassicalCompatible => "classical-compatible",
            Regime::RealQuantumCompatible => "real-quantum-compatible",
            Regime::ComplexRequired => "complex-required",
        }
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Boundary-inclusive classification: 6 is classical, 7.66 is real.
pub fn classify_regime(score: f64) -> Regime {
    if score <= CLASSICAL_BOUND {
        Regime::ClassicalCompatible
    } else if score <= REAL_BOUND {
        Regime::RealQuantumCompatible
    } else {
        Regime::ComplexRequired
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries_are_inclusive_below() {
        assert_eq!(classify_regime(6.0), Regime::ClassicalCompatible);
        assert_eq!(classify_regime(6.0 + 1e-9), Regime::RealQuantumCompatible);
        assert_eq!(classify_regime(7.66), Regime::RealQuantumCompatible);
        assert_eq!(classify_regime(7.66 + 1e-9), Regime::ComplexRequired);
        assert_eq!(classify_regime(COMPLEX_BOUND), Regime::ComplexRequired);
        assert_eq!(classify_regime(8.09), Regime::ComplexRequired);
        assert_eq!(classify_regime(-1.0), Regime::ClassicalCompatible);
    }

    #[test]
    fn complex_bound_value() {
        assert!((COMPLEX_BOUND - 8.485281374238571).abs() < 1e-12);
    }
}
