//! Run configuration: sizes, key discipline, slot placement, determinism.

use alloc::vec::Vec;
use thiserror::Error;

use crate::quantum::Rational;

/// How the pre-shared key K_AB is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyMode {
    /// Exactly n/2 zeros in a key of length n (requires even n), so the
    /// repeated key yields exactly the 2n SIFT slots the sequences need.
    Balanced,
    /// Uniform key; surplus SIFT slots carry identity padding, and a key
    /// too poor in zeros rejects the run before any particle is sent.
    Padded,
}

impl KeyMode {
    pub fn name(self) -> &'static str {
        match self {
            KeyMode::Balanced => "balanced",
            KeyMode::Padded => "padded",
        }
    }
}

/// Arithmetic backend for a full run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `f64` amplitudes; fast, used for Monte-Carlo work.
    Sampling,
    /// Exact ℚ(√2) amplitudes; outcomes are still drawn from the seeded
    /// stream, but every Born probability along the way is exact.
    Exact,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Sampling => "sampling",
            Mode::Exact => "exact",
        }
    }
}

/// The shared bijection from logical sequence slots to SIFT slots.
///
/// Logical slots `0..n` hold the masked data bits, slots `n..2n` the decoy
/// bits; the placement says which SIFT slot (0-based order of SIFT particles)
/// each logical slot occupies. Both users must use the same placement, and it
/// stays secret from outsiders until the decoy slots are announced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    /// `to_slot[logical]` = SIFT slot of that logical slot.
    to_slot: Vec<usize>,
}

impl Placement {
    /// Data first, decoys after: logical slot l ↦ SIFT slot l.
    pub fn concat(n: usize) -> Self {
        Self { to_slot: (0..2 * n).collect() }
    }

    /// Decoys first, data after.
    pub fn swapped(n: usize) -> Self {
        let mut to_slot: Vec<usize> = (n..2 * n).collect();
        to_slot.extend(0..n);
        Self { to_slot }
    }

    /// An arbitrary placement; `slots[logical]` = SIFT slot. Must be a
    /// bijection over an even number of slots.
    pub fn from_slots(slots: Vec<usize>) -> Result<Self, ProtocolError> {
        if slots.is_empty() || !slots.len().is_multiple_of(2) {
            return Err(ProtocolError::PlacementLength { got: slots.len() });
        }
        let mut seen = alloc::vec![false; slots.len()];
        for &s in &slots {
            if s >= slots.len() || seen[s] {
                return Err(ProtocolError::PlacementNotBijective { slot: s });
            }
            seen[s] = true;
        }
        Ok(Self { to_slot: slots })
    }

    /// n: the number of data slots (= number of decoy slots).
    pub fn half_len(&self) -> usize {
        self.to_slot.len() / 2
    }

    /// Total number of SIFT slots carrying payload, 2n.
    pub fn len(&self) -> usize {
        self.to_slot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_slot.is_empty()
    }

    /// SIFT slot of masked data bit `i`.
    pub fn data_slot(&self, i: usize) -> usize {
        self.to_slot[i]
    }

    /// SIFT slot of decoy bit `d`.
    pub fn decoy_slot(&self, d: usize) -> usize {
        self.to_slot[self.half_len() + d]
    }

    /// The decoy SIFT slots in decoy order `d = 0..n`.
    pub fn decoy_slots(&self) -> Vec<usize> {
        (0..self.half_len()).map(|d| self.decoy_slot(d)).collect()
    }
}

/// Everything that determines a run, including its randomness.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    /// Length of the compared inputs.
    pub n: usize,
    /// Shared slot placement; must cover 2n slots.
    pub placement: Placement,
    pub key_mode: KeyMode,
    /// Decoy surplus rate of the key-distribution phase (affects only the
    /// qubit accounting, not the comparison itself).
    pub delta: Rational,
    /// Qubit budget of the second key-distribution channel; defaults to the
    /// first channel's when absent.
    pub m_qubits: Option<u64>,
    /// Master seed; every stream of the run derives from it.
    pub seed: u64,
    pub mode: Mode,
}

impl ProtocolConfig {
    /// Defaults: concat placement, balanced key, δ = 0, sampling arithmetic.
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            placement: Placement::concat(n),
            key_mode: KeyMode::Balanced,
            delta: Rational::from_integer(0),
            m_qubits: None,
            seed,
            mode: Mode::Sampling,
        }
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.n == 0 {
            return Err(ProtocolError::ZeroLength);
        }
        if self.key_mode == KeyMode::Balanced && !self.n.is_multiple_of(2) {
            return Err(ProtocolError::OddBalancedLength { n: self.n });
        }
        if self.placement.half_len() != self.n || self.placement.len() != 2 * self.n {
            return Err(ProtocolError::PlacementLength { got: self.placement.len() });
        }
        if self.delta < Rational::from_integer(0) {
            return Err(ProtocolError::NegativeDelta);
        }
        Ok(())
    }
}

/// Configuration and run-rejection errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("n must be at least 1")]
    ZeroLength,
    #[error("balanced keys need an even n to hold exactly n/2 zeros, got n = {n}")]
    OddBalancedLength { n: usize },
    #[error("placement must cover an even, matching number of slots, got {got}")]
    PlacementLength { got: usize },
    #[error("placement is not a bijection: slot {slot} repeats or is out of range")]
    PlacementNotBijective { slot: usize },
    #[error("delta must be non-negative")]
    NegativeDelta,
    #[error("input length {got} does not match n = {expected}")]
    InputLength { expected: usize, got: usize },
    #[error("sampled padded key yields {got} SIFT slots but the sequences need {needed}; the run is rejected before transmission")]
    InsufficientSiftSlots { needed: usize, got: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_validates() {
        assert_eq!(ProtocolConfig::new(8, 1).validate(), Ok(()));
    }

    #[test]
    fn odd_balanced_is_rejected() {
        assert_eq!(
            ProtocolConfig::new(3, 1).validate(),
            Err(ProtocolError::OddBalancedLength { n: 3 })
        );
        let mut padded = ProtocolConfig::new(3, 1);
        padded.key_mode = KeyMode::Padded;
        assert_eq!(padded.validate(), Ok(()));
    }

    #[test]
    fn placements_are_bijections() {
        let p = Placement::swapped(3);
        let mut seen = Vec::new();
        for l in 0..3 {
            seen.push(p.data_slot(l));
        }
        for d in 0..3 {
            seen.push(p.decoy_slot(d));
        }
        seen.sort_unstable();
        assert_eq!(seen, [0, 1, 2, 3, 4, 5]);
        assert_eq!(p.decoy_slots(), [0, 1, 2]);

        assert!(Placement::from_slots(alloc::vec![0, 1, 1, 2]).is_err());
        assert!(Placement::from_slots(alloc::vec![0, 1, 2]).is_err());
        assert!(Placement::from_slots(alloc::vec![3, 0, 2, 1]).is_ok());
    }

    #[test]
    fn mismatched_placement_fails_validation() {
        let mut cfg = ProtocolConfig::new(4, 1);
        cfg.placement = Placement::concat(3);
        assert_eq!(cfg.validate(), Err(ProtocolError::PlacementLength { got: 6 }));
    }
}
