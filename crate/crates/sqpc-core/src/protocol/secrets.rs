//! Secret material of a run and the sequences assembled from it.
//!
//! The pre-shared keys come from a key-distribution phase that this simulator
//! models as an ideal oracle: one uniform sample handed identically to both
//! users. Each user masks their input with a private one-time pad, appends
//! private decoy bits, and arranges both through the shared placement into
//! the sequence their SIFT particles will carry.

use alloc::vec::Vec;

use crate::bits::{balanced_bits, random_bits, xor, Bit};
use crate::protocol::config::{KeyMode, Placement, ProtocolConfig, ProtocolError};
use crate::rng::{stream_rng, StreamRole};

/// Every secret of a run, in one place so tests and experiments can replay
/// them deterministically from the config seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartySecrets {
    /// Alice's input X.
    pub x: Vec<Bit>,
    /// Bob's input Y.
    pub y: Vec<Bit>,
    /// Alice's mask pad (shared only with TP-side arithmetic, never sent).
    pub r_a1: Vec<Bit>,
    /// Alice's decoy bits.
    pub r_a2: Vec<Bit>,
    /// Bob's mask pad.
    pub r_b1: Vec<Bit>,
    /// Bob's decoy bits.
    pub r_b2: Vec<Bit>,
    /// The pre-shared key, length n; bit 1 = CTRL, bit 0 = SIFT.
    pub k_ab: Vec<Bit>,
    /// The key repeated four times, one bit per transmitted pair.
    pub k_ext: Vec<Bit>,
}

impl PartySecrets {
    /// X ⊕ R_A1, the bits Alice's data particles carry.
    pub fn masked_x(&self) -> Vec<Bit> {
        xor(&self.x, &self.r_a1)
    }

    /// Y ⊕ R_B1.
    pub fn masked_y(&self) -> Vec<Bit> {
        xor(&self.y, &self.r_b1)
    }

    /// Alice's full SIFT payload sequence, placement applied.
    pub fn sequence_a(&self, placement: &Placement) -> Vec<Bit> {
        assemble_sequence(&self.masked_x(), &self.r_a2, placement)
    }

    /// Bob's full SIFT payload sequence.
    pub fn sequence_b(&self, placement: &Placement) -> Vec<Bit> {
        assemble_sequence(&self.masked_y(), &self.r_b2, placement)
    }
}

/// Masks an input with a same-length one-time pad.
pub fn mask_input(input: &[Bit], pad: &[Bit]) -> Vec<Bit> {
    xor(input, pad)
}

/// Arranges masked data and decoys into SIFT-slot order.
pub fn assemble_sequence(masked: &[Bit], decoys: &[Bit], placement: &Placement) -> Vec<Bit> {
    let n = placement.half_len();
    assert_eq!(masked.len(), n, "masked data must fill the data slots");
    assert_eq!(decoys.len(), n, "decoys must fill the decoy slots");
    let mut seq = alloc::vec![0; placement.len()];
    for (i, &bit) in masked.iter().enumerate() {
        seq[placement.data_slot(i)] = bit;
    }
    for (d, &bit) in decoys.iter().enumerate() {
        seq[placement.decoy_slot(d)] = bit;
    }
    seq
}

/// Splits a SIFT-slot sequence back into (masked data, decoys); inverse of
/// [`assemble_sequence`].
pub fn split_sequence(seq: &[Bit], placement: &Placement) -> (Vec<Bit>, Vec<Bit>) {
    let n = placement.half_len();
    assert_eq!(seq.len(), placement.len());
    let masked = (0..n).map(|i| seq[placement.data_slot(i)]).collect();
    let decoys = (0..n).map(|d| seq[placement.decoy_slot(d)]).collect();
    (masked, decoys)
}

/// Samples all secrets for a run from the config's seed streams.
///
/// With padded keys, a sample too poor in SIFT slots to carry the sequences
/// rejects the run here, before any particle would be transmitted.
pub fn sample_secrets(
    config: &ProtocolConfig,
    x: &[Bit],
    y: &[Bit],
) -> Result<PartySecrets, ProtocolError> {
    config.validate()?;
    for input in [x, y] {
        if input.len() != config.n {
            return Err(ProtocolError::InputLength { expected: config.n, got: input.len() });
        }
    }
    let n = config.n;
    let mut alice = stream_rng(config.seed, StreamRole::AliceSecrets, 0);
    let mut bob = stream_rng(config.seed, StreamRole::BobSecrets, 0);
    let mut key = stream_rng(config.seed, StreamRole::SharedKey, 0);
    let k_ab = match config.key_mode {
        KeyMode::Balanced => balanced_bits(&mut key, n, n / 2),
        KeyMode::Padded => random_bits(&mut key, n),
    };
    let mut k_ext = Vec::with_capacity(4 * n);
    for _ in 0..4 {
        k_ext.extend_from_slice(&k_ab);
    }
    let sift_slots = k_ext.iter().filter(|&&k| k == 0).count();
    if sift_slots < 2 * n {
        return Err(ProtocolError::InsufficientSiftSlots { needed: 2 * n, got: sift_slots });
    }
    Ok(PartySecrets {
        x: x.to_vec(),
        y: y.to_vec(),
        r_a1: random_bits(&mut alice, n),
        r_a2: random_bits(&mut alice, n),
        r_b1: random_bits(&mut bob, n),
        r_b2: random_bits(&mut bob, n),
        k_ab,
        k_ext,
    })
}
