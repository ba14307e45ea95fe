//! Per-pair mechanics: user responses, the encoding relation, and one
//! round trip of a pair through both (possibly tapped) channels.

use crate::adversary::ChannelTap;
use crate::bits::Bit;
use crate::protocol::transcript::{Event, Party, Transcript};
use crate::quantum::{BellKind, Executor, Field, PauliOp, QubitId};

/// What a user does with one in-flight particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParticleAction {
    /// Reflect it untouched.
    Ctrl,
    /// Apply the Pauli operation encoding the next sequence bit, then return
    /// it.
    Sift { op: PauliOp },
}

impl ParticleAction {
    pub fn is_ctrl(self) -> bool {
        matches!(self, ParticleAction::Ctrl)
    }
}

/// What a transmitted pair is for, fixed by the shared key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRole {
    /// Key bit 1: both users reflect; TP checks the pair measures as
    /// prepared.
    CtrlCheck,
    /// Key bit 0: the pair carries the users' SIFT slot `slot` (masked data
    /// or decoy, by the placement).
    SiftData { slot: usize },
    /// Key bit 0 beyond the 2n payload slots (padded keys only): encodes
    /// identity and is excluded from the comparison string.
    SiftPadding,
}

/// TP's bookkeeping for one transmitted pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    /// Transmission position j ∈ 0..4n.
    pub position: usize,
    /// Bell state TP recorded as prepared.
    pub initial: BellKind,
    pub alice_action: ParticleAction,
    pub bob_action: ParticleAction,
    /// Bell state TP recorded as measured; `None` until measurement.
    pub tp_outcome: Option<BellKind>,
    pub role: PairRole,
    /// Raw comparison bit for payload SIFT pairs; `None` otherwise.
    pub c_bit: Option<Bit>,
}

/// The Bell state an honestly handled pair measures as, given the XOR of the
/// two encoded bits: 0 keeps the prepared state, 1 swaps φ ↔ ψ with the sign
/// kept.
pub fn expected_bell(initial: BellKind, flip: Bit) -> BellKind {
    if flip == 0 {
        initial
    } else {
        initial.flipped()
    }
}

/// TP's raw comparison bit: 0 when the pair measured as prepared, 1 when it
/// flipped.
pub fn tp_classify(initial: BellKind, outcome: BellKind) -> Bit {
    Bit::from(outcome != initial)
}

/// A user's response to the particle at a position: CTRL on key bit 1,
/// otherwise SIFT encoding the next sequence bit (identity once the sequence
/// is exhausted, i.e. padding). Advances the user's SIFT cursor.
pub fn user_respond(key_bit: Bit, sequence: &[Bit], sift_cursor: &mut usize) -> ParticleAction {
    if key_bit == 1 {
        return ParticleAction::Ctrl;
    }
    let op = sequence
        .get(*sift_cursor)
        .map_or(PauliOp::I, |&bit| PauliOp::for_bit(bit));
    *sift_cursor += 1;
    ParticleAction::Sift { op }
}

/// Sends an already-prepared pair through both channels: Alice's full round
/// trip, then Bob's, each leg passing through the tap. Returns the qubits
/// that arrived back at TP.
pub fn transmit_pair<F: Field, E: Executor<F>, T: ChannelTap<F>>(
    exec: &mut E,
    tap: &mut T,
    transcript: &mut Transcript,
    position: usize,
    pair: (QubitId, QubitId),
    alice_action: ParticleAction,
    bob_action: ParticleAction,
) -> (QubitId, QubitId) {
    let (qa, qb) = pair;
    let qa = {
        transcript.push(Event::ParticleSent {
            from: Party::Tp,
            to: Party::Alice,
            position,
            channel_qubit: qa.index(),
        });
        let q = tap.tp_to_alice(exec, position, qa);
        if let ParticleAction::Sift { op } = alice_action {
            exec.apply_pauli(q, op);
        }
        let q = tap.alice_to_tp(exec, position, q);
        transcript.push(Event::ParticleReturned {
            from: Party::Alice,
            to: Party::Tp,
            position,
            channel_qubit: q.index(),
        });
        q
    };
    let qb = {
        transcript.push(Event::ParticleSent {
            from: Party::Tp,
            to: Party::Bob,
            position,
            channel_qubit: qb.index(),
        });
        let q = tap.tp_to_bob(exec, position, qb);
        if let ParticleAction::Sift { op } = bob_action {
            exec.apply_pauli(q, op);
        }
        let q = tap.bob_to_tp(exec, position, q);
        transcript.push(Event::ParticleReturned {
            from: Party::Bob,
            to: Party::Tp,
            position,
            channel_qubit: q.index(),
        });
        q
    };
    (qa, qb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::NoopTap;
    use crate::quantum::{enumerate_branches, Rational, Sqrt2Ext};

    #[test]
    fn expected_bell_matches_hand_rules() {
        assert_eq!(expected_bell(BellKind::PhiPlus, 0), BellKind::PhiPlus);
        assert_eq!(expected_bell(BellKind::PhiPlus, 1), BellKind::PsiPlus);
        assert_eq!(expected_bell(BellKind::PsiMinus, 1), BellKind::PhiMinus);
    }

    #[test]
    fn tp_classify_is_change_detection() {
        assert_eq!(tp_classify(BellKind::PhiPlus, BellKind::PhiPlus), 0);
        assert_eq!(tp_classify(BellKind::PhiPlus, BellKind::PsiPlus), 1);
    }

    #[test]
    fn user_respond_consumes_sequence_bits_only_on_sift() {
        let seq = [1, 0];
        let mut cursor = 0;
        assert_eq!(user_respond(1, &seq, &mut cursor), ParticleAction::Ctrl);
        assert_eq!(cursor, 0);
        assert_eq!(
            user_respond(0, &seq, &mut cursor),
            ParticleAction::Sift { op: PauliOp::SigmaX }
        );
        assert_eq!(
            user_respond(0, &seq, &mut cursor),
            ParticleAction::Sift { op: PauliOp::I }
        );
        // Exhausted sequence: identity padding.
        assert_eq!(
            user_respond(0, &seq, &mut cursor),
            ParticleAction::Sift { op: PauliOp::I }
        );
        assert_eq!(cursor, 3);
    }

    #[test]
    fn untapped_transmission_realises_the_encoding_relation() {
        // Every (initial, a, b): an honest round trip ends in
        // expected_bell(initial, a⊕b) with certainty.
        for initial in BellKind::ALL {
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let set = enumerate_branches::<Sqrt2Ext, BellKind>(8, |exec| {
                        let mut transcript = Transcript::new();
                        let pair = exec.prepare_bell(initial);
                        let (qa, qb) = transmit_pair(
                            exec,
                            &mut NoopTap,
                            &mut transcript,
                            0,
                            pair,
                            ParticleAction::Sift { op: PauliOp::for_bit(a) },
                            ParticleAction::Sift { op: PauliOp::for_bit(b) },
                        );
                        exec.measure_bell(qa, qb)
                    })
                    .unwrap();
                    assert_eq!(set.branches.len(), 1);
                    assert_eq!(set.branches[0].value, expected_bell(initial, a ^ b));
                    assert_eq!(
                        set.branches[0].probability.as_rational(),
                        Some(Rational::from_integer(1))
                    );
                }
            }
        }
    }
}
