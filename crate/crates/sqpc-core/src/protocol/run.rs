//! The full protocol run: transmission, both eavesdropping checks, and the
//! round-by-round comparison.
//!
//! One entry point, [`run_protocol`], drives both the honest execution
//! (optionally with a channel tap injected) and the dishonest-TP variant,
//! which replaces the Bell pairs with single-qubit probes but leaves the
//! users' behaviour untouched. All randomness comes from per-role streams of
//! the config seed, so a run is a pure function of `(config, x, y, attack)`.

use alloc::vec::Vec;

use rand::Rng;

use crate::adversary::{AdversaryKnowledge, AnyTap, AttackStrategy, ChannelTap};
use crate::bits::Bit;
use crate::protocol::config::{Mode, Placement, ProtocolConfig, ProtocolError};
use crate::protocol::pair::{
    expected_bell, tp_classify, transmit_pair, user_respond, PairRecord, PairRole, ParticleAction,
};
use crate::protocol::secrets::{sample_secrets, PartySecrets};
use crate::protocol::transcript::{Announcement, CheckKind, Event, Party, RunOutcome, Transcript};
use crate::quantum::{
    BellKind, Executor, Field, QuantumRegister, SamplingExecutor, Sqrt2Ext, DEFAULT_CAPACITY,
};
use crate::rng::{stream_rng, StreamRole};

/// Everything a finished run exposes: the verdict, the derived strings, the
/// per-pair records, the public transcript, and — when an adversary was
/// injected — what that adversary walked away with.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub outcome: RunOutcome,
    /// Comparison rounds actually announced (n on equality, fewer on an
    /// early difference, 0 on abort).
    pub rounds_used: usize,
    /// The announced m bits, one per used round.
    pub m_bits: Vec<Bit>,
    /// TP's raw comparison bits per SIFT slot (data and decoy slots alike).
    pub c_bits: Vec<Bit>,
    /// The comparison string after decoy slots are dropped; empty on abort.
    pub c_prime: Vec<Bit>,
    pub pairs: Vec<PairRecord>,
    pub transcript: Transcript,
    /// Present exactly when an attack was injected.
    pub knowledge: Option<AdversaryKnowledge>,
}

/// TP's CTRL consistency check: every CTRL pair must have measured exactly
/// as prepared. Returns the first offending pair position.
pub fn ctrl_check(pairs: &[PairRecord]) -> Result<(), usize> {
    for rec in pairs {
        if rec.role == PairRole::CtrlCheck {
            let outcome = rec.tp_outcome.expect("pairs are measured before the checks");
            if tp_classify(rec.initial, outcome) != 0 {
                return Err(rec.position);
            }
        }
    }
    Ok(())
}

/// The users' decoy check, evaluated on the public announcements alone: at
/// each revealed slot, TP's measured state must equal the prepared state
/// flipped by the XOR of the two decoy bits. Returns the index into the
/// reveal lists of the first violation.
pub fn sift_check(
    prepared: &[BellKind],
    measured: &[BellKind],
    alice_decoys: &[Bit],
    bob_decoys: &[Bit],
) -> Result<(), usize> {
    assert!(
        prepared.len() == measured.len()
            && prepared.len() == alice_decoys.len()
            && prepared.len() == bob_decoys.len(),
        "decoy reveal lists must align"
    );
    for i in 0..prepared.len() {
        if measured[i] != expected_bell(prepared[i], alice_decoys[i] ^ bob_decoys[i]) {
            return Err(i);
        }
    }
    Ok(())
}

/// Drops the decoy slots from the per-slot comparison bits: entry i is the
/// raw bit of the pair that carried masked data bit i.
pub fn extract_c_prime(c_bits: &[Bit], placement: &Placement) -> Vec<Bit> {
    (0..placement.half_len())
        .map(|i| c_bits[placement.data_slot(i)])
        .collect()
}

/// The values announced in one comparison round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparisonRound {
    pub round: usize,
    pub c_prime: Bit,
    pub alice_masked: Bit,
    pub bob_masked: Bit,
    /// (r_A1 ⊕ k) ⊕ (r_B1 ⊕ k) ⊕ c′ — equals x ⊕ y for that round.
    pub m: Bit,
}

/// All n rounds' worth of announcements, as pure data; the runner truncates
/// at the first difference.
pub fn comparison_rounds(c_prime: &[Bit], secrets: &PartySecrets) -> Vec<ComparisonRound> {
    c_prime
        .iter()
        .enumerate()
        .map(|(round, &c)| {
            let alice_masked = secrets.r_a1[round] ^ secrets.k_ab[round];
            let bob_masked = secrets.r_b1[round] ^ secrets.k_ab[round];
            ComparisonRound {
                round,
                c_prime: c,
                alice_masked,
                bob_masked,
                m: alice_masked ^ bob_masked ^ c,
            }
        })
        .collect()
}

/// Runs the protocol end to end.
///
/// `x` and `y` are the users' inputs, both of length `config.n`. `attack`
/// injects one adversary: a wiretap on the quantum and classical channels,
/// or the dishonest-TP variant. The result's `knowledge` field is populated
/// exactly when an attack was injected.
pub fn run_protocol(
    config: &ProtocolConfig,
    x: &[Bit],
    y: &[Bit],
    attack: Option<&AttackStrategy>,
) -> Result<ProtocolResult, ProtocolError> {
    match config.mode {
        Mode::Sampling => run_with_field::<f64>(config, x, y, attack),
        Mode::Exact => run_with_field::<Sqrt2Ext>(config, x, y, attack),
    }
}

fn run_with_field<F: Field>(
    config: &ProtocolConfig,
    x: &[Bit],
    y: &[Bit],
    attack: Option<&AttackStrategy>,
) -> Result<ProtocolResult, ProtocolError> {
    let secrets = sample_secrets(config, x, y)?;
    if attack == Some(&AttackStrategy::DishonestTp) {
        return Ok(run_dishonest_tp::<F>(config, secrets));
    }
    let tap = AnyTap::for_strategy(attack, &secrets.k_ext)
        .expect("non-TP strategies are channel taps");
    let mut result = run_tapped::<F>(config, secrets, tap, attack.is_some());
    if attack.is_none() {
        result.knowledge = None;
    }
    Ok(result)
}

/// The per-position plan both runner variants share.
struct PositionPlan {
    alice_action: ParticleAction,
    bob_action: ParticleAction,
    role: PairRole,
}

/// Derives each position's user actions and role from the extended key and
/// the payload sequences the placement arranges.
fn position_plans(secrets: &PartySecrets, placement: &Placement) -> Vec<PositionPlan> {
    let seq_a = secrets.sequence_a(placement);
    let seq_b = secrets.sequence_b(placement);
    let payload_slots = placement.len();
    let mut cursor_a = 0;
    let mut cursor_b = 0;
    secrets
        .k_ext
        .iter()
        .map(|&key_bit| {
            let slot = cursor_a;
            let alice_action = user_respond(key_bit, &seq_a, &mut cursor_a);
            let bob_action = user_respond(key_bit, &seq_b, &mut cursor_b);
            debug_assert_eq!(cursor_a, cursor_b, "the shared key keeps users in lockstep");
            let role = if key_bit == 1 {
                PairRole::CtrlCheck
            } else if slot < payload_slots {
                PairRole::SiftData { slot }
            } else {
                PairRole::SiftPadding
            };
            PositionPlan { alice_action, bob_action, role }
        })
        .collect()
}

/// Honest TP, honest users, an optional wiretap on the channels.
fn run_tapped<F: Field>(
    config: &ProtocolConfig,
    secrets: PartySecrets,
    mut tap: AnyTap,
    attacked: bool,
) -> ProtocolResult {
    let plans = position_plans(&secrets, &config.placement);
    let mut transcript = Transcript::new();
    let mut pairs = Vec::with_capacity(plans.len());
    let mut c_bits = alloc::vec![0; config.placement.len()];
    let mut slot_positions = alloc::vec![0; config.placement.len()];

    for (position, plan) in plans.iter().enumerate() {
        let mut state_rng = stream_rng(config.seed, StreamRole::TpState, position as u64);
        let initial = BellKind::ALL[state_rng.random_range(0..4)];
        let mut exec = SamplingExecutor::<F, _>::new(
            QuantumRegister::with_capacity(DEFAULT_CAPACITY),
            stream_rng(config.seed, StreamRole::Measurement, position as u64),
            stream_rng(config.seed, StreamRole::AttackCoin, position as u64),
        );
        let pair = exec.prepare_bell(initial);
        let (qa, qb) = transmit_pair(
            &mut exec,
            &mut tap,
            &mut transcript,
            position,
            pair,
            plan.alice_action,
            plan.bob_action,
        );
        let outcome = exec.measure_bell(qa, qb);
        let c_bit = match plan.role {
            PairRole::SiftData { slot } => {
                let c = tp_classify(initial, outcome);
                c_bits[slot] = c;
                slot_positions[slot] = position;
                Some(c)
            }
            PairRole::CtrlCheck | PairRole::SiftPadding => None,
        };
        pairs.push(PairRecord {
            position,
            initial,
            alice_action: plan.alice_action,
            bob_action: plan.bob_action,
            tp_outcome: Some(outcome),
            role: plan.role,
            c_bit,
        });
    }

    finish_run::<F>(config, &secrets, &mut tap, pairs, c_bits, slot_positions, transcript, attacked)
}

/// Dishonest TP: single-qubit probes instead of Bell pairs, Z measurements
/// on the returns, fabricated check announcements, and a correct comparison
/// string computed from the decoded payloads.
fn run_dishonest_tp<F: Field>(config: &ProtocolConfig, secrets: PartySecrets) -> ProtocolResult {
    let plans = position_plans(&secrets, &config.placement);
    let mut transcript = Transcript::new();
    let mut pairs = Vec::with_capacity(plans.len());
    let mut c_bits = alloc::vec![0; config.placement.len()];
    let mut slot_positions = alloc::vec![0; config.placement.len()];
    let mut learned_a = alloc::vec![0; config.placement.len()];
    let mut learned_b = alloc::vec![0; config.placement.len()];
    let mut tap = AnyTap::noop();

    for (position, plan) in plans.iter().enumerate() {
        let mut state_rng = stream_rng(config.seed, StreamRole::TpState, position as u64);
        let probe_a = state_rng.random::<bool>() as Bit;
        let probe_b = state_rng.random::<bool>() as Bit;
        let mut exec = SamplingExecutor::<F, _>::new(
            QuantumRegister::with_capacity(DEFAULT_CAPACITY),
            stream_rng(config.seed, StreamRole::Measurement, position as u64),
            stream_rng(config.seed, StreamRole::AttackCoin, position as u64),
        );
        let qa = exec.prepare_z(probe_a);
        let qb = exec.prepare_z(probe_b);
        let (qa, qb) = transmit_pair(
            &mut exec,
            &mut tap,
            &mut transcript,
            position,
            (qa, qb),
            plan.alice_action,
            plan.bob_action,
        );
        // Z probes read the encoded bits exactly: |p⟩ returns as |p ⊕ bit⟩.
        let decoded_a = exec.measure_z(qa) ^ probe_a;
        let decoded_b = exec.measure_z(qb) ^ probe_b;

        // TP's claimed Bell bookkeeping, fabricated to satisfy both checks:
        // a uniformly drawn "prepared" state, and a "measured" state related
        // to it by exactly the flip the decoded bits dictate.
        let mut fab_rng = stream_rng(config.seed, StreamRole::Fabrication, position as u64);
        let claimed_initial = BellKind::ALL[fab_rng.random_range(0..4)];
        let claimed_outcome = expected_bell(claimed_initial, decoded_a ^ decoded_b);
        let c_bit = match plan.role {
            PairRole::SiftData { slot } => {
                let c = decoded_a ^ decoded_b;
                c_bits[slot] = c;
                slot_positions[slot] = position;
                learned_a[slot] = decoded_a;
                learned_b[slot] = decoded_b;
                Some(c)
            }
            PairRole::CtrlCheck | PairRole::SiftPadding => None,
        };
        pairs.push(PairRecord {
            position,
            initial: claimed_initial,
            alice_action: plan.alice_action,
            bob_action: plan.bob_action,
            tp_outcome: Some(claimed_outcome),
            role: plan.role,
            c_bit,
        });
    }

    let mut result = finish_run::<F>(
        config,
        &secrets,
        &mut tap,
        pairs,
        c_bits,
        slot_positions,
        transcript,
        false,
    );
    let mut knowledge = AdversaryKnowledge {
        learned_a: Some(learned_a),
        learned_b: Some(learned_b),
        ..AdversaryKnowledge::default()
    };
    fill_input_guesses(&mut knowledge, &config.placement);
    result.knowledge = Some(knowledge);
    result
}

fn announce<F: Field>(
    tap: &mut AnyTap,
    transcript: &mut Transcript,
    speaker: Party,
    announcement: Announcement,
) {
    let event = Event::Announcement { speaker, announcement };
    ChannelTap::<F>::hear(tap, &event);
    transcript.push(event);
}

fn tap_knowledge<F: Field>(tap: &AnyTap, placement: &Placement) -> Option<AdversaryKnowledge> {
    let mut knowledge = ChannelTap::<F>::knowledge(tap);
    if let Some(k) = knowledge.as_mut() {
        fill_input_guesses(k, placement);
    }
    knowledge
}

/// Announcement, check, and comparison phases, identical for honest and
/// dishonest TP once the pair records and per-slot bits are in hand.
#[allow(clippy::too_many_arguments)]
fn finish_run<F: Field>(
    config: &ProtocolConfig,
    secrets: &PartySecrets,
    tap: &mut AnyTap,
    pairs: Vec<PairRecord>,
    c_bits: Vec<Bit>,
    slot_positions: Vec<usize>,
    mut transcript: Transcript,
    attacked: bool,
) -> ProtocolResult {
    // Users disclose their CTRL positions (identical lists: the key is
    // shared).
    let ctrl_positions: Vec<usize> = pairs
        .iter()
        .filter(|r| r.role == PairRole::CtrlCheck)
        .map(|r| r.position)
        .collect();
    for speaker in [Party::Alice, Party::Bob] {
        announce::<F>(
            tap,
            &mut transcript,
            speaker,
            Announcement::CtrlPositions { positions: ctrl_positions.clone() },
        );
    }

    if let Err(position) = ctrl_check(&pairs) {
        transcript.push(Event::Abort { check: CheckKind::Ctrl, position });
        return ProtocolResult {
            outcome: RunOutcome::Aborted { check: CheckKind::Ctrl },
            rounds_used: 0,
            m_bits: Vec::new(),
            c_bits,
            c_prime: Vec::new(),
            knowledge: if attacked { tap_knowledge::<F>(tap, &config.placement) } else { None },
            pairs,
            transcript,
        };
    }

    // Decoy phase: TP reveals first, then both users.
    let decoy_slots = config.placement.decoy_slots();
    let prepared: Vec<BellKind> = decoy_slots
        .iter()
        .map(|&slot| pairs[slot_positions[slot]].initial)
        .collect();
    let measured: Vec<BellKind> = decoy_slots
        .iter()
        .map(|&slot| pairs[slot_positions[slot]].tp_outcome.expect("measured"))
        .collect();
    announce::<F>(
        tap,
        &mut transcript,
        Party::Tp,
        Announcement::TpReveal {
            slots: decoy_slots.clone(),
            prepared: prepared.clone(),
            measured: measured.clone(),
        },
    );
    announce::<F>(
        tap,
        &mut transcript,
        Party::Alice,
        Announcement::DecoyReveal { slots: decoy_slots.clone(), bits: secrets.r_a2.clone() },
    );
    announce::<F>(
        tap,
        &mut transcript,
        Party::Bob,
        Announcement::DecoyReveal { slots: decoy_slots.clone(), bits: secrets.r_b2.clone() },
    );

    if let Err(i) = sift_check(&prepared, &measured, &secrets.r_a2, &secrets.r_b2) {
        let position = slot_positions[decoy_slots[i]];
        transcript.push(Event::Abort { check: CheckKind::Sift, position });
        return ProtocolResult {
            outcome: RunOutcome::Aborted { check: CheckKind::Sift },
            rounds_used: 0,
            m_bits: Vec::new(),
            c_bits,
            c_prime: Vec::new(),
            knowledge: if attacked { tap_knowledge::<F>(tap, &config.placement) } else { None },
            pairs,
            transcript,
        };
    }

    // Comparison phase: stop at the first differing round.
    let c_prime = extract_c_prime(&c_bits, &config.placement);
    let mut m_bits = Vec::new();
    let mut outcome = RunOutcome::Equal;
    for round in comparison_rounds(&c_prime, secrets) {
        announce::<F>(
            tap,
            &mut transcript,
            Party::Tp,
            Announcement::CPrimeBit { round: round.round, bit: round.c_prime },
        );
        announce::<F>(
            tap,
            &mut transcript,
            Party::Alice,
            Announcement::MaskedBit { round: round.round, bit: round.alice_masked },
        );
        announce::<F>(
            tap,
            &mut transcript,
            Party::Bob,
            Announcement::MaskedBit { round: round.round, bit: round.bob_masked },
        );
        m_bits.push(round.m);
        if round.m == 1 {
            outcome = RunOutcome::Unequal { round: round.round };
            break;
        }
    }
    transcript.push(Event::Result { outcome });
    debug_assert_eq!(transcript.validate(), Ok(()));

    ProtocolResult {
        outcome,
        rounds_used: m_bits.len(),
        m_bits,
        c_bits,
        c_prime,
        knowledge: if attacked { tap_knowledge::<F>(tap, &config.placement) } else { None },
        pairs,
        transcript,
    }
}

/// The adversary's best input guess: the learned masked bit at each data
/// slot, aligned through the placement. The mask pads are outside every
/// modeled adversary's view, so each guessed bit is a coin flip — which is
/// the point of the masks, and what the privacy experiments measure.
fn fill_input_guesses(knowledge: &mut AdversaryKnowledge, placement: &Placement) {
    let align = |learned: &[Bit]| -> Vec<Bit> {
        (0..placement.half_len())
            .map(|i| learned[placement.data_slot(i)])
            .collect()
    };
    if let Some(learned_a) = &knowledge.learned_a {
        knowledge.guessed_x = Some(align(learned_a));
    }
    if let Some(learned_b) = &knowledge.learned_b {
        knowledge.guessed_y = Some(align(learned_b));
    }
}
