//! The transcript_v1 file format: one JSON object per line, each with
//! exactly the keys `seq`, `actor`, `event_type`, `payload`.

use serde_json::{json, Value};
use sqpc_core::protocol::{Announcement, Event, RunOutcome, Transcript};

/// Renders a transcript as transcript_v1 lines, in event order.
pub fn transcript_lines(transcript: &Transcript) -> Vec<String> {
    transcript
        .events()
        .iter()
        .enumerate()
        .map(|(seq, event)| {
            serde_json::to_string(&event_value(seq, event)).expect("events render")
        })
        .collect()
}

fn event_value(seq: usize, event: &Event) -> Value {
    let (actor, event_type, payload) = match event {
        Event::ParticleSent { from, to, position, channel_qubit } => (
            from.name(),
            "particle_sent",
            json!({ "to": to.name(), "position": position, "channel_qubit": channel_qubit }),
        ),
        Event::ParticleReturned { from, to, position, channel_qubit } => (
            from.name(),
            "particle_returned",
            json!({ "to": to.name(), "position": position, "channel_qubit": channel_qubit }),
        ),
        Event::Announcement { speaker, announcement } => {
            (speaker.name(), "announcement", announcement_value(announcement))
        }
        Event::Abort { check, position } => (
            "tp",
            "abort",
            json!({ "check": check.name(), "position": position }),
        ),
        Event::Result { outcome } => ("tp", "result", outcome_value(*outcome)),
    };
    json!({ "seq": seq, "actor": actor, "event_type": event_type, "payload": payload })
}

fn announcement_value(announcement: &Announcement) -> Value {
    match announcement {
        Announcement::CtrlPositions { positions } => {
            json!({ "kind": "ctrl_positions", "positions": positions })
        }
        Announcement::TpReveal { slots, prepared, measured } => json!({
            "kind": "tp_reveal",
            "slots": slots,
            "prepared": prepared.iter().map(|k| k.name()).collect::<Vec<_>>(),
            "measured": measured.iter().map(|k| k.name()).collect::<Vec<_>>(),
        }),
        Announcement::DecoyReveal { slots, bits } => {
            json!({ "kind": "decoy_reveal", "slots": slots, "bits": bits })
        }
        Announcement::CPrimeBit { round, bit } => {
            json!({ "kind": "c_prime_bit", "round": round, "bit": bit })
        }
        Announcement::MaskedBit { round, bit } => {
            json!({ "kind": "masked_bit", "round": round, "bit": bit })
        }
    }
}

fn outcome_value(outcome: RunOutcome) -> Value {
    match outcome {
        RunOutcome::Equal => json!({ "outcome": "equal" }),
        RunOutcome::Unequal { round } => json!({ "outcome": "unequal", "round": round }),
        RunOutcome::Aborted { check } => {
            json!({ "outcome": "aborted", "check": check.name() })
        }
    }
}
