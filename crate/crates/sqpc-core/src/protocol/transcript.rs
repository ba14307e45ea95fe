//! The public record of a run: particle transfers, broadcast announcements,
//! and termination.
//!
//! Everything in a transcript is observable from the classical channel or
//! the laboratory bookkeeping; party-private state (inputs, pads, keys)
//! never appears here. Channel taps get read access to announcements as they
//! happen, which is exactly the wiretap model the adversaries run under.

use alloc::vec::Vec;
use core::fmt;
use thiserror::Error;

use crate::bits::Bit;
use crate::quantum::BellKind;

/// The three protocol parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Tp,
    Alice,
    Bob,
}

impl Party {
    pub fn name(self) -> &'static str {
        match self {
            Party::Tp => "tp",
            Party::Alice => "alice",
            Party::Bob => "bob",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which eavesdropping check a run aborted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// CTRL positions must measure as prepared.
    Ctrl,
    /// Decoy SIFT slots must satisfy the encoding relation.
    Sift,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Ctrl => "ctrl",
            CheckKind::Sift => "sift",
        }
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    /// All n comparison rounds passed: the inputs are equal.
    Equal,
    /// Round `round` (0-based) produced a difference; the run stops there.
    Unequal { round: usize },
    /// An eavesdropping check failed before the comparison.
    Aborted { check: CheckKind },
}

impl RunOutcome {
    pub fn name(self) -> &'static str {
        match self {
            RunOutcome::Equal => "equal",
            RunOutcome::Unequal { .. } => "unequal",
            RunOutcome::Aborted { .. } => "aborted",
        }
    }
}

/// A broadcast on the public classical channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Announcement {
    /// A user names the positions they chose CTRL at.
    CtrlPositions { positions: Vec<usize> },
    /// TP publishes, per decoy SIFT slot, the Bell state prepared and the
    /// Bell state measured. Published before the users reveal their decoys,
    /// so their reveals cannot steer TP's claims.
    TpReveal { slots: Vec<usize>, prepared: Vec<BellKind>, measured: Vec<BellKind> },
    /// A user reveals their decoy bits for the listed SIFT slots.
    DecoyReveal { slots: Vec<usize>, bits: Vec<Bit> },
    /// TP announces one comparison bit c′ for a round.
    CPrimeBit { round: usize, bit: Bit },
    /// A user announces their masked pad bit for a round.
    MaskedBit { round: usize, bit: Bit },
}

/// One observable event of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    /// A particle left TP toward a user.
    ParticleSent { from: Party, to: Party, position: usize, channel_qubit: usize },
    /// A particle arrived back at TP.
    ParticleReturned { from: Party, to: Party, position: usize, channel_qubit: usize },
    /// A classical broadcast.
    Announcement { speaker: Party, announcement: Announcement },
    /// A check failed at the given pair position; terminal.
    Abort { check: CheckKind, position: usize },
    /// The comparison concluded; terminal.
    Result { outcome: RunOutcome },
}

impl Event {
    pub fn is_terminal(&self) -> bool {
        matches!(self, Event::Abort { .. } | Event::Result { .. })
    }
}

/// Append-only event log; refuses events after termination.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// # Panics
    ///
    /// Panics if the transcript already ended with a terminal event; a run
    /// that aborted must not keep talking.
    pub fn push(&mut self, event: Event) {
        assert!(!self.is_terminated(), "transcript already terminated");
        self.events.push(event);
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_terminated(&self) -> bool {
        self.events.last().is_some_and(Event::is_terminal)
    }

    /// Structural well-formedness: at most one particle in flight per user
    /// channel, returns matched to sends, and exactly one terminal event, at
    /// the end.
    pub fn validate(&self) -> Result<(), TranscriptError> {
        let mut in_flight: [Option<usize>; 2] = [None, None];
        let channel = |party: Party| match party {
            Party::Alice => Some(0),
            Party::Bob => Some(1),
            Party::Tp => None,
        };
        for (index, event) in self.events.iter().enumerate() {
            if index > 0 && self.events[index - 1].is_terminal() {
                return Err(TranscriptError::EventAfterTermination { index });
            }
            match event {
                Event::ParticleSent { from: Party::Tp, to, position, .. } => {
                    let ch = channel(*to)
                        .ok_or(TranscriptError::MalformedTransfer { index })?;
                    if in_flight[ch].is_some() {
                        return Err(TranscriptError::OverlappingSend {
                            index,
                            position: *position,
                        });
                    }
                    in_flight[ch] = Some(*position);
                }
                Event::ParticleSent { .. } => {
                    return Err(TranscriptError::MalformedTransfer { index });
                }
                Event::ParticleReturned { from, to: Party::Tp, position, .. } => {
                    let ch = channel(*from)
                        .ok_or(TranscriptError::MalformedTransfer { index })?;
                    if in_flight[ch] != Some(*position) {
                        return Err(TranscriptError::UnmatchedReturn {
                            index,
                            position: *position,
                        });
                    }
                    in_flight[ch] = None;
                }
                Event::ParticleReturned { .. } => {
                    return Err(TranscriptError::MalformedTransfer { index });
                }
                Event::Announcement { .. } | Event::Abort { .. } | Event::Result { .. } => {}
            }
        }
        if let Some(position) = in_flight.iter().flatten().next() {
            return Err(TranscriptError::DanglingFlight { position: *position });
        }
        if !self.is_terminated() {
            return Err(TranscriptError::MissingTermination);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TranscriptError {
    #[error("event {index}: a particle for position {position} was sent while the channel was busy")]
    OverlappingSend { index: usize, position: usize },
    #[error("event {index}: particle for position {position} returned without a matching send")]
    UnmatchedReturn { index: usize, position: usize },
    #[error("event {index}: transfers run only between TP and a user")]
    MalformedTransfer { index: usize },
    #[error("event {index} follows a terminal event")]
    EventAfterTermination { index: usize },
    #[error("transcript does not end with an abort or a result")]
    MissingTermination,
    #[error("a particle for position {position} never returned")]
    DanglingFlight { position: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sent(position: usize) -> Event {
        Event::ParticleSent {
            from: Party::Tp,
            to: Party::Alice,
            position,
            channel_qubit: 2 * position,
        }
    }

    fn returned(position: usize) -> Event {
        Event::ParticleReturned {
            from: Party::Alice,
            to: Party::Tp,
            position,
            channel_qubit: 2 * position,
        }
    }

    #[test]
    fn round_trips_validate() {
        let mut t = Transcript::new();
        t.push(sent(0));
        t.push(returned(0));
        t.push(sent(1));
        t.push(returned(1));
        t.push(Event::Result { outcome: RunOutcome::Equal });
        assert_eq!(t.validate(), Ok(()));
    }

    #[test]
    fn overlapping_sends_fail() {
        let mut t = Transcript::new();
        t.push(sent(0));
        t.push(sent(1));
        t.push(Event::Result { outcome: RunOutcome::Equal });
        assert_eq!(
            t.validate(),
            Err(TranscriptError::OverlappingSend { index: 1, position: 1 })
        );
    }

    #[test]
    fn returns_must_match_sends() {
        let mut t = Transcript::new();
        t.push(sent(0));
        t.push(returned(1));
        t.push(Event::Result { outcome: RunOutcome::Equal });
        assert_eq!(
            t.validate(),
            Err(TranscriptError::UnmatchedReturn { index: 1, position: 1 })
        );
    }

    #[test]
    fn termination_is_required_and_final() {
        let mut t = Transcript::new();
        t.push(sent(0));
        t.push(returned(0));
        assert_eq!(t.validate(), Err(TranscriptError::MissingTermination));
        t.push(Event::Abort { check: CheckKind::Ctrl, position: 0 });
        assert_eq!(t.validate(), Ok(()));
        assert!(t.is_terminated());
    }

    #[test]
    #[should_panic(expected = "terminated")]
    fn pushing_after_termination_panics() {
        let mut t = Transcript::new();
        t.push(Event::Result { outcome: RunOutcome::Equal });
        t.push(sent(0));
    }

    #[test]
    fn dangling_flight_is_detected() {
        let mut t = Transcript::new();
        t.push(sent(0));
        t.push(Event::Result { outcome: RunOutcome::Equal });
        assert_eq!(t.validate(), Err(TranscriptError::DanglingFlight { position: 0 }));
    }
}
