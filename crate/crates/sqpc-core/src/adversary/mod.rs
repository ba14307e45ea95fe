//! Adversaries: channel taps on the particle round trips, and the
//! dishonest-TP variant handled inside the runner.
//!
//! A [`ChannelTap`] sits on the two quantum channels (four legs per pair
//! position) and wiretaps the public classical channel. It acts only through
//! the executor on particles it is handed, and its [`ChannelTap::knowledge`]
//! report is scored by the experiment harness against the real secrets. Taps
//! never read party-private state; the dishonest-Alice taps hold her own
//! legitimate key, nothing more.

mod taps;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bits::Bit;
use crate::protocol::Event;
use crate::quantum::{Executor, Field, QubitId};

pub use taps::{
    AliceInterceptResendTap, AliceMeasureResendTap, EveInterceptResendTap, EveMeasureResendTap,
};

/// How an intercept-and-resend attacker chooses the fake bits it sends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FakeBitPolicy {
    /// Every fake particle is |0⟩.
    AllZero,
    /// Each fake bit is a fresh coin flip.
    UniformRandom,
}

impl FakeBitPolicy {
    pub fn name(self) -> &'static str {
        match self {
            FakeBitPolicy::AllZero => "all_zero",
            FakeBitPolicy::UniformRandom => "uniform_random",
        }
    }
}

/// The attacks the simulator can inject into a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackStrategy {
    /// Outside Eve on both channels: measures each outbound particle, holds
    /// it, sends a fake through the user, reads the returned fake, and
    /// forwards the held (collapsed) original to TP.
    EveInterceptResend { fakes: FakeBitPolicy },
    /// Outside Eve on both channels: measures each particle in Z on both
    /// legs and forwards it.
    EveMeasureResend,
    /// Dishonest Alice on Bob's channel, SIFT positions only (she knows the
    /// key): steals the outbound particle, substitutes a fake, and lets the
    /// read fake travel on to TP.
    AliceInterceptResend { fakes: FakeBitPolicy },
    /// Dishonest Alice on Bob's channel: Z-measures SIFT particles on both
    /// legs and forwards them.
    AliceMeasureResend,
    /// TP distributes single-qubit Z probes instead of Bell pairs and
    /// fabricates its check announcements.
    DishonestTp,
}

impl AttackStrategy {
    /// All strategies, in their stable reporting order.
    pub const ALL: [AttackStrategy; 5] = [
        AttackStrategy::EveInterceptResend { fakes: FakeBitPolicy::AllZero },
        AttackStrategy::EveMeasureResend,
        AttackStrategy::AliceInterceptResend { fakes: FakeBitPolicy::AllZero },
        AttackStrategy::AliceMeasureResend,
        AttackStrategy::DishonestTp,
    ];

    /// Stable name, also the CLI spelling.
    pub fn name(&self) -> &'static str {
        match self {
            AttackStrategy::EveInterceptResend { .. } => "eve-ir",
            AttackStrategy::EveMeasureResend => "eve-mr",
            AttackStrategy::AliceInterceptResend { .. } => "alice-ir",
            AttackStrategy::AliceMeasureResend => "alice-mr",
            AttackStrategy::DishonestTp => "tp-fake",
        }
    }

    /// Parses a CLI name; intercept-resend strategies get the all-zero fake
    /// policy.
    pub fn from_name(name: &str) -> Option<AttackStrategy> {
        AttackStrategy::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Whether the strategy is a wiretap on the particle channels (the
    /// dishonest TP is not: it replaces the source).
    pub fn is_channel_tap(&self) -> bool {
        !matches!(self, AttackStrategy::DishonestTp)
    }
}

/// What an adversary claims to have learned from one run.
///
/// `learned_*` are the decoded payload sequence bits per SIFT slot (masked
/// data and decoys alike). `guessed_*` are the runner-aligned input guesses:
/// the learned bit sitting at each data slot. The experiment harness scores
/// both against the real secrets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdversaryKnowledge {
    pub learned_a: Option<Vec<Bit>>,
    pub learned_b: Option<Vec<Bit>>,
    pub guessed_x: Option<Vec<Bit>>,
    pub guessed_y: Option<Vec<Bit>>,
    /// Free-form details (fake policy, counts) for reports.
    pub notes: BTreeMap<String, String>,
}

/// A wiretap on the four channel legs of each pair's round trips. Every
/// method defaults to a transparent wire.
pub trait ChannelTap<F: Field> {
    /// Outbound leg toward Alice; returns the particle that travels on.
    fn tp_to_alice<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        let _ = (exec, position);
        particle
    }

    /// Return leg from Alice; returns the particle that arrives at TP.
    fn alice_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        let _ = (exec, position);
        particle
    }

    fn tp_to_bob<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        let _ = (exec, position);
        particle
    }

    fn bob_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        let _ = (exec, position);
        particle
    }

    /// Wiretap on the public classical channel: sees every broadcast
    /// announcement as it happens.
    fn hear(&mut self, event: &Event) {
        let _ = event;
    }

    /// The adversary's claimed knowledge once announcements close; `None`
    /// when there is nothing to report.
    fn knowledge(&self) -> Option<AdversaryKnowledge> {
        None
    }
}

/// The transparent wire.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NoopTap;

impl<F: Field> ChannelTap<F> for NoopTap {}

/// Uniform dispatch over every tap the runner can inject, so the runner and
/// the analysis scripts stay generic-free at the call site.
#[derive(Debug, Clone)]
pub enum AnyTap {
    Noop(NoopTap),
    EveIr(EveInterceptResendTap),
    EveMr(EveMeasureResendTap),
    AliceIr(AliceInterceptResendTap),
    AliceMr(AliceMeasureResendTap),
}

impl AnyTap {
    pub fn noop() -> Self {
        AnyTap::Noop(NoopTap)
    }

    /// The tap for a strategy; `None` for the dishonest TP, which is not a
    /// channel tap. Dishonest-Alice taps receive the extended key she
    /// legitimately holds.
    pub fn for_strategy(strategy: Option<&AttackStrategy>, k_ext: &[Bit]) -> Option<AnyTap> {
        Some(match strategy {
            None => AnyTap::Noop(NoopTap),
            Some(AttackStrategy::EveInterceptResend { fakes }) => {
                AnyTap::EveIr(EveInterceptResendTap::new(*fakes))
            }
            Some(AttackStrategy::EveMeasureResend) => AnyTap::EveMr(EveMeasureResendTap::new()),
            Some(AttackStrategy::AliceInterceptResend { fakes }) => {
                AnyTap::AliceIr(AliceInterceptResendTap::new(*fakes, k_ext.to_vec()))
            }
            Some(AttackStrategy::AliceMeasureResend) => {
                AnyTap::AliceMr(AliceMeasureResendTap::new(k_ext.to_vec()))
            }
            Some(AttackStrategy::DishonestTp) => return None,
        })
    }
}

macro_rules! delegate_tap {
    ($self:ident, $tap:ident => $call:expr) => {
        match $self {
            AnyTap::Noop($tap) => $call,
            AnyTap::EveIr($tap) => $call,
            AnyTap::EveMr($tap) => $call,
            AnyTap::AliceIr($tap) => $call,
            AnyTap::AliceMr($tap) => $call,
        }
    };
}

impl<F: Field> ChannelTap<F> for AnyTap {
    fn tp_to_alice<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        delegate_tap!(self, tap => tap.tp_to_alice(exec, position, particle))
    }

    fn alice_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        delegate_tap!(self, tap => tap.alice_to_tp(exec, position, particle))
    }

    fn tp_to_bob<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        delegate_tap!(self, tap => tap.tp_to_bob(exec, position, particle))
    }

    fn bob_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        delegate_tap!(self, tap => tap.bob_to_tp(exec, position, particle))
    }

    fn hear(&mut self, event: &Event) {
        delegate_tap!(self, tap => ChannelTap::<F>::hear(tap, event))
    }

    fn knowledge(&self) -> Option<AdversaryKnowledge> {
        delegate_tap!(self, tap => ChannelTap::<F>::knowledge(tap))
    }
}
