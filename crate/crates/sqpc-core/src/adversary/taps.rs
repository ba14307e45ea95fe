//! The four channel-tap attacks.
//!
//! Decoding convention: a SIFT particle leaves the tap toward the user
//! carrying bit `s` and comes back carrying `s ⊕ e`, where `e` is the bit
//! the user encoded, so the tap reads `e` as the XOR of what it sent (or
//! first measured) and what came back. CTRL particles are reflected
//! unchanged, which is what the outside attacker cannot know in advance and
//! the dishonest insider can.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::adversary::{AdversaryKnowledge, ChannelTap, FakeBitPolicy};
use crate::bits::Bit;
use crate::protocol::{Announcement, Event};
use crate::quantum::{Executor, Field, QubitId};

/// State of one tapped channel for an intercept-and-resend attacker: the
/// held original plus the decode ledgers.
#[derive(Debug, Clone, Default)]
struct InterceptChannel {
    /// The genuine particle measured on the outbound leg, awaiting the
    /// return leg.
    held: Option<QubitId>,
    /// Fake bit sent toward the user, per position.
    fake_sent: Vec<Bit>,
    /// Z result of the returning fake, per position.
    inbound: Vec<Bit>,
}

impl InterceptChannel {
    fn outbound<F: Field, E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
        fakes: FakeBitPolicy,
    ) -> QubitId {
        debug_assert_eq!(position, self.fake_sent.len(), "positions arrive in order");
        debug_assert!(self.held.is_none(), "one particle in flight per channel");
        // Collapse the original and keep it for the return leg.
        exec.measure_z(particle);
        self.held = Some(particle);
        let fake = fake_bit(exec, fakes);
        self.fake_sent.push(fake);
        exec.prepare_z(fake)
    }

    fn inbound<F: Field, E: Executor<F>>(&mut self, exec: &mut E, particle: QubitId) -> QubitId {
        let measured = exec.measure_z(particle);
        self.inbound.push(measured);
        exec.discard(particle);
        self.held.take().expect("outbound leg precedes the return leg")
    }

    /// Decoded bits at the positions not named in the CTRL announcement, in
    /// position order (i.e. per SIFT slot).
    fn decode(&self, ctrl_positions: &[usize]) -> Vec<Bit> {
        debug_assert_eq!(self.fake_sent.len(), self.inbound.len());
        let mut is_ctrl = alloc::vec![false; self.fake_sent.len()];
        for &p in ctrl_positions {
            if let Some(flag) = is_ctrl.get_mut(p) {
                *flag = true;
            }
        }
        (0..self.fake_sent.len())
            .filter(|&p| !is_ctrl[p])
            .map(|p| self.fake_sent[p] ^ self.inbound[p])
            .collect()
    }
}

fn fake_bit<F: Field, E: Executor<F>>(exec: &mut E, fakes: FakeBitPolicy) -> Bit {
    match fakes {
        FakeBitPolicy::AllZero => 0,
        FakeBitPolicy::UniformRandom => exec.coin(),
    }
}

/// Outside Eve, intercept-and-resend on both channels.
///
/// Every outbound particle is measured and held while a fake runs the user
/// leg in its place; the returning fake is read off and the held original
/// forwarded to TP. The substitution is invisible on SIFT-as-expected
/// statistics but breaks the reflected correlation on CTRL pairs half the
/// time.
#[derive(Debug, Clone)]
pub struct EveInterceptResendTap {
    fakes: FakeBitPolicy,
    alice: InterceptChannel,
    bob: InterceptChannel,
    ctrl_positions: Option<Vec<usize>>,
}

impl EveInterceptResendTap {
    pub fn new(fakes: FakeBitPolicy) -> Self {
        EveInterceptResendTap {
            fakes,
            alice: InterceptChannel::default(),
            bob: InterceptChannel::default(),
            ctrl_positions: None,
        }
    }
}

impl<F: Field> ChannelTap<F> for EveInterceptResendTap {
    fn tp_to_alice<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        self.alice.outbound(exec, position, particle, self.fakes)
    }

    fn alice_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        _position: usize,
        particle: QubitId,
    ) -> QubitId {
        self.alice.inbound(exec, particle)
    }

    fn tp_to_bob<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        self.bob.outbound(exec, position, particle, self.fakes)
    }

    fn bob_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        _position: usize,
        particle: QubitId,
    ) -> QubitId {
        self.bob.inbound(exec, particle)
    }

    fn hear(&mut self, event: &Event) {
        if let Event::Announcement {
            announcement: Announcement::CtrlPositions { positions },
            ..
        } = event
        {
            // Both users announce the same set; the first suffices.
            if self.ctrl_positions.is_none() {
                self.ctrl_positions = Some(positions.clone());
            }
        }
    }

    fn knowledge(&self) -> Option<AdversaryKnowledge> {
        let ctrl = self.ctrl_positions.as_ref()?;
        let mut knowledge = AdversaryKnowledge {
            learned_a: Some(self.alice.decode(ctrl)),
            learned_b: Some(self.bob.decode(ctrl)),
            ..AdversaryKnowledge::default()
        };
        knowledge
            .notes
            .insert("fake_policy".to_string(), self.fakes.name().to_string());
        Some(knowledge)
    }
}

/// State of one tapped channel for a measure-and-resend attacker.
#[derive(Debug, Clone, Default)]
struct MeasureChannel {
    outbound: Vec<Bit>,
    inbound: Vec<Bit>,
}

impl MeasureChannel {
    fn measure_through<F: Field, E: Executor<F>>(
        ledger: &mut Vec<Bit>,
        exec: &mut E,
        particle: QubitId,
    ) -> QubitId {
        let measured = exec.measure_z(particle);
        ledger.push(measured);
        particle
    }

    fn decode(&self, ctrl_positions: &[usize]) -> Vec<Bit> {
        debug_assert_eq!(self.outbound.len(), self.inbound.len());
        let mut is_ctrl = alloc::vec![false; self.outbound.len()];
        for &p in ctrl_positions {
            if let Some(flag) = is_ctrl.get_mut(p) {
                *flag = true;
            }
        }
        (0..self.outbound.len())
            .filter(|&p| !is_ctrl[p])
            .map(|p| self.outbound[p] ^ self.inbound[p])
            .collect()
    }
}

/// Outside Eve, measure-and-resend on both channels.
///
/// Both legs of every particle are Z-measured and the particle itself
/// forwarded. The outbound measurement collapses the pair, so TP's Bell
/// check fails half the time on both CTRL and SIFT pairs, but the decoded
/// XOR is always the bit the user encoded.
#[derive(Debug, Clone, Default)]
pub struct EveMeasureResendTap {
    alice: MeasureChannel,
    bob: MeasureChannel,
    ctrl_positions: Option<Vec<usize>>,
}

impl EveMeasureResendTap {
    pub fn new() -> Self {
        EveMeasureResendTap::default()
    }
}

impl<F: Field> ChannelTap<F> for EveMeasureResendTap {
    fn tp_to_alice<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        _position: usize,
        particle: QubitId,
    ) -> QubitId {
        MeasureChannel::measure_through(&mut self.alice.outbound, exec, particle)
    }

    fn alice_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        _position: usize,
        particle: QubitId,
    ) -> QubitId {
        MeasureChannel::measure_through(&mut self.alice.inbound, exec, particle)
    }

    fn tp_to_bob<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        _position: usize,
        particle: QubitId,
    ) -> QubitId {
        MeasureChannel::measure_through(&mut self.bob.outbound, exec, particle)
    }

    fn bob_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        _position: usize,
        particle: QubitId,
    ) -> QubitId {
        MeasureChannel::measure_through(&mut self.bob.inbound, exec, particle)
    }

    fn hear(&mut self, event: &Event) {
        if let Event::Announcement {
            announcement: Announcement::CtrlPositions { positions },
            ..
        } = event
        {
            if self.ctrl_positions.is_none() {
                self.ctrl_positions = Some(positions.clone());
            }
        }
    }

    fn knowledge(&self) -> Option<AdversaryKnowledge> {
        let ctrl = self.ctrl_positions.as_ref()?;
        Some(AdversaryKnowledge {
            learned_a: Some(self.alice.decode(ctrl)),
            learned_b: Some(self.bob.decode(ctrl)),
            ..AdversaryKnowledge::default()
        })
    }
}

/// Dishonest Alice, intercept-and-resend on Bob's channel.
///
/// She holds the shared key, so she acts only at SIFT positions and leaves
/// CTRL reflections untouched. There she steals the outbound particle
/// outright, substitutes a fake, reads the fake on its way back, and lets it
/// travel on to TP. Stealing one half of the pair leaves TP's half maximally
/// mixed, so the SIFT decoy check sees a uniform Bell outcome.
#[derive(Debug, Clone)]
pub struct AliceInterceptResendTap {
    fakes: FakeBitPolicy,
    k_ext: Vec<Bit>,
    /// Fake bit sent toward Bob, per SIFT slot.
    fake_sent: Vec<Bit>,
    /// Z result of the returning fake, per SIFT slot.
    inbound: Vec<Bit>,
}

impl AliceInterceptResendTap {
    pub fn new(fakes: FakeBitPolicy, k_ext: Vec<Bit>) -> Self {
        AliceInterceptResendTap { fakes, k_ext, fake_sent: Vec::new(), inbound: Vec::new() }
    }

    fn is_sift(&self, position: usize) -> bool {
        debug_assert!(position < self.k_ext.len(), "position beyond the key");
        self.k_ext.get(position).copied() == Some(0)
    }
}

impl<F: Field> ChannelTap<F> for AliceInterceptResendTap {
    fn tp_to_bob<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        if !self.is_sift(position) {
            return particle;
        }
        // Steal the original: it leaves the wire for her lab, unmeasured.
        exec.discard(particle);
        let fake = fake_bit(exec, self.fakes);
        self.fake_sent.push(fake);
        exec.prepare_z(fake)
    }

    fn bob_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        if !self.is_sift(position) {
            return particle;
        }
        let measured = exec.measure_z(particle);
        self.inbound.push(measured);
        particle
    }

    fn knowledge(&self) -> Option<AdversaryKnowledge> {
        debug_assert_eq!(self.fake_sent.len(), self.inbound.len());
        let learned: Vec<Bit> = self
            .fake_sent
            .iter()
            .zip(&self.inbound)
            .map(|(&fake, &measured)| fake ^ measured)
            .collect();
        let mut knowledge = AdversaryKnowledge {
            learned_b: Some(learned),
            ..AdversaryKnowledge::default()
        };
        knowledge
            .notes
            .insert("fake_policy".to_string(), self.fakes.name().to_string());
        Some(knowledge)
    }
}

/// Dishonest Alice, measure-and-resend on Bob's channel.
///
/// Z-measures both legs at SIFT positions and forwards the particle. CTRL
/// reflections pass untouched, so only the SIFT decoy check can catch her,
/// half the time per checked pair.
#[derive(Debug, Clone)]
pub struct AliceMeasureResendTap {
    k_ext: Vec<Bit>,
    /// Outbound Z results, per SIFT slot.
    outbound: Vec<Bit>,
    /// Return-leg Z results, per SIFT slot.
    inbound: Vec<Bit>,
}

impl AliceMeasureResendTap {
    pub fn new(k_ext: Vec<Bit>) -> Self {
        AliceMeasureResendTap { k_ext, outbound: Vec::new(), inbound: Vec::new() }
    }

    fn is_sift(&self, position: usize) -> bool {
        debug_assert!(position < self.k_ext.len(), "position beyond the key");
        self.k_ext.get(position).copied() == Some(0)
    }
}

impl<F: Field> ChannelTap<F> for AliceMeasureResendTap {
    fn tp_to_bob<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        if self.is_sift(position) {
            let measured = exec.measure_z(particle);
            self.outbound.push(measured);
        }
        particle
    }

    fn bob_to_tp<E: Executor<F>>(
        &mut self,
        exec: &mut E,
        position: usize,
        particle: QubitId,
    ) -> QubitId {
        if self.is_sift(position) {
            let measured = exec.measure_z(particle);
            self.inbound.push(measured);
        }
        particle
    }

    fn knowledge(&self) -> Option<AdversaryKnowledge> {
        debug_assert_eq!(self.outbound.len(), self.inbound.len());
        let learned: Vec<Bit> = self
            .outbound
            .iter()
            .zip(&self.inbound)
            .map(|(&out, &back)| out ^ back)
            .collect();
        Some(AdversaryKnowledge { learned_b: Some(learned), ..AdversaryKnowledge::default() })
    }
}
