//! Statevector register with Z-basis and Bell-basis preparation,
//! measurement, and collapse.
//!
//! Conventions, fixed once here and relied on everywhere else:
//!
//! - Qubit 0 is the most significant bit of a basis index, so `|q0 q1 q2⟩`
//!   reads left to right. Newly prepared qubits append on the right (least
//!   significant side) and existing indices shift left, which keeps earlier
//!   qubits' positions stable relative to qubit 0.
//! - Registers start empty (the scalar state `1`) and grow by preparation up
//!   to a fixed capacity; per-pair protocol circuits fit comfortably in the
//!   default of [`DEFAULT_CAPACITY`] qubits.
//! - Discarded qubits keep their slot in the index space but are flagged
//!   dead; touching one again is a programming error and panics.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::Field;
use crate::bits::Bit;

/// Default register capacity in qubits; per-pair protocol circuits never
/// exceed a genuine pair plus a couple of substituted fake particles.
pub const DEFAULT_CAPACITY: usize = 8;

/// Writes `Display` as the type's `name()`. Keeps the enum impls in lockstep.
macro_rules! fmt_display_via_name {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str(self.name())
        }
    };
}

/// Tolerance on Σ|amplitude|² = 1, checked after every state-changing
/// operation.
const NORM_TOLERANCE: f64 = 1e-12;

/// Handle to one qubit of a register. Ids are never reused, including after
/// a discard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitId(usize);

impl QubitId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// The four Bell states, in the fixed measurement-outcome order used by the
/// whole crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellKind {
    /// (|00⟩ + |11⟩)/√2
    PhiPlus,
    /// (|00⟩ − |11⟩)/√2
    PhiMinus,
    /// (|01⟩ + |10⟩)/√2
    PsiPlus,
    /// (|01⟩ − |10⟩)/√2
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    /// Stable snake_case name, used in exported JSON and CSV.
    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
            BellKind::PsiPlus => "psi_plus",
            BellKind::PsiMinus => "psi_minus",
        }
    }

    /// The two computational-basis terms of the state: `(two_bit_pattern,
    /// negative_sign)`, pattern bit 1 = first qubit, bit 0 = second qubit.
    /// The first term always has a positive sign.
    fn basis_terms(self) -> [(usize, bool); 2] {
        match self {
            BellKind::PhiPlus => [(0b00, false), (0b11, false)],
            BellKind::PhiMinus => [(0b00, false), (0b11, true)],
            BellKind::PsiPlus => [(0b01, false), (0b10, false)],
            BellKind::PsiMinus => [(0b01, false), (0b10, true)],
        }
    }

    /// The Bell state reached from `self` by flipping one qubit in the
    /// computational basis (σx on either particle): φ ↔ ψ with the sign
    /// preserved, up to global phase.
    pub fn flipped(self) -> BellKind {
        match self {
            BellKind::PhiPlus => BellKind::PsiPlus,
            BellKind::PhiMinus => BellKind::PsiMinus,
            BellKind::PsiPlus => BellKind::PhiPlus,
            BellKind::PsiMinus => BellKind::PhiMinus,
        }
    }
}

impl fmt::Display for BellKind {
    fmt_display_via_name!();
}

/// Single-qubit operations the users may apply to an in-flight particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliOp {
    /// Identity: leave the particle as is.
    I,
    /// Bit flip σx = |0⟩⟨1| + |1⟩⟨0|.
    SigmaX,
}

impl PauliOp {
    pub fn name(self) -> &'static str {
        match self {
            PauliOp::I => "i",
            PauliOp::SigmaX => "sigma_x",
        }
    }

    /// The operation encoding a data bit: 0 ↦ I, 1 ↦ σx.
    pub fn for_bit(bit: Bit) -> PauliOp {
        if bit == 0 {
            PauliOp::I
        } else {
            PauliOp::SigmaX
        }
    }
}

impl fmt::Display for PauliOp {
    fmt_display_via_name!();
}

/// A complex amplitude with components in the scalar field `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAmp<F> {
    pub re: F,
    pub im: F,
}

impl<F: Field> ComplexAmp<F> {
    pub fn zero() -> Self {
        Self { re: F::zero(), im: F::zero() }
    }

    pub fn real(re: F) -> Self {
        Self { re, im: F::zero() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }

    /// Scale by a real factor.
    pub fn scale(&self, s: &F) -> Self {
        Self { re: self.re.mul(s), im: self.im.mul(s) }
    }

    /// |amp|² = re² + im².
    pub fn norm_sqr(&self) -> F {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}

/// A statevector over up to `capacity` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRegister<F> {
    capacity: usize,
    /// Liveness flag per allocated qubit; `false` after a discard.
    live: Vec<bool>,
    /// 2^n amplitudes, basis index bit (n−1−q) belonging to qubit q.
    amps: Vec<ComplexAmp<F>>,
}

impl<F: Field> Default for QuantumRegister<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> QuantumRegister<F> {
    /// Empty register with the default capacity.
    pub fn new() -> Self {
        Self::with_capacity(DEFAULT_CAPACITY)
    }

    /// Empty register holding at most `capacity` qubits.
    pub fn with_capacity(capacity: usize) -> Self {
        assert!((1..=16).contains(&capacity), "capacity must be 1..=16");
        Self {
            capacity,
            live: Vec::new(),
            amps: vec![ComplexAmp { re: F::one(), im: F::zero() }],
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn n_qubits(&self) -> usize {
        self.live.len()
    }

    pub fn is_live(&self, q: QubitId) -> bool {
        self.live[q.index()]
    }

    /// Amplitude of a computational-basis index (bit n−1−q = qubit q).
    pub fn amplitude(&self, basis_index: usize) -> &ComplexAmp<F> {
        &self.amps[basis_index]
    }

    fn mask(&self, q: QubitId) -> usize {
        1 << (self.n_qubits() - 1 - q.index())
    }

    fn assert_live(&self, q: QubitId) {
        assert!(
            q.index() < self.live.len(),
            "qubit {q} was never allocated in this register"
        );
        assert!(self.live[q.index()], "qubit {q} was already discarded");
    }

    fn assert_capacity(&self, extra: usize) {
        assert!(
            self.n_qubits() + extra <= self.capacity,
            "register capacity of {} qubits exceeded",
            self.capacity
        );
    }

    fn assert_normalized(&self) {
        let total = self.total_norm_sqr().to_f64();
        assert!(
            libm::fabs(total - 1.0) <= NORM_TOLERANCE,
            "state norm drifted to {total}"
        );
    }

    /// Σ|amplitude|² over the whole register.
    pub fn total_norm_sqr(&self) -> F {
        self.amps
            .iter()
            .fold(F::zero(), |acc, a| acc.add(&a.norm_sqr()))
    }

    /// Appends one qubit prepared in the Z eigenstate `|bit⟩`.
    pub fn prepare_z(&mut self, bit: Bit) -> QubitId {
        assert!(bit <= 1, "a qubit is prepared as |0⟩ or |1⟩, got {bit}");
        self.assert_capacity(1);
        let id = QubitId(self.live.len());
        self.live.push(true);
        let mut amps = vec![ComplexAmp::zero(); self.amps.len() * 2];
        for (i, amp) in self.amps.drain(..).enumerate() {
            amps[(i << 1) | bit as usize] = amp;
        }
        self.amps = amps;
        self.assert_normalized();
        id
    }

    /// Appends two qubits prepared jointly in the Bell state `kind`; the
    /// first returned id is the first particle (pattern bit 1).
    pub fn prepare_bell(&mut self, kind: BellKind) -> (QubitId, QubitId) {
        self.assert_capacity(2);
        let first = QubitId(self.live.len());
        let second = QubitId(self.live.len() + 1);
        self.live.push(true);
        self.live.push(true);
        let h = F::frac_1_sqrt_2();
        let mut amps = vec![ComplexAmp::zero(); self.amps.len() * 4];
        for (i, amp) in self.amps.drain(..).enumerate() {
            for (pattern, negative) in kind.basis_terms() {
                let term = amp.scale(&h);
                amps[(i << 2) | pattern] = if negative { term.neg() } else { term };
            }
        }
        self.amps = amps;
        self.assert_normalized();
        (first, second)
    }

    /// Applies a single-qubit Pauli operation.
    pub fn apply_pauli(&mut self, q: QubitId, op: PauliOp) {
        self.assert_live(q);
        match op {
            PauliOp::I => {}
            PauliOp::SigmaX => {
                let m = self.mask(q);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
        }
        self.assert_normalized();
    }

    /// Multiplies the whole state by a unit-modulus complex phase. Physically
    /// unobservable; exists so tests can assert exactly that.
    pub fn apply_global_phase(&mut self, phase: ComplexAmp<F>) {
        let modulus = phase.norm_sqr().to_f64();
        assert!(
            libm::fabs(modulus - 1.0) <= NORM_TOLERANCE,
            "global phase must have unit modulus, got |z|² = {modulus}"
        );
        for amp in &mut self.amps {
            *amp = amp.mul(&phase);
        }
        self.assert_normalized();
    }

    /// Born probabilities `[P(0), P(1)]` of a Z measurement on `q`.
    pub fn z_probabilities(&self, q: QubitId) -> [F; 2] {
        self.assert_live(q);
        let m = self.mask(q);
        let mut probs = [F::zero(), F::zero()];
        for (i, amp) in self.amps.iter().enumerate() {
            let bit = usize::from(i & m != 0);
            probs[bit] = probs[bit].add(&amp.norm_sqr());
        }
        probs
    }

    /// Projects `q` onto `|outcome⟩` and rescales by `renorm` = 1/√P(outcome),
    /// which the caller derives from [`Self::z_probabilities`].
    pub fn collapse_z(&mut self, q: QubitId, outcome: Bit, renorm: &F) {
        self.assert_live(q);
        let m = self.mask(q);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if usize::from(i & m != 0) == usize::from(outcome) {
                *amp = amp.scale(renorm);
            } else {
                *amp = ComplexAmp::zero();
            }
        }
        self.assert_normalized();
    }

    /// Born probabilities of a Bell measurement on `(first, second)`, indexed
    /// per [`BellKind::ALL`].
    pub fn bell_probabilities(&self, first: QubitId, second: QubitId) -> [F; 4] {
        let mut probs = [F::zero(), F::zero(), F::zero(), F::zero()];
        for (k, kind) in BellKind::ALL.iter().enumerate() {
            for (_, coeff) in self.bell_overlaps(first, second, *kind) {
                probs[k] = probs[k].add(&coeff.norm_sqr());
            }
        }
        probs
    }

    /// Projects `(first, second)` onto the Bell state `kind` and rescales by
    /// `renorm` = 1/√P(kind).
    pub fn collapse_bell(&mut self, first: QubitId, second: QubitId, kind: BellKind, renorm: &F) {
        let overlaps = self.bell_overlaps(first, second, kind);
        let (m1, m2) = (self.mask(first), self.mask(second));
        let h = F::frac_1_sqrt_2();
        for amp in &mut self.amps {
            *amp = ComplexAmp::zero();
        }
        for (base, coeff) in overlaps {
            // Rebuild coeff·|kind⟩ on this pair: amplitude coeff·(±1)/√2 on
            // each of the state's two basis patterns.
            let scaled = coeff.scale(&h).scale(renorm);
            for (pattern, negative) in kind.basis_terms() {
                let mut idx = base;
                if pattern & 0b10 != 0 {
                    idx |= m1;
                }
                if pattern & 0b01 != 0 {
                    idx |= m2;
                }
                self.amps[idx] = if negative { scaled.neg() } else { scaled.clone() };
            }
        }
        self.assert_normalized();
    }

    /// Inner products ⟨kind| ψ⟩ restricted to each joint state `base` of the
    /// other qubits: the list of `(base_index, coefficient)` with both pair
    /// bits clear in `base_index`.
    fn bell_overlaps(&self, first: QubitId, second: QubitId, kind: BellKind) -> Vec<(usize, ComplexAmp<F>)> {
        self.assert_live(first);
        self.assert_live(second);
        assert_ne!(first, second, "a Bell measurement needs two distinct qubits");
        let (m1, m2) = (self.mask(first), self.mask(second));
        let h = F::frac_1_sqrt_2();
        let [(p0, _), (p1, neg1)] = kind.basis_terms();
        let index_of = |base: usize, pattern: usize| {
            let mut idx = base;
            if pattern & 0b10 != 0 {
                idx |= m1;
            }
            if pattern & 0b01 != 0 {
                idx |= m2;
            }
            idx
        };
        let mut overlaps = Vec::with_capacity(self.amps.len() / 4);
        for base in 0..self.amps.len() {
            if base & m1 != 0 || base & m2 != 0 {
                continue;
            }
            let t0 = &self.amps[index_of(base, p0)];
            let t1 = &self.amps[index_of(base, p1)];
            let sum = if neg1 { t0.add(&t1.neg()) } else { t0.add(t1) };
            overlaps.push((base, sum.scale(&h)));
        }
        overlaps
    }

    /// Flags a qubit as discarded after its forgotten measurement; only the
    /// executors call this, paired with a collapse.
    pub(crate) fn mark_discarded(&mut self, q: QubitId) {
        self.assert_live(q);
        self.live[q.index()] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::field::{Rational, Sqrt2Ext};

    type Reg = QuantumRegister<Sqrt2Ext>;

    fn half_sqrt2() -> Sqrt2Ext {
        Sqrt2Ext::frac_1_sqrt_2()
    }

    /// Independently tabulated amplitudes of the four Bell states over basis
    /// indices 00, 01, 10, 11, as multiples of 1/√2.
    const BELL_TABLE: [(BellKind, [i64; 4]); 4] = [
        (BellKind::PhiPlus, [1, 0, 0, 1]),
        (BellKind::PhiMinus, [1, 0, 0, -1]),
        (BellKind::PsiPlus, [0, 1, 1, 0]),
        (BellKind::PsiMinus, [0, 1, -1, 0]),
    ];

    #[test]
    fn prepared_bell_states_match_amplitude_table() {
        for (kind, expect) in BELL_TABLE {
            let mut reg = Reg::new();
            reg.prepare_bell(kind);
            for (idx, &coeff) in expect.iter().enumerate() {
                let want = half_sqrt2().mul(&Sqrt2Ext::from_integer(coeff));
                assert_eq!(reg.amplitude(idx).re, want, "{kind} amp {idx:02b}");
                assert!(reg.amplitude(idx).im.is_negligible());
            }
        }
    }

    #[test]
    fn sigma_x_on_first_particle_swaps_phi_and_psi() {
        // σx ⊗ I maps φ± ↦ ±ψ±-up-to-phase; check the exact statevector of
        // σx⊗I |φ−⟩ = (|10⟩ − |01⟩)/√2 = −|ψ−⟩.
        let mut reg = Reg::new();
        let (a, _) = reg.prepare_bell(BellKind::PhiMinus);
        reg.apply_pauli(a, PauliOp::SigmaX);
        assert_eq!(reg.amplitude(0b10).re, half_sqrt2());
        assert_eq!(reg.amplitude(0b01).re, half_sqrt2().neg());
        assert!(reg.amplitude(0b00).re.is_negligible());
        assert!(reg.amplitude(0b11).re.is_negligible());
        // And a Bell measurement sees ψ− with certainty.
        let probs = reg.bell_probabilities(a, QubitId(1));
        assert_eq!(probs[3].as_rational(), Some(Rational::from_integer(1)));
    }

    #[test]
    fn sigma_x_on_both_particles_restores_the_state() {
        for (kind, expect) in BELL_TABLE {
            let mut reg = Reg::new();
            let (a, b) = reg.prepare_bell(kind);
            reg.apply_pauli(a, PauliOp::SigmaX);
            reg.apply_pauli(b, PauliOp::SigmaX);
            // σx⊗σx fixes φ+ and ψ+; negates φ− and ψ− (global phase only).
            let sign = match kind {
                BellKind::PhiPlus | BellKind::PsiPlus => 1,
                BellKind::PhiMinus | BellKind::PsiMinus => -1,
            };
            for (idx, &coeff) in expect.iter().enumerate() {
                let want = half_sqrt2().mul(&Sqrt2Ext::from_integer(coeff * sign));
                assert_eq!(reg.amplitude(idx).re, want, "{kind} amp {idx:02b}");
            }
        }
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        // |0⟩ ⊗ |1⟩: index 0b01 must carry the amplitude.
        let mut reg = Reg::new();
        let q0 = reg.prepare_z(0);
        let q1 = reg.prepare_z(1);
        assert_eq!(reg.amplitude(0b01).re, Sqrt2Ext::one());
        assert_eq!(reg.z_probabilities(q0)[0].as_rational(), Some(Rational::from_integer(1)));
        assert_eq!(reg.z_probabilities(q1)[1].as_rational(), Some(Rational::from_integer(1)));
    }

    #[test]
    fn bell_probabilities_of_product_state_are_uniform_within_parity() {
        // |01⟩ overlaps ψ+ and ψ− each with probability 1/2, φ± with 0.
        let mut reg = Reg::new();
        let a = reg.prepare_z(0);
        let b = reg.prepare_z(1);
        let probs = reg.bell_probabilities(a, b);
        let half = Rational::new(1, 2);
        assert_eq!(probs[0].as_rational(), Some(Rational::from_integer(0)));
        assert_eq!(probs[1].as_rational(), Some(Rational::from_integer(0)));
        assert_eq!(probs[2].as_rational(), Some(half));
        assert_eq!(probs[3].as_rational(), Some(half));
    }

    #[test]
    fn collapse_bell_rebuilds_the_projected_state() {
        let mut reg = Reg::new();
        let a = reg.prepare_z(0);
        let b = reg.prepare_z(1);
        let probs = reg.bell_probabilities(a, b);
        let renorm = probs[2].recip_sqrt().unwrap();
        reg.collapse_bell(a, b, BellKind::PsiPlus, &renorm);
        assert_eq!(reg.amplitude(0b01).re, half_sqrt2());
        assert_eq!(reg.amplitude(0b10).re, half_sqrt2());
        // A second measurement is now deterministic.
        let probs = reg.bell_probabilities(a, b);
        assert_eq!(probs[2].as_rational(), Some(Rational::from_integer(1)));
    }

    #[test]
    fn collapse_z_on_entangled_pair_steers_the_partner() {
        let mut reg = Reg::new();
        let (a, b) = reg.prepare_bell(BellKind::PhiPlus);
        let probs = reg.z_probabilities(a);
        assert_eq!(probs[0].as_rational(), Some(Rational::new(1, 2)));
        let renorm = probs[0].recip_sqrt().unwrap();
        reg.collapse_z(a, 0, &renorm);
        assert_eq!(reg.z_probabilities(b)[0].as_rational(), Some(Rational::from_integer(1)));
    }

    #[test]
    fn global_phase_leaves_probabilities_alone() {
        let mut reg = Reg::new();
        let (a, b) = reg.prepare_bell(BellKind::PhiMinus);
        let before = reg.bell_probabilities(a, b);
        reg.apply_global_phase(ComplexAmp { re: Sqrt2Ext::zero(), im: Sqrt2Ext::one() });
        assert_eq!(reg.bell_probabilities(a, b), before);
    }

    #[test]
    fn registers_grow_by_appending_least_significant_qubits() {
        let mut reg = Reg::new();
        let (a1, b1) = reg.prepare_bell(BellKind::PhiPlus);
        let (a2, b2) = reg.prepare_bell(BellKind::PsiMinus);
        assert_eq!(reg.n_qubits(), 4);
        // Both pairs still measure as prepared.
        let p1 = reg.bell_probabilities(a1, b1);
        let p2 = reg.bell_probabilities(a2, b2);
        assert_eq!(p1[0].as_rational(), Some(Rational::from_integer(1)));
        assert_eq!(p2[3].as_rational(), Some(Rational::from_integer(1)));
    }

    #[test]
    #[should_panic(expected = "discarded")]
    fn touching_a_discarded_qubit_panics() {
        let mut reg = Reg::new();
        let q = reg.prepare_z(0);
        let renorm = Sqrt2Ext::one();
        reg.collapse_z(q, 0, &renorm);
        reg.mark_discarded(q);
        reg.apply_pauli(q, PauliOp::SigmaX);
    }

    #[test]
    #[should_panic(expected = "two distinct qubits")]
    fn bell_measurement_needs_two_distinct_qubits() {
        let mut reg = Reg::new();
        let (a, _) = reg.prepare_bell(BellKind::PhiPlus);
        reg.bell_probabilities(a, a);
    }

    #[test]
    #[should_panic(expected = "capacity")]
    fn exceeding_capacity_panics() {
        let mut reg = QuantumRegister::<f64>::with_capacity(3);
        reg.prepare_bell(BellKind::PhiPlus);
        reg.prepare_bell(BellKind::PhiPlus);
    }

    #[test]
    fn flipped_swaps_phi_and_psi_preserving_sign() {
        assert_eq!(BellKind::PhiPlus.flipped(), BellKind::PsiPlus);
        assert_eq!(BellKind::PsiMinus.flipped(), BellKind::PhiMinus);
        for kind in BellKind::ALL {
            assert_eq!(kind.flipped().flipped(), kind);
        }
    }
}
