//! Circuit execution: seeded sampling and exhaustive branch enumeration.
//!
//! A circuit is a script — any `FnMut(&mut impl Executor<F>) -> T` — that
//! prepares qubits, applies gates, and consumes measurement results. The same
//! script runs unchanged under two executors:
//!
//! - [`SamplingExecutor`] draws each outcome from a seeded RNG (one stream
//!   for Born-rule outcomes, a separate one for classical coins, so adding a
//!   coin flip never disturbs the measurement draws);
//! - [`enumerate_branches`] replays the script down every branch of every
//!   choice point and returns the complete leaf set with exact probabilities.
//!
//! Enumeration requires the script to be deterministic given its choice
//! results: replays that diverge (different kind of choice at the same point)
//! are detected and rejected. Z and Bell measurements are visible choices,
//! recorded in [`Branch::outcomes`]; discards and coins branch invisibly.

use alloc::vec::Vec;
use rand::Rng;
use thiserror::Error;

use super::field::Field;
use super::register::{BellKind, PauliOp, QubitId, QuantumRegister};
use crate::bits::Bit;

/// Tolerance on Σ probability = 1 over a full enumerated branch set.
const TOTAL_PROBABILITY_TOLERANCE: f64 = 1e-9;

/// One visible measurement result in a branch's outcome log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Bit(Bit),
    Bell(BellKind),
}

/// Failure modes of branch enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EnumError {
    /// A replay asked for a different kind of choice at the same point; the
    /// script branches on something other than its measurement results.
    #[error("script replay diverged at choice point {choice_index}: scripts must be deterministic given measurement outcomes")]
    NondeterministicScript { choice_index: usize },
    /// The leaf probabilities do not sum to 1.
    #[error("enumerated branch probabilities sum to {total}, expected 1")]
    ProbabilityLeak { total: f64 },
    /// A collapse renormaliser 1/√p does not exist in the exact scalar
    /// field (non-dyadic probability under exact arithmetic).
    #[error("a collapse renormaliser left the exact scalar field")]
    InexactRenormalization,
}

/// The operations a circuit script may perform.
///
/// Preparation and gates are deterministic and share default implementations;
/// the four choice operations (two measurements, discard, coin) are where the
/// executors differ.
pub trait Executor<F: Field> {
    fn register(&mut self) -> &mut QuantumRegister<F>;

    /// Appends a fresh qubit in `|bit⟩`.
    fn prepare_z(&mut self, bit: Bit) -> QubitId {
        self.register().prepare_z(bit)
    }

    /// Appends a fresh pair in the given Bell state.
    fn prepare_bell(&mut self, kind: BellKind) -> (QubitId, QubitId) {
        self.register().prepare_bell(kind)
    }

    fn apply_pauli(&mut self, q: QubitId, op: PauliOp) {
        self.register().apply_pauli(q, op);
    }

    /// Z-basis measurement; collapses and returns the outcome.
    fn measure_z(&mut self, q: QubitId) -> Bit;

    /// Bell-basis measurement of two qubits; collapses and returns the kind.
    fn measure_bell(&mut self, first: QubitId, second: QubitId) -> BellKind;

    /// Drops a qubit from play: measured in Z with the outcome forgotten,
    /// then flagged so later use panics. In enumeration this is a hidden
    /// branch point.
    fn discard(&mut self, q: QubitId);

    /// Fair classical coin; a hidden branch point in enumeration.
    fn coin(&mut self) -> Bit;
}

/// Samples an index from `probs` (which sum to 1), never returning an index
/// whose probability is negligible.
fn sample_index<F: Field, R: Rng + ?Sized>(probs: &[F], rng: &mut R) -> usize {
    let mut last_live = None;
    for (i, p) in probs.iter().enumerate() {
        if !p.is_negligible() {
            last_live = Some(i);
        }
    }
    let last_live = last_live.expect("a normalised state has a possible outcome");
    let mut u = rng.random::<f64>();
    for (i, p) in probs.iter().enumerate() {
        if p.is_negligible() {
            continue;
        }
        let w = p.to_f64();
        if u < w || i == last_live {
            return i;
        }
        u -= w;
    }
    last_live
}

/// Seeded Z measurement on a bare register: samples an outcome by the Born
/// rule and collapses.
pub fn measure_z<F: Field, R: Rng + ?Sized>(
    reg: &mut QuantumRegister<F>,
    q: QubitId,
    rng: &mut R,
) -> Bit {
    let probs = reg.z_probabilities(q);
    let idx = sample_index(&probs, rng);
    let renorm = probs[idx]
        .recip_sqrt()
        .expect("sampled outcome has positive probability");
    reg.collapse_z(q, idx as Bit, &renorm);
    idx as Bit
}

/// Seeded Bell measurement on a bare register.
pub fn measure_bell<F: Field, R: Rng + ?Sized>(
    reg: &mut QuantumRegister<F>,
    first: QubitId,
    second: QubitId,
    rng: &mut R,
) -> BellKind {
    let probs = reg.bell_probabilities(first, second);
    let idx = sample_index(&probs, rng);
    let kind = BellKind::ALL[idx];
    let renorm = probs[idx]
        .recip_sqrt()
        .expect("sampled outcome has positive probability");
    reg.collapse_bell(first, second, kind, &renorm);
    kind
}

/// Executor that draws every choice from seeded RNG streams.
#[derive(Debug)]
pub struct SamplingExecutor<F, R> {
    reg: QuantumRegister<F>,
    measure_rng: R,
    coin_rng: R,
}

impl<F: Field, R: Rng> SamplingExecutor<F, R> {
    /// Measurement outcomes draw from `measure_rng`, classical coins from
    /// `coin_rng`: separate streams keep outcome draws stable when a script
    /// adds or removes coin flips.
    pub fn new(reg: QuantumRegister<F>, measure_rng: R, coin_rng: R) -> Self {
        Self { reg, measure_rng, coin_rng }
    }

    pub fn into_register(self) -> QuantumRegister<F> {
        self.reg
    }
}

impl<F: Field, R: Rng> Executor<F> for SamplingExecutor<F, R> {
    fn register(&mut self) -> &mut QuantumRegister<F> {
        &mut self.reg
    }

    fn measure_z(&mut self, q: QubitId) -> Bit {
        measure_z(&mut self.reg, q, &mut self.measure_rng)
    }

    fn measure_bell(&mut self, first: QubitId, second: QubitId) -> BellKind {
        measure_bell(&mut self.reg, first, second, &mut self.measure_rng)
    }

    fn discard(&mut self, q: QubitId) {
        measure_z(&mut self.reg, q, &mut self.measure_rng);
        self.reg.mark_discarded(q);
    }

    fn coin(&mut self) -> Bit {
        self.coin_rng.random::<bool>() as Bit
    }
}

/// What kind of choice a point in a script is; replays must agree on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChoiceKind {
    MeasureZ,
    MeasureBell,
    Discard,
    Coin,
}

/// One resolved choice along a replay path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ChoicePoint {
    kind: ChoiceKind,
    taken: u8,
}

/// Executor used by [`enumerate_branches`]: follows a prescribed path prefix,
/// then takes first branches and queues the alternatives it discovers.
#[derive(Debug)]
pub struct EnumExecutor<F: Field> {
    reg: QuantumRegister<F>,
    probability: F,
    outcomes: Vec<Outcome>,
    prefix: Vec<ChoicePoint>,
    trace: Vec<ChoicePoint>,
    pending: Vec<Vec<ChoicePoint>>,
    error: Option<EnumError>,
}

impl<F: Field> EnumExecutor<F> {
    fn new(capacity: usize, prefix: Vec<ChoicePoint>) -> Self {
        Self {
            reg: QuantumRegister::with_capacity(capacity),
            probability: F::one(),
            outcomes: Vec::new(),
            prefix,
            trace: Vec::new(),
            pending: Vec::new(),
            error: None,
        }
    }

    /// Resolves one choice point: replays the prescribed branch while inside
    /// the prefix, otherwise takes the first possible branch and queues the
    /// rest. Returns the chosen index; on script divergence records an error
    /// and falls back to some possible index so the replay can wind down.
    fn choose(&mut self, kind: ChoiceKind, probs: &[F]) -> usize {
        let first_live = probs
            .iter()
            .position(|p| !p.is_negligible())
            .expect("a normalised state has a possible outcome");
        if self.error.is_some() {
            return first_live;
        }
        let pos = self.trace.len();
        let taken = if pos < self.prefix.len() {
            let expected = self.prefix[pos];
            let idx = expected.taken as usize;
            if expected.kind != kind || idx >= probs.len() || probs[idx].is_negligible() {
                self.error = Some(EnumError::NondeterministicScript { choice_index: pos });
                return first_live;
            }
            idx
        } else {
            for (alt, p) in probs.iter().enumerate().skip(first_live + 1) {
                if p.is_negligible() {
                    continue;
                }
                let mut path = self.trace.clone();
                path.push(ChoicePoint { kind, taken: alt as u8 });
                self.pending.push(path);
            }
            first_live
        };
        self.trace.push(ChoicePoint { kind, taken: taken as u8 });
        self.probability = self.probability.mul(&probs[taken]);
        taken
    }

    /// 1/√p for a collapse, or records the exactness failure.
    fn renorm(&mut self, p: &F) -> Option<F> {
        let r = p.recip_sqrt();
        if r.is_none() && self.error.is_none() {
            self.error = Some(EnumError::InexactRenormalization);
        }
        r
    }
}

impl<F: Field> Executor<F> for EnumExecutor<F> {
    fn register(&mut self) -> &mut QuantumRegister<F> {
        &mut self.reg
    }

    fn measure_z(&mut self, q: QubitId) -> Bit {
        let probs = self.reg.z_probabilities(q);
        let idx = self.choose(ChoiceKind::MeasureZ, &probs);
        if let Some(renorm) = self.renorm(&probs[idx]) {
            self.reg.collapse_z(q, idx as Bit, &renorm);
        }
        self.outcomes.push(Outcome::Bit(idx as Bit));
        idx as Bit
    }

    fn measure_bell(&mut self, first: QubitId, second: QubitId) -> BellKind {
        let probs = self.reg.bell_probabilities(first, second);
        let idx = self.choose(ChoiceKind::MeasureBell, &probs);
        let kind = BellKind::ALL[idx];
        if let Some(renorm) = self.renorm(&probs[idx]) {
            self.reg.collapse_bell(first, second, kind, &renorm);
        }
        self.outcomes.push(Outcome::Bell(kind));
        kind
    }

    fn discard(&mut self, q: QubitId) {
        let probs = self.reg.z_probabilities(q);
        let idx = self.choose(ChoiceKind::Discard, &probs);
        if let Some(renorm) = self.renorm(&probs[idx]) {
            self.reg.collapse_z(q, idx as Bit, &renorm);
        }
        self.reg.mark_discarded(q);
    }

    fn coin(&mut self) -> Bit {
        let h = F::frac_1_sqrt_2();
        let half = h.mul(&h);
        self.choose(ChoiceKind::Coin, &[half.clone(), half]) as Bit
    }
}

/// One leaf of an enumeration: the complete record of a possible execution.
#[derive(Debug, Clone)]
pub struct Branch<F, T> {
    /// Exact probability of reaching this leaf.
    pub probability: F,
    /// Visible measurement results, in script order (hidden choices from
    /// discards and coins are folded into `probability` instead).
    pub outcomes: Vec<Outcome>,
    /// Final register state.
    pub register: QuantumRegister<F>,
    /// Whatever the script returned on this branch.
    pub value: T,
}

/// All leaves of an enumerated script.
#[derive(Debug, Clone)]
pub struct BranchSet<F, T> {
    pub branches: Vec<Branch<F, T>>,
}

impl<F: Field, T> BranchSet<F, T> {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability.to_f64()).sum()
    }

    /// Exact total probability of the branches satisfying `pred`.
    pub fn probability_where(&self, mut pred: impl FnMut(&Branch<F, T>) -> bool) -> F {
        self.branches
            .iter()
            .filter(|b| pred(b))
            .fold(F::zero(), |acc, b| acc.add(&b.probability))
    }

    /// Probability mass per distinct visible-outcome log, as `f64` for
    /// comparison against sampled frequencies.
    pub fn outcome_distribution(&self) -> Vec<(Vec<Outcome>, f64)> {
        let mut dist: Vec<(Vec<Outcome>, f64)> = Vec::new();
        for branch in &self.branches {
            match dist.iter_mut().find(|(o, _)| *o == branch.outcomes) {
                Some((_, p)) => *p += branch.probability.to_f64(),
                None => dist.push((branch.outcomes.clone(), branch.probability.to_f64())),
            }
        }
        dist.sort_by(|(a, _), (b, _)| a.cmp(b));
        dist
    }
}

/// Replays `script` down every branch of every choice point and returns the
/// complete set of leaves with exact probabilities.
///
/// The register starts empty with the given qubit `capacity`. The script must
/// be deterministic given its choice results — in particular, any adversary
/// state it builds must be constructed fresh inside the script.
pub fn enumerate_branches<F: Field, T>(
    capacity: usize,
    mut script: impl FnMut(&mut EnumExecutor<F>) -> T,
) -> Result<BranchSet<F, T>, EnumError> {
    let mut work: Vec<Vec<ChoicePoint>> = alloc::vec![Vec::new()];
    let mut branches = Vec::new();
    while let Some(prefix) = work.pop() {
        let mut exec = EnumExecutor::new(capacity, prefix);
        let value = script(&mut exec);
        if let Some(err) = exec.error {
            return Err(err);
        }
        work.append(&mut exec.pending);
        if !exec.probability.is_negligible() {
            branches.push(Branch {
                probability: exec.probability,
                outcomes: exec.outcomes,
                register: exec.reg,
                value,
            });
        }
    }
    let set = BranchSet { branches };
    let total = set.total_probability();
    if libm::fabs(total - 1.0) > TOTAL_PROBABILITY_TOLERANCE {
        return Err(EnumError::ProbabilityLeak { total });
    }
    Ok(set)
}
