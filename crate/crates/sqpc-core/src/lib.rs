//! Simulation and analysis engine for a three-party semiquantum private
//! comparison protocol built on Bell states.
//!
//! Two semiquantum users, Alice and Bob, each hold a secret bit string and
//! want to learn whether the strings are equal — and nothing else — with the
//! help of a semi-honest quantum third party (TP). TP prepares Bell pairs and
//! distributes one particle of each pair to each user; the users either
//! reflect a particle untouched (CTRL) or encode a data bit on it with a
//! Pauli operation (SIFT); TP measures the returned pairs in the Bell basis
//! and the three parties run eavesdropping checks before comparing, round by
//! round, masked versions of their inputs.
//!
//! The crate is organised in four layers:
//!
//! - [`quantum`]: a small statevector register (up to a configurable handful
//!   of qubits) generic over an arithmetic backend, with seeded sampling and
//!   exhaustive branch enumeration over the same circuit scripts.
//! - [`protocol`]: the protocol state machine — secret sampling, particle
//!   transmission, the two eavesdropping checks, and the round-by-round
//!   comparison — producing a structured [`protocol::Transcript`].
//! - [`adversary`]: channel taps (an outside Eve, or a dishonest Alice
//!   reading Bob's channel) and a dishonest TP, each reporting what it
//!   learned so the harness can score it.
//! - [`analysis`]: exact detection probabilities by branch enumeration,
//!   Monte-Carlo cross-checks, the Bell-state encoding table, qubit
//!   efficiency accounting, and the comparison-phase leakage experiment.
//!
//! The crate is `no_std` (it allocates, but performs no IO); the companion
//! CLI crate provides file formats and a command-line interface.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod adversary;
pub mod analysis;
pub mod bits;
pub mod protocol;
pub mod quantum;
pub mod rng;

pub use adversary::{AdversaryKnowledge, AttackStrategy, ChannelTap, FakeBitPolicy};
pub use analysis::AnalysisError;
pub use bits::Bit;
pub use protocol::{
    run_protocol, KeyMode, Mode, Placement, ProtocolConfig, ProtocolError, ProtocolResult,
    RunOutcome,
};
pub use quantum::{
    enumerate_branches, BellKind, Branch, BranchSet, EnumError, Executor, Field, PauliOp, QubitId,
    QuantumRegister, Rational, SamplingExecutor, Sqrt2Ext,
};
