//! A small statevector engine, just big enough for per-pair protocol
//! circuits.
//!
//! The register is generic over an arithmetic backend ([`Field`]): `f64` for
//! fast sampled runs, and [`Sqrt2Ext`] — exact arithmetic in ℚ(√2) — when
//! probabilities must come out as exact rationals. Circuits are written once
//! as scripts against the [`Executor`] trait and can then be either sampled
//! ([`SamplingExecutor`]) or exhaustively enumerated ([`enumerate_branches`]),
//! which replays the script down every measurement branch and returns each
//! leaf with its exact probability.

mod exec;
mod field;
mod register;

pub use exec::{
    enumerate_branches, measure_bell, measure_z, Branch, BranchSet, EnumError, EnumExecutor,
    Executor, Outcome, SamplingExecutor,
};
pub use field::{Field, Rational, Sqrt2Ext};
pub use register::{BellKind, ComplexAmp, PauliOp, QubitId, QuantumRegister, DEFAULT_CAPACITY};
