//! The laboratory: exact and statistical experiments over the protocol.
//!
//! - [`encoding`]: the 16-row Bell-state encoding relation, each row proved
//!   by exhaustive branch enumeration.
//! - [`detection`]: per-checked-pair detection probabilities for every
//!   channel tap, exact (enumeration over the √2 field) and by seeded
//!   Monte-Carlo.
//! - [`efficiency`]: qubit and classical-bit accounting and the resulting
//!   comparison efficiency, with a table of prior two-user protocols.
//! - [`leakage`]: how often the round-by-round comparison stops early and
//!   thereby leaks the position of the first difference.
//! - [`knowledge`]: full-protocol attack campaigns scoring what each
//!   adversary actually learns against the real secrets.

pub mod detection;
pub mod efficiency;
pub mod encoding;
pub mod knowledge;
pub mod leakage;

use crate::protocol::ProtocolError;
use crate::quantum::EnumError;

pub use detection::{
    detection_catalog, exact_detection, monte_carlo_detection, CatalogEntry, DetectionReport,
    Scenario, ScenarioSpec,
};
pub use efficiency::{efficiency, reference_efficiencies, EfficiencyReport};
pub use encoding::{encoding_table, verify_encoding_table, EncodingCheck, EncodingRow};
pub use knowledge::{knowledge_experiment, GuessAccuracy, KnowledgeReport};
pub use leakage::{leakage_experiment, LeakageReport};

/// Errors from the analysis experiments.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    /// Exact detection probabilities are defined for channel taps only; the
    /// dishonest TP passes the checks by construction.
    #[error("strategy `{0}` is not a channel tap")]
    NotAChannelTap(&'static str),
    /// An enumerated probability left the rational subfield, which would
    /// mean the circuit is not the one analysed.
    #[error("enumerated probability is not rational")]
    NonRationalProbability,
    #[error("experiment needs at least one trial")]
    NoTrials,
    /// Comparison lengths are kept in a range where the analytic leakage
    /// stays an exact 64-bit rational.
    #[error("comparison length {0} is outside the supported range 2..=62")]
    UnsupportedLength(usize),
    /// The cost account is exact 64-bit arithmetic; absurd sizes are
    /// rejected rather than rounded.
    #[error("input length {0} is too large to account exactly")]
    LengthOverflow(u64),
    /// Bob's qubit budget in the key-distribution phase cannot undercut
    /// Alice's.
    #[error("qubit budget {got} is below the required minimum {minimum}")]
    BudgetTooSmall { got: u64, minimum: u64 },
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}
