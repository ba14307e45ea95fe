//! The three-party comparison protocol: configuration, secrets, per-pair
//! mechanics, the public transcript, and the end-to-end runner.

mod config;
mod pair;
mod run;
mod secrets;
mod transcript;

pub use config::{KeyMode, Mode, Placement, ProtocolConfig, ProtocolError};
pub use pair::{
    expected_bell, tp_classify, transmit_pair, user_respond, PairRecord, PairRole, ParticleAction,
};
pub use run::{
    comparison_rounds, ctrl_check, extract_c_prime, run_protocol, sift_check, ComparisonRound,
    ProtocolResult,
};
pub use secrets::{assemble_sequence, mask_input, sample_secrets, split_sequence, PartySecrets};
pub use transcript::{
    Announcement, CheckKind, Event, Party, RunOutcome, Transcript, TranscriptError,
};
