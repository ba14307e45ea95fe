//! The comparison phase's inherent leak: stopping at the first difference
//! tells everyone listening *where* the inputs first differ.
//!
//! For uniformly random inputs, each announced m bit is an independent fair
//! coin, so the run ends before the final round — leaking that position —
//! with probability 1 − (1/2)^(n−1). The experiment measures that rate over
//! honest full-protocol runs.

use libm::{fabs, sqrt};

use crate::analysis::AnalysisError;
use crate::bits::random_bits;
use crate::protocol::{run_protocol, ProtocolConfig, RunOutcome};
use crate::quantum::Rational;
use crate::rng::{stream_rng, StreamRole};
use rand::RngCore;

/// Early-stop statistics over honest runs with uniformly random inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageReport {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// Runs that announced fewer than n rounds.
    pub early_stops: u64,
    pub empirical: f64,
    /// 1 − (1/2)^(n−1), exactly.
    pub analytic: Rational,
    /// Binomial standard error at the analytic rate.
    pub std_err: f64,
    pub within_3_sigma: bool,
}

/// Runs `trials` honest comparisons of fresh uniform n-bit inputs and
/// counts how many end before the final round.
pub fn leakage_experiment(n: usize, trials: u64, seed: u64) -> Result<LeakageReport, AnalysisError> {
    if trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    if !(2..=62).contains(&n) {
        return Err(AnalysisError::UnsupportedLength(n));
    }
    let mut early_stops = 0u64;
    for trial in 0..trials {
        let run_seed = stream_rng(seed, StreamRole::TrialSeed, trial).next_u64();
        let mut input_rng = stream_rng(seed, StreamRole::InputSample, trial);
        let x = random_bits(&mut input_rng, n);
        let y = random_bits(&mut input_rng, n);
        let config = ProtocolConfig::new(n, run_seed);
        let result = run_protocol(&config, &x, &y, None)?;
        debug_assert!(!matches!(result.outcome, RunOutcome::Aborted { .. }));
        if result.rounds_used < n {
            early_stops += 1;
        }
    }
    let denom = 1i64 << (n - 1);
    let analytic = Rational::new(denom - 1, denom);
    let p = (denom - 1) as f64 / denom as f64;
    let empirical = early_stops as f64 / trials as f64;
    let std_err = sqrt(p * (1.0 - p) / trials as f64);
    let within_3_sigma = fabs(empirical - p) <= 3.0 * std_err;
    Ok(LeakageReport {
        n,
        trials,
        seed,
        early_stops,
        empirical,
        analytic,
        std_err,
        within_3_sigma,
    })
}
