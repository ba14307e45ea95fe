//! The six subcommands: argument structs, parsing helpers, and execution.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use sqpc_core::adversary::AttackStrategy;
use sqpc_core::analysis::{
    detection_catalog, efficiency, knowledge_experiment, leakage_experiment,
    monte_carlo_detection, reference_efficiencies, verify_encoding_table, DetectionReport,
    EfficiencyReport, KnowledgeReport, LeakageReport, ScenarioSpec,
};
use sqpc_core::bits::Bit;
use sqpc_core::protocol::{
    run_protocol, KeyMode, Mode, Placement, ProtocolConfig, RunOutcome,
};
use sqpc_core::quantum::Rational;

use crate::output::{csv_line, emit_line, optional_cell, print_json, rational_cell, rational_value};
use crate::transcript_file::transcript_lines;

/// A command failure, carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or parameters: exit 2, like a parse error.
    Usage(String),
    /// The command ran and failed (IO, mostly): exit 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(message) | CliError::Failure(message) => message,
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    /// Seeded statevector sampling over f64 amplitudes.
    Sampling,
    /// The same run over exact ℚ(√2) amplitudes.
    Exact,
}

impl From<ModeArg> for Mode {
    fn from(value: ModeArg) -> Mode {
        match value {
            ModeArg::Sampling => Mode::Sampling,
            ModeArg::Exact => Mode::Exact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KeyModeArg {
    /// Shared key with exactly 2n CTRL and 2n SIFT positions.
    Balanced,
    /// Uniform shared key; extra SIFT positions carry identity padding.
    Padded,
}

impl From<KeyModeArg> for KeyMode {
    fn from(value: KeyModeArg) -> KeyMode {
        match value {
            KeyModeArg::Balanced => KeyMode::Balanced,
            KeyModeArg::Padded => KeyMode::Padded,
        }
    }
}

#[derive(Args)]
pub struct SeedArg {
    /// Master seed; every stream of randomness derives from it. Omitted,
    /// a fresh seed is drawn and echoed in the output for later replay.
    #[arg(long, env = "SQPC_SEED")]
    pub seed: Option<u64>,
}

impl SeedArg {
    pub fn resolve(&self) -> u64 {
        self.seed.unwrap_or_else(rand::random)
    }
}

/// Accepts a private input as either a plain bit-string (`0110`) or a
/// `0x`-prefixed hex value; `n` disambiguates leading zeros, so the hex
/// form denotes the n-bit big-endian rendering of the value.
fn parse_bits(label: &str, text: &str, n: usize) -> Result<Vec<Bit>, CliError> {
    if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        return parse_hex_bits(label, hex, n);
    }
    if text.len() != n {
        return Err(usage(format!("--{label} must be exactly {n} bits, got {}", text.len())));
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(usage(format!("--{label} may contain only 0 and 1, found {other:?}"))),
        })
        .collect()
}

fn parse_hex_bits(label: &str, hex: &str, n: usize) -> Result<Vec<Bit>, CliError> {
    if hex.is_empty() {
        return Err(usage(format!("--{label} has no digits after 0x")));
    }
    let mut bits = Vec::with_capacity(4 * hex.len());
    for c in hex.chars() {
        let digit = c
            .to_digit(16)
            .ok_or_else(|| usage(format!("--{label} has a non-hex digit {c:?}")))?
            as u8;
        bits.extend((0..4).rev().map(|shift| (digit >> shift) & 1));
    }
    if bits.len() > n {
        let excess = bits.len() - n;
        if bits[..excess].iter().any(|&b| b != 0) {
            return Err(usage(format!("--{label} = 0x{hex} does not fit in {n} bits")));
        }
        bits.drain(..excess);
    } else {
        let mut padded = vec![0; n - bits.len()];
        padded.append(&mut bits);
        bits = padded;
    }
    Ok(bits)
}

fn parse_placement(spec: &str, n: usize) -> Result<Placement, CliError> {
    match spec {
        "concat" => Ok(Placement::concat(n)),
        "swap" => Ok(Placement::swapped(n)),
        _ => {
            let list = spec.strip_prefix("perm:").ok_or_else(|| {
                usage(format!("--placement must be concat, swap, or perm:<list>, got {spec:?}"))
            })?;
            let slots = list
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<usize>()
                        .map_err(|_| usage(format!("bad placement index {part:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if slots.len() != 2 * n {
                return Err(usage(format!(
                    "--placement perm needs {} indices for n={n}, got {}",
                    2 * n,
                    slots.len()
                )));
            }
            Placement::from_slots(slots).map_err(|e| usage(e.to_string()))
        }
    }
}

fn parse_rational(label: &str, text: &str) -> Result<Rational, CliError> {
    let bad = || usage(format!("--{label} must be an integer or num/den fraction, got {text:?}"));
    match text.split_once('/') {
        None => text.trim().parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
        Some((num, den)) => {
            let num = num.trim().parse::<i64>().map_err(|_| bad())?;
            let den = den.trim().parse::<i64>().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

fn parse_strategy(name: &str) -> Result<AttackStrategy, CliError> {
    AttackStrategy::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = AttackStrategy::ALL.iter().map(|s| s.name()).collect();
        usage(format!("unknown strategy {name:?}; expected one of {}", known.join(", ")))
    })
}

// ---------------------------------------------------------------------------
// run

#[derive(Args)]
pub struct RunArgs {
    /// Input length in bits.
    #[arg(long)]
    pub n: usize,
    /// Alice's input, e.g. 0110.
    #[arg(long)]
    pub x: String,
    /// Bob's input, same length.
    #[arg(long)]
    pub y: String,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Inject an adversary: eve-ir, eve-mr, alice-ir, alice-mr, or tp-fake.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Arithmetic backend for the quantum simulation.
    #[arg(long, value_enum, default_value_t = ModeArg::Sampling)]
    pub mode: ModeArg,
    /// Payload placement: concat, swap, or perm:<comma-separated slots>.
    #[arg(long, default_value = "concat")]
    pub placement: String,
    /// Shared-key shape.
    #[arg(long, value_enum, default_value_t = KeyModeArg::Balanced)]
    pub key_mode: KeyModeArg,
    /// Write the run's transcript_v1 line-JSON to this path.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

pub fn run(args: &RunArgs) -> Result<i32, CliError> {
    let x = parse_bits("x", &args.x, args.n)?;
    let y = parse_bits("y", &args.y, args.n)?;
    let strategy = args.strategy.as_deref().map(parse_strategy).transpose()?;
    let seed = args.seed.resolve();
    let mut config = ProtocolConfig::new(args.n, seed);
    config.mode = args.mode.into();
    config.key_mode = args.key_mode.into();
    config.placement = parse_placement(&args.placement, args.n)?;
    config.validate().map_err(|e| usage(e.to_string()))?;

    let result =
        run_protocol(&config, &x, &y, strategy.as_ref()).map_err(|e| usage(e.to_string()))?;

    if let Some(path) = &args.transcript {
        let mut text = transcript_lines(&result.transcript).join("\n");
        text.push('\n');
        fs::write(path, text)
            .map_err(|e| CliError::Failure(format!("writing {}: {e}", path.display())))?;
    }

    let aborted_check = match result.outcome {
        RunOutcome::Aborted { check } => Some(check.name()),
        _ => None,
    };
    match args.format {
        FormatArg::Json => print_json(&json!({
            "outcome": result.outcome.name(),
            "rounds_used": result.rounds_used,
            "n": args.n,
            "seed": seed,
            "attack": strategy.map(|s| s.name()),
            "aborted_check": aborted_check,
        })),
        FormatArg::Csv => {
            emit_line(&csv_line(&["outcome", "rounds_used", "n", "seed", "attack", "aborted_check"].map(String::from)));
            emit_line(&csv_line(&[
                    result.outcome.name().to_string(),
                    result.rounds_used.to_string(),
                    args.n.to_string(),
                    seed.to_string(),
                    optional_cell(strategy.map(|s| s.name())),
                    optional_cell(aborted_check),
                ])
            );
        }
    }
    Ok(if aborted_check.is_some() { 1 } else { 0 })
}

// ---------------------------------------------------------------------------
// attack

#[derive(Args)]
pub struct AttackArgs {
    /// The adversary to score: eve-ir, eve-mr, alice-ir, alice-mr, tp-fake.
    #[arg(long)]
    pub strategy: String,
    /// Input length per knowledge run.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Monte-Carlo trials per detection scenario.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

/// Knowledge runs: enough to cover at least 10^4 input bits, never fewer
/// than 100 full runs.
fn derived_runs(n: usize) -> u64 {
    (10_000u64.div_ceil(n as u64)).max(100)
}

fn guess_value(guess: Option<sqpc_core::analysis::GuessAccuracy>) -> Value {
    match guess {
        None => Value::Null,
        Some(g) => json!({ "correct": g.correct, "total": g.total, "rate": g.rate() }),
    }
}

/// Runs both halves of the adversary scorecard: per-scenario detection
/// sampling against the exact probabilities, and the knowledge experiment
/// over full protocol runs.
fn attack_reports(
    strategy: AttackStrategy,
    n: usize,
    detection_trials: u64,
    seed: u64,
) -> Result<(KnowledgeReport, Vec<DetectionReport>), CliError> {
    let knowledge = knowledge_experiment(strategy, n, derived_runs(n), seed)
        .map_err(|e| usage(e.to_string()))?;
    let detection = detection_catalog()
        .into_iter()
        .filter(|entry| entry.strategy.name() == strategy.name())
        .map(|entry| {
            monte_carlo_detection(
                entry.strategy,
                entry.scenario,
                ScenarioSpec::default(),
                detection_trials,
                seed,
            )
            .map_err(|e| usage(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((knowledge, detection))
}

fn attack_value(knowledge: &KnowledgeReport, detection: &[DetectionReport]) -> Value {
    json!({
        "strategy": knowledge.strategy.name(),
        "n": knowledge.n,
        "seed": knowledge.seed,
        "detection": detection.iter().map(detection_value).collect::<Vec<_>>(),
        "knowledge": {
            "runs": knowledge.runs,
            "undetected_runs": knowledge.undetected_runs,
            "undetected_rate": knowledge.undetected_runs as f64 / knowledge.runs as f64,
            "sequence_a_exact": knowledge.sequence_a_exact,
            "sequence_b_exact": knowledge.sequence_b_exact,
            "input_x_guess": guess_value(knowledge.input_x_guess),
            "input_y_guess": guess_value(knowledge.input_y_guess),
        },
    })
}

pub fn attack(args: &AttackArgs) -> Result<i32, CliError> {
    let strategy = parse_strategy(&args.strategy)?;
    let seed = args.seed.resolve();
    let (knowledge, detection) = attack_reports(strategy, args.n, args.trials, seed)?;
    match args.format {
        FormatArg::Json => print_json(&attack_value(&knowledge, &detection)),
        FormatArg::Csv => {
            emit_line(&csv_line(
                &[
                    "strategy",
                    "n",
                    "seed",
                    "scenario",
                    "exact_p",
                    "trials",
                    "detections",
                    "empirical",
                    "within_3_sigma",
                    "knowledge_runs",
                    "undetected_runs",
                    "sequence_a_exact",
                    "sequence_b_exact",
                    "x_guess_rate",
                    "y_guess_rate",
                ]
                .map(String::from),
            ));
            // One row per detection scenario; an adversary with no channel
            // signature (the dishonest TP) still gets one row for the
            // knowledge columns.
            let scenario_cells = |report: Option<&DetectionReport>| {
                [
                    optional_cell(report.map(|r| r.scenario.name())),
                    optional_cell(report.map(|r| rational_cell(r.expected))),
                    optional_cell(report.map(|r| r.trials)),
                    optional_cell(report.map(|r| r.detections)),
                    optional_cell(report.map(|r| r.empirical)),
                    optional_cell(report.map(|r| r.within_3_sigma)),
                ]
            };
            let rows: Vec<Option<&DetectionReport>> = if detection.is_empty() {
                vec![None]
            } else {
                detection.iter().map(Some).collect()
            };
            for row in rows {
                let mut cells = vec![
                    knowledge.strategy.name().to_string(),
                    knowledge.n.to_string(),
                    knowledge.seed.to_string(),
                ];
                cells.extend(scenario_cells(row));
                cells.extend([
                    knowledge.runs.to_string(),
                    knowledge.undetected_runs.to_string(),
                    optional_cell(knowledge.sequence_a_exact),
                    optional_cell(knowledge.sequence_b_exact),
                    optional_cell(knowledge.input_x_guess.map(|g| g.rate())),
                    optional_cell(knowledge.input_y_guess.map(|g| g.rate())),
                ]);
                emit_line(&csv_line(&cells));
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// table1

#[derive(Args)]
pub struct TableArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

pub fn table1(args: &TableArgs) -> Result<i32, CliError> {
    let checks = verify_encoding_table().map_err(|e| CliError::Failure(e.to_string()))?;
    match args.format {
        FormatArg::Json => {
            let rows: Vec<Value> = checks
                .iter()
                .map(|check| {
                    json!({
                        "initial": check.row.initial.name(),
                        "alice_bit": check.row.alice_bit,
                        "bob_bit": check.row.bob_bit,
                        "outcome": check.row.expected.name(),
                        "c_bit": check.row.c_bit,
                        "probability": rational_value(check.probability),
                        "confirmed": check.confirmed,
                    })
                })
                .collect();
            print_json(&json!({
                "rows": rows,
                "all_confirmed": checks.iter().all(|c| c.confirmed),
            }));
        }
        FormatArg::Csv => {
            emit_line(&csv_line(
                    &["initial", "alice_bit", "bob_bit", "outcome", "c_bit", "probability", "confirmed"]
                        .map(String::from)
                )
            );
            for check in &checks {
                emit_line(&csv_line(&[
                        check.row.initial.name().to_string(),
                        check.row.alice_bit.to_string(),
                        check.row.bob_bit.to_string(),
                        check.row.expected.name().to_string(),
                        check.row.c_bit.to_string(),
                        rational_cell(check.probability),
                        check.confirmed.to_string(),
                    ])
                );
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// efficiency

#[derive(Args)]
pub struct EfficiencyArgs {
    /// Input length in bits.
    #[arg(long, default_value_t = 8)]
    pub n: u64,
    /// Key-distribution oversampling margin, as an integer or num/den.
    #[arg(long, default_value = "0")]
    pub delta: String,
    /// Explicit qubit budget for Bob's key run (defaults to Alice's).
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

fn efficiency_value(report: &EfficiencyReport) -> Value {
    json!({
        "n": report.n,
        "delta": rational_value(report.delta),
        "compared_bits": report.compared_bits,
        "bell_qubits": report.bell_qubits,
        "key_qubits_alice": report.key_qubits_alice,
        "key_qubits_bob": report.key_qubits_bob,
        "qubit_cost": report.qubit_cost,
        "classical_cost": report.classical_cost,
        "eta": rational_value(report.efficiency),
    })
}

fn reference_value() -> Vec<Value> {
    reference_efficiencies()
        .into_iter()
        .map(|(name, eta)| json!({ "name": name, "eta": rational_value(eta) }))
        .collect()
}

pub fn efficiency_cmd(args: &EfficiencyArgs) -> Result<i32, CliError> {
    let delta = parse_rational("delta", &args.delta)?;
    let report = efficiency(args.n, delta, args.m).map_err(|e| usage(e.to_string()))?;
    match args.format {
        FormatArg::Json => {
            let mut value = efficiency_value(&report);
            value["reference"] = Value::Array(reference_value());
            print_json(&value);
        }
        FormatArg::Csv => {
            emit_line(&csv_line(&["name", "eta", "decimal"].map(String::from)));
            for (name, eta) in reference_efficiencies() {
                emit_line(&csv_line(&[
                        name.to_string(),
                        rational_cell(eta),
                        (*eta.numer() as f64 / *eta.denom() as f64).to_string(),
                    ])
                );
            }
            let eta = report.efficiency;
            emit_line(&csv_line(&[
                    "this_run".to_string(),
                    rational_cell(eta),
                    (*eta.numer() as f64 / *eta.denom() as f64).to_string(),
                ])
            );
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// leakage

#[derive(Args)]
pub struct LeakageArgs {
    /// Input length in bits (even, 2..=62).
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Number of honest runs to sample.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

fn leakage_value(report: &LeakageReport) -> Value {
    json!({
        "n": report.n,
        "trials": report.trials,
        "seed": report.seed,
        "early_stops": report.early_stops,
        "empirical": report.empirical,
        "analytic": rational_value(report.analytic),
        "std_err": report.std_err,
        "within_3_sigma": report.within_3_sigma,
    })
}

pub fn leakage(args: &LeakageArgs) -> Result<i32, CliError> {
    let report = leakage_experiment(args.n, args.trials, args.seed.resolve())
        .map_err(|e| usage(e.to_string()))?;
    match args.format {
        FormatArg::Json => print_json(&leakage_value(&report)),
        FormatArg::Csv => {
            emit_line(&csv_line(
                    &["n", "trials", "seed", "early_stops", "empirical", "analytic", "std_err", "within_3_sigma"]
                        .map(String::from)
                )
            );
            emit_line(&csv_line(&[
                    report.n.to_string(),
                    report.trials.to_string(),
                    report.seed.to_string(),
                    report.early_stops.to_string(),
                    report.empirical.to_string(),
                    rational_cell(report.analytic),
                    report.std_err.to_string(),
                    report.within_3_sigma.to_string(),
                ])
            );
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// report

#[derive(Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub seed: SeedArg,
    /// Monte-Carlo trials per detection estimate.
    #[arg(long, default_value_t = 20_000)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

fn detection_value(report: &DetectionReport) -> Value {
    json!({
        "strategy": report.strategy.name(),
        "scenario": report.scenario.name(),
        "exact_p": rational_value(report.expected),
        "trials": report.trials,
        "detections": report.detections,
        "empirical": report.empirical,
        "std_err": report.std_err,
        "within_3_sigma": report.within_3_sigma,
    })
}

pub fn report(args: &ReportArgs) -> Result<i32, CliError> {
    if args.format == FormatArg::Csv {
        return Err(usage("the full report is JSON-only"));
    }
    let seed = args.seed.resolve();

    let encoding = verify_encoding_table().map_err(|e| CliError::Failure(e.to_string()))?;
    let eff = efficiency(8, Rational::new(0, 1), None).map_err(|e| usage(e.to_string()))?;
    let mut efficiency_json = efficiency_value(&eff);
    efficiency_json["reference"] = Value::Array(reference_value());
    let leakage: Vec<Value> = [2usize, 4, 8]
        .into_iter()
        .map(|n| {
            leakage_experiment(n, 10_000, seed)
                .map(|r| leakage_value(&r))
                .map_err(|e| usage(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let attacks: Vec<Value> = AttackStrategy::ALL
        .into_iter()
        .map(|strategy| {
            let (knowledge, detection) = attack_reports(strategy, 20, args.trials, seed)?;
            Ok(attack_value(&knowledge, &detection))
        })
        .collect::<Result<_, CliError>>()?;

    print_json(&json!({
        "tool": { "name": "sqpc", "version": env!("CARGO_PKG_VERSION") },
        "seed": seed,
        "detection_trials": args.trials,
        "encoding_table": {
            "rows": encoding.len(),
            "all_confirmed": encoding.iter().all(|c| c.confirmed),
        },
        "efficiency": efficiency_json,
        "leakage": leakage,
        "attacks": attacks,
    }));
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_strings_and_hex_decode_identically() {
        assert_eq!(parse_bits("x", "10100101", 8).unwrap(), parse_bits("x", "0xA5", 8).unwrap());
        assert_eq!(parse_bits("x", "0xa5", 8).unwrap(), vec![1, 0, 1, 0, 0, 1, 0, 1]);
        assert_eq!(parse_bits("x", "0x5", 8).unwrap(), vec![0, 0, 0, 0, 0, 1, 0, 1]);
        assert_eq!(parse_bits("x", "0x25", 6).unwrap(), vec![1, 0, 0, 1, 0, 1]);
        assert!(parse_bits("x", "0xA5", 4).is_err(), "value needs 8 bits");
        assert!(parse_bits("x", "0xG", 4).is_err());
        assert!(parse_bits("x", "0x", 4).is_err());
        assert!(parse_bits("x", "012", 3).is_err());
        assert!(parse_bits("x", "01", 3).is_err());
    }

    #[test]
    fn rationals_parse_as_integers_or_fractions() {
        assert_eq!(parse_rational("delta", "0").unwrap(), Rational::new(0, 1));
        assert_eq!(parse_rational("delta", "1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rational("delta", " 3 / 4 ").unwrap(), Rational::new(3, 4));
        assert!(parse_rational("delta", "1/0").is_err());
        assert!(parse_rational("delta", "half").is_err());
    }

    #[test]
    fn placement_specs_cover_the_three_forms() {
        assert_eq!(parse_placement("concat", 4).unwrap(), Placement::concat(4));
        assert_eq!(parse_placement("swap", 4).unwrap(), Placement::swapped(4));
        let perm = parse_placement("perm:7,5,3,1,6,4,2,0", 4).unwrap();
        assert_eq!(perm.data_slot(0), 7);
        assert!(parse_placement("perm:0,1,2", 4).is_err(), "wrong length");
        assert!(parse_placement("perm:0,0,1,2,3,4,5,6", 4).is_err(), "repeated slot");
        assert!(parse_placement("shuffle", 4).is_err());
    }

    #[test]
    fn knowledge_runs_cover_ten_thousand_bits() {
        assert_eq!(derived_runs(20), 500);
        assert_eq!(derived_runs(3), 3334);
        assert_eq!(derived_runs(1000), 100, "never fewer than 100 runs");
    }

    #[test]
    fn usage_and_failure_map_to_distinct_exit_codes() {
        assert_eq!(usage("bad flag").exit_code(), 2);
        assert_eq!(CliError::Failure("disk full".into()).exit_code(), 1);
    }
}
