//! Output helpers: deterministic JSON and CSV rendering.
//!
//! `serde_json`'s default map is ordered, so identical inputs always render
//! byte-identical output — the CLI's reproducibility contract.

use serde_json::{json, Value};
use sqpc_core::quantum::Rational;

/// A rational rendered exactly and approximately at once.
pub fn rational_value(r: Rational) -> Value {
    json!({
        "num": *r.numer(),
        "den": *r.denom(),
        "decimal": *r.numer() as f64 / *r.denom() as f64,
    })
}

/// A rational in CSV cells: `num/den`.
pub fn rational_cell(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// One line to stdout, exiting quietly if the reader hung up (EPIPE from
/// e.g. `sqpc table1 | head`).
pub fn emit_line(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

/// Pretty JSON plus trailing newline on stdout.
pub fn print_json(value: &Value) {
    emit_line(&serde_json::to_string_pretty(value).expect("JSON values render"));
}

/// One CSV record; fields are plain names and numbers, so no quoting.
pub fn csv_line(fields: &[String]) -> String {
    debug_assert!(fields.iter().all(|f| !f.contains([',', '"', '\n'])));
    fields.join(",")
}

/// An optional count in CSV cells; empty when absent.
pub fn optional_cell<T: ToString>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}
