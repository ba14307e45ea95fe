//! Qubit and classical-bit accounting for one comparison of n-bit inputs.
//!
//! The cost model charges every qubit generated: 4n Bell pairs (8n qubits)
//! for the comparison itself, plus the qubit budgets of the two key
//! distribution runs that establish the shared key — N = ⌈4n(1+δ)⌉ qubits
//! for Alice's run and M ≥ N for Bob's, where δ ≥ 0 is the oversampling
//! margin. The classical side charges the three announced bits per
//! comparison round. Efficiency is compared bits over total cost:
//! η = n / (λq + λc), which is 1/19 at δ = 0 and M = N.

use alloc::vec::Vec;

use crate::analysis::AnalysisError;
use crate::protocol::ProtocolError;
use crate::quantum::Rational;

/// The full account for one n-bit comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub n: u64,
    pub delta: Rational,
    /// Bits the protocol actually compares: λs = n.
    pub compared_bits: u64,
    /// Qubits in the 4n transmitted Bell pairs: 8n.
    pub bell_qubits: u64,
    /// Qubit budget of the key run Alice takes part in: N = ⌈4n(1+δ)⌉.
    pub key_qubits_alice: u64,
    /// Qubit budget of the key run Bob takes part in: M ≥ N.
    pub key_qubits_bob: u64,
    /// λq = 8n + N + M.
    pub qubit_cost: u64,
    /// λc = 3n: one comparison bit and two masked bits announced per round.
    pub classical_cost: u64,
    /// η = n / (λq + λc).
    pub efficiency: Rational,
}

/// Computes the account for a comparison of `n`-bit inputs with key
/// oversampling `delta` and an optional explicit budget for Bob's key run.
pub fn efficiency(
    n: u64,
    delta: Rational,
    bob_budget: Option<u64>,
) -> Result<EfficiencyReport, AnalysisError> {
    if n == 0 {
        return Err(ProtocolError::ZeroLength.into());
    }
    if delta < Rational::from_integer(0) {
        return Err(ProtocolError::NegativeDelta.into());
    }
    let n_exact = i64::try_from(n)
        .ok()
        .filter(|&v| v <= i64::MAX / 32)
        .map(Rational::from_integer)
        .ok_or(AnalysisError::LengthOverflow(n))?;
    let key_alice = (Rational::from_integer(4) * n_exact * (Rational::from_integer(1) + delta))
        .ceil()
        .to_integer() as u64;
    let key_bob = match bob_budget {
        None => key_alice,
        Some(m) if m >= key_alice => m,
        Some(m) => {
            return Err(AnalysisError::BudgetTooSmall { got: m, minimum: key_alice });
        }
    };
    let bell_qubits = 8 * n;
    let qubit_cost = bell_qubits + key_alice + key_bob;
    let classical_cost = 3 * n;
    let efficiency = Rational::new(n as i64, (qubit_cost + classical_cost) as i64);
    Ok(EfficiencyReport {
        n,
        delta,
        compared_bits: n,
        bell_qubits,
        key_qubits_alice: key_alice,
        key_qubits_bob: key_bob,
        qubit_cost,
        classical_cost,
        efficiency,
    })
}

/// Qubit efficiencies of earlier two-user private comparison protocols, for
/// the same per-bit accounting, ending with this protocol's δ = 0 bound.
pub fn reference_efficiencies() -> Vec<(&'static str, Rational)> {
    alloc::vec![
        ("chou2016", Rational::new(1, 82)),
        ("thapliyal2018", Rational::new(1, 60)),
        ("jiang2020", Rational::new(1, 32)),
        ("tsai2021", Rational::new(1, 48)),
        ("xie2021", Rational::new(1, 36)),
        ("sun2021", Rational::new(1, 58)),
        ("this_protocol_bound", Rational::new(1, 19)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_efficiency_is_one_nineteenth_for_any_n() {
        for n in [1u64, 8, 1024] {
            let report = efficiency(n, Rational::from_integer(0), None).unwrap();
            assert_eq!(report.efficiency, Rational::new(1, 19));
            assert_eq!(report.qubit_cost, 16 * n);
            assert_eq!(report.classical_cost, 3 * n);
        }
    }

    #[test]
    fn oversampling_raises_the_key_budget_and_lowers_efficiency() {
        // δ = 1/2 → N = ⌈6n⌉; at n = 10: N = M = 60, λq = 200, λc = 30.
        let report = efficiency(10, Rational::new(1, 2), None).unwrap();
        assert_eq!(report.key_qubits_alice, 60);
        assert_eq!(report.qubit_cost, 200);
        assert_eq!(report.efficiency, Rational::new(10, 230));
        // Fractional ceilings round up: n = 1, δ = 1/3 → N = ⌈16/3⌉ = 6.
        let report = efficiency(1, Rational::new(1, 3), None).unwrap();
        assert_eq!(report.key_qubits_alice, 6);
    }

    #[test]
    fn bob_budget_must_cover_the_minimum() {
        let report = efficiency(4, Rational::from_integer(0), Some(20)).unwrap();
        assert_eq!(report.key_qubits_bob, 20);
        assert_eq!(report.qubit_cost, 32 + 16 + 20);
        assert_eq!(
            efficiency(4, Rational::from_integer(0), Some(15)),
            Err(AnalysisError::BudgetTooSmall { got: 15, minimum: 16 })
        );
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        assert!(matches!(
            efficiency(0, Rational::from_integer(0), None),
            Err(AnalysisError::Protocol(ProtocolError::ZeroLength))
        ));
        assert!(matches!(
            efficiency(4, Rational::new(-1, 2), None),
            Err(AnalysisError::Protocol(ProtocolError::NegativeDelta))
        ));
    }

    #[test]
    fn reference_table_is_frozen() {
        let table = reference_efficiencies();
        assert_eq!(table.len(), 7);
        assert_eq!(table[0], ("chou2016", Rational::new(1, 82)));
        assert_eq!(table[6], ("this_protocol_bound", Rational::new(1, 19)));
        // Every η, this protocol's included, stays strictly the best here.
        let ours = table[6].1;
        for (name, eta) in &table[..6] {
            assert!(*eta < ours, "{name} should be below the bound");
        }
    }
}
