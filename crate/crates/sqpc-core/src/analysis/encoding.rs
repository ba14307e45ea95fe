//! The Bell-state encoding relation, frozen as a 16-row table and proved by
//! exhaustive branch enumeration.
//!
//! The table is written out literally rather than generated from
//! [`expected_bell`], so the enumeration check pins both the simulator and
//! the rule against an independent statement of the physics.

use alloc::vec::Vec;

use crate::adversary::NoopTap;
use crate::analysis::AnalysisError;
use crate::bits::Bit;
use crate::protocol::{tp_classify, transmit_pair, ParticleAction, Transcript};
use crate::quantum::{enumerate_branches, BellKind, Executor, Field, PauliOp, Rational, Sqrt2Ext};

/// One row: prepared state, encoded bits, resulting state, comparison bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingRow {
    pub initial: BellKind,
    pub alice_bit: Bit,
    pub bob_bit: Bit,
    pub expected: BellKind,
    pub c_bit: Bit,
}

/// The full 16-row relation: one σ_x flips φ ↔ ψ (sign kept) and yields
/// c = 1; none or both leave the state fixed and yield c = 0.
pub fn encoding_table() -> [EncodingRow; 16] {
    use BellKind::{PhiMinus, PhiPlus, PsiMinus, PsiPlus};
    let row = |initial, alice_bit, bob_bit, expected, c_bit| EncodingRow {
        initial,
        alice_bit,
        bob_bit,
        expected,
        c_bit,
    };
    [
        row(PhiPlus, 0, 0, PhiPlus, 0),
        row(PhiPlus, 0, 1, PsiPlus, 1),
        row(PhiPlus, 1, 0, PsiPlus, 1),
        row(PhiPlus, 1, 1, PhiPlus, 0),
        row(PhiMinus, 0, 0, PhiMinus, 0),
        row(PhiMinus, 0, 1, PsiMinus, 1),
        row(PhiMinus, 1, 0, PsiMinus, 1),
        row(PhiMinus, 1, 1, PhiMinus, 0),
        row(PsiPlus, 0, 0, PsiPlus, 0),
        row(PsiPlus, 0, 1, PhiPlus, 1),
        row(PsiPlus, 1, 0, PhiPlus, 1),
        row(PsiPlus, 1, 1, PsiPlus, 0),
        row(PsiMinus, 0, 0, PsiMinus, 0),
        row(PsiMinus, 0, 1, PhiMinus, 1),
        row(PsiMinus, 1, 0, PhiMinus, 1),
        row(PsiMinus, 1, 1, PsiMinus, 0),
    ]
}

/// One verified row: the enumerated probability of the claimed outcome and
/// whether the simulation confirms the row exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodingCheck {
    pub row: EncodingRow,
    /// Probability of measuring the claimed state, over exact arithmetic.
    pub probability: Rational,
    /// True when the claimed outcome is the only branch, at probability 1,
    /// and the comparison bit matches.
    pub confirmed: bool,
}

/// Simulates every row of [`encoding_table`] by branch enumeration over the
/// exact field and reports whether each is deterministic as claimed.
pub fn verify_encoding_table() -> Result<Vec<EncodingCheck>, AnalysisError> {
    encoding_table()
        .into_iter()
        .map(|row| {
            let set = enumerate_branches::<Sqrt2Ext, BellKind>(8, |exec| {
                let mut transcript = Transcript::new();
                let pair = exec.prepare_bell(row.initial);
                let (qa, qb) = transmit_pair(
                    exec,
                    &mut NoopTap,
                    &mut transcript,
                    0,
                    pair,
                    ParticleAction::Sift { op: PauliOp::for_bit(row.alice_bit) },
                    ParticleAction::Sift { op: PauliOp::for_bit(row.bob_bit) },
                );
                exec.measure_bell(qa, qb)
            })?;
            let probability = set
                .probability_where(|branch| branch.value == row.expected)
                .as_rational()
                .ok_or(AnalysisError::NonRationalProbability)?;
            let confirmed = set.branches.len() == 1
                && probability == Rational::from_integer(1)
                && tp_classify(row.initial, row.expected) == row.c_bit;
            Ok(EncodingCheck { row, probability, confirmed })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::expected_bell;

    #[test]
    fn table_covers_every_combination_once() {
        let table = encoding_table();
        for initial in BellKind::ALL {
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let hits = table
                        .iter()
                        .filter(|r| r.initial == initial && (r.alice_bit, r.bob_bit) == (a, b))
                        .count();
                    assert_eq!(hits, 1);
                }
            }
        }
    }

    #[test]
    fn frozen_rows_agree_with_the_flip_rule() {
        for row in encoding_table() {
            assert_eq!(row.expected, expected_bell(row.initial, row.alice_bit ^ row.bob_bit));
            assert_eq!(row.c_bit, row.alice_bit ^ row.bob_bit);
        }
    }

    #[test]
    fn every_row_is_confirmed_by_enumeration() {
        let checks = verify_encoding_table().unwrap();
        assert_eq!(checks.len(), 16);
        for check in checks {
            assert!(check.confirmed, "row {:?} not confirmed", check.row);
            assert_eq!(check.probability, Rational::from_integer(1));
        }
    }
}
