//! Ground-truth references the optimizer is checked against.
//!
//! Two independent routes, deliberately sharing no code with the optimizer
//! or with each other: exact symbolic parities ([`parity`]) for checking
//! which merges are justified, and dense matrices ([`unitary`]) for checking
//! that transformed circuits still implement the same operator.

pub mod parity;
pub mod unitary;

pub use parity::{Parity, SymbolicState};
pub use unitary::{DenseUnitary, MAX_DENSE_QUBITS};

use crate::angle::Angle;
use crate::circuit::{Circuit, Gate, GateHandle};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("dense simulation supports at most {MAX_DENSE_QUBITS} qubits, got {0}")]
    TooManyQubits(u32),
    #[error("qubit counts differ: {0} vs {1}")]
    QubitCountMismatch(u32, u32),
    #[error("rotation index {index} out of range, circuit has {count} rotations")]
    RotationIndexOutOfRange { index: usize, count: usize },
}

/// The exact wire expression seen by each rotation, in scan order.
pub fn rotation_values(circuit: &Circuit) -> Vec<Parity> {
    let mut state = SymbolicState::new(circuit.n_qubits());
    let mut values = Vec::new();
    for gate in circuit.gates() {
        if let Gate::Rz(q, _) = *gate {
            values.push(state.value(q).clone());
        }
        state.apply(gate);
    }
    values
}

/// Would merging rotations `i` and `j` (0-based scan-order indices) be
/// justified? True exactly when both rotations see the same wire expression,
/// which makes their phases multiply into one rotation by the summed angle.
pub fn symbolic_mergeable(circuit: &Circuit, i: usize, j: usize) -> Result<bool, OracleError> {
    let values = rotation_values(circuit);
    let fetch = |index: usize| {
        values.get(index).ok_or(OracleError::RotationIndexOutOfRange {
            index,
            count: values.len(),
        })
    };
    Ok(fetch(i)? == fetch(j)?)
}

/// Phase folding keyed on exact parities instead of randomized signatures.
///
/// Same one-pass discipline as the optimizer: a table from wire expression
/// to the latest pending rotation on it; a hit retires the earlier gate and
/// folds its angle into the later one; rotations whose (possibly summed)
/// angle is a multiple of 2 pi are dropped outright. Because keys are exact,
/// this route can never merge wrongly; the optimizer's randomized route must
/// agree with it on every input.
///
/// Returns the folded circuit and the merge list as (earlier, later)
/// rotation indices in scan order.
pub fn symbolic_fold(circuit: &Circuit) -> (Circuit, Vec<(usize, usize)>) {
    struct Pending {
        angle: Angle,
        handle: GateHandle,
        ordinal: usize,
    }
    let mut state = SymbolicState::new(circuit.n_qubits());
    let mut out = Circuit::new(circuit.n_qubits());
    let mut table: HashMap<Parity, Pending> = HashMap::new();
    let mut merged = Vec::new();
    let mut ordinal = 0usize;
    for gate in circuit.gates() {
        match *gate {
            Gate::Rz(q, angle) => {
                let key = state.value(q).clone();
                let mut theta = angle;
                if let Some(prev) = table.remove(&key) {
                    merged.push((prev.ordinal, ordinal));
                    theta = prev.angle + theta;
                    out.delete(prev.handle)
                        .expect("pending rotations are live in the output");
                }
                if !theta.is_zero() {
                    let handle = out.push(Gate::Rz(q, theta));
                    table.insert(
                        key,
                        Pending {
                            angle: theta,
                            handle,
                            ordinal,
                        },
                    );
                }
                ordinal += 1;
            }
            g => {
                state.apply(&g);
                out.push(g);
            }
        }
    }
    (out, merged)
}
