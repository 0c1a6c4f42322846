//! The folding pass.
//!
//! One forward scan. Non-rotation gates update the per-wire signatures and
//! pass through. Each rotation keys a hash table by its wire's current
//! signature: a hit means an earlier pending rotation saw the same value, so
//! that gate is retired and its angle folded into the current one. Any
//! rotation whose angle is a multiple of 2 pi (arriving that way or summed
//! into it) is dropped and leaves no pending entry. Everything is O(1) per
//! gate, so the whole pass is O(n + m).
//!
//! A merge is wrong only if two different wire expressions drew equal
//! signatures, which happens with probability 2^-width per pair; see
//! [`required_width`] for picking a width against a failure budget.

use crate::abs::{AbstractState, MAX_WIDTH};
use crate::angle::Angle;
use crate::circuit::{Circuit, Gate, GateHandle};
use std::collections::HashMap;

/// Counters from one folding run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldReport {
    /// Table hits: pairs of rotations combined into one.
    pub merges: usize,
    /// Input rotations that did not survive to the output, for any reason.
    pub rotations_eliminated: usize,
    pub t_count_before: usize,
    pub t_count_after: usize,
    pub width: u32,
    pub seed: u64,
}

/// Fold with a fresh signature state of the given width and seed.
pub fn fold(circuit: &Circuit, width: u32, seed: u64) -> (Circuit, FoldReport) {
    let mut state = AbstractState::new(circuit.n_qubits(), width, seed);
    fold_with_state(circuit, &mut state)
}

/// Fold using a caller-built state (e.g. replaying chosen signatures).
pub fn fold_with_state(
    circuit: &Circuit,
    state: &mut AbstractState,
) -> (Circuit, FoldReport) {
    fold_inner(circuit, state, None)
}

/// [`fold`], also reporting which rotations merged as (earlier, later)
/// scan-order indices.
pub fn fold_traced(
    circuit: &Circuit,
    width: u32,
    seed: u64,
) -> (Circuit, FoldReport, Vec<(usize, usize)>) {
    let mut state = AbstractState::new(circuit.n_qubits(), width, seed);
    let mut trace = Vec::new();
    let (out, report) = fold_inner(circuit, &mut state, Some(&mut trace));
    (out, report, trace)
}

struct Pending {
    angle: Angle,
    handle: GateHandle,
    ordinal: usize,
}

fn fold_inner(
    circuit: &Circuit,
    state: &mut AbstractState,
    mut trace: Option<&mut Vec<(usize, usize)>>,
) -> (Circuit, FoldReport) {
    assert_eq!(
        state.n_qubits(),
        circuit.n_qubits(),
        "signature state and circuit disagree on qubit count"
    );
    let mut out = Circuit::new(circuit.n_qubits());
    let mut table: HashMap<u128, Pending> = HashMap::new();
    let mut merges = 0usize;
    let mut rotations_in = 0usize;
    let mut ordinal = 0usize;
    for gate in circuit.gates() {
        match *gate {
            Gate::Rz(q, angle) => {
                rotations_in += 1;
                let key = state.value(q);
                let mut theta = angle;
                if let Some(prev) = table.remove(&key) {
                    merges += 1;
                    if let Some(trace) = trace.as_deref_mut() {
                        trace.push((prev.ordinal, ordinal));
                    }
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
    let rotations_out = out.gates().filter(|g| g.angle().is_some()).count();
    let report = FoldReport {
        merges,
        rotations_eliminated: rotations_in - rotations_out,
        t_count_before: circuit.stats().t_count,
        t_count_after: out.stats().t_count,
        width: state.width(),
        seed: state.seed(),
    };
    (out, report)
}

/// A signature width and whether the request had to be clamped to 128.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WidthBound {
    pub width: u32,
    pub capped: bool,
}

/// Smallest width guaranteeing that a circuit with `rotations` rotations
/// folds wrongly with probability at most `epsilon`.
///
/// A union bound over rotation pairs gives failure probability below
/// `rotations^2 * 2^-width`, so any width exceeding
/// `2*log2(rotations) + log2(1/epsilon)` suffices. Widths above 128 are
/// clamped (one machine word) and flagged.
pub fn required_width(rotations: usize, epsilon: f64) -> WidthBound {
    assert!(rotations >= 1, "need at least one rotation");
    assert!(
        epsilon > 0.0 && epsilon < 1.0,
        "failure budget must be in (0, 1), got {epsilon}"
    );
    let bound = 2.0 * (rotations as f64).log2() - epsilon.log2();
    let width = bound.floor() as u64 + 1;
    if width > u64::from(MAX_WIDTH) {
        WidthBound {
            width: MAX_WIDTH,
            capped: true,
        }
    } else {
        WidthBound {
            width: width as u32,
            capped: false,
        }
    }
}
