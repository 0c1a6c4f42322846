//! Adjacent self-inverse cancellation.
//!
//! A cheap structural prepass run before folding: pairs of identical H, X or
//! CX gates that are adjacent on every wire they touch annihilate, and
//! cancellations cascade (H X X H collapses to nothing). Rotations are left
//! alone; they block adjacency on their wire but are never removed here, so
//! the pass can only shrink the gate count and never changes the circuit's
//! rotation content.
//!
//! One forward scan with a per-wire stack of pending gate positions. A
//! cancelled gate's stack entries go stale on its other wires and are popped
//! lazily, keeping the whole pass O(n + m).

use crate::circuit::{Circuit, Gate};

/// Repeatedly remove adjacent identical {H, X, CX} pairs until none remain.
/// The returned circuit is freshly built; its handles are its own.
pub fn cancel_adjacent(circuit: &Circuit) -> Circuit {
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(circuit.len());
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); circuit.n_qubits() as usize];

    // The live entry nearest the top of one wire's stack, popping stale ones.
    fn live_top(stack: &mut Vec<usize>, out: &[Option<Gate>]) -> Option<usize> {
        while let Some(&i) = stack.last() {
            if out[i].is_some() {
                return Some(i);
            }
            stack.pop();
        }
        None
    }

    for gate in circuit.gates() {
        let cancelled = match *gate {
            Gate::H(q) | Gate::X(q) => {
                let stack = &mut stacks[q as usize];
                match live_top(stack, &out) {
                    Some(i) if out[i].as_ref() == Some(gate) => {
                        out[i] = None;
                        stack.pop();
                        true
                    }
                    _ => false,
                }
            }
            Gate::Cx { control, target } => {
                let top_c = live_top(&mut stacks[control as usize], &out);
                let top_t = live_top(&mut stacks[target as usize], &out);
                match (top_c, top_t) {
                    // Cancel only against the same gate occurrence, adjacent
                    // on both wires, with the same orientation.
                    (Some(i), Some(j)) if i == j && out[i].as_ref() == Some(gate) => {
                        out[i] = None;
                        stacks[control as usize].pop();
                        stacks[target as usize].pop();
                        true
                    }
                    _ => false,
                }
            }
            Gate::Rz(..) => false,
        };
        if !cancelled {
            let idx = out.len();
            out.push(Some(*gate));
            for q in gate.qubits() {
                stacks[q as usize].push(idx);
            }
        }
    }
    Circuit::from_gates(circuit.n_qubits(), out.into_iter().flatten())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::oracle::DenseUnitary;
    use proptest::prelude::*;

    fn gates(c: &Circuit) -> Vec<Gate> {
        c.gates().cloned().collect()
    }

    #[test]
    fn plain_pairs_cancel() {
        for gate in [Gate::H(0), Gate::X(1), Gate::Cx { control: 0, target: 1 }] {
            let c = Circuit::from_gates(2, [gate, gate]);
            assert!(cancel_adjacent(&c).is_empty(), "{gate:?} pair survived");
        }
    }

    #[test]
    fn cascades_collapse_nested_pairs() {
        let c = Circuit::from_gates(1, [Gate::H(0), Gate::X(0), Gate::X(0), Gate::H(0)]);
        assert!(cancel_adjacent(&c).is_empty());

        let c = Circuit::from_gates(
            2,
            [
                Gate::X(0),
                Gate::Cx { control: 0, target: 1 },
                Gate::Cx { control: 0, target: 1 },
                Gate::X(0),
            ],
        );
        assert!(cancel_adjacent(&c).is_empty());
    }

    #[test]
    fn rotations_block_but_are_never_removed() {
        let c = Circuit::from_gates(
            1,
            [Gate::H(0), Gate::Rz(0, Angle::exact(1, 4)), Gate::H(0)],
        );
        assert_eq!(gates(&cancel_adjacent(&c)), gates(&c));

        // Even a zero rotation blocks; dropping those is the fold's job.
        let c = Circuit::from_gates(1, [Gate::X(0), Gate::Rz(0, Angle::ZERO), Gate::X(0)]);
        assert_eq!(cancel_adjacent(&c).len(), 3);
    }

    #[test]
    fn cx_orientation_matters() {
        let c = Circuit::from_gates(
            2,
            [
                Gate::Cx { control: 0, target: 1 },
                Gate::Cx { control: 1, target: 0 },
            ],
        );
        assert_eq!(cancel_adjacent(&c).len(), 2);
    }

    #[test]
    fn interposed_gate_on_either_wire_blocks_cx() {
        for blocker in [Gate::H(0), Gate::H(1)] {
            let c = Circuit::from_gates(
                2,
                [
                    Gate::Cx { control: 0, target: 1 },
                    blocker,
                    Gate::Cx { control: 0, target: 1 },
                ],
            );
            assert_eq!(cancel_adjacent(&c).len(), 3, "blocker {blocker:?}");
        }
        // A spectator wire does not block.
        let c = Circuit::from_gates(
            3,
            [
                Gate::Cx { control: 0, target: 1 },
                Gate::H(2),
                Gate::Cx { control: 0, target: 1 },
            ],
        );
        assert_eq!(gates(&cancel_adjacent(&c)), vec![Gate::H(2)]);
    }

    fn arb_gates(n: u32, len: usize) -> impl Strategy<Value = Vec<Gate>> {
        let gate = prop_oneof![
            3 => (0..n).prop_map(Gate::H),
            3 => (0..n).prop_map(Gate::X),
            1 => (0..n, 0i64..8).prop_map(|(q, num)| Gate::Rz(q, Angle::exact(num, 4))),
            3 => (0..n, 0..n).prop_filter_map("distinct", |(c, t)| {
                (c != t).then_some(Gate::Cx { control: c, target: t })
            }),
        ];
        proptest::collection::vec(gate, 0..len)
    }

    proptest! {
        #[test]
        fn one_pass_reaches_a_fixpoint(gates_in in arb_gates(3, 32)) {
            let c = Circuit::from_gates(3, gates_in);
            let once = cancel_adjacent(&c);
            let twice = cancel_adjacent(&once);
            prop_assert_eq!(&once, &twice);
            prop_assert!(once.len() <= c.len());
        }

        #[test]
        fn rotation_content_is_untouched(gates_in in arb_gates(3, 32)) {
            let c = Circuit::from_gates(3, gates_in);
            let rz_in: Vec<_> = c.gates().filter(|g| g.angle().is_some()).cloned().collect();
            let out = cancel_adjacent(&c);
            let rz_out: Vec<_> = out.gates().filter(|g| g.angle().is_some()).cloned().collect();
            prop_assert_eq!(rz_in, rz_out);
            prop_assert_eq!(c.stats().t_count, out.stats().t_count);
        }

        #[test]
        fn cancellation_preserves_the_unitary(gates_in in arb_gates(3, 24)) {
            let c = Circuit::from_gates(3, gates_in);
            let u_in = DenseUnitary::from_circuit(&c).unwrap();
            let u_out = DenseUnitary::from_circuit(&cancel_adjacent(&c)).unwrap();
            prop_assert!(u_in.max_abs_diff(&u_out).unwrap() < 1e-10);
        }
    }
}
