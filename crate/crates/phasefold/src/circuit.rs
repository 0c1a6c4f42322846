//! Gate-list circuit representation.
//!
//! A [`Circuit`] is an append-only list of gate slots. Deleting a gate
//! tombstones its slot instead of shifting the tail, so a [`GateHandle`]
//! stays valid for the lifetime of the circuit and deletion is O(1). This is
//! what lets the folding pass retire an earlier rotation in constant time
//! while scanning forward.

use crate::angle::{Angle, TClass};
use thiserror::Error;

/// Stable identifier for a gate slot within one [`Circuit`].
///
/// Handles are only meaningful for the circuit that issued them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateHandle(u32);

impl GateHandle {
    /// Slot index in issue order (tombstoned slots included).
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One gate. Qubits are zero-based wire indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(u32),
    X(u32),
    Rz(u32, Angle),
    Cx { control: u32, target: u32 },
}

impl Gate {
    /// The wires this gate touches (control before target for CX).
    pub fn qubits(&self) -> Qubits {
        let (qs, len) = match *self {
            Gate::H(q) | Gate::X(q) | Gate::Rz(q, _) => ([q, 0], 1),
            Gate::Cx { control, target } => ([control, target], 2),
        };
        Qubits { qs, len, next: 0 }
    }

    /// The rotation angle, if this is an Rz.
    pub fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::Rz(_, angle) => Some(angle),
            _ => None,
        }
    }

    fn counts_toward_t(&self) -> bool {
        self.angle().is_some_and(|a| a.t_class() == TClass::TGate)
    }
}

/// Iterator over the wires of a single gate.
#[derive(Clone, Debug)]
pub struct Qubits {
    qs: [u32; 2],
    len: u8,
    next: u8,
}

impl Iterator for Qubits {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.next < self.len {
            let q = self.qs[self.next as usize];
            self.next += 1;
            Some(q)
        } else {
            None
        }
    }
}

/// Errors from operations that take a [`GateHandle`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate handle #{} does not belong to this circuit", .0.index())]
    HandleOutOfRange(GateHandle),
    #[error("gate #{} was already deleted", .0.index())]
    AlreadyDeleted(GateHandle),
}

/// A quantum circuit over `n_qubits` wires.
#[derive(Clone, Debug)]
pub struct Circuit {
    n_qubits: u32,
    slots: Vec<Option<Gate>>,
    live: usize,
}

/// Summary counters for a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircuitStats {
    pub n_qubits: u32,
    /// Live gates of any kind.
    pub gates: usize,
    /// Live rotations by odd multiples of π/4.
    pub t_count: usize,
}

impl Circuit {
    /// An empty circuit on `n_qubits` wires. Panics if `n_qubits == 0`.
    pub fn new(n_qubits: u32) -> Circuit {
        assert!(n_qubits > 0, "a circuit needs at least one qubit");
        Circuit {
            n_qubits,
            slots: Vec::new(),
            live: 0,
        }
    }

    /// Build a circuit from a gate sequence.
    pub fn from_gates(n_qubits: u32, gates: impl IntoIterator<Item = Gate>) -> Circuit {
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push(g);
        }
        c
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Number of live gates.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Append a gate. Panics if a wire index is out of range or a CX has
    /// equal control and target; both are caller bugs, not data errors.
    pub fn push(&mut self, gate: Gate) -> GateHandle {
        for q in gate.qubits() {
            assert!(
                q < self.n_qubits,
                "gate {gate:?} touches qubit {q} but the circuit has {} qubits",
                self.n_qubits
            );
        }
        if let Gate::Cx { control, target } = gate {
            assert!(control != target, "CX control and target must differ, got {control}");
        }
        let handle = GateHandle(
            u32::try_from(self.slots.len()).expect("circuit exceeds u32::MAX slots"),
        );
        self.slots.push(Some(gate));
        self.live += 1;
        handle
    }

    /// Tombstone the gate at `handle`. O(1); later gates keep their handles.
    pub fn delete(&mut self, handle: GateHandle) -> Result<(), CircuitError> {
        let slot = self
            .slots
            .get_mut(handle.index())
            .ok_or(CircuitError::HandleOutOfRange(handle))?;
        if slot.take().is_none() {
            return Err(CircuitError::AlreadyDeleted(handle));
        }
        self.live -= 1;
        Ok(())
    }

    /// The gate at `handle`, if it is still live.
    pub fn get(&self, handle: GateHandle) -> Option<&Gate> {
        self.slots.get(handle.index())?.as_ref()
    }

    /// Live gates in program order.
    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.slots.iter().filter_map(|s| s.as_ref())
    }

    /// Live gates with their handles, in program order.
    pub fn iter(&self) -> impl Iterator<Item = (GateHandle, &Gate)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|g| (GateHandle(i as u32), g)))
    }

    pub fn stats(&self) -> CircuitStats {
        CircuitStats {
            n_qubits: self.n_qubits,
            gates: self.live,
            t_count: self.gates().filter(|g| g.counts_toward_t()).count(),
        }
    }
}

/// Circuits compare by wire count and live gate sequence; tombstones are
/// invisible.
impl PartialEq for Circuit {
    fn eq(&self, other: &Circuit) -> bool {
        self.n_qubits == other.n_qubits
            && self.live == other.live
            && self.gates().eq(other.gates())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> Circuit {
        Circuit::from_gates(
            2,
            [
                Gate::H(0),
                Gate::Rz(0, Angle::exact(1, 4)),
                Gate::Cx { control: 0, target: 1 },
                Gate::Rz(1, Angle::exact(7, 4)),
            ],
        )
    }

    #[test]
    fn push_returns_sequential_handles() {
        let mut c = Circuit::new(1);
        let a = c.push(Gate::H(0));
        let b = c.push(Gate::X(0));
        assert_eq!(a.index(), 0);
        assert_eq!(b.index(), 1);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn delete_preserves_order_and_handles() {
        let mut c = sample();
        let handles: Vec<_> = c.iter().map(|(h, _)| h).collect();
        c.delete(handles[1]).unwrap();
        let remaining: Vec<_> = c.gates().cloned().collect();
        assert_eq!(
            remaining,
            vec![
                Gate::H(0),
                Gate::Cx { control: 0, target: 1 },
                Gate::Rz(1, Angle::exact(7, 4)),
            ]
        );
        // Untouched gates are still reachable through their old handles.
        assert_eq!(c.get(handles[3]), Some(&Gate::Rz(1, Angle::exact(7, 4))));
        assert_eq!(c.get(handles[1]), None);
    }

    #[test]
    fn delete_twice_is_an_error() {
        let mut c = sample();
        let h = c.iter().next().unwrap().0;
        assert_eq!(c.delete(h), Ok(()));
        assert_eq!(c.delete(h), Err(CircuitError::AlreadyDeleted(h)));
    }

    #[test]
    fn foreign_handle_is_rejected_when_out_of_range() {
        let big = sample();
        let h = big.iter().nth(3).unwrap().0;
        let mut small = Circuit::new(1);
        small.push(Gate::H(0));
        assert_eq!(small.delete(h), Err(CircuitError::HandleOutOfRange(h)));
    }

    #[test]
    fn stats_counts_t_rotations_only() {
        let c = Circuit::from_gates(
            1,
            [
                Gate::Rz(0, Angle::exact(1, 4)),
                Gate::Rz(0, Angle::exact(7, 4)),
                Gate::Rz(0, Angle::exact(1, 2)),
                Gate::Rz(0, Angle::approx(0.3)),
                Gate::H(0),
            ],
        );
        let stats = c.stats();
        assert_eq!(stats.gates, 5);
        assert_eq!(stats.t_count, 2);
    }

    #[test]
    fn equality_ignores_tombstones() {
        let a = Circuit::from_gates(2, [Gate::H(0), Gate::X(1)]);
        let mut b = Circuit::new(2);
        b.push(Gate::H(0));
        let dead = b.push(Gate::Rz(0, Angle::exact(1, 4)));
        b.push(Gate::X(1));
        b.delete(dead).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    #[should_panic(expected = "touches qubit 3")]
    fn push_rejects_out_of_range_qubit() {
        Circuit::new(2).push(Gate::H(3));
    }

    #[test]
    #[should_panic(expected = "control and target must differ")]
    fn push_rejects_degenerate_cx() {
        Circuit::new(2).push(Gate::Cx { control: 1, target: 1 });
    }

    proptest! {
        /// Deleting any subset keeps the survivors in their original order.
        #[test]
        fn survivors_keep_program_order(keep in proptest::collection::vec(any::<bool>(), 1..64)) {
            let mut c = Circuit::new(4);
            let handles: Vec<_> = (0..keep.len())
                .map(|i| c.push(Gate::X((i % 4) as u32)))
                .collect();
            for (h, &k) in handles.iter().zip(&keep) {
                if !k {
                    c.delete(*h).unwrap();
                }
            }
            let survivors: Vec<_> = c.iter().map(|(h, _)| h.index()).collect();
            let expected: Vec<_> = (0..keep.len()).filter(|&i| keep[i]).collect();
            prop_assert_eq!(c.len(), expected.len());
            prop_assert_eq!(survivors, expected);
        }
    }
}
