//! Seeded circuit generators for fuzzing and benchmarking.

use crate::angle::Angle;
use crate::circuit::{Circuit, Gate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A uniformly random circuit over {H, X, T, Tdg, S, Z, CX}, all qubits
/// equally likely; on one qubit, CX is left out of the draw.
pub fn random_circuit(n_qubits: u32, n_gates: usize, seed: u64) -> Circuit {
    assert!(n_qubits > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = if n_qubits > 1 { 7 } else { 6 };
    let gates = (0..n_gates).map(|_| {
        let q = rng.random_range(0..n_qubits);
        match rng.random_range(0..kinds) {
            0 => Gate::H(q),
            1 => Gate::X(q),
            2 => Gate::Rz(q, Angle::exact(1, 4)),
            3 => Gate::Rz(q, Angle::exact(7, 4)),
            4 => Gate::Rz(q, Angle::exact(1, 2)),
            5 => Gate::Rz(q, Angle::exact(1, 1)),
            _ => {
                let mut target = rng.random_range(0..n_qubits - 1);
                if target >= q {
                    target += 1;
                }
                Gate::Cx { control: q, target }
            }
        }
    });
    Circuit::from_gates(n_qubits, gates.collect::<Vec<_>>())
}

/// The T-chain benchmark family: a rotation-heavy mix (T 1/2, CX 7/16,
/// H 1/16) that keeps long foldable chains alive, with just enough Hadamards
/// to retire stale table entries. Needs at least two qubits.
pub fn tchain_cx(n_qubits: u32, n_gates: usize, seed: u64) -> Circuit {
    assert!(n_qubits >= 2, "the T-chain family needs at least 2 qubits");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gates = (0..n_gates).map(|_| {
        let q = rng.random_range(0..n_qubits);
        match rng.random_range(0..16) {
            0..8 => Gate::Rz(q, Angle::exact(1, 4)),
            8..15 => {
                let mut target = rng.random_range(0..n_qubits - 1);
                if target >= q {
                    target += 1;
                }
                Gate::Cx { control: q, target }
            }
            _ => Gate::H(q),
        }
    });
    Circuit::from_gates(n_qubits, gates.collect::<Vec<_>>())
}
