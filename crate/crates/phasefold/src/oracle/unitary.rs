//! Dense unitary simulation for small circuits.
//!
//! Builds the full 2^n x 2^n matrix of a circuit, gate by gate. Exponential
//! and unapologetic: this is the ground-truth route for checking that an
//! optimized circuit still implements the same operator, so it shares no
//! machinery with the optimizer. Capped at 10 qubits (a 16 MiB matrix).

use super::OracleError;
use crate::circuit::{Circuit, Gate};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

/// Hard limit on the dense simulation size.
pub const MAX_DENSE_QUBITS: u32 = 10;

/// A full circuit unitary. Row index = output basis state, column index =
/// input basis state, qubit 0 in the least significant bit.
#[derive(Clone, Debug)]
pub struct DenseUnitary {
    n_qubits: u32,
    dim: usize,
    mat: Vec<Complex64>,
}

impl DenseUnitary {
    /// The identity on `n_qubits` wires.
    pub fn identity(n_qubits: u32) -> Result<DenseUnitary, OracleError> {
        if n_qubits > MAX_DENSE_QUBITS {
            return Err(OracleError::TooManyQubits(n_qubits));
        }
        let dim = 1usize << n_qubits;
        let mut mat = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            mat[i * dim + i] = Complex64::ONE;
        }
        Ok(DenseUnitary { n_qubits, dim, mat })
    }

    /// The unitary implemented by `circuit`, first gate applied first.
    pub fn from_circuit(circuit: &Circuit) -> Result<DenseUnitary, OracleError> {
        let mut u = DenseUnitary::identity(circuit.n_qubits())?;
        for gate in circuit.gates() {
            u.apply_gate(gate);
        }
        Ok(u)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at (output `row`, input `col`).
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat[row * self.dim + col]
    }

    /// Left-multiply the accumulated matrix by one more gate.
    pub fn apply_gate(&mut self, gate: &Gate) {
        match *gate {
            Gate::Rz(q, angle) => {
                // Phase e^(i*theta) on every output state with bit q set.
                let phase = Complex64::cis(angle.radians());
                for row in self.rows_with_bit(q, true) {
                    for v in self.row_mut(row) {
                        *v *= phase;
                    }
                }
            }
            Gate::X(q) => {
                for row in self.rows_with_bit(q, false) {
                    self.swap_rows(row, row | bit(q));
                }
            }
            Gate::Cx { control, target } => {
                let rows: Vec<usize> = self
                    .rows_with_bit(control, true)
                    .filter(|r| r & bit(target) == 0)
                    .collect();
                for row in rows {
                    self.swap_rows(row, row | bit(target));
                }
            }
            Gate::H(q) => {
                let rows: Vec<usize> = self.rows_with_bit(q, false).collect();
                for r0 in rows {
                    let r1 = r0 | bit(q);
                    for col in 0..self.dim {
                        let a = self.mat[r0 * self.dim + col];
                        let b = self.mat[r1 * self.dim + col];
                        self.mat[r0 * self.dim + col] = (a + b) * FRAC_1_SQRT_2;
                        self.mat[r1 * self.dim + col] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
        }
    }

    /// Largest entrywise |difference| against `other`.
    pub fn max_abs_diff(&self, other: &DenseUnitary) -> Result<f64, OracleError> {
        if self.n_qubits != other.n_qubits {
            return Err(OracleError::QubitCountMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(self
            .mat
            .iter()
            .zip(&other.mat)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `self * other` (so: `other` happens first).
    pub fn matmul(&self, other: &DenseUnitary) -> Result<DenseUnitary, OracleError> {
        if self.n_qubits != other.n_qubits {
            return Err(OracleError::QubitCountMismatch(self.n_qubits, other.n_qubits));
        }
        let dim = self.dim;
        let mut mat = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.mat[r * dim + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..dim {
                    mat[r * dim + c] += a * other.mat[k * dim + c];
                }
            }
        }
        Ok(DenseUnitary {
            n_qubits: self.n_qubits,
            dim,
            mat,
        })
    }

    /// Largest entrywise distance of U U-dagger from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim;
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::ZERO;
                for k in 0..dim {
                    acc += self.mat[r * dim + k] * self.mat[c * dim + k].conj();
                }
                let expect = if r == c { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }

    fn rows_with_bit(&self, q: u32, set: bool) -> impl Iterator<Item = usize> {
        let b = bit(q);
        (0..self.dim).filter(move |r| (r & b != 0) == set)
    }

    fn row_mut(&mut self, row: usize) -> &mut [Complex64] {
        &mut self.mat[row * self.dim..(row + 1) * self.dim]
    }

    fn swap_rows(&mut self, r0: usize, r1: usize) {
        debug_assert!(r0 < r1);
        let (head, tail) = self.mat.split_at_mut(r1 * self.dim);
        head[r0 * self.dim..(r0 + 1) * self.dim].swap_with_slice(&mut tail[..self.dim]);
    }
}

fn bit(q: u32) -> usize {
    1usize << q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::qasm::{parse_with, ParseOptions};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn single(n: u32, gate: Gate) -> DenseUnitary {
        DenseUnitary::from_circuit(&Circuit::from_gates(n, [gate])).unwrap()
    }

    fn assert_close(u: &DenseUnitary, v: &DenseUnitary) {
        assert!(u.max_abs_diff(v).unwrap() < 1e-12);
    }

    #[test]
    fn t_gate_is_a_phase_on_the_one_state() {
        let u = single(1, Gate::Rz(0, Angle::exact(1, 4)));
        assert_eq!(u.get(0, 0), Complex64::ONE);
        assert_eq!(u.get(0, 1), Complex64::ZERO);
        assert_eq!(u.get(1, 0), Complex64::ZERO);
        assert!((u.get(1, 1) - Complex64::cis(FRAC_PI_4)).norm() < 1e-15);
    }

    #[test]
    fn rz_phases_follow_the_rotated_bit() {
        // On 2 qubits, Rz on qubit 1 phases exactly the states with bit 1 set.
        let u = single(2, Gate::Rz(1, Angle::approx(0.7)));
        for x in 0..4usize {
            let expect = if x & 2 != 0 {
                Complex64::cis(0.7)
            } else {
                Complex64::ONE
            };
            assert!((u.get(x, x) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn x_and_cx_are_the_right_permutations() {
        let u = single(2, Gate::X(0));
        for x in 0..4usize {
            assert_eq!(u.get(x ^ 1, x), Complex64::ONE);
        }
        let u = single(2, Gate::Cx { control: 0, target: 1 });
        for x in 0..4usize {
            let y = if x & 1 != 0 { x ^ 2 } else { x };
            assert_eq!(u.get(y, x), Complex64::ONE);
        }
    }

    #[test]
    fn h_x_cx_square_to_identity() {
        let id = DenseUnitary::identity(2).unwrap();
        for gate in [
            Gate::H(1),
            Gate::X(0),
            Gate::Cx { control: 1, target: 0 },
        ] {
            let u = DenseUnitary::from_circuit(&Circuit::from_gates(2, [gate, gate])).unwrap();
            assert_close(&u, &id);
        }
    }

    #[test]
    fn hzh_is_x() {
        let hzh = DenseUnitary::from_circuit(&Circuit::from_gates(
            1,
            [Gate::H(0), Gate::Rz(0, Angle::exact(1, 1)), Gate::H(0)],
        ))
        .unwrap();
        assert_close(&hzh, &single(1, Gate::X(0)));
    }

    #[test]
    fn decomposed_toffoli_matches_the_permutation() {
        let c = parse_with(
            "OPENQASM 2.0; qreg q[3]; ccx q[0],q[1],q[2];",
            ParseOptions { decompose_ccx: true },
        )
        .unwrap();
        let u = DenseUnitary::from_circuit(&c).unwrap();
        for x in 0..8usize {
            let y = if x & 3 == 3 { x ^ 4 } else { x };
            for r in 0..8usize {
                let expect = if r == y { Complex64::ONE } else { Complex64::ZERO };
                assert!(
                    (u.get(r, x) - expect).norm() < 1e-12,
                    "entry ({r},{x}) = {}",
                    u.get(r, x)
                );
            }
        }
    }

    #[test]
    fn qubit_cap_is_enforced() {
        assert!(matches!(
            DenseUnitary::identity(11),
            Err(OracleError::TooManyQubits(11))
        ));
        assert!(matches!(
            DenseUnitary::identity(2)
                .unwrap()
                .max_abs_diff(&DenseUnitary::identity(3).unwrap()),
            Err(OracleError::QubitCountMismatch(2, 3))
        ));
    }

    fn arb_gates(n: u32, len: usize) -> impl Strategy<Value = Vec<Gate>> {
        let gate = prop_oneof![
            (0..n).prop_map(Gate::H),
            (0..n).prop_map(Gate::X),
            (0..n, -8i64..8).prop_map(|(q, num)| Gate::Rz(q, Angle::exact(num, 4))),
            (0..n, 0.0..std::f64::consts::TAU).prop_map(|(q, r)| Gate::Rz(q, Angle::approx(r))),
            (0..n, 0..n).prop_filter_map("distinct", |(c, t)| {
                (c != t).then_some(Gate::Cx { control: c, target: t })
            }),
        ];
        proptest::collection::vec(gate, 0..len)
    }

    proptest! {
        #[test]
        fn circuits_build_unitary_matrices(gates in arb_gates(3, 16)) {
            let u = DenseUnitary::from_circuit(&Circuit::from_gates(3, gates)).unwrap();
            prop_assert!(u.unitarity_defect() < 1e-10);
        }

        /// Splitting a circuit anywhere and multiplying the halves in
        /// reverse order reproduces the whole.
        #[test]
        fn concatenation_is_matrix_product(
            gates in arb_gates(3, 16),
            split in 0usize..17,
        ) {
            let split = split.min(gates.len());
            let whole = DenseUnitary::from_circuit(&Circuit::from_gates(3, gates.clone())).unwrap();
            let first =
                DenseUnitary::from_circuit(&Circuit::from_gates(3, gates[..split].to_vec()))
                    .unwrap();
            let second =
                DenseUnitary::from_circuit(&Circuit::from_gates(3, gates[split..].to_vec()))
                    .unwrap();
            let product = second.matmul(&first).unwrap();
            prop_assert!(product.max_abs_diff(&whole).unwrap() < 1e-10);
        }
    }
}
