//! Exact symbolic wire values.
//!
//! Over the gate set {H, X, CX, Rz}, the value on each wire is always an XOR
//! of free variables plus an optional constant 1: initial wire contents are
//! variables, H outputs are new variables, X flips the constant, and CX xors
//! whole expressions. Tracking these parities exactly gives a slow but
//! unconditionally correct reference for the randomized signatures.

use crate::circuit::Gate;
use std::collections::BTreeSet;

/// An XOR-of-variables expression: `constant ^ (xor of vars)`.
///
/// Variables are numbered; which number means what is up to the state that
/// issued them (see [`SymbolicState`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Parity {
    constant: bool,
    vars: BTreeSet<u32>,
}

impl Parity {
    /// The single variable `l`.
    pub fn var(l: u32) -> Parity {
        Parity {
            constant: false,
            vars: BTreeSet::from([l]),
        }
    }

    /// The constant-zero expression.
    pub fn zero() -> Parity {
        Parity {
            constant: false,
            vars: BTreeSet::new(),
        }
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.vars.iter().copied()
    }

    fn flip_constant(&mut self) {
        self.constant = !self.constant;
    }

    fn xor_assign(&mut self, other: &Parity) {
        self.constant ^= other.constant;
        for &v in &other.vars {
            if !self.vars.remove(&v) {
                self.vars.insert(v);
            }
        }
    }

    /// Evaluate under concrete per-variable bitstrings, with the constant 1
    /// mapping to `mask` (all ones at the working width). This is exactly how
    /// the randomized analysis hashes an expression, so evaluating here must
    /// reproduce its signatures bit for bit.
    pub fn evaluate(&self, draws: &[u128], mask: u128) -> u128 {
        let mut acc = if self.constant { mask } else { 0 };
        for &v in &self.vars {
            acc ^= draws[v as usize];
        }
        acc
    }
}

/// Exact counterpart of the randomized signature map: one [`Parity`] per
/// wire. Variables 0..n are the initial wire contents; each H consumes the
/// next number, in scan order, matching the randomized draw order.
#[derive(Clone, Debug)]
pub struct SymbolicState {
    values: Vec<Parity>,
    next_var: u32,
}

impl SymbolicState {
    pub fn new(n_qubits: u32) -> SymbolicState {
        SymbolicState {
            values: (0..n_qubits).map(Parity::var).collect(),
            next_var: n_qubits,
        }
    }

    /// The expression currently on wire `q`.
    pub fn value(&self, q: u32) -> &Parity {
        &self.values[q as usize]
    }

    /// Number of variables issued so far (initial wires plus H outputs).
    pub fn vars_issued(&self) -> u32 {
        self.next_var
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::H(q) => {
                self.values[q as usize] = Parity::var(self.next_var);
                self.next_var += 1;
            }
            Gate::X(q) => self.values[q as usize].flip_constant(),
            Gate::Cx { control, target } => {
                let c = self.values[control as usize].clone();
                self.values[target as usize].xor_assign(&c);
            }
            Gate::Rz(..) => {}
        }
    }
}
