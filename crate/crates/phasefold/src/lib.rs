//! Phase folding for Clifford+T circuits.
//!
//! The optimizer tracks, for every qubit, a k-bit hash of the symbolic
//! basis-state expression on that wire. Two Z-rotations whose hashes collide
//! act on provably equal values (up to a 2^-k false-merge probability), so
//! their angles can be summed into one gate. A single forward scan with a
//! hash table does this in O(n + m) time.

pub mod abs;
pub mod angle;
pub mod cancel;
pub mod circuit;
pub mod fold;
pub mod generate;
pub mod oracle;
pub mod qasm;

pub use abs::AbstractState;
pub use angle::{Angle, TClass, ANGLE_TOLERANCE};
pub use cancel::cancel_adjacent;
pub use circuit::{Circuit, CircuitError, CircuitStats, Gate, GateHandle};
pub use fold::{fold, fold_traced, fold_with_state, required_width, FoldReport, WidthBound};
pub use oracle::OracleError;
pub use qasm::{ParseError, ParseErrorKind, ParseOptions};
