//! Per-run statistics in the frozen CSV layout.

use std::fmt;

/// Column order is frozen for scripting stability.
pub const CSV_HEADER: &str =
    "name,n_qubits,gates_in,t_in,gates_out,t_out,merges,wall_time_ns,seed,width";

#[derive(Debug, Clone)]
pub struct StatsRecord {
    pub name: String,
    pub n_qubits: u32,
    pub gates_in: usize,
    pub t_in: usize,
    pub gates_out: usize,
    pub t_out: usize,
    pub merges: usize,
    /// Time spent in cancel+fold only; parsing, generation and I/O are
    /// never on this clock.
    pub wall_time_ns: u128,
    pub seed: u64,
    pub width: u32,
}

impl StatsRecord {
    pub fn csv_row(&self) -> String {
        debug_assert!(self.t_out <= self.t_in, "optimization must not add T gates");
        debug_assert!(self.gates_out <= self.gates_in, "optimization must not add gates");
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.name,
            self.n_qubits,
            self.gates_in,
            self.t_in,
            self.gates_out,
            self.t_out,
            self.merges,
            self.wall_time_ns,
            self.seed,
            self.width
        )
    }
}

impl fmt::Display for StatsRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\n{}", CSV_HEADER, self.csv_row())
    }
}
