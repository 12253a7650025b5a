use crate::solver::IterationTrace;

/// Crate-wide error type. Every fallible public operation returns this.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A text format violated its grammar. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Weight-profile validity condition alpha >= 2*gamma_max*sqrt(n-2)
    /// violated; `slack` is the (negative) margin alpha - 2*gamma_max*sqrt(n-2).
    #[error("validity condition violated (slack {slack:.3e})")]
    Validity { slack: f64 },

    /// An edge update was asked to move a concurrence upward:
    /// target exceeds the currently achieved value beyond tolerance.
    #[error("monotonicity violated on edge ({i},{j}): target {target} > current {current}")]
    Monotonicity {
        i: usize,
        j: usize,
        current: f64,
        target: f64,
    },

    /// A graph's targets cannot all be realized (bound violations).
    #[error("infeasible targets: {0}")]
    Infeasible(String),

    /// Numerical invariant broken beyond tolerance (lost positivity,
    /// negative radicand, non-finite value).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Solver exhausted its sweep budget. Carries the full trace.
    #[error("no convergence after {sweeps} sweeps (residual {residual:.3e})")]
    NonConvergence {
        sweeps: usize,
        residual: f64,
        trace: Box<IterationTrace>,
    },

    /// Register too large for dense simulation.
    #[error("register of {qubits} qubits exceeds the dense limit of {max}")]
    Capacity { qubits: usize, max: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
