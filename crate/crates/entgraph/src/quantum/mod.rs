//! Dense state vectors, reduced density matrices, and the entanglement
//! measures built on them (Wootters concurrence, qubit-vs-rest tangle).

pub mod density;
pub mod eigen;
pub mod state;

pub use density::{
    ckw_rows, concurrence_matrix, partial_trace_pair, tangle_with_rest, wootters_concurrence,
    xstate_concurrence, CkwRow, TwoQubitDensity, XStateParams,
};
pub use eigen::{hermitian_eigenvalues, SmallMatrix, MAX_EIGEN_DIM};
pub use state::{qubit_mask, StateVector, MAX_QUBITS};
