//! Dense gate-level simulation of the circuits in `circuit`, plus the
//! diagnostics used to check them: target fidelity, ancilla purity, and a
//! first-deviation probe against the intended mid-circuit state.

// The marginal loops index row and column positions that also feed basis
// arithmetic; iterator forms hide the pairing.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use crate::ansatz::AnsatzParams;
use crate::circuit::{a_gate_matrix, Circuit, Gate, Stage, ANCILLA_COUNT};
use crate::error::{Error, Result};
use crate::quantum::state::StateVector;

/// |0..0> on the graph qubits, ancillas in |100>: the input both circuit
/// modes are defined on.
pub fn canonical_initial_state(n: usize) -> Result<StateVector> {
    StateVector::basis(n + ANCILLA_COUNT, 0b100)
}

/// The state a correct preparation ends in: target (x) |100>.
pub fn target_with_ancilla(params: &AnsatzParams) -> Result<StateVector> {
    let anc = StateVector::basis(ANCILLA_COUNT, 0b100)?;
    params.build_state()?.tensor(&anc)
}

/// The state the pair-transfer stage is meant to leave behind: every
/// pair's flip states carry gamma_ij with ancillas |000>, the residual
/// |0..0> + |1..1> carries alpha with ancillas |100>.
pub fn intended_transfer_state(params: &AnsatzParams) -> Result<StateVector> {
    let n = params.qubit_count();
    let q = n + ANCILLA_COUNT;
    let full = (1usize << n) - 1;
    let mut amps = vec![Complex64::ZERO; 1usize << q];
    let place = |graph_idx: usize, anc: usize| (graph_idx << ANCILLA_COUNT) | anc;
    amps[place(0, 0b100)] += params.alpha();
    amps[place(full, 0b100)] += params.alpha();
    for (i, j) in params.pairs() {
        let g = params.gamma(i, j);
        if g == 0.0 {
            continue;
        }
        let flips = (1usize << (n - 1 - i)) | (1usize << (n - 1 - j));
        amps[place(flips, 0b000)] += g;
        amps[place(full ^ flips, 0b000)] += g;
    }
    StateVector::from_unnormalized(q, amps)
}

/// Apply one gate in place.
pub fn apply_gate(state: &mut StateVector, gate: &Gate) -> Result<()> {
    let q = state.qubits();
    let dim = state.len();
    let mask = |k: usize| -> Result<usize> {
        if k >= q {
            return Err(Error::Domain(format!(
                "gate touches qubit {k} outside register of {q}"
            )));
        }
        Ok(1usize << (q - 1 - k))
    };
    match *gate {
        Gate::H { q: k } => {
            let m = mask(k)?;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for idx in 0..dim {
                if idx & m == 0 {
                    let amps = state.amplitudes_mut();
                    let a0 = amps[idx];
                    let a1 = amps[idx | m];
                    amps[idx] = (a0 + a1) * s;
                    amps[idx | m] = (a0 - a1) * s;
                }
            }
        }
        Gate::X { q: k } => {
            let m = mask(k)?;
            for idx in 0..dim {
                if idx & m == 0 {
                    state.amplitudes_mut().swap(idx, idx | m);
                }
            }
        }
        Gate::Cnot { control, target } => {
            let mc = mask(control)?;
            let mt = mask(target)?;
            for idx in 0..dim {
                if idx & mc != 0 && idx & mt == 0 {
                    state.amplitudes_mut().swap(idx, idx | mt);
                }
            }
        }
        Gate::Toffoli { c1, c2, target } => {
            let m1 = mask(c1)?;
            let m2 = mask(c2)?;
            let mt = mask(target)?;
            for idx in 0..dim {
                if idx & m1 != 0 && idx & m2 != 0 && idx & mt == 0 {
                    state.amplitudes_mut().swap(idx, idx | mt);
                }
            }
        }
        Gate::Cmsz { control, target } => {
            let mc = mask(control)?;
            let mt = mask(target)?;
            for idx in 0..dim {
                if idx & mc != 0 && idx & mt == 0 {
                    let amps = state.amplitudes_mut();
                    amps[idx] = -amps[idx];
                }
            }
        }
        Gate::Cr {
            amp,
            control,
            t1,
            t2,
        } => {
            if !(0.0..=1.0).contains(&amp) {
                return Err(Error::Domain(format!(
                    "pair-rotation amplitude {amp} outside [0, 1]"
                )));
            }
            let mc = mask(control)?;
            let m1 = mask(t1)?;
            let m2 = mask(t2)?;
            let c = (1.0 - amp * amp).sqrt();
            for idx in 0..dim {
                if idx & mc != 0 && idx & m1 == 0 && idx & m2 == 0 {
                    let hi = idx | m1 | m2;
                    let amps = state.amplitudes_mut();
                    let a00 = amps[idx];
                    let a11 = amps[hi];
                    amps[idx] = c * a00 + amp * a11;
                    amps[hi] = -amp * a00 + c * a11;
                }
            }
        }
        Gate::Ca { control, t1, t2 } => {
            apply_pair_matrix(state, control, t1, t2, &a_gate_matrix())?;
        }
        Gate::CaInv { control, t1, t2 } => {
            let a = a_gate_matrix();
            let mut inv = [[0.0f64; 4]; 4];
            for (r, row) in inv.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = a[c][r];
                }
            }
            apply_pair_matrix(state, control, t1, t2, &inv)?;
        }
        Gate::Tlr { theta, a, b } => {
            if a >= dim || b >= dim {
                return Err(Error::Domain(format!(
                    "two-level rotation addresses index outside dimension {dim}"
                )));
            }
            let (s, c) = theta.sin_cos();
            let amps = state.amplitudes_mut();
            let va = amps[a];
            let vb = amps[b];
            amps[a] = c * va - s * vb;
            amps[b] = s * va + c * vb;
        }
    }
    Ok(())
}

/// Controlled 4x4 real matrix on the (t1, t2) pair, basis |t1 t2> in
/// {00, 01, 10, 11}, applied where the control is |1>.
fn apply_pair_matrix(
    state: &mut StateVector,
    control: usize,
    t1: usize,
    t2: usize,
    m: &[[f64; 4]; 4],
) -> Result<()> {
    let q = state.qubits();
    for k in [control, t1, t2] {
        if k >= q {
            return Err(Error::Domain(format!(
                "gate touches qubit {k} outside register of {q}"
            )));
        }
    }
    let mc = 1usize << (q - 1 - control);
    let m1 = 1usize << (q - 1 - t1);
    let m2 = 1usize << (q - 1 - t2);
    for idx in 0..state.len() {
        if idx & mc != 0 && idx & m1 == 0 && idx & m2 == 0 {
            let ids = [idx, idx | m2, idx | m1, idx | m1 | m2];
            let amps = state.amplitudes_mut();
            let v = [amps[ids[0]], amps[ids[1]], amps[ids[2]], amps[ids[3]]];
            for r in 0..4 {
                let mut acc = Complex64::ZERO;
                for (c, vc) in v.iter().enumerate() {
                    acc += m[r][c] * vc;
                }
                amps[ids[r]] = acc;
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SimResult {
    pub final_state: StateVector,
    /// State at the end of each stage span, in execution order.
    pub snapshots: Vec<(Stage, StateVector)>,
}

/// Run a circuit on an initial state, snapshotting at stage boundaries.
pub fn run(circuit: &Circuit, initial: &StateVector) -> Result<SimResult> {
    if initial.qubits() != circuit.total_qubits() {
        return Err(Error::Domain(format!(
            "initial state has {} qubits, circuit needs {}",
            initial.qubits(),
            circuit.total_qubits()
        )));
    }
    let mut state = initial.clone();
    let mut snapshots = Vec::new();
    for (stage, start, end) in circuit.stage_spans() {
        for gate in &circuit.ops()[start..end] {
            apply_gate(&mut state, gate)?;
        }
        snapshots.push((stage, state.clone()));
    }
    Ok(SimResult {
        final_state: state,
        snapshots,
    })
}

/// Frobenius distance of the 8-dimensional ancilla marginal from the
/// projector onto |100>: 0 means the ancillas detached perfectly.
pub fn ancilla_product_error(state: &StateVector) -> Result<f64> {
    let q = state.qubits();
    if q <= ANCILLA_COUNT {
        return Err(Error::Domain(format!(
            "register of {q} qubits has no graph part"
        )));
    }
    let anc_dim = 1usize << ANCILLA_COUNT;
    let graph_dim = 1usize << (q - ANCILLA_COUNT);
    let mut rho = [[Complex64::ZERO; 8]; 8];
    for g in 0..graph_dim {
        let base = g << ANCILLA_COUNT;
        for a in 0..anc_dim {
            let va = state.amplitude(base | a);
            if va == Complex64::ZERO {
                continue;
            }
            for b in 0..anc_dim {
                rho[a][b] += va * state.amplitude(base | b).conj();
            }
        }
    }
    let mut err2 = 0.0f64;
    for a in 0..anc_dim {
        for b in 0..anc_dim {
            let want = if a == 0b100 && b == 0b100 {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            err2 += (rho[a][b] - want).norm_sqr();
        }
    }
    Ok(err2.sqrt())
}

/// Lowest basis index where two states' amplitudes differ beyond `tol`,
/// with both amplitudes. None means the states agree everywhere.
pub fn first_deviation(
    actual: &StateVector,
    expected: &StateVector,
    tol: f64,
) -> Result<Option<(usize, Complex64, Complex64)>> {
    if actual.qubits() != expected.qubits() {
        return Err(Error::Domain(format!(
            "register mismatch: {} vs {} qubits",
            actual.qubits(),
            expected.qubits()
        )));
    }
    for idx in 0..actual.len() {
        let a = actual.amplitude(idx);
        let e = expected.amplitude(idx);
        if (a - e).norm() > tol {
            return Ok(Some((idx, a, e)));
        }
    }
    Ok(None)
}

/// Number of cyclically adjacent qubit pairs (i, i+1 mod n) whose bits
/// differ in an n-qubit basis pattern. The family's pair-flip patterns
/// score 2 when the flipped pair is cyclically adjacent, else 4; this is
/// the boundary count the ancilla-detach stages rely on.
pub fn cyclic_mismatch_count(n: usize, graph_pattern: usize) -> usize {
    (0..n)
        .filter(|&i| {
            let bi = (graph_pattern >> (n - 1 - i)) & 1;
            let bj = (graph_pattern >> (n - 1 - (i + 1) % n)) & 1;
            bi != bj
        })
        .count()
}
