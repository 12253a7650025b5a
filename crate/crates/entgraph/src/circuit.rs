//! Gate networks preparing the family's states.
//!
//! Register layout: n graph qubits 0..n-1, then three ancillas at
//! n, n+1, n+2. The canonical input is |0..0>_graph (x) |100>_ancilla.
//!
//! Two builders:
//!
//! * `build_literal`: a faithful rendering of the published four-stage
//!   transfer network (pair-transfer rotations gated by the first ancilla,
//!   then a boundary-counting detach of the ancillas). Its stage shapes
//!   and gate counts are exact; its output state is NOT guaranteed to be
//!   the target (the pair-transfer bookkeeping misplaces amplitude, see
//!   the simulator's first-deviation diagnostic), so fidelity is reported
//!   rather than promised.
//! * `build_corrected`: a chain of two-level rotations that provably maps
//!   the canonical input onto the target state (x) |100>, one rotation per
//!   nonzero amplitude beyond the first.

use std::fmt;

use crate::ansatz::{AnsatzParams, SUPPORT_CUTOFF};
use crate::error::{Error, Result};

/// Ancillas appended after the graph qubits.
pub const ANCILLA_COUNT: usize = 3;

/// Entries of the two-target ancilla rotation: k+ = sqrt(1 + 1/sqrt2)/2,
/// k- = sqrt(1 - 1/sqrt2)/2. The matrix is orthogonal and its square
/// permutes the four basis states up to sign.
pub const A_KP: f64 = 0.6532814824381883;
pub const A_KM: f64 = 0.2705980500730985;

/// The 4x4 orthogonal matrix applied to the ancilla pair when the control
/// qubit is |1>, rows and columns ordered |00>, |01>, |10>, |11>.
pub fn a_gate_matrix() -> [[f64; 4]; 4] {
    [
        [A_KP, A_KM, A_KP, -A_KM],
        [-A_KP, A_KP, A_KM, -A_KM],
        [-A_KM, -A_KM, A_KP, A_KP],
        [A_KM, A_KP, -A_KM, A_KP],
    ]
}

/// The square of `a_gate_matrix`, exactly a signed permutation:
/// |00> -> -|01>, |01> -> |11>, |10> -> |00>, |11> -> |10>.
pub fn a_squared_matrix() -> [[f64; 4]; 4] {
    [
        [0.0, 0.0, 1.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 0.0, 0.0],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// Hadamard on one qubit.
    H { q: usize },
    /// Pauli X on one qubit.
    X { q: usize },
    /// Controlled NOT.
    Cnot { control: usize, target: usize },
    /// Doubly controlled NOT.
    Toffoli { c1: usize, c2: usize, target: usize },
    /// Controlled minus-sigma-z: when control is |1>, the target picks up
    /// a sign on |0> (|0> -> -|0>, |1> -> |1>).
    Cmsz { control: usize, target: usize },
    /// Controlled pair rotation: when control is |1>, the two targets mix
    /// within their {|00>, |11>} subspace,
    /// |00> -> sqrt(1-amp^2)|00> - amp|11>, |11> -> amp|00> + sqrt(1-amp^2)|11>.
    Cr {
        amp: f64,
        control: usize,
        t1: usize,
        t2: usize,
    },
    /// Controlled ancilla-pair rotation by `a_gate_matrix`.
    Ca { control: usize, t1: usize, t2: usize },
    /// Controlled inverse ancilla-pair rotation (transpose of `Ca`).
    CaInv { control: usize, t1: usize, t2: usize },
    /// Two-level rotation in the span of basis states `a` and `b`:
    /// |a> -> cos(theta)|a> + sin(theta)|b>,
    /// |b> -> -sin(theta)|a> + cos(theta)|b>.
    Tlr { theta: f64, a: usize, b: usize },
}

impl Gate {
    /// Highest qubit index the gate touches (for register checks); for
    /// `Tlr` the operands are basis-state indices, not qubits, so the
    /// check happens against the amplitude space instead.
    fn max_qubit(&self) -> Option<usize> {
        match *self {
            Gate::H { q } | Gate::X { q } => Some(q),
            Gate::Cnot { control, target } | Gate::Cmsz { control, target } => {
                Some(control.max(target))
            }
            Gate::Toffoli { c1, c2, target } => Some(c1.max(c2).max(target)),
            Gate::Cr {
                control, t1, t2, ..
            } => Some(control.max(t1).max(t2)),
            Gate::Ca { control, t1, t2 } | Gate::CaInv { control, t1, t2 } => {
                Some(control.max(t1).max(t2))
            }
            Gate::Tlr { .. } => None,
        }
    }

    fn distinct_operands(&self) -> bool {
        match *self {
            Gate::H { .. } | Gate::X { .. } => true,
            Gate::Cnot { control, target } | Gate::Cmsz { control, target } => control != target,
            Gate::Toffoli { c1, c2, target } => c1 != c2 && c1 != target && c2 != target,
            Gate::Cr {
                control, t1, t2, ..
            }
            | Gate::Ca { control, t1, t2 }
            | Gate::CaInv { control, t1, t2 } => control != t1 && control != t2 && t1 != t2,
            Gate::Tlr { a, b, .. } => a != b,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H { q } => write!(f, "H {q}"),
            Gate::X { q } => write!(f, "X {q}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Toffoli { c1, c2, target } => write!(f, "TOFFOLI {c1} {c2} {target}"),
            Gate::Cmsz { control, target } => write!(f, "CMSZ {control} {target}"),
            Gate::Cr {
                amp,
                control,
                t1,
                t2,
            } => write!(f, "CR {amp} {control} {t1} {t2}"),
            Gate::Ca { control, t1, t2 } => write!(f, "CA {control} {t1} {t2}"),
            Gate::CaInv { control, t1, t2 } => write!(f, "CAINV {control} {t1} {t2}"),
            Gate::Tlr { theta, a, b } => write!(f, "TLR {theta} {a} {b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitMode {
    /// The published transfer network, rendered as written.
    Literal,
    /// The rotation chain that provably prepares the state.
    Corrected,
}

impl fmt::Display for CircuitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitMode::Literal => write!(f, "literal"),
            CircuitMode::Corrected => write!(f, "corrected"),
        }
    }
}

/// Stages of the literal network, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Build (|1..1> - |0..0>)/sqrt2 on the graph register.
    Prologue,
    /// Move amplitude onto each pair's flip states, gated by ancilla 1.
    PairTransfer,
    /// Boundary-count each branch into ancillas 2,3 and flip ancilla 1 off it.
    DetachFirstAncilla,
    /// Undo the boundary counting.
    DetachAncillaPair,
    /// Whole-register rotation chain (corrected mode's single stage).
    StatePrep,
}

impl Stage {
    pub fn label(&self) -> &'static str {
        match self {
            Stage::Prologue => "prologue",
            Stage::PairTransfer => "pair-transfer",
            Stage::DetachFirstAncilla => "detach-first-ancilla",
            Stage::DetachAncillaPair => "detach-ancilla-pair",
            Stage::StatePrep => "state-prep",
        }
    }
}

/// A gate list over n graph qubits plus three ancillas, with stage
/// boundaries for diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    mode: CircuitMode,
    ops: Vec<Gate>,
    /// (stage, index of its first op); stages appear in execution order.
    stages: Vec<(Stage, usize)>,
}

impl Circuit {
    pub fn from_parts(
        n: usize,
        mode: CircuitMode,
        ops: Vec<Gate>,
        stages: Vec<(Stage, usize)>,
    ) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("circuit needs at least one graph qubit".into()));
        }
        let qubits = n + ANCILLA_COUNT;
        let dim = 1usize
            .checked_shl(qubits as u32)
            .ok_or(Error::Capacity { qubits, max: 64 })?;
        for (k, g) in ops.iter().enumerate() {
            if !g.distinct_operands() {
                return Err(Error::Domain(format!("op {k} `{g}` repeats an operand")));
            }
            if let Some(q) = g.max_qubit() {
                if q >= qubits {
                    return Err(Error::Domain(format!(
                        "op {k} `{g}` touches qubit {q} outside register of {qubits}"
                    )));
                }
            }
            match (mode, g) {
                (CircuitMode::Literal, Gate::Tlr { .. }) => {
                    return Err(Error::Domain(format!(
                        "op {k}: two-level rotations do not belong to a literal circuit"
                    )));
                }
                (CircuitMode::Corrected, Gate::Tlr { a, b, .. }) => {
                    if *a >= dim || *b >= dim {
                        return Err(Error::Domain(format!(
                            "op {k} `{g}` addresses a basis state outside dimension {dim}"
                        )));
                    }
                }
                (CircuitMode::Corrected, _) => {
                    return Err(Error::Domain(format!(
                        "op {k} `{g}`: a corrected circuit holds only two-level rotations"
                    )));
                }
                (CircuitMode::Literal, _) => {}
            }
        }
        let mut last = 0usize;
        for &(_, start) in &stages {
            if start > ops.len() || start < last {
                return Err(Error::Domain("stage boundaries out of order".into()));
            }
            last = start;
        }
        Ok(Self {
            n,
            mode,
            ops,
            stages,
        })
    }

    pub fn graph_qubits(&self) -> usize {
        self.n
    }

    pub fn total_qubits(&self) -> usize {
        self.n + ANCILLA_COUNT
    }

    pub fn mode(&self) -> CircuitMode {
        self.mode
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Stage spans as (stage, start, end).
    pub fn stage_spans(&self) -> Vec<(Stage, usize, usize)> {
        let mut spans = Vec::with_capacity(self.stages.len());
        for (k, &(stage, start)) in self.stages.iter().enumerate() {
            let end = self
                .stages
                .get(k + 1)
                .map(|&(_, s)| s)
                .unwrap_or(self.ops.len());
            spans.push((stage, start, end));
        }
        spans
    }

    pub fn stage_op_count(&self, stage: Stage) -> usize {
        self.stage_spans()
            .iter()
            .filter(|&&(s, _, _)| s == stage)
            .map(|&(_, a, b)| b - a)
            .sum()
    }

    /// Serialize to the circuit text format: `qubits <total>`, `mode <m>`,
    /// one op per line.
    pub fn serialize(&self) -> String {
        let mut out = format!("qubits {}\nmode {}\n", self.total_qubits(), self.mode);
        for g in &self.ops {
            out.push_str(&format!("{g}\n"));
        }
        out
    }

    /// Parse the circuit text format. Stage boundaries are reconstructed
    /// when the op list matches a builder layout, else the whole list is
    /// one stage.
    pub fn parse(text: &str) -> Result<Self> {
        let mut qubits: Option<usize> = None;
        let mut mode: Option<CircuitMode> = None;
        let mut ops: Vec<Gate> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |message: String| Error::Parse {
                line: lineno,
                message,
            };
            let op_err = |g: &str| parse_err(format!("malformed `{g}` op"));
            let idx = |s: &str| -> Result<usize> {
                s.parse()
                    .map_err(|_| parse_err(format!("bad operand `{s}`")))
            };
            let ang = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| parse_err(format!("bad angle `{s}`")))
            };
            match (qubits.is_some(), mode.is_some(), fields[0]) {
                (false, _, "qubits") if fields.len() == 2 => {
                    qubits = Some(idx(fields[1])?);
                }
                (false, _, _) => return Err(parse_err("expected header `qubits <n>`".into())),
                (true, false, "mode") if fields.len() == 2 => {
                    mode = Some(match fields[1] {
                        "literal" => CircuitMode::Literal,
                        "corrected" => CircuitMode::Corrected,
                        other => {
                            return Err(parse_err(format!("unknown mode `{other}`")));
                        }
                    });
                }
                (true, false, _) => {
                    return Err(parse_err("expected `mode literal|corrected`".into()))
                }
                (true, true, op) => {
                    let gate = match (op, fields.len()) {
                        ("H", 2) => Gate::H { q: idx(fields[1])? },
                        ("X", 2) => Gate::X { q: idx(fields[1])? },
                        ("CNOT", 3) => Gate::Cnot {
                            control: idx(fields[1])?,
                            target: idx(fields[2])?,
                        },
                        ("TOFFOLI", 4) => Gate::Toffoli {
                            c1: idx(fields[1])?,
                            c2: idx(fields[2])?,
                            target: idx(fields[3])?,
                        },
                        ("CMSZ", 3) => Gate::Cmsz {
                            control: idx(fields[1])?,
                            target: idx(fields[2])?,
                        },
                        ("CR", 5) => Gate::Cr {
                            amp: ang(fields[1])?,
                            control: idx(fields[2])?,
                            t1: idx(fields[3])?,
                            t2: idx(fields[4])?,
                        },
                        ("CA", 4) => Gate::Ca {
                            control: idx(fields[1])?,
                            t1: idx(fields[2])?,
                            t2: idx(fields[3])?,
                        },
                        ("CAINV", 4) => Gate::CaInv {
                            control: idx(fields[1])?,
                            t1: idx(fields[2])?,
                            t2: idx(fields[3])?,
                        },
                        ("TLR", 4) => Gate::Tlr {
                            theta: ang(fields[1])?,
                            a: idx(fields[2])?,
                            b: idx(fields[3])?,
                        },
                        (other, _) => {
                            return Err(op_err(other));
                        }
                    };
                    ops.push(gate);
                }
            }
        }
        let qubits = qubits.ok_or(Error::Parse {
            line: 1,
            message: "missing `qubits` header".into(),
        })?;
        let mode = mode.ok_or(Error::Parse {
            line: 1,
            message: "missing `mode` line".into(),
        })?;
        if qubits <= ANCILLA_COUNT {
            return Err(Error::Parse {
                line: 1,
                message: format!("register of {qubits} qubits leaves no graph qubits"),
            });
        }
        let n = qubits - ANCILLA_COUNT;
        let stages = reconstruct_stages(n, mode, &ops);
        Self::from_parts(n, mode, ops, stages).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })
    }

    /// Tally of ops per gate kind, for count reports.
    pub fn gate_tally(&self) -> Vec<(&'static str, usize)> {
        let mut names = [
            ("H", 0usize),
            ("X", 0),
            ("CNOT", 0),
            ("TOFFOLI", 0),
            ("CMSZ", 0),
            ("CR", 0),
            ("CA", 0),
            ("CAINV", 0),
            ("TLR", 0),
        ];
        for g in &self.ops {
            let slot = match g {
                Gate::H { .. } => 0,
                Gate::X { .. } => 1,
                Gate::Cnot { .. } => 2,
                Gate::Toffoli { .. } => 3,
                Gate::Cmsz { .. } => 4,
                Gate::Cr { .. } => 5,
                Gate::Ca { .. } => 6,
                Gate::CaInv { .. } => 7,
                Gate::Tlr { .. } => 8,
            };
            names[slot].1 += 1;
        }
        names.into_iter().filter(|&(_, c)| c > 0).collect()
    }
}

/// Expected literal stage op counts for n graph qubits:
/// prologue n+1, pair transfer n(n-1)+1, first detach 3n+1, second 3n.
pub fn literal_stage_counts(n: usize) -> [(Stage, usize); 4] {
    [
        (Stage::Prologue, n + 1),
        (Stage::PairTransfer, n * (n - 1) + 1),
        (Stage::DetachFirstAncilla, 3 * n + 1),
        (Stage::DetachAncillaPair, 3 * n),
    ]
}

fn reconstruct_stages(n: usize, mode: CircuitMode, ops: &[Gate]) -> Vec<(Stage, usize)> {
    match mode {
        CircuitMode::Corrected => vec![(Stage::StatePrep, 0)],
        CircuitMode::Literal => {
            let expected = literal_stage_counts(n);
            let total: usize = expected.iter().map(|&(_, c)| c).sum();
            if ops.len() == total {
                let mut stages = Vec::with_capacity(4);
                let mut at = 0;
                for (stage, count) in expected {
                    stages.push((stage, at));
                    at += count;
                }
                stages
            } else {
                vec![(Stage::PairTransfer, 0)]
            }
        }
    }
}

/// Transfer amplitudes, one per pair in the given order: the pair's
/// rotation amplitude conditioned on everything already processed,
/// alpha_ij = sqrt(2) gamma_ij / sqrt(1 - 2 sum_processed gamma^2).
/// Forward-composing the rotations reproduces the gammas exactly.
pub fn alpha_schedule(params: &AnsatzParams, order: &[(usize, usize)]) -> Result<Vec<f64>> {
    let mut seen = vec![false; crate::ansatz::pair_count(params.qubit_count())];
    let mut processed = 0.0f64;
    let mut out = Vec::with_capacity(order.len());
    for &(i, j) in order {
        let (i, j) = (i.min(j), i.max(j));
        if j >= params.qubit_count() || i == j {
            return Err(Error::Domain(format!("pair ({i},{j}) out of range")));
        }
        let p = crate::ansatz::pair_index(params.qubit_count(), i, j);
        if seen[p] {
            return Err(Error::Domain(format!("pair ({i},{j}) listed twice")));
        }
        seen[p] = true;
        let g = params.gamma(i, j);
        if g <= SUPPORT_CUTOFF {
            out.push(0.0);
            continue;
        }
        let rad = 1.0 - 2.0 * processed;
        if rad <= 0.0 {
            return Err(Error::Numeric(format!(
                "processed gammas exhaust the amplitude budget ({rad:.3e} left)"
            )));
        }
        let amp = std::f64::consts::SQRT_2 * g / rad.sqrt();
        if amp > 1.0 + 1e-12 {
            return Err(Error::Numeric(format!(
                "transfer amplitude {amp} for pair ({i},{j}) exceeds 1"
            )));
        }
        out.push(amp.min(1.0));
        processed += g * g;
    }
    Ok(out)
}

/// Lexicographic pair order used by the literal builder.
fn lex_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect()
}

/// Render the published transfer network for a parameter set.
///
/// Stages and counts (n graph qubits, ancillas a1 = n, a2 = n+1, a3 = n+2):
/// 1. prologue: H(0), CMSZ(a1, 0), CNOT(0 -> k) for k = 1..n-1;
/// 2. pair transfer: per lexicographic pair, CR(alpha_ij; a1; i, j) then
///    TOFFOLI(i, j -> a1); closing CMSZ(a1, n-1);
/// 3. first detach: per cyclic pair (i, i+1 mod n), CNOT(i -> i+1),
///    CA(i+1; a2, a3), CNOT(i -> i+1); closing CNOT(a3 -> a1);
/// 4. second detach: the same loop with CAINV and no closing op.
pub fn build_literal(params: &AnsatzParams) -> Result<Circuit> {
    let n = params.qubit_count();
    let a1 = n;
    let a2 = n + 1;
    let a3 = n + 2;
    let pairs = lex_pairs(n);
    let amps = alpha_schedule(params, &pairs)?;

    let mut ops = Vec::with_capacity(n * n + 6 * n + 3);
    let mut stages = Vec::with_capacity(4);

    stages.push((Stage::Prologue, ops.len()));
    ops.push(Gate::H { q: 0 });
    ops.push(Gate::Cmsz {
        control: a1,
        target: 0,
    });
    for k in 1..n {
        ops.push(Gate::Cnot {
            control: 0,
            target: k,
        });
    }

    stages.push((Stage::PairTransfer, ops.len()));
    for (&(i, j), &amp) in pairs.iter().zip(&amps) {
        ops.push(Gate::Cr {
            amp,
            control: a1,
            t1: i,
            t2: j,
        });
        ops.push(Gate::Toffoli {
            c1: i,
            c2: j,
            target: a1,
        });
    }
    ops.push(Gate::Cmsz {
        control: a1,
        target: n - 1,
    });

    stages.push((Stage::DetachFirstAncilla, ops.len()));
    for i in 0..n {
        let next = (i + 1) % n;
        ops.push(Gate::Cnot {
            control: i,
            target: next,
        });
        ops.push(Gate::Ca {
            control: next,
            t1: a2,
            t2: a3,
        });
        ops.push(Gate::Cnot {
            control: i,
            target: next,
        });
    }
    ops.push(Gate::Cnot {
        control: a3,
        target: a1,
    });

    stages.push((Stage::DetachAncillaPair, ops.len()));
    for i in 0..n {
        let next = (i + 1) % n;
        ops.push(Gate::Cnot {
            control: i,
            target: next,
        });
        ops.push(Gate::CaInv {
            control: next,
            t1: a2,
            t2: a3,
        });
        ops.push(Gate::Cnot {
            control: i,
            target: next,
        });
    }

    Circuit::from_parts(n, CircuitMode::Literal, ops, stages)
}

/// Compile a parameter set into a provably correct rotation chain.
///
/// The target state's nonzero amplitudes (all real positive), taken at
/// their full-register indices (graph bits, then ancilla |100>), are
/// produced from the first one by K-1 two-level rotations, where K is the
/// number of nonzero amplitudes: rotation m splits the remaining tail norm
/// off amplitude m-1 with theta_m = atan2(tail_m, amp_{m-1}).
pub fn build_corrected(params: &AnsatzParams) -> Result<Circuit> {
    let state = params.build_state()?;
    let n = params.qubit_count();
    let anc_suffix = 0b100usize;

    let mut entries: Vec<(usize, f64)> = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > SUPPORT_CUTOFF)
        .map(|(idx, a)| ((idx << ANCILLA_COUNT) | anc_suffix, a.re))
        .collect();
    entries.sort_unstable_by_key(|&(idx, _)| idx);
    if entries.iter().any(|&(_, a)| a <= 0.0) {
        return Err(Error::Numeric(
            "corrected builder expects strictly positive amplitudes".into(),
        ));
    }

    let k = entries.len();
    let mut ops = Vec::with_capacity(k.saturating_sub(1));
    // tail[m] = norm of amplitudes m..K.
    let mut tail = vec![0.0f64; k + 1];
    for m in (0..k).rev() {
        tail[m] = (tail[m + 1] * tail[m + 1] + entries[m].1 * entries[m].1).sqrt();
    }
    for m in 1..k {
        let theta = tail[m].atan2(entries[m - 1].1);
        ops.push(Gate::Tlr {
            theta,
            a: entries[m - 1].0,
            b: entries[m].0,
        });
    }
    Circuit::from_parts(n, CircuitMode::Corrected, ops, vec![(Stage::StatePrep, 0)])
}
