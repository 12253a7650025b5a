//! Iterative synthesis: drive the family's measured pairwise concurrences
//! onto a target graph.
//!
//! Each edge visit closes the gap between the measured concurrence C of a
//! pair and its target T by moving only (alpha, gamma_ij), preserving
//! alpha^2 + gamma_ij^2:
//!
//!   U = sqrt((alpha+gamma)^2 + (T-C)/2)
//!   V = sqrt((alpha-gamma)^2 - (T-C)/2)
//!   gamma' = (U-V)/2,  alpha' = (U+V)/2
//!
//! which shifts the product alpha*gamma by exactly (T-C)/4. Where the
//! closed-form concurrence is exact (n >= 7) a single visit lands the pair
//! exactly on target; at smaller n each visit still contracts toward it,
//! so the sweep loop measures concurrences rather than trusting the
//! closed form (see the module docs in `ansatz`).
//!
//! Visits where T exceeds C ("the concurrence must rise") are ordinarily a
//! sign of an unrealizable target; the sweep records them in audit
//! counters and aborts only when the gap is structural. Small upward
//! visits occur benignly on feasible inputs at n <= 6, where the closed
//! form and the measurement disagree.

use std::fmt;

use crate::ansatz::{pair_count, pair_index, AnsatzParams, SUPPORT_CUTOFF};
use crate::error::{Error, Result};
use crate::graph::EntangledGraph;
use crate::quantum::density::{ckw_rows, partial_trace_pair, wootters_concurrence, CkwRow};

const BREACH_TOL: f64 = 1e-12;
/// An upward gap this large cannot be numerical noise; the target is
/// structurally unreachable from the current iterate.
const DIVERGENCE_GAP: f64 = 0.5;
const RADICAND_CLAMP: f64 = -1e-12;
/// All-at-once stalls when this many consecutive steps fail to improve
/// the best residual by at least `STALL_IMPROVEMENT`.
const STALL_WINDOW: usize = 6;
/// Relative residual improvement a one-shot step must deliver to count
/// as progress. Oscillating crawls improve by less and trigger fallback.
const STALL_IMPROVEMENT: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// Gauss-Seidel: each visit sees all earlier updates of the sweep.
    PerEdge,
    /// Jacobi: all gammas recomputed from one snapshot, alpha restored
    /// from normalization. Falls back to per-edge on structural failure.
    AllAtOnce,
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepMode::PerEdge => write!(f, "per-edge"),
            SweepMode::AllAtOnce => write!(f, "all-at-once"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    /// Convergence threshold on the worst |achieved - target|.
    pub tolerance: f64,
    pub max_sweeps: usize,
    pub mode: SweepMode,
    /// Keep a per-sweep parameter record in the trace.
    pub record_trace: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_sweeps: 200,
            mode: SweepMode::PerEdge,
            record_trace: false,
        }
    }
}

/// Counters for everything that deviated from the idealized contraction
/// picture while still letting the iteration proceed.
#[derive(Clone, Copy, Debug, Default)]
pub struct AuditCounters {
    /// Visits where the target exceeded the measured concurrence.
    pub monotonicity_breaches: usize,
    pub max_monotonicity_breach: f64,
    /// Visits where gamma_ij grew (expected only on breach visits).
    pub gamma_increases: usize,
    /// Visits where alpha shrank (expected only on breach visits).
    pub alpha_decreases: usize,
    /// Sweeps ending with a violated validity condition.
    pub validity_breaches: usize,
    /// Most negative validity slack observed (0 when never violated).
    pub worst_validity_slack: f64,
    /// Radicands within the clamp window that were snapped to zero.
    pub radicand_clamps: usize,
    /// Visits whose shrink request exceeded the pair's whole product, so
    /// the pair was retired (gamma to zero) instead of going negative.
    pub product_floors: usize,
    /// Step at which all-at-once gave up and restarted per-edge.
    pub fallback_step: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SweepRecord {
    pub sweep: usize,
    pub alpha: f64,
    pub gamma: Vec<f64>,
    pub max_residual: f64,
}

#[derive(Clone, Debug)]
pub struct IterationTrace {
    pub mode: SweepMode,
    pub sweeps_used: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub audit: AuditCounters,
    /// One record per residual checkpoint (initial state, then each sweep),
    /// populated only when `record_trace` is set.
    pub records: Vec<SweepRecord>,
}

/// One strict edge update. Preconditions enforced: `current` within
/// tolerance of at least `target` (the update never raises a concurrence),
/// both in [0, 1]. The relaxed bookkeeping variants used inside `solve`
/// funnel through the same arithmetic.
pub fn edge_update(
    params: &AnsatzParams,
    i: usize,
    j: usize,
    target: f64,
    current: f64,
) -> Result<AnsatzParams> {
    if !(0.0..=1.0).contains(&target) || !(0.0..=1.0 + 1e-9).contains(&current) {
        return Err(Error::Domain(format!(
            "target {target} / current {current} outside [0, 1]"
        )));
    }
    if target > current + BREACH_TOL {
        return Err(Error::Monotonicity {
            i,
            j,
            current,
            target,
        });
    }
    let shift = shifted_edge(params.alpha(), params.gamma(i, j), target, current)?;
    params.with_edge(i, j, shift.gamma, shift.alpha)
}

struct EdgeShift {
    gamma: f64,
    alpha: f64,
    /// A radicand inside the tolerance window was snapped to zero.
    clamped: bool,
    /// The shrink exceeded the pair's product; gamma was floored at zero.
    floored: bool,
}

/// Core U/V arithmetic. Preserves alpha^2 + gamma^2 exactly and moves the
/// product alpha*gamma by (target - current)/4, flooring it at zero.
fn shifted_edge(alpha: f64, gamma: f64, target: f64, current: f64) -> Result<EdgeShift> {
    let shift = 0.5 * (target - current);
    let u_rad = (alpha + gamma).powi(2) + shift;
    let v_rad = (alpha - gamma).powi(2) - shift;
    // Growth beyond the pair's capacity: the product cannot exceed
    // (alpha^2 + gamma^2)/2, reached when v_rad hits zero.
    if v_rad < RADICAND_CLAMP {
        return Err(Error::Numeric(format!(
            "edge update radicand {v_rad:.3e} below clamp window"
        )));
    }
    // Shrink beyond the pair's whole product: retire the pair. The same
    // invariant holds, with all weight on the residual amplitude.
    if u_rad < v_rad {
        return Ok(EdgeShift {
            gamma: 0.0,
            alpha: alpha.hypot(gamma),
            clamped: false,
            floored: true,
        });
    }
    let u = u_rad.max(0.0).sqrt();
    let v = v_rad.max(0.0).sqrt();
    Ok(EdgeShift {
        gamma: (u - v) / 2.0,
        alpha: (u + v) / 2.0,
        clamped: v_rad < 0.0 || u_rad < 0.0,
        floored: false,
    })
}

/// Achieved concurrence per pair (lexicographic) and the worst residual.
fn measure(params: &AnsatzParams, graph: &EntangledGraph) -> Result<(Vec<f64>, f64)> {
    let mut achieved = Vec::with_capacity(pair_count(params.qubit_count()));
    let mut worst = 0.0f64;
    for (i, j) in params.pairs() {
        let c = params.exact_concurrence(i, j)?;
        worst = worst.max((c - graph.target(i, j)).abs());
        achieved.push(c);
    }
    Ok((achieved, worst))
}

/// Solve from the symmetric starting point.
pub fn solve(graph: &EntangledGraph, config: &SolveConfig) -> Result<(AnsatzParams, IterationTrace)> {
    let n = graph.vertex_count();
    if n < 3 {
        return Err(Error::Domain(format!(
            "synthesis needs at least 3 qubits, got {n}"
        )));
    }
    let report = graph.validate();
    if !report.feasible() {
        let v = &report.violations[0];
        return Err(Error::Infeasible(format!(
            "{} edge target(s) above the bound {}, first: ({},{}) at {}",
            report.violations.len(),
            crate::format::sig12(report.bound),
            v.i,
            v.j,
            crate::format::sig12(v.weight)
        )));
    }
    solve_from(&AnsatzParams::symmetric(n)?, graph, config)
}

/// Solve from an explicit starting point (used for warm restarts and the
/// idempotence property: starting at a solution uses zero sweeps).
pub fn solve_from(
    start: &AnsatzParams,
    graph: &EntangledGraph,
    config: &SolveConfig,
) -> Result<(AnsatzParams, IterationTrace)> {
    if start.qubit_count() != graph.vertex_count() {
        return Err(Error::Domain(format!(
            "parameter register ({}) does not match graph ({})",
            start.qubit_count(),
            graph.vertex_count()
        )));
    }
    match config.mode {
        SweepMode::PerEdge => per_edge_loop(start, graph, config, AuditCounters::default(), 0),
        SweepMode::AllAtOnce => all_at_once_loop(start, graph, config),
    }
}

struct RawParams {
    n: usize,
    alpha: f64,
    gamma: Vec<f64>,
}

impl RawParams {
    fn of(p: &AnsatzParams) -> Self {
        Self {
            n: p.qubit_count(),
            alpha: p.alpha(),
            gamma: p.gammas().to_vec(),
        }
    }

    fn params(&self) -> Result<AnsatzParams> {
        AnsatzParams::new(self.n, self.alpha, self.gamma.clone())
    }

    /// Rescale so 2 alpha^2 + 2 sum gamma^2 = 1 exactly, killing the
    /// floating-point drift the per-edge invariant leaves behind.
    fn renormalize(&mut self) {
        let norm =
            (2.0 * self.alpha * self.alpha + 2.0 * self.gamma.iter().map(|g| g * g).sum::<f64>())
                .sqrt();
        let inv = 1.0 / norm;
        self.alpha *= inv;
        for g in &mut self.gamma {
            *g *= inv;
        }
    }
}

fn per_edge_loop(
    start: &AnsatzParams,
    graph: &EntangledGraph,
    config: &SolveConfig,
    mut audit: AuditCounters,
    sweeps_already_used: usize,
) -> Result<(AnsatzParams, IterationTrace)> {
    let n = start.qubit_count();
    let mut raw = RawParams::of(start);
    let mut records = Vec::new();
    let budget = config.max_sweeps.saturating_sub(sweeps_already_used);

    let mut sweeps = 0;
    loop {
        let params = raw.params()?;
        let (_, residual) = measure(&params, graph)?;
        if config.record_trace {
            records.push(SweepRecord {
                sweep: sweeps,
                alpha: raw.alpha,
                gamma: raw.gamma.clone(),
                max_residual: residual,
            });
        }
        if residual <= config.tolerance && confirmed(&params, graph, config.tolerance)? {
            let trace = IterationTrace {
                mode: SweepMode::PerEdge,
                sweeps_used: sweeps_already_used + sweeps,
                final_residual: residual,
                converged: true,
                audit,
                records,
            };
            return Ok((params, trace));
        }
        if sweeps >= budget {
            let trace = IterationTrace {
                mode: SweepMode::PerEdge,
                sweeps_used: sweeps_already_used + sweeps,
                final_residual: residual,
                converged: false,
                audit,
                records,
            };
            return Err(Error::NonConvergence {
                sweeps: sweeps_already_used + sweeps,
                residual,
                trace: Box::new(trace),
            });
        }

        for i in 0..n {
            for j in (i + 1)..n {
                let target = graph.target(i, j);
                let p = pair_index(n, i, j);
                if target <= SUPPORT_CUTOFF {
                    // Absent edge: retire its amplitude into alpha, keeping
                    // alpha^2 + gamma^2 fixed. Exact and idempotent.
                    let g = raw.gamma[p];
                    if g != 0.0 {
                        raw.alpha = (raw.alpha * raw.alpha + g * g).sqrt();
                        raw.gamma[p] = 0.0;
                    }
                    continue;
                }
                let current = raw.params()?.exact_concurrence(i, j)?;
                visit(&mut raw, p, target, current, i, j, &mut audit)?;
            }
        }
        raw.renormalize();
        let slack = raw.params()?.validity_slack();
        if slack < -BREACH_TOL {
            audit.validity_breaches += 1;
            audit.worst_validity_slack = audit.worst_validity_slack.min(slack);
        }
        sweeps += 1;
    }
}

/// One bookkept in-place edge visit shared by both sweep modes.
fn visit(
    raw: &mut RawParams,
    p: usize,
    target: f64,
    current: f64,
    i: usize,
    j: usize,
    audit: &mut AuditCounters,
) -> Result<()> {
    if !current.is_finite() {
        return Err(Error::Numeric(format!(
            "measured concurrence of ({i},{j}) is not finite"
        )));
    }
    if target > current + BREACH_TOL {
        let gap = target - current;
        if gap > DIVERGENCE_GAP {
            return Err(Error::Monotonicity {
                i,
                j,
                current,
                target,
            });
        }
        audit.monotonicity_breaches += 1;
        audit.max_monotonicity_breach = audit.max_monotonicity_breach.max(gap);
    }
    let old_gamma = raw.gamma[p];
    let old_alpha = raw.alpha;
    let shift = shifted_edge(old_alpha, old_gamma, target, current)?;
    if shift.clamped {
        audit.radicand_clamps += 1;
    }
    if shift.floored {
        audit.product_floors += 1;
    }
    if shift.gamma > old_gamma + BREACH_TOL {
        audit.gamma_increases += 1;
    }
    if shift.alpha < old_alpha - BREACH_TOL {
        audit.alpha_decreases += 1;
    }
    raw.gamma[p] = shift.gamma;
    raw.alpha = shift.alpha;
    Ok(())
}

fn all_at_once_loop(
    start: &AnsatzParams,
    graph: &EntangledGraph,
    config: &SolveConfig,
) -> Result<(AnsatzParams, IterationTrace)> {
    let n = start.qubit_count();
    let mut raw = RawParams::of(start);
    let mut audit = AuditCounters::default();
    let mut records = Vec::new();
    let mut best_residual = f64::INFINITY;
    let mut stagnant = 0usize;
    // The one-shot phase gets at most half the budget, so a crawl that
    // evades the stall detector still leaves room for the fallback.
    let one_shot_budget = (config.max_sweeps / 2).max(1);

    let mut steps = 0;
    loop {
        let params = raw.params()?;
        let (achieved, residual) = measure(&params, graph)?;
        if config.record_trace {
            records.push(SweepRecord {
                sweep: steps,
                alpha: raw.alpha,
                gamma: raw.gamma.clone(),
                max_residual: residual,
            });
        }
        if residual <= config.tolerance && confirmed(&params, graph, config.tolerance)? {
            let trace = IterationTrace {
                mode: SweepMode::AllAtOnce,
                sweeps_used: steps,
                final_residual: residual,
                converged: true,
                audit,
                records,
            };
            return Ok((params, trace));
        }
        if steps >= config.max_sweeps {
            let trace = IterationTrace {
                mode: SweepMode::AllAtOnce,
                sweeps_used: steps,
                final_residual: residual,
                converged: false,
                audit,
                records,
            };
            return Err(Error::NonConvergence {
                sweeps: steps,
                residual,
                trace: Box::new(trace),
            });
        }

        if residual < best_residual * (1.0 - STALL_IMPROVEMENT) {
            best_residual = residual;
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        if stagnant >= STALL_WINDOW || steps >= one_shot_budget {
            audit.fallback_step = Some(steps);
            return per_edge_loop(&AnsatzParams::symmetric(n)?, graph, config, audit, steps);
        }

        // Jacobi step: every gamma from the same snapshot.
        match jacobi_step(&raw, graph, &achieved, &mut audit) {
            Ok(next) => raw = next,
            Err(Error::Numeric(_)) | Err(Error::Monotonicity { .. }) => {
                audit.fallback_step = Some(steps);
                return per_edge_loop(&AnsatzParams::symmetric(n)?, graph, config, audit, steps);
            }
            Err(e) => return Err(e),
        }
        steps += 1;
    }
}

fn jacobi_step(
    raw: &RawParams,
    graph: &EntangledGraph,
    achieved: &[f64],
    audit: &mut AuditCounters,
) -> Result<RawParams> {
    let n = raw.n;
    let mut gamma = raw.gamma.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = pair_index(n, i, j);
            let target = graph.target(i, j);
            if target <= SUPPORT_CUTOFF {
                gamma[p] = 0.0;
                continue;
            }
            let current = achieved[p];
            if target > current + BREACH_TOL {
                let gap = target - current;
                if gap > DIVERGENCE_GAP {
                    return Err(Error::Monotonicity {
                        i,
                        j,
                        current,
                        target,
                    });
                }
                audit.monotonicity_breaches += 1;
                audit.max_monotonicity_breach = audit.max_monotonicity_breach.max(gap);
            }
            let shift = shifted_edge(raw.alpha, raw.gamma[p], target, current)?;
            if shift.clamped {
                audit.radicand_clamps += 1;
            }
            if shift.floored {
                audit.product_floors += 1;
            }
            gamma[p] = shift.gamma;
        }
    }
    let sum2: f64 = gamma.iter().map(|g| g * g).sum();
    let rad = 1.0 - 2.0 * sum2;
    if rad <= 0.0 {
        return Err(Error::Numeric(format!(
            "gamma vector overflows normalization by {:.3e}",
            -rad
        )));
    }
    let alpha = (rad / 2.0).sqrt();
    if alpha < raw.alpha - BREACH_TOL {
        audit.alpha_decreases += 1;
    }
    let out = RawParams { n, alpha, gamma };
    let slack = out.params()?.validity_slack();
    if slack < -BREACH_TOL {
        audit.validity_breaches += 1;
        audit.worst_validity_slack = audit.worst_validity_slack.min(slack);
    }
    Ok(out)
}

/// Confirm convergence through the independent route: build the dense
/// state, trace out each pair, run the Wootters oracle.
fn confirmed(params: &AnsatzParams, graph: &EntangledGraph, tolerance: f64) -> Result<bool> {
    let report = verify(params, graph)?;
    Ok(report.max_residual <= tolerance + 1e-12)
}

#[derive(Clone, Copy, Debug)]
pub struct ResidualRow {
    pub i: usize,
    pub j: usize,
    pub target: f64,
    pub achieved: f64,
}

/// Verification report: achieved-vs-target per pair through the dense
/// route, plus the monogamy audit of the built state.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    pub max_residual: f64,
    pub ckw: Vec<CkwRow>,
}

impl ResidualReport {
    pub fn ckw_satisfied(&self, tol: f64) -> bool {
        self.ckw.iter().all(|r| r.satisfied(tol))
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pair   target          achieved        |gap|")?;
        for r in &self.rows {
            writeln!(
                f,
                "({},{})  {:<15} {:<15} {}",
                r.i,
                r.j,
                crate::format::sig12(r.target),
                crate::format::sig12(r.achieved),
                crate::format::sig12((r.achieved - r.target).abs())
            )?;
        }
        writeln!(
            f,
            "max residual: {}",
            crate::format::sig12(self.max_residual)
        )?;
        for row in &self.ckw {
            writeln!(
                f,
                "monogamy vertex {}: sum C^2 = {} <= tangle^2 = {}",
                row.vertex,
                crate::format::sig12(row.concurrence_square_sum),
                crate::format::sig12(row.tangle_square)
            )?;
        }
        Ok(())
    }
}

/// Independent verification of a parameter set against a graph.
pub fn verify(params: &AnsatzParams, graph: &EntangledGraph) -> Result<ResidualReport> {
    if params.qubit_count() != graph.vertex_count() {
        return Err(Error::Domain(format!(
            "parameter register ({}) does not match graph ({})",
            params.qubit_count(),
            graph.vertex_count()
        )));
    }
    let state = params.build_state()?;
    let mut rows = Vec::new();
    let mut max_residual = 0.0f64;
    for (i, j) in params.pairs() {
        let rho = partial_trace_pair(&state, i, j)?;
        let achieved = wootters_concurrence(&rho)?;
        let target = graph.target(i, j);
        max_residual = max_residual.max((achieved - target).abs());
        rows.push(ResidualRow {
            i,
            j,
            target,
            achieved,
        });
    }
    let ckw = ckw_rows(&state)?;
    Ok(ResidualReport {
        rows,
        max_residual,
        ckw,
    })
}
