//! The two-parameter-per-edge state family used for synthesis.
//!
//! An n-qubit parameter set holds one shared amplitude `alpha` on the pair
//! |0..0>, |1..1> and one amplitude `gamma_ij` per vertex pair on the two
//! basis states that flip exactly {i, j} out of |0..0> and out of |1..1>.
//! Normalization: 2 alpha^2 + 2 sum gamma^2 = 1.
//!
//! Two concurrence evaluators live here and they intentionally disagree on
//! small registers:
//!
//! * `analytic_concurrence` is the closed form
//!   max(0, 2(2 alpha gamma_ij - sum_k gamma_ki^2 - sum_k gamma_kj^2)).
//!   It treats the (i,j) marginal as if the family's basis kets never
//!   collide and never share rest patterns. That holds for n >= 7, so the
//!   formula is exact there; below n = 7 it can be off by as much as ~0.5
//!   (worst at n = 4, where |flip{i,j} of ones> equals |flip{k,l} of
//!   zeros> for the complementary pair).
//! * `exact_concurrence` assembles the true (i,j) marginal in closed form,
//!   grouping the family's O(n^2) kets by their rest-qubit pattern, and
//!   runs the full Wootters evaluation on it. It agrees with
//!   build_state + partial_trace to machine precision at every n.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::c_max;
use crate::quantum::density::{wootters_concurrence, TwoQubitDensity};
use crate::quantum::state::StateVector;

const NORM_TOL: f64 = 1e-10;
const VALIDITY_TOL: f64 = 1e-12;
/// Gammas at or below this are treated as absent edges.
pub const SUPPORT_CUTOFF: f64 = 1e-14;

/// Index of pair (i, j), i < j, in lexicographic pair order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Number of vertex pairs C(n, 2).
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzParams {
    n: usize,
    alpha: f64,
    /// gamma per pair, lexicographic order, all >= 0.
    gamma: Vec<f64>,
}

impl AnsatzParams {
    pub fn new(n: usize, alpha: f64, gamma: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!(
                "the family needs at least 3 qubits, got {n}"
            )));
        }
        if gamma.len() != pair_count(n) {
            return Err(Error::Domain(format!(
                "expected {} gammas for {n} qubits, got {}",
                pair_count(n),
                gamma.len()
            )));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Domain(format!("alpha {alpha} must be >= 0")));
        }
        if let Some(g) = gamma.iter().find(|g| !g.is_finite() || **g < 0.0) {
            return Err(Error::Domain(format!("gamma {g} must be >= 0")));
        }
        let norm = 2.0 * alpha * alpha + 2.0 * gamma.iter().map(|g| g * g).sum::<f64>();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!(
                "normalization 2a^2+2 sum g^2 = {norm} deviates from 1"
            )));
        }
        Ok(Self { n, alpha, gamma })
    }

    /// Build from gammas alone, recovering alpha from normalization.
    pub fn from_gammas(n: usize, gamma: Vec<f64>) -> Result<Self> {
        let sum: f64 = gamma.iter().map(|g| g * g).sum();
        let rad = 1.0 - 2.0 * sum;
        if rad < -NORM_TOL {
            return Err(Error::Domain(format!(
                "gammas overflow normalization by {:.3e}",
                -rad
            )));
        }
        let alpha = (rad.max(0.0) / 2.0).sqrt();
        Self::new(n, alpha, gamma)
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self, i: usize, j: usize) -> f64 {
        let (i, j) = (i.min(j), i.max(j));
        self.gamma[pair_index(self.n, i, j)]
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gamma
    }

    pub fn gamma_max(&self) -> f64 {
        self.gamma.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
    }

    /// Pairs whose gamma is above the support cutoff, with their gammas.
    pub fn support_edges(&self) -> Vec<(usize, usize, f64)> {
        self.pairs()
            .map(|(i, j)| (i, j, self.gamma(i, j)))
            .filter(|&(_, _, g)| g > SUPPORT_CUTOFF)
            .collect()
    }

    /// Replace one gamma and alpha together (both move under an edge
    /// update); revalidates all invariants.
    pub fn with_edge(&self, i: usize, j: usize, gamma: f64, alpha: f64) -> Result<Self> {
        let (i, j) = (i.min(j), i.max(j));
        let mut g = self.gamma.clone();
        g[pair_index(self.n, i, j)] = gamma;
        Self::new(self.n, alpha, g)
    }

    /// Margin of the weight-profile validity condition,
    /// alpha - 2 gamma_max sqrt(n - 2). Negative means violated.
    pub fn validity_slack(&self) -> f64 {
        self.alpha - 2.0 * self.gamma_max() * ((self.n - 2) as f64).sqrt()
    }

    pub fn check_validity(&self) -> Result<()> {
        let slack = self.validity_slack();
        if slack < -VALIDITY_TOL {
            return Err(Error::Validity { slack });
        }
        Ok(())
    }

    /// The symmetric extremal point: every gamma equal, tuned so each pair's
    /// closed-form concurrence sits at the uniform bound.
    pub fn symmetric(n: usize) -> Result<Self> {
        let lambda = symmetric_lambda(n)?;
        let scale = (2.0 + (n * (n - 1)) as f64 * lambda * lambda).sqrt();
        let gamma = lambda / scale;
        let alpha = 1.0 / scale;
        Self::new(n, alpha, vec![gamma; pair_count(n)])
    }

    /// Assemble the dense state vector. Output is normalized even where
    /// basis-ket collisions (n = 4) inflate the raw amplitude norm.
    pub fn build_state(&self) -> Result<StateVector> {
        let n = self.n;
        let full = (1usize << n) - 1;
        let mut amps = vec![Complex64::ZERO; 1usize << n];
        amps[0] += self.alpha;
        amps[full] += self.alpha;
        for (i, j) in self.pairs() {
            let g = self.gamma(i, j);
            if g == 0.0 {
                continue;
            }
            let flips = (1usize << (n - 1 - i)) | (1usize << (n - 1 - j));
            amps[flips] += g;
            amps[full ^ flips] += g;
        }
        StateVector::from_unnormalized(n, amps)
    }

    /// Exact reduced density matrix of pair (i, j), assembled directly from
    /// the parameters: kets are grouped by the bit pattern of the other
    /// n - 2 qubits, each group contributes one rank-one term. Matches
    /// `partial_trace_pair(build_state(), i, j)` to machine precision and
    /// costs O(n^2 log n) instead of O(2^n).
    pub fn pair_marginal(&self, i: usize, j: usize) -> Result<TwoQubitDensity> {
        let n = self.n;
        if i >= n || j >= n || i == j {
            return Err(Error::Domain(format!(
                "qubit pair ({i},{j}) invalid for {n} qubits"
            )));
        }

        // rest-bit t = position of the t-th qubit outside {i, j}, ascending.
        let rest_qubits: Vec<usize> = (0..n).filter(|&q| q != i && q != j).collect();
        let rest_bit = |q: usize| -> u32 {
            let t = rest_qubits.binary_search(&q).expect("q outside pair");
            1u32 << t
        };
        let rest_ones: u32 = (1u32 << (n - 2)) - 1;

        // (rest pattern, pair pattern 2*bit_i + bit_j, amplitude),
        // each ket mirrored through global complement.
        let mut contrib: Vec<(u32, u8, f64)> = Vec::with_capacity(2 * (pair_count(n) + 1));
        let mut add = |pair: u8, rest: u32, amp: f64| {
            contrib.push((rest, pair, amp));
            contrib.push((rest ^ rest_ones, pair ^ 0b11, amp));
        };

        add(0b00, 0, self.alpha);
        for (k, l) in self.pairs() {
            let g = self.gamma(k, l);
            if g == 0.0 {
                continue;
            }
            let shared = [k, l].iter().filter(|&&v| v == i || v == j).count();
            match shared {
                2 => add(0b11, 0, g),
                0 => add(0b00, rest_bit(k) | rest_bit(l), g),
                1 => {
                    let (s, o) = if k == i || k == j { (k, l) } else { (l, k) };
                    let pair = if s == i { 0b10 } else { 0b01 };
                    add(pair, rest_bit(o), g);
                }
                _ => unreachable!(),
            }
        }

        // Group by rest pattern; collisions within a group accumulate.
        contrib.sort_unstable_by_key(|&(rest, pair, _)| (rest, pair));
        let mut m = [[0.0f64; 4]; 4];
        let mut total = 0.0f64;
        let mut idx = 0;
        while idx < contrib.len() {
            let rest = contrib[idx].0;
            let mut v = [0.0f64; 4];
            while idx < contrib.len() && contrib[idx].0 == rest {
                v[contrib[idx].1 as usize] += contrib[idx].2;
                idx += 1;
            }
            for r in 0..4 {
                total += v[r] * v[r];
                for c in 0..4 {
                    m[r][c] += v[r] * v[c];
                }
            }
        }
        if total < 1e-300 {
            return Err(Error::Numeric("all amplitudes vanish".into()));
        }

        let mut out = [[Complex64::ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                out[r][c] = Complex64::new(m[r][c] / total, 0.0);
            }
        }
        TwoQubitDensity::new(out)
    }

    /// Measured concurrence of pair (i, j): Wootters evaluation on the
    /// exact marginal. This is the value the solver drives to target.
    pub fn exact_concurrence(&self, i: usize, j: usize) -> Result<f64> {
        wootters_concurrence(&self.pair_marginal(i, j)?)
    }

    /// Closed-form concurrence of pair (i, j):
    /// max(0, 2(2 alpha gamma_ij - sum_{k != i,j} (gamma_ki^2 + gamma_kj^2))).
    /// Only meaningful under the validity condition (checked); exact for
    /// n >= 7, approximate below (see module docs).
    pub fn analytic_concurrence(&self, i: usize, j: usize) -> Result<f64> {
        self.check_validity()?;
        let (i, j) = (i.min(j), i.max(j));
        if j >= self.n || i == j {
            return Err(Error::Domain(format!(
                "qubit pair ({i},{j}) invalid for {} qubits",
                self.n
            )));
        }
        let mut drain = 0.0;
        for k in 0..self.n {
            if k != i && k != j {
                let gki = self.gamma(k, i);
                let gkj = self.gamma(k, j);
                drain += gki * gki + gkj * gkj;
            }
        }
        Ok((2.0 * (2.0 * self.alpha * self.gamma(i, j) - drain)).max(0.0))
    }

    /// Parse the parameter text format: `qubits <n>`, `alpha <v>`, then
    /// `gamma <i> <j> <v>` lines for nonzero gammas.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut alpha: Option<f64> = None;
        let mut gamma: Vec<f64> = Vec::new();
        let mut seen: Vec<bool> = Vec::new();
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
            match (fields[0], fields.len()) {
                ("qubits", 2) if n.is_none() => {
                    let v: usize = fields[1]
                        .parse()
                        .map_err(|_| parse_err(format!("bad qubit count `{}`", fields[1])))?;
                    if v < 3 {
                        return Err(parse_err(format!("qubit count {v} below 3")));
                    }
                    gamma = vec![0.0; pair_count(v)];
                    seen = vec![false; pair_count(v)];
                    n = Some(v);
                }
                ("alpha", 2) if n.is_some() && alpha.is_none() => {
                    alpha = Some(
                        fields[1]
                            .parse()
                            .map_err(|_| parse_err(format!("bad alpha `{}`", fields[1])))?,
                    );
                }
                ("gamma", 4) if n.is_some() => {
                    let nv = n.expect("header seen");
                    let i: usize = fields[1]
                        .parse()
                        .map_err(|_| parse_err(format!("bad vertex `{}`", fields[1])))?;
                    let j: usize = fields[2]
                        .parse()
                        .map_err(|_| parse_err(format!("bad vertex `{}`", fields[2])))?;
                    let v: f64 = fields[3]
                        .parse()
                        .map_err(|_| parse_err(format!("bad gamma `{}`", fields[3])))?;
                    if i >= nv || j >= nv || i == j {
                        return Err(parse_err(format!("pair ({i},{j}) out of range")));
                    }
                    let p = pair_index(nv, i.min(j), i.max(j));
                    if seen[p] {
                        return Err(parse_err(format!("duplicate gamma for pair ({i},{j})")));
                    }
                    seen[p] = true;
                    gamma[p] = v;
                }
                _ => {
                    return Err(parse_err(format!("unexpected line `{line}`")));
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            message: "missing `qubits` header".into(),
        })?;
        let alpha = alpha.ok_or(Error::Parse {
            line: 1,
            message: "missing `alpha` line".into(),
        })?;
        Self::new(n, alpha, gamma).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })
    }

    /// Inverse of `parse`; zero gammas are omitted.
    pub fn serialize(&self) -> String {
        let mut out = format!("qubits {}\nalpha {}\n", self.n, self.alpha);
        for (i, j) in self.pairs() {
            let g = self.gamma(i, j);
            if g != 0.0 {
                out.push_str(&format!("gamma {i} {j} {g}\n"));
            }
        }
        out
    }
}

/// Uniform gamma-to-alpha ratio of the symmetric extremal point. Same
/// closed form as the uniform bound `c_max`, through a differently
/// arranged expression; their agreement is asserted in the test suite.
pub fn symmetric_lambda(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "symmetric point needs at least 3 qubits, got {n}"
        )));
    }
    let nf = n as f64;
    let inner = 4.0 * (nf - 2.0) * (nf - 2.0) + 2.0 * nf * (nf - 1.0);
    Ok((inner.sqrt() - 2.0 * (nf - 2.0)) / (nf * (nf - 1.0)))
}

/// Uniform bound re-exported alongside the family for convenience.
pub fn uniform_bound(n: usize) -> Result<f64> {
    c_max(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::density::partial_trace_pair;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pair_index_is_lexicographic() {
        let n = 5;
        let mut expect = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                assert_eq!(pair_index(n, i, j), expect);
                expect += 1;
            }
        }
        assert_eq!(expect, pair_count(n));
    }

    #[test]
    fn symmetric_point_frozen_values_n3() {
        let p = AnsatzParams::symmetric(3).unwrap();
        assert_abs_diff_eq!(p.alpha(), 0.6123724356957945, epsilon = 1e-15);
        assert_abs_diff_eq!(p.gamma(0, 1), 0.2041241452319315, epsilon = 1e-15);
        let norm = 2.0 * p.alpha().powi(2) + 2.0 * p.gammas().iter().map(|g| g * g).sum::<f64>();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn lambda_matches_uniform_bound() {
        for n in 3..=16 {
            assert_abs_diff_eq!(
                symmetric_lambda(n).unwrap(),
                c_max(n).unwrap(),
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn symmetric_point_is_valid() {
        for n in 3..=10 {
            let p = AnsatzParams::symmetric(n).unwrap();
            assert!(p.validity_slack() >= 0.0, "slack negative at n = {n}");
            p.check_validity().unwrap();
        }
    }

    #[test]
    fn build_state_n3_symmetric_amplitudes() {
        let p = AnsatzParams::symmetric(3).unwrap();
        let s = p.build_state().unwrap();
        assert_abs_diff_eq!(s.amplitude(0b000).re, 0.6123724356957945, epsilon = 1e-14);
        assert_abs_diff_eq!(s.amplitude(0b111).re, 0.6123724356957945, epsilon = 1e-14);
        for idx in 1..7 {
            assert_abs_diff_eq!(s.amplitude(idx).re, 0.2041241452319315, epsilon = 1e-14);
        }
    }

    #[test]
    fn build_state_n4_merges_complement_pairs() {
        // At n = 4, |flip{0,1} of ones> is |flip{2,3} of zeros>: amplitudes
        // on the six weight-2 kets accumulate both gammas, then normalize.
        let p = AnsatzParams::symmetric(4).unwrap();
        let s = p.build_state().unwrap();
        let g = p.gamma(0, 1);
        let a = p.alpha();
        let raw_norm = (2.0 * a * a + 6.0 * (2.0 * g) * (2.0 * g)).sqrt();
        assert_abs_diff_eq!(s.amplitude(0b0011).re, 2.0 * g / raw_norm, epsilon = 1e-14);
        assert_abs_diff_eq!(s.amplitude(0b0000).re, a / raw_norm, epsilon = 1e-14);
    }

    #[test]
    fn marginal_matches_partial_trace() {
        for n in 3..=7 {
            let p = AnsatzParams::symmetric(n).unwrap();
            let s = p.build_state().unwrap();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let direct = p.pair_marginal(i, j).unwrap();
                    let traced = partial_trace_pair(&s, i, j).unwrap();
                    for r in 0..4 {
                        for c in 0..4 {
                            let gap = (direct.entry(r, c) - traced.entry(r, c)).norm();
                            assert!(
                                gap < 1e-13,
                                "marginal mismatch n={n} pair=({i},{j}) entry=({r},{c}) gap={gap:.2e}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn marginal_matches_partial_trace_asymmetric() {
        let gamma = {
            let mut g = vec![0.0; pair_count(5)];
            g[pair_index(5, 0, 1)] = 0.11;
            g[pair_index(5, 1, 3)] = 0.07;
            g[pair_index(5, 2, 4)] = 0.05;
            g[pair_index(5, 0, 4)] = 0.02;
            g
        };
        let p = AnsatzParams::from_gammas(5, gamma).unwrap();
        let s = p.build_state().unwrap();
        for (i, j) in [(0, 1), (1, 3), (2, 4), (3, 4), (0, 2), (4, 1)] {
            let direct = p.pair_marginal(i, j).unwrap();
            let traced = partial_trace_pair(&s, i, j).unwrap();
            for r in 0..4 {
                for c in 0..4 {
                    let gap = (direct.entry(r, c) - traced.entry(r, c)).norm();
                    assert!(gap < 1e-14, "pair ({i},{j}) entry ({r},{c}) gap {gap:.2e}");
                }
            }
        }
    }

    #[test]
    fn closed_form_exact_at_n7() {
        let gamma = {
            let mut g = vec![0.0; pair_count(7)];
            g[pair_index(7, 0, 1)] = 0.08;
            g[pair_index(7, 2, 3)] = 0.06;
            g[pair_index(7, 4, 5)] = 0.05;
            g[pair_index(7, 0, 6)] = 0.04;
            g[pair_index(7, 1, 2)] = 0.03;
            g
        };
        let p = AnsatzParams::from_gammas(7, gamma).unwrap();
        for (i, j) in [(0, 1), (2, 3), (4, 5), (0, 6), (1, 2), (3, 6)] {
            let formula = p.analytic_concurrence(i, j).unwrap();
            let measured = p.exact_concurrence(i, j).unwrap();
            assert_abs_diff_eq!(formula, measured, epsilon = 1e-12);
        }
    }

    #[test]
    fn closed_form_gap_at_small_n_is_real() {
        // The symmetric point's closed form gives the uniform bound, but the
        // measured concurrence genuinely differs at n = 4 and n = 6.
        let p4 = AnsatzParams::symmetric(4).unwrap();
        let formula = p4.analytic_concurrence(0, 1).unwrap();
        let measured = p4.exact_concurrence(0, 1).unwrap();
        assert_abs_diff_eq!(formula, 0.19371294336139657, epsilon = 1e-12);
        assert_abs_diff_eq!(measured, 0.327280768716, epsilon = 1e-9);

        let p6 = AnsatzParams::symmetric(6).unwrap();
        assert_abs_diff_eq!(
            p6.analytic_concurrence(0, 1).unwrap(),
            c_max(6).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            p6.exact_concurrence(0, 1).unwrap(),
            0.160833382567,
            epsilon = 1e-9
        );
    }

    #[test]
    fn symmetric_point_measures_at_bound_n3_n5() {
        // At n = 3 and n = 5 the marginal is not of X form, yet the
        // symmetric point's measured concurrence still equals the bound.
        for n in [3usize, 5] {
            let p = AnsatzParams::symmetric(n).unwrap();
            assert_abs_diff_eq!(
                p.exact_concurrence(0, 1).unwrap(),
                c_max(n).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn validity_gate_rejects_skewed_profile() {
        let mut g = vec![0.0; pair_count(4)];
        g[pair_index(4, 0, 1)] = 0.45;
        let p = AnsatzParams::from_gammas(4, g).unwrap();
        assert!(p.validity_slack() < 0.0);
        assert!(matches!(
            p.analytic_concurrence(0, 1),
            Err(Error::Validity { .. })
        ));
        // The measured route has no validity precondition.
        assert!(p.exact_concurrence(0, 1).is_ok());
    }

    #[test]
    fn parse_serialize_round_trip() {
        let p = AnsatzParams::symmetric(5).unwrap();
        let back = AnsatzParams::parse(&p.serialize()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn parse_rejects_duplicate_gamma() {
        let text = "qubits 3\nalpha 0.7071067811865476\ngamma 0 1 0\ngamma 1 0 0\n";
        assert!(matches!(
            AnsatzParams::parse(text),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn rejects_n2() {
        assert!(AnsatzParams::new(2, std::f64::consts::FRAC_1_SQRT_2, vec![0.0]).is_err());
    }
}
