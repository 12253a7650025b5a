//! Weighted entangled graphs: vertices are qubits, edge weights are target
//! pairwise concurrences.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

const WEIGHT_TOL: f64 = 1e-12;

/// Largest uniform pairwise concurrence any n-qubit pure state of the
/// synthesized family can give every pair simultaneously; also the
/// per-edge feasibility bound used by `EntangledGraph::validate`.
pub fn c_max(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "c_max needs at least 3 vertices, got {n}"
        )));
    }
    let nf = n as f64;
    let disc = 6.0 * nf * nf - 18.0 * nf + 16.0;
    Ok((disc.sqrt() - 2.0 * nf + 4.0) / (nf * (nf - 1.0)))
}

/// Undirected simple graph with concurrence targets in (0, 1] on its edges.
/// Absent pairs mean target concurrence 0.
#[derive(Clone, Debug, PartialEq)]
pub struct EntangledGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), f64>,
}

impl EntangledGraph {
    /// Build from (i, j, weight) triples. Vertex order within a pair is
    /// free; zero-weight triples are dropped (they mean "no edge").
    pub fn new(n: usize, triples: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "graph needs at least 2 vertices, got {n}"
            )));
        }
        let mut edges = BTreeMap::new();
        for (a, b, w) in triples {
            if a == b {
                return Err(Error::Domain(format!("self-loop on vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::Domain(format!(
                    "edge ({a},{b}) outside vertex range 0..{n}"
                )));
            }
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::Domain(format!(
                    "edge ({a},{b}) weight {w} outside [0, 1]"
                )));
            }
            let key = (a.min(b), a.max(b));
            if edges.contains_key(&key) {
                return Err(Error::Domain(format!(
                    "duplicate edge ({},{})",
                    key.0, key.1
                )));
            }
            if w > 0.0 {
                edges.insert(key, w);
            }
        }
        Ok(Self { n, edges })
    }

    /// Complete graph with one uniform weight.
    pub fn complete_uniform(n: usize, weight: f64) -> Result<Self> {
        let triples: Vec<_> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j, weight)))
            .collect();
        Self::new(n, triples)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        self.edges.get(&(i.min(j), i.max(j))).copied()
    }

    /// Target concurrence for a pair; 0 for absent edges.
    pub fn target(&self, i: usize, j: usize) -> f64 {
        self.weight(i, j).unwrap_or(0.0)
    }

    /// All vertex pairs in lexicographic order, present or not.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
    }

    /// Check every target against the per-edge bound. For n = 2 the bound
    /// is 1 (a single pair can be maximally entangled).
    pub fn validate(&self) -> ValidationReport {
        let bound = if self.n == 2 {
            1.0
        } else {
            c_max(self.n).expect("n >= 3 here")
        };
        let violations: Vec<EdgeViolation> = self
            .edges()
            .filter(|&(_, _, w)| w > bound + WEIGHT_TOL)
            .map(|(i, j, w)| EdgeViolation {
                i,
                j,
                weight: w,
                bound,
            })
            .collect();
        ValidationReport {
            vertex_count: self.n,
            edge_count: self.edges.len(),
            bound,
            violations,
        }
    }

    /// Parse the graph text format: `qubits <n>` header, then
    /// `edge <i> <j> <weight>` lines. `#` comments and blank lines allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut triples: Vec<(usize, usize, f64)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match (n, fields[0]) {
                (None, "qubits") if fields.len() == 2 => {
                    n = Some(fields[1].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad vertex count `{}`", fields[1]),
                    })?);
                }
                (None, _) => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "expected header `qubits <n>`".into(),
                    });
                }
                (Some(_), "edge") if fields.len() == 4 => {
                    let i: usize = fields[1].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad vertex `{}`", fields[1]),
                    })?;
                    let j: usize = fields[2].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad vertex `{}`", fields[2]),
                    })?;
                    let w: f64 = fields[3].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad weight `{}`", fields[3]),
                    })?;
                    triples.push((i, j, w));
                }
                (Some(_), other) => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("unexpected line `{other} ...`"),
                    });
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            message: "empty graph file".into(),
        })?;
        Self::new(n, triples).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })
    }

    /// Inverse of `parse`.
    pub fn serialize(&self) -> String {
        let mut out = format!("qubits {}\n", self.n);
        for (i, j, w) in self.edges() {
            out.push_str(&format!("edge {i} {j} {w}\n"));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeViolation {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    /// Per-edge feasibility bound for this vertex count.
    pub bound: f64,
    pub violations: Vec<EdgeViolation>,
}

impl ValidationReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "graph: {} vertices, {} edges, per-edge bound {}",
            self.vertex_count,
            self.edge_count,
            crate::format::sig12(self.bound)
        )?;
        if self.violations.is_empty() {
            write!(f, "feasible: all targets within bound")
        } else {
            for v in &self.violations {
                writeln!(
                    f,
                    "violation: edge ({},{}) target {} exceeds bound {}",
                    v.i,
                    v.j,
                    crate::format::sig12(v.weight),
                    crate::format::sig12(v.bound)
                )?;
            }
            write!(f, "infeasible: {} violation(s)", self.violations.len())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn c_max_known_values() {
        assert_abs_diff_eq!(c_max(3).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c_max(4).unwrap(), 0.19371294336139657, epsilon = 1e-15);
        // (sqrt(76) - 6) / 20
        assert_abs_diff_eq!(c_max(5).unwrap(), 0.1358898943540674, epsilon = 1e-15);
    }

    #[test]
    fn c_max_rejects_small_n() {
        assert!(c_max(2).is_err());
    }

    #[test]
    fn c_max_decreases_with_n() {
        let mut prev = c_max(3).unwrap();
        for n in 4..=64 {
            let cur = c_max(n).unwrap();
            assert!(cur < prev, "c_max must decrease at n = {n}");
            prev = cur;
        }
    }

    #[test]
    fn triangle_within_bound_is_feasible() {
        let g = EntangledGraph::new(3, [(0, 1, 0.3), (0, 2, 0.2), (1, 2, 0.1)]).unwrap();
        let report = g.validate();
        assert!(report.feasible());
        assert_eq!(report.edge_count, 3);
    }

    #[test]
    fn uniform_over_bound_is_flagged() {
        let g = EntangledGraph::complete_uniform(3, 0.4).unwrap();
        let report = g.validate();
        assert!(!report.feasible());
        assert_eq!(report.violations.len(), 3);
    }

    #[test]
    fn at_bound_is_admitted() {
        let b = c_max(5).unwrap();
        let g = EntangledGraph::complete_uniform(5, b).unwrap();
        assert!(g.validate().feasible());
    }

    #[test]
    fn two_vertex_bound_is_one() {
        let g = EntangledGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let report = g.validate();
        assert_abs_diff_eq!(report.bound, 1.0, epsilon = 1e-15);
        assert!(report.feasible());
    }

    #[test]
    fn zero_weight_drops_edge() {
        let g = EntangledGraph::new(3, [(0, 1, 0.0), (1, 2, 0.2)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.target(0, 1), 0.0);
        assert_abs_diff_eq!(g.target(2, 1), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn rejects_duplicates_and_loops() {
        assert!(EntangledGraph::new(3, [(0, 1, 0.1), (1, 0, 0.2)]).is_err());
        assert!(EntangledGraph::new(3, [(1, 1, 0.1)]).is_err());
        assert!(EntangledGraph::new(3, [(0, 3, 0.1)]).is_err());
        assert!(EntangledGraph::new(3, [(0, 1, 1.5)]).is_err());
    }

    #[test]
    fn parse_serialize_round_trip() {
        let g = EntangledGraph::new(4, [(0, 1, 0.125), (2, 3, 0.0625), (0, 3, 0.1)]).unwrap();
        let back = EntangledGraph::parse(&g.serialize()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn parse_accepts_comments() {
        let text = "# triangle\nqubits 3\nedge 0 1 0.25 # strongest\n\nedge 1 2 0.125\n";
        let g = EntangledGraph::parse(text).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "qubits 3\nedge 0 1 oops\n";
        match EntangledGraph::parse(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
