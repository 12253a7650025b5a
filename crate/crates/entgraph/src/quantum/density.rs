//! Two-qubit reduced density matrices and entanglement measures on them.
//!
//! `wootters_concurrence` is the independent oracle the rest of the crate is
//! checked against: it takes any physical two-qubit density matrix and
//! evaluates the spin-flip spectrum from scratch (pivoted Cholesky plus a
//! Jacobi eigensolve), sharing no code with the closed-form concurrence
//! expressions elsewhere in the crate.

// Index loops here touch both triangles of a matrix per pass; iterator
// forms hide that symmetry.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::eigen::{hermitian_eigenvalues, SmallMatrix};
use crate::quantum::state::{insert_zero_bit, StateVector};

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const EIG_FLOOR: f64 = -1e-10;
const PIVOT_CUTOFF: f64 = 1e-14;

/// Validated 4x4 density matrix of a qubit pair, indexed by
/// 2*(bit of the first qubit) + (bit of the second qubit).
#[derive(Clone, Copy, Debug)]
pub struct TwoQubitDensity {
    m: [[Complex64; 4]; 4],
}

impl TwoQubitDensity {
    /// Validates hermiticity and unit trace eagerly (1e-10 each) and
    /// positivity down to eigenvalue -1e-10.
    pub fn new(m: [[Complex64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            if m[i][i].im.abs() > HERMITICITY_TOL {
                return Err(Error::Domain(format!(
                    "density diagonal ({i},{i}) has imaginary part {:.3e}",
                    m[i][i].im
                )));
            }
            for j in (i + 1)..4 {
                let gap = (m[i][j] - m[j][i].conj()).norm();
                if gap > HERMITICITY_TOL {
                    return Err(Error::Domain(format!(
                        "density entries ({i},{j})/({j},{i}) break hermiticity by {gap:.3e}"
                    )));
                }
            }
        }
        let trace: f64 = (0..4).map(|i| m[i][i].re).sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Domain(format!(
                "density trace {trace} deviates from 1 beyond {TRACE_TOL:.0e}"
            )));
        }
        let rho = Self { m };
        let min = rho
            .eigenvalues()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < EIG_FLOOR {
            return Err(Error::Domain(format!(
                "density has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(rho)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.m
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut sm = SmallMatrix::zero(4)?;
        for i in 0..4 {
            for j in 0..4 {
                sm.set(i, j, self.m[i][j]);
            }
        }
        hermitian_eigenvalues(&sm)
    }

    pub fn purity(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                s += (self.m[i][j] * self.m[j][i]).re;
            }
        }
        s
    }
}

/// Spin-flipped matrix: (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y).
fn spin_flip(m: &[[Complex64; 4]; 4]) -> [[Complex64; 4]; 4] {
    const S: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let mut out = [[Complex64::ZERO; 4]; 4];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = S[a] * S[b] * m[3 - a][3 - b].conj();
        }
    }
    out
}

/// Pivoted outer-product Cholesky: returns columns c with rho = sum c c^dag.
/// Column order follows pivot magnitude; no permutation bookkeeping is kept
/// because only the column span matters downstream.
fn pivoted_cholesky(m: &[[Complex64; 4]; 4]) -> Result<Vec<[Complex64; 4]>> {
    let mut a = *m;
    let mut cols: Vec<[Complex64; 4]> = Vec::new();
    for _ in 0..4 {
        let (p, diag) = (0..4)
            .map(|i| (i, a[i][i].re))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite diagonal"))
            .expect("nonempty diagonal");
        if diag <= PIVOT_CUTOFF {
            for i in 0..4 {
                if a[i][i].re < EIG_FLOOR {
                    return Err(Error::Numeric(format!(
                        "density lost positivity during factorization ({:.3e})",
                        a[i][i].re
                    )));
                }
            }
            break;
        }
        let scale = 1.0 / diag.sqrt();
        let mut c = [Complex64::ZERO; 4];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = a[i][p] * scale;
        }
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] -= c[i] * c[j].conj();
            }
        }
        for i in 0..4 {
            a[i][p] = Complex64::ZERO;
            a[p][i] = Complex64::ZERO;
        }
        cols.push(c);
    }
    Ok(cols)
}

/// Wootters concurrence of an arbitrary two-qubit density matrix.
///
/// Route: factor rho = L L^dag and rho_tilde = K K^dag by pivoted Cholesky
/// and form B = K^dag L. The square roots of the eigenvalues of
/// rho*rho_tilde are exactly the singular values of B, read off as the
/// nonnegative eigenvalues of the Hermitian block matrix [[0, B^dag],
/// [B, 0]]. Working linearly in B keeps rounding dust at machine scale
/// instead of amplifying it through a square root of a near-zero
/// eigenvalue. C = max(0, s1 - s2 - s3 - s4), singular values descending.
pub fn wootters_concurrence(rho: &TwoQubitDensity) -> Result<f64> {
    let tilde = spin_flip(&rho.m);
    let l_cols = pivoted_cholesky(&rho.m)?;
    let k_cols = pivoted_cholesky(&tilde)?;
    let r = l_cols.len();
    let rt = k_cols.len();
    if r == 0 {
        return Err(Error::Numeric("density matrix is numerically zero".into()));
    }
    if rt == 0 {
        // Flipped state is numerically zero: no overlap, no entanglement.
        return Ok(0.0);
    }

    // B[s][t] = k_cols[s]^dag * l_cols[t], sized rt x r.
    let mut b = [[Complex64::ZERO; 4]; 4];
    for s in 0..rt {
        for t in 0..r {
            let mut acc = Complex64::ZERO;
            for i in 0..4 {
                acc += k_cols[s][i].conj() * l_cols[t][i];
            }
            b[s][t] = acc;
        }
    }

    // Hermitian embedding [[0, B^dag], [B, 0]]: eigenvalues +-s_i.
    let dim = r + rt;
    let mut sm = SmallMatrix::zero(dim)?;
    for s in 0..rt {
        for t in 0..r {
            sm.set(t, r + s, b[s][t].conj());
            sm.set(r + s, t, b[s][t]);
        }
    }
    let eig = hermitian_eigenvalues(&sm)?;

    // Descending order puts the s_i first; the rest mirror as -s_i or 0.
    let mut roots = [0.0f64; 4];
    for (k, root) in roots.iter_mut().enumerate() {
        if k < eig.len() {
            *root = eig[k].max(0.0);
        }
    }
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Parameters of the symmetric X-form density matrix
/// diag(a, b, b, a) with anti-diagonal (f, e, e, f), all real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateParams {
    pub a: f64,
    pub b: f64,
    pub e: f64,
    pub f: f64,
}

impl XStateParams {
    /// Requires 2a + 2b = 1 within 1e-10 and positivity f <= a, e <= b
    /// (up to the same slack), so the matrix is a physical state.
    pub fn new(a: f64, b: f64, e: f64, f: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("e", e), ("f", f)] {
            if !v.is_finite() || v < -HERMITICITY_TOL {
                return Err(Error::Domain(format!("X-state entry {name} = {v} invalid")));
            }
        }
        if (2.0 * a + 2.0 * b - 1.0).abs() > TRACE_TOL {
            return Err(Error::Domain(format!(
                "X-state trace 2a+2b = {} deviates from 1",
                2.0 * a + 2.0 * b
            )));
        }
        if f > a + HERMITICITY_TOL || e > b + HERMITICITY_TOL {
            return Err(Error::Domain(
                "X-state coherences exceed their diagonal blocks".into(),
            ));
        }
        Ok(Self { a, b, e, f })
    }

    /// Assemble the full 4x4 density matrix.
    pub fn density(&self) -> Result<TwoQubitDensity> {
        let z = Complex64::ZERO;
        let r = |x: f64| Complex64::new(x, 0.0);
        TwoQubitDensity::new([
            [r(self.a), z, z, r(self.f)],
            [z, r(self.b), r(self.e), z],
            [z, r(self.e), r(self.b), z],
            [r(self.f), z, z, r(self.a)],
        ])
    }
}

/// Concurrence of the symmetric X-form state, in closed form:
/// the square roots of the spin-flip spectrum are {a+f, |a-f|, b+e, |b-e|},
/// giving C = max(0, 2(f-b), 2(e-a)) for every ordering.
pub fn xstate_concurrence(x: &XStateParams) -> f64 {
    (2.0 * (x.f - x.b)).max(2.0 * (x.e - x.a)).max(0.0)
}

/// Reduced density matrix of qubits (i, j) of a pure state; i indexes the
/// more significant bit of the result.
pub fn partial_trace_pair(psi: &StateVector, i: usize, j: usize) -> Result<TwoQubitDensity> {
    let q = psi.qubits();
    if i >= q || j >= q || i == j {
        return Err(Error::Domain(format!(
            "qubit pair ({i},{j}) invalid for {q} qubits"
        )));
    }
    if q < 2 {
        return Err(Error::Domain("need at least two qubits".into()));
    }
    let pos_i = q - 1 - i;
    let pos_j = q - 1 - j;
    let (lo, hi) = if pos_i < pos_j {
        (pos_i, pos_j)
    } else {
        (pos_j, pos_i)
    };
    let mask_i = 1usize << pos_i;
    let mask_j = 1usize << pos_j;

    let mut m = [[Complex64::ZERO; 4]; 4];
    for rest in 0..(1usize << (q - 2)) {
        let base = insert_zero_bit(insert_zero_bit(rest, lo), hi);
        let v = [
            psi.amplitude(base),
            psi.amplitude(base | mask_j),
            psi.amplitude(base | mask_i),
            psi.amplitude(base | mask_i | mask_j),
        ];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] += v[r] * v[c].conj();
            }
        }
    }
    TwoQubitDensity::new(m)
}

/// Concurrence between qubit j and the rest of the register, for a pure
/// state: sqrt(2 (1 - Tr rho_j^2)).
pub fn tangle_with_rest(psi: &StateVector, j: usize) -> Result<f64> {
    let q = psi.qubits();
    if j >= q {
        return Err(Error::Domain(format!("qubit {j} outside register of {q}")));
    }
    if q < 2 {
        return Err(Error::Domain("need at least two qubits".into()));
    }
    let mask = psi.mask(j);
    let mut p0 = 0.0f64;
    let mut p1 = 0.0f64;
    let mut coh = Complex64::ZERO;
    for idx in 0..psi.len() {
        if idx & mask == 0 {
            let a0 = psi.amplitude(idx);
            let a1 = psi.amplitude(idx | mask);
            p0 += a0.norm_sqr();
            p1 += a1.norm_sqr();
            coh += a0 * a1.conj();
        }
    }
    let purity = p0 * p0 + p1 * p1 + 2.0 * coh.norm_sqr();
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// Full pairwise concurrence matrix of a pure state: symmetric, zero
/// diagonal, entry (i,j) from the Wootters oracle on the (i,j) marginal.
pub fn concurrence_matrix(psi: &StateVector) -> Result<Vec<Vec<f64>>> {
    let n = psi.qubits();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let c = wootters_concurrence(&partial_trace_pair(psi, i, j)?)?;
            m[i][j] = c;
            m[j][i] = c;
        }
    }
    Ok(m)
}

/// One row of the monogamy audit for a vertex.
#[derive(Clone, Copy, Debug)]
pub struct CkwRow {
    pub vertex: usize,
    /// sum over k != vertex of C_{vertex,k}^2
    pub concurrence_square_sum: f64,
    /// squared tangle of the vertex against the rest
    pub tangle_square: f64,
}

impl CkwRow {
    pub fn satisfied(&self, tol: f64) -> bool {
        self.concurrence_square_sum <= self.tangle_square + tol
    }
}

/// Monogamy audit: per vertex, the pairwise concurrence-square sum must not
/// exceed the squared tangle against the rest.
pub fn ckw_rows(psi: &StateVector) -> Result<Vec<CkwRow>> {
    let matrix = concurrence_matrix(psi)?;
    let n = psi.qubits();
    (0..n)
        .map(|v| {
            let sum = matrix[v].iter().map(|c| c * c).sum();
            let tangle = tangle_with_rest(psi, v)?;
            Ok(CkwRow {
                vertex: v,
                concurrence_square_sum: sum,
                tangle_square: tangle * tangle,
            })
        })
        .collect()
}
