//! Eigenvalues of small complex Hermitian matrices via cyclic Jacobi
//! rotations. Dimensions up to 8 only; everything this crate diagonalizes
//! is a 2x2, 4x4, or 8x8 reduced density matrix or a product derived from
//! one, so a dependency-free quadratic-convergence sweep is enough.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_EIGEN_DIM: usize = 8;

const HERMITICITY_TOL: f64 = 1e-10;
const OFF_NORM_TARGET: f64 = 1e-14;
const MAX_SWEEPS: usize = 200;

/// Dense square matrix of dimension 1..=8, stored inline.
#[derive(Clone, Copy, Debug)]
pub struct SmallMatrix {
    dim: usize,
    a: [[Complex64; MAX_EIGEN_DIM]; MAX_EIGEN_DIM],
}

impl SmallMatrix {
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_EIGEN_DIM {
            return Err(Error::Domain(format!(
                "matrix dimension {dim} outside 1..={MAX_EIGEN_DIM}"
            )));
        }
        Ok(Self {
            dim,
            a: [[Complex64::ZERO; MAX_EIGEN_DIM]; MAX_EIGEN_DIM],
        })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let mut m = Self::zero(rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rows.len() {
                return Err(Error::Domain(format!(
                    "row {i} has length {}, expected {}",
                    row.len(),
                    rows.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                m.a[i][j] = *v;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.dim && j < self.dim);
        self.a[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(i < self.dim && j < self.dim);
        self.a[i][j] = v;
    }

    fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += self.a[i][j].norm_sqr();
            }
        }
        s.sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self.a[i][j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    fn check_hermitian(&self) -> Result<()> {
        for i in 0..self.dim {
            if self.a[i][i].im.abs() > HERMITICITY_TOL {
                return Err(Error::Domain(format!(
                    "diagonal entry ({i},{i}) has imaginary part {:.3e}",
                    self.a[i][i].im
                )));
            }
            for j in (i + 1)..self.dim {
                let gap = (self.a[i][j] - self.a[j][i].conj()).norm();
                if gap > HERMITICITY_TOL {
                    return Err(Error::Domain(format!(
                        "entries ({i},{j})/({j},{i}) break hermiticity by {gap:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// The input must be Hermitian within 1e-10 entrywise. Rotations run in
/// cyclic sweeps until the off-diagonal Frobenius norm falls below 1e-14
/// relative to the matrix scale.
pub fn hermitian_eigenvalues(m: &SmallMatrix) -> Result<Vec<f64>> {
    m.check_hermitian()?;
    let n = m.dim;
    let mut a = *m;
    // Symmetrize so tolerance-level asymmetry cannot drift through sweeps.
    for i in 0..n {
        a.a[i][i] = Complex64::new(a.a[i][i].re, 0.0);
        for j in (i + 1)..n {
            let v = (a.a[i][j] + a.a[j][i].conj()) * 0.5;
            a.a[i][j] = v;
            a.a[j][i] = v.conj();
        }
    }

    let scale = a.frobenius().max(1.0);
    let mut sweeps = 0;
    while a.off_diagonal_norm() > OFF_NORM_TARGET * scale {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "jacobi sweep budget exhausted (off-norm {:.3e})",
                a.off_diagonal_norm()
            )));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a.a[i][i].re).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are finite"));
    Ok(eig)
}

/// One Jacobi rotation zeroing the (p,q) entry.
fn rotate(a: &mut SmallMatrix, p: usize, q: usize) {
    let apq = a.a[p][q];
    let beta = apq.norm();
    if beta == 0.0 {
        return;
    }
    let w = apq / beta;
    let app = a.a[p][p].re;
    let aqq = a.a[q][q].re;
    let tau = (aqq - app) / (2.0 * beta);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..a.dim {
        if k == p || k == q {
            continue;
        }
        let akp = a.a[k][p];
        let akq = a.a[k][q];
        a.a[k][p] = w * c * akp - s * akq;
        a.a[k][q] = w * s * akp + c * akq;
        a.a[p][k] = a.a[k][p].conj();
        a.a[q][k] = a.a[k][q].conj();
    }
    a.a[p][p] = Complex64::new(c * c * app - 2.0 * c * s * beta + s * s * aqq, 0.0);
    a.a[q][q] = Complex64::new(s * s * app + 2.0 * c * s * beta + c * c * aqq, 0.0);
    a.a[p][q] = Complex64::ZERO;
    a.a[q][p] = Complex64::ZERO;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn real(rows: &[&[f64]]) -> SmallMatrix {
        let v: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        SmallMatrix::from_rows(&v).unwrap()
    }

    #[test]
    fn diagonal_passes_through() {
        let m = real(&[&[3.0, 0.0], &[0.0, 1.0]]);
        let e = hermitian_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(e[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let m = real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(e[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e[1], -1.0, epsilon = 1e-13);
    }

    #[test]
    fn symmetric_two_by_two() {
        let m = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = hermitian_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(e[0], 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e[1], 1.0, epsilon = 1e-13);
    }

    #[test]
    fn complex_hermitian_two_by_two() {
        let i = Complex64::I;
        let one = Complex64::ONE;
        let m = SmallMatrix::from_rows(&[vec![one, i], vec![-i, one]]).unwrap();
        let e = hermitian_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(e[0], 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e[1], 0.0, epsilon = 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = real(&[&[0.0, 1.0], &[0.5, 0.0]]);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_oversized() {
        assert!(SmallMatrix::zero(9).is_err());
        assert!(SmallMatrix::zero(0).is_err());
    }

    #[test]
    fn four_by_four_known_spectrum() {
        // Circulant over {0,1,0,1}: eigenvalues 2, 0, 0, -2.
        let m = real(&[
            &[0.0, 1.0, 0.0, 1.0],
            &[1.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 1.0],
            &[1.0, 0.0, 1.0, 0.0],
        ]);
        let e = hermitian_eigenvalues(&m).unwrap();
        let expect = [2.0, 0.0, 0.0, -2.0];
        for (got, want) in e.iter().zip(expect.iter()) {
            assert_abs_diff_eq!(*got, *want, epsilon = 1e-12);
        }
    }

    #[test]
    fn trace_and_square_sum_preserved() {
        // Deterministic pseudo-random Hermitian 8x8.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = SmallMatrix::zero(8).unwrap();
        for i in 0..8 {
            m.set(i, i, Complex64::new(next(), 0.0));
            for j in (i + 1)..8 {
                let v = Complex64::new(next(), next());
                m.set(i, j, v);
                m.set(j, i, v.conj());
            }
        }
        let e = hermitian_eigenvalues(&m).unwrap();
        let trace: f64 = (0..8).map(|i| m.get(i, i).re).sum();
        let frob2: f64 = (0..8)
            .flat_map(|i| (0..8).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).norm_sqr())
            .sum();
        assert_abs_diff_eq!(e.iter().sum::<f64>(), trace, epsilon = 1e-12);
        assert_abs_diff_eq!(e.iter().map(|x| x * x).sum::<f64>(), frob2, epsilon = 1e-11);
        assert!(e.windows(2).all(|w| w[0] >= w[1]));
    }
}
