//! Dense pure-state vectors.
//!
//! Bit convention, used identically everywhere in this crate: qubit k of a
//! Q-qubit register occupies bit (Q-1-k) of the basis index, so qubit 0 is
//! the most significant bit and |10...0> has index 2^(Q-1).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense simulation limit. 2^23 amplitudes is 128 MiB of Complex64.
pub const MAX_QUBITS: usize = 23;

const NORM_TOL: f64 = 1e-10;

/// Bit mask selecting qubit k in a `qubits`-wide register.
pub fn qubit_mask(qubits: usize, k: usize) -> usize {
    assert!(k < qubits);
    1usize << (qubits - 1 - k)
}

/// Insert a zero bit at `pos` (counted from the least significant end),
/// shifting the bits at and above `pos` up by one.
pub(crate) fn insert_zero_bit(x: usize, pos: usize) -> usize {
    ((x >> pos) << (pos + 1)) | (x & ((1usize << pos) - 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    fn check_qubits(qubits: usize) -> Result<()> {
        if qubits == 0 {
            return Err(Error::Domain("register needs at least one qubit".into()));
        }
        if qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(())
    }

    /// Computational basis state |index>.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        Self::check_qubits(qubits)?;
        let len = 1usize << qubits;
        if index >= len {
            return Err(Error::Domain(format!(
                "basis index {index} outside register of {qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::ZERO; len];
        amps[index] = Complex64::ONE;
        Ok(Self { qubits, amps })
    }

    /// Wrap amplitudes that are already normalized (within 1e-10), then
    /// rescale so the stored norm is exactly 1.
    pub fn from_amplitudes(qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_qubits(qubits)?;
        if amps.len() != 1usize << qubits {
            return Err(Error::Domain(format!(
                "amplitude count {} does not match {qubits} qubits",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!(
                "state norm {norm} deviates from 1 beyond {NORM_TOL:.0e}"
            )));
        }
        Ok(Self::rescaled(qubits, amps, norm))
    }

    /// Wrap arbitrary non-null amplitudes, normalizing them.
    pub fn from_unnormalized(qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_qubits(qubits)?;
        if amps.len() != 1usize << qubits {
            return Err(Error::Domain(format!(
                "amplitude count {} does not match {qubits} qubits",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-150 {
            return Err(Error::Numeric(format!("cannot normalize norm {norm}")));
        }
        Ok(Self::rescaled(qubits, amps, norm))
    }

    fn rescaled(qubits: usize, mut amps: Vec<Complex64>, norm: f64) -> Self {
        if norm != 1.0 {
            let inv = 1.0 / norm;
            for a in &mut amps {
                *a *= inv;
            }
        }
        Self { qubits, amps }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mask(&self, k: usize) -> usize {
        qubit_mask(self.qubits, k)
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.qubits != other.qubits {
            return Err(Error::Domain(format!(
                "register mismatch: {} vs {} qubits",
                self.qubits, other.qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |<self|other>|^2.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Kronecker product; `self` supplies the high-order qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let qubits = self.qubits + other.qubits;
        Self::check_qubits(qubits)?;
        let mut amps = Vec::with_capacity(1usize << qubits);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { qubits, amps })
    }

    /// Symmetric (Dicke) state |n; k>: the uniform superposition of all
    /// basis states of Hamming weight k.
    pub fn symmetric_state(n: usize, k: usize) -> Result<Self> {
        Self::check_qubits(n)?;
        if k > n {
            return Err(Error::Domain(format!("weight {k} exceeds {n} qubits")));
        }
        let count = binomial(n, k);
        let coeff = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
        let mut amps = vec![Complex64::ZERO; 1usize << n];
        for (idx, a) in amps.iter_mut().enumerate() {
            if idx.count_ones() as usize == k {
                *a = coeff;
            }
        }
        Ok(Self { qubits: n, amps })
    }

    /// The symmetric web state sqrt(1-a^2)|n;0> + a|n;1> whose every pair
    /// carries concurrence exactly `concurrence`, via a = sqrt(c*n/2).
    /// Requires 0 <= c <= 2/n (c = 2/n is the pure W state).
    pub fn symmetric_web_state(n: usize, concurrence: f64) -> Result<Self> {
        Self::check_qubits(n)?;
        if n < 2 {
            return Err(Error::Domain("web state needs at least 2 qubits".into()));
        }
        let cap = 2.0 / n as f64;
        if !(0.0..=cap + 1e-15).contains(&concurrence) {
            return Err(Error::Domain(format!(
                "pair concurrence {concurrence} outside [0, 2/{n}]"
            )));
        }
        let a = (concurrence * n as f64 / 2.0).min(1.0).sqrt();
        let ground = Self::basis(n, 0)?;
        let w = Self::symmetric_state(n, 1)?;
        let mut amps = vec![Complex64::ZERO; 1usize << n];
        let g = (1.0 - a * a).max(0.0).sqrt();
        for (i, out) in amps.iter_mut().enumerate() {
            *out = g * ground.amps[i] + a * w.amps[i];
        }
        Self::from_amplitudes(n, amps)
    }

    /// Parse the statevector text format:
    /// header `qubits <q>`, then one `<index> <re> <im>` line per nonzero
    /// amplitude. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut qubits: Option<usize> = None;
        let mut amps: Vec<Complex64> = Vec::new();
        let mut seen: Vec<bool> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match qubits {
                None => {
                    if fields.len() != 2 || fields[0] != "qubits" {
                        return Err(Error::Parse {
                            line: lineno,
                            message: "expected header `qubits <n>`".into(),
                        });
                    }
                    let q: usize = fields[1].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad qubit count `{}`", fields[1]),
                    })?;
                    Self::check_qubits(q).map_err(|e| Error::Parse {
                        line: lineno,
                        message: e.to_string(),
                    })?;
                    qubits = Some(q);
                    amps = vec![Complex64::ZERO; 1usize << q];
                    seen = vec![false; 1usize << q];
                }
                Some(_) => {
                    if fields.len() != 3 {
                        return Err(Error::Parse {
                            line: lineno,
                            message: "expected `<index> <re> <im>`".into(),
                        });
                    }
                    let idx: usize = fields[0].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad index `{}`", fields[0]),
                    })?;
                    if idx >= amps.len() {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("index {idx} outside register"),
                        });
                    }
                    if seen[idx] {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("duplicate index {idx}"),
                        });
                    }
                    let re: f64 = fields[1].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad real part `{}`", fields[1]),
                    })?;
                    let im: f64 = fields[2].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad imaginary part `{}`", fields[2]),
                    })?;
                    seen[idx] = true;
                    amps[idx] = Complex64::new(re, im);
                }
            }
        }
        let qubits = qubits.ok_or(Error::Parse {
            line: 1,
            message: "empty statevector file".into(),
        })?;
        Self::from_amplitudes(qubits, amps).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })
    }

    /// Inverse of `parse`; omits zero amplitudes, floats round-trip exactly.
    pub fn serialize(&self) -> String {
        let mut out = format!("qubits {}\n", self.qubits);
        for (idx, a) in self.amps.iter().enumerate() {
            if a.re != 0.0 || a.im != 0.0 {
                out.push_str(&format!("{idx} {} {}\n", a.re, a.im));
            }
        }
        out
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn qubit_zero_is_most_significant() {
        assert_eq!(qubit_mask(4, 0), 0b1000);
        assert_eq!(qubit_mask(4, 3), 0b0001);
    }

    #[test]
    fn insert_zero_bit_examples() {
        assert_eq!(insert_zero_bit(0b101, 1), 0b1001);
        assert_eq!(insert_zero_bit(0b11, 0), 0b110);
        assert_eq!(insert_zero_bit(0b11, 2), 0b011);
    }

    #[test]
    fn basis_state_has_single_amplitude() {
        let s = StateVector::basis(3, 0b100).unwrap();
        assert_eq!(s.amplitude(4), Complex64::ONE);
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(
            StateVector::basis(MAX_QUBITS + 1, 0),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn w_state_amplitudes() {
        let w = StateVector::symmetric_state(3, 1).unwrap();
        let c = 1.0 / 3f64.sqrt();
        for idx in [0b001, 0b010, 0b100] {
            assert_abs_diff_eq!(w.amplitude(idx).re, c, epsilon = 1e-15);
        }
        assert_eq!(w.amplitude(0b000), Complex64::ZERO);
        assert_eq!(w.amplitude(0b111), Complex64::ZERO);
    }

    #[test]
    fn web_state_at_cap_is_w_state() {
        let n = 5;
        let web = StateVector::symmetric_web_state(n, 2.0 / n as f64).unwrap();
        let w = StateVector::symmetric_state(n, 1).unwrap();
        assert_abs_diff_eq!(web.fidelity(&w).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn tensor_orders_high_qubits_first() {
        let one = StateVector::basis(1, 1).unwrap();
        let zero = StateVector::basis(2, 0).unwrap();
        let t = one.tensor(&zero).unwrap();
        assert_eq!(t.qubits(), 3);
        assert_eq!(t.amplitude(0b100), Complex64::ONE);
    }

    #[test]
    fn parse_serialize_round_trip() {
        let w = StateVector::symmetric_state(4, 2).unwrap();
        let text = w.serialize();
        let back = StateVector::parse(&text).unwrap();
        assert_eq!(w, back);
    }

    #[test]
    fn parse_rejects_unnormalized() {
        let text = "qubits 1\n0 0.5 0\n";
        assert!(matches!(
            StateVector::parse(text),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn parse_rejects_duplicate_index() {
        let text = "qubits 1\n0 1 0\n0 0 0\n";
        assert!(matches!(
            StateVector::parse(text),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let text = "# a comment\n\nqubits 1\n# another\n1 1 0\n";
        let s = StateVector::parse(text).unwrap();
        assert_eq!(s.amplitude(1), Complex64::ONE);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(8, 0), 1);
        assert_eq!(binomial(6, 6), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
