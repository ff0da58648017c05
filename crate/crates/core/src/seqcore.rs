//! Binary sequences over `Z_v` and their spectral machinery.
//!
//! A subset `X ⊆ Z_v` corresponds to the `±1` sequence with `-1` exactly at
//! the positions in `X`. On such sequences we compute the periodic
//! autocorrelation
//!
//! ```text
//! paf_A(s) = Σ_i a_i · a_{(i+s) mod v}
//! ```
//!
//! the discrete Fourier transform `dft_A(k) = Σ_j a_j ω^{jk}` with
//! `ω = exp(2πi/v)`, and the power spectral density `psd_A(k) = |dft_A(k)|²`.
//!
//! For `v = m·d` the *m-compression* of `A` is the length-`d` sequence of
//! column sums `a_j + a_{j+d} + … + a_{j+(m-1)d}`. Its spectrum is the
//! subsampled spectrum of `A`: `psd_A(m·s) = psd_{A^(d)}(s)`.
//!
//! PAF and compression are exact integer arithmetic. Spectra are `f64` and
//! computed by direct summation, which is adequate for `v` in the hundreds.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance used when comparing floating point spectra.
pub const PSD_TOLERANCE: f64 = 1e-6;

/// A sequence with every entry equal to `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinarySequence(Vec<i32>);

impl BinarySequence {
    pub fn new(terms: Vec<i32>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some((index, &value)) = terms.iter().enumerate().find(|(_, &t)| t != 1 && t != -1) {
            return Err(Error::NotBinary { index, value });
        }
        Ok(BinarySequence(terms))
    }

    /// The sequence with `-1` at every position of `subset` and `+1` elsewhere.
    pub fn from_subset(subset: &[u32], v: u32) -> Result<Self> {
        if v == 0 {
            return Err(Error::EmptySequence);
        }
        let mut terms = vec![1; v as usize];
        for &element in subset {
            if element >= v {
                return Err(Error::ResidueOutOfRange {
                    element,
                    modulus: v,
                });
            }
            terms[element as usize] = -1;
        }
        Ok(BinarySequence(terms))
    }

    /// Positions holding `-1`, ascending.
    pub fn to_subset(&self) -> Vec<u32> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == -1)
            .map(|(i, _)| i as u32)
            .collect()
    }

    pub fn terms(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&t| t as i64).sum()
    }
}

impl AsRef<[i32]> for BinarySequence {
    fn as_ref(&self) -> &[i32] {
        &self.0
    }
}

/// An integer sequence, typically the compression of a binary sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerSequence(Vec<i32>);

impl IntegerSequence {
    pub fn new(terms: Vec<i32>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(IntegerSequence(terms))
    }

    pub fn terms(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&t| t as i64).sum()
    }

    pub fn into_terms(self) -> Vec<i32> {
        self.0
    }
}

impl AsRef<[i32]> for IntegerSequence {
    fn as_ref(&self) -> &[i32] {
        &self.0
    }
}

impl From<BinarySequence> for IntegerSequence {
    fn from(seq: BinarySequence) -> Self {
        IntegerSequence(seq.0)
    }
}

pub fn subset_to_sequence(subset: &[u32], v: u32) -> Result<BinarySequence> {
    BinarySequence::from_subset(subset, v)
}

pub fn sequence_to_subset(seq: &BinarySequence) -> Vec<u32> {
    seq.to_subset()
}

/// Periodic autocorrelation at a single shift.
pub fn paf(seq: &[i32], shift: usize) -> Result<i64> {
    let len = seq.len();
    if shift >= len {
        return Err(Error::ShiftOutOfRange { shift, len });
    }
    Ok(paf_unchecked(seq, shift))
}

#[inline]
pub(crate) fn paf_unchecked(seq: &[i32], shift: usize) -> i64 {
    let len = seq.len();
    let (head, tail) = seq.split_at(shift);
    // a_i * a_{i+s} with wrap-around split into two contiguous runs
    let wrapped: i64 = seq[len - shift..]
        .iter()
        .zip(head)
        .map(|(&x, &y)| x as i64 * y as i64)
        .sum();
    let direct: i64 = seq[..len - shift]
        .iter()
        .zip(tail)
        .map(|(&x, &y)| x as i64 * y as i64)
        .sum();
    direct + wrapped
}

/// `paf(seq, s)` for every shift `s = 0..len`.
pub fn paf_vector(seq: &[i32]) -> Vec<i64> {
    (0..seq.len()).map(|s| paf_unchecked(seq, s)).collect()
}

/// Discrete Fourier transform with kernel `exp(2πi·jk/v)`.
pub fn dft(seq: &[i32]) -> Vec<Complex64> {
    dft_real(&seq.iter().map(|&t| t as f64).collect::<Vec<_>>())
}

pub(crate) fn dft_real(seq: &[f64]) -> Vec<Complex64> {
    let len = seq.len();
    let roots = unit_roots(len);
    (0..len)
        .map(|k| {
            seq.iter()
                .enumerate()
                .map(|(j, &a)| roots[(j * k) % len] * a)
                .sum()
        })
        .collect()
}

/// Power spectral density `|dft(k)|²` for every `k`.
pub fn psd(seq: &[i32]) -> Vec<f64> {
    dft(seq).into_iter().map(|z| z.norm_sqr()).collect()
}

/// The `m`-compression of `seq` to length `d`, where `m = len / d`.
pub fn compress(seq: &[i32], d: usize) -> Result<IntegerSequence> {
    let len = seq.len();
    if d == 0 || !len.is_multiple_of(d) {
        return Err(Error::NotADivisor { divisor: d, len });
    }
    let mut out = vec![0i32; d];
    for (i, &a) in seq.iter().enumerate() {
        out[i % d] += a;
    }
    IntegerSequence::new(out)
}

/// `psd_A(m·s)` for `s = 0..d`, with `m = len / d`.
pub fn psd_at_multiples(seq: &[i32], d: usize) -> Result<Vec<f64>> {
    let len = seq.len();
    if d == 0 || !len.is_multiple_of(d) {
        return Err(Error::NotADivisor { divisor: d, len });
    }
    let m = len / d;
    let table = PsdTable::new(len);
    Ok((0..d).map(|s| table.psd_at(seq, m * s)).collect())
}

fn unit_roots(len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / len as f64))
        .collect()
}

/// Precomputed twiddle factors for evaluating single PSD values of
/// length-`len` sequences. Used by the search hot loops.
#[derive(Debug, Clone)]
pub struct PsdTable {
    len: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl PsdTable {
    pub fn new(len: usize) -> Self {
        let angle = |k: usize| TAU * k as f64 / len as f64;
        PsdTable {
            len,
            cos: (0..len).map(|k| angle(k).cos()).collect(),
            sin: (0..len).map(|k| angle(k).sin()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn psd_at(&self, seq: &[i32], k: usize) -> f64 {
        debug_assert_eq!(seq.len(), self.len);
        let mut re = 0.0;
        let mut im = 0.0;
        let mut idx = 0usize;
        let step = k % self.len;
        for &a in seq {
            if a != 0 {
                re += a as f64 * self.cos[idx];
                im += a as f64 * self.sin[idx];
            }
            idx += step;
            if idx >= self.len {
                idx -= self.len;
            }
        }
        re * re + im * im
    }

    /// True iff `psd(k) <= bound + tol` for every `k` in `1..=len/2` that
    /// `skip` does not exclude. PSD of a real sequence is symmetric, so the
    /// upper half is implied.
    pub fn within_bound<F>(&self, seq: &[i32], bound: f64, tol: f64, skip: F) -> bool
    where
        F: Fn(usize) -> bool,
    {
        (1..=self.len / 2)
            .filter(|&k| !skip(k))
            .all(|k| self.psd_at(seq, k) <= bound + tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(subset: &[u32], v: u32) -> BinarySequence {
        BinarySequence::from_subset(subset, v).unwrap()
    }

    #[test]
    fn subset_round_trip_examples() {
        assert_eq!(seq(&[0, 1, 3], 7).terms(), &[-1, -1, 1, -1, 1, 1, 1]);
        assert_eq!(seq(&[], 3).terms(), &[1, 1, 1]);
        assert_eq!(seq(&[0, 1, 2, 3], 4).terms(), &[-1; 4]);
        assert_eq!(seq(&[0, 1, 3], 7).to_subset(), vec![0, 1, 3]);
        assert!(BinarySequence::new(vec![1; 5])
            .unwrap()
            .to_subset()
            .is_empty());
        assert_eq!(
            BinarySequence::new(vec![-1, 1]).unwrap().to_subset(),
            vec![0]
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            BinarySequence::from_subset(&[7], 7),
            Err(Error::ResidueOutOfRange {
                element: 7,
                modulus: 7
            })
        );
        assert_eq!(
            BinarySequence::new(vec![1, 0]),
            Err(Error::NotBinary { index: 1, value: 0 })
        );
        assert_eq!(BinarySequence::new(vec![]), Err(Error::EmptySequence));
        assert!(paf(&[1, 1, 1], 3).is_err());
        assert!(compress(&[1, 1, 1, 1], 3).is_err());
        assert!(psd_at_multiples(&[1, 1, 1, 1], 0).is_err());
    }

    #[test]
    fn paf_examples() {
        let a = seq(&[0, 1, 3], 7);
        // brute force over all index pairs
        let brute: i64 = (0..7)
            .map(|i| (a.terms()[i] * a.terms()[(i + 1) % 7]) as i64)
            .sum();
        assert_eq!(brute, -1);
        assert_eq!(paf(a.terms(), 1).unwrap(), -1);
        assert_eq!(paf(a.terms(), 0).unwrap(), 7);
        for s in 0..5 {
            assert_eq!(paf(&[1; 5], s).unwrap(), 5);
        }
    }

    #[test]
    fn dft_psd_examples() {
        let spectrum = dft(&[1, 1, 1, 1]);
        assert!((spectrum[0] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        for z in &spectrum[1..] {
            assert!(z.norm() < 1e-12);
        }
        let p = psd(&[1, 1, 1, 1]);
        assert!((p[0] - 16.0).abs() < 1e-12 && p[1..].iter().all(|x| x.abs() < 1e-12));

        let two = dft(&[1, -1]);
        assert!((two[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((psd(&[1, -1])[1] - 4.0).abs() < 1e-12);

        let total: f64 = psd(seq(&[0, 1, 3], 7).terms()).iter().sum();
        assert!((total - 49.0).abs() < 1e-9);
    }

    #[test]
    fn compress_examples() {
        let a = seq(&[0, 1, 2, 4, 6, 9], 15);
        // direct column sums, independent of `compress`
        let mut oracle = [0i32; 5];
        for (j, slot) in oracle.iter_mut().enumerate() {
            for i in 0..3 {
                *slot += a.terms()[j + 5 * i];
            }
        }
        assert_eq!(oracle, [1, -1, 1, 3, -1]);
        assert_eq!(compress(a.terms(), 5).unwrap().terms(), &oracle);
        assert_eq!(compress(&[1; 6], 3).unwrap().terms(), &[2, 2, 2]);
        assert_eq!(compress(a.terms(), 15).unwrap().terms(), a.terms());
    }

    #[test]
    fn psd_at_multiples_examples() {
        let full = psd_at_multiples(&[1; 6], 3).unwrap();
        let compressed = psd(&[2, 2, 2]);
        for (x, y) in full.iter().zip(&compressed) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!((full[0] - 36.0).abs() < 1e-9 && full[1].abs() < 1e-9);

        let a = seq(&[0, 1, 2, 4, 6, 9], 15);
        let at_zero = psd_at_multiples(a.terms(), 5).unwrap()[0];
        assert!((at_zero - 9.0).abs() < 1e-9);
        assert!((psd(&[1, -1, 1, 3, -1])[0] - 9.0).abs() < 1e-9);
    }

    #[test]
    fn psd_table_matches_direct_transform() {
        let a = seq(&[0, 1, 2, 4, 6, 9], 15);
        let table = PsdTable::new(15);
        let direct = psd(a.terms());
        for (k, want) in direct.iter().enumerate() {
            assert!((table.psd_at(a.terms(), k) - want).abs() < 1e-9);
        }
    }
}
