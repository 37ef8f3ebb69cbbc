//! Dense GF(2) linear algebra on bit-packed vectors and matrices.
//!
//! Everything here is immutable after construction and safe to share
//! across threads. Matrices are stored row-major, one `u64` word per 64
//! columns. Indexing in this module is 0-based; the 1-based convention
//! used in file formats and documentation is translated at the call
//! sites that need it.

use crate::error::{Error, Result};
use std::fmt;

/// Hard upper bound on matrix/vector dimensions (2^15).
pub const MAX_DIM: usize = 1 << 15;

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

fn check_dim(value: usize, what: &str) -> Result<()> {
    if value == 0 || value > MAX_DIM {
        return Err(Error::Parameter(format!(
            "{what} must be in 1..={MAX_DIM}, got {value}"
        )));
    }
    Ok(())
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            assert!(b <= 1, "bit values must be 0 or 1");
            if b == 1 {
                v.set(i, 1);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        ((self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: u8) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit & 1 == 1 {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place XOR with another vector of the same length.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor_assign");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A dense matrix over GF(2), bit-packed by rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dim(rows, "row count")?;
        check_dim(cols, "column count")?;
        let stride = words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        assert!(row < self.rows && col < self.cols, "index out of range");
        let w = self.words[row * self.stride + col / WORD_BITS];
        ((w >> (col % WORD_BITS)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, bit: u8) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        let mask = 1u64 << (col % WORD_BITS);
        let w = &mut self.words[row * self.stride + col / WORD_BITS];
        if bit & 1 == 1 {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, row: usize) -> &[u64] {
        &self.words[row * self.stride..(row + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, row: usize) -> &mut [u64] {
        &mut self.words[row * self.stride..(row + 1) * self.stride]
    }

    /// Copies row `row` out as a vector.
    pub fn row(&self, row: usize) -> BitVector {
        assert!(row < self.rows, "row index out of range");
        BitVector {
            len: self.cols,
            words: self.row_words(row).to_vec(),
        }
    }

    /// Iterates the column indices of the ones in row `row`.
    pub fn row_ones(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        let words = self.row_words(row);
        words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + bit)
                }
            })
        })
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{})", self.rows, self.cols)
    }
}

/// Binary generator polynomial `g = [g_0, ..., g_m]` of a convolutional
/// transform. Both the leading and the trailing tap must be set.
#[derive(Clone, PartialEq, Eq)]
pub struct ConvPolynomial {
    coeffs: Vec<u8>,
}

impl ConvPolynomial {
    pub fn new(coeffs: Vec<u8>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Polynomial("empty coefficient list".into()));
        }
        if coeffs.iter().any(|&c| c > 1) {
            return Err(Error::Polynomial("coefficients must be 0 or 1".into()));
        }
        if coeffs[0] != 1 {
            return Err(Error::Polynomial("leading tap g_0 must be 1".into()));
        }
        if *coeffs.last().unwrap() != 1 {
            return Err(Error::Polynomial("trailing tap g_m must be 1".into()));
        }
        Ok(Self { coeffs })
    }

    /// Parses an octal literal (optionally `0o`-prefixed), MSB first.
    ///
    /// `"133"` gives `[1,0,1,1,0,1,1]` and `"1"` the identity
    /// convolution `[1]`.
    pub fn parse_octal(text: &str) -> Result<Self> {
        let digits = text
            .strip_prefix("0o")
            .or_else(|| text.strip_prefix("0O"))
            .unwrap_or(text);
        if digits.is_empty() {
            return Err(Error::Polynomial("empty octal literal".into()));
        }
        let mut bits: Vec<u8> = Vec::with_capacity(3 * digits.len());
        for c in digits.chars() {
            let d = c
                .to_digit(8)
                .ok_or_else(|| Error::Polynomial(format!("non-octal character {c:?} in {text:?}")))?
                as u8;
            bits.extend_from_slice(&[(d >> 2) & 1, (d >> 1) & 1, d & 1]);
        }
        // Leading zero bits of the literal are not taps.
        let first_one = bits
            .iter()
            .position(|&b| b == 1)
            .ok_or_else(|| Error::Polynomial(format!("{text:?} has no leading tap (g_0 = 0)")))?;
        Self::new(bits.split_off(first_one))
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// Memory `m` of the shift register (degree of the polynomial).
    pub fn memory(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Number of nonzero taps.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().map(|&c| c as usize).sum()
    }

    /// `true` for the identity convolution `g = [1]`, which degenerates
    /// the PAC code to a plain polar code.
    pub fn is_identity(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Formats the taps back into a `0o`-prefixed octal literal.
    pub fn to_octal_string(&self) -> String {
        let mut digits = Vec::new();
        for chunk in self.coeffs.rchunks(3) {
            let d = chunk.iter().fold(0u8, |acc, &b| (acc << 1) | b);
            digits.push(char::from_digit(d as u32, 8).unwrap());
        }
        digits.reverse();
        format!("0o{}", digits.into_iter().collect::<String>())
    }
}

impl fmt::Display for ConvPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_octal_string())
    }
}

impl fmt::Debug for ConvPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConvPolynomial({})", self.to_octal_string())
    }
}

/// Upper-triangular banded Toeplitz matrix of the convolution: entry
/// `(i, j)` is `g_{j-i}` when `0 <= j - i <= m`, else zero.
pub fn toeplitz_conv_matrix(g: &ConvPolynomial, n: usize) -> Result<BitMatrix> {
    let mut m = BitMatrix::zeros(n, n)?;
    let taps = g.coeffs();
    for i in 0..n {
        for (t, &tap) in taps.iter().enumerate() {
            let j = i + t;
            if j >= n {
                break;
            }
            if tap == 1 {
                m.set(i, j, 1);
            }
        }
    }
    Ok(m)
}

/// Kronecker power `F^{(x)n}` of the polar kernel `F = [[1,0],[1,1]]`,
/// in natural order (no bit-reversal permutation).
pub fn polar_transform_matrix(stages: u32) -> Result<BitMatrix> {
    let n = 1usize
        .checked_shl(stages)
        .filter(|&n| n <= MAX_DIM)
        .ok_or_else(|| Error::Parameter(format!("2^{stages} exceeds the dimension limit {MAX_DIM}")))?;
    let mut m = BitMatrix::zeros(n, n)?;
    for i in 0..n {
        // Entry (i, j) of F^{(x)n} is 1 iff the support of j is a
        // subset of the support of i; walk the submasks of i.
        let mut j = i;
        loop {
            m.set(i, j, 1);
            if j == 0 {
                break;
            }
            j = (j - 1) & i;
        }
    }
    Ok(m)
}

/// Matrix product over GF(2).
pub fn gf2_matmul(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut out = BitMatrix::zeros(a.rows(), b.cols())?;
    for i in 0..a.rows() {
        for k in a.row_ones(i).collect::<Vec<_>>() {
            let src = b.row_words(k).to_vec();
            let dst = out.row_words_mut(i);
            for (d, s) in dst.iter_mut().zip(&src) {
                *d ^= s;
            }
        }
    }
    Ok(out)
}

/// Vector-matrix product over GF(2).
pub fn gf2_vecmat(v: &BitVector, m: &BitMatrix) -> Result<BitVector> {
    if v.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "vector length {} does not match row count {}",
            v.len(),
            m.rows()
        )));
    }
    let mut out = BitVector::zeros(m.cols());
    for (wi, &w) in v.words().iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let i = wi * WORD_BITS + w.trailing_zeros() as usize;
            w &= w - 1;
            for (d, s) in out.words.iter_mut().zip(m.row_words(i)) {
                *d ^= s;
            }
        }
    }
    Ok(out)
}

/// Vector-matrix product in ordinary integer arithmetic, treating the
/// matrix entries as integers 0/1.
pub fn integer_vecmat(r: &[u64], m: &BitMatrix) -> Result<Vec<u64>> {
    if r.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "vector length {} does not match row count {}",
            r.len(),
            m.rows()
        )));
    }
    let mut out = vec![0u64; m.cols()];
    for (i, &ri) in r.iter().enumerate() {
        if ri == 0 {
            continue;
        }
        for j in m.row_ones(i) {
            out[j] += ri;
        }
    }
    Ok(out)
}

/// Hamming weight of each column.
pub fn column_weights(m: &BitMatrix) -> Vec<u64> {
    let mut out = vec![0u64; m.cols()];
    for i in 0..m.rows() {
        for j in m.row_ones(i) {
            out[j] += 1;
        }
    }
    out
}
