//! Normalized compression factor (NCF) spectrum and energy metric.
//!
//! Coded bit `i` is the GF(2) sum of the `p_i` input bits selected by
//! column `i` of the generator matrix; `r_i` of them are non-frozen.
//! The NCF of the bit is the ratio `gamma_i = r_i / p_i`, and the
//! energy of the spectrum is `E = sum gamma_i^2`, which doubles as the
//! optimization metric `phi`.

use super::RateProfile;
use crate::error::{Error, Result};
use crate::gf2::{column_weights, integer_vecmat, BitMatrix};
use crate::scalar::Real;
use num_rational::Ratio;

/// Dense row-major real matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct RealMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Real> RealMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> R {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: R) {
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[R] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }
}

/// Compression-coefficient matrix: each column of `g` divided by its
/// Hamming weight, over the reals. Errors on a zero column, which
/// signals a non-invertible generator matrix.
pub fn compression_matrix<R: Real>(g: &BitMatrix) -> Result<RealMatrix<R>> {
    let weights = column_weights(g);
    if let Some(j) = weights.iter().position(|&w| w == 0) {
        return Err(Error::ZeroColumn { index: j + 1 });
    }
    let mut out = RealMatrix::zeros(g.rows(), g.cols());
    for i in 0..g.rows() {
        for j in g.row_ones(i) {
            out.set(i, j, R::one() / R::from_u64(weights[j]).unwrap());
        }
    }
    Ok(out)
}

/// Per-position NCF spectrum of a profile through a transform matrix.
///
/// `counts[i]` is the number of non-frozen input bits combined into
/// coded bit `i`, `weights[i]` the column weight, and `gamma[i]` their
/// exact ratio. `energy` is the squared Euclidean norm of the real
/// spectrum.
#[derive(Clone, PartialEq, Debug)]
pub struct NcfSpectrum<R> {
    counts: Vec<u64>,
    weights: Vec<u64>,
    gamma: Vec<Ratio<u64>>,
    energy: R,
}

impl<R: Real> NcfSpectrum<R> {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Exact per-position ratios `r_i / p_i`.
    pub fn gamma(&self) -> &[Ratio<u64>] {
        &self.gamma
    }

    /// Real-valued view of the ratios.
    pub fn gamma_real(&self) -> Vec<R> {
        self.gamma
            .iter()
            .map(|g| R::from_u64(*g.numer()).unwrap() / R::from_u64(*g.denom()).unwrap())
            .collect()
    }

    pub fn energy(&self) -> R {
        self.energy
    }
}

/// Computes the NCF spectrum of `profile` through the square transform
/// `m` (the convolutional matrix for the u-level spectrum, the full
/// generator matrix for the x-level one).
pub fn ncf_spectrum<R: Real>(profile: &RateProfile, m: &BitMatrix) -> Result<NcfSpectrum<R>> {
    if m.rows() != profile.n() || m.cols() != profile.n() {
        return Err(Error::Dimension(format!(
            "profile length {} does not match {}x{} matrix",
            profile.n(),
            m.rows(),
            m.cols()
        )));
    }
    let counts = integer_vecmat(&profile.indicator(), m)?;
    let weights = column_weights(m);
    if let Some(j) = weights.iter().position(|&w| w == 0) {
        return Err(Error::ZeroColumn { index: j + 1 });
    }
    let gamma: Vec<Ratio<u64>> = counts
        .iter()
        .zip(&weights)
        .map(|(&r, &p)| Ratio::new(r, p))
        .collect();
    let energy = counts
        .iter()
        .zip(&weights)
        .map(|(&r, &p)| {
            let g = R::from_u64(r).unwrap() / R::from_u64(p).unwrap();
            g * g
        })
        .sum();
    Ok(NcfSpectrum {
        counts,
        weights,
        gamma,
        energy,
    })
}

/// The optimization metric `phi = r(v) G~ G~^T r(v)^T`, computed as the
/// squared Euclidean norm of `r(v) G~`.
pub fn phi_metric<R: Real>(profile: &RateProfile, gt: &RealMatrix<R>) -> Result<R> {
    if gt.rows() != profile.n() || gt.cols() != profile.n() {
        return Err(Error::Dimension(format!(
            "profile length {} does not match {}x{} matrix",
            profile.n(),
            gt.rows(),
            gt.cols()
        )));
    }
    let mut s = vec![R::zero(); gt.cols()];
    for i in profile.non_frozen() {
        for (acc, &x) in s.iter_mut().zip(gt.row(i - 1)) {
            *acc = *acc + x;
        }
    }
    Ok(s.into_iter().map(|x| x * x).sum())
}
