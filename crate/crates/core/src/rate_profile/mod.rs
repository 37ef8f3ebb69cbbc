//! Rate-profile construction and optimization.
//!
//! A rate profile assigns the `K` information positions and `N - K`
//! frozen (zero) positions of the length-`N` input vector `v`. This
//! module provides the Reed-Muller (RM) score design, the NCF spectrum
//! and its energy metric, the bit-swapping search that maximizes the
//! metric, BEC capacity profiles, a Gaussian-approximation polar
//! construction baseline, and the profile file format.

mod construct;
mod io;
mod ncf;
mod optimize;

pub use construct::{bec_capacity_profile, ga_construction};
pub use io::{
    export_profile, import_profile, write_spectrum_csv, ProfileMethod, ProfileRecord,
    SpectrumCsvOptions,
};
pub use ncf::{compression_matrix, ncf_spectrum, phi_metric, NcfSpectrum, RealMatrix};
pub use optimize::{
    bit_swap_optimize, build_search_space, exhaustive_optimize, OptimizationResult, SearchSpace,
    SwapRecord,
};

use crate::error::{Error, Result};

/// RM score of the 1-based position `i`: the Hamming weight of the
/// binary representation of `i - 1`.
pub fn rm_score(i: usize) -> u32 {
    assert!(i >= 1, "positions are 1-based");
    ((i - 1) as u64).count_ones()
}

/// Frozen/non-frozen assignment for a length-`N` input vector.
///
/// Positions are 1-based. The indicator vector `r(v)` is 1 exactly on
/// the non-frozen positions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RateProfile {
    n: usize,
    k: usize,
    frozen: Vec<usize>,
    frozen_mask: Vec<bool>,
}

impl RateProfile {
    /// Builds a profile from the frozen index set, validating the
    /// invariants: indices in `1..=n`, no duplicates, `|frozen| = n - k`.
    pub fn new(n: usize, k: usize, frozen: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 || n > crate::gf2::MAX_DIM {
            return Err(Error::Profile(format!("block length {n} out of range")));
        }
        if k > n {
            return Err(Error::Profile(format!("k = {k} exceeds n = {n}")));
        }
        let mut mask = vec![false; n];
        let mut sorted = Vec::with_capacity(n - k);
        for i in frozen {
            if i < 1 || i > n {
                return Err(Error::Profile(format!("frozen index {i} outside 1..={n}")));
            }
            if mask[i - 1] {
                return Err(Error::Profile(format!("duplicate frozen index {i}")));
            }
            mask[i - 1] = true;
            sorted.push(i);
        }
        if sorted.len() != n - k {
            return Err(Error::Profile(format!(
                "expected {} frozen indices, got {}",
                n - k,
                sorted.len()
            )));
        }
        sorted.sort_unstable();
        Ok(Self {
            n,
            k,
            frozen: sorted,
            frozen_mask: mask,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Frozen indices, ascending, 1-based.
    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    /// Non-frozen indices, ascending, 1-based.
    pub fn non_frozen(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| !self.frozen_mask[i - 1]).collect()
    }

    /// 1-based query.
    pub fn is_frozen(&self, i: usize) -> bool {
        assert!((1..=self.n).contains(&i), "position {i} outside 1..={}", self.n);
        self.frozen_mask[i - 1]
    }

    /// 0-based mask, `true` on frozen positions, for decoder loops.
    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen_mask
    }

    /// The indicator vector `r(v)`: 1 on non-frozen positions.
    pub fn indicator(&self) -> Vec<u64> {
        self.frozen_mask.iter().map(|&f| u64::from(!f)).collect()
    }

    /// New profile with `unfreeze` removed from and `freeze` added to
    /// the frozen set.
    pub fn with_swap(&self, unfreeze: &[usize], freeze: &[usize]) -> Result<Self> {
        let mut mask = self.frozen_mask.clone();
        for &i in unfreeze {
            if !mask[i - 1] {
                return Err(Error::Profile(format!("cannot unfreeze non-frozen index {i}")));
            }
            mask[i - 1] = false;
        }
        for &i in freeze {
            if mask[i - 1] {
                return Err(Error::Profile(format!("cannot freeze frozen index {i}")));
            }
            mask[i - 1] = true;
        }
        let frozen = (1..=self.n).filter(|&i| mask[i - 1]);
        Self::new(self.n, self.k + unfreeze.len() - freeze.len(), frozen)
    }
}

/// Reed-Muller rate profile: freezes the `N - K` positions with the
/// smallest RM scores. Among equal scores the smaller index is frozen,
/// so the larger indices carry information.
pub fn rm_design(n: usize, k: usize) -> Result<RateProfile> {
    if !n.is_power_of_two() {
        return Err(Error::Parameter(format!("block length {n} is not a power of two")));
    }
    if k < 1 || k > n {
        return Err(Error::Parameter(format!("k = {k} outside 1..={n}")));
    }
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&i| (rm_score(i), i));
    RateProfile::new(n, k, order.into_iter().take(n - k))
}
