//! Bit-swapping search for high-energy rate profiles, plus a brute
//! force oracle for small block lengths.

use super::ncf::RealMatrix;
use super::{rm_score, RateProfile};
#[cfg(test)]
use super::phi_metric;
use crate::error::{Error, Result};
use crate::scalar::Real;
use itertools::Itertools;

/// Candidate index sets for the swap search: `phi_set` holds frozen
/// positions with large RM scores, `psi_set` non-frozen positions with
/// small RM scores. Both have length `budget`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchSpace {
    pub phi_set: Vec<usize>,
    pub psi_set: Vec<usize>,
    pub budget: usize,
}

/// Selects the swap candidates around the frozen/non-frozen boundary.
///
/// Ties among equal RM scores go to the larger index in `phi_set` and
/// to the smaller index in `psi_set`. Both sets are returned ascending.
pub fn build_search_space(profile: &RateProfile, budget: usize) -> Result<SearchSpace> {
    let k = profile.k();
    let nk = profile.n() - k;
    if budget > k.min(nk) {
        return Err(Error::Parameter(format!(
            "swap budget {budget} exceeds min(K, N-K) = {}",
            k.min(nk)
        )));
    }
    let mut frozen = profile.frozen().to_vec();
    frozen.sort_by_key(|&i| (std::cmp::Reverse(rm_score(i)), std::cmp::Reverse(i)));
    let mut phi_set: Vec<usize> = frozen.into_iter().take(budget).collect();
    phi_set.sort_unstable();

    let mut non_frozen = profile.non_frozen();
    non_frozen.sort_by_key(|&i| (rm_score(i), i));
    let mut psi_set: Vec<usize> = non_frozen.into_iter().take(budget).collect();
    psi_set.sort_unstable();

    Ok(SearchSpace {
        phi_set,
        psi_set,
        budget,
    })
}

/// One evaluated swap: the indices moved out of and into the frozen
/// set, and the metric of the resulting profile.
#[derive(Clone, PartialEq, Debug)]
pub struct SwapRecord<R> {
    pub unfrozen: Vec<usize>,
    pub frozen: Vec<usize>,
    pub phi: R,
}

/// Outcome of a profile search.
#[derive(Clone, Debug)]
pub struct OptimizationResult<R> {
    pub best_profile: RateProfile,
    pub best_metric: R,
    pub evaluations: usize,
    pub trace: Vec<SwapRecord<R>>,
}

/// Maximizes the NCF metric by swapping equal-sized subsets between the
/// search-space sets.
///
/// All pairs `A (subset of phi_set)`, `B (subset of psi_set)` with
/// `|A| = |B| = j` for `j = 0..=budget` are evaluated (`C(2M, M)` in
/// total), enumerated by increasing `j` and then lexicographically; the
/// first profile attaining the maximum wins ties. The trace records
/// every evaluation in order.
pub fn bit_swap_optimize<R: Real>(
    start: &RateProfile,
    budget: usize,
    gt: &RealMatrix<R>,
) -> Result<OptimizationResult<R>> {
    let space = build_search_space(start, budget)?;
    let n = start.n();
    if gt.rows() != n || gt.cols() != n {
        return Err(Error::Dimension(format!(
            "profile length {n} does not match {}x{} matrix",
            gt.rows(),
            gt.cols()
        )));
    }

    // Base sum r(v) G~ of the starting profile; each candidate adds the
    // unfrozen rows and removes the newly frozen ones.
    let mut base = vec![R::zero(); n];
    for i in start.non_frozen() {
        for (acc, &x) in base.iter_mut().zip(gt.row(i - 1)) {
            *acc = *acc + x;
        }
    }

    let mut best: Option<(R, Vec<usize>, Vec<usize>)> = None;
    let mut trace = Vec::new();
    let mut scratch = vec![R::zero(); n];

    for j in 0..=budget {
        for a in space.phi_set.iter().copied().combinations(j) {
            for b in space.psi_set.iter().copied().combinations(j) {
                scratch.copy_from_slice(&base);
                for &i in &a {
                    for (acc, &x) in scratch.iter_mut().zip(gt.row(i - 1)) {
                        *acc = *acc + x;
                    }
                }
                for &i in &b {
                    for (acc, &x) in scratch.iter_mut().zip(gt.row(i - 1)) {
                        *acc = *acc - x;
                    }
                }
                let phi: R = scratch.iter().map(|&x| x * x).sum();
                trace.push(SwapRecord {
                    unfrozen: a.clone(),
                    frozen: b.clone(),
                    phi,
                });
                if best.as_ref().map_or(true, |(m, _, _)| phi > *m) {
                    best = Some((phi, a.clone(), b.clone()));
                }
            }
        }
    }

    let (best_metric, a, b) = best.expect("at least the empty swap is evaluated");
    let best_profile = start.with_swap(&a, &b)?;
    Ok(OptimizationResult {
        best_profile,
        best_metric,
        evaluations: trace.len(),
        trace,
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Upper bound on the feasible-set size accepted by
/// [`exhaustive_optimize`].
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

/// Global maximum of the NCF metric over every frozen set of size
/// `n - k`, by direct enumeration. Only improvements are recorded in
/// the trace; `evaluations` counts every enumerated profile.
pub fn exhaustive_optimize<R: Real>(
    n: usize,
    k: usize,
    gt: &RealMatrix<R>,
) -> Result<OptimizationResult<R>> {
    if k > n || n == 0 {
        return Err(Error::Parameter(format!("invalid (n, k) = ({n}, {k})")));
    }
    if gt.rows() != n || gt.cols() != n {
        return Err(Error::Dimension(format!(
            "(n, k) = ({n}, {k}) does not match {}x{} matrix",
            gt.rows(),
            gt.cols()
        )));
    }
    let count = binomial(n, k);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::Parameter(format!(
            "C({n}, {k}) = {count} exceeds the exhaustive search limit {EXHAUSTIVE_LIMIT}"
        )));
    }

    struct Search<'a, R> {
        gt: &'a RealMatrix<R>,
        n: usize,
        k: usize,
        sum: Vec<R>,
        chosen: Vec<usize>,
        best_metric: R,
        best_set: Vec<usize>,
        evaluations: usize,
        trace: Vec<SwapRecord<R>>,
    }

    impl<R: Real> Search<'_, R> {
        // Enumerates ascending non-frozen sets, keeping the running
        // row sum incrementally.
        fn recurse(&mut self, next: usize) {
            if self.chosen.len() == self.k {
                let phi: R = self.sum.iter().map(|&x| x * x).sum();
                self.evaluations += 1;
                if phi > self.best_metric {
                    self.best_metric = phi;
                    self.best_set = self.chosen.clone();
                    self.trace.push(SwapRecord {
                        unfrozen: self.chosen.clone(),
                        frozen: Vec::new(),
                        phi,
                    });
                }
                return;
            }
            let remaining = self.k - self.chosen.len();
            for i in next..=self.n - remaining + 1 {
                for (acc, &x) in self.sum.iter_mut().zip(self.gt.row(i - 1)) {
                    *acc = *acc + x;
                }
                self.chosen.push(i);
                self.recurse(i + 1);
                self.chosen.pop();
                for (acc, &x) in self.sum.iter_mut().zip(self.gt.row(i - 1)) {
                    *acc = *acc - x;
                }
            }
        }
    }

    let mut search = Search {
        gt,
        n,
        k,
        sum: vec![R::zero(); n],
        chosen: Vec::with_capacity(k),
        best_metric: R::neg_infinity(),
        best_set: Vec::new(),
        evaluations: 0,
        trace: Vec::new(),
    };
    search.recurse(1);

    let non_frozen: std::collections::HashSet<usize> = search.best_set.iter().copied().collect();
    let best_profile = RateProfile::new(n, k, (1..=n).filter(|i| !non_frozen.contains(i)))?;
    Ok(OptimizationResult {
        best_profile,
        best_metric: search.best_metric,
        evaluations: search.evaluations,
        trace: search.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{gf2_matmul, polar_transform_matrix, toeplitz_conv_matrix, ConvPolynomial};
    use crate::rate_profile::{compression_matrix, rm_design};

    fn compression_for(g_octal: &str, n: usize) -> RealMatrix<f64> {
        let g = ConvPolynomial::parse_octal(g_octal).unwrap();
        let stages = n.trailing_zeros();
        let gm = gf2_matmul(
            &toeplitz_conv_matrix(&g, n).unwrap(),
            &polar_transform_matrix(stages).unwrap(),
        )
        .unwrap();
        compression_matrix(&gm).unwrap()
    }

    #[test]
    fn search_space_reproduces_published_sets() {
        let p = rm_design(128, 64).unwrap();
        let s = build_search_space(&p, 2).unwrap();
        assert_eq!(s.phi_set, vec![105, 113]);
        assert_eq!(s.psi_set, vec![16, 24]);
        let s = build_search_space(&p, 4).unwrap();
        assert_eq!(s.phi_set, vec![99, 101, 105, 113]);
        assert_eq!(s.psi_set, vec![16, 24, 28, 30]);
    }

    #[test]
    fn search_space_zero_budget_and_overflow() {
        let p = rm_design(128, 64).unwrap();
        let s = build_search_space(&p, 0).unwrap();
        assert!(s.phi_set.is_empty() && s.psi_set.is_empty());
        assert!(build_search_space(&p, 65).is_err());
    }

    #[test]
    fn zero_budget_returns_start_unchanged() {
        let p = rm_design(128, 64).unwrap();
        let gt = compression_for("177", 128);
        let r = bit_swap_optimize(&p, 0, &gt).unwrap();
        assert_eq!(r.best_profile, p);
        assert_eq!(r.evaluations, 1);
        assert_eq!(r.best_metric, phi_metric(&p, &gt).unwrap());
    }

    #[test]
    fn swap_search_never_loses_to_start() {
        let p = rm_design(64, 32).unwrap();
        let gt = compression_for("133", 64);
        let start_phi = phi_metric(&p, &gt).unwrap();
        for budget in [1, 2, 3] {
            let r = bit_swap_optimize(&p, budget, &gt).unwrap();
            assert!(r.best_metric >= start_phi);
            assert_eq!(r.evaluations, (0..=budget).map(|j| binomial(budget, j).pow(2) as usize).sum::<usize>());
        }
    }

    #[test]
    fn evaluation_count_is_central_binomial() {
        let p = rm_design(128, 64).unwrap();
        let gt = compression_for("177", 128);
        let r = bit_swap_optimize(&p, 4, &gt).unwrap();
        assert_eq!(r.evaluations, 70); // C(8, 4)
        assert_eq!(r.trace.len(), 70);
    }

    #[test]
    fn exhaustive_bounds_swap_search() {
        let gt = compression_for("133", 8);
        let p = rm_design(8, 4).unwrap();
        let oracle = exhaustive_optimize(8, 4, &gt).unwrap();
        assert_eq!(oracle.evaluations, 70);
        for budget in [0, 1, 2, 3, 4] {
            let r = bit_swap_optimize(&p, budget, &gt).unwrap();
            assert!(
                oracle.best_metric >= r.best_metric - 1e-12,
                "budget {budget}: oracle {} < swap {}",
                oracle.best_metric,
                r.best_metric
            );
        }
    }

    #[test]
    fn exhaustive_full_rate_single_point() {
        let gt = compression_for("7", 4);
        let r = exhaustive_optimize(4, 4, &gt).unwrap();
        assert_eq!(r.evaluations, 1);
        let full = RateProfile::new(4, 4, []).unwrap();
        assert_eq!(r.best_metric, phi_metric(&full, &gt).unwrap());
    }

    #[test]
    fn exhaustive_rejects_huge_spaces() {
        let gt: RealMatrix<f64> = RealMatrix::zeros(64, 64);
        assert!(exhaustive_optimize(64, 32, &gt).is_err());
    }

    #[test]
    fn unfreezing_grows_phi_monotonically() {
        let gt = compression_for("133", 16);
        let p = rm_design(16, 8).unwrap();
        let phi0 = phi_metric(&p, &gt).unwrap();
        for &i in p.frozen() {
            let grown = p.with_swap(&[i], &[]).unwrap();
            assert!(phi_metric(&grown, &gt).unwrap() >= phi0);
        }
    }
}
