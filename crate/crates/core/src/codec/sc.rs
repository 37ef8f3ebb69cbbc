//! Successive cancellation decoding of PAC codes.
//!
//! The decoder walks the polar recursion depth-first. At each leaf it
//! holds the LLR of the convolutional output bit `u_i`; the two
//! hypotheses for the input bit `v_i` induce complementary values of
//! `u_i` (the leading tap is always 1), so the decision picks the
//! hypothesis whose induced `u_i` agrees with the LLR sign. Frozen
//! leaves fix `v_i = 0`; the register advances on every leaf.
//!
//! LLR convention: positive favors bit 0. An LLR of exactly 0 decides
//! `v_i = 0`.

use super::{f_node, g_node, path_penalty, ConvState, DecoderOutput, PacCode};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reusable successive cancellation decoder.
///
/// One instance holds mutable per-frame workspace; use one instance per
/// thread. The code itself is shared immutably.
pub struct ScDecoder<'c, R> {
    code: &'c PacCode,
    min_sum: bool,
    /// Per-depth LLR planes, absolute position indexing.
    llr: Vec<Vec<R>>,
    /// Per-depth partial-sum planes.
    bits: Vec<Vec<u8>>,
    vhat: Vec<u8>,
    state: ConvState,
    metric: R,
}

impl<'c, R: Real> ScDecoder<'c, R> {
    pub fn new(code: &'c PacCode) -> Self {
        Self::with_min_sum(code, false)
    }

    /// `min_sum = true` replaces the exact check-node rule with the
    /// min-sum approximation everywhere (it is exact on the BEC either
    /// way).
    pub fn with_min_sum(code: &'c PacCode, min_sum: bool) -> Self {
        let n = code.n();
        let depths = code.stages() as usize + 1;
        Self {
            code,
            min_sum,
            llr: vec![vec![R::zero(); n]; depths],
            bits: vec![vec![0u8; n]; depths],
            vhat: vec![0u8; n],
            state: ConvState::new(code.generator().memory()),
            metric: R::zero(),
        }
    }

    pub fn decode(&mut self, llr: &[R]) -> Result<DecoderOutput<R>> {
        let n = self.code.n();
        if llr.len() != n {
            return Err(Error::Dimension(format!(
                "LLR length {} does not match n = {n}",
                llr.len()
            )));
        }
        self.llr[0].copy_from_slice(llr);
        self.vhat.clear();
        self.vhat.resize(n, 0);
        self.state = ConvState::new(self.code.generator().memory());
        self.metric = R::zero();
        self.node(0, 0, n);
        Ok(DecoderOutput::from_vhat(
            std::mem::take(&mut self.vhat),
            self.code,
            self.metric,
        ))
    }

    fn node(&mut self, depth: usize, base: usize, size: usize) {
        if size == 1 {
            self.leaf(depth, base);
            return;
        }
        let half = size / 2;
        for j in 0..half {
            let a = self.llr[depth][base + j];
            let b = self.llr[depth][base + j + half];
            self.llr[depth + 1][base + j] = f_node(a, b, self.min_sum);
        }
        self.node(depth + 1, base, half);
        for j in 0..half {
            let a = self.llr[depth][base + j];
            let b = self.llr[depth][base + j + half];
            let u = self.bits[depth + 1][base + j];
            self.llr[depth + 1][base + half + j] = g_node(a, b, u);
        }
        self.node(depth + 1, base + half, half);
        for j in 0..half {
            let left = self.bits[depth + 1][base + j];
            let right = self.bits[depth + 1][base + half + j];
            self.bits[depth][base + j] = left ^ right;
            self.bits[depth][base + half + j] = right;
        }
    }

    fn leaf(&mut self, depth: usize, position: usize) {
        let l = self.llr[depth][position];
        let g = self.code.generator();
        let u_for_zero = self.state.output(g, 0);
        let v = if self.code.profile().frozen_mask()[position] {
            0
        } else if l > R::zero() {
            u_for_zero // target u = 0
        } else if l < R::zero() {
            u_for_zero ^ 1 // target u = 1
        } else {
            0 // tie
        };
        let u = u_for_zero ^ (v & g.coeffs()[0]);
        self.metric = self.metric + path_penalty(l, u);
        self.vhat[position] = v;
        self.bits[depth][position] = u;
        self.state.advance(v);
    }
}

/// One-shot successive cancellation decode.
pub fn sc_decode<R: Real>(llr: &[R], code: &PacCode) -> Result<DecoderOutput<R>> {
    ScDecoder::new(code).decode(llr)
}
