//! Successive cancellation list decoding with LLR path metrics.
//!
//! Each path keeps the LLR vectors along its root-to-node recursion
//! stack, its partial-sum stack, its own convolutional register, and a
//! running metric. Deciding bit `u` against leaf LLR `l` costs
//! `ln(1 + exp(-(1 - 2u) l))`: near zero when the decision follows the
//! LLR sign, about `|l|` otherwise. Non-frozen leaves fork both
//! hypotheses and the list is pruned to the `L` smallest metrics;
//! frozen leaves only pay the penalty.
//!
//! Final selection: with a CRC, the lowest-metric path that passes;
//! if none passes (or no CRC is attached), the lowest-metric path.
//! Ties keep the earliest-created path.

use super::{f_node, g_node, path_penalty, ConvState, DecoderOutput, PacCode};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone)]
struct Path<R> {
    metric: R,
    /// LLR vector per depth along the current recursion stack.
    llr_stack: Vec<Vec<R>>,
    /// Left-child codeword bits saved while the right sibling decodes.
    left_stack: Vec<Vec<u8>>,
    /// Codeword bits of the most recently finished subtree.
    x_ret: Vec<u8>,
    vhat: Vec<u8>,
    state: ConvState,
}

/// Configured list decoder.
pub struct SclDecoder<'c, R> {
    code: &'c PacCode,
    list_size: usize,
    min_sum: bool,
    _marker: std::marker::PhantomData<R>,
}

impl<'c, R: Real> SclDecoder<'c, R> {
    pub fn new(code: &'c PacCode, list_size: usize) -> Result<Self> {
        Self::with_min_sum(code, list_size, false)
    }

    pub fn with_min_sum(code: &'c PacCode, list_size: usize, min_sum: bool) -> Result<Self> {
        if list_size == 0 {
            return Err(Error::Parameter("list size must be at least 1".into()));
        }
        Ok(Self {
            code,
            list_size,
            min_sum,
            _marker: std::marker::PhantomData,
        })
    }

    pub fn decode(&self, llr: &[R]) -> Result<DecoderOutput<R>> {
        let n = self.code.n();
        if llr.len() != n {
            return Err(Error::Dimension(format!(
                "LLR length {} does not match n = {n}",
                llr.len()
            )));
        }
        let root = Path {
            metric: R::zero(),
            llr_stack: vec![llr.to_vec()],
            left_stack: Vec::with_capacity(self.code.stages() as usize),
            x_ret: Vec::new(),
            vhat: vec![0u8; n],
            state: ConvState::new(self.code.generator().memory()),
        };
        let mut paths = vec![root];
        self.decode_node(&mut paths, 0, n);

        // Paths come out sorted by metric with creation order preserved
        // on ties.
        let chosen = match self.code.crc() {
            Some(spec) => paths
                .iter()
                .position(|p| {
                    let decided = super::extract_payload(
                        &crate::gf2::BitVector::from_bits(&p.vhat),
                        self.code.profile(),
                    )
                    .expect("lengths agree");
                    spec.check(&decided)
                })
                .unwrap_or(0),
            None => 0,
        };
        let path = paths.swap_remove(chosen);
        Ok(DecoderOutput::from_vhat(path.vhat, self.code, path.metric))
    }

    fn decode_node(&self, paths: &mut Vec<Path<R>>, base: usize, size: usize) {
        if size == 1 {
            self.leaf(paths, base);
            return;
        }
        let half = size / 2;

        for p in paths.iter_mut() {
            let parent = p.llr_stack.last().expect("stack holds current node");
            let mut left = Vec::with_capacity(half);
            for j in 0..half {
                left.push(f_node(parent[j], parent[j + half], self.min_sum));
            }
            p.llr_stack.push(left);
        }
        self.decode_node(paths, base, half);
        for p in paths.iter_mut() {
            p.llr_stack.pop();
            let x_left = std::mem::take(&mut p.x_ret);
            p.left_stack.push(x_left);
        }

        for p in paths.iter_mut() {
            let parent = p.llr_stack.last().expect("stack holds current node");
            let x_left = p.left_stack.last().expect("left child finished");
            let mut right = Vec::with_capacity(half);
            for j in 0..half {
                right.push(g_node(parent[j], parent[j + half], x_left[j]));
            }
            p.llr_stack.push(right);
        }
        self.decode_node(paths, base + half, half);
        for p in paths.iter_mut() {
            p.llr_stack.pop();
            let x_right = std::mem::take(&mut p.x_ret);
            let x_left = p.left_stack.pop().expect("left child finished");
            let mut x = Vec::with_capacity(size);
            for j in 0..half {
                x.push(x_left[j] ^ x_right[j]);
            }
            x.extend_from_slice(&x_right);
            p.x_ret = x;
        }
    }

    fn leaf(&self, paths: &mut Vec<Path<R>>, position: usize) {
        let g = self.code.generator();
        let frozen = self.code.profile().frozen_mask()[position];
        let mut next: Vec<Path<R>> = Vec::with_capacity(if frozen {
            paths.len()
        } else {
            2 * paths.len()
        });
        for p in paths.drain(..) {
            let l = p.llr_stack.last().expect("leaf llr")[0];
            let u_for_zero = p.state.output(g, 0);
            if frozen {
                let mut p = p;
                p.metric = p.metric + path_penalty(l, u_for_zero);
                p.vhat[position] = 0;
                p.state.advance(0);
                p.x_ret = vec![u_for_zero];
                next.push(p);
            } else {
                let mut p1 = p.clone();
                let mut p0 = p;
                p0.metric = p0.metric + path_penalty(l, u_for_zero);
                p0.vhat[position] = 0;
                p0.state.advance(0);
                p0.x_ret = vec![u_for_zero];
                next.push(p0);

                let u_for_one = u_for_zero ^ 1;
                p1.metric = p1.metric + path_penalty(l, u_for_one);
                p1.vhat[position] = 1;
                p1.state.advance(1);
                p1.x_ret = vec![u_for_one];
                next.push(p1);
            }
        }
        // Stable sort keeps earlier paths on metric ties.
        next.sort_by(|a, b| a.metric.partial_cmp(&b.metric).expect("metrics are finite"));
        next.truncate(self.list_size);
        *paths = next;
    }
}

/// One-shot list decode.
pub fn scl_decode<R: Real>(
    llr: &[R],
    code: &PacCode,
    list_size: usize,
) -> Result<DecoderOutput<R>> {
    SclDecoder::new(code, list_size)?.decode(llr)
}
