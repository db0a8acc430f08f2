//! Per-stage LLR and partial-sum storage for depth-first tree decoding.
//!
//! A node at stage `t` owns `2^t` values. Stage `t` LLRs live at
//! `alpha[2^t..2^(t+1)]`; partial sums are kept for both sides of every
//! stage so a parent can combine its children.

use crate::codec::{combine_into, f_step_into, g_step_into, FKernel};
use crate::scalar::Llr;

#[derive(Debug, Clone)]
pub(crate) struct TreeState<T> {
    root: usize,
    alpha: Vec<T>,
    beta: Vec<u8>,
}

impl<T: Llr> TreeState<T> {
    pub fn new(root: usize) -> Self {
        Self {
            root,
            alpha: vec![T::zero(); 2 << root],
            beta: vec![0; 4 << root],
        }
    }

    pub fn load_root(&mut self, llrs: &[T]) {
        self.alpha_mut(self.root).copy_from_slice(llrs);
    }

    pub fn alpha(&self, stage: usize) -> &[T] {
        &self.alpha[1 << stage..2 << stage]
    }

    pub fn alpha_mut(&mut self, stage: usize) -> &mut [T] {
        &mut self.alpha[1 << stage..2 << stage]
    }

    fn beta_range(&self, stage: usize, side: usize) -> std::ops::Range<usize> {
        let base = side * (2 << self.root);
        base + (1 << stage)..base + (2 << stage)
    }

    pub fn beta(&self, stage: usize, side: usize) -> &[u8] {
        &self.beta[self.beta_range(stage, side)]
    }

    pub fn beta_mut(&mut self, stage: usize, side: usize) -> &mut [u8] {
        let r = self.beta_range(stage, side);
        &mut self.beta[r]
    }

    /// Node LLRs together with the node's partial-sum slot.
    pub fn alpha_and_beta_mut(&mut self, stage: usize, side: usize) -> (&[T], &mut [u8]) {
        let r = self.beta_range(stage, side);
        (&self.alpha[1 << stage..2 << stage], &mut self.beta[r])
    }

    /// Root partial sums (the codeword estimate) after a full decode.
    pub fn root_beta(&self) -> &[u8] {
        self.beta(self.root, 0)
    }

    /// `f` from the node at `stage` into its left child.
    pub fn f(&mut self, stage: usize, kernel: FKernel) {
        let (lo, hi) = self.alpha.split_at_mut(1 << stage);
        f_step_into(&hi[..1 << stage], &mut lo[1 << (stage - 1)..], kernel);
    }

    /// `g` from the node at `stage` into its right child.
    pub fn g(&mut self, stage: usize) {
        let r = self.beta_range(stage - 1, 0);
        let (lo, hi) = self.alpha.split_at_mut(1 << stage);
        g_step_into(&hi[..1 << stage], &self.beta[r], &mut lo[1 << (stage - 1)..]);
    }

    /// Combines the children of the node at `stage` into its own slot.
    pub fn combine(&mut self, stage: usize, side: usize) {
        let m = 1 << (stage - 1);
        let (side0, side1) = self.beta.split_at_mut(2 << self.root);
        let right = &side1[m..2 * m];
        if side == 0 {
            let (lo, hi) = side0.split_at_mut(2 * m);
            combine_into(&lo[m..], right, &mut hi[..2 * m]);
        } else {
            let (r_lo, r_hi) = side1.split_at_mut(2 * m);
            combine_into(&side0[m..2 * m], &r_lo[m..], &mut r_hi[..2 * m]);
        }
    }

    /// Repeated `g` with all-zero left partial sums, from `from` down to `to`.
    pub fn fold(&mut self, from: usize, to: usize) {
        for stage in (to + 1..=from).rev() {
            let m = 1 << (stage - 1);
            let (lo, hi) = self.alpha.split_at_mut(1 << stage);
            let parent = &hi[..2 * m];
            let child = &mut lo[m..];
            for i in 0..m {
                child[i] = parent[i + m] + parent[i];
            }
        }
    }
}
