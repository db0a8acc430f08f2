//! Fast SC decoding of special nodes.

use crate::classify::{DecodePlan, NodeKind};
use crate::codec::{polar_transform, FKernel};
use crate::construction::PolarCode;
use crate::scalar::{hard_decision, Llr};
use crate::sc::ScOutput;
use crate::tree::TreeState;

/// LLRs of the Rate-C child at stage `p` of a G-Rep node: `g` applied
/// `t - p` times with all-zero left partial sums. Index `i` of the result
/// is the sum of the inputs congruent to `i` modulo `2^p`.
pub fn grep_fold<T: Llr>(alpha: &[T], p: usize) -> Vec<T> {
    let target = 1usize << p;
    assert!(target <= alpha.len(), "fold target larger than the node");
    let mut cur = alpha.to_vec();
    while cur.len() > target {
        let m = cur.len() / 2;
        cur = (0..m).map(|i| cur[i + m] + cur[i]).collect();
    }
    cur
}

/// Wagner decoding of the even-weight code over `alpha[j], alpha[j+np], ...`,
/// writing into the same positions of `out`.
pub(crate) fn wagner_strided<T: Llr>(alpha: &[T], start: usize, np: usize, out: &mut [u8]) {
    let mut parity = 0u8;
    let mut least = start;
    let mut least_mag = alpha[start].abs();
    let mut i = start;
    while i < alpha.len() {
        let b = hard_decision(alpha[i]);
        out[i] = b;
        parity ^= b;
        let mag = alpha[i].abs();
        if mag < least_mag {
            least = i;
            least_mag = mag;
        }
        i += np;
    }
    if parity == 1 {
        out[least] ^= 1;
    }
}

/// ML decoding of a single parity-check code: hard decisions, and if the
/// parity is odd the least reliable bit (lowest index on ties) is flipped.
pub fn wagner_decode<T: Llr>(alpha: &[T]) -> Vec<u8> {
    assert!(!alpha.is_empty(), "Wagner decoding needs at least one LLR");
    let mut out = vec![0; alpha.len()];
    wagner_strided(alpha, 0, 1, &mut out);
    out
}

/// G-PC node: `np` interleaved SPC codes, sub-code `j` holding the
/// positions `i` with `i mod np = j`, each Wagner-decoded.
pub fn decode_gpc_sc<T: Llr>(alpha: &[T], np: usize) -> Vec<u8> {
    let mut out = vec![0; alpha.len()];
    gpc_into(alpha, np, &mut out);
    out
}

pub(crate) fn gpc_into<T: Llr>(alpha: &[T], np: usize, out: &mut [u8]) {
    assert!(
        np >= 1 && alpha.len() % np == 0,
        "Np must divide the node length"
    );
    for j in 0..np {
        wagner_strided(alpha, j, np, out);
    }
}

/// RG-PC node: decoded exactly like a G-PC node; the additional frozen
/// positions are not enforced.
pub fn decode_rgpc_sc<T: Llr>(alpha: &[T], np: usize, _af_positions: &[usize]) -> Vec<u8> {
    decode_gpc_sc(alpha, np)
}

/// G-Rep node: fold, decode the Rate-C child with its own plan, tile.
pub fn decode_grep_sc<T: Llr>(alpha: &[T], plan: &DecodePlan, kernel: FKernel) -> Vec<u8> {
    assert_eq!(alpha.len(), plan.size(), "LLR length must match the node");
    let mut state = TreeState::new(plan.stage);
    state.load_root(alpha);
    node(&mut state, plan, 0, kernel);
    state.beta(plan.stage, 0).to_vec()
}

/// SC decoder that stops at the leaves of a [`DecodePlan`].
#[derive(Debug, Clone)]
pub struct FastScDecoder<T> {
    code: PolarCode,
    plan: DecodePlan,
    kernel: FKernel,
    state: TreeState<T>,
    u_hat: Vec<u8>,
}

impl<T: Llr> FastScDecoder<T> {
    pub fn new(code: &PolarCode, plan: DecodePlan, kernel: FKernel) -> Self {
        assert_eq!(plan.stage, code.stages(), "plan does not match the code");
        Self {
            code: code.clone(),
            plan,
            kernel,
            state: TreeState::new(code.stages()),
            u_hat: vec![0; code.len()],
        }
    }

    pub fn plan(&self) -> &DecodePlan {
        &self.plan
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    /// Decodes one frame; the returned slice is `û` (the inverse transform
    /// of the codeword estimate).
    pub fn decode_in_place(&mut self, llrs: &[T]) -> &[u8] {
        assert_eq!(llrs.len(), self.code.len(), "LLR vector length must equal N");
        self.state.load_root(llrs);
        node(&mut self.state, &self.plan, 0, self.kernel);
        self.u_hat.copy_from_slice(self.state.root_beta());
        polar_transform(&mut self.u_hat);
        &self.u_hat
    }

    pub fn x_hat(&self) -> &[u8] {
        self.state.root_beta()
    }

    pub fn decode(&mut self, llrs: &[T]) -> ScOutput {
        self.decode_in_place(llrs);
        ScOutput {
            u_hat: self.u_hat.clone(),
            x_hat: self.x_hat().to_vec(),
        }
    }
}

fn node<T: Llr>(state: &mut TreeState<T>, plan: &DecodePlan, side: usize, kernel: FKernel) {
    let t = plan.stage;
    match &plan.kind {
        NodeKind::Split { left, right } => {
            state.f(t, kernel);
            node(state, left, 0, kernel);
            state.g(t);
            node(state, right, 1, kernel);
            state.combine(t, side);
        }
        NodeKind::Rate0 => state.beta_mut(t, side).fill(0),
        NodeKind::Rate1 => {
            let (alpha, beta) = state.alpha_and_beta_mut(t, side);
            for (b, &a) in beta.iter_mut().zip(alpha) {
                *b = hard_decision(a);
            }
        }
        NodeKind::Rep => {
            state.fold(t, 0);
            let b = hard_decision(state.alpha(0)[0]);
            state.beta_mut(t, side).fill(b);
        }
        NodeKind::GRep { p, rate_c } => {
            state.fold(t, *p);
            node(state, rate_c, 1, kernel);
            let block = 1 << p;
            let child = state.beta(*p, 1).to_vec();
            for chunk in state.beta_mut(t, side).chunks_mut(block) {
                chunk.copy_from_slice(&child);
            }
        }
        NodeKind::Spc => spc_node(state, t, side, 1),
        NodeKind::GPc { np } | NodeKind::RgPc { np, .. } => spc_node(state, t, side, *np),
    }
}

fn spc_node<T: Llr>(state: &mut TreeState<T>, t: usize, side: usize, np: usize) {
    let (alpha, beta) = state.alpha_and_beta_mut(t, side);
    gpc_into(alpha, np, beta);
}
