//! Full-tree successive-cancellation decoding.

use crate::codec::FKernel;
use crate::construction::PolarCode;
use crate::scalar::{hard_decision, Llr};
use crate::tree::TreeState;

/// Message and codeword estimates of one decoded frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScOutput {
    pub u_hat: Vec<u8>,
    pub x_hat: Vec<u8>,
}

/// Reusable SC decoder that visits every node of the tree.
#[derive(Debug, Clone)]
pub struct ScDecoder<T> {
    code: PolarCode,
    kernel: FKernel,
    state: TreeState<T>,
    u_hat: Vec<u8>,
}

impl<T: Llr> ScDecoder<T> {
    pub fn new(code: &PolarCode, kernel: FKernel) -> Self {
        Self {
            code: code.clone(),
            kernel,
            state: TreeState::new(code.stages()),
            u_hat: vec![0; code.len()],
        }
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    /// Decodes one frame; the returned slice is `û`.
    pub fn decode_in_place(&mut self, llrs: &[T]) -> &[u8] {
        assert_eq!(llrs.len(), self.code.len(), "LLR vector length must equal N");
        self.state.load_root(llrs);
        self.node(self.code.stages(), 0, 0);
        &self.u_hat
    }

    /// Codeword estimate of the last decoded frame.
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

    fn node(&mut self, stage: usize, offset: usize, side: usize) {
        if stage == 0 {
            let bit = if self.code.is_frozen(offset) {
                0
            } else {
                hard_decision(self.state.alpha(0)[0])
            };
            self.u_hat[offset] = bit;
            self.state.beta_mut(0, side)[0] = bit;
            return;
        }
        let half = 1 << (stage - 1);
        self.state.f(stage, self.kernel);
        self.node(stage - 1, offset, 0);
        self.state.g(stage);
        self.node(stage - 1, offset + half, 1);
        self.state.combine(stage, side);
    }
}

/// One-shot SC decode.
pub fn sc_decode<T: Llr>(llrs: &[T], code: &PolarCode, kernel: FKernel) -> ScOutput {
    ScDecoder::new(code, kernel).decode(llrs)
}
