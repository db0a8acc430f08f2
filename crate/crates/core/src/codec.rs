//! Polar transform and the elementary SC update rules.

use serde::{Deserialize, Serialize};

use crate::construction::PolarCode;
use crate::error::{contract, Result};
use crate::scalar::Llr;

/// Check-node rule used by `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FKernel {
    /// `2 atanh(tanh(a/2) tanh(b/2))` with the product clamped to
    /// `±(1 - eps)` before `atanh`.
    #[default]
    Exact,
    /// `sgn(a) sgn(b) min(|a|, |b|)`.
    MinSum,
}

impl FKernel {
    #[inline]
    pub fn apply<T: Llr>(self, a: T, b: T) -> T {
        match self {
            FKernel::Exact => {
                let two = T::one() + T::one();
                let clamp = T::atanh_clamp();
                // magnitude and sign separately, so that f is exactly odd
                let prod = ((a.abs() / two).tanh() * (b.abs() / two).tanh()).min(clamp);
                let mag = two * prod.atanh();
                if (a < T::zero()) != (b < T::zero()) {
                    -mag
                } else {
                    mag
                }
            }
            FKernel::MinSum => {
                let mag = a.abs().min(b.abs());
                if (a < T::zero()) != (b < T::zero()) {
                    -mag
                } else {
                    mag
                }
            }
        }
    }
}

/// In-place `x = x G^{⊗n}` over GF(2), natural bit order.
///
/// The transform is its own inverse, so it also maps a codeword back to `u`.
pub fn polar_transform(bits: &mut [u8]) {
    let len = bits.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in bits.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter_mut().zip(hi.iter()) {
                *l ^= *h;
            }
        }
        half *= 2;
    }
}

/// Encodes `u` (length `N`, zero at every frozen index).
pub fn encode(u: &[u8], code: &PolarCode) -> Result<Vec<u8>> {
    if u.len() != code.len() {
        return Err(contract(format!(
            "u has length {}, code length is {}",
            u.len(),
            code.len()
        )));
    }
    if let Some(i) = (0..u.len()).find(|&i| code.is_frozen(i) && u[i] != 0) {
        return Err(contract(format!("nonzero value at frozen index {i}")));
    }
    if u.iter().any(|&b| b > 1) {
        return Err(contract("u must contain only 0/1 values"));
    }
    let mut x = u.to_vec();
    polar_transform(&mut x);
    Ok(x)
}

/// Scatters message bits onto the information positions of `code`.
pub fn place_message(message: &[u8], code: &PolarCode) -> Result<Vec<u8>> {
    if message.len() != code.k() {
        return Err(contract(format!(
            "message has {} bits, code carries {}",
            message.len(),
            code.k()
        )));
    }
    let mut u = vec![0u8; code.len()];
    for (&i, &b) in code.info_indices().iter().zip(message) {
        u[i] = b;
    }
    Ok(u)
}

/// Gathers the bits at the information positions of `code`.
pub fn extract_message(u: &[u8], code: &PolarCode) -> Vec<u8> {
    code.info_indices().iter().map(|&i| u[i]).collect()
}

/// `f`: left-child LLRs from the parent's `2m` values.
pub fn f_step_into<T: Llr>(alpha: &[T], out: &mut [T], kernel: FKernel) {
    let m = out.len();
    debug_assert_eq!(alpha.len(), 2 * m);
    let (a, b) = alpha.split_at(m);
    for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
        *o = kernel.apply(x, y);
    }
}

/// `g`: right-child LLRs given the left child's partial sums.
pub fn g_step_into<T: Llr>(alpha: &[T], beta_left: &[u8], out: &mut [T]) {
    let m = out.len();
    debug_assert_eq!(alpha.len(), 2 * m);
    debug_assert_eq!(beta_left.len(), m);
    let (a, b) = alpha.split_at(m);
    for (((o, &x), &y), &bl) in out.iter_mut().zip(a).zip(b).zip(beta_left) {
        *o = if bl == 0 { y + x } else { y - x };
    }
}

/// Partial-sum combination `(βl ⊕ βr, βr)`.
pub fn combine_into(beta_left: &[u8], beta_right: &[u8], out: &mut [u8]) {
    let m = beta_left.len();
    debug_assert_eq!(beta_right.len(), m);
    debug_assert_eq!(out.len(), 2 * m);
    let (lo, hi) = out.split_at_mut(m);
    for ((o, &l), &r) in lo.iter_mut().zip(beta_left).zip(beta_right) {
        *o = l ^ r;
    }
    hi.copy_from_slice(beta_right);
}

pub fn f_step<T: Llr>(alpha: &[T], kernel: FKernel) -> Vec<T> {
    let mut out = vec![T::zero(); alpha.len() / 2];
    f_step_into(alpha, &mut out, kernel);
    out
}

pub fn g_step<T: Llr>(alpha: &[T], beta_left: &[u8]) -> Vec<T> {
    let mut out = vec![T::zero(); alpha.len() / 2];
    g_step_into(alpha, beta_left, &mut out);
    out
}

pub fn combine(beta_left: &[u8], beta_right: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; 2 * beta_left.len()];
    combine_into(beta_left, beta_right, &mut out);
    out
}
