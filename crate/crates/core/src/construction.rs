//! Frozen-set construction for the AWGN channel.
//!
//! Reliabilities come from density evolution under the Gaussian
//! approximation: every bit-channel LLR is modelled as `N(m, 2m)` and the
//! mean is propagated down the decoding tree. The check-node side uses the
//! usual two-segment approximation of the `phi` function.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Largest supported tree depth.
pub const MAX_STAGES: usize = 24;

/// A polar code: block length `2^n`, `k` unfrozen bit-channels, and the
/// frozen/information flag of every bit-channel (`1` = information).
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCode {
    stages: usize,
    k: usize,
    design_sigma: f64,
    flags: Vec<u8>,
}

impl PolarCode {
    /// Builds a code from its frozen indices.
    pub fn from_frozen(stages: usize, frozen: &[usize], design_sigma: f64) -> Result<Self> {
        if stages > MAX_STAGES {
            return Err(param(format!("tree depth {stages} exceeds {MAX_STAGES}")));
        }
        let len = 1usize << stages;
        let mut flags = vec![1u8; len];
        for &i in frozen {
            if i >= len {
                return Err(param(format!("frozen index {i} out of range for N={len}")));
            }
            if flags[i] == 0 {
                return Err(param(format!("frozen index {i} listed twice")));
            }
            flags[i] = 0;
        }
        Self::from_flags(flags, design_sigma)
    }

    /// Builds a code from a flag vector whose length must be a power of two.
    pub fn from_flags(flags: Vec<u8>, design_sigma: f64) -> Result<Self> {
        let len = flags.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(param(format!("block length {len} is not a power of two")));
        }
        if flags.iter().any(|&s| s > 1) {
            return Err(param("flags must be 0 or 1"));
        }
        let k = flags.iter().filter(|&&s| s == 1).count();
        Ok(Self {
            stages: len.trailing_zeros() as usize,
            k,
            design_sigma,
            flags,
        })
    }

    /// Tree depth `n`.
    pub fn stages(&self) -> usize {
        self.stages
    }

    /// Block length `N = 2^n`.
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    /// Number of unfrozen bit-channels.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.len() as f64
    }

    pub fn design_sigma(&self) -> f64 {
        self.design_sigma
    }

    pub fn flags(&self) -> &[u8] {
        &self.flags
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.flags[i] == 0
    }

    /// Frozen indices in ascending order.
    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.flags[i] == 0).collect()
    }

    /// Information indices in ascending order.
    pub fn info_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.flags[i] == 1).collect()
    }

    pub fn to_descriptor(&self) -> CodeDescriptor {
        CodeDescriptor {
            n: self.stages,
            k: self.k,
            design_sigma: self.design_sigma,
            frozen_indices: self.frozen_indices(),
        }
    }

    pub fn from_descriptor(desc: &CodeDescriptor) -> Result<Self> {
        if desc.frozen_indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(param("frozen_indices must be strictly ascending"));
        }
        let code = Self::from_frozen(desc.n, &desc.frozen_indices, desc.design_sigma)?;
        if code.k != desc.k {
            return Err(param(format!(
                "descriptor says K={} but frozen set leaves {} unfrozen channels",
                desc.k, code.k
            )));
        }
        Ok(code)
    }

    /// Reads a JSON code descriptor.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let desc: CodeDescriptor = serde_json::from_str(&text)?;
        Self::from_descriptor(&desc)
    }

    /// Writes the code as a pretty-printed JSON descriptor.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_descriptor())?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

/// On-disk code description. Any frozen set can be supplied here, not only
/// the ones produced by [`construct_code`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub design_sigma: f64,
    pub frozen_indices: Vec<usize>,
}

/// Builds the code of depth `stages` whose `k` most reliable bit-channels are
/// unfrozen. Ties in reliability freeze the lower index first.
pub fn construct_code(stages: usize, k: usize, design_sigma: f64) -> Result<PolarCode> {
    if stages > MAX_STAGES {
        return Err(param(format!("tree depth {stages} exceeds {MAX_STAGES}")));
    }
    let len = 1usize << stages;
    if k > len {
        return Err(param(format!("K={k} exceeds N={len}")));
    }
    if !(design_sigma > 0.0 && design_sigma.is_finite()) {
        return Err(param(format!("design sigma must be positive, got {design_sigma}")));
    }
    let order = reliability_order(stages, design_sigma);
    let mut flags = vec![0u8; len];
    for &i in &order[len - k..] {
        flags[i] = 1;
    }
    PolarCode::from_flags(flags, design_sigma)
}

/// Bit-channel indices sorted from least to most reliable.
pub fn reliability_order(stages: usize, design_sigma: f64) -> Vec<usize> {
    let means = ga_means(stages, design_sigma);
    let mut order: Vec<usize> = (0..means.len()).collect();
    order.sort_by(|&a, &b| means[a].total_cmp(&means[b]).then(a.cmp(&b)));
    order
}

/// Mean LLR of every bit-channel under the Gaussian approximation.
///
/// Index bits are consumed most-significant first: a 0 bit takes the
/// check-node (f) branch, a 1 bit the variable-node (g) branch.
pub fn ga_means(stages: usize, design_sigma: f64) -> Vec<f64> {
    let mut means = vec![2.0 / (design_sigma * design_sigma)];
    for _ in 0..stages {
        let mut next = Vec::with_capacity(means.len() * 2);
        for &m in &means {
            next.push(check_node_mean(m));
            next.push(2.0 * m);
        }
        means = next;
    }
    means
}

const PHI_SPLIT: f64 = 10.0;
const PHI_A: f64 = -0.4527;
const PHI_B: f64 = 0.86;
const PHI_C: f64 = 0.0218;

/// `ln phi(x)` for the two-segment approximation.
fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < PHI_SPLIT {
        PHI_A * x.powf(PHI_B) + PHI_C
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

/// Inverse of `ln_phi`: the mean whose `ln phi` equals `y`.
fn ln_phi_inv(y: f64) -> f64 {
    // the first segment slightly exceeds 1 near the origin
    if y >= PHI_C {
        return 0.0;
    }
    if y > ln_phi(PHI_SPLIT - f64::EPSILON * PHI_SPLIT) {
        // first segment has a closed-form inverse
        return ((y - PHI_C) / PHI_A).powf(1.0 / PHI_B);
    }
    // second segment is decreasing on [10, inf); bracket then bisect
    let mut lo = PHI_SPLIT;
    let mut hi = 2.0 * PHI_SPLIT;
    while ln_phi(hi) > y {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ln_phi(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Check-node update `phi^-1(1 - (1 - phi(m))^2)`, evaluated in the log
/// domain so that large means do not underflow.
fn check_node_mean(m: f64) -> f64 {
    let lp = ln_phi(m);
    let phi = lp.exp();
    // 1 - (1 - phi)^2 = phi * (2 - phi)
    ln_phi_inv(lp + (2.0 - phi).ln())
}
