#![allow(dead_code)]

use polar_gfd::{FKernel, PolarCode};
use rand::Rng;

/// `u · G^{⊗n}` by explicit matrix product.
pub fn kronecker_encode(u: &[u8]) -> Vec<u8> {
    let n = u.len();
    let g = kronecker_matrix(n);
    (0..n)
        .map(|j| (0..n).fold(0u8, |acc, i| acc ^ (u[i] & g[i][j])))
        .collect()
}

pub fn kronecker_matrix(n: usize) -> Vec<Vec<u8>> {
    let mut g = vec![vec![1u8]];
    while g.len() < n {
        let m = g.len();
        let mut next = vec![vec![0u8; 2 * m]; 2 * m];
        for i in 0..m {
            for j in 0..m {
                next[i][j] = g[i][j];
                next[i + m][j] = g[i][j];
                next[i + m][j + m] = g[i][j];
            }
        }
        g = next;
    }
    g
}

pub fn random_flags<R: Rng>(rng: &mut R, stages: usize, p_info: f64) -> Vec<u8> {
    (0..1usize << stages)
        .map(|_| u8::from(rng.gen_bool(p_info)))
        .collect()
}

pub fn random_code<R: Rng>(rng: &mut R, stages: usize) -> PolarCode {
    let p = rng.gen_range(0.1..0.9);
    PolarCode::from_flags(random_flags(rng, stages, p), 0.5).unwrap()
}

/// A code whose frozen pattern is polar-like (a random universal-order
/// consistent set is not needed, only some structure): frozen bits are more
/// likely at low indices so that special nodes appear.
pub fn structured_code<R: Rng>(rng: &mut R, stages: usize) -> PolarCode {
    let n = 1usize << stages;
    let flags = (0..n)
        .map(|i| {
            let w = (i.count_ones() as f64) / stages.max(1) as f64;
            let p = (w + rng.gen_range(-0.3..0.3)).clamp(0.02, 0.98);
            u8::from(rng.gen_bool(p))
        })
        .collect();
    PolarCode::from_flags(flags, 0.5).unwrap()
}

pub fn random_llrs<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

/// Noisy BPSK LLRs for the codeword of a random message.
pub fn noisy_frame<R: Rng>(rng: &mut R, code: &PolarCode, sigma: f64) -> (Vec<u8>, Vec<f64>) {
    let mut u = vec![0u8; code.len()];
    for i in code.info_indices() {
        u[i] = rng.gen_range(0..=1);
    }
    let x = polar_gfd::encode(&u, code).unwrap();
    let llrs = x
        .iter()
        .map(|&b| {
            let n: f64 = rng.sample(rand_distr::StandardNormal);
            2.0 * (1.0 - 2.0 * f64::from(b) + sigma * n) / (sigma * sigma)
        })
        .collect();
    (u, llrs)
}

/// Leaf LLRs seen by SC when the decisions are forced to `u` (genie-aided
/// descent), written recursively from the definitions of f and g.
pub fn genie_leaf_llrs(llrs: &[f64], u: &[u8], kernel: FKernel) -> Vec<f64> {
    fn rec(alpha: &[f64], u: &[u8], kernel: FKernel, out: &mut Vec<f64>) -> Vec<u8> {
        if alpha.len() == 1 {
            out.push(alpha[0]);
            return vec![u[0]];
        }
        let m = alpha.len() / 2;
        let left: Vec<f64> = (0..m).map(|i| kernel.apply(alpha[i], alpha[i + m])).collect();
        let bl = rec(&left, &u[..m], kernel, out);
        let right: Vec<f64> = (0..m)
            .map(|i| alpha[i + m] + if bl[i] == 0 { alpha[i] } else { -alpha[i] })
            .collect();
        let br = rec(&right, &u[m..], kernel, out);
        let mut beta: Vec<u8> = bl.iter().zip(&br).map(|(a, b)| a ^ b).collect();
        beta.extend(br);
        beta
    }
    let mut out = Vec::with_capacity(llrs.len());
    rec(llrs, u, kernel, &mut out);
    out
}

/// Path metric of the complete decision vector `u`.
pub fn path_metric(llrs: &[f64], u: &[u8], kernel: FKernel) -> f64 {
    genie_leaf_llrs(llrs, u, kernel)
        .iter()
        .zip(u)
        .map(|(&a, &b)| if (a < 0.0) != (b == 1) { a.abs() } else { 0.0 })
        .sum()
}

/// Every `u` of the code (frozen positions zero), in message order.
pub fn all_inputs(code: &PolarCode) -> Vec<Vec<u8>> {
    let info = code.info_indices();
    (0..1u64 << info.len())
        .map(|m| {
            let mut u = vec![0u8; code.len()];
            for (j, &i) in info.iter().enumerate() {
                u[i] = ((m >> j) & 1) as u8;
            }
            u
        })
        .collect()
}

pub fn pm_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Correlation-maximizing (ML) word of the even-weight code.
pub fn brute_force_spc_ml(alpha: &[f64]) -> Vec<u8> {
    let n = alpha.len();
    let mut best: Option<(f64, u64)> = None;
    for w in 0..1u64 << n {
        if w.count_ones() % 2 == 1 {
            continue;
        }
        let corr: f64 = (0..n)
            .map(|i| if (w >> i) & 1 == 1 { -alpha[i] } else { alpha[i] })
            .sum();
        if best.map_or(true, |(c, _)| corr > c) {
            best = Some((corr, w));
        }
    }
    let w = best.unwrap().1;
    (0..n).map(|i| ((w >> i) & 1) as u8).collect()
}
