//! Successive-cancellation list decoding over the full tree.
//!
//! Every information leaf forks each path into `û = 0` and `û = 1`; the
//! `L` lowest path metrics survive, ties going to the earlier candidate.

use std::cmp::Ordering;

use crate::codec::{extract_message, polar_transform, FKernel};
use crate::construction::PolarCode;
use crate::crc::CrcSpec;
use crate::scalar::{hard_decision, Llr};
use crate::tree::TreeState;

/// Path-metric update at a leaf: add `|alpha|` when `u_hat` disagrees with
/// the hard decision of `alpha`.
#[inline]
pub fn pm_update<T: Llr>(pm: T, alpha: T, u_hat: u8) -> T {
    if u_hat != hard_decision(alpha) {
        pm + alpha.abs()
    } else {
        pm
    }
}

/// One list candidate during tree descent.
#[derive(Debug, Clone)]
pub struct DecodePath<T> {
    pub pm: T,
    /// Decided `û` prefix (positions not yet reached are 0).
    pub bits: Vec<u8>,
    state: TreeState<T>,
}

/// A surviving path at the end of list decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct Survivor<T> {
    pub u_hat: Vec<u8>,
    pub pm: T,
}

/// Result of list decoding one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ListOutput<T> {
    pub u_hat: Vec<u8>,
    pub x_hat: Vec<u8>,
    pub pm: T,
    /// Final list, ordered by (path metric, list position).
    pub survivors: Vec<Survivor<T>>,
    /// `Some(passed)` when a CRC was configured.
    pub crc_passed: Option<bool>,
}

/// Indices of the `l` smallest metrics, ordered by (metric, index).
pub(crate) fn prune_order<T: Llr>(pms: &[T], l: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pms.len()).collect();
    idx.sort_by(|&a, &b| {
        pms[a]
            .partial_cmp(&pms[b])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx.truncate(l);
    idx
}

/// Clones (or moves, on last use) `paths[origin]` for every origin listed.
pub(crate) fn take_paths<P: Clone>(paths: Vec<P>, origins: &[usize]) -> Vec<P> {
    let mut remaining = vec![0usize; paths.len()];
    for &o in origins {
        remaining[o] += 1;
    }
    let mut slots: Vec<Option<P>> = paths.into_iter().map(Some).collect();
    origins
        .iter()
        .map(|&o| {
            remaining[o] -= 1;
            if remaining[o] == 0 {
                slots[o].take().expect("path consumed twice")
            } else {
                slots[o].clone().expect("path consumed twice")
            }
        })
        .collect()
}

/// Sorts the survivors by metric (stable) and picks the final estimate: the
/// best path passing the CRC when one is configured (falling back to the best
/// overall), else the best overall.
pub(crate) fn select_final<T: Llr>(
    mut survivors: Vec<Survivor<T>>,
    code: &PolarCode,
    crc: Option<&CrcSpec>,
) -> ListOutput<T> {
    // trailing frozen leaves add penalties after the last prune
    survivors.sort_by(|a, b| a.pm.partial_cmp(&b.pm).unwrap_or(Ordering::Equal));
    let (pick, crc_passed) = match crc {
        Some(spec) => match survivors
            .iter()
            .position(|s| spec.check(&extract_message(&s.u_hat, code)))
        {
            Some(i) => (i, Some(true)),
            None => (0, Some(false)),
        },
        None => (0, None),
    };
    let best = &survivors[pick];
    let mut x_hat = best.u_hat.clone();
    polar_transform(&mut x_hat);
    ListOutput {
        u_hat: best.u_hat.clone(),
        x_hat,
        pm: best.pm,
        survivors,
        crc_passed,
    }
}

/// Tree-descent SCL decoder.
#[derive(Debug, Clone)]
pub struct ListDecoder<T> {
    code: PolarCode,
    list_size: usize,
    crc: Option<CrcSpec>,
    kernel: FKernel,
    _llr: std::marker::PhantomData<T>,
}

impl<T: Llr> ListDecoder<T> {
    pub fn new(code: &PolarCode, list_size: usize, crc: Option<CrcSpec>, kernel: FKernel) -> Self {
        assert!(list_size >= 1, "list size must be at least 1");
        Self {
            code: code.clone(),
            list_size,
            crc,
            kernel,
            _llr: std::marker::PhantomData,
        }
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn decode(&self, llrs: &[T]) -> ListOutput<T> {
        assert_eq!(llrs.len(), self.code.len(), "LLR vector length must equal N");
        let mut state = TreeState::new(self.code.stages());
        state.load_root(llrs);
        let mut paths = vec![DecodePath {
            pm: T::zero(),
            bits: vec![0; self.code.len()],
            state,
        }];
        self.node(&mut paths, self.code.stages(), 0, 0);
        let survivors = paths
            .into_iter()
            .map(|p| Survivor {
                u_hat: p.bits,
                pm: p.pm,
            })
            .collect();
        select_final(survivors, &self.code, self.crc.as_ref())
    }

    fn node(&self, paths: &mut Vec<DecodePath<T>>, stage: usize, offset: usize, side: usize) {
        if stage == 0 {
            self.leaf(paths, offset, side);
            return;
        }
        let half = 1 << (stage - 1);
        for p in paths.iter_mut() {
            p.state.f(stage, self.kernel);
        }
        self.node(paths, stage - 1, offset, 0);
        for p in paths.iter_mut() {
            p.state.g(stage);
        }
        self.node(paths, stage - 1, offset + half, 1);
        for p in paths.iter_mut() {
            p.state.combine(stage, side);
        }
    }

    fn leaf(&self, paths: &mut Vec<DecodePath<T>>, offset: usize, side: usize) {
        if self.code.is_frozen(offset) {
            for p in paths.iter_mut() {
                p.pm = pm_update(p.pm, p.state.alpha(0)[0], 0);
                p.bits[offset] = 0;
                p.state.beta_mut(0, side)[0] = 0;
            }
            return;
        }
        let mut pms = Vec::with_capacity(2 * paths.len());
        for p in paths.iter() {
            let a = p.state.alpha(0)[0];
            pms.push(pm_update(p.pm, a, 0));
            pms.push(pm_update(p.pm, a, 1));
        }
        let keep = prune_order(&pms, self.list_size);
        let origins: Vec<usize> = keep.iter().map(|&c| c / 2).collect();
        let old = std::mem::take(paths);
        *paths = take_paths(old, &origins);
        for (p, &c) in paths.iter_mut().zip(&keep) {
            let bit = (c % 2) as u8;
            p.pm = pms[c];
            p.bits[offset] = bit;
            p.state.beta_mut(0, side)[0] = bit;
        }
    }
}

/// One-shot tree-descent SCL decode.
pub fn scl_decode<T: Llr>(
    llrs: &[T],
    code: &PolarCode,
    list_size: usize,
    crc: Option<CrcSpec>,
    kernel: FKernel,
) -> ListOutput<T> {
    ListDecoder::new(code, list_size, crc, kernel).decode(llrs)
}
