//! Fast SCL decoding: list extension directly at special nodes.
//!
//! Each node extension keeps, at every pruning step, the value
//! `PM(prefix) = PM(node entry) + min over node codewords consistent with the
//! prefix of Σ_{β_i ≠ HD(α_i)} |α_i|`. With min-sum `f` this is exactly the
//! metric that tree descent accumulates, so the surviving list at the end of
//! every node is the same `L` best (path, node codeword) pairs.
//!
//! * Rate-0: add the penalty of the all-zero word, no fork.
//! * Rate-1: one fork per bit (keep the hard decision or flip it).
//! * SPC / G-PC / RG-PC: every sub-code charges `|α_min|` up front when its
//!   hard-decision parity is odd; then one fork per bit except the least
//!   reliable one, which is finally forced to restore even parity.
//! * Rep / G-Rep: the Rate-0 part of the node costs
//!   `½ Σ_i (Σ_r |α_{r,i}| − |Σ_r α_{r,i}|)` (sums over the copies folded
//!   onto Rate-C index `i`) independently of the Rate-C decision. It is
//!   charged before the Rate-C child is extended with the folded LLRs; the
//!   node output tiles the child's partial sums.

use crate::classify::{DecodePlan, NodeKind};
use crate::codec::{polar_transform, FKernel};
use crate::construction::PolarCode;
use crate::crc::CrcSpec;
use crate::list::{prune_order, select_final, take_paths, ListOutput, Survivor};
use crate::scalar::{hard_decision, Llr};
use crate::tree::TreeState;

use super::sc::grep_fold;

/// A path entering a node: its metric and the node's LLRs on that path.
#[derive(Debug, Clone, Copy)]
pub struct NodeHead<'a, T> {
    pub pm: T,
    pub alpha: &'a [T],
}

/// A path leaving a node: which head it extends, its metric, and the node's
/// partial sums.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeChoice<T> {
    pub origin: usize,
    pub pm: T,
    pub beta: Vec<u8>,
}

#[derive(Debug, Clone)]
struct Candidate<T> {
    origin: usize,
    pm: T,
    flips: Vec<u32>,
    odd: bool,
}

/// One bit-serial step: every candidate for which `penalty` returns
/// `Some(cost)` forks into (keep, flip at `pos`); the rest pass through.
fn fork_step<T: Llr>(
    cands: Vec<Candidate<T>>,
    l: usize,
    mut penalty: impl FnMut(&Candidate<T>) -> Option<(u32, T)>,
) -> Vec<Candidate<T>> {
    let mut next = Vec::with_capacity(2 * cands.len());
    for c in cands {
        match penalty(&c) {
            Some((pos, cost)) => {
                let mut flipped = c.clone();
                flipped.pm = c.pm + cost;
                flipped.flips.push(pos);
                flipped.odd = !c.odd;
                next.push(c);
                next.push(flipped);
            }
            None => next.push(c),
        }
    }
    if next.len() <= l {
        return next;
    }
    let pms: Vec<T> = next.iter().map(|c| c.pm).collect();
    let keep = prune_order(&pms, l);
    take_paths(next, &keep)
}

fn finish<T: Llr>(cands: Vec<Candidate<T>>, heads: &[NodeHead<'_, T>]) -> Vec<NodeChoice<T>> {
    cands
        .into_iter()
        .map(|c| {
            let mut beta: Vec<u8> = heads[c.origin].alpha.iter().map(|&a| hard_decision(a)).collect();
            for &i in &c.flips {
                beta[i as usize] ^= 1;
            }
            NodeChoice {
                origin: c.origin,
                pm: c.pm,
                beta,
            }
        })
        .collect()
}

fn seed<T: Llr>(heads: &[NodeHead<'_, T>]) -> Vec<Candidate<T>> {
    heads
        .iter()
        .enumerate()
        .map(|(origin, h)| Candidate {
            origin,
            pm: h.pm,
            flips: Vec::new(),
            odd: false,
        })
        .collect()
}

/// Rate-0 node: no fork; metric grows by `|α_i|` for every negative `α_i`.
pub fn scl_extend_rate0<T: Llr>(heads: &[NodeHead<'_, T>]) -> Vec<NodeChoice<T>> {
    heads
        .iter()
        .enumerate()
        .map(|(origin, h)| NodeChoice {
            origin,
            pm: h
                .alpha
                .iter()
                .filter(|&&a| a < T::zero())
                .fold(h.pm, |pm, &a| pm + a.abs()),
            beta: vec![0; h.alpha.len()],
        })
        .collect()
}

/// Rate-1 node: bit-serial fork over every position, pruning to `l`.
pub fn scl_extend_rate1<T: Llr>(heads: &[NodeHead<'_, T>], l: usize) -> Vec<NodeChoice<T>> {
    let size = heads.first().map_or(0, |h| h.alpha.len());
    let mut cands = seed(heads);
    for i in 0..size {
        cands = fork_step(cands, l, |c| Some((i as u32, heads[c.origin].alpha[i].abs())));
    }
    finish(cands, heads)
}

/// SPC node: the `np = 1` case of [`scl_extend_gpc`].
pub fn scl_extend_spc<T: Llr>(heads: &[NodeHead<'_, T>], l: usize) -> Vec<NodeChoice<T>> {
    scl_extend_gpc(heads, 1, l)
}

/// Per-head parity data of one SPC sub-code.
#[derive(Debug, Clone, Copy)]
struct SubCode<T> {
    odd: bool,
    least: usize,
    least_mag: T,
}

fn sub_codes<T: Llr>(alpha: &[T], np: usize) -> Vec<SubCode<T>> {
    (0..np)
        .map(|j| {
            let mut odd = false;
            let mut least = j;
            let mut least_mag = alpha[j].abs();
            for i in (j..alpha.len()).step_by(np) {
                odd ^= alpha[i] < T::zero();
                if alpha[i].abs() < least_mag {
                    least = i;
                    least_mag = alpha[i].abs();
                }
            }
            SubCode {
                odd,
                least,
                least_mag,
            }
        })
        .collect()
}

/// G-PC node with `np` interleaved SPC sub-codes, processed for
/// `j = 0..np` in turn; the metric increment is the sum of the sub-code
/// increments. RG-PC nodes use this routine unchanged.
pub fn scl_extend_gpc<T: Llr>(heads: &[NodeHead<'_, T>], np: usize, l: usize) -> Vec<NodeChoice<T>> {
    let size = heads.first().map_or(0, |h| h.alpha.len());
    assert!(np >= 1 && size % np == 0, "Np must divide the node length");
    let subs: Vec<Vec<SubCode<T>>> = heads.iter().map(|h| sub_codes(h.alpha, np)).collect();
    let mut cands = seed(heads);
    for c in cands.iter_mut() {
        for s in &subs[c.origin] {
            if s.odd {
                c.pm = c.pm + s.least_mag;
            }
        }
    }
    for j in 0..np {
        for c in cands.iter_mut() {
            c.odd = subs[c.origin][j].odd;
        }
        for i in (j..size).step_by(np) {
            cands = fork_step(cands, l, |c| {
                let sub = &subs[c.origin][j];
                if i == sub.least {
                    return None;
                }
                let mag = heads[c.origin].alpha[i].abs();
                // flipping toggles whether the forced bit must flip too
                let cost = if c.odd {
                    mag - sub.least_mag
                } else {
                    mag + sub.least_mag
                };
                Some((i as u32, cost))
            });
        }
        for c in cands.iter_mut() {
            if c.odd {
                c.flips.push(subs[c.origin][j].least as u32);
                c.odd = false;
            }
        }
    }
    finish(cands, heads)
}

/// Metric charged by the Rate-0 part of a G-Rep node whose Rate-C block
/// has `block` bits. Per folded index this is
/// `½ (Σ_r |α_{r,i}| − |Σ_r α_{r,i}|)`, computed as the smaller of the
/// positive and negative mass so that agreeing signs give exactly zero.
pub fn grep_offset<T: Llr>(alpha: &[T], block: usize) -> T {
    let mut total = T::zero();
    for i in 0..block {
        let (mut pos, mut neg) = (T::zero(), T::zero());
        for &a in alpha.iter().skip(i).step_by(block) {
            if a < T::zero() {
                neg = neg - a;
            } else {
                pos = pos + a;
            }
        }
        total = total + pos.min(neg);
    }
    total
}

/// Rep node: one fork on the sign of the LLR sum.
pub fn scl_extend_rep<T: Llr>(heads: &[NodeHead<'_, T>], l: usize) -> Vec<NodeChoice<T>> {
    let mut out = Vec::with_capacity(2 * heads.len());
    for (origin, h) in heads.iter().enumerate() {
        let folded = grep_fold(h.alpha, 0);
        let sum = folded[0];
        let base = h.pm + grep_offset(h.alpha, 1);
        let hd = hard_decision(sum);
        out.push(NodeChoice {
            origin,
            pm: base,
            beta: vec![hd; h.alpha.len()],
        });
        out.push(NodeChoice {
            origin,
            pm: base + sum.abs(),
            beta: vec![hd ^ 1; h.alpha.len()],
        });
    }
    if out.len() <= l {
        return out;
    }
    let pms: Vec<T> = out.iter().map(|c| c.pm).collect();
    let keep = prune_order(&pms, l);
    take_paths(out, &keep)
}

/// G-Rep node whose Rate-C child (at stage `p`) is decoded with `rate_c`.
pub fn scl_extend_grep<T: Llr>(
    heads: &[NodeHead<'_, T>],
    p: usize,
    rate_c: &DecodePlan,
    l: usize,
    kernel: FKernel,
) -> Vec<NodeChoice<T>> {
    let Some(first) = heads.first() else {
        return Vec::new();
    };
    let stage = first.alpha.len().trailing_zeros() as usize;
    let node = DecodePlan {
        stage,
        offset: (rate_c.offset + rate_c.size()).saturating_sub(first.alpha.len()),
        kind: NodeKind::GRep {
            p,
            rate_c: Box::new(rate_c.clone()),
        },
    };
    run_node(heads, &node, l, kernel)
}

/// Extends `heads` through an arbitrary sub-plan rooted at `plan`.
pub fn scl_extend_plan<T: Llr>(
    heads: &[NodeHead<'_, T>],
    plan: &DecodePlan,
    l: usize,
    kernel: FKernel,
) -> Vec<NodeChoice<T>> {
    run_node(heads, plan, l, kernel)
}

fn run_node<T: Llr>(
    heads: &[NodeHead<'_, T>],
    plan: &DecodePlan,
    l: usize,
    kernel: FKernel,
) -> Vec<NodeChoice<T>> {
    let mut paths: Vec<FastPath<T>> = heads
        .iter()
        .enumerate()
        .map(|(origin, h)| {
            let mut state = TreeState::new(plan.stage);
            state.load_root(h.alpha);
            FastPath {
                pm: h.pm,
                origin,
                state,
            }
        })
        .collect();
    let engine = Engine { l, kernel };
    engine.node(&mut paths, plan, 0);
    paths
        .into_iter()
        .map(|p| NodeChoice {
            origin: p.origin,
            pm: p.pm,
            beta: p.state.beta(plan.stage, 0).to_vec(),
        })
        .collect()
}

#[derive(Debug, Clone)]
struct FastPath<T> {
    pm: T,
    origin: usize,
    state: TreeState<T>,
}

struct Engine {
    l: usize,
    kernel: FKernel,
}

impl Engine {
    fn node<T: Llr>(&self, paths: &mut Vec<FastPath<T>>, plan: &DecodePlan, side: usize) {
        let t = plan.stage;
        match &plan.kind {
            NodeKind::Split { left, right } => {
                for p in paths.iter_mut() {
                    p.state.f(t, self.kernel);
                }
                self.node(paths, left, 0);
                for p in paths.iter_mut() {
                    p.state.g(t);
                }
                self.node(paths, right, 1);
                for p in paths.iter_mut() {
                    p.state.combine(t, side);
                }
            }
            NodeKind::GRep { p, rate_c } => {
                let block = 1usize << p;
                for path in paths.iter_mut() {
                    path.state.fold(t, *p);
                    let offset = grep_offset(path.state.alpha(t), block);
                    path.pm = path.pm + offset;
                }
                self.node(paths, rate_c, 1);
                for path in paths.iter_mut() {
                    let child = path.state.beta(*p, 1).to_vec();
                    for chunk in path.state.beta_mut(t, side).chunks_mut(block) {
                        chunk.copy_from_slice(&child);
                    }
                }
            }
            kind => {
                let choices = {
                    let heads: Vec<NodeHead<'_, T>> = paths
                        .iter()
                        .map(|p| NodeHead {
                            pm: p.pm,
                            alpha: p.state.alpha(t),
                        })
                        .collect();
                    match kind {
                        NodeKind::Rate0 => scl_extend_rate0(&heads),
                        NodeKind::Rate1 => scl_extend_rate1(&heads, self.l),
                        NodeKind::Rep => scl_extend_rep(&heads, self.l),
                        NodeKind::Spc => scl_extend_spc(&heads, self.l),
                        NodeKind::GPc { np } | NodeKind::RgPc { np, .. } => {
                            scl_extend_gpc(&heads, *np, self.l)
                        }
                        NodeKind::Split { .. } | NodeKind::GRep { .. } => unreachable!(),
                    }
                };
                let origins: Vec<usize> = choices.iter().map(|c| c.origin).collect();
                let old = std::mem::take(paths);
                *paths = take_paths(old, &origins);
                for (path, choice) in paths.iter_mut().zip(choices) {
                    path.pm = choice.pm;
                    path.state.beta_mut(t, side).copy_from_slice(&choice.beta);
                }
            }
        }
    }
}

/// SCL decoder that extends the list at the leaves of a [`DecodePlan`].
#[derive(Debug, Clone)]
pub struct FastListDecoder<T> {
    code: PolarCode,
    plan: DecodePlan,
    list_size: usize,
    crc: Option<CrcSpec>,
    kernel: FKernel,
    _llr: std::marker::PhantomData<T>,
}

impl<T: Llr> FastListDecoder<T> {
    pub fn new(
        code: &PolarCode,
        plan: DecodePlan,
        list_size: usize,
        crc: Option<CrcSpec>,
        kernel: FKernel,
    ) -> Self {
        assert!(list_size >= 1, "list size must be at least 1");
        assert_eq!(plan.stage, code.stages(), "plan does not match the code");
        Self {
            code: code.clone(),
            plan,
            list_size,
            crc,
            kernel,
            _llr: std::marker::PhantomData,
        }
    }

    pub fn plan(&self) -> &DecodePlan {
        &self.plan
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn decode(&self, llrs: &[T]) -> ListOutput<T> {
        assert_eq!(llrs.len(), self.code.len(), "LLR vector length must equal N");
        let head = NodeHead {
            pm: T::zero(),
            alpha: llrs,
        };
        let choices = run_node(&[head], &self.plan, self.list_size, self.kernel);
        let survivors = choices
            .into_iter()
            .map(|c| {
                let mut u_hat = c.beta;
                polar_transform(&mut u_hat);
                Survivor { u_hat, pm: c.pm }
            })
            .collect();
        select_final(survivors, &self.code, self.crc.as_ref())
    }
}
