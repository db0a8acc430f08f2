//! Decode-tree pruning: recognizes special nodes in the frozen pattern.
//!
//! Matching is top-down. At every node the first pattern that applies wins,
//! in this order: Rate-0, Rate-1, G-Rep, G-PC, RG-PC, Rep, SPC. A node that
//! matches nothing is split and both halves are classified recursively.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::construction::PolarCode;

/// Which node decoders a plan may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyOptions {
    pub enable_grep: bool,
    pub enable_gpc: bool,
    /// Largest number of additional frozen bits tolerated in an RG-PC node;
    /// 0 disables RG-PC.
    pub max_af: usize,
    /// Smallest node size eligible for Rep, SPC, G-Rep, G-PC and RG-PC.
    pub min_special_size: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        NodeSet::Base.options()
    }
}

/// The cumulative node sets compared in the latency table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeSet {
    /// Rate-0, Rate-1, Rep, SPC.
    Base,
    /// Base plus G-Rep.
    GRep,
    /// Base plus G-Rep and G-PC.
    GPc,
    /// Everything, with an AF budget for RG-PC.
    RgPc(usize),
}

impl NodeSet {
    pub fn options(self) -> ClassifyOptions {
        let (enable_grep, enable_gpc, max_af) = match self {
            NodeSet::Base => (false, false, 0),
            NodeSet::GRep => (true, false, 0),
            NodeSet::GPc => (true, true, 0),
            NodeSet::RgPc(af) => (true, true, af),
        };
        ClassifyOptions {
            enable_grep,
            enable_gpc,
            max_af,
            min_special_size: 2,
        }
    }

    pub fn label(self) -> String {
        match self {
            NodeSet::Base => "base".into(),
            NodeSet::GRep => "+grep".into(),
            NodeSet::GPc => "+gpc".into(),
            NodeSet::RgPc(af) => format!("+rgpc-{af}af"),
        }
    }
}

/// Kind of a plan node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NodeKind {
    Rate0,
    Rate1,
    Rep,
    Spc,
    /// All bits frozen except the rightmost `2^p` block, decoded as `rate_c`.
    GRep { p: usize, rate_c: Box<DecodePlan> },
    /// Leftmost `np` bits frozen, everything else information.
    GPc { np: usize },
    /// Like G-PC but with additional frozen bits outside the leftmost block.
    /// `af_positions` are absolute bit-channel indices.
    RgPc { np: usize, af_positions: Vec<usize> },
    Split {
        left: Box<DecodePlan>,
        right: Box<DecodePlan>,
    },
}

/// Pruned decode tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodePlan {
    pub stage: usize,
    /// Index of the node's first bit-channel.
    pub offset: usize,
    #[serde(flatten)]
    pub kind: NodeKind,
}

/// Node-kind label used in histograms and cost reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeLabel {
    Rate0,
    Rate1,
    Rep,
    Spc,
    GRep,
    GPc,
    RgPc,
    Split,
}

impl NodeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeLabel::Rate0 => "Rate0",
            NodeLabel::Rate1 => "Rate1",
            NodeLabel::Rep => "Rep",
            NodeLabel::Spc => "Spc",
            NodeLabel::GRep => "GRep",
            NodeLabel::GPc => "GPc",
            NodeLabel::RgPc => "RGPc",
            NodeLabel::Split => "Split",
        }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl NodeKind {
    pub fn label(&self) -> NodeLabel {
        match self {
            NodeKind::Rate0 => NodeLabel::Rate0,
            NodeKind::Rate1 => NodeLabel::Rate1,
            NodeKind::Rep => NodeLabel::Rep,
            NodeKind::Spc => NodeLabel::Spc,
            NodeKind::GRep { .. } => NodeLabel::GRep,
            NodeKind::GPc { .. } => NodeLabel::GPc,
            NodeKind::RgPc { .. } => NodeLabel::RgPc,
            NodeKind::Split { .. } => NodeLabel::Split,
        }
    }
}

impl DecodePlan {
    pub fn size(&self) -> usize {
        1 << self.stage
    }

    /// Terminal nodes of the plan in decoding order. A G-Rep node counts as
    /// a leaf (its Rate-C is not descended into).
    pub fn leaves(&self) -> Vec<&DecodePlan> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a DecodePlan>) {
        match &self.kind {
            NodeKind::Split { left, right } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
            _ => out.push(self),
        }
    }

    /// Pre-order visit of every node, including G-Rep Rate-C subtrees.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a DecodePlan)) {
        f(self);
        match &self.kind {
            NodeKind::Split { left, right } => {
                left.visit(f);
                right.visit(f);
            }
            NodeKind::GRep { rate_c, .. } => rate_c.visit(f),
            _ => {}
        }
    }

    /// Checks that the plan tiles `code` and every node agrees with its
    /// frozen pattern; returns a description of the first violation.
    pub fn validate(&self, code: &PolarCode, opts: &ClassifyOptions) -> Result<(), String> {
        if self.offset != 0 || self.stage != code.stages() {
            return Err("root does not cover the whole code".into());
        }
        check_node(self, code.flags(), opts)
    }

    fn fmt_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        let span = format!("[{}..{})", self.offset, self.offset + self.size());
        match &self.kind {
            NodeKind::Split { left, right } => {
                writeln!(f, "{pad}Split t={} {span}", self.stage)?;
                left.fmt_indented(f, depth + 1)?;
                right.fmt_indented(f, depth + 1)
            }
            NodeKind::GRep { p, rate_c } => {
                writeln!(f, "{pad}GRep t={} p={p} {span}", self.stage)?;
                rate_c.fmt_indented(f, depth + 1)
            }
            NodeKind::GPc { np } => writeln!(f, "{pad}GPc t={} Np={np} {span}", self.stage),
            NodeKind::RgPc { np, af_positions } => writeln!(
                f,
                "{pad}RGPc t={} Np={np} AF={af_positions:?} {span}",
                self.stage
            ),
            other => writeln!(f, "{pad}{} t={} {span}", other.label(), self.stage),
        }
    }
}

impl fmt::Display for DecodePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_indented(f, 0)
    }
}

fn check_node(plan: &DecodePlan, flags: &[u8], opts: &ClassifyOptions) -> Result<(), String> {
    let size = plan.size();
    let slice = flags
        .get(plan.offset..plan.offset + size)
        .ok_or_else(|| format!("node at {} overruns the code", plan.offset))?;
    let ok = match &plan.kind {
        NodeKind::Rate0 => slice.iter().all(|&s| s == 0),
        NodeKind::Rate1 => slice.iter().all(|&s| s == 1),
        NodeKind::Rep => slice[..size - 1].iter().all(|&s| s == 0) && slice[size - 1] == 1,
        NodeKind::Spc => slice[0] == 0 && slice[1..].iter().all(|&s| s == 1),
        NodeKind::GRep { p, rate_c } => {
            let block = 1 << p;
            if *p >= plan.stage
                || rate_c.stage != *p
                || rate_c.offset != plan.offset + size - block
            {
                return Err(format!("malformed G-Rep at {}", plan.offset));
            }
            check_node(rate_c, flags, opts)?;
            slice[..size - block].iter().all(|&s| s == 0)
        }
        NodeKind::GPc { np } => {
            np.is_power_of_two()
                && *np < size
                && slice[..*np].iter().all(|&s| s == 0)
                && slice[*np..].iter().all(|&s| s == 1)
        }
        NodeKind::RgPc { np, af_positions } => {
            let zeros: Vec<usize> = (*np..size)
                .filter(|&i| slice[i] == 0)
                .map(|i| i + plan.offset)
                .collect();
            np.is_power_of_two()
                && *np < size
                && slice[..*np].iter().all(|&s| s == 0)
                && zeros == *af_positions
                && !zeros.is_empty()
                && zeros.len() <= opts.max_af
        }
        NodeKind::Split { left, right } => {
            if plan.stage == 0
                || left.stage + 1 != plan.stage
                || right.stage + 1 != plan.stage
                || left.offset != plan.offset
                || right.offset != plan.offset + size / 2
            {
                return Err(format!("malformed split at {}", plan.offset));
            }
            check_node(left, flags, opts)?;
            check_node(right, flags, opts)?;
            true
        }
    };
    if ok {
        Ok(())
    } else {
        Err(format!(
            "{} at offset {} does not match flags {:?}",
            plan.kind.label(),
            plan.offset,
            slice
        ))
    }
}

/// Builds the decode plan of `code`.
pub fn classify(code: &PolarCode, opts: &ClassifyOptions) -> DecodePlan {
    classify_flags(code.flags(), 0, opts)
}

/// Classifies an arbitrary power-of-two flag slice starting at `offset`.
pub fn classify_flags(flags: &[u8], offset: usize, opts: &ClassifyOptions) -> DecodePlan {
    let size = flags.len();
    assert!(size.is_power_of_two(), "node size must be a power of two");
    let stage = size.trailing_zeros() as usize;
    let kind = match_special(flags, offset, opts).unwrap_or_else(|| {
        let (l, r) = flags.split_at(size / 2);
        NodeKind::Split {
            left: Box::new(classify_flags(l, offset, opts)),
            right: Box::new(classify_flags(r, offset + size / 2, opts)),
        }
    });
    DecodePlan {
        stage,
        offset,
        kind,
    }
}

fn match_special(flags: &[u8], offset: usize, opts: &ClassifyOptions) -> Option<NodeKind> {
    let size = flags.len();
    let first_info = flags.iter().position(|&s| s == 1);
    let Some(first_info) = first_info else {
        return Some(NodeKind::Rate0);
    };
    if first_info == 0 && flags.iter().all(|&s| s == 1) {
        return Some(NodeKind::Rate1);
    }
    if size < opts.min_special_size.max(2) {
        return None;
    }
    if opts.enable_grep {
        // smallest right-aligned block holding every information bit
        let block = (size - first_info).next_power_of_two();
        if block < size {
            let p = block.trailing_zeros() as usize;
            let rate_c = classify_flags(&flags[size - block..], offset + size - block, opts);
            return Some(NodeKind::GRep {
                p,
                rate_c: Box::new(rate_c),
            });
        }
    }
    let lead = first_info;
    let rest_all_info = flags[lead..].iter().all(|&s| s == 1);
    if opts.enable_gpc && lead.is_power_of_two() && rest_all_info {
        return Some(NodeKind::GPc { np: lead });
    }
    if opts.max_af > 0 && lead >= 1 {
        let np = prev_power_of_two(lead);
        let af_positions: Vec<usize> = (np..size)
            .filter(|&i| flags[i] == 0)
            .map(|i| i + offset)
            .collect();
        if !af_positions.is_empty() && af_positions.len() <= opts.max_af {
            return Some(NodeKind::RgPc { np, af_positions });
        }
    }
    if lead == size - 1 {
        return Some(NodeKind::Rep);
    }
    if lead == 1 && rest_all_info {
        return Some(NodeKind::Spc);
    }
    None
}

fn prev_power_of_two(v: usize) -> usize {
    debug_assert!(v > 0);
    1 << (usize::BITS - 1 - v.leading_zeros())
}

/// Histogram of node kinds (and of (kind, size) pairs) over every plan node.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PlanStats {
    pub counts: BTreeMap<NodeLabel, usize>,
    pub sizes: BTreeMap<NodeLabel, BTreeMap<usize, usize>>,
}

impl PlanStats {
    pub fn count(&self, label: NodeLabel) -> usize {
        self.counts.get(&label).copied().unwrap_or(0)
    }
}

pub fn plan_stats(plan: &DecodePlan) -> PlanStats {
    let mut stats = PlanStats::default();
    plan.visit(&mut |node| {
        let label = node.kind.label();
        *stats.counts.entry(label).or_default() += 1;
        *stats
            .sizes
            .entry(label)
            .or_default()
            .entry(node.size())
            .or_default() += 1;
    });
    stats
}
