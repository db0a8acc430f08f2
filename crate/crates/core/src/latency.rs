//! Time-step cost model of fast SC and SCL decoding.
//!
//! `f` and `g` cost one step each at every stage. Node prices:
//!
//! | node      | SC | SCL                        |
//! |-----------|----|----------------------------|
//! | Rate-0    | 1  | 1                          |
//! | Rate-1    | 1  | 2·2^t                      |
//! | Rep       | 2  | 1 + 2^t                    |
//! | SPC       | 3  | 2·2^t − 1                  |
//! | G-Rep     | 1 + cost(Rate-C) | 1 + cost(Rate-C) |
//! | G-PC/RG-PC| 3  | 1 + 2·⌈(2^t − 1)/Np⌉        |
//!
//! No cost is charged for a final CRC check.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::classify::{classify, DecodePlan, NodeKind, NodeLabel, NodeSet};
use crate::construction::PolarCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Sc,
    Scl,
}

impl DecoderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DecoderKind::Sc => "sc",
            DecoderKind::Scl => "scl",
        }
    }
}

/// Cost of one plan node. Split nodes carry only their own `f` and `g`
/// steps; G-Rep nodes carry their whole subtree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCost {
    pub label: NodeLabel,
    pub stage: usize,
    pub offset: usize,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub decoder: DecoderKind,
    pub node_set: String,
    pub total_steps: u64,
    pub per_node: Vec<NodeCost>,
}

fn node_steps(plan: &DecodePlan, decoder: DecoderKind) -> u64 {
    let size = plan.size() as u64;
    match (&plan.kind, decoder) {
        (NodeKind::Split { left, right }, _) => {
            2 + node_steps(left, decoder) + node_steps(right, decoder)
        }
        (NodeKind::GRep { rate_c, .. }, _) => 1 + node_steps(rate_c, decoder),
        (NodeKind::Rate0, _) => 1,
        (NodeKind::Rate1, DecoderKind::Sc) => 1,
        (NodeKind::Rate1, DecoderKind::Scl) => 2 * size,
        (NodeKind::Rep, DecoderKind::Sc) => 2,
        (NodeKind::Rep, DecoderKind::Scl) => 1 + size,
        (NodeKind::Spc, DecoderKind::Sc) => 3,
        (NodeKind::Spc, DecoderKind::Scl) => 2 * size - 1,
        (NodeKind::GPc { .. } | NodeKind::RgPc { .. }, DecoderKind::Sc) => 3,
        (NodeKind::GPc { np } | NodeKind::RgPc { np, .. }, DecoderKind::Scl) => {
            1 + 2 * (size - 1).div_ceil(*np as u64)
        }
    }
}

fn breakdown(plan: &DecodePlan, decoder: DecoderKind, out: &mut Vec<NodeCost>) {
    let steps = match &plan.kind {
        NodeKind::Split { left, right } => {
            out.push(NodeCost {
                label: NodeLabel::Split,
                stage: plan.stage,
                offset: plan.offset,
                steps: 2,
            });
            breakdown(left, decoder, out);
            breakdown(right, decoder, out);
            return;
        }
        _ => node_steps(plan, decoder),
    };
    out.push(NodeCost {
        label: plan.kind.label(),
        stage: plan.stage,
        offset: plan.offset,
        steps,
    });
}

fn report(plan: &DecodePlan, decoder: DecoderKind, node_set: &str) -> CostReport {
    let mut per_node = Vec::new();
    breakdown(plan, decoder, &mut per_node);
    CostReport {
        decoder,
        node_set: node_set.to_string(),
        total_steps: per_node.iter().map(|n| n.steps).sum(),
        per_node,
    }
}

pub fn cost_sc(plan: &DecodePlan) -> CostReport {
    report(plan, DecoderKind::Sc, "")
}

pub fn cost_scl(plan: &DecodePlan) -> CostReport {
    report(plan, DecoderKind::Scl, "")
}

/// Table of totals: one row per decoder, one column per node set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatencyTable {
    pub columns: Vec<NodeSet>,
    pub sc: Vec<CostReport>,
    pub scl: Vec<CostReport>,
}

/// Node-set progression base, +G-Rep, +G-PC, then RG-PC with each AF budget
/// of `af_sweep`.
pub fn node_set_progression(af_sweep: &[usize]) -> Vec<NodeSet> {
    let mut cols = vec![NodeSet::Base, NodeSet::GRep, NodeSet::GPc];
    cols.extend(af_sweep.iter().map(|&af| NodeSet::RgPc(af)));
    cols
}

pub fn latency_table(code: &PolarCode, af_sweep: &[usize]) -> LatencyTable {
    let columns = node_set_progression(af_sweep);
    let mut sc = Vec::with_capacity(columns.len());
    let mut scl = Vec::with_capacity(columns.len());
    for set in &columns {
        let plan = classify(code, &set.options());
        let label = set.label();
        sc.push(report(&plan, DecoderKind::Sc, &label));
        scl.push(report(&plan, DecoderKind::Scl, &label));
    }
    LatencyTable { columns, sc, scl }
}

impl LatencyTable {
    pub fn totals(&self, decoder: DecoderKind) -> Vec<u64> {
        let row = match decoder {
            DecoderKind::Sc => &self.sc,
            DecoderKind::Scl => &self.scl,
        };
        row.iter().map(|r| r.total_steps).collect()
    }

    /// Long-format CSV: `decoder,node_set,steps`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("decoder,node_set,steps\n");
        for r in self.sc.iter().chain(&self.scl) {
            let _ = writeln!(out, "{},{},{}", r.decoder.as_str(), r.node_set, r.total_steps);
        }
        out
    }
}

impl fmt::Display for LatencyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.columns.iter().map(|c| c.label()).collect();
        let width = labels.iter().map(String::len).max().unwrap_or(0).max(6);
        write!(f, "{:<8}", "decoder")?;
        for l in &labels {
            write!(f, " {l:>width$}")?;
        }
        writeln!(f)?;
        for (name, row) in [("sc", &self.sc), ("scl", &self.scl)] {
            write!(f, "{name:<8}")?;
            for r in row {
                write!(f, " {:>width$}", r.total_steps)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
