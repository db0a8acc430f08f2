use polar_gfd::{
    classify, classify_flags, construct_code, cost_sc, cost_scl, latency_table, ClassifyOptions,
    DecodePlan, DecoderKind, NodeKind, NodeSet, PolarCode,
};
use proptest::prelude::*;

fn n8() -> PolarCode {
    PolarCode::from_frozen(3, &[0, 1, 2, 4], 0.5).unwrap()
}

/// Price of a plan recomputed from the node list of the cost model.
fn hand_price(plan: &DecodePlan, list: bool) -> u64 {
    let size = plan.size() as u64;
    match &plan.kind {
        NodeKind::Split { left, right } => 1 + hand_price(left, list) + 1 + hand_price(right, list),
        NodeKind::Rate0 => 1,
        NodeKind::Rate1 if list => 2 * size,
        NodeKind::Rate1 => 1,
        NodeKind::Rep if list => 1 + size,
        NodeKind::Rep => 2,
        NodeKind::Spc if list => 2 * size - 1,
        NodeKind::Spc => 3,
        NodeKind::GRep { rate_c, .. } => 1 + hand_price(rate_c, list),
        NodeKind::GPc { np } | NodeKind::RgPc { np, .. } if list => {
            let np = *np as u64;
            1 + 2 * ((size - 1 + np - 1) / np)
        }
        NodeKind::GPc { .. } | NodeKind::RgPc { .. } => 3,
    }
}

#[test]
fn rate0_root_costs_one_step() {
    let code = PolarCode::from_flags(vec![0; 64], 0.5).unwrap();
    let plan = classify(&code, &NodeSet::Base.options());
    assert_eq!(cost_sc(&plan).total_steps, 1);
    assert_eq!(cost_scl(&plan).total_steps, 1);
}

#[test]
fn n8_hand_counts() {
    let plan = classify(&n8(), &NodeSet::Base.options());
    let sc = cost_sc(&plan);
    assert_eq!(sc.total_steps, 1 + 2 + 1 + 3);
    assert_eq!(cost_scl(&plan).total_steps, 1 + (1 + 4) + 1 + (2 * 4 - 1));
    let steps: Vec<u64> = sc.per_node.iter().map(|n| n.steps).collect();
    assert_eq!(steps, vec![2, 2, 3]);
    let plan = classify(&n8(), &NodeSet::RgPc(2).options());
    assert_eq!(cost_sc(&plan).total_steps, 3);
    assert_eq!(cost_scl(&plan).total_steps, 1 + 2 * 4);
}

#[test]
fn generalized_node_prices() {
    let opts = NodeSet::GPc.options();
    // G-Rep over a size-2 Rate-1 block
    let plan = classify_flags(&[0, 0, 1, 1], 0, &opts);
    assert!(matches!(plan.kind, NodeKind::GRep { p: 1, .. }));
    assert_eq!(cost_sc(&plan).total_steps, 2);
    assert_eq!(cost_scl(&plan).total_steps, 1 + 4);
    // G-PC, 4 sub-codes of length 4: (16 - 1) / 4 rounds up to 4
    let mut flags = vec![0u8; 4];
    flags.extend([1; 12]);
    let plan = classify_flags(&flags, 0, &opts);
    assert_eq!(plan.kind, NodeKind::GPc { np: 4 });
    assert_eq!(cost_sc(&plan).total_steps, 3);
    assert_eq!(cost_scl(&plan).total_steps, 9);
}

#[test]
fn table_shape_and_csv() {
    let code = construct_code(7, 106, 0.5).unwrap();
    let table = latency_table(&code, &[1, 2, 3]);
    assert_eq!(table.columns.len(), 6);
    let csv = table.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "decoder,node_set,steps");
    assert_eq!(lines.len(), 13);
    assert!(lines[1].starts_with("sc,base,"));
    assert!(lines[7].starts_with("scl,base,"));
    let text = table.to_string();
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("+rgpc-3af"));
}

fn constructed() -> impl Strategy<Value = PolarCode> {
    (1usize..=10, 0.0f64..=1.0, 0.3f64..1.2).prop_map(|(stages, frac, sigma)| {
        let k = ((1usize << stages) as f64 * frac).round() as usize;
        construct_code(stages, k, sigma).unwrap()
    })
}

proptest! {
    #[test]
    fn totals_equal_breakdown_and_hand_price(code in constructed(), af in 0usize..=3, grep: bool, gpc: bool) {
        let opts = ClassifyOptions { enable_grep: grep, enable_gpc: gpc, max_af: af, min_special_size: 2 };
        let plan = classify(&code, &opts);
        for (report, list) in [(cost_sc(&plan), false), (cost_scl(&plan), true)] {
            prop_assert_eq!(report.total_steps, report.per_node.iter().map(|n| n.steps).sum::<u64>());
            prop_assert_eq!(report.total_steps, hand_price(&plan, list));
        }
    }

    #[test]
    fn columns_never_increase_and_lists_cost_more(code in constructed()) {
        let table = latency_table(&code, &[1, 2, 3]);
        for decoder in [DecoderKind::Sc, DecoderKind::Scl] {
            let totals = table.totals(decoder);
            prop_assert!(totals.windows(2).all(|w| w[1] <= w[0]), "{:?} {:?}", decoder, totals);
        }
        if code.k() > 0 {
            let sc = table.totals(DecoderKind::Sc);
            let scl = table.totals(DecoderKind::Scl);
            prop_assert!(sc.iter().zip(&scl).all(|(a, b)| b > a), "{:?} {:?}", sc, scl);
        }
    }
}
