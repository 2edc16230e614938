mod common;

use common::{four_groups_instance, hub_then_bridge_instance, id, overlap_pairs_instance, shared_followees_instance};
use socdiv::bridges::{bridged_components, bridged_k_clip_diversity, jaccard_similarity, BridgeConfig};
use socdiv::diversity::{diversity_report, strong_diversity, weak_diversity, ReportConfig};
use socdiv::graph::NodeId;
use socdiv::kclip::{k_clip_decompose, k_clip_diversity, ClipConfig, RemovalMode};

#[test]
fn hub_then_bridge_node_removal() {
    let n = hub_then_bridge_instance();
    assert_eq!(weak_diversity(&n), 1);
    assert_eq!(strong_diversity(&n), 6);
    let t = k_clip_decompose(&n, &ClipConfig::new(3).unwrap());
    let order: Vec<NodeId> = t.removal_order().collect();
    assert_eq!(order, vec![id(1), id(2)]);
    assert_eq!(t.steps[0].removed, vec![(id(1), 6)]);
    assert_eq!(t.steps[1].removed, vec![(id(2), 3)]);
    assert_eq!(t.remaining.len(), 6);
    assert_eq!(t.d_k, 4);
}

#[test]
fn nine_followers_four_weak_six_strong() {
    let n = four_groups_instance();
    assert_eq!(n.len(), 9);
    assert_eq!(weak_diversity(&n), 4);
    assert_eq!(strong_diversity(&n), 6);
    let sizes: Vec<usize> = socdiv::weak_components(&n).blocks().iter().map(Vec::len).collect();
    assert_eq!(sizes, vec![4, 3, 1, 1]);
}

#[test]
fn shared_followees_merge_two_components() {
    let (g, ego) = shared_followees_instance();
    let n = g.ego_neighborhood(ego).unwrap();
    let clip = ClipConfig::default();
    assert_eq!(g.in_degree(ego).unwrap(), 4);
    assert_eq!(k_clip_diversity(&n, &clip), 3);
    assert_eq!(bridged_k_clip_diversity(&n, &g, &clip, &BridgeConfig::default()).unwrap(), 2);
    let report = diversity_report(&g, ego, &ReportConfig::default()).unwrap();
    assert_eq!((report.indegree, report.kclip[&5], report.bridged_kclip), (4, 3, Some(2)));
}

#[test]
fn overlap_pairs_one_bridge() {
    let g = overlap_pairs_instance();
    let ego = id(0);
    let n = g.ego_neighborhood(ego).unwrap();
    let with_ego = |v: u64| -> Vec<NodeId> { g.followees(id(v)).unwrap().collect() };
    let high = jaccard_similarity(&with_ego(1), &with_ego(2));
    let low = jaccard_similarity(&with_ego(3), &with_ego(4));
    assert_eq!((high * 100.0).round() / 100.0, 0.48);
    assert_eq!((low * 100.0).round() / 100.0, 0.12);
    assert!(high > 0.2 && low <= 0.2);

    let clip = ClipConfig::default();
    let trace = k_clip_decompose(&n, &clip);
    assert_eq!(trace.d_k, 7);
    let cg = bridged_components(&trace, &g, &BridgeConfig::default()).unwrap();
    assert_eq!(cg.bridge_edges.len(), 1);
    let (a, b) = cg.bridge_edges[0];
    assert_eq!(cg.components.blocks()[a], vec![id(1)]);
    assert_eq!(cg.components.blocks()[b], vec![id(2)]);
    assert_eq!(cg.unlinked_count(), 6);
}

#[test]
fn isolated_followers_unaffected_by_decomposition() {
    let n = common::hood(0, &(1..=100).collect::<Vec<_>>(), &[]);
    for mode in [RemovalMode::Single, RemovalMode::Multiple, RemovalMode::Adaptive] {
        for k in 1..=10 {
            let t = k_clip_decompose(&n, &ClipConfig::new(k).unwrap().with_mode(mode));
            assert!(t.steps.is_empty());
            assert_eq!(t.d_k, 100);
        }
    }
}
