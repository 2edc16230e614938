mod common;

use common::{naive_k_clip, random_neighborhood};
use proptest::prelude::*;
use socdiv::components::weak_component_count;
use socdiv::diversity::weak_diversity;
use socdiv::graph::{Neighborhood, NodeId};
use socdiv::kclip::{k_clip_decompose, k_clip_diversity, ClipConfig, RemovalMode, StepKind};

fn cfg(k: usize, mode: RemovalMode) -> ClipConfig {
    ClipConfig::new(k).unwrap().with_mode(mode)
}

#[test]
fn single_mode_chain_over_k() {
    for seed in 0..300 {
        let n = random_neighborhood(seed, 200, 14.0);
        let weak = weak_diversity(&n);
        let mut prev = k_clip_diversity(&n, &cfg(1, RemovalMode::Single));
        for k in 2..=10 {
            let dk = k_clip_diversity(&n, &cfg(k, RemovalMode::Single));
            assert!(weak <= dk && dk <= prev && prev <= n.len(), "seed {seed} k {k}");
            prev = dk;
        }
    }
}

#[test]
fn simultaneous_removal_can_drop_a_whole_cycle() {
    let n = common::hood(0, &[1, 2, 3], &[(1, 2), (2, 3), (3, 1)]);
    let single = k_clip_decompose(&n, &cfg(1, RemovalMode::Single));
    assert_eq!(single.remaining.len(), 1);
    assert_eq!(single.d_k, 1);
    let multiple = k_clip_decompose(&n, &cfg(1, RemovalMode::Multiple));
    assert_eq!(multiple.steps.len(), 1);
    assert!(multiple.remaining.is_empty());
    assert_eq!(multiple.d_k, 0);
    // So the chain over k is not guaranteed outside single mode.
    assert!(k_clip_diversity(&n, &cfg(2, RemovalMode::Multiple)) > multiple.d_k);
}

#[test]
fn degenerates_to_weak_above_max_outdegree() {
    for seed in 0..300 {
        let n = random_neighborhood(seed, 200, 14.0);
        let k = n.max_out_degree() + 1;
        for mode in [RemovalMode::Single, RemovalMode::Multiple, RemovalMode::Adaptive] {
            let t = k_clip_decompose(&n, &cfg(k, mode));
            assert!(t.steps.is_empty());
            assert_eq!(t.d_k, weak_diversity(&n).max(weak_component_count(&n)));
        }
    }
}

#[test]
fn matches_naive_recomputation() {
    for seed in 0..150 {
        let n = random_neighborhood(5000 + seed, 40, 8.0);
        for k in [1, 2, 3, 5] {
            for (mode, threshold) in [
                (RemovalMode::Single, 1000),
                (RemovalMode::Multiple, 1000),
                (RemovalMode::Adaptive, 10),
            ] {
                let c = cfg(k, mode).with_adaptive_threshold(threshold).unwrap();
                let t = k_clip_decompose(&n, &c);
                let naive = naive_k_clip(&n, k, mode, threshold);
                let steps: Vec<Vec<NodeId>> = t.steps.iter().map(|s| s.removed.iter().map(|&(v, _)| v).collect()).collect();
                assert_eq!(steps, naive.steps, "seed {seed} k {k} {mode}");
                assert_eq!(t.remaining.members(), naive.remaining.as_slice());
                assert_eq!(t.d_k, naive.d_k);
            }
        }
    }
}

#[test]
fn adaptive_switches_to_single_below_threshold() {
    // Two dense cliques of 6 (30 linked nodes) plus isolated members.
    let mut edges = Vec::new();
    for base in [0u64, 10] {
        for u in 1..=6 {
            for v in 1..=6 {
                if u != v {
                    edges.push((base + u, base + v));
                }
            }
        }
    }
    let members: Vec<u64> = (1..=6).chain(11..=16).chain(20..25).collect();
    let n = common::hood(0, &members, &edges);
    let t = k_clip_decompose(&n, &cfg(3, RemovalMode::Adaptive).with_adaptive_threshold(11).unwrap());
    assert_eq!(t.steps[0].kind, StepKind::Multiple);
    assert_eq!(t.steps[0].removed.len(), 12);
    let t = k_clip_decompose(&n, &cfg(3, RemovalMode::Adaptive).with_adaptive_threshold(12).unwrap());
    assert!(t.steps.iter().all(|s| s.kind == StepKind::Single));
}

fn arb_neighborhood() -> impl Strategy<Value = Neighborhood> {
    (2u64..40, prop::collection::vec((1u64..40, 1u64..40), 0..200)).prop_map(|(n, raw)| {
        let edges: Vec<(u64, u64)> = raw.into_iter().filter(|&(u, v)| u != v && u <= n && v <= n).collect();
        let members: Vec<u64> = (1..=n).collect();
        common::hood(0, &members, &edges)
    })
}

fn arb_mode() -> impl Strategy<Value = RemovalMode> {
    prop_oneof![Just(RemovalMode::Single), Just(RemovalMode::Multiple), Just(RemovalMode::Adaptive)]
}

proptest! {
    #[test]
    fn trace_invariants(n in arb_neighborhood(), k in 1usize..8, mode in arb_mode(), threshold in 0usize..30) {
        let c = cfg(k, mode).with_adaptive_threshold(threshold.max(1)).unwrap();
        let t = k_clip_decompose(&n, &c);
        prop_assert!(t.remaining.out_degrees().iter().all(|&d| d < k));
        let mut all: Vec<NodeId> = t.removal_order().chain(t.remaining.members().iter().copied()).collect();
        prop_assert_eq!(all.len(), n.len());
        all.sort();
        prop_assert_eq!(all.as_slice(), n.members());
        prop_assert_eq!(t.d_k, weak_component_count(&t.remaining));
        prop_assert!(t.steps.len() <= n.len());
        prop_assert!(t.steps.iter().all(|s| !s.removed.is_empty() && s.removed.iter().all(|&(_, d)| d >= k)));
        prop_assert!(t.d_k <= n.len());
        if mode == RemovalMode::Single {
            prop_assert!(!t.remaining.is_empty());
            prop_assert!(weak_diversity(&n) <= t.d_k);
        }
        prop_assert_eq!(k_clip_decompose(&n, &c), t);
    }

    #[test]
    fn single_mode_monotone_in_k(n in arb_neighborhood(), k in 2usize..10) {
        let single = |k| k_clip_diversity(&n, &cfg(k, RemovalMode::Single));
        prop_assert!(single(k) <= single(k - 1));
    }
}
