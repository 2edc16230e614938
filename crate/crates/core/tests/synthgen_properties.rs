use socdiv::diversity::weak_diversity;
use socdiv::kclip::{k_clip_diversity, ClipConfig};
use socdiv::stats::{ols, Matrix};
use socdiv::synthgen::{gen_ego, gen_population, gen_scale_graph, EgoGenSpec, PopulationGenSpec, ScaleGenSpec};
use socdiv::weak_components;

fn ego_spec(sizes: Vec<usize>, hubs: usize, fanout: usize, seed: u64) -> EgoGenSpec {
    EgoGenSpec {
        component_sizes: sizes,
        intra_edge_prob: 0.05,
        hub_count: hubs,
        hub_out_fanout: fanout,
        reciprocal_prob: 0.2,
        seed,
    }
}

#[test]
fn planted_groups_without_hubs() {
    for seed in 0..50usize {
        let sizes: Vec<usize> = (0..1 + seed as usize % 7).map(|i| 1 + ((seed as usize * 7 + i * 3) % 9)).collect();
        let (g, ego) = gen_ego(&ego_spec(sizes.clone(), 0, 0, seed as u64)).unwrap();
        let n = g.ego_neighborhood(ego).unwrap();
        assert_eq!(weak_diversity(&n), sizes.len());
        let mut got: Vec<usize> = weak_components(&n).blocks().iter().map(Vec::len).collect();
        let mut want = sizes.clone();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }
}

#[test]
fn hub_joins_two_groups_but_clipping_separates_them() {
    for seed in 0..20 {
        let (g, ego) = gen_ego(&ego_spec(vec![50, 50], 1, 20, seed)).unwrap();
        let n = g.ego_neighborhood(ego).unwrap();
        assert_eq!(weak_diversity(&n), 1);
        assert!(k_clip_diversity(&n, &ClipConfig::default()) >= 2);
    }
}

#[test]
fn giant_component_scenario() {
    let mut sizes = vec![20; 5];
    sizes.extend([1; 40]);
    let spec = EgoGenSpec {
        component_sizes: sizes,
        intra_edge_prob: 0.0,
        hub_count: 10,
        hub_out_fanout: 10,
        reciprocal_prob: 0.0,
        seed: 7,
    };
    let (g, ego) = gen_ego(&spec).unwrap();
    let n = g.ego_neighborhood(ego).unwrap();
    assert_eq!(n.len(), 150);
    assert_eq!(weak_components(&n).blocks().iter().map(Vec::len).max(), Some(110));
    assert_eq!(weak_diversity(&n), 41);
    assert_eq!(k_clip_diversity(&n, &ClipConfig::default()), 45);
}

#[test]
fn generation_is_deterministic() {
    let s = ego_spec(vec![30, 4, 1], 3, 6, 99);
    assert_eq!(gen_ego(&s).unwrap().0.edges().collect::<Vec<_>>(), gen_ego(&s).unwrap().0.edges().collect::<Vec<_>>());
    let p = PopulationGenSpec {
        n_egos: 200,
        diversity_effect: 0.4,
        noise_sigma: 0.1,
        seed: 5,
    };
    let (a, b) = (gen_population(&p).unwrap(), gen_population(&p).unwrap());
    assert_eq!(a.records, b.records);
    assert_eq!(a.covariates, b.covariates);
    assert_eq!(a.graph.edges().collect::<Vec<_>>(), b.graph.edges().collect::<Vec<_>>());
    let s = ScaleGenSpec {
        nodes: 1000,
        edges: 5000,
        exponent: 2.3,
        seed: 1,
    };
    assert_eq!(
        gen_scale_graph(&s).unwrap().edges().collect::<Vec<_>>(),
        gen_scale_graph(&s).unwrap().edges().collect::<Vec<_>>()
    );
}

fn slope_fit(spec: &PopulationGenSpec) -> (f64, f64, (f64, f64)) {
    let p = gen_population(spec).unwrap();
    let x: Vec<f64> = p.planted.iter().map(|e| e.normalized_diversity).collect();
    let y: Vec<f64> = p.records.iter().map(|r| r.log_counts()[0]).collect();
    let fit = ols(&y, &Matrix::with_intercept(&[x]).unwrap()).unwrap();
    (fit.coefficients[1], fit.std_errors[1], fit.ci95[1])
}

#[test]
fn planted_effect_recovered() {
    for seed in 0..10 {
        let (b, se, _) = slope_fit(&PopulationGenSpec {
            n_egos: 5000,
            diversity_effect: 0.9,
            noise_sigma: 0.05,
            seed,
        });
        assert!((b - 0.9).abs() < 3.0 * se, "seed {seed}: {b} ± {se}");
    }
}

#[test]
fn null_effect_ci_covers_zero() {
    let covered = (0..40)
        .filter(|&seed| {
            let (_, _, (lo, hi)) = slope_fit(&PopulationGenSpec {
                n_egos: 2000,
                diversity_effect: 0.0,
                noise_sigma: 0.1,
                seed,
            });
            lo <= 0.0 && 0.0 <= hi
        })
        .count();
    assert!(covered >= 36, "{covered} of 40");
}
