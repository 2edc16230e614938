//! Deterministic synthetic data: single ego neighborhoods with planted
//! components and hubs, whole populations with a planted diversity effect on
//! popularity, and large power-law graphs for throughput tests.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{FollowGraph, NodeId};
use crate::reputation::PopularityRecord;
use crate::rng::SplitMix64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("{field} must lie in [0, 1], got {value}")]
    Probability { field: &'static str, value: f64 },
    #[error("component_sizes[{0}] must be at least 1")]
    EmptyComponent(usize),
    #[error("{field} is invalid: {reason}")]
    Invalid { field: &'static str, reason: String },
}

fn check_probability(field: &'static str, value: f64) -> Result<(), SynthError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(SynthError::Probability { field, value })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EgoGenSpec {
    pub component_sizes: Vec<usize>,
    pub intra_edge_prob: f64,
    pub hub_count: usize,
    pub hub_out_fanout: usize,
    pub reciprocal_prob: f64,
    pub seed: u64,
}

impl EgoGenSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        check_probability("intra_edge_prob", self.intra_edge_prob)?;
        check_probability("reciprocal_prob", self.reciprocal_prob)?;
        if let Some(i) = self.component_sizes.iter().position(|&s| s == 0) {
            return Err(SynthError::EmptyComponent(i));
        }
        Ok(())
    }

    /// Number of followers the generated ego will have.
    pub fn follower_count(&self) -> usize {
        self.component_sizes.iter().sum::<usize>() + self.hub_count
    }
}

/// Ego `0` followed by every generated node.
///
/// Group members get consecutive ids from 1 in group order, hubs come last.
/// Each group is wired as a random in-arborescence (every non-root member
/// follows an earlier member), so it is weakly connected regardless of the
/// probabilities. On top of that, each tree edge is reciprocated with
/// `reciprocal_prob` and every other ordered pair inside a group is linked with
/// `intra_edge_prob`. Hub `h` sends its `hub_out_fanout` edges round-robin
/// over the groups of size at least two, starting at group `h`, so singleton
/// groups stay isolated.
pub fn gen_ego(spec: &EgoGenSpec) -> Result<(FollowGraph, NodeId), SynthError> {
    spec.validate()?;
    let ego = NodeId(0);
    let mut rng = SplitMix64::new(spec.seed);
    let mut edges: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut groups: Vec<Vec<u64>> = Vec::with_capacity(spec.component_sizes.len());
    let mut next = 1u64;
    for &size in &spec.component_sizes {
        let members: Vec<u64> = (next..next + size as u64).collect();
        next += size as u64;
        for i in 1..size {
            let parent = members[rng.below(i as u64) as usize];
            edges.insert((members[i], parent));
            if rng.bernoulli(spec.reciprocal_prob) {
                edges.insert((parent, members[i]));
            }
        }
        if spec.intra_edge_prob > 0.0 {
            for &u in &members {
                for &v in &members {
                    if u != v && rng.bernoulli(spec.intra_edge_prob) {
                        edges.insert((u, v));
                    }
                }
            }
        }
        groups.push(members);
    }

    let targets: Vec<&Vec<u64>> = groups.iter().filter(|g| g.len() >= 2).collect();
    for h in 0..spec.hub_count {
        let hub = next;
        next += 1;
        if targets.is_empty() {
            continue;
        }
        for j in 0..spec.hub_out_fanout {
            let group = targets[(h + j) % targets.len()];
            let v = group[rng.below(group.len() as u64) as usize];
            edges.insert((hub, v));
        }
    }

    let follow_ego = (1..next).map(|f| (NodeId(f), ego));
    let all = edges.into_iter().map(|(u, v)| (NodeId(u), NodeId(v))).chain(follow_ego);
    let g = FollowGraph::from_parts([ego], all).expect("generated edges have no self-loops");
    Ok((g, ego))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationGenSpec {
    pub n_egos: usize,
    pub diversity_effect: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl PopulationGenSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_egos == 0 {
            return Err(SynthError::Invalid {
                field: "n_egos",
                reason: "must be at least 1".into(),
            });
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return Err(SynthError::Invalid {
                field: "noise_sigma",
                reason: format!("must be finite and non-negative, got {}", self.noise_sigma),
            });
        }
        if !self.diversity_effect.is_finite() {
            return Err(SynthError::Invalid {
                field: "diversity_effect",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }
}

/// Per-ego covariates used by the matching experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CovariateRecord {
    pub user: NodeId,
    pub answers: u64,
    /// 0 unknown, 1 male, 2 female.
    pub gender: u8,
}

/// Ground truth kept alongside a generated population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedEgo {
    pub user: NodeId,
    pub indegree: usize,
    pub groups: usize,
    /// `minmax(log10(groups + 1))` over the population.
    pub normalized_diversity: f64,
    /// Planted log-popularity before rounding to counts.
    pub latent: f64,
}

#[derive(Debug, Clone)]
pub struct Population {
    pub graph: FollowGraph,
    pub egos: Vec<NodeId>,
    pub records: Vec<PopularityRecord>,
    pub covariates: Vec<CovariateRecord>,
    pub planted: Vec<PlantedEgo>,
}

/// Log-popularity at zero diversity.
pub const POPULATION_BASE: f64 = 2.0;
/// Per-count exponents: `log10(count + 1) ≈ weight * latent`.
pub const COUNT_WEIGHTS: [f64; 3] = [1.0, 0.75, 0.85];

/// A population of egos `0..n_egos` with disjoint follower sets.
///
/// Ego indegree is log-uniform on `[2, 60]`. Followers are split into `g`
/// groups, each an in-arborescence, so the weak and every k-clip diversity
/// equal `g`. With probability `0.4 exp(-(d - 2) / 8)` an ego gets `g = d`
/// (all followers isolated); otherwise `g` is uniform on `[1, d - 1]`. The
/// latent log-popularity is
/// `POPULATION_BASE + diversity_effect * x + noise_sigma * N(0, 1)` with
/// `x = minmax(log10(g + 1))`, and count `f` is `round(10^(w_f * latent) - 1)`.
/// `answers` grows with indegree; gender is uniform and unrelated to anything.
pub fn gen_population(spec: &PopulationGenSpec) -> Result<Population, SynthError> {
    spec.validate()?;
    let n = spec.n_egos;
    let mut rng = SplitMix64::new(spec.seed);
    let mut indegrees = Vec::with_capacity(n);
    let mut group_counts = Vec::with_capacity(n);
    let mut covariates = Vec::with_capacity(n);
    for i in 0..n {
        let d = ((2.0 * 30f64.powf(rng.next_f64())).floor() as usize).clamp(2, 60);
        let treated = rng.bernoulli(0.4 * (-((d - 2) as f64) / 8.0).exp());
        let g = if treated { d } else { rng.range_inclusive(1, d as u64 - 1) as usize };
        let answers = 10f64.powf(0.5 + 0.6 * (d as f64).log10() + 0.3 * rng.normal()).round() as u64;
        let gender = rng.below(3) as u8;
        indegrees.push(d);
        group_counts.push(g);
        covariates.push(CovariateRecord {
            user: NodeId(i as u64),
            answers,
            gender,
        });
    }

    let raw: Vec<f64> = group_counts.iter().map(|&g| (g as f64 + 1.0).log10()).collect();
    let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let x: Vec<f64> = raw
        .iter()
        .map(|&r| if hi > lo { (r - lo) / (hi - lo) } else { 0.0 })
        .collect();

    let mut records = Vec::with_capacity(n);
    let mut planted = Vec::with_capacity(n);
    for i in 0..n {
        let latent = POPULATION_BASE + spec.diversity_effect * x[i] + spec.noise_sigma * rng.normal();
        let count = |w: f64| (10f64.powf(w * latent) - 1.0).round().max(0.0) as u64;
        records.push(PopularityRecord {
            user: NodeId(i as u64),
            upvotes: count(COUNT_WEIGHTS[0]),
            thanks: count(COUNT_WEIGHTS[1]),
            favorites: count(COUNT_WEIGHTS[2]),
        });
        planted.push(PlantedEgo {
            user: NodeId(i as u64),
            indegree: indegrees[i],
            groups: group_counts[i],
            normalized_diversity: x[i],
            latent,
        });
    }

    let mut edges = Vec::new();
    let mut next = n as u64;
    for i in 0..n {
        let (d, g) = (indegrees[i], group_counts[i]);
        let followers: Vec<u64> = (next..next + d as u64).collect();
        next += d as u64;
        for &f in &followers {
            edges.push((NodeId(f), NodeId(i as u64)));
        }
        // Members are dealt to groups round-robin; within a group each later
        // member follows a random earlier one.
        for gi in 0..g {
            let members: Vec<u64> = followers.iter().skip(gi).step_by(g).copied().collect();
            for j in 1..members.len() {
                let parent = members[rng.below(j as u64) as usize];
                edges.push((NodeId(members[j]), NodeId(parent)));
            }
        }
    }
    let egos: Vec<NodeId> = (0..n as u64).map(NodeId).collect();
    let graph = FollowGraph::from_parts(egos.iter().copied(), edges).expect("generated edges have no self-loops");
    Ok(Population {
        graph,
        egos,
        records,
        covariates,
        planted,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleGenSpec {
    pub nodes: usize,
    pub edges: usize,
    /// Power-law exponent of the expected degree sequence, above 2.
    pub exponent: f64,
    pub seed: u64,
}

impl ScaleGenSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.nodes < 2 {
            return Err(SynthError::Invalid {
                field: "nodes",
                reason: "must be at least 2".into(),
            });
        }
        let max_edges = self.nodes as u128 * (self.nodes as u128 - 1);
        if self.edges as u128 > max_edges / 2 {
            return Err(SynthError::Invalid {
                field: "edges",
                reason: format!("at most half of the {max_edges} possible edges"),
            });
        }
        if !(self.exponent > 2.0) || !self.exponent.is_finite() {
            return Err(SynthError::Invalid {
                field: "exponent",
                reason: format!("must be a finite value above 2, got {}", self.exponent),
            });
        }
        Ok(())
    }
}

/// Chung-Lu style directed graph with power-law expected in- and out-degrees.
///
/// Node `i` has weight `(i + 1)^(-1 / (exponent - 1))`; the out- and in-weights
/// are assigned through independent random permutations. Edges are sampled
/// endpoint-by-endpoint in proportion to weight, rejecting self-loops and
/// duplicates until exactly `spec.edges` distinct edges exist.
pub fn gen_scale_graph(spec: &ScaleGenSpec) -> Result<FollowGraph, SynthError> {
    spec.validate()?;
    let n = spec.nodes;
    let mut rng = SplitMix64::new(spec.seed);
    let alpha = 1.0 / (spec.exponent - 1.0);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-alpha)).collect();
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for w in &weights {
        acc += w;
        cumulative.push(acc);
    }
    let total = acc;
    let mut out_perm: Vec<u64> = (0..n as u64).collect();
    let mut in_perm = out_perm.clone();
    rng.shuffle(&mut out_perm);
    rng.shuffle(&mut in_perm);
    let draw = |rng: &mut SplitMix64| {
        let u = rng.next_f64() * total;
        cumulative.partition_point(|&c| c <= u).min(n - 1)
    };

    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(spec.edges);
    let mut edges = Vec::with_capacity(spec.edges);
    while edges.len() < spec.edges {
        let u = out_perm[draw(&mut rng)];
        let v = in_perm[draw(&mut rng)];
        if u != v && seen.insert((u, v)) {
            edges.push((NodeId(u), NodeId(v)));
        }
    }
    let g = FollowGraph::from_parts((0..n as u64).map(NodeId), edges).expect("self-loops rejected above");
    Ok(g)
}
