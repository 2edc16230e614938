//! Social bridges between followers and the bridged k-clip diversity measure.
//!
//! Two surviving followers `i` and `j` of an ego are bridged when the Jaccard
//! similarity of their followee sets is strictly above a threshold. Bridges
//! merge the weak components left by k-clip decomposition; the number of
//! merged groups is the bridged k-clip diversity.
//!
//! With the ego counted as a followee, every pair shares at least one
//! followee, so `J(i, j) >= 1 / (|F_i| + |F_j| - 1)`. Pairs whose set sizes
//! alone push that bound over the threshold are linked through the follower
//! with the smallest followee set (if `i` and `j` both qualify on size, each of
//! them also qualifies with that follower). Everything else is found through
//! an inverted index over shared non-ego followees.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::components::{weak_labels, DisjointSet};
use crate::graph::{FollowGraph, GraphError, Neighborhood, NodeId, Partition};
use crate::kclip::{k_clip_decompose, ClipConfig, ClipTrace};

pub const DEFAULT_JACCARD_THRESHOLD: f64 = 0.2;
pub const DEFAULT_MAX_FOLLOWERS: usize = 10_000;

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("jaccard threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("ego {ego} skipped: {followers} followers exceeds the limit of {limit}")]
    TooManyFollowers {
        ego: NodeId,
        followers: usize,
        limit: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BridgeConfig {
    threshold: f64,
    max_followers: usize,
    include_ego_in_followees: bool,
}

impl Default for BridgeConfig {
    fn default() -> Self {
        BridgeConfig {
            threshold: DEFAULT_JACCARD_THRESHOLD,
            max_followers: DEFAULT_MAX_FOLLOWERS,
            include_ego_in_followees: true,
        }
    }
}

impl BridgeConfig {
    pub fn new(threshold: f64) -> Result<Self, BridgeError> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(BridgeError::InvalidThreshold(threshold));
        }
        Ok(BridgeConfig {
            threshold,
            ..Default::default()
        })
    }

    pub fn with_max_followers(mut self, max_followers: usize) -> Self {
        self.max_followers = max_followers;
        self
    }

    pub fn with_ego_in_followees(mut self, include: bool) -> Self {
        self.include_ego_in_followees = include;
        self
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn max_followers(&self) -> usize {
        self.max_followers
    }

    pub fn include_ego_in_followees(&self) -> bool {
        self.include_ego_in_followees
    }
}

/// `|a ∩ b| / |a ∪ b|` for sorted, duplicate-free slices; 0 when both are empty.
pub fn jaccard_similarity<T: Ord>(a: &[T], b: &[T]) -> f64 {
    let common = sorted_intersection_len(a, b);
    let union = a.len() + b.len() - common;
    if union == 0 {
        return 0.0;
    }
    ratio(common, union)
}

fn ratio(common: usize, union: usize) -> f64 {
    common as f64 / union as f64
}

fn sorted_intersection_len<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// k-clip components as vertices, bridged connections as edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentGraph {
    pub components: Partition,
    /// Sorted `(a, b)` pairs of component indices with `a < b`. Every pair is
    /// realized by at least one qualifying follower pair, and together they
    /// connect exactly the components that qualifying pairs would connect.
    pub bridge_edges: Vec<(usize, usize)>,
}

impl ComponentGraph {
    /// Number of groups once bridged components are merged.
    pub fn unlinked_count(&self) -> usize {
        let mut dsu = DisjointSet::new(self.components.len());
        for &(a, b) in &self.bridge_edges {
            dsu.union(a as u32, b as u32);
        }
        dsu.set_count()
    }
}

fn check_follower_limit(g: &FollowGraph, ego: NodeId, cfg: &BridgeConfig) -> Result<(), BridgeError> {
    let followers = g.in_degree(ego)?;
    if followers > cfg.max_followers {
        return Err(BridgeError::TooManyFollowers {
            ego,
            followers,
            limit: cfg.max_followers,
        });
    }
    Ok(())
}

/// Finds bridged connections among the followers that survived `trace`.
pub fn bridged_components(
    trace: &ClipTrace,
    g: &FollowGraph,
    cfg: &BridgeConfig,
) -> Result<ComponentGraph, BridgeError> {
    let remaining = &trace.remaining;
    let ego = remaining.ego();
    let ego_ix = g.require(ego)?;
    check_follower_limit(g, ego, cfg)?;

    // Labels are numbered by first appearance over ascending members, which is
    // the block order of the partition.
    let (labels, _) = weak_labels(remaining);
    let components = Partition::from_labels(remaining.members(), &labels);

    let survivors = remaining
        .members()
        .iter()
        .map(|&id| g.require(id))
        .collect::<Result<Vec<u32>, _>>()?;
    let bridge_edges = find_bridges(g, ego_ix, &survivors, &labels, cfg);
    Ok(ComponentGraph {
        components,
        bridge_edges,
    })
}

fn find_bridges(
    g: &FollowGraph,
    ego_ix: u32,
    survivors: &[u32],
    labels: &[u32],
    cfg: &BridgeConfig,
) -> Vec<(usize, usize)> {
    let t = cfg.threshold;
    let with_ego = usize::from(cfg.include_ego_in_followees);
    let base_len = |v: u32| g.out_idx(v).iter().filter(|&&f| f != ego_ix).count();
    let sizes: Vec<usize> = survivors.iter().map(|&v| base_len(v) + with_ego).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut push = |a: u32, b: u32| {
        if a != b {
            edges.push((a.min(b) as usize, a.max(b) as usize));
        }
    };

    if with_ego == 1 && survivors.len() > 1 {
        let (m, &am) = sizes
            .iter()
            .enumerate()
            .min_by_key(|&(i, &s)| (s, i))
            .expect("non-empty");
        for (j, &aj) in sizes.iter().enumerate() {
            if j != m && ratio(1, am + aj - 1) > t {
                push(labels[m], labels[j]);
            }
        }
    }

    // Inverted index: followee -> surviving followers (local indices, ascending).
    let mut postings: Vec<(u32, u32)> = Vec::new();
    for (i, &v) in survivors.iter().enumerate() {
        for &f in g.out_idx(v) {
            if f != ego_ix {
                postings.push((f, i as u32));
            }
        }
    }
    postings.sort_unstable();
    let mut keys: Vec<u32> = Vec::new();
    let mut starts: Vec<usize> = Vec::new();
    for (pos, &(f, _)) in postings.iter().enumerate() {
        if keys.last() != Some(&f) {
            keys.push(f);
            starts.push(pos);
        }
    }
    starts.push(postings.len());

    let mut counts = vec![0u32; survivors.len()];
    let mut touched: Vec<u32> = Vec::new();
    for (i, &v) in survivors.iter().enumerate() {
        for &f in g.out_idx(v) {
            if f == ego_ix {
                continue;
            }
            let k = keys.binary_search(&f).expect("followee indexed");
            for &(_, j) in &postings[starts[k]..starts[k + 1]] {
                if j as usize >= i {
                    break;
                }
                if counts[j as usize] == 0 {
                    touched.push(j);
                }
                counts[j as usize] += 1;
            }
        }
        for &j in &touched {
            let c = counts[j as usize] as usize;
            counts[j as usize] = 0;
            if labels[i] == labels[j as usize] {
                continue;
            }
            let common = c + with_ego;
            let union = sizes[i] + sizes[j as usize] - common;
            if ratio(common, union) > t {
                push(labels[i], labels[j as usize]);
            }
        }
        touched.clear();
    }

    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Bridged k-clip diversity of `n`, a neighborhood of `g`.
///
/// Fewer than two members returns the member count. Egos with more followers
/// than `cfg.max_followers` yield [`BridgeError::TooManyFollowers`].
pub fn bridged_k_clip_diversity(
    n: &Neighborhood,
    g: &FollowGraph,
    clip: &ClipConfig,
    cfg: &BridgeConfig,
) -> Result<usize, BridgeError> {
    check_follower_limit(g, n.ego(), cfg)?;
    if n.len() < 2 {
        return Ok(n.len());
    }
    let trace = k_clip_decompose(n, clip);
    Ok(bridged_components(&trace, g, cfg)?.unlinked_count())
}
