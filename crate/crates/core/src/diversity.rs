//! Per-ego diversity measures and the combined report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bridges::{bridged_components, BridgeConfig, BridgeError};
use crate::components::{strong_component_count, weak_component_count};
use crate::graph::{FollowGraph, GraphError, Neighborhood, NodeId};
use crate::kclip::{k_clip_decompose, k_clip_diversity, ClipConfig};

/// Number of followers of `ego`.
pub fn indegree(g: &FollowGraph, ego: NodeId) -> Result<usize, GraphError> {
    g.in_degree(ego)
}

/// Weakly connected components among the followers; member count below two followers.
pub fn weak_diversity(n: &Neighborhood) -> usize {
    if n.len() < 2 {
        return n.len();
    }
    weak_component_count(n)
}

/// Strongly connected components among the followers; member count below two followers.
pub fn strong_diversity(n: &Neighborhood) -> usize {
    if n.len() < 2 {
        return n.len();
    }
    strong_component_count(n)
}

/// Treatment predicate for the matching experiment: every follower sits in its
/// own k-clip component.
pub fn is_max_diversity(kclip: usize, indegree: usize) -> bool {
    kclip == indegree
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiversityReport {
    pub ego: NodeId,
    pub indegree: usize,
    pub weak: usize,
    pub strong: usize,
    pub kclip: BTreeMap<usize, usize>,
    /// `None` when bridging was not requested or the ego was skipped.
    pub bridged_kclip: Option<usize>,
    pub bridged_skipped: bool,
}

/// What to compute for each ego.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    /// One k-clip column per entry, keyed by its k.
    pub kclip: Vec<ClipConfig>,
    /// Decomposition that bridging runs on.
    pub bridge_clip: ClipConfig,
    pub bridges: Option<BridgeConfig>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        let clip = ClipConfig::default();
        ReportConfig {
            kclip: vec![clip],
            bridge_clip: clip,
            bridges: Some(BridgeConfig::default()),
        }
    }
}

/// Computes every configured measure for one ego.
pub fn diversity_report(g: &FollowGraph, ego: NodeId, cfg: &ReportConfig) -> Result<DiversityReport, GraphError> {
    let n = g.ego_neighborhood(ego)?;
    let mut kclip = BTreeMap::new();
    for clip in &cfg.kclip {
        kclip.insert(clip.k(), k_clip_diversity(&n, clip));
    }

    let (bridged_kclip, bridged_skipped) = match &cfg.bridges {
        None => (None, false),
        Some(bcfg) if n.len() > bcfg.max_followers() => (None, true),
        Some(_) if n.len() < 2 => (Some(n.len()), false),
        Some(bcfg) => {
            let trace = k_clip_decompose(&n, &cfg.bridge_clip);
            match bridged_components(&trace, g, bcfg) {
                Ok(cg) => (Some(cg.unlinked_count()), false),
                Err(BridgeError::TooManyFollowers { .. }) => (None, true),
                Err(BridgeError::Graph(e)) => return Err(e),
                Err(BridgeError::InvalidThreshold(_)) => unreachable!("threshold validated by BridgeConfig"),
            }
        }
    };

    Ok(DiversityReport {
        ego,
        indegree: n.len(),
        weak: weak_diversity(&n),
        strong: strong_diversity(&n),
        kclip,
        bridged_kclip,
        bridged_skipped,
    })
}
