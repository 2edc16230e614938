//! k-clip decomposition.
//!
//! Nodes whose out-degree is at least `k` are peeled off the neighborhood,
//! highest out-degree first, until every survivor has out-degree below `k`.
//! The number of weakly connected components left over is the k-clip
//! diversity `d_k`.
//!
//! Three removal modes are supported:
//!
//! * **single**: one node per step. Among nodes at the current maximum
//!   out-degree the one with the largest total degree (out + in, measured on
//!   the surviving subgraph) goes first, then the smallest id.
//! * **multiple**: every node at the current maximum out-degree is removed
//!   in the same step.
//! * **adaptive**: a multiple step whenever more than `adaptive_threshold`
//!   surviving nodes sit in weak components of size two or more (equivalently,
//!   have at least one surviving edge), otherwise a single step.
//!
//! Out-degrees only ever decrease, so candidates are kept in per-degree
//! buckets with a falling maximum pointer instead of rescanning every node.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::components::weak_component_count;
use crate::graph::{Neighborhood, NodeId};

pub const DEFAULT_K: usize = 5;
pub const DEFAULT_ADAPTIVE_THRESHOLD: usize = 1000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClipError {
    #[error("k must be a positive integer")]
    InvalidK,
    #[error("adaptive threshold must be at least 1")]
    InvalidThreshold,
    #[error("unknown removal mode {0:?} (expected single, multiple or adaptive)")]
    UnknownMode(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RemovalMode {
    #[default]
    Single,
    Multiple,
    Adaptive,
}

impl fmt::Display for RemovalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RemovalMode::Single => "single",
            RemovalMode::Multiple => "multiple",
            RemovalMode::Adaptive => "adaptive",
        })
    }
}

impl FromStr for RemovalMode {
    type Err = ClipError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(RemovalMode::Single),
            "multiple" => Ok(RemovalMode::Multiple),
            "adaptive" => Ok(RemovalMode::Adaptive),
            other => Err(ClipError::UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClipConfig {
    k: usize,
    mode: RemovalMode,
    adaptive_threshold: usize,
}

impl Default for ClipConfig {
    fn default() -> Self {
        ClipConfig {
            k: DEFAULT_K,
            mode: RemovalMode::Single,
            adaptive_threshold: DEFAULT_ADAPTIVE_THRESHOLD,
        }
    }
}

impl ClipConfig {
    pub fn new(k: usize) -> Result<Self, ClipError> {
        if k == 0 {
            return Err(ClipError::InvalidK);
        }
        Ok(ClipConfig {
            k,
            ..Default::default()
        })
    }

    pub fn with_mode(mut self, mode: RemovalMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_adaptive_threshold(mut self, threshold: usize) -> Result<Self, ClipError> {
        if threshold == 0 {
            return Err(ClipError::InvalidThreshold);
        }
        self.adaptive_threshold = threshold;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> RemovalMode {
        self.mode
    }

    pub fn adaptive_threshold(&self) -> usize {
        self.adaptive_threshold
    }
}

/// How a particular step selected its nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Single,
    Multiple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalStep {
    pub step: usize,
    pub kind: StepKind,
    /// Removed nodes with their out-degree at the start of the step.
    pub removed: Vec<(NodeId, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClipTrace {
    pub config: ClipConfig,
    pub steps: Vec<RemovalStep>,
    pub remaining: Neighborhood,
    pub d_k: usize,
}

impl ClipTrace {
    /// Removed nodes in removal order.
    pub fn removal_order(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.steps.iter().flat_map(|s| s.removed.iter().map(|&(id, _)| id))
    }

    pub fn removed_count(&self) -> usize {
        self.steps.iter().map(|s| s.removed.len()).sum()
    }
}

struct Peeler<'a> {
    hood: &'a Neighborhood,
    k: u32,
    in_offsets: Vec<u32>,
    in_sources: Vec<u32>,
    out_deg: Vec<u32>,
    in_deg: Vec<u32>,
    alive: Vec<bool>,
    // buckets[d - k] holds candidates with out-degree d, keyed for single-mode priority
    buckets: Vec<BTreeSet<(u32, Reverse<u32>)>>,
    top: usize,
    // alive nodes with at least one alive incident edge
    linked: usize,
}

impl<'a> Peeler<'a> {
    fn new(hood: &'a Neighborhood, k: usize) -> Self {
        let n = hood.len();
        let out_deg: Vec<u32> = hood.out_degrees().into_iter().map(|d| d as u32).collect();
        let mut in_deg = vec![0u32; n];
        for (_, v) in hood.local_edges() {
            in_deg[v as usize] += 1;
        }
        let mut in_offsets = vec![0u32; n + 1];
        for i in 0..n {
            in_offsets[i + 1] = in_offsets[i] + in_deg[i];
        }
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![0u32; hood.edge_count()];
        for (u, v) in hood.local_edges() {
            in_sources[cursor[v as usize] as usize] = u;
            cursor[v as usize] += 1;
        }
        let k = k as u32;
        let max_out = out_deg.iter().copied().max().unwrap_or(0);
        let bucket_count = if max_out >= k { (max_out - k + 1) as usize } else { 0 };
        let linked = (0..n).filter(|&i| out_deg[i] + in_deg[i] > 0).count();
        let mut peeler = Peeler {
            hood,
            k,
            in_offsets,
            in_sources,
            out_deg,
            in_deg,
            alive: vec![true; n],
            buckets: vec![BTreeSet::new(); bucket_count],
            top: bucket_count,
            linked,
        };
        for v in 0..n as u32 {
            peeler.bucket_insert(v);
        }
        peeler
    }

    fn key(&self, v: u32) -> (u32, Reverse<u32>) {
        let i = v as usize;
        (self.out_deg[i] + self.in_deg[i], Reverse(v))
    }

    fn bucket_insert(&mut self, v: u32) {
        let d = self.out_deg[v as usize];
        if d >= self.k {
            let key = self.key(v);
            self.buckets[(d - self.k) as usize].insert(key);
        }
    }

    fn bucket_remove(&mut self, v: u32) {
        let d = self.out_deg[v as usize];
        if d >= self.k {
            let key = self.key(v);
            self.buckets[(d - self.k) as usize].remove(&key);
        }
    }

    /// Index of the highest non-empty bucket, if any candidate remains.
    fn top_bucket(&mut self) -> Option<usize> {
        while self.top > 0 {
            if !self.buckets[self.top - 1].is_empty() {
                return Some(self.top - 1);
            }
            self.top -= 1;
        }
        None
    }

    fn remove(&mut self, v: u32) {
        let vi = v as usize;
        self.bucket_remove(v);
        self.alive[vi] = false;
        if self.out_deg[vi] + self.in_deg[vi] > 0 {
            self.linked -= 1;
        }
        let hood = self.hood;
        let (lo, hi) = (self.in_offsets[vi] as usize, self.in_offsets[vi + 1] as usize);
        for idx in lo..hi {
            let u = self.in_sources[idx];
            if self.alive[u as usize] {
                self.bucket_remove(u);
                self.out_deg[u as usize] -= 1;
                self.touch(u);
            }
        }
        for &w in hood.out_local(v) {
            if self.alive[w as usize] {
                self.bucket_remove(w);
                self.in_deg[w as usize] -= 1;
                self.touch(w);
            }
        }
    }

    // Re-file a neighbor whose degree just dropped by one.
    fn touch(&mut self, u: u32) {
        let i = u as usize;
        if self.out_deg[i] + self.in_deg[i] == 0 {
            self.linked -= 1;
        }
        self.bucket_insert(u);
    }
}

/// Runs the k-clip decomposition and records every removal.
pub fn k_clip_decompose(n: &Neighborhood, cfg: &ClipConfig) -> ClipTrace {
    let mut peeler = Peeler::new(n, cfg.k);
    let mut steps = Vec::new();

    while let Some(b) = peeler.top_bucket() {
        let degree = b + cfg.k;
        let kind = match cfg.mode {
            RemovalMode::Single => StepKind::Single,
            RemovalMode::Multiple => StepKind::Multiple,
            RemovalMode::Adaptive if peeler.linked > cfg.adaptive_threshold => StepKind::Multiple,
            RemovalMode::Adaptive => StepKind::Single,
        };
        let chosen: Vec<u32> = match kind {
            StepKind::Single => {
                let &(_, Reverse(v)) = peeler.buckets[b].last().expect("non-empty bucket");
                vec![v]
            }
            StepKind::Multiple => peeler.buckets[b].iter().map(|&(_, Reverse(v))| v).collect(),
        };
        for &v in &chosen {
            peeler.remove(v);
        }
        let mut removed: Vec<(NodeId, usize)> =
            chosen.iter().map(|&v| (n.members()[v as usize], degree)).collect();
        removed.sort_unstable();
        steps.push(RemovalStep {
            step: steps.len(),
            kind,
            removed,
        });
    }

    let remaining = n.retain(&peeler.alive);
    let d_k = weak_component_count(&remaining);
    ClipTrace {
        config: *cfg,
        steps,
        remaining,
        d_k,
    }
}

/// The k-clip diversity measure. Neighborhoods with fewer than two members
/// return their member count.
pub fn k_clip_diversity(n: &Neighborhood, cfg: &ClipConfig) -> usize {
    if n.len() < 2 {
        return n.len();
    }
    k_clip_decompose(n, cfg).d_k
}
