//! Immutable follow graph storage and ego neighborhood extraction.
//!
//! An edge `(u, v)` means "u follows v". Node identifiers are opaque `u64`
//! values; internally every node gets a dense index assigned in ascending
//! [`NodeId`] order, so sorted dense adjacency is also sorted by id.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for NodeId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(NodeId)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop edge ({0}, {0}) rejected")]
    SelfLoop(NodeId),
    #[error("node {0} not found")]
    UnknownNode(NodeId),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid neighborhood: {0}")]
    InvalidNeighborhood(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Directed follow graph in compressed sparse row form, both directions.
#[derive(Debug, Clone)]
pub struct FollowGraph {
    ids: Vec<NodeId>,
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    in_offsets: Vec<usize>,
    in_sources: Vec<u32>,
}

impl FollowGraph {
    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops are rejected.
    pub fn from_edge_list<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_parts(std::iter::empty(), edges)
    }

    /// Like [`FollowGraph::from_edge_list`], but also registers `nodes` that may have no edges.
    pub fn from_parts<N, I>(nodes: N, edges: I) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = NodeId>,
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            pairs.push((u, v));
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        ids.reserve(pairs.len() * 2);
        for &(u, v) in &pairs {
            ids.push(u);
            ids.push(v);
        }
        ids.sort_unstable();
        ids.dedup();
        assert!(ids.len() <= u32::MAX as usize, "graph exceeds u32 node capacity");

        let index = |id: NodeId| ids.binary_search(&id).expect("endpoint registered") as u32;
        let dense: Vec<(u32, u32)> = pairs.iter().map(|&(u, v)| (index(u), index(v))).collect();

        let n = ids.len();
        // `dense` is sorted by (source, target) because indices follow id order.
        let mut out_offsets = vec![0usize; n + 1];
        for &(u, _) in &dense {
            out_offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_targets: Vec<u32> = dense.iter().map(|&(_, v)| v).collect();

        let mut in_offsets = vec![0usize; n + 1];
        for &(_, v) in &dense {
            in_offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![0u32; dense.len()];
        // Sources arrive in ascending order, so each in-list ends up sorted.
        for &(u, v) in &dense {
            let slot = &mut cursor[v as usize];
            in_sources[*slot] = u;
            *slot += 1;
        }

        Ok(FollowGraph {
            ids,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        })
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index_of(id).is_some()
    }

    /// All node ids in ascending order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    /// All edges as `(follower, followee)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.ids.len()).flat_map(move |u| {
            self.out_idx(u as u32)
                .iter()
                .map(move |&v| (self.ids[u], self.ids[v as usize]))
        })
    }

    pub fn in_degree(&self, id: NodeId) -> Result<usize, GraphError> {
        let ix = self.require(id)?;
        Ok(self.in_idx(ix).len())
    }

    pub fn out_degree(&self, id: NodeId) -> Result<usize, GraphError> {
        let ix = self.require(id)?;
        Ok(self.out_idx(ix).len())
    }

    /// Followers of `id` (in-neighbors), ascending.
    pub fn followers(&self, id: NodeId) -> Result<impl Iterator<Item = NodeId> + '_, GraphError> {
        let ix = self.require(id)?;
        Ok(self.in_idx(ix).iter().map(move |&u| self.ids[u as usize]))
    }

    /// Followees of `id` (out-neighbors), ascending.
    pub fn followees(&self, id: NodeId) -> Result<impl Iterator<Item = NodeId> + '_, GraphError> {
        let ix = self.require(id)?;
        Ok(self.out_idx(ix).iter().map(move |&v| self.ids[v as usize]))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => self.out_idx(a).binary_search(&b).is_ok(),
            _ => false,
        }
    }

    pub(crate) fn index_of(&self, id: NodeId) -> Option<u32> {
        self.ids.binary_search(&id).ok().map(|i| i as u32)
    }

    pub(crate) fn require(&self, id: NodeId) -> Result<u32, GraphError> {
        self.index_of(id).ok_or(GraphError::UnknownNode(id))
    }

    pub(crate) fn out_idx(&self, ix: u32) -> &[u32] {
        let i = ix as usize;
        &self.out_targets[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    pub(crate) fn in_idx(&self, ix: u32) -> &[u32] {
        let i = ix as usize;
        &self.in_sources[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    /// Induced subgraph on the followers of `ego`, with the ego and its edges dropped.
    pub fn ego_neighborhood(&self, ego: NodeId) -> Result<Neighborhood, GraphError> {
        let ego_ix = self.require(ego)?;
        let followers = self.in_idx(ego_ix);
        let members: Vec<NodeId> = followers.iter().map(|&u| self.ids[u as usize]).collect();
        let mut offsets = Vec::with_capacity(followers.len() + 1);
        offsets.push(0u32);
        let mut targets = Vec::new();
        for &u in followers {
            for &v in self.out_idx(u) {
                // The ego never appears in its own follower list, so this also drops ego edges.
                if let Ok(local) = followers.binary_search(&v) {
                    targets.push(local as u32);
                }
            }
            offsets.push(targets.len() as u32);
        }
        Ok(Neighborhood {
            ego,
            members,
            offsets,
            targets,
        })
    }
}

/// The directed subgraph induced on one ego's followers.
///
/// Members are stored sorted; edges use local indices into `members`, and each
/// member's out-list is sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    ego: NodeId,
    members: Vec<NodeId>,
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Neighborhood {
    /// Builds a neighborhood directly from members and edges.
    ///
    /// Duplicate edges are collapsed. Fails if the ego is a member, an edge
    /// endpoint is not a member, or an edge is a self-loop.
    pub fn new<M, E>(ego: NodeId, members: M, edges: E) -> Result<Self, GraphError>
    where
        M: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut members: Vec<NodeId> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.binary_search(&ego).is_ok() {
            return Err(GraphError::InvalidNeighborhood(format!(
                "ego {ego} listed among its own followers"
            )));
        }
        let mut local_edges = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let lookup = |x: NodeId| {
                members.binary_search(&x).map_err(|_| {
                    GraphError::InvalidNeighborhood(format!("edge ({u}, {v}) leaves the member set"))
                })
            };
            local_edges.push((lookup(u)? as u32, lookup(v)? as u32));
        }
        local_edges.sort_unstable();
        local_edges.dedup();
        Ok(Self::from_local(ego, members, &local_edges))
    }

    /// `edges` must be sorted and deduplicated local index pairs.
    pub(crate) fn from_local(ego: NodeId, members: Vec<NodeId>, edges: &[(u32, u32)]) -> Self {
        let n = members.len();
        let mut offsets = vec![0u32; n + 1];
        for &(u, _) in edges {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = edges.iter().map(|&(_, v)| v).collect();
        Neighborhood {
            ego,
            members,
            offsets,
            targets,
        }
    }

    pub fn ego(&self) -> NodeId {
        self.ego
    }

    /// Followers of the ego, ascending.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    /// Edges as `(follower, followee)` pairs, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.members.len()).flat_map(move |u| {
            self.out_local(u as u32)
                .iter()
                .map(move |&v| (self.members[u], self.members[v as usize]))
        })
    }

    /// Out-degree of every member inside the neighborhood, indexed like `members()`.
    pub fn out_degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| (w[1] - w[0]) as usize).collect()
    }

    pub fn max_out_degree(&self) -> usize {
        self.out_degrees().into_iter().max().unwrap_or(0)
    }

    /// Same members, every edge reversed.
    pub fn reversed(&self) -> Neighborhood {
        let mut edges: Vec<(u32, u32)> = self.local_edges().map(|(u, v)| (v, u)).collect();
        edges.sort_unstable();
        Self::from_local(self.ego, self.members.clone(), &edges)
    }

    /// Same members, every edge present in both directions.
    pub fn symmetrized(&self) -> Neighborhood {
        let mut edges: Vec<(u32, u32)> = self.local_edges().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
        edges.sort_unstable();
        edges.dedup();
        Self::from_local(self.ego, self.members.clone(), &edges)
    }

    pub(crate) fn out_local(&self, u: u32) -> &[u32] {
        let i = u as usize;
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub(crate) fn local_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.members.len() as u32).flat_map(move |u| self.out_local(u).iter().map(move |&v| (u, v)))
    }

    /// Induced subgraph on the members flagged in `keep`.
    pub(crate) fn retain(&self, keep: &[bool]) -> Neighborhood {
        let mut remap = vec![u32::MAX; self.members.len()];
        let mut members = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                remap[i] = members.len() as u32;
                members.push(self.members[i]);
            }
        }
        let edges: Vec<(u32, u32)> = self
            .local_edges()
            .filter(|&(u, v)| keep[u as usize] && keep[v as usize])
            .map(|(u, v)| (remap[u as usize], remap[v as usize]))
            .collect();
        Self::from_local(self.ego, members, &edges)
    }
}

/// A set of disjoint, non-empty blocks of node ids.
///
/// Each block is sorted and blocks are ordered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<NodeId>>,
}

impl Partition {
    pub fn from_blocks(mut blocks: Vec<Vec<NodeId>>) -> Self {
        blocks.retain(|b| !b.is_empty());
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Partition { blocks }
    }

    /// Groups `members[i]` by `labels[i]`.
    pub(crate) fn from_labels(members: &[NodeId], labels: &[u32]) -> Self {
        let count = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); count];
        for (&id, &l) in members.iter().zip(labels) {
            blocks[l as usize].push(id);
        }
        Self::from_blocks(blocks)
    }

    pub fn blocks(&self) -> &[Vec<NodeId>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `id`.
    pub fn block_of(&self, id: NodeId) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&id).is_ok())
    }
}

/// Parses the tab-separated edge-list format: `<follower>\t<followee>` per line.
///
/// Blank lines and lines starting with `#` are skipped.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Vec<(NodeId, NodeId)>, GraphError> {
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        let mut fields = trimmed.split('\t');
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("expected `<follower>\\t<followee>`, got {trimmed:?}"),
            });
        };
        let parse = |s: &str| {
            s.trim().parse::<NodeId>().map_err(|e| GraphError::Parse {
                line: lineno,
                message: format!("invalid node id {s:?}: {e}"),
            })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u == v {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("self-loop edge ({u}, {u}) rejected"),
            });
        }
        edges.push((u, v));
    }
    Ok(edges)
}

/// Writes edges in the format accepted by [`read_edge_list`].
pub fn write_edge_list<W: std::io::Write>(
    mut out: W,
    edges: impl IntoIterator<Item = (NodeId, NodeId)>,
) -> std::io::Result<()> {
    writeln!(out, "# follower\tfollowee")?;
    for (u, v) in edges {
        writeln!(out, "{u}\t{v}")?;
    }
    Ok(())
}
