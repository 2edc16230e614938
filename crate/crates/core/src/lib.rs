//! Structural diversity of directed ego networks.
//!
//! The follow graph stores an edge `(u, v)` when `u` follows `v`. For an ego,
//! the neighborhood is the subgraph induced on its followers. Diversity counts
//! the distinct groups among those followers: weakly or strongly connected
//! components, components left after k-clip decomposition, and components
//! after merging through shared followees ("bridges"). The remaining modules
//! build the popularity-based reputation index and the statistics used to
//! relate the two.

pub mod bridges;
pub mod components;
pub mod diversity;
pub mod graph;
pub mod kclip;
pub mod reputation;
pub mod rng;
pub mod stats;
pub mod synthgen;

pub use bridges::{bridged_components, bridged_k_clip_diversity, jaccard_similarity, BridgeConfig, BridgeError, ComponentGraph};
pub use components::{strong_components, weak_components};
pub use diversity::{diversity_report, indegree, strong_diversity, weak_diversity, DiversityReport, ReportConfig};
pub use graph::{FollowGraph, GraphError, Neighborhood, NodeId, Partition};
pub use kclip::{k_clip_decompose, k_clip_diversity, ClipConfig, ClipError, ClipTrace, RemovalMode};
pub use reputation::{nmf, social_reputation_index, PopularityMatrix, PopularityRecord, ReputationIndex};
pub use rng::SplitMix64;
