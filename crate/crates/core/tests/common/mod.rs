//! Brute-force oracles and hand-built instances shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use socdiv::graph::{FollowGraph, Neighborhood, NodeId};
use socdiv::kclip::RemovalMode;
use socdiv::rng::SplitMix64;

pub fn id(x: u64) -> NodeId {
    NodeId(x)
}

pub fn hood(ego: u64, members: &[u64], edges: &[(u64, u64)]) -> Neighborhood {
    Neighborhood::new(
        NodeId(ego),
        members.iter().map(|&m| NodeId(m)),
        edges.iter().map(|&(u, v)| (NodeId(u), NodeId(v))),
    )
    .unwrap()
}

/// Random digraph on members `1..=n` (ego `0`), `n <= max_nodes`.
pub fn random_neighborhood(seed: u64, max_nodes: u64, max_avg_out: f64) -> Neighborhood {
    let mut rng = SplitMix64::new(seed);
    let n = rng.below(max_nodes + 1);
    let avg = rng.next_f64() * max_avg_out;
    let p = if n > 1 { (avg / (n - 1) as f64).min(1.0) } else { 0.0 };
    let hubs = rng.below(4);
    let mut edges = Vec::new();
    for u in 1..=n {
        let hub = u <= hubs;
        for v in 1..=n {
            if u != v && rng.bernoulli(if hub { (p * 8.0).min(0.9) } else { p }) {
                edges.push((u, v));
            }
        }
    }
    let members: Vec<u64> = (1..=n).collect();
    hood(0, &members, &edges)
}

/// Reachability closure (reflexive) over local indices.
fn closure(n: &Neighborhood, undirected: bool) -> Vec<Vec<bool>> {
    let m = n.members();
    let pos: BTreeMap<NodeId, usize> = m.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = m.len();
    let mut r = vec![vec![false; k]; k];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (u, v) in n.edges() {
        let (a, b) = (pos[&u], pos[&v]);
        r[a][b] = true;
        if undirected {
            r[b][a] = true;
        }
    }
    for via in 0..k {
        for a in 0..k {
            if r[a][via] {
                for b in 0..k {
                    if r[via][b] {
                        r[a][b] = true;
                    }
                }
            }
        }
    }
    r
}

fn blocks_from(n: &Neighborhood, same: impl Fn(usize, usize) -> bool) -> Vec<Vec<NodeId>> {
    let m = n.members();
    let mut assigned = vec![false; m.len()];
    let mut out = Vec::new();
    for i in 0..m.len() {
        if assigned[i] {
            continue;
        }
        let block: Vec<NodeId> = (i..m.len()).filter(|&j| !assigned[j] && same(i, j)).map(|j| m[j]).collect();
        for j in i..m.len() {
            if same(i, j) {
                assigned[j] = true;
            }
        }
        out.push(block);
    }
    out
}

pub fn brute_weak(n: &Neighborhood) -> Vec<Vec<NodeId>> {
    let r = closure(n, true);
    blocks_from(n, |a, b| r[a][b])
}

pub fn brute_strong(n: &Neighborhood) -> Vec<Vec<NodeId>> {
    let r = closure(n, false);
    blocks_from(n, |a, b| r[a][b] && r[b][a])
}

/// Outcome of the textbook k-clip loop that recomputes every degree per step.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveClip {
    pub steps: Vec<Vec<NodeId>>,
    pub remaining: Vec<NodeId>,
    pub d_k: usize,
}

pub fn naive_k_clip(n: &Neighborhood, k: usize, mode: RemovalMode, threshold: usize) -> NaiveClip {
    let edges: Vec<(NodeId, NodeId)> = n.edges().collect();
    let mut alive: BTreeSet<NodeId> = n.members().iter().copied().collect();
    let mut steps = Vec::new();
    loop {
        let live: Vec<(NodeId, NodeId)> = edges
            .iter()
            .copied()
            .filter(|(u, v)| alive.contains(u) && alive.contains(v))
            .collect();
        let out = |x: NodeId| live.iter().filter(|e| e.0 == x).count();
        let tot = |x: NodeId| live.iter().filter(|e| e.0 == x || e.1 == x).count();
        let max = alive.iter().map(|&x| out(x)).max().unwrap_or(0);
        if max < k {
            break;
        }
        let at_max: Vec<NodeId> = alive.iter().copied().filter(|&x| out(x) == max).collect();
        let linked = alive.iter().filter(|&&x| tot(x) > 0).count();
        let multiple = match mode {
            RemovalMode::Single => false,
            RemovalMode::Multiple => true,
            RemovalMode::Adaptive => linked > threshold,
        };
        let removed = if multiple {
            at_max
        } else {
            let best = at_max
                .iter()
                .copied()
                .max_by(|&a, &b| tot(a).cmp(&tot(b)).then(b.cmp(&a)))
                .unwrap();
            vec![best]
        };
        for x in &removed {
            alive.remove(x);
        }
        steps.push(removed);
    }
    let remaining: Vec<NodeId> = alive.iter().copied().collect();
    let sub = Neighborhood::new(n.ego(), remaining.iter().copied(), edges.into_iter().filter(|(u, v)| alive.contains(u) && alive.contains(v))).unwrap();
    NaiveClip {
        steps,
        d_k: brute_weak(&sub).len(),
        remaining,
    }
}

/// Followee set of `v` in `g`, optionally dropping `ego`.
pub fn followee_set(g: &FollowGraph, v: NodeId, ego: NodeId, keep_ego: bool) -> BTreeSet<NodeId> {
    g.followees(v).unwrap().filter(|&f| keep_ego || f != ego).collect()
}

pub fn set_jaccard(a: &BTreeSet<NodeId>, b: &BTreeSet<NodeId>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.union(b).count();
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Components after merging every pair of followers in different blocks
/// whose followee sets have Jaccard above `threshold`.
pub fn brute_bridged(
    g: &FollowGraph,
    ego: NodeId,
    blocks: &[Vec<NodeId>],
    threshold: f64,
    keep_ego: bool,
) -> usize {
    let mut label: Vec<usize> = (0..blocks.len()).collect();
    fn root(label: &mut [usize], mut x: usize) -> usize {
        while label[x] != x {
            x = label[x];
        }
        x
    }
    let members: Vec<(usize, NodeId)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(b, vs)| vs.iter().map(move |&v| (b, v)))
        .collect();
    let sets: Vec<BTreeSet<NodeId>> = members.iter().map(|&(_, v)| followee_set(g, v, ego, keep_ego)).collect();
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            if members[i].0 != members[j].0 && set_jaccard(&sets[i], &sets[j]) > threshold {
                let (a, b) = (root(&mut label, members[i].0), root(&mut label, members[j].0));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    (0..blocks.len()).filter(|&b| root(&mut label, b) == b).count()
}

/// Ego `0` with up to `max_followers` followers (ids from 1), random links among
/// them and random followees drawn from a pool of outside accounts, skewed so
/// some followee sets overlap strongly.
pub fn random_ego_graph(seed: u64, max_followers: u64) -> FollowGraph {
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.below(max_followers);
    let p = rng.next_f64() * 4.0 / n as f64;
    let pool = 5 + rng.below(40);
    let mut edges = Vec::new();
    for u in 1..=n {
        edges.push((u, 0));
        for v in 1..=n {
            if u != v && rng.bernoulli(p) {
                edges.push((u, v));
            }
        }
        let extra = rng.below(12);
        let focus = rng.below(pool);
        for _ in 0..extra {
            let f = if rng.bernoulli(0.6) { (focus + rng.below(3)) % pool } else { rng.below(pool) };
            edges.push((u, 1000 + f));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    FollowGraph::from_edge_list(edges.into_iter().map(|(u, v)| (NodeId(u), NodeId(v)))).unwrap()
}

/// Hub follows six followers, a second node follows three, two reciprocal pairs.
pub fn hub_then_bridge_instance() -> Neighborhood {
    hood(
        0,
        &[1, 2, 3, 4, 5, 6, 7, 8],
        &[
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (1, 6),
            (1, 7),
            (2, 3),
            (2, 5),
            (2, 8),
            (3, 4),
            (4, 3),
            (5, 6),
            (6, 5),
        ],
    )
}

/// Nine followers in four weak components (4, 3, 1, 1); the four-node one holds
/// a reciprocal pair plus two one-way followers, the three-node one a cycle.
pub fn four_groups_instance() -> Neighborhood {
    hood(
        0,
        &[1, 2, 3, 4, 5, 6, 7, 8, 9],
        &[(1, 2), (2, 1), (3, 1), (4, 2), (5, 6), (6, 7), (7, 5)],
    )
}

/// Four followers of ego 100; 1 and 2 share all followees, 3 follows 4.
pub fn shared_followees_instance() -> (FollowGraph, NodeId) {
    let ego = 100;
    let mut edges = vec![(1, ego), (2, ego), (3, ego), (4, ego), (3, 4)];
    for f in [1, 2] {
        edges.extend([(f, 201), (f, 202)]);
    }
    edges.extend([(3, 301), (3, 302), (3, 303)]);
    edges.extend([(4, 401), (4, 402), (4, 403), (4, 404)]);
    let g = FollowGraph::from_edge_list(edges.into_iter().map(|(u, v)| (NodeId(u), NodeId(v)))).unwrap();
    (g, NodeId(ego))
}

/// Nine followers of ego 0 in seven components ({5, 6}, {7, 8} and five
/// singletons). Followers 1 and 2 share 50 followees (ego included) out of 104;
/// followers 3 and 4 share 2 out of 17; every other follower has ten private
/// followees besides the ego.
pub fn overlap_pairs_instance() -> FollowGraph {
    let mut edges: Vec<(u64, u64)> = (1..=9).map(|f| (f, 0)).collect();
    edges.extend([(5, 6), (7, 8)]);
    let mut next = 10_000;
    let mut fresh = |count: usize| -> Vec<u64> {
        let v: Vec<u64> = (next..next + count as u64).collect();
        next += count as u64;
        v
    };
    let shared12 = fresh(49);
    for f in [1, 2] {
        edges.extend(shared12.iter().map(|&t| (f, t)));
        edges.extend(fresh(27).into_iter().map(|t| (f, t)));
    }
    let shared34 = fresh(1);
    edges.extend([(3, shared34[0]), (4, shared34[0])]);
    edges.extend(fresh(7).into_iter().map(|t| (3, t)));
    edges.extend(fresh(8).into_iter().map(|t| (4, t)));
    for f in 5..=9 {
        edges.extend(fresh(10).into_iter().map(|t| (f, t)));
    }
    FollowGraph::from_edge_list(edges.into_iter().map(|(u, v)| (NodeId(u), NodeId(v)))).unwrap()
}

/// Leading right singular vector and value of `v` (rows of length `m`) by power
/// iteration on `V^T V`.
pub fn power_iteration(v: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let m = v.first().map_or(0, Vec::len);
    let mut gram = vec![vec![0.0; m]; m];
    for row in v {
        for a in 0..m {
            for b in 0..m {
                gram[a][b] += row[a] * row[b];
            }
        }
    }
    let mut h = vec![1.0; m];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let next: Vec<f64> = (0..m).map(|a| (0..m).map(|b| gram[a][b] * h[b]).sum()).collect();
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return (0.0, vec![0.0; m]);
        }
        let next: Vec<f64> = next.iter().map(|x| x / norm).collect();
        let delta = next.iter().zip(&h).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        h = next;
        lambda = norm;
        if delta < 1e-15 {
            break;
        }
    }
    (lambda.sqrt(), h)
}

/// Oracle reputation index: `100 * minmax(V h)` for the leading singular vector `h`.
pub fn oracle_index(v: &[Vec<f64>]) -> Vec<f64> {
    let (_, h) = power_iteration(v);
    let w: Vec<f64> = v.iter().map(|r| r.iter().zip(&h).map(|(a, b)| a * b).sum()).collect();
    let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return vec![0.0; w.len()];
    }
    w.iter().map(|x| 100.0 * (x - lo) / (hi - lo)).collect()
}

/// Best rank-1 Frobenius error: `sqrt(|V|^2 - sigma_1^2)`.
pub fn oracle_rank1_error(v: &[Vec<f64>]) -> f64 {
    let (sigma, _) = power_iteration(v);
    let total: f64 = v.iter().flatten().map(|x| x * x).sum();
    (total - sigma * sigma).max(0.0).sqrt()
}

/// Minimum total `|score_t - score_c|` over 1:1 assignments that match
/// `min(#treated, #control)` pairs.
pub fn exhaustive_assignment_cost(scores: &[f64], treated: &[bool]) -> f64 {
    let t: Vec<f64> = (0..scores.len()).filter(|&i| treated[i]).map(|i| scores[i]).collect();
    let c: Vec<f64> = (0..scores.len()).filter(|&i| !treated[i]).map(|i| scores[i]).collect();
    let (small, large) = if t.len() <= c.len() { (t, c) } else { (c, t) };
    fn go(i: usize, small: &[f64], large: &[f64], used: &mut [bool]) -> f64 {
        if i == small.len() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for j in 0..large.len() {
            if !used[j] {
                used[j] = true;
                best = best.min((small[i] - large[j]).abs() + go(i + 1, small, large, used));
                used[j] = false;
            }
        }
        best
    }
    go(0, &small, &large, &mut vec![false; large.len()])
}
