//! Weakly and strongly connected components of a neighborhood.

use crate::graph::{Neighborhood, Partition};

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Returns true when two distinct sets were merged.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.sets -= 1;
        true
    }

    pub(crate) fn set_count(&self) -> usize {
        self.sets
    }

    /// Dense labels `0..set_count()` numbered by first appearance.
    pub(crate) fn labels(&mut self) -> Vec<u32> {
        let n = self.parent.len();
        let mut label_of_root = vec![u32::MAX; n];
        let mut next = 0;
        (0..n as u32)
            .map(|x| {
                let r = self.find(x) as usize;
                if label_of_root[r] == u32::MAX {
                    label_of_root[r] = next;
                    next += 1;
                }
                label_of_root[r]
            })
            .collect()
    }
}

/// Weak component label per member and the number of components.
pub(crate) fn weak_labels(n: &Neighborhood) -> (Vec<u32>, usize) {
    let mut dsu = DisjointSet::new(n.len());
    for (u, v) in n.local_edges() {
        dsu.union(u, v);
    }
    let count = dsu.set_count();
    (dsu.labels(), count)
}

/// Components of the neighborhood with edge directions ignored.
pub fn weak_components(n: &Neighborhood) -> Partition {
    let (labels, _) = weak_labels(n);
    Partition::from_labels(n.members(), &labels)
}

pub fn weak_component_count(n: &Neighborhood) -> usize {
    weak_labels(n).1
}

/// Strongly connected components (iterative Tarjan).
pub fn strong_components(n: &Neighborhood) -> Partition {
    let labels = tarjan_labels(n);
    Partition::from_labels(n.members(), &labels)
}

pub fn strong_component_count(n: &Neighborhood) -> usize {
    tarjan_labels(n).iter().map(|&l| l as usize + 1).max().unwrap_or(0)
}

fn tarjan_labels(n: &Neighborhood) -> Vec<u32> {
    const UNVISITED: u32 = u32::MAX;
    let len = n.len();
    let mut index = vec![UNVISITED; len];
    let mut lowlink = vec![0u32; len];
    let mut on_stack = vec![false; len];
    let mut comp = vec![UNVISITED; len];
    let mut stack: Vec<u32> = Vec::new();
    // (node, position of the next out-edge to explore)
    let mut call: Vec<(u32, usize)> = Vec::new();
    let mut next_index = 0u32;
    let mut next_comp = 0u32;

    for root in 0..len as u32 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root as usize] = next_index;
        lowlink[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(top) = call.last_mut() {
            let v = top.0;
            let succ = n.out_local(v);
            if top.1 < succ.len() {
                let w = succ[top.1];
                top.1 += 1;
                let wi = w as usize;
                if index[wi] == UNVISITED {
                    index[wi] = next_index;
                    lowlink[wi] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[wi] = true;
                    call.push((w, 0));
                } else if on_stack[wi] {
                    lowlink[v as usize] = lowlink[v as usize].min(index[wi]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent as usize] = lowlink[parent as usize].min(lowlink[v as usize]);
            }
            if lowlink[v as usize] == index[v as usize] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w as usize] = false;
                    comp[w as usize] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}
