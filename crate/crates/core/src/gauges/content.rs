use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};

use super::gauge::{Ball, Gauge};
use crate::cantor::{CantorTree, Side};
use crate::error::{Error, Result};
use crate::measure::{Atom, PlanarMeasure};

/// The `h` value of every node ball, indexed by node in breadth-first order.
struct NodeTable {
    paths: Vec<Vec<u32>>,
    h: Vec<f64>,
    children: Vec<Vec<usize>>,
}

impl NodeTable {
    fn build(tree: &CantorTree, side: Side, gauge: &dyn Gauge) -> Result<Self> {
        let mut paths = Vec::new();
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        for n in 0..=tree.depth() {
            for path in tree.paths_at(n)? {
                let id = paths.len();
                if let Some((_, parent)) = path.split_last() {
                    children[index[parent]].push(id);
                }
                index.insert(path.clone(), id);
                paths.push(path);
                children.push(Vec::new());
            }
        }
        let h = paths
            .iter()
            .map(|p| {
                let v = gauge.h(&Ball::node(tree, side, p)?)?;
                if v.is_nan() || v < 0.0 {
                    return Err(Error::Gauge(format!("h = {v} at node {p:?}")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { paths, h, children })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentResult {
    /// Least `Σ h(B)` over covers by node balls.
    pub value: f64,
    /// The optimal cover (an antichain meeting every root-to-leaf path).
    pub cover: Vec<Vec<u32>>,
}

/// `M^h` restricted to covers by node balls:
/// `cost(node) = min(h(node), Σ_children cost)`, leaves costing `h(leaf)`.
/// Ties keep the coarser ball.
pub fn content_mh_tree(tree: &CantorTree, side: Side, gauge: &dyn Gauge) -> Result<ContentResult> {
    let table = NodeTable::build(tree, side, gauge)?;
    let n = table.paths.len();
    let mut cost = vec![0.0; n];
    let mut keep = vec![true; n];
    for v in (0..n).rev() {
        let kids = &table.children[v];
        if kids.is_empty() {
            cost[v] = table.h[v];
        } else {
            let sum: f64 = kids.iter().map(|&c| cost[c]).sum();
            keep[v] = table.h[v] <= sum;
            cost[v] = table.h[v].min(sum);
        }
    }
    let mut cover = Vec::new();
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        if keep[v] {
            cover.push(table.paths[v].clone());
        } else {
            stack.extend(table.children[v].iter().rev());
        }
    }
    Ok(ContentResult {
        value: cost[0],
        cover,
    })
}

/// A leaf allocation `ν` with `ν(subtree(v)) ≤ h(v)` for every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrostmanMeasure {
    pub side: Side,
    pub leaves: Vec<(Vec<u32>, f64)>,
    pub total: f64,
}

impl FrostmanMeasure {
    /// Largest `ν(subtree(v)) − h(v)` over all nodes (≤ 0 when feasible).
    pub fn max_violation(&self, tree: &CantorTree, gauge: &dyn Gauge) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for n in 0..=tree.depth() {
            for path in tree.paths_at(n)? {
                let mass: f64 = self
                    .leaves
                    .iter()
                    .filter(|(leaf, _)| leaf.starts_with(&path))
                    .map(|(_, w)| w)
                    .sum();
                let h = gauge.h(&Ball::node(tree, self.side, &path)?)?;
                worst = worst.max(mass - h);
            }
        }
        Ok(worst)
    }

    /// Atoms at the leaf centers of a realized tree.
    pub fn to_measure(&self, tree: &CantorTree) -> Result<PlanarMeasure> {
        let atoms = self
            .leaves
            .iter()
            .map(|(path, w)| {
                Ok(Atom {
                    point: tree.center(self.side, path).ok_or(Error::Unrealized)?,
                    weight: *w,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PlanarMeasure::new(atoms)
    }
}

/// Maximal leaf allocation via max-flow on the network
/// `source → leaf (∞)`, `v → parent(v)` with capacity `h(v)`, `root → sink`
/// with capacity `h(root)`. By max-flow/min-cut its total equals
/// [`content_mh_tree`].
pub fn frostman_tree(tree: &CantorTree, side: Side, gauge: &dyn Gauge) -> Result<FrostmanMeasure> {
    let table = NodeTable::build(tree, side, gauge)?;
    let n = table.paths.len();
    let (src, sink) = (n, n + 1);
    let mut net = Dinic::new(n + 2);
    let mut leaf_edges = Vec::new();
    for v in 0..n {
        for &c in &table.children[v] {
            net.add_edge(c, v, table.h[c]);
        }
        if table.children[v].is_empty() {
            leaf_edges.push((v, net.add_edge(src, v, f64::INFINITY)));
        }
    }
    net.add_edge(0, sink, table.h[0]);
    let total = net.max_flow(src, sink);
    let leaves = leaf_edges
        .into_iter()
        .map(|(v, e)| (table.paths[v].clone(), net.flow(e)))
        .collect();
    Ok(FrostmanMeasure {
        side,
        leaves,
        total,
    })
}

struct Edge {
    to: usize,
    cap: f64,
    flow: f64,
}

/// Dinic's algorithm on `f64` capacities.
struct Dinic {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i64>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![-1; n],
            next: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, flow: 0.0 });
        self.edges.push(Edge {
            to: from,
            cap: 0.0,
            flow: 0.0,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn flow(&self, e: usize) -> f64 {
        self.edges[e].flow
    }

    fn residual(&self, e: usize) -> f64 {
        self.edges[e].cap - self.edges[e].flow
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if self.level[v] < 0 && self.residual(e) > 0.0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: f64) -> f64 {
        if u == t {
            return pushed;
        }
        while self.next[u] < self.adj[u].len() {
            let e = self.adj[u][self.next[u]];
            let v = self.edges[e].to;
            let r = self.residual(e);
            if self.level[v] == self.level[u] + 1 && r > 0.0 {
                let got = self.dfs(v, t, pushed.min(r));
                if got > 0.0 {
                    self.edges[e].flow += got;
                    self.edges[e ^ 1].flow -= got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        while self.bfs(s, t) {
            self.next.fill(0);
            loop {
                let f = self.dfs(s, t, f64::INFINITY);
                if f <= 0.0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}
