//! Simple undirected graphs with dense vertex ids.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    /// Edges `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) names a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!(
                "edge ({}, {}) listed twice",
                w[0].0, w[0].1
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: norm,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn check_max_degree(&self, max: usize) -> Result<()> {
        match (0..self.n).find(|&u| self.degree(u) > max) {
            Some(u) => Err(Error::DegreeTooHigh {
                vertex: u,
                degree: self.degree(u),
            }),
            None => Ok(()),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&w| !self.has_edge(u, w)))
    }

    pub fn is_vertex_cover(&self, set: &[usize]) -> bool {
        let mut mark = vec![false; self.n];
        for &u in set {
            mark[u] = true;
        }
        self.edges.iter().all(|&(u, v)| mark[u] || mark[v])
    }
}

/// Calls `f` on every labeled graph on `n` vertices with maximum degree at
/// most `max_degree` (optionally only connected ones).
pub fn for_each_graph<F: FnMut(&Graph)>(n: usize, max_degree: usize, connected: bool, mut f: F) {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut deg = vec![0; n];
    let mut chosen = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec<F: FnMut(&Graph)>(
        i: usize,
        n: usize,
        max_degree: usize,
        connected: bool,
        pairs: &[(usize, usize)],
        deg: &mut [usize],
        chosen: &mut Vec<(usize, usize)>,
        f: &mut F,
    ) {
        if i == pairs.len() {
            let g = Graph::new(n, chosen.clone()).expect("distinct pairs");
            if !connected || g.is_connected() {
                f(&g);
            }
            return;
        }
        rec(i + 1, n, max_degree, connected, pairs, deg, chosen, f);
        let (u, v) = pairs[i];
        if deg[u] < max_degree && deg[v] < max_degree {
            deg[u] += 1;
            deg[v] += 1;
            chosen.push((u, v));
            rec(i + 1, n, max_degree, connected, pairs, deg, chosen, f);
            chosen.pop();
            deg[u] -= 1;
            deg[v] -= 1;
        }
    }
    rec(
        0,
        n,
        max_degree,
        connected,
        &pairs,
        &mut deg,
        &mut chosen,
        &mut f,
    );
}

/// One representative per isomorphism class among the graphs
/// [`for_each_graph`] visits, in first-seen order.
pub fn unlabeled_graphs(n: usize, max_degree: usize, connected: bool) -> Vec<Graph> {
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for_each_graph(n, max_degree, connected, |g| {
        let key = perms
            .iter()
            .map(|perm| {
                let mut e: Vec<(usize, usize)> = g
                    .edges()
                    .iter()
                    .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
                    .collect();
                e.sort_unstable();
                e
            })
            .min()
            .unwrap_or_default();
        if seen.insert(key) {
            out.push(g.clone());
        }
    });
    out
}

/// Random graph with maximum degree `max_degree`. A connected one starts from
/// a random spanning tree; then each remaining pair is added with
/// probability `density` when degrees allow.
pub fn random_graph<R: Rng + ?Sized>(
    n: usize,
    max_degree: usize,
    density: f64,
    connected: bool,
    rng: &mut R,
) -> Graph {
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    if connected && n > 1 && max_degree >= 2 {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        for i in 1..n {
            let open: Vec<usize> = order[..i]
                .iter()
                .copied()
                .filter(|&u| deg[u] < max_degree)
                .collect();
            let u = *open.choose(rng).expect("a tree of degree >= 2 always has an open slot");
            let v = order[i];
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
            present.insert((u.min(v), u.max(v)));
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    for (u, v) in pairs {
        if present.contains(&(u, v)) || deg[u] >= max_degree || deg[v] >= max_degree {
            continue;
        }
        if rng.gen_bool(density) {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::new(n, edges).expect("edges are distinct")
}
