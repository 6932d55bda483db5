//! Dense simple graphs and the S-forest checkers.
//!
//! Vertex sets are passed as `&[bool]` masks of length `n + 1`; index 0 is the
//! sentinel slot and is ignored.

use crate::model::VertexId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    nbrs: Vec<Vec<VertexId>>,
}

impl Graph {
    /// Edgeless graph on vertices `1..=n`.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![false; (n + 1) * (n + 1)],
            nbrs: vec![Vec::new(); n + 1],
        }
    }

    /// Builds a graph from an edge list. Loops and repeated edges are ignored;
    /// callers validate their input beforehand.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g.sort_neighbors();
        g
    }

    pub(crate) fn add_edge(&mut self, u: VertexId, v: VertexId) {
        if u == v || self.has_edge(u, v) {
            return;
        }
        let n1 = self.n + 1;
        self.adj[u * n1 + v] = true;
        self.adj[v * n1 + u] = true;
        self.nbrs[u].push(v);
        self.nbrs[v].push(u);
    }

    pub(crate) fn sort_neighbors(&mut self) {
        for l in &mut self.nbrs {
            l.sort_unstable();
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u * (self.n + 1) + v]
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.nbrs[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 1..=self.n {
            for &v in &self.nbrs[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Mask of length `n + 1` with the listed vertices set.
pub fn vertex_mask(n: usize, vs: impl IntoIterator<Item = VertexId>) -> Vec<bool> {
    let mut m = vec![false; n + 1];
    for v in vs {
        m[v] = true;
    }
    m
}

/// Vertices set in a mask, ascending, sentinel excluded.
pub fn mask_vertices(mask: &[bool]) -> Vec<VertexId> {
    (1..mask.len()).filter(|&v| mask[v]).collect()
}

/// True iff some cycle of `G[Y]` passes through `v`: two distinct
/// neighbours of `v` in `Y` are connected in `G[Y] - v`.
pub fn lies_on_cycle(g: &Graph, y: &[bool], v: VertexId) -> bool {
    let nb: Vec<VertexId> = g.neighbors(v).iter().copied().filter(|&u| y[u]).collect();
    if nb.len() < 2 {
        return false;
    }
    let mut comp = vec![0usize; g.n() + 1];
    let mut stack = Vec::new();
    for (k, &s) in nb.iter().enumerate() {
        if comp[s] != 0 {
            return true;
        }
        let label = k + 1;
        comp[s] = label;
        stack.push(s);
        while let Some(a) = stack.pop() {
            for &b in g.neighbors(a) {
                if b != v && y[b] && comp[b] == 0 {
                    comp[b] = label;
                    stack.push(b);
                }
            }
        }
    }
    false
}

/// True iff no vertex of `S ∩ Y` lies on a cycle of `G[Y]`.
///
/// Components that are trees are skipped wholesale; only S-vertices of
/// components with a cycle get the per-vertex test.
pub fn is_s_forest(g: &Graph, s: &[bool], y: &[bool]) -> bool {
    let n = g.n();
    let mut seen = vec![false; n + 1];
    let mut members = Vec::new();
    for root in 1..=n {
        if !y[root] || seen[root] {
            continue;
        }
        members.clear();
        seen[root] = true;
        members.push(root);
        let mut head = 0;
        let mut deg_sum = 0usize;
        let mut has_s = false;
        while head < members.len() {
            let a = members[head];
            head += 1;
            has_s |= s[a];
            for &b in g.neighbors(a) {
                if y[b] {
                    deg_sum += 1;
                    if !seen[b] {
                        seen[b] = true;
                        members.push(b);
                    }
                }
            }
        }
        if !has_s || deg_sum / 2 < members.len() {
            continue;
        }
        for &v in &members {
            if s[v] && lies_on_cycle(g, y, v) {
                return false;
            }
        }
    }
    true
}

/// Second checker, used to cross-examine `is_s_forest`: a vertex lies on a
/// cycle iff one of its edges in `G[Y]` is not a bridge. Bridges come from an
/// iterative low-link DFS.
pub fn is_s_forest_by_bridges(g: &Graph, s: &[bool], y: &[bool]) -> bool {
    let n = g.n();
    let mut disc = vec![0usize; n + 1];
    let mut low = vec![0usize; n + 1];
    let mut on_cycle = vec![false; n + 1];
    let mut timer = 0;
    // (vertex, parent, next neighbour index)
    let mut stack: Vec<(VertexId, VertexId, usize)> = Vec::new();
    for root in 1..=n {
        if !y[root] || disc[root] != 0 {
            continue;
        }
        timer += 1;
        disc[root] = timer;
        low[root] = timer;
        stack.push((root, 0, 0));
        while let Some(top) = stack.last_mut() {
            let (v, parent, idx) = *top;
            let nb = g.neighbors(v);
            if idx < nb.len() {
                let u = nb[idx];
                top.2 += 1;
                if !y[u] || u == parent {
                    continue;
                }
                if disc[u] == 0 {
                    timer += 1;
                    disc[u] = timer;
                    low[u] = timer;
                    stack.push((u, v, 0));
                } else {
                    // back edge: closes a cycle through both ends
                    low[v] = low[v].min(disc[u]);
                    on_cycle[v] = true;
                    on_cycle[u] = true;
                }
            } else {
                stack.pop();
                if parent != 0 {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] <= disc[parent] {
                        // tree edge (parent, v) is not a bridge
                        on_cycle[v] = true;
                        on_cycle[parent] = true;
                    }
                }
            }
        }
    }
    (1..=n).all(|v| !(y[v] && s[v] && on_cycle[v]))
}
