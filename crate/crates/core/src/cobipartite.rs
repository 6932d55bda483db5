//! SFVS on co-bipartite graphs by enumerating candidate maximal S-forests.
//!
//! With the vertex set split into cliques `A` and `B`, an S-forest keeps at
//! most two S vertices of each clique, and once those and at most one non-S
//! vertex per side are fixed, the rest of the forest follows from
//! neighbourhoods. The 22 families below spell this out; every candidate is
//! validated, and the heaviest valid one wins (ties to the first emitted).

use crate::error::SolveError;
use crate::graph::{is_s_forest, vertex_mask, Graph};
use crate::model::{Model, VertexId, Weight};
use crate::solution::{Solution, SolverTag};
use crate::Instance;

/// Split of `V` into two cliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoBipartition {
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
}

impl CoBipartition {
    pub fn is_valid(&self, g: &Graph) -> bool {
        let n = g.n();
        let mut seen = vec![0u8; n + 1];
        for &v in self.a.iter().chain(&self.b) {
            if v == 0 || v > n {
                return false;
            }
            seen[v] += 1;
        }
        let clique = |side: &[VertexId]| side.iter().enumerate().all(|(k, &u)| side[k + 1..].iter().all(|&v| g.has_edge(u, v)));
        seen[1..].iter().all(|&c| c == 1) && clique(&self.a) && clique(&self.b)
    }
}

/// Two-colours the complement, lowest uncoloured vertex first into `A`.
pub fn cobipartition(g: &Graph) -> Result<CoBipartition, SolveError> {
    let n = g.n();
    let mut colour: Vec<Option<bool>> = vec![None; n + 1];
    for s in 1..=n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(true);
        let mut queue = vec![s];
        let mut k = 0;
        while k < queue.len() {
            let u = queue[k];
            k += 1;
            let cu = colour[u].unwrap();
            for v in 1..=n {
                if v == u || g.has_edge(u, v) {
                    continue;
                }
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        queue.push(v);
                    }
                    Some(cv) if cv == cu => {
                        return Err(SolveError::NotCoBipartite(format!(
                            "vertices {u} and {v} are non-adjacent but must share a clique"
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let a = (1..=n).filter(|&v| colour[v] == Some(true)).collect();
    let b = (1..=n).filter(|&v| colour[v] == Some(false)).collect();
    Ok(CoBipartition { a, b })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestCandidate {
    pub family: u8,
    /// Retained vertices, ascending.
    pub retained: Vec<VertexId>,
}

/// Calls `f(family, retained)` for every candidate, in a fixed order.
/// `retained` is ascending and free of duplicates.
pub fn for_each_candidate(g: &Graph, s: &[bool], part: &CoBipartition, mut f: impl FnMut(u8, &[VertexId])) {
    let adj = |u: VertexId, v: VertexId| g.has_edge(u, v);
    let split = |side: &[VertexId], want: bool| -> Vec<VertexId> { side.iter().copied().filter(|&v| s[v] == want).collect() };
    let (a_s, a_r) = (split(&part.a, true), split(&part.a, false));
    let (b_s, b_r) = (split(&part.b, true), split(&part.b, false));
    let mut r: Vec<VertexId> = a_r.iter().chain(&b_r).copied().collect();
    r.sort_unstable();
    let mut buf: Vec<VertexId> = Vec::new();
    let mut emit = |fam: u8, fixed: &[VertexId], base: &[VertexId], keep: &dyn Fn(VertexId) -> bool| {
        buf.clear();
        buf.extend_from_slice(fixed);
        buf.extend(base.iter().copied().filter(|&q| keep(q)));
        buf.sort_unstable();
        buf.dedup();
        f(fam, &buf);
    };
    let all = |_: VertexId| true;

    emit(1, &[], &r, &all);
    // one S vertex on a side, plus possibly one non-S vertex from each side
    for (xs, xr, yr, f0) in [(&a_s, &a_r, &b_r, 0u8), (&b_s, &b_r, &a_r, 4u8)] {
        for &a in xs.iter() {
            if yr.iter().all(|&q| !adj(a, q)) {
                emit(2 + f0, &[a], yr, &all);
            }
            for &b in yr.iter().filter(|&&b| adj(a, b)) {
                emit(3 + f0, &[a, b], yr, &|q| !adj(a, q));
            }
            for &ar in xr.iter() {
                emit(4 + f0, &[a, ar], yr, &|q| !adj(a, q));
                for &b in yr.iter().filter(|&&b| adj(a, b) && !adj(ar, b)) {
                    emit(5 + f0, &[a, ar, b], yr, &|q| !adj(a, q) && !adj(ar, q));
                }
            }
        }
    }
    for &a in &a_s {
        for &bs in &b_s {
            if r.iter().all(|&q| adj(a, q) && adj(bs, q)) {
                emit(10, &[a, bs], &[], &all);
            }
            for &ar in &a_r {
                if b_r.iter().all(|&q| adj(a, q) || adj(ar, q)) {
                    emit(11, &[a, ar, bs], &[], &all);
                }
            }
            for &br in &b_r {
                if a_r.iter().all(|&q| adj(bs, q) || adj(br, q)) {
                    emit(12, &[a, bs, br], &[], &all);
                }
            }
            for &ar in &a_r {
                for &br in &b_r {
                    emit(13, &[a, ar, bs, br], &[], &all);
                }
            }
        }
    }
    // two S vertices on one side
    for (xs, ys, yr, f0) in [(&a_s, &b_s, &b_r, 0u8), (&b_s, &a_s, &a_r, 2u8)] {
        for (k, &a) in xs.iter().enumerate() {
            for &a2 in &xs[k + 1..] {
                let sd: Vec<VertexId> = yr.iter().copied().filter(|&q| adj(a, q) != adj(a2, q)).collect();
                if sd.is_empty() {
                    emit(14 + f0, &[a, a2], yr, &|q| !(adj(a, q) && adj(a2, q)));
                }
                for &b in &sd {
                    emit(15 + f0, &[a, a2, b], yr, &|q| !adj(a, q) && !adj(a2, q));
                }
                for &bs in ys.iter() {
                    emit(18 + f0, &[a, a2, bs], &[], &all);
                    if f0 == 0 {
                        for &br in yr.iter() {
                            emit(19, &[a, a2, bs, br], &[], &all);
                        }
                    } else {
                        for &ar in yr.iter() {
                            emit(21, &[bs, ar, a, a2], &[], &all);
                        }
                    }
                }
            }
        }
    }
    for (k, &a) in a_s.iter().enumerate() {
        for &a2 in &a_s[k + 1..] {
            for (l, &b) in b_s.iter().enumerate() {
                for &b2 in &b_s[l + 1..] {
                    emit(22, &[a, a2, b, b2], &[], &all);
                }
            }
        }
    }
}

pub fn enumerate_candidate_forests(g: &Graph, s: &[bool], part: &CoBipartition) -> Vec<ForestCandidate> {
    let mut out = Vec::new();
    for_each_candidate(g, s, part, |family, y| out.push(ForestCandidate { family, retained: y.to_vec() }));
    out
}

/// The given partition when it is valid, the computed one otherwise.
pub fn instance_partition(inst: &Instance, g: &Graph) -> Result<CoBipartition, SolveError> {
    if let Model::CoBipartite(m) | Model::Generic(m) = &inst.model {
        if let Some(a) = &m.part_a {
            let mut in_a = vec![false; g.n() + 1];
            for &v in a {
                if v <= g.n() {
                    in_a[v] = true;
                }
            }
            let part = CoBipartition {
                a: a.clone(),
                b: (1..=g.n()).filter(|&v| !in_a[v]).collect(),
            };
            if part.is_valid(g) {
                return Ok(part);
            }
        }
    }
    cobipartition(g)
}

pub fn solve_cobipartite(inst: &Instance) -> Result<Solution, SolveError> {
    let g = inst.graph();
    let part = instance_partition(inst, &g)?;
    let s = inst.s_mask();
    let w = inst.weight_vec();
    let n = inst.n();
    let mut best: Option<(Weight, Vec<VertexId>)> = None;
    for_each_candidate(&g, &s, &part, |_, y| {
        let wy: Weight = y.iter().map(|&v| w[v]).sum();
        if best.as_ref().is_some_and(|b| wy <= b.0) {
            return;
        }
        if is_s_forest(&g, &s, &vertex_mask(n, y.iter().copied())) {
            best = Some((wy, y.to_vec()));
        }
    });
    let (_, keep) = best.ok_or_else(|| SolveError::Internal("no valid co-bipartite candidate".into()))?;
    Ok(Solution::from_retained(inst, &vertex_mask(n, keep), SolverTag::CoBipartite))
}
