//! Geometric models, instances, validation and adjacency construction.

use std::collections::HashMap;
use std::fmt;

use crate::error::ModelError;
use crate::graph::Graph;

/// 1-based vertex index; 0 is the sentinel.
pub type VertexId = usize;
pub type Weight = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Interval,
    Permutation,
    CircularArc,
    CoBipartite,
    Generic,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Interval,
        Kind::Permutation,
        Kind::CircularArc,
        Kind::CoBipartite,
        Kind::Generic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Interval => "interval",
            Kind::Permutation => "permutation",
            Kind::CircularArc => "circular-arc",
            Kind::CoBipartite => "cobipartite",
            Kind::Generic => "generic",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed intervals; `intervals[v - 1]` is `(l(v), r(v))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalModel {
    pub intervals: Vec<(i64, i64)>,
}

/// `pi[v - 1]` is the bottom position of the segment whose top position is `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationModel {
    pub pi: Vec<usize>,
}

/// Arcs on a circle of points `1..=2n`; arc `v` runs clockwise from
/// `arcs[v - 1].0` to `arcs[v - 1].1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularArcModel {
    pub arcs: Vec<(usize, usize)>,
}

/// Explicit graph, optionally with one side of a co-bipartition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListModel {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub part_a: Option<Vec<VertexId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Interval(IntervalModel),
    Permutation(PermutationModel),
    CircularArc(CircularArcModel),
    CoBipartite(EdgeListModel),
    Generic(EdgeListModel),
}

impl Model {
    pub fn n(&self) -> usize {
        match self {
            Model::Interval(m) => m.intervals.len(),
            Model::Permutation(m) => m.pi.len(),
            Model::CircularArc(m) => m.arcs.len(),
            Model::CoBipartite(m) | Model::Generic(m) => m.n,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Model::Interval(_) => Kind::Interval,
            Model::Permutation(_) => Kind::Permutation,
            Model::CircularArc(_) => Kind::CircularArc,
            Model::CoBipartite(_) => Kind::CoBipartite,
            Model::Generic(_) => Kind::Generic,
        }
    }
}

/// Interval model relabelled by ascending right endpoint, sentinel in slot 0.
/// Endpoints are ranks in `1..=2n`; the sentinel is `(-1, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalLabels {
    pub l: Vec<i64>,
    pub r: Vec<i64>,
    /// `vertex[label]` is the original vertex id (0 for the sentinel).
    pub vertex: Vec<VertexId>,
}

impl IntervalLabels {
    pub fn n(&self) -> usize {
        self.l.len() - 1
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && a != 0 && b != 0 && self.l[a].max(self.l[b]) <= self.r[a].min(self.r[b])
    }
}

fn rank_endpoints(intervals: &[(i64, i64)]) -> Result<Vec<(i64, i64)>, ModelError> {
    let mut owner: HashMap<i64, VertexId> = HashMap::with_capacity(2 * intervals.len());
    for (k, &(l, r)) in intervals.iter().enumerate() {
        let v = k + 1;
        if l >= r {
            return Err(ModelError::ReversedInterval { vertex: v, l, r });
        }
        for c in [l, r] {
            if let Some(&other) = owner.get(&c) {
                return Err(ModelError::DuplicateEndpoint { vertex: v, other, coord: c });
            }
            owner.insert(c, v);
        }
    }
    let mut coords: Vec<i64> = owner.into_keys().collect();
    coords.sort_unstable();
    let rank = |c: i64| coords.binary_search(&c).unwrap() as i64 + 1;
    Ok(intervals.iter().map(|&(l, r)| (rank(l), rank(r))).collect())
}

impl IntervalModel {
    /// Ranks endpoints and relabels by ascending right endpoint.
    pub fn labels(&self) -> Result<IntervalLabels, ModelError> {
        let ranked = rank_endpoints(&self.intervals)?;
        let mut order: Vec<VertexId> = (1..=ranked.len()).collect();
        order.sort_by_key(|&v| ranked[v - 1].1);
        let mut lab = IntervalLabels {
            l: vec![-1],
            r: vec![0],
            vertex: vec![0],
        };
        for v in order {
            lab.l.push(ranked[v - 1].0);
            lab.r.push(ranked[v - 1].1);
            lab.vertex.push(v);
        }
        Ok(lab)
    }
}

impl PermutationModel {
    fn check(&self) -> Result<(), ModelError> {
        let n = self.pi.len();
        let mut pos = vec![0usize; n + 1];
        for (k, &p) in self.pi.iter().enumerate() {
            if p == 0 || p > n {
                return Err(ModelError::PermValueOutOfRange { position: k + 1, value: p, n });
            }
            if pos[p] != 0 {
                return Err(ModelError::PermNotBijective { value: p, first: pos[p], second: k + 1 });
            }
            pos[p] = k + 1;
        }
        Ok(())
    }

    /// `inverse()[p]` is the vertex at bottom position `p`; slot 0 is the sentinel.
    pub fn inverse(&self) -> Vec<VertexId> {
        let mut inv = vec![0; self.pi.len() + 1];
        for (k, &p) in self.pi.iter().enumerate() {
            inv[p] = k + 1;
        }
        inv
    }
}

/// Clockwise containment of point `p` in arc `(a, b)`.
#[inline]
pub fn arc_contains(a: usize, b: usize, p: usize) -> bool {
    if a <= b {
        a <= p && p <= b
    } else {
        p >= a || p <= b
    }
}

#[inline]
pub fn arcs_intersect(x: (usize, usize), y: (usize, usize)) -> bool {
    arc_contains(x.0, x.1, y.0) || arc_contains(y.0, y.1, x.0)
}

impl CircularArcModel {
    fn check(&self) -> Result<(), ModelError> {
        let m = 2 * self.arcs.len();
        let mut owner = vec![0usize; m + 1];
        for (k, &(a, b)) in self.arcs.iter().enumerate() {
            let v = k + 1;
            for p in [a, b] {
                if p == 0 || p > m {
                    return Err(ModelError::ArcPointOutOfRange { vertex: v, point: p, max: m });
                }
                if owner[p] != 0 {
                    return Err(ModelError::DuplicateEndpoint {
                        vertex: v,
                        other: owner[p],
                        coord: p as i64,
                    });
                }
                owner[p] = v;
            }
        }
        Ok(())
    }
}

impl EdgeListModel {
    fn check(&self) -> Result<(), ModelError> {
        let n = self.n;
        let mut seen = std::collections::HashSet::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(ModelError::EdgeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(ModelError::SelfLoop { v });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(ModelError::DuplicateEdge { u, v });
            }
        }
        if let Some(a) = &self.part_a {
            let mut inside = vec![false; n + 1];
            for &v in a {
                if v == 0 || v > n || inside[v] {
                    return Err(ModelError::BadPartition { v });
                }
                inside[v] = true;
            }
        }
        Ok(())
    }

    fn normalized(&self) -> EdgeListModel {
        let mut edges: Vec<_> = self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        let part_a = self.part_a.as_ref().map(|a| {
            let mut a = a.clone();
            a.sort_unstable();
            a
        });
        EdgeListModel { n: self.n, edges, part_a }
    }
}

/// Checks a model and returns its normal form: interval endpoints ranked to
/// `1..=2n` (vertex ids kept), edge lists sorted with `u < v`. Idempotent.
pub fn validate_model(model: &Model) -> Result<Model, ModelError> {
    Ok(match model {
        Model::Interval(m) => Model::Interval(IntervalModel {
            intervals: rank_endpoints(&m.intervals)?,
        }),
        Model::Permutation(m) => {
            m.check()?;
            model.clone()
        }
        Model::CircularArc(m) => {
            m.check()?;
            model.clone()
        }
        Model::CoBipartite(m) => {
            m.check()?;
            Model::CoBipartite(m.normalized())
        }
        Model::Generic(m) => {
            m.check()?;
            Model::Generic(m.normalized())
        }
    })
}

/// Intersection graph of the model (inversion graph for permutations).
pub fn build_adjacency(model: &Model) -> Result<Graph, ModelError> {
    let n = model.n();
    let mut g = Graph::new(n);
    match validate_model(model)? {
        Model::Interval(m) => {
            // sweep by left endpoint: each interval meets the open ones
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&k| m.intervals[k].0);
            let mut open: Vec<usize> = Vec::new();
            for k in order {
                let (l, _) = m.intervals[k];
                open.retain(|&o| m.intervals[o].1 >= l);
                for &o in &open {
                    g.add_edge(o + 1, k + 1);
                }
                open.push(k);
            }
        }
        Model::Permutation(m) => {
            for u in 1..=n {
                for v in u + 1..=n {
                    if m.pi[u - 1] > m.pi[v - 1] {
                        g.add_edge(u, v);
                    }
                }
            }
        }
        Model::CircularArc(m) => {
            for u in 1..=n {
                for v in u + 1..=n {
                    if arcs_intersect(m.arcs[u - 1], m.arcs[v - 1]) {
                        g.add_edge(u, v);
                    }
                }
            }
        }
        Model::CoBipartite(m) | Model::Generic(m) => {
            for (u, v) in m.edges {
                g.add_edge(u, v);
            }
        }
    }
    g.sort_neighbors();
    Ok(g)
}

/// A model with vertex weights and the special set S.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub model: Model,
    /// `weights[v - 1]` is `w(v)`.
    pub weights: Vec<Weight>,
    /// Sorted, duplicate-free.
    pub s: Vec<VertexId>,
}

impl Instance {
    /// Validates the model and payload; S is sorted.
    pub fn new(model: Model, weights: Vec<Weight>, mut s: Vec<VertexId>) -> Result<Self, ModelError> {
        validate_model(&model)?;
        let n = model.n();
        if weights.len() != n {
            return Err(ModelError::WeightCount { expected: n, got: weights.len() });
        }
        let max = weights.iter().copied().max().unwrap_or(0);
        if (n as u128) * (max as u128) > i64::MAX as u128 {
            return Err(ModelError::WeightOverflow { n, max });
        }
        s.sort_unstable();
        for k in 0..s.len() {
            if s[k] == 0 || s[k] > n {
                return Err(ModelError::SOutOfRange { v: s[k], n });
            }
            if k > 0 && s[k] == s[k - 1] {
                return Err(ModelError::DuplicateS { v: s[k] });
            }
        }
        Ok(Instance { model, weights, s })
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn weight(&self, v: VertexId) -> Weight {
        self.weights[v - 1]
    }

    /// Weights indexed by vertex, slot 0 = 0.
    pub fn weight_vec(&self) -> Vec<Weight> {
        let mut w = Vec::with_capacity(self.n() + 1);
        w.push(0);
        w.extend_from_slice(&self.weights);
        w
    }

    pub fn s_mask(&self) -> Vec<bool> {
        crate::graph::vertex_mask(self.n(), self.s.iter().copied())
    }

    pub fn total_weight(&self) -> Weight {
        self.weights.iter().sum()
    }

    pub fn graph(&self) -> Graph {
        build_adjacency(&self.model).expect("instance models are validated on construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_inversion_is_one_edge() {
        let g = build_adjacency(&Model::Permutation(PermutationModel { pi: vec![2, 1] })).unwrap();
        assert_eq!(g.edges(), vec![(1, 2)]);
    }

    #[test]
    fn overlapping_intervals_form_k3() {
        let m = Model::Interval(IntervalModel { intervals: vec![(1, 4), (2, 5), (3, 6)] });
        assert_eq!(build_adjacency(&m).unwrap().edges(), vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn four_arcs_around_the_circle_form_c4() {
        // consecutive arcs overlap by one point pair
        let m = Model::CircularArc(CircularArcModel { arcs: vec![(8, 3), (2, 5), (4, 7), (6, 1)] });
        let g = build_adjacency(&m).unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (1, 4), (2, 3), (3, 4)]);
    }

    #[test]
    fn ranking_preserves_intersection_graph() {
        let raw = Model::Interval(IntervalModel { intervals: vec![(10, 40), (20, 50), (30, 60)] });
        let norm = validate_model(&raw).unwrap();
        assert_eq!(norm, Model::Interval(IntervalModel { intervals: vec![(1, 4), (2, 5), (3, 6)] }));
        assert_eq!(build_adjacency(&raw).unwrap(), build_adjacency(&norm).unwrap());
    }

    #[test]
    fn repeated_pi_value_is_rejected() {
        let err = validate_model(&Model::Permutation(PermutationModel { pi: vec![1, 1] })).unwrap_err();
        assert_eq!(err, ModelError::PermNotBijective { value: 1, first: 1, second: 2 });
    }

    #[test]
    fn labels_sort_by_right_endpoint() {
        let m = IntervalModel { intervals: vec![(1, 10), (2, 3)] };
        let lab = m.labels().unwrap();
        assert_eq!(lab.vertex, vec![0, 2, 1]);
        assert!(lab.r[1] < lab.r[2]);
    }

    #[test]
    fn duplicate_endpoint_names_both_vertices() {
        let m = Model::Interval(IntervalModel { intervals: vec![(1, 5), (5, 9)] });
        assert_eq!(
            validate_model(&m).unwrap_err(),
            ModelError::DuplicateEndpoint { vertex: 2, other: 1, coord: 5 }
        );
    }

    #[test]
    fn arc_points_must_be_on_the_circle() {
        let m = Model::CircularArc(CircularArcModel { arcs: vec![(1, 5)] });
        assert_eq!(
            validate_model(&m).unwrap_err(),
            ModelError::ArcPointOutOfRange { vertex: 1, point: 5, max: 2 }
        );
    }

    #[test]
    fn overflowing_weights_are_rejected() {
        let m = Model::Generic(EdgeListModel { n: 2, edges: vec![], part_a: None });
        assert!(matches!(
            Instance::new(m, vec![u64::MAX / 2, 1], vec![]),
            Err(ModelError::WeightOverflow { .. })
        ));
    }
}
