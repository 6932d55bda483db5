//! Line-oriented instance and solution files.
//!
//! ```text
//! # comments run to end of line
//! kind interval
//! n 2
//! weights 3 4
//! s 1
//! interval 1 1 3
//! interval 2 2 4
//! ```
//!
//! `kind` comes first; the other directives may follow in any order, each
//! at most once except the per-vertex and per-edge payload lines.
//! Payloads: `interval i l r` (n lines), `pi p1 … pn`, `arc i a b` (n
//! lines), or `edge u v` lines with an optional `partA v1 …`.
//!
//! Solutions are `weight W` and `removed v1 … vk` with vertices ascending.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use sfvs_core::{
    CircularArcModel, EdgeListModel, Instance, IntervalModel, Kind, Model, ModelError, PermutationModel, Solution,
    VertexId, Weight,
};

/// A diagnostic naming the input line (1-based) and, when there is one, the
/// token at fault.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub token: Option<String>,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, token: Option<&str>, message: impl Into<String>) -> Self {
        FormatError { line, token: token.map(str::to_owned), message: message.into() }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)?;
        if let Some(t) = &self.token {
            write!(f, " (at `{t}`)")?;
        }
        Ok(())
    }
}

impl std::error::Error for FormatError {}

struct Line<'a> {
    no: usize,
    head: &'a str,
    args: Vec<&'a str>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let mut it = body.split_whitespace();
        let head = it.next()?;
        Some(Line { no: k + 1, head, args: it.collect() })
    })
}

fn num<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T, FormatError> {
    tok.parse().map_err(|_| FormatError::new(line, Some(tok), format!("expected {what}")))
}

fn arity(l: &Line<'_>, k: usize) -> Result<(), FormatError> {
    if l.args.len() != k {
        let tok = l.args.get(k).copied().unwrap_or(l.head);
        return Err(FormatError::new(
            l.no,
            Some(tok),
            format!("`{}` takes {k} values, got {}", l.head, l.args.len()),
        ));
    }
    Ok(())
}

fn weight_tok(line: usize, tok: &str) -> Result<Weight, FormatError> {
    if !tok.is_empty() && tok.bytes().all(|b| b.is_ascii_digit()) {
        tok.parse().map_err(|_| FormatError::new(line, Some(tok), "weight overflow: value exceeds 64 bits"))
    } else {
        Err(FormatError::new(line, Some(tok), "expected a non-negative integer weight"))
    }
}

#[derive(Default)]
struct Seen {
    n: Option<(usize, usize)>,
    weights: Option<(usize, Vec<Weight>)>,
    s: Option<(usize, Vec<VertexId>)>,
    pi: Option<(usize, Vec<usize>)>,
    part_a: Option<(usize, Vec<VertexId>)>,
    // per vertex: (line, a, b)
    items: HashMap<usize, (usize, i64, i64)>,
    edges: Vec<(usize, VertexId, VertexId)>,
    last: usize,
}

fn once<T>(slot: &Option<(usize, T)>, l: &Line<'_>) -> Result<(), FormatError> {
    if let Some((first, _)) = slot {
        return Err(FormatError::new(l.no, Some(l.head), format!("`{}` repeats line {first}", l.head)));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut it = lines(text);
    let first = it.next().ok_or_else(|| FormatError::new(1, None, "empty instance file"))?;
    if first.head != "kind" {
        return Err(FormatError::new(first.no, Some(first.head), "first directive must be `kind`"));
    }
    arity(&first, 1)?;
    let kind = Kind::parse(first.args[0])
        .ok_or_else(|| FormatError::new(first.no, Some(first.args[0]), "unknown kind"))?;
    let mut st = Seen { last: first.no, ..Seen::default() };
    for l in it {
        st.last = l.no;
        let payload_ok = |want: &[Kind]| {
            if want.contains(&kind) {
                Ok(())
            } else {
                Err(FormatError::new(l.no, Some(l.head), format!("`{}` does not belong in a {kind} instance", l.head)))
            }
        };
        match l.head {
            "kind" => return Err(FormatError::new(l.no, Some("kind"), "`kind` repeats")),
            "n" => {
                once(&st.n, &l)?;
                arity(&l, 1)?;
                st.n = Some((l.no, num(l.no, l.args[0], "a vertex count")?));
            }
            "weights" => {
                once(&st.weights, &l)?;
                let w = l.args.iter().map(|t| weight_tok(l.no, t)).collect::<Result<_, _>>()?;
                st.weights = Some((l.no, w));
            }
            "s" => {
                once(&st.s, &l)?;
                let s = l.args.iter().map(|t| num(l.no, t, "a vertex id")).collect::<Result<_, _>>()?;
                st.s = Some((l.no, s));
            }
            "pi" => {
                payload_ok(&[Kind::Permutation])?;
                once(&st.pi, &l)?;
                let p = l.args.iter().map(|t| num(l.no, t, "a position")).collect::<Result<_, _>>()?;
                st.pi = Some((l.no, p));
            }
            "partA" => {
                payload_ok(&[Kind::CoBipartite, Kind::Generic])?;
                once(&st.part_a, &l)?;
                let a = l.args.iter().map(|t| num(l.no, t, "a vertex id")).collect::<Result<_, _>>()?;
                st.part_a = Some((l.no, a));
            }
            "interval" | "arc" => {
                payload_ok(if l.head == "interval" { &[Kind::Interval] } else { &[Kind::CircularArc] })?;
                arity(&l, 3)?;
                let v: usize = num(l.no, l.args[0], "a vertex id")?;
                let (a, b) = if l.head == "interval" {
                    (num(l.no, l.args[1], "an integer endpoint")?, num(l.no, l.args[2], "an integer endpoint")?)
                } else {
                    (num::<usize>(l.no, l.args[1], "a circle point")? as i64, num::<usize>(l.no, l.args[2], "a circle point")? as i64)
                };
                if let Some(&(prev, _, _)) = st.items.get(&v) {
                    return Err(FormatError::new(l.no, Some(l.args[0]), format!("vertex {v} already described on line {prev}")));
                }
                st.items.insert(v, (l.no, a, b));
            }
            "edge" => {
                payload_ok(&[Kind::CoBipartite, Kind::Generic])?;
                arity(&l, 2)?;
                st.edges.push((l.no, num(l.no, l.args[0], "a vertex id")?, num(l.no, l.args[1], "a vertex id")?));
            }
            other => return Err(FormatError::new(l.no, Some(other), "unknown directive")),
        }
    }
    assemble(kind, st)
}

fn assemble(kind: Kind, st: Seen) -> Result<Instance, FormatError> {
    let end = st.last;
    let (n_line, n) = st.n.ok_or_else(|| FormatError::new(end, None, "missing `n`"))?;
    let (w_line, weights) = st.weights.ok_or_else(|| FormatError::new(end, None, "missing `weights`"))?;
    if weights.len() != n {
        return Err(FormatError::new(w_line, Some("weights"), format!("expected {n} weights, got {}", weights.len())));
    }
    let (s_line, s) = st.s.unwrap_or((end, Vec::new()));
    let per_vertex = |what: &str| -> Result<Vec<(i64, i64)>, FormatError> {
        if let Some((&v, &(line, _, _))) = st.items.iter().filter(|(&v, _)| v == 0 || v > n).min_by_key(|(_, x)| x.0) {
            return Err(FormatError::new(line, Some(&v.to_string()), format!("vertex {v} outside 1..={n}")));
        }
        (1..=n)
            .map(|v| {
                st.items
                    .get(&v)
                    .map(|&(_, a, b)| (a, b))
                    .ok_or_else(|| FormatError::new(end, None, format!("missing `{what}` line for vertex {v}")))
            })
            .collect()
    };
    let vertex_line = |v: VertexId| st.items.get(&v).map_or(n_line, |x| x.0);
    let model = match kind {
        Kind::Interval => Model::Interval(IntervalModel { intervals: per_vertex("interval")? }),
        Kind::CircularArc => Model::CircularArc(CircularArcModel {
            arcs: per_vertex("arc")?.into_iter().map(|(a, b)| (a as usize, b as usize)).collect(),
        }),
        Kind::Permutation => {
            let (line, pi) = st.pi.clone().ok_or_else(|| FormatError::new(end, None, "missing `pi`"))?;
            if pi.len() != n {
                return Err(FormatError::new(line, Some("pi"), format!("expected {n} positions, got {}", pi.len())));
            }
            Model::Permutation(PermutationModel { pi })
        }
        Kind::CoBipartite | Kind::Generic => {
            let m = EdgeListModel {
                n,
                edges: st.edges.iter().map(|&(_, u, v)| (u, v)).collect(),
                part_a: st.part_a.as_ref().map(|p| p.1.clone()),
            };
            if kind == Kind::CoBipartite {
                Model::CoBipartite(m)
            } else {
                Model::Generic(m)
            }
        }
    };
    let edge_line = |u: VertexId, v: VertexId| {
        let key = (u.min(v), u.max(v));
        let hits: Vec<usize> = st.edges.iter().filter(|e| (e.1.min(e.2), e.1.max(e.2)) == key).map(|e| e.0).collect();
        // the second listing is the offending one for duplicates
        *hits.get(1).or(hits.first()).unwrap_or(&end)
    };
    Instance::new(model, weights, s).map_err(|e| {
        let line = match &e {
            ModelError::ReversedInterval { vertex, .. }
            | ModelError::DuplicateEndpoint { vertex, .. }
            | ModelError::ArcPointOutOfRange { vertex, .. } => vertex_line(*vertex),
            ModelError::PermValueOutOfRange { .. } | ModelError::PermNotBijective { .. } => {
                st.pi.as_ref().map_or(end, |p| p.0)
            }
            ModelError::EdgeOutOfRange { u, v, .. } | ModelError::DuplicateEdge { u, v } => edge_line(*u, *v),
            ModelError::SelfLoop { v } => edge_line(*v, *v),
            ModelError::BadPartition { .. } => st.part_a.as_ref().map_or(end, |p| p.0),
            ModelError::WeightCount { .. } | ModelError::WeightOverflow { .. } => w_line,
            ModelError::SOutOfRange { .. } | ModelError::DuplicateS { .. } => s_line,
        };
        let token = match &e {
            ModelError::DuplicateEndpoint { coord, .. } => Some(coord.to_string()),
            ModelError::ArcPointOutOfRange { point, .. } => Some(point.to_string()),
            ModelError::PermValueOutOfRange { value, .. } | ModelError::PermNotBijective { value, .. } => {
                Some(value.to_string())
            }
            ModelError::SOutOfRange { v, .. } | ModelError::DuplicateS { v } | ModelError::BadPartition { v } => {
                Some(v.to_string())
            }
            _ => None,
        };
        FormatError { line, token, message: e.to_string() }
    })
}

fn join<T: ToString>(head: &str, xs: &[T]) -> String {
    let mut s = String::from(head);
    for x in xs {
        s.push(' ');
        s.push_str(&x.to_string());
    }
    s.push('\n');
    s
}

pub fn emit_instance(inst: &Instance) -> String {
    let mut out = format!("kind {}\nn {}\n", inst.model.kind(), inst.n());
    out += &join("weights", &inst.weights);
    out += &join("s", &inst.s);
    match &inst.model {
        Model::Interval(m) => {
            for (k, (l, r)) in m.intervals.iter().enumerate() {
                out += &format!("interval {} {l} {r}\n", k + 1);
            }
        }
        Model::Permutation(m) => out += &join("pi", &m.pi),
        Model::CircularArc(m) => {
            for (k, (a, b)) in m.arcs.iter().enumerate() {
                out += &format!("arc {} {a} {b}\n", k + 1);
            }
        }
        Model::CoBipartite(m) | Model::Generic(m) => {
            for (u, v) in &m.edges {
                out += &format!("edge {u} {v}\n");
            }
            if let Some(a) = &m.part_a {
                out += &join("partA", a);
            }
        }
    }
    out
}

/// Contents of a solution file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub weight: Weight,
    pub removed: Vec<VertexId>,
}

impl From<&Solution> for SolutionFile {
    fn from(s: &Solution) -> Self {
        SolutionFile { weight: s.removed_weight, removed: s.removed.clone() }
    }
}

pub fn emit_solution(sol: &SolutionFile) -> String {
    format!("weight {}\n{}", sol.weight, join("removed", &sol.removed))
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, FormatError> {
    let mut weight: Option<(usize, Weight)> = None;
    let mut removed: Option<(usize, Vec<VertexId>)> = None;
    let mut end = 1;
    for l in lines(text) {
        end = l.no;
        match l.head {
            "weight" => {
                once(&weight, &l)?;
                arity(&l, 1)?;
                weight = Some((l.no, weight_tok(l.no, l.args[0])?));
            }
            "removed" => {
                once(&removed, &l)?;
                let mut vs: Vec<VertexId> = Vec::with_capacity(l.args.len());
                for t in &l.args {
                    let v: VertexId = num(l.no, t, "a vertex id")?;
                    if vs.last().is_some_and(|&p| p >= v) {
                        return Err(FormatError::new(l.no, Some(t), "removed vertices must be strictly ascending"));
                    }
                    vs.push(v);
                }
                removed = Some((l.no, vs));
            }
            other => return Err(FormatError::new(l.no, Some(other), "unknown directive")),
        }
    }
    Ok(SolutionFile {
        weight: weight.ok_or_else(|| FormatError::new(end, None, "missing `weight`"))?.1,
        removed: removed.ok_or_else(|| FormatError::new(end, None, "missing `removed`"))?.1,
    })
}
