//! Dynamic program over crossing pairs for SFVS on permutation graphs.
//!
//! Vertex `v` has top position `t(v) = v` and bottom position `b(v) = π(v)`;
//! the sentinel 0 sits at position 0 on both lines and is isolated. A
//! crossing pair `ij` has `i ≤_t j` and `j ≤_b i`: either a self-pair `ii` or
//! an edge. `V_ij` is the set of vertices `h` with `b(h) ≤ b(i)` and
//! `t(h) ≤ t(j)`.
//!
//! Every predecessor of a pair is the r-maximum of a "box"
//! `{v : b(v) ≤ B, t(v) ≤ T}`, namely the pair made of the box's bottom-most
//! and top-most vertices; two `O(n²)` tables answer any box in `O(1)`.
//! [`pair_predecessors`] recomputes the same predecessors by scanning all
//! pairs with an explicit dominance check, and the tests compare the two.
//!
//! Keeping both ends of a pair under a `C` context leaves five or six context
//! vertices, and the recurrence keeps only the two leftmost crossing pairs
//! among them. That is not always safe: the forgotten vertex can close a
//! triangle with a kept S vertex. Each such step therefore reduces the full
//! context to an equivalent one (see `PermDp::reduce`) and keeps the
//! pair-based child only when nothing outside its four vertices survives;
//! otherwise the child is a [`PermState::Gen`] state carrying the reduced
//! context, evaluated by the plain drop-`j` / drop-`i` / keep-both split.
//!
//! States are evaluated lazily with an explicit work stack and memoized by
//! value only, under a packed 128-bit key. The traceback re-expands each state
//! and follows the first alternative that attains the stored value, which is
//! the same choice the evaluation made.

use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use crate::error::SolveError;
use crate::model::{Model, PermutationModel, VertexId, Weight};
use crate::solution::{Solution, SolverTag};
use crate::Instance;

type Pair = (u32, u32);

const SENTINEL: Pair = (0, 0);

/// A crossing pair `ij`: `i` comes first on the top line and last on the
/// bottom line (`i == j` for self-pairs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossingPair {
    pub i: VertexId,
    pub j: VertexId,
}

/// Bottom positions with the sentinel prepended, and their inverse.
#[derive(Debug, Clone)]
struct Diagram {
    n: usize,
    b: Vec<u32>,
    vb: Vec<u32>,
}

impl Diagram {
    fn new(m: &PermutationModel) -> Self {
        let n = m.pi.len();
        let mut b = vec![0u32; n + 1];
        let mut vb = vec![0u32; n + 1];
        for v in 1..=n {
            b[v] = m.pi[v - 1] as u32;
            vb[m.pi[v - 1]] = v as u32;
        }
        Diagram { n, b, vb }
    }

    #[inline]
    fn adj(&self, u: u32, v: u32) -> bool {
        u != v && ((u < v) == (self.b[u as usize] > self.b[v as usize]))
    }

    #[inline]
    fn is_edge_pair(&self, x: u32, y: u32) -> bool {
        x < y && self.b[y as usize] < self.b[x as usize]
    }

    /// Crossing pairs sorted by `(b(i), j)`, a linear extension of `≤_r`.
    fn pairs(&self) -> Vec<CrossingPair> {
        let mut out: Vec<CrossingPair> = (0..=self.n).map(|v| CrossingPair { i: v, j: v }).collect();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                if self.b[j] < self.b[i] {
                    out.push(CrossingPair { i, j });
                }
            }
        }
        out.sort_by_key(|p| (self.b[p.i], p.j));
        out
    }

    fn le_r(&self, p: CrossingPair, q: CrossingPair) -> bool {
        self.b[p.i] <= self.b[q.i] && p.j <= q.j
    }


    fn leftmost(&self, l: &[u32]) -> Result<Pair, SolveError> {
        let mut prs: [Pair; 15] = [SENTINEL; 15];
        let mut k = 0;
        for &u in l {
            for &v in l {
                if self.is_edge_pair(u, v) {
                    prs[k] = (u, v);
                    k += 1;
                }
            }
        }
        let prs = &prs[..k];
        let b = &self.b;
        prs.iter()
            .copied()
            .find(|p| prs.iter().all(|q| p.0 <= q.0 && b[p.1 as usize] <= b[q.1 as usize]))
            .ok_or_else(|| SolveError::Internal(format!("no leftmost crossing pair among {l:?}")))
    }
}

fn diagram_of(inst: &Instance) -> Result<Diagram, SolveError> {
    match &inst.model {
        Model::Permutation(m) => Ok(Diagram::new(m)),
        other => Err(SolveError::WrongModel { solver: "permutation", kind: other.kind().as_str() }),
    }
}

/// All crossing pairs including `00`, sorted by a linear extension of `≤_r`.
pub fn enumerate_crossing_pairs(model: &PermutationModel) -> Vec<CrossingPair> {
    Diagram::new(model).pairs()
}

/// `V_ij` as an ascending list of real vertices.
pub fn pair_vertices(model: &PermutationModel, p: CrossingPair) -> Vec<VertexId> {
    let d = Diagram::new(model);
    (1..=d.n).filter(|&v| d.b[v] <= d.b[p.i] && v <= p.j).collect()
}

/// Leftmost crossing pair among a vertex set.
pub fn leftmost_crossing_pair(model: &PermutationModel, vertices: &[VertexId]) -> Result<CrossingPair, SolveError> {
    let d = Diagram::new(model);
    let l: Vec<u32> = vertices.iter().map(|&v| v as u32).collect();
    if l.len() > 6 {
        return Err(SolveError::Internal("leftmost pair query on more than six vertices".into()));
    }
    let (i, j) = d.leftmost(&l)?;
    Ok(CrossingPair { i: i as usize, j: j as usize })
}

/// The five predecessor maps, each found by scanning every pair and keeping
/// the member that dominates the whole defining set.
#[derive(Debug, Clone)]
pub struct PairPredecessors {
    pub pairs: Vec<CrossingPair>,
    pub eqs: Vec<usize>,
    pub leq: Vec<usize>,
    pub lt: Vec<usize>,
    pub ll: Vec<usize>,
    /// `ltll[p][x]` for every vertex `x` outside `V_p`.
    pub ltll: Vec<Vec<Option<usize>>>,
}

fn dominating(d: &Diagram, pairs: &[CrossingPair], members: &[usize], what: &str) -> Result<usize, SolveError> {
    members
        .iter()
        .copied()
        .find(|&e| members.iter().all(|&f| d.le_r(pairs[f], pairs[e])))
        .ok_or_else(|| SolveError::Internal(format!("{what}: defining set has no dominating element")))
}

pub fn pair_predecessors(pairs: &[CrossingPair], model: &PermutationModel) -> Result<PairPredecessors, SolveError> {
    let d = Diagram::new(model);
    let np = pairs.len();
    let sentinel = pairs
        .iter()
        .position(|p| p.i == 0 && p.j == 0)
        .ok_or_else(|| SolveError::Internal("pair list lacks the sentinel".into()))?;
    let mut out = PairPredecessors {
        pairs: pairs.to_vec(),
        eqs: vec![sentinel; np],
        leq: vec![sentinel; np],
        lt: vec![sentinel; np],
        ll: vec![sentinel; np],
        ltll: vec![vec![None; d.n + 1]; np],
    };
    let adj = |u: usize, v: usize| d.adj(u as u32, v as u32);
    for (k, &p) in pairs.iter().enumerate() {
        if k == sentinel {
            continue;
        }
        let below: Vec<usize> = (0..np).filter(|&f| d.le_r(pairs[f], p)).collect();
        // strictly below in both coordinates; the literal "<_r" set holds the
        // incomparable ii and jj whenever i != j
        let strict: Vec<usize> = (0..np)
            .filter(|&f| d.b[pairs[f].i] < d.b[p.i] && pairs[f].j < p.j)
            .collect();
        let eqs: Vec<usize> = below.iter().copied().filter(|&f| pairs[f].j != p.j).collect();
        let leq: Vec<usize> = below.iter().copied().filter(|&f| pairs[f].i != p.i).collect();
        let ll: Vec<usize> = below
            .iter()
            .copied()
            .filter(|&f| {
                let q = pairs[f];
                q != p && !adj(q.i, p.i) && !adj(q.i, p.j) && !adj(q.j, p.i) && !adj(q.j, p.j)
            })
            .collect();
        out.eqs[k] = dominating(&d, pairs, &eqs, "eqs")?;
        out.leq[k] = dominating(&d, pairs, &leq, "leq")?;
        out.lt[k] = dominating(&d, pairs, &strict, "lt")?;
        out.ll[k] = dominating(&d, pairs, &ll, "ll")?;
        for x in 1..=d.n {
            if d.b[x] <= d.b[p.i] && x <= p.j {
                continue;
            }
            let set: Vec<usize> = strict
                .iter()
                .copied()
                .filter(|&f| !adj(pairs[f].i, x) && !adj(pairs[f].j, x))
                .collect();
            out.ltll[k][x] = Some(dominating(&d, pairs, &set, "ltll")?);
        }
    }
    Ok(out)
}

/// Component index of every vertex of `k` in `G[k]`, numbered from 0 in
/// order of first appearance.
fn components(d: &Diagram, k: &[u32]) -> Vec<usize> {
    let mut comp = vec![usize::MAX; k.len()];
    let mut next = 0;
    for a in 0..k.len() {
        if comp[a] != usize::MAX {
            continue;
        }
        comp[a] = next;
        let mut stack = vec![a];
        while let Some(u) = stack.pop() {
            for b in 0..k.len() {
                if comp[b] == usize::MAX && d.adj(k[u], k[b]) {
                    comp[b] = next;
                    stack.push(b);
                }
            }
        }
        next += 1;
    }
    comp
}

/// One subproblem. Contexts `x`, `z` are single vertices; `xy`, `zw` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PermState {
    A(Pair),
    Bxx(Pair, u32),
    Bxy(Pair, Pair),
    Cz(Pair, Pair, u32),
    Cw(Pair, Pair, Pair),
    /// A pair with an arbitrary non-empty context, by interned id. Used where
    /// the pair-based contexts above cannot hold every vertex that matters.
    Gen(Pair, u32),
}

/// Bits per vertex id in a packed key: six ids and a 3-bit kind fit in 128.
const KEY_BITS: u32 = 20;

/// Largest `n` the packed state keys can hold.
pub const PERM_MAX_N: usize = (1 << KEY_BITS) - 1;

/// Packed keys are highly structured, so the hash mixes every bit into the
/// low ones the table indexes by.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, x: u64) {
        let mut z = (self.0 ^ x).wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        self.0 = z ^ (z >> 31);
    }

    fn write_u128(&mut self, x: u128) {
        self.write_u64(x as u64);
        self.write_u64((x >> 64) as u64);
    }
}

impl PermState {
    fn key(&self) -> u128 {
        let (kind, v): (u128, [u32; 6]) = match *self {
            PermState::A(p) => (0, [p.0, p.1, 0, 0, 0, 0]),
            PermState::Bxx(p, x) => (1, [p.0, p.1, x, 0, 0, 0]),
            PermState::Bxy(p, q) => (2, [p.0, p.1, q.0, q.1, 0, 0]),
            PermState::Cz(p, q, z) => (3, [p.0, p.1, q.0, q.1, z, 0]),
            PermState::Cw(p, q, r) => (4, [p.0, p.1, q.0, q.1, r.0, r.1]),
            PermState::Gen(p, id) => (5, [p.0, p.1, id & 0xf_ffff, id >> KEY_BITS, 0, 0]),
        };
        v.iter().fold(kind, |k, &x| k << KEY_BITS | x as u128)
    }

    fn from_key(mut k: u128) -> PermState {
        let mut v = [0u32; 6];
        for slot in v.iter_mut().rev() {
            *slot = (k & ((1 << KEY_BITS) - 1)) as u32;
            k >>= KEY_BITS;
        }
        let p = (v[0], v[1]);
        match k {
            0 => PermState::A(p),
            1 => PermState::Bxx(p, v[2]),
            2 => PermState::Bxy(p, (v[2], v[3])),
            3 => PermState::Cz(p, (v[2], v[3]), v[4]),
            4 => PermState::Cw(p, (v[2], v[3]), (v[4], v[5])),
            _ => PermState::Gen(p, v[2] | v[3] << KEY_BITS),
        }
    }

    pub fn pair(&self) -> CrossingPair {
        let p = self.raw_pair();
        CrossingPair { i: p.0 as usize, j: p.1 as usize }
    }

    fn raw_pair(&self) -> Pair {
        match *self {
            PermState::A(p)
            | PermState::Bxx(p, _)
            | PermState::Bxy(p, _)
            | PermState::Cz(p, _, _)
            | PermState::Cw(p, _, _)
            | PermState::Gen(p, _) => p,
        }
    }
}

/// Interned contexts of [`PermState::Gen`] states.
#[derive(Debug, Clone, Default)]
struct Contexts {
    sets: Vec<Box<[u32]>>,
    ids: HashMap<Box<[u32]>, u32>,
}

#[derive(Debug, Clone, Copy)]
struct Alt {
    child: PermState,
    add: Weight,
    v: [u32; 2],
}

#[derive(Debug, Clone, Copy)]
struct Alts {
    len: usize,
    a: [Alt; 4],
}

impl Alts {
    fn new() -> Self {
        let z = Alt { child: PermState::A(SENTINEL), add: 0, v: [0, 0] };
        Alts { len: 0, a: [z; 4] }
    }

    fn push(&mut self, child: PermState, add: Weight, v: [u32; 2]) {
        self.a[self.len] = Alt { child, add, v };
        self.len += 1;
    }

    fn as_slice(&self) -> &[Alt] {
        &self.a[..self.len]
    }
}

/// Memoized DP over one permutation instance.
#[derive(Debug, Clone)]
pub struct PermDp {
    d: Diagram,
    in_s: Vec<bool>,
    w: Vec<Weight>,
    gbest: Vec<u32>,
    hbest: Vec<u32>,
    /// `scount[b * (n + 1) + t]`: S vertices with bottom `<= b` and top `<= t`.
    scount: Vec<u32>,
    memo: HashMap<u128, Weight, BuildHasherDefault<KeyHasher>>,
    contexts: RefCell<Contexts>,
}

impl PermDp {
    fn new(d: Diagram, in_s: Vec<bool>, w: Vec<Weight>) -> Self {
        let n1 = d.n + 1;
        let mut gbest = vec![0u32; n1 * n1];
        let mut hbest = vec![0u32; n1 * n1];
        for bmax in 0..n1 {
            let mut g = 0u32;
            for t in 1..n1 {
                if d.b[t] as usize <= bmax && d.b[t] > d.b[g as usize] {
                    g = t as u32;
                }
                gbest[bmax * n1 + t] = g;
            }
        }
        for t in 0..n1 {
            let mut h = 0u32;
            for bmax in 1..n1 {
                let v = d.vb[bmax];
                if v as usize <= t && v > h {
                    h = v;
                }
                hbest[bmax * n1 + t] = h;
            }
        }
        let mut scount = vec![0u32; n1 * n1];
        for bm in 1..n1 {
            for t in 1..n1 {
                let here = (d.b[t] as usize == bm && in_s[t]) as u32;
                scount[bm * n1 + t] =
                    scount[bm * n1 + t - 1] + scount[(bm - 1) * n1 + t] - scount[(bm - 1) * n1 + t - 1] + here;
            }
        }
        PermDp { d, in_s, w, gbest, hbest, scount, memo: HashMap::default(), contexts: RefCell::default() }
    }

    pub fn n(&self) -> usize {
        self.d.n
    }

    /// r-maximum pair of the box `{v : b(v) ≤ bmax, t(v) ≤ tmax}`.
    #[inline]
    fn boxed(&self, bmax: u32, tmax: u32) -> Pair {
        let k = bmax as usize * (self.d.n + 1) + tmax as usize;
        (self.gbest[k], self.hbest[k])
    }

    #[inline]
    fn bb(&self, v: u32) -> u32 {
        self.d.b[v as usize]
    }

    fn eqs(&self, (i, j): Pair) -> Pair {
        self.boxed(self.bb(i), j - 1)
    }

    fn leq(&self, (i, j): Pair) -> Pair {
        self.boxed(self.bb(i) - 1, j)
    }

    fn lt(&self, (i, j): Pair) -> Pair {
        self.boxed(self.bb(i) - 1, j - 1)
    }

    fn ll(&self, (i, j): Pair) -> Pair {
        self.boxed(self.bb(i).min(self.bb(j)) - 1, i.min(j) - 1)
    }

    fn ltll(&self, (_, j): Pair, i: u32, x: u32) -> Pair {
        self.boxed(self.bb(i).min(self.bb(x)) - 1, j.min(x) - 1)
    }

    /// Predecessor pairs of `p` as `(⪕p, ⩽p, <p, ≪p)`.
    pub fn predecessors(&self, p: CrossingPair) -> [CrossingPair; 4] {
        let q = (p.i as u32, p.j as u32);
        let c = |x: Pair| CrossingPair { i: x.0 as usize, j: x.1 as usize };
        [c(self.eqs(q)), c(self.leq(q)), c(self.lt(q)), c(self.ll(q))]
    }

    /// `<p≪xx` for a vertex `x` outside `V_p`.
    pub fn predecessor_ltll(&self, p: CrossingPair, x: VertexId) -> CrossingPair {
        let q = self.ltll((p.i as u32, p.j as u32), p.i as u32, x as u32);
        CrossingPair { i: q.0 as usize, j: q.1 as usize }
    }

    fn rest_of(l: &[u32], xp: Pair, out: &mut [u32; 6]) -> usize {
        let mut k = 0;
        for &v in l {
            if v != xp.0 && v != xp.1 {
                out[k] = v;
                k += 1;
            }
        }
        k
    }

    /// Context vertices that must join every solution of this state.
    pub fn context(&self, st: &PermState) -> Vec<VertexId> {
        let mut c: Vec<u32> = match *st {
            PermState::A(_) => vec![],
            PermState::Bxx(_, x) => vec![x],
            PermState::Bxy(_, (x, y)) => vec![x, y],
            PermState::Cz(_, (x, y), z) => vec![x, y, z],
            PermState::Cw(_, (x, y), (z, w)) => vec![x, y, z, w],
            PermState::Gen(_, id) => self.contexts.borrow().sets[id as usize].to_vec(),
        };
        c.sort_unstable();
        c.dedup();
        c.into_iter().map(|v| v as usize).collect()
    }

    fn intern(&self, k: &[u32]) -> u32 {
        let mut cx = self.contexts.borrow_mut();
        if let Some(&id) = cx.ids.get(k) {
            return id;
        }
        let id = cx.sets.len() as u32;
        cx.sets.push(k.into());
        cx.ids.insert(k.into(), id);
        id
    }

    /// No S vertex of `k` lies on a cycle of `G[k]`.
    fn context_ok(&self, k: &[u32]) -> bool {
        let d = &self.d;
        k.iter().filter(|&&s| self.in_s[s as usize]).all(|&s| {
            let rest: Vec<u32> = k.iter().copied().filter(|&v| v != s).collect();
            let comp = components(d, &rest);
            let mut seen = Vec::new();
            rest.iter().zip(&comp).filter(|(&v, _)| d.adj(s, v)).all(|(_, &c)| {
                let fresh = !seen.contains(&c);
                seen.push(c);
                fresh
            })
        })
    }

    /// Shrinks context `k` to an equivalent one for the box `V_q`: every
    /// `X ⊆ V_q` makes `X ∪ k` an S-forest exactly when it does so with the
    /// result.
    ///
    /// A context vertex `c` outside the box sees a threshold set in it:
    /// `{v : b(v) > b(c)}` when `c` lies right of the box on top, otherwise
    /// `{v : t(v) > t(c)}`. Vertices seeing nothing and touching at most one
    /// other context vertex lie on no cycle and go. A component of `G[k]`
    /// seeing nothing goes. A component free of S behaves like one contracted
    /// vertex whose multiplicity towards `v` is `|N(v) ∩ Q|` capped at 2,
    /// which only the two lowest thresholds of each kind determine; the other
    /// members are dropped while the component stays connected.
    fn reduce(&self, k: &mut Vec<u32>, q: Pair) {
        let d = &self.d;
        let s = |v: u32| self.in_s[v as usize];
        let (bmax, tmax) = (d.b[q.0 as usize], q.1);
        if !k.iter().any(|&c| s(c)) && self.scount[bmax as usize * (d.n + 1) + tmax as usize] == 0 {
            k.clear();
            return;
        }
        let live = |c: u32| if c > tmax { bmax > d.b[c as usize] } else { tmax > c };
        loop {
            let before = k.len();
            let snap = k.clone();
            k.retain(|&c| live(c) || snap.iter().filter(|&&u| d.adj(u, c)).count() >= 2);
            if k.len() == before {
                break;
            }
        }
        let comp = components(d, k);
        let mut out = Vec::with_capacity(k.len());
        for c in 0..k.len() {
            let mut q: Vec<u32> = k.iter().zip(&comp).filter(|(_, &x)| x == c).map(|(&v, _)| v).collect();
            if q.is_empty() || !q.iter().any(|&v| live(v)) {
                continue;
            }
            if !q.iter().any(|&v| s(v)) {
                let mut by_b: Vec<u32> = q.iter().copied().filter(|&v| v > tmax && live(v)).collect();
                by_b.sort_unstable_by_key(|&v| d.b[v as usize]);
                let mut by_t: Vec<u32> = q.iter().copied().filter(|&v| v <= tmax && live(v)).collect();
                by_t.sort_unstable();
                let reps: Vec<u32> = by_b.iter().take(2).chain(by_t.iter().take(2)).copied().collect();
                let mut idx = q.len();
                while idx > 0 {
                    idx -= 1;
                    let v = q[idx];
                    if reps.contains(&v) {
                        continue;
                    }
                    let trial: Vec<u32> = q.iter().copied().filter(|&u| u != v).collect();
                    if components(d, &trial).iter().all(|&x| x == 0) {
                        q = trial;
                    }
                }
            }
            out.extend(q);
        }
        out.sort_unstable();
        *k = out;
    }

    /// Child for keeping both ends of `p` when the leftmost-pair child would
    /// be `Cw(q, x'y', z'w')` over the vertex set `l`. Falls back to a
    /// general context when that child would forget a vertex that matters.
    fn keep_pairs(&self, q: Pair, l: &[u32], check: bool) -> PermState {
        let d = &self.d;
        let mut rest = [0u32; 6];
        if let Ok(xp) = d.leftmost(l) {
            let k = Self::rest_of(l, xp, &mut rest);
            if let Ok(zp) = d.leftmost(&rest[..k]) {
                if !check {
                    return PermState::Cw(q, xp, zp);
                }
                let mut red = l.to_vec();
                self.reduce(&mut red, q);
                let kept = [xp.0, xp.1, zp.0, zp.1];
                if red.iter().all(|v| kept.contains(v)) {
                    return PermState::Cw(q, xp, zp);
                }
                return self.general(q, red);
            }
        }
        let mut red = l.to_vec();
        self.reduce(&mut red, q);
        self.general(q, red)
    }

    /// Contexts of at most one vertex fit the `A` and `Bxx` states exactly.
    fn general(&self, q: Pair, k: Vec<u32>) -> PermState {
        match k[..] {
            [] => PermState::A(q),
            [x] => PermState::Bxx(q, x),
            _ => PermState::Gen(q, self.intern(&k)),
        }
    }

    fn expand(&self, st: PermState) -> Result<Alts, SolveError> {
        let d = &self.d;
        let adj = |u: u32, v: u32| d.adj(u, v);
        let s = |v: u32| self.in_s[v as usize];
        let wt = |v: u32| self.w[v as usize];
        let mut out = Alts::new();
        let p = st.raw_pair();
        let (i, j) = p;
        let wij = wt(i) + wt(j);
        let both = [i, j];
        // self-pair steps skip i when it is forced out by S
        let own = if s(i) { (0, [0, 0]) } else { (wt(i), [i, 0]) };
        let mut rest = [0u32; 6];
        match st {
            PermState::A(_) => {
                if i == j {
                    out.push(PermState::A(self.lt(p)), wt(i), [i, 0]);
                } else if s(i) || s(j) {
                    out.push(PermState::A(self.eqs(p)), 0, [0, 0]);
                    out.push(PermState::A(self.leq(p)), 0, [0, 0]);
                    out.push(PermState::Bxx(self.ll((j, j)), i), wij, both);
                    out.push(PermState::Bxx(self.ll((i, i)), j), wij, both);
                } else {
                    out.push(PermState::A(self.eqs(p)), 0, [0, 0]);
                    out.push(PermState::A(self.leq(p)), 0, [0, 0]);
                    out.push(PermState::Bxy(self.lt(p), (i, j)), wij, both);
                }
            }
            PermState::Bxx(_, x) => {
                if i == j {
                    if !adj(i, x) {
                        out.push(PermState::A(p), 0, [0, 0]);
                    } else {
                        out.push(PermState::Bxx(self.lt(p), x), wt(i), [i, 0]);
                    }
                } else {
                    let (ix, jx) = (adj(i, x), adj(j, x));
                    let (e, l) = (self.eqs(p), self.leq(p));
                    if !ix && !jx {
                        out.push(PermState::A(p), 0, [0, 0]);
                    } else {
                        out.push(PermState::Bxx(e, x), 0, [0, 0]);
                        out.push(PermState::Bxx(l, x), 0, [0, 0]);
                        if ix && jx {
                            if !(s(i) || s(j) || s(x)) {
                                let xp = d.leftmost(&[i, j, x])?;
                                Self::rest_of(&[i, j, x], xp, &mut rest);
                                out.push(PermState::Cz(self.lt(p), xp, rest[0]), wij, both);
                            }
                        } else if s(i) || s(j) {
                            if ix {
                                out.push(PermState::Bxx(self.ll((j, j)), i), wij, both);
                                out.push(PermState::Bxx(self.ll((i, x)), j), wij, both);
                            } else {
                                out.push(PermState::Bxx(self.ll((x, j)), i), wij, both);
                                out.push(PermState::Bxx(self.ll((i, i)), j), wij, both);
                            }
                        } else if s(x) {
                            out.push(PermState::Bxy(self.ltll(p, i, x), (i, j)), wij, both);
                        } else {
                            let xp = d.leftmost(&[i, j, x])?;
                            Self::rest_of(&[i, j, x], xp, &mut rest);
                            out.push(PermState::Cz(self.lt(p), xp, rest[0]), wij, both);
                        }
                    }
                }
            }
            PermState::Bxy(_, xy) => {
                let (x, y) = xy;
                if !adj(i, y) {
                    out.push(PermState::Bxx(p, x), 0, [0, 0]);
                } else if !adj(if i == j { i } else { j }, x) {
                    out.push(PermState::Bxx(p, y), 0, [0, 0]);
                } else if i == j {
                    out.push(PermState::Bxy(self.lt(p), xy), own.0, own.1);
                } else {
                    out.push(PermState::Bxy(self.eqs(p), xy), 0, [0, 0]);
                    out.push(PermState::Bxy(self.leq(p), xy), 0, [0, 0]);
                    if !(s(i) || s(j)) {
                        out.push(self.keep_pairs(self.lt(p), &[i, j, x, y], false), wij, both);
                    }
                }
            }
            PermState::Cz(_, xy, z) => {
                let (x, y) = xy;
                if i == j {
                    if !adj(i, z) {
                        out.push(PermState::Bxy(p, xy), 0, [0, 0]);
                    } else {
                        out.push(PermState::Cz(self.lt(p), xy, z), own.0, own.1);
                    }
                } else if !adj(i, z) && !adj(j, z) {
                    out.push(PermState::Bxy(p, xy), 0, [0, 0]);
                } else {
                    out.push(PermState::Cz(self.eqs(p), xy, z), 0, [0, 0]);
                    out.push(PermState::Cz(self.leq(p), xy, z), 0, [0, 0]);
                    if s(i) || s(j) {
                        // exactly one endpoint in S and that endpoint misses all
                        // of x, y, z: it hangs off the other endpoint as a leaf
                        if s(i) && !s(j) && !adj(i, z) && !adj(i, x) && !adj(i, y) {
                            out.push(PermState::Bxx(self.ll((x, j)), i), wij, both);
                            out.push(PermState::Bxx(self.ll((i, i)), j), wij, both);
                        }
                        if s(j) && !s(i) && !adj(j, z) && !adj(j, x) && !adj(j, y) {
                            out.push(PermState::Bxx(self.ll((j, j)), i), wij, both);
                            out.push(PermState::Bxx(self.ll((i, y)), j), wij, both);
                        }
                    } else {
                        out.push(self.keep_pairs(self.lt(p), &[i, j, x, y, z], true), wij, both);
                    }
                }
            }
            PermState::Cw(_, xy, zw) => {
                let (z, w) = zw;
                if !adj(i, w) {
                    out.push(PermState::Cz(p, xy, z), 0, [0, 0]);
                } else if !adj(if i == j { i } else { j }, z) {
                    out.push(PermState::Cz(p, xy, w), 0, [0, 0]);
                } else if i == j {
                    out.push(PermState::Cw(self.lt(p), xy, zw), own.0, own.1);
                } else {
                    out.push(PermState::Cw(self.eqs(p), xy, zw), 0, [0, 0]);
                    out.push(PermState::Cw(self.leq(p), xy, zw), 0, [0, 0]);
                    if !(s(i) || s(j)) {
                        let (x, y) = xy;
                        out.push(self.keep_pairs(self.lt(p), &[i, j, x, y, z, w], true), wij, both);
                    }
                }
            }
            PermState::Gen(_, id) => {
                let k = self.contexts.borrow().sets[id as usize].to_vec();
                let mut child = |q: Pair, extra: &[u32], add: Weight, v: [u32; 2]| {
                    let mut c = k.clone();
                    c.extend_from_slice(extra);
                    if !extra.is_empty() && !self.context_ok(&c) {
                        return;
                    }
                    self.reduce(&mut c, q);
                    out.push(self.general(q, c), add, v);
                };
                if i == j {
                    child(self.lt(p), &[], 0, [0, 0]);
                    child(self.lt(p), &[i], wt(i), [i, 0]);
                } else {
                    child(self.eqs(p), &[], 0, [0, 0]);
                    child(self.leq(p), &[], 0, [0, 0]);
                    child(self.lt(p), &[i, j], wij, both);
                }
            }
        }
        Ok(out)
    }

    #[inline]
    fn known(&self, st: &PermState) -> Option<Weight> {
        if st.raw_pair() == SENTINEL {
            Some(0)
        } else {
            self.memo.get(&st.key()).copied()
        }
    }

    /// Index of the winning alternative: the first one attaining the max.
    fn best_alt(&self, alts: &Alts) -> Option<(Weight, usize)> {
        let mut best: Option<(Weight, usize)> = None;
        for (k, a) in alts.as_slice().iter().enumerate() {
            let v = self.known(&a.child)? + a.add;
            if best.is_none_or(|b| v > b.0) {
                best = Some((v, k));
            }
        }
        best
    }

    /// Optimal weight of a state, evaluating whatever it depends on.
    pub fn value(&mut self, root: PermState) -> Result<Weight, SolveError> {
        if let Some(v) = self.known(&root) {
            return Ok(v);
        }
        let mut stack = vec![root];
        while let Some(&st) = stack.last() {
            if self.known(&st).is_some() {
                stack.pop();
                continue;
            }
            let alts = self.expand(st)?;
            let mut missing = false;
            for a in alts.as_slice() {
                if self.known(&a.child).is_none() {
                    stack.push(a.child);
                    missing = true;
                }
            }
            if missing {
                continue;
            }
            let (v, _) = self.best_alt(&alts).expect("children evaluated");
            self.memo.insert(st.key(), v);
            stack.pop();
        }
        Ok(self.known(&root).unwrap())
    }

    /// Vertices of the optimal set stored for an evaluated state, ascending.
    pub fn trace(&self, root: PermState) -> Result<Vec<VertexId>, SolveError> {
        let mut out = Vec::new();
        let mut st = root;
        while st.raw_pair() != SENTINEL {
            let alts = self.expand(st)?;
            let (_, k) = self
                .best_alt(&alts)
                .filter(|_| self.known(&st).is_some())
                .ok_or_else(|| SolveError::Internal(format!("trace reached unevaluated state {st:?}")))?;
            let alt = alts.a[k];
            out.extend(alt.v.iter().filter(|&&v| v != 0).map(|&v| v as usize));
            st = alt.child;
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Every materialized state with its value.
    pub fn states(&self) -> impl Iterator<Item = (PermState, Weight)> + '_ {
        self.memo.iter().map(|(k, v)| (PermState::from_key(*k), *v))
    }

    pub fn state_count(&self) -> usize {
        self.memo.len()
    }

    /// `A` at the pair of the last top vertex and the last bottom vertex.
    pub fn final_state(&self) -> PermState {
        let n = self.d.n as u32;
        if n == 0 {
            PermState::A(SENTINEL)
        } else {
            PermState::A((self.d.vb[n as usize], n))
        }
    }
}

fn build(inst: &Instance) -> Result<PermDp, SolveError> {
    let d = diagram_of(inst)?;
    if d.n > PERM_MAX_N {
        return Err(SolveError::TooLarge(format!("permutation DP supports n <= {PERM_MAX_N}, got {}", d.n)));
    }
    Ok(PermDp::new(d, inst.s_mask(), inst.weight_vec()))
}

/// Builds the DP and evaluates every state reachable from the final pair.
pub fn compute_permutation_dp(inst: &Instance) -> Result<PermDp, SolveError> {
    let mut dp = build(inst)?;
    let root = dp.final_state();
    dp.value(root)?;
    Ok(dp)
}

pub fn solve_permutation(inst: &Instance) -> Result<Solution, SolveError> {
    let dp = compute_permutation_dp(inst)?;
    let keep = crate::graph::vertex_mask(inst.n(), dp.trace(dp.final_state())?);
    Ok(Solution::from_retained(inst, &keep, SolverTag::Permutation))
}
