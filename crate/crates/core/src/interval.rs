//! Cubic dynamic program for SFVS on interval graphs.
//!
//! Vertices are labelled `1..=n` by ascending right endpoint, with a sentinel
//! label 0 sitting left of everything. Three families of subproblems are kept:
//!
//! * `A(i)`: heaviest S-forest inside `V_i = {1..=i}`;
//! * `B(i, x)` for `x > i`: heaviest `X ⊆ V_i` with `X ∪ {x}` an S-forest;
//! * `C(i, x, y)` for adjacent `x <_l y`, both outside `V_i` and outside S:
//!   heaviest `X ⊆ V_i` with `X ∪ {x, y}` an S-forest.
//!
//! `B` is a dense `(n+1)²` table. `C(i, x, y)` equals `B(i, x)` whenever `y`
//! misses interval `i`, so only pairs of forward neighbours of `i` are stored.
//! Those all contain the point `r(i)`, hence are pairwise adjacent, and are
//! kept as a triangle in left-endpoint order. Value layers roll (layer `i`
//! only reads layer `i - 1`); the one-bit choice tags of every layer stay for
//! the traceback.

use crate::error::SolveError;
use crate::model::{IntervalLabels, Model, Weight};
use crate::solution::{Solution, SolverTag};
use crate::Instance;

const NONE: u32 = u32::MAX;

/// `lt[i] = <i` and `ll[i] = ≪i` (the nearest label to the left of `i` that
/// is not adjacent to it); slot 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPredecessors {
    pub lt: Vec<usize>,
    pub ll: Vec<usize>,
}

pub fn interval_predecessors(lab: &IntervalLabels) -> IntervalPredecessors {
    let n = lab.n();
    let mut lt = vec![0; n + 1];
    let mut ll = vec![0; n + 1];
    for i in 1..=n {
        lt[i] = i - 1;
        // labels are sorted by r, so the non-neighbours to the left form a prefix
        ll[i] = lab.r[1..i].partition_point(|&r| r < lab.l[i]);
    }
    IntervalPredecessors { lt, ll }
}

#[derive(Debug, Clone, Default)]
struct Layer {
    /// Non-S labels `x > i` with `l(x) < r(i)`, ascending by `l`.
    verts: Vec<u32>,
    take: Vec<u64>,
    vals: Vec<u64>,
}

#[inline]
fn tri(p: usize, q: usize) -> usize {
    debug_assert!(p < q);
    q * (q - 1) / 2 + p
}

#[inline]
fn bit(bits: &[u64], k: usize) -> bool {
    bits[k >> 6] >> (k & 63) & 1 == 1
}

#[inline]
fn set_bit(bits: &mut [u64], k: usize) {
    bits[k >> 6] |= 1 << (k & 63);
}

/// A subproblem of the interval DP, in label coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalState {
    A(usize),
    B(usize, usize),
    C(usize, usize, usize),
}

/// Filled DP tables. Values of `C` layers are only all available when the
/// tables were built with retention (see [`compute_interval_dp`]).
#[derive(Debug, Clone)]
pub struct IntervalDpTables {
    pub labels: IntervalLabels,
    pub preds: IntervalPredecessors,
    in_s: Vec<bool>,
    w: Vec<Weight>,
    a: Vec<Weight>,
    a_take: Vec<bool>,
    b: Vec<Weight>,
    b_take: Vec<u64>,
    layers: Vec<Layer>,
}

impl IntervalDpTables {
    /// Runs the DP. `in_s` and `w` are indexed by label (slot 0 = sentinel).
    pub(crate) fn run(labels: IntervalLabels, in_s: Vec<bool>, w: Vec<Weight>, retain: bool) -> Self {
        let n = labels.n();
        let n1 = n + 1;
        let preds = interval_predecessors(&labels);
        let (l, r) = (&labels.l, &labels.r);
        let ll = &preds.ll;

        let mut a = vec![0; n1];
        let mut a_take = vec![false; n1];
        let mut b = vec![0; n1 * n1];
        let mut b_take = vec![0u64; (n1 * n1).div_ceil(64)];
        let mut layers: Vec<Layer> = vec![Layer::default(); n1];
        let mut pos_prev = vec![NONE; n1];

        for i in 1..=n {
            let alt = b[(i - 1) * n1 + i] + w[i];
            if alt > a[i - 1] {
                a[i] = alt;
                a_take[i] = true;
            } else {
                a[i] = a[i - 1];
            }

            let prev_vals = std::mem::take(&mut layers[i - 1].vals);
            // C(i-1, x, y) for x <_l y, both after i-1, adjacent, outside S
            let c_prev = |b: &[Weight], x: usize, y: usize| -> Weight {
                if i == 1 {
                    return 0;
                }
                let py = pos_prev[y];
                if py == NONE {
                    b[(i - 1) * n1 + x]
                } else {
                    let px = pos_prev[x];
                    debug_assert!(px != NONE && px < py);
                    prev_vals[tri(px as usize, py as usize)]
                }
            };

            for x in i + 1..=n {
                let idx = i * n1 + x;
                if l[x] > r[i] {
                    b[idx] = a[i];
                    continue;
                }
                let (xp, yp) = if l[i] < l[x] { (i, x) } else { (x, i) };
                let base = if in_s[i] || in_s[x] { b[ll[yp] * n1 + xp] } else { c_prev(&b, xp, yp) };
                let alt2 = base + w[i];
                let alt1 = b[(i - 1) * n1 + x];
                if alt2 > alt1 {
                    b[idx] = alt2;
                    set_bit(&mut b_take, idx);
                } else {
                    b[idx] = alt1;
                }
            }

            let mut verts: Vec<u32> = (i + 1..=n).filter(|&x| !in_s[x] && l[x] < r[i]).map(|x| x as u32).collect();
            verts.sort_unstable_by_key(|&x| l[x as usize]);
            let d = verts.len();
            let size = d * d.saturating_sub(1) / 2;
            let mut vals = vec![0; size];
            let mut take = vec![0u64; size.div_ceil(64)];
            for q in 1..d {
                let y = verts[q] as usize;
                for p in 0..q {
                    let x = verts[p] as usize;
                    let k = tri(p, q);
                    let alt1 = c_prev(&b, x, y);
                    if in_s[i] {
                        vals[k] = alt1;
                        continue;
                    }
                    let (t0, t1) = if l[i] < l[x] {
                        (i, x)
                    } else if l[i] < l[y] {
                        (x, i)
                    } else {
                        (x, y)
                    };
                    let alt2 = c_prev(&b, t0, t1) + w[i];
                    if alt2 > alt1 {
                        vals[k] = alt2;
                        set_bit(&mut take, k);
                    } else {
                        vals[k] = alt1;
                    }
                }
            }

            if retain {
                layers[i - 1].vals = prev_vals;
            }
            for &v in &layers[i - 1].verts {
                pos_prev[v as usize] = NONE;
            }
            for (k, &v) in verts.iter().enumerate() {
                pos_prev[v as usize] = k as u32;
            }
            layers[i] = Layer { verts, take, vals };
        }

        IntervalDpTables {
            labels,
            preds,
            in_s,
            w,
            a,
            a_take,
            b,
            b_take,
            layers,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.n()
    }

    fn pos(&self, i: usize, x: usize) -> Option<usize> {
        let lay = &self.layers[i];
        let l = &self.labels.l;
        lay.verts
            .binary_search_by_key(&l[x], |&v| l[v as usize])
            .ok()
            .filter(|&k| lay.verts[k] as usize == x)
    }

    fn forward_adjacent(&self, i: usize, x: usize) -> bool {
        i != 0 && self.labels.l[x] < self.labels.r[i]
    }

    fn c_eligible(&self, i: usize, x: usize, y: usize) -> bool {
        let l = &self.labels.l;
        x > i
            && y > i
            && x <= self.n()
            && y <= self.n()
            && !self.in_s[x]
            && !self.in_s[y]
            && l[x] < l[y]
            && self.labels.adjacent(x, y)
    }

    pub fn a_value(&self, i: usize) -> Weight {
        self.a[i]
    }

    /// `B(i, x)`; requires `i < x`.
    pub fn b_value(&self, i: usize, x: usize) -> Weight {
        assert!(i < x && x <= self.n(), "B({i}, {x}) is not a state");
        self.b[i * (self.n() + 1) + x]
    }

    /// `C(i, x, y)`, or `None` when the context is ineligible or the layer's
    /// values were not retained.
    pub fn c_value(&self, i: usize, x: usize, y: usize) -> Option<Weight> {
        if !self.c_eligible(i, x, y) {
            return None;
        }
        if i == 0 {
            return Some(0);
        }
        if !self.forward_adjacent(i, y) {
            return Some(self.b_value(i, x));
        }
        let lay = &self.layers[i];
        let (px, py) = (self.pos(i, x)?, self.pos(i, y)?);
        lay.vals.get(tri(px, py)).copied()
    }

    /// Every stored `C` context `(i, x, y)`.
    pub fn c_states(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, lay) in self.layers.iter().enumerate().skip(1) {
            for q in 1..lay.verts.len() {
                for p in 0..q {
                    out.push((i, lay.verts[p] as usize, lay.verts[q] as usize));
                }
            }
        }
        out
    }

    fn lm_pair(&self, a: usize, b: usize) -> (usize, usize) {
        if self.labels.l[a] < self.labels.l[b] {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Labels of an optimal set for the given state, ascending.
    pub fn trace(&self, state: IntervalState) -> Vec<usize> {
        let n1 = self.n() + 1;
        let l = &self.labels.l;
        let mut out = Vec::new();
        let mut st = state;
        loop {
            st = match st {
                IntervalState::A(0) | IntervalState::B(0, _) | IntervalState::C(0, _, _) => break,
                IntervalState::A(i) => {
                    if self.a_take[i] {
                        out.push(i);
                        IntervalState::B(i - 1, i)
                    } else {
                        IntervalState::A(i - 1)
                    }
                }
                IntervalState::B(i, x) => {
                    if !self.forward_adjacent(i, x) {
                        IntervalState::A(i)
                    } else if bit(&self.b_take, i * n1 + x) {
                        out.push(i);
                        let (xp, yp) = self.lm_pair(i, x);
                        if self.in_s[i] || self.in_s[x] {
                            IntervalState::B(self.preds.ll[yp], xp)
                        } else {
                            IntervalState::C(i - 1, xp, yp)
                        }
                    } else {
                        IntervalState::B(i - 1, x)
                    }
                }
                IntervalState::C(i, x, y) => {
                    if !self.forward_adjacent(i, y) {
                        IntervalState::B(i, x)
                    } else if self.in_s[i] {
                        IntervalState::C(i - 1, x, y)
                    } else {
                        let k = tri(self.pos(i, x).unwrap(), self.pos(i, y).unwrap());
                        if bit(&self.layers[i].take, k) {
                            out.push(i);
                            let (t0, t1) = if l[i] < l[x] {
                                (i, x)
                            } else if l[i] < l[y] {
                                (x, i)
                            } else {
                                (x, y)
                            };
                            IntervalState::C(i - 1, t0, t1)
                        } else {
                            IntervalState::C(i - 1, x, y)
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Total label weight of a traced set.
    pub fn weight_of(&self, labels: &[usize]) -> Weight {
        labels.iter().map(|&v| self.w[v]).sum()
    }
}

fn labels_for(inst: &Instance) -> Result<IntervalLabels, SolveError> {
    match &inst.model {
        Model::Interval(m) => Ok(m.labels()?),
        other => Err(SolveError::WrongModel { solver: "interval", kind: other.kind().as_str() }),
    }
}

fn build(inst: &Instance, retain: bool) -> Result<IntervalDpTables, SolveError> {
    let labels = labels_for(inst)?;
    let in_s_v = inst.s_mask();
    let in_s = labels.vertex.iter().map(|&v| v != 0 && in_s_v[v]).collect();
    let w = labels.vertex.iter().map(|&v| if v == 0 { 0 } else { inst.weight(v) }).collect();
    Ok(IntervalDpTables::run(labels, in_s, w, retain))
}

/// Fills all tables and keeps every `C` layer's values (memory grows with
/// the sum of squared forward degrees; meant for inspection and tests).
pub fn compute_interval_dp(inst: &Instance) -> Result<IntervalDpTables, SolveError> {
    build(inst, true)
}

pub fn solve_interval(inst: &Instance) -> Result<Solution, SolveError> {
    let dp = build(inst, false)?;
    let n = inst.n();
    let mut keep = vec![false; n + 1];
    for lab in dp.trace(IntervalState::A(n)) {
        keep[dp.labels.vertex[lab]] = true;
    }
    Ok(Solution::from_retained(inst, &keep, SolverTag::Interval))
}

/// Solves a bare list of closed segments (ties allowed: equal coordinates
/// touch). Returns the retained weight and a per-segment keep flag.
pub(crate) fn solve_segments(segs: &[(i64, i64)], in_s: &[bool], w: &[Weight]) -> (Weight, Vec<bool>) {
    let k = segs.len();
    // starts before ends at equal coordinates so touching segments overlap
    let mut ev: Vec<(i64, u8, usize)> = Vec::with_capacity(2 * k);
    for (t, &(a, b)) in segs.iter().enumerate() {
        debug_assert!(a <= b);
        ev.push((a, 0, t));
        ev.push((b, 1, t));
    }
    ev.sort_unstable();
    let mut ranked = vec![(0i64, 0i64); k];
    for (rank, &(_, kind, t)) in ev.iter().enumerate() {
        if kind == 0 {
            ranked[t].0 = rank as i64 + 1;
        } else {
            ranked[t].1 = rank as i64 + 1;
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_unstable_by_key(|&t| ranked[t].1);
    let mut labels = IntervalLabels { l: vec![-1], r: vec![0], vertex: vec![0] };
    let mut ls = vec![false];
    let mut lw = vec![0];
    for &t in &order {
        labels.l.push(ranked[t].0);
        labels.r.push(ranked[t].1);
        labels.vertex.push(t + 1);
        ls.push(in_s[t]);
        lw.push(w[t]);
    }
    let dp = IntervalDpTables::run(labels, ls, lw, false);
    let mut keep = vec![false; k];
    for lab in dp.trace(IntervalState::A(k)) {
        keep[dp.labels.vertex[lab] - 1] = true;
    }
    (dp.a_value(k), keep)
}
