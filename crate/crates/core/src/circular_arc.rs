//! SFVS on circular-arc graphs by reduction to interval subproblems.
//!
//! Points are `1..=2n` clockwise and gap `g` sits between point `g` and
//! point `g % 2n + 1`. An arc crosses gap `g` when it contains both
//! neighbouring points. A set of arcs with a gap nobody crosses is an
//! interval model once the circle is cut there.
//!
//! Each connected component is solved on its own. A component with a free
//! gap goes straight to the interval DP. Otherwise several candidate
//! families are produced, each validated against the original graph, and the
//! heaviest valid one wins (ties to the first produced):
//!
//! 1. for every gap, the arcs not crossing it, interval-solved;
//! 2. with `N_S` the non-S vertices without an S-neighbour and `R` the rest:
//!    for every point `j` where exactly two adjacent arcs `u, v` of `R` meet,
//!    cut `R` at `j` and interval-solve, then add back `N_S` with and
//!    without `{u, v}`;
//! 3. for every adjacent pair `u, v` touching S whose union covers the
//!    circle, keep both and solve each side that avoids one of them;
//! 4. a chain family over S-units (single S vertices, optionally with one
//!    non-S companion, and adjacent S-pairs) arranged around the circle.

use crate::error::SolveError;
use crate::graph::{is_s_forest, vertex_mask, Graph};
use crate::interval::solve_segments;
use crate::model::{arc_contains, CircularArcModel, IntervalModel, Model, VertexId, Weight};
use crate::solution::{Solution, SolverTag};
use crate::Instance;

/// `sets[p]` lists the arcs containing point `p` (slot 0 unused).
///
/// Every point is some arc's endpoint, so points alone never show a hole;
/// coverage is decided on gaps instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCover {
    pub sets: Vec<Vec<VertexId>>,
    /// No gap is free.
    pub covered: bool,
    pub free_gap: Option<usize>,
}

pub fn point_arc_sets(model: &CircularArcModel) -> PointCover {
    let m = 2 * model.arcs.len();
    let mut sets = vec![Vec::new(); m + 1];
    for (k, &(a, b)) in model.arcs.iter().enumerate() {
        let mut p = a;
        loop {
            sets[p].push(k + 1);
            if p == b {
                break;
            }
            p = p % m + 1;
        }
    }
    for s in &mut sets {
        s.sort_unstable();
    }
    let free_gap = free_gap(model);
    PointCover { sets, covered: free_gap.is_none(), free_gap }
}

#[inline]
fn crosses(arc: (usize, usize), g: usize) -> bool {
    arc_contains(arc.0, arc.1, g) && g != arc.1
}

/// First gap not crossed by any arc of `verts`.
fn free_gap_of(arcs: &[(usize, usize)], verts: &[VertexId]) -> Option<usize> {
    let m = 2 * arcs.len();
    (1..=m).find(|&g| verts.iter().all(|&v| !crosses(arcs[v - 1], g)))
}

/// First gap crossed by no arc, if any.
pub fn free_gap(model: &CircularArcModel) -> Option<usize> {
    let all: Vec<VertexId> = (1..=model.arcs.len()).collect();
    free_gap_of(&model.arcs, &all)
}

/// Segments of `verts` after cutting at a gap none of them crosses.
fn gap_segments(arcs: &[(usize, usize)], verts: &[VertexId], g: usize) -> Vec<(i64, i64)> {
    let m = 2 * arcs.len() as i64;
    let rel = |p: usize| (p as i64 - g as i64 - 1).rem_euclid(m);
    verts.iter().map(|&v| (rel(arcs[v - 1].0), rel(arcs[v - 1].1))).collect()
}

/// Segments of `verts` after cutting at point `j`, in doubled coordinates.
/// Arcs through `j` are truncated: the one reaching further counterclockwise
/// keeps that side, the other keeps its clockwise side.
fn point_segments(arcs: &[(usize, usize)], verts: &[VertexId], j: usize) -> Result<Vec<(i64, i64)>, SolveError> {
    let m = 2 * arcs.len() as i64;
    let rel = |p: usize| (p as i64 - j as i64).rem_euclid(m);
    let heavy = |v: VertexId| {
        let (a, b) = arcs[v - 1];
        (j as i64 - a as i64).rem_euclid(m) - rel(b)
    };
    let mut through: Vec<VertexId> = verts.iter().copied().filter(|&v| arc_contains(arcs[v - 1].0, arcs[v - 1].1, j)).collect();
    if through.len() > 2 {
        return Err(SolveError::Internal(format!("point {j} lies on {} arcs; cannot cut there", through.len())));
    }
    through.sort_by_key(|&v| (-heavy(v), v));
    let keep_ccw = |v: VertexId| {
        if through.len() == 1 {
            heavy(v) >= 0
        } else {
            through[0] == v
        }
    };
    Ok(verts
        .iter()
        .map(|&v| {
            let (a, b) = arcs[v - 1];
            if !through.contains(&v) {
                (2 * rel(a), 2 * rel(b))
            } else if keep_ccw(v) {
                (if a == j { 2 * m } else { 2 * rel(a) }, 2 * m + 1)
            } else {
                (-1, if b == j { 0 } else { 2 * rel(b) })
            }
        })
        .collect())
}

fn overlap(x: (i64, i64), y: (i64, i64)) -> bool {
    x.0 <= y.1 && y.0 <= x.1
}

fn dropped_edges(arcs: &[(usize, usize)], verts: &[VertexId], segs: &[(i64, i64)]) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for (p, &u) in verts.iter().enumerate() {
        for (q, &v) in verts.iter().enumerate().skip(p + 1) {
            if crate::model::arcs_intersect(arcs[u - 1], arcs[v - 1]) && !overlap(segs[p], segs[q]) {
                out.push((u.min(v), u.max(v)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// An interval model obtained by cutting the circle, plus the edges lost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutModel {
    pub model: IntervalModel,
    pub dropped: Vec<(VertexId, VertexId)>,
}

/// Cuts the whole model at point `j`; at most two arcs may contain `j`.
pub fn cut_to_interval_model(model: &CircularArcModel, j: usize) -> Result<CutModel, SolveError> {
    let m = 2 * model.arcs.len();
    if j == 0 || j > m {
        return Err(SolveError::Internal(format!("point {j} outside 1..={m}")));
    }
    let verts: Vec<VertexId> = (1..=model.arcs.len()).collect();
    let segs = point_segments(&model.arcs, &verts, j)?;
    let dropped = dropped_edges(&model.arcs, &verts, &segs);
    Ok(CutModel { model: IntervalModel { intervals: segs }, dropped })
}

/// Diagnostics from one circular-arc solve.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CircularArcReport {
    /// Phase-2 cuts as (point, edges lost by truncation).
    pub cuts: Vec<(usize, Vec<(VertexId, VertexId)>)>,
    pub candidates: usize,
    pub invalid_candidates: usize,
}

struct Ctx<'a> {
    arcs: &'a [(usize, usize)],
    g: &'a Graph,
    s: Vec<bool>,
    w: Vec<Weight>,
    m: usize,
}

impl Ctx<'_> {
    fn line_solve(&self, verts: &[VertexId], segs: &[(i64, i64)]) -> Vec<VertexId> {
        let ins: Vec<bool> = verts.iter().map(|&v| self.s[v]).collect();
        let ws: Vec<Weight> = verts.iter().map(|&v| self.w[v]).collect();
        let (_, keep) = solve_segments(segs, &ins, &ws);
        verts.iter().zip(keep).filter(|p| p.1).map(|p| *p.0).collect()
    }

    fn covers(&self, verts: &[VertexId]) -> bool {
        free_gap_of(self.arcs, verts).is_none()
    }

    fn meets(&self, q: VertexId, unit: &[VertexId]) -> bool {
        unit.iter().any(|&x| q == x || self.g.has_edge(q, x))
    }

    fn phase1(&self, comp: &[VertexId], out: &mut Vec<Vec<VertexId>>) {
        for gap in 1..=self.m {
            let rest: Vec<VertexId> = comp.iter().copied().filter(|&v| !crosses(self.arcs[v - 1], gap)).collect();
            let segs = gap_segments(self.arcs, &rest, gap);
            out.push(self.line_solve(&rest, &segs));
        }
    }

    fn phase2(&self, comp: &[VertexId], out: &mut Vec<Vec<VertexId>>, rep: &mut CircularArcReport) -> Result<(), SolveError> {
        let ns: Vec<VertexId> = comp
            .iter()
            .copied()
            .filter(|&v| !self.s[v] && self.g.neighbors(v).iter().all(|&u| !self.s[u]))
            .collect();
        let r: Vec<VertexId> = comp.iter().copied().filter(|v| !ns.contains(v)).collect();
        if let Some(gap) = free_gap_of(self.arcs, &r) {
            let mut y = self.line_solve(&r, &gap_segments(self.arcs, &r, gap));
            y.extend(&ns);
            out.push(y);
            return Ok(());
        }
        for j in 1..=self.m {
            let through: Vec<VertexId> =
                r.iter().copied().filter(|&v| arc_contains(self.arcs[v - 1].0, self.arcs[v - 1].1, j)).collect();
            if through.len() != 2 || !self.g.has_edge(through[0], through[1]) {
                continue;
            }
            let segs = point_segments(self.arcs, &r, j)?;
            rep.cuts.push((j, dropped_edges(self.arcs, &r, &segs)));
            let mut y = self.line_solve(&r, &segs);
            y.extend(&ns);
            out.push(y.clone());
            y.extend(&through);
            out.push(y);
        }
        Ok(())
    }

    fn two_cover(&self, comp: &[VertexId], out: &mut Vec<Vec<VertexId>>) {
        let forced: Weight = comp.iter().map(|&v| self.w[v]).sum::<Weight>() + 1;
        for &u in comp {
            for &v in self.g.neighbors(u) {
                if v < u || !(self.s[u] || self.s[v]) || !self.covers(&[u, v]) {
                    continue;
                }
                let mut y = vec![u, v];
                for (c, o) in [(u, v), (v, u)] {
                    let inside: Vec<VertexId> =
                        comp.iter().copied().filter(|&x| x != u && x != v && !self.g.has_edge(x, o)).collect();
                    let mut segs = gap_segments(self.arcs, &inside, self.arcs[o - 1].0);
                    segs.push((-1, self.m as i64));
                    let mut ins: Vec<bool> = inside.iter().map(|&x| self.s[x]).collect();
                    ins.push(self.s[c]);
                    let mut ws: Vec<Weight> = inside.iter().map(|&x| self.w[x]).collect();
                    ws.push(forced);
                    let (_, keep) = solve_segments(&segs, &ins, &ws);
                    y.extend(inside.iter().zip(&keep).filter(|p| *p.1).map(|p| *p.0));
                }
                out.push(y);
            }
        }
    }

    /// Start of a unit's span: the start point not covered by the unit's
    /// other arc.
    fn unit_start(&self, unit: &[VertexId]) -> usize {
        let starts: Vec<usize> = unit.iter().map(|&x| self.arcs[x - 1].0).collect();
        starts
            .iter()
            .copied()
            .find(|&st| {
                !unit.iter().any(|&y| {
                    let (a, b) = self.arcs[y - 1];
                    a != st && arc_contains(a, b, st)
                })
            })
            .unwrap_or(starts[0])
    }

    fn degree_family(&self, comp: &[VertexId], out: &mut Vec<Vec<VertexId>>) {
        let n = self.g.n();
        let r: Vec<VertexId> = comp.iter().copied().filter(|&v| !self.s[v]).collect();
        let wr: i64 = r.iter().map(|&v| self.w[v] as i64).sum();
        let mut units: Vec<Vec<VertexId>> = comp.iter().filter(|&&z| self.s[z]).map(|&z| vec![z]).collect();
        for &a in comp {
            for &b in self.g.neighbors(a) {
                if a < b && self.s[a] && self.s[b] {
                    units.push(vec![a, b]);
                }
            }
        }
        out.push(r.clone());
        for u in &units {
            if u.len() == 2 && self.covers(u) {
                out.push(u.clone());
            }
        }
        let meet: Vec<Vec<bool>> = units.iter().map(|u| (0..=n).map(|q| q > 0 && self.meets(q, u)).collect()).collect();
        let uadj = |a: usize, b: usize| units[b].iter().any(|&x| meet[a][x]);
        let span: Vec<usize> = units.iter().map(|u| self.unit_start(u)).collect();
        let wu: Vec<i64> = units.iter().map(|u| u.iter().map(|&x| self.w[x] as i64).sum()).collect();

        let mut states: Vec<(usize, Option<VertexId>)> = Vec::new();
        for (k, u) in units.iter().enumerate() {
            states.push((k, None));
            if u.len() == 1 {
                for &p in self.g.neighbors(u[0]) {
                    if !self.s[p] {
                        states.push((k, Some(p)));
                    }
                }
            }
        }
        let ok = |a: (usize, Option<VertexId>), b: (usize, Option<VertexId>)| {
            let ((u, p), (u2, p2)) = (a, b);
            if uadj(u, u2) {
                return false;
            }
            if p.is_some() && p == p2 {
                return true;
            }
            if p.is_some_and(|p| meet[u2][p]) {
                return false;
            }
            if p2.is_some_and(|p2| meet[u][p2]) {
                return false;
            }
            true
        };
        let wp = |p: Option<VertexId>| p.map_or(0, |p| self.w[p] as i64);

        for &s0 in &states {
            let (u1, p1) = s0;
            if units[u1].len() == 2 && self.covers(&units[u1]) {
                continue;
            }
            let rel = |k: usize| (span[k] + self.m - span[u1]) % self.m;
            let mut order: Vec<(usize, Option<VertexId>)> = vec![s0];
            let mut cand: Vec<(usize, Option<VertexId>)> = states
                .iter()
                .copied()
                .filter(|&(k, _)| k != u1 && !uadj(k, u1) && !units[k].iter().any(|x| units[u1].contains(x)))
                .collect();
            cand.sort_by_key(|&(k, _)| rel(k));
            order.extend(cand);
            let base = wr - r.iter().filter(|&&q| meet[u1][q]).map(|&q| self.w[q] as i64).sum::<i64>() + wu[u1] + wp(p1);
            let mut dp: Vec<Option<(i64, usize)>> = vec![None; order.len()];
            dp[0] = Some((base, usize::MAX));
            for ti in 1..order.len() {
                let (u2, p2) = order[ti];
                let mut bv: Option<(i64, usize)> = None;
                for si in 0..ti {
                    let Some((sv, _)) = dp[si] else { continue };
                    let (u, p) = order[si];
                    if si != 0 && rel(u) >= rel(u2) {
                        continue;
                    }
                    if !ok(order[si], order[ti]) {
                        continue;
                    }
                    let cost: i64 = r
                        .iter()
                        .filter(|&&q| meet[u2][q] && !meet[u][q] && !meet[u1][q])
                        .map(|&q| self.w[q] as i64)
                        .sum();
                    let extra = if p2.is_some() && p2 != p { wp(p2) } else { 0 };
                    let val = sv + wu[u2] - cost + extra;
                    if bv.is_none_or(|b| val > b.0) {
                        bv = Some((val, si));
                    }
                }
                dp[ti] = bv;
            }
            // the chain value can disagree with the set it builds, and a
            // heavy chain may still close an S-cycle: emit the heaviest set
            // that validates
            let mut ends: Vec<(Weight, Vec<VertexId>)> = Vec::new();
            for ti in 0..order.len() {
                if dp[ti].is_none() || (ti != 0 && !ok(order[ti], s0)) {
                    continue;
                }
                let mut path = Vec::new();
                let mut k = ti;
                while k != usize::MAX {
                    path.push(order[k]);
                    k = dp[k].unwrap().1;
                }
                let mut y: Vec<VertexId> = Vec::new();
                for &(u, p) in &path {
                    y.extend(&units[u]);
                    y.extend(p);
                }
                y.extend(r.iter().copied().filter(|&q| path.iter().all(|&(u, _)| !meet[u][q])));
                y.sort_unstable();
                y.dedup();
                ends.push((y.iter().map(|&v| self.w[v]).sum(), y));
            }
            ends.sort_by_key(|e| std::cmp::Reverse(e.0));
            if let Some((_, y)) = ends.into_iter().find(|e| is_s_forest(self.g, &self.s, &vertex_mask(n, e.1.iter().copied()))) {
                out.push(y);
            }
        }
    }

    fn component(&self, comp: &[VertexId], rep: &mut CircularArcReport) -> Result<Vec<VertexId>, SolveError> {
        if let Some(gap) = free_gap_of(self.arcs, comp) {
            return Ok(self.line_solve(comp, &gap_segments(self.arcs, comp, gap)));
        }
        let mut cands = Vec::new();
        self.phase1(comp, &mut cands);
        self.phase2(comp, &mut cands, rep)?;
        self.two_cover(comp, &mut cands);
        self.degree_family(comp, &mut cands);
        rep.candidates += cands.len();
        let n = self.g.n();
        let mut best: Option<(Weight, Vec<VertexId>)> = None;
        for y in cands {
            let wy: Weight = y.iter().map(|&v| self.w[v]).sum();
            if best.as_ref().is_some_and(|b| wy <= b.0) {
                continue;
            }
            if is_s_forest(self.g, &self.s, &vertex_mask(n, y.iter().copied())) {
                best = Some((wy, y));
            } else {
                rep.invalid_candidates += 1;
            }
        }
        best.map(|b| b.1).ok_or_else(|| SolveError::Internal("no valid circular-arc candidate".into()))
    }
}

fn components(g: &Graph) -> Vec<Vec<VertexId>> {
    let n = g.n();
    let mut seen = vec![false; n + 1];
    let mut out = Vec::new();
    for s in 1..=n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            for &v in g.neighbors(comp[k]) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Solves and also returns the phase-2 cut diagnostics.
pub fn solve_circular_arc_report(inst: &Instance) -> Result<(Solution, CircularArcReport), SolveError> {
    let arcs = match &inst.model {
        Model::CircularArc(m) => &m.arcs,
        other => return Err(SolveError::WrongModel { solver: "circular-arc", kind: other.kind().as_str() }),
    };
    let g = inst.graph();
    let ctx = Ctx { arcs, g: &g, s: inst.s_mask(), w: inst.weight_vec(), m: 2 * arcs.len() };
    let mut rep = CircularArcReport::default();
    let mut keep = vec![false; inst.n() + 1];
    for comp in components(&g) {
        for v in ctx.component(&comp, &mut rep)? {
            keep[v] = true;
        }
    }
    Ok((Solution::from_retained(inst, &keep, SolverTag::CircularArc), rep))
}

pub fn solve_circular_arc(inst: &Instance) -> Result<Solution, SolveError> {
    solve_circular_arc_report(inst).map(|p| p.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> CircularArcModel {
        CircularArcModel { arcs: vec![(8, 3), (2, 5), (4, 7), (6, 1)] }
    }

    #[test]
    fn point_sets_of_c4() {
        let pc = point_arc_sets(&c4());
        assert!(pc.covered);
        assert!(pc.sets[1..].iter().all(|s| (1..=2).contains(&s.len())));
        assert_eq!(pc.sets[8], vec![1, 4]);
    }

    #[test]
    fn separated_arcs_leave_a_free_gap() {
        let m = CircularArcModel { arcs: vec![(1, 2), (3, 4)] };
        let pc = point_arc_sets(&m);
        assert_eq!((pc.covered, pc.free_gap), (false, Some(2)));
        let one = point_arc_sets(&CircularArcModel { arcs: vec![(1, 2)] });
        assert_eq!(one.free_gap, Some(2));
    }

    #[test]
    fn cutting_c4_gives_p4() {
        let cut = cut_to_interval_model(&c4(), 8).unwrap();
        assert_eq!(cut.dropped, vec![(1, 4)]);
        let g = crate::build_adjacency(&Model::Interval(cut.model)).unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn cut_through_one_arc_keeps_graph() {
        let m = CircularArcModel { arcs: vec![(1, 3), (2, 4), (5, 6)] };
        let cut = cut_to_interval_model(&m, 6).unwrap();
        assert!(cut.dropped.is_empty());
        let g = crate::build_adjacency(&Model::Interval(cut.model)).unwrap();
        assert_eq!(g.edges(), vec![(1, 2)]);
    }

    #[test]
    fn three_arcs_through_a_point_refuse_the_cut() {
        let m = CircularArcModel { arcs: vec![(1, 4), (2, 5), (3, 6)] };
        assert!(cut_to_interval_model(&m, 3).is_err());
    }

    #[test]
    fn c4_with_one_special_vertex() {
        let inst = Instance::new(Model::CircularArc(c4()), vec![1; 4], vec![1]).unwrap();
        assert_eq!(solve_circular_arc(&inst).unwrap().removed_weight, 1);
    }
}
