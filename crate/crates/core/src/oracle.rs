//! Exhaustive ground truth: scan every vertex subset.

use crate::error::SolveError;
use crate::graph::Graph;
use crate::model::{Instance, VertexId, Weight};
use crate::solution::{Solution, SolverTag};

/// Largest `n` the subset scan accepts.
pub const ORACLE_MAX_N: usize = 20;

/// Bitmask view of a small graph: bit `k` stands for vertex `k + 1`.
#[derive(Debug, Clone)]
pub struct MaskGraph {
    adj: Vec<u32>,
}

#[inline]
fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

impl MaskGraph {
    pub fn new(g: &Graph) -> Result<Self, SolveError> {
        let n = g.n();
        if n > ORACLE_MAX_N {
            return Err(SolveError::OracleTooLarge { n, max: ORACLE_MAX_N });
        }
        let adj = (1..=n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << (u - 1)))
            .collect();
        Ok(MaskGraph { adj })
    }

    fn flood(&self, start: u32, within: u32) -> u32 {
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0;
            for b in bits(frontier) {
                next |= self.adj[b];
            }
            next &= within & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    fn on_cycle(&self, v: usize, y: u32) -> bool {
        let mut nb = self.adj[v] & y;
        if nb.count_ones() < 2 {
            return false;
        }
        let rest = y & !(1 << v);
        while nb != 0 {
            let comp = self.flood(nb & nb.wrapping_neg(), rest);
            if (comp & nb).count_ones() >= 2 {
                return true;
            }
            nb &= !comp;
        }
        false
    }

    /// Same predicate as [`crate::graph::is_s_forest`], on masks.
    pub fn is_s_forest(&self, s: u32, y: u32) -> bool {
        let mut rest = y;
        while rest != 0 {
            let comp = self.flood(rest & rest.wrapping_neg(), y);
            rest &= !comp;
            if comp & s == 0 {
                continue;
            }
            let deg: u32 = bits(comp).map(|b| (self.adj[b] & comp).count_ones()).sum();
            if deg / 2 < comp.count_ones() {
                continue;
            }
            if bits(comp & s).any(|v| self.on_cycle(v, comp)) {
                return false;
            }
        }
        true
    }
}

fn to_mask(vs: impl IntoIterator<Item = VertexId>) -> u32 {
    vs.into_iter().fold(0, |m, v| m | 1 << (v - 1))
}

fn from_mask(m: u32) -> Vec<VertexId> {
    bits(m).map(|b| b + 1).collect()
}

/// Canonical order among equally heavy sets: fewer vertices first, then the
/// lexicographically smaller sorted vertex list.
#[inline]
fn canonical_before(a: u32, b: u32) -> bool {
    let (pa, pb) = (a.count_ones(), b.count_ones());
    if pa != pb {
        return pa < pb;
    }
    let d = a ^ b;
    d != 0 && a & d & d.wrapping_neg() != 0
}

/// Heaviest S-forest of `g`: weight and retained set, ascending.
/// `w` is indexed by vertex with slot 0 unused.
pub fn oracle_max_forest(g: &Graph, s: &[bool], w: &[Weight]) -> Result<(Weight, Vec<VertexId>), SolveError> {
    let n = g.n();
    let mg = MaskGraph::new(g)?;
    let smask = to_mask((1..=n).filter(|&v| s[v]));
    let mut best_w = 0;
    let mut best = 0u32;
    for y in 0u32..(1u32 << n) {
        let wy: Weight = bits(y).map(|b| w[b + 1]).sum();
        if wy < best_w || (wy == best_w && !canonical_before(y, best)) {
            continue;
        }
        if mg.is_s_forest(smask, y) {
            best_w = wy;
            best = y;
        }
    }
    Ok((best_w, from_mask(best)))
}

pub fn oracle_solve(inst: &Instance) -> Result<Solution, SolveError> {
    let g = inst.graph();
    let (_, keep) = oracle_max_forest(&g, &inst.s_mask(), &inst.weight_vec())?;
    let mask = crate::graph::vertex_mask(inst.n(), keep);
    Ok(Solution::from_retained(inst, &mask, SolverTag::Oracle))
}

/// Every maximal S-forest (no single vertex can be added), as ascending
/// vertex lists in increasing subset-mask order.
pub fn maximal_s_forests(g: &Graph, s: &[bool]) -> Result<Vec<Vec<VertexId>>, SolveError> {
    let n = g.n();
    let mg = MaskGraph::new(g)?;
    let smask = to_mask((1..=n).filter(|&v| s[v]));
    let full = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let forest: Vec<bool> = (0u32..(1u32 << n)).map(|y| mg.is_s_forest(smask, y)).collect();
    Ok((0u32..(1u32 << n))
        .filter(|&y| forest[y as usize] && bits(full & !y).all(|b| !forest[(y | 1 << b) as usize]))
        .map(from_mask)
        .collect())
}

/// Heaviest `X ⊆ universe` with `X ∪ forced` an S-forest, or `None` when
/// `forced` alone already holds an S-cycle. Used to check DP states against
/// their definitions.
pub fn best_extension(
    g: &Graph,
    s: &[bool],
    w: &[Weight],
    universe: &[VertexId],
    forced: &[VertexId],
) -> Result<Option<Weight>, SolveError> {
    let n = g.n();
    let mg = MaskGraph::new(g)?;
    let smask = to_mask((1..=n).filter(|&v| s[v]));
    let fmask = to_mask(forced.iter().copied());
    let k = universe.len();
    let mut best = None;
    for sub in 0u32..(1u32 << k) {
        let y = bits(sub).fold(fmask, |m, b| m | 1 << (universe[b] - 1));
        if mg.is_s_forest(smask, y) {
            let wx: Weight = bits(sub).map(|b| w[universe[b]]).sum();
            best = Some(best.map_or(wx, |b: Weight| b.max(wx)));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{IntervalModel, Model};

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))))
    }

    #[test]
    fn k4_with_all_special_needs_two_removals() {
        let g = complete(4);
        let (w, keep) = oracle_max_forest(&g, &[true; 5], &[0, 1, 1, 1, 1]).unwrap();
        assert_eq!((w, keep), (2, vec![1, 2]));
    }

    #[test]
    fn empty_s_keeps_everything() {
        let g = complete(5);
        let (w, keep) = oracle_max_forest(&g, &[false; 6], &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!((w, keep.len()), (15, 5));
    }

    #[test]
    fn interval_triangle() {
        let inst = Instance::new(
            Model::Interval(IntervalModel { intervals: vec![(1, 4), (2, 5), (3, 6)] }),
            vec![5, 1, 7],
            vec![3],
        )
        .unwrap();
        let sol = oracle_solve(&inst).unwrap();
        assert_eq!((sol.removed_weight, sol.retained), (1, vec![1, 3]));
    }

    #[test]
    fn refuses_large_inputs() {
        let g = Graph::new(ORACLE_MAX_N + 1);
        assert!(matches!(
            oracle_max_forest(&g, &[false; ORACLE_MAX_N + 2], &[0; ORACLE_MAX_N + 2]),
            Err(SolveError::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn maximal_forests_of_a_triangle() {
        let g = complete(3);
        let mut s = vec![false; 4];
        s[1] = true;
        // either drop 1, or keep 1 and drop one of the others
        let f = maximal_s_forests(&g, &s).unwrap();
        assert_eq!(f, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn ties_prefer_fewer_then_smaller_vertices() {
        assert!(canonical_before(0b011, 0b101));
        assert!(!canonical_before(0b101, 0b011));
        assert!(canonical_before(0b100, 0b011));
    }
}
