mod common;

use common::{instance, sweep, Kind};
use sfvs_core::graph::vertex_mask;
use sfvs_core::oracle::best_extension;
use sfvs_core::permutation::{
    compute_permutation_dp, enumerate_crossing_pairs, leftmost_crossing_pair, pair_predecessors, pair_vertices,
    CrossingPair, PermState,
};
use sfvs_core::{is_s_forest, Graph, Instance, Model, PermutationModel};

fn model(inst: &Instance) -> &PermutationModel {
    match &inst.model {
        Model::Permutation(m) => m,
        _ => unreachable!(),
    }
}

fn b(m: &PermutationModel, v: usize) -> usize {
    if v == 0 {
        0
    } else {
        m.pi[v - 1]
    }
}

fn le_r(m: &PermutationModel, p: CrossingPair, q: CrossingPair) -> bool {
    b(m, p.i) <= b(m, q.i) && p.j <= q.j
}

fn union(a: &[usize], extra: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().copied().chain(extra).collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[test]
fn every_state_matches_its_definition() {
    let mut general = 0;
    for (seed, n, q) in sweep(300, 9) {
        let inst = instance(Kind::Permutation, n, seed, q);
        let m = model(&inst);
        let (g, s, w) = (inst.graph(), inst.s_mask(), inst.weight_vec());
        let dp = compute_permutation_dp(&inst).unwrap();
        for (st, v) in dp.states() {
            let vp = pair_vertices(m, st.pair());
            let ctx = dp.context(&st);
            assert_eq!(best_extension(&g, &s, &w, &vp, &ctx).unwrap(), Some(v), "{st:?} seed {seed}");
            let t = dp.trace(st).unwrap();
            assert!(t.iter().all(|x| vp.contains(x)), "{st:?} traced {t:?} outside V_p");
            assert_eq!(t.iter().map(|&x| inst.weight(x)).sum::<u64>(), v);
            assert!(is_s_forest(&g, &s, &vertex_mask(n, union(&t, ctx))), "{st:?} seed {seed}");
            general += matches!(st, PermState::Gen(..)) as usize;
        }
    }
    eprintln!("general-context states checked: {general}");
}

#[test]
fn larger_instances_stay_exact_per_state() {
    for seed in 0..60u64 {
        let inst = instance(Kind::Permutation, 12 + (seed % 3) as usize, seed + 900, [0.3, 0.6][(seed % 2) as usize]);
        let m = model(&inst);
        let (g, s, w) = (inst.graph(), inst.s_mask(), inst.weight_vec());
        let dp = compute_permutation_dp(&inst).unwrap();
        for (st, v) in dp.states() {
            let want = best_extension(&g, &s, &w, &pair_vertices(m, st.pair()), &dp.context(&st)).unwrap();
            assert_eq!(want, Some(v), "{st:?} seed {seed}");
        }
    }
}

#[test]
fn a_is_monotone_over_pairs() {
    for (seed, n, q) in sweep(150, 9) {
        let inst = instance(Kind::Permutation, n, seed, q);
        let m = model(&inst);
        let mut dp = compute_permutation_dp(&inst).unwrap();
        let pairs = enumerate_crossing_pairs(m);
        let vals: Vec<u64> = pairs.iter().map(|p| dp.value(PermState::A((p.i as u32, p.j as u32))).unwrap()).collect();
        for (x, &p) in pairs.iter().enumerate() {
            for (y, &q) in pairs.iter().enumerate() {
                if le_r(m, p, q) {
                    assert!(vals[x] <= vals[y], "A{p:?} > A{q:?} seed {seed}");
                }
            }
        }
    }
}

#[test]
fn pairs_are_counted_and_ordered() {
    for (seed, n, q) in sweep(200, 20) {
        let inst = instance(Kind::Permutation, n, seed, q);
        let m = model(&inst);
        let pairs = enumerate_crossing_pairs(m);
        assert_eq!(pairs.len(), n + inst.graph().edge_count() + 1);
        assert!(pairs.contains(&CrossingPair { i: 0, j: 0 }));
        for (k, &p) in pairs.iter().enumerate() {
            assert!(p.i <= p.j && b(m, p.j) <= b(m, p.i), "{p:?} is not crossing");
            assert!(pairs[..k].iter().all(|&e| !le_r(m, p, e) || e == p), "order breaks at {p:?}");
        }
    }
}

#[test]
fn box_predecessors_equal_the_dominance_scan() {
    for (seed, n, q) in sweep(200, 9) {
        let inst = instance(Kind::Permutation, n, seed, q);
        let m = model(&inst);
        let pairs = enumerate_crossing_pairs(m);
        let pp = pair_predecessors(&pairs, m).unwrap();
        let dp = compute_permutation_dp(&inst).unwrap();
        for (k, &p) in pairs.iter().enumerate().filter(|(_, p)| p.j != 0) {
            let want = [pairs[pp.eqs[k]], pairs[pp.leq[k]], pairs[pp.lt[k]], pairs[pp.ll[k]]];
            assert_eq!(dp.predecessors(p), want, "pair {p:?} seed {seed}");
            let vp = pair_vertices(m, p);
            for x in (1..=n).filter(|x| !vp.contains(x)) {
                assert_eq!(Some(dp.predecessor_ltll(p, x)), pp.ltll[k][x].map(|e| pairs[e]), "{p:?} x {x}");
            }
        }
    }
}

#[test]
fn predecessor_sets_partition_pair_sets() {
    for (seed, n, q) in sweep(200, 9) {
        let inst = instance(Kind::Permutation, n, seed, q);
        let m = model(&inst);
        let g = inst.graph();
        let dp = compute_permutation_dp(&inst).unwrap();
        let v = |p: CrossingPair| pair_vertices(m, p);
        let nbrs = |set: &[usize], u: usize| -> Vec<usize> { set.iter().copied().filter(|&h| g.has_edge(h, u)).collect() };
        let self_pair = |u: usize| CrossingPair { i: u, j: u };
        for p in enumerate_crossing_pairs(m).into_iter().filter(|p| p.j != 0) {
            let [eqs, leq, lt, ll] = dp.predecessors(p);
            let (i, j) = (p.i, p.j);
            let vlt = v(lt);
            assert_eq!(v(p), union(&v(eqs), [j]), "{p:?}");
            assert_eq!(v(p), union(&v(leq), [i]), "{p:?}");
            assert_eq!(v(p), union(&vlt, [i, j]), "{p:?}");
            let ll_ii = dp.predecessors(self_pair(i))[3];
            let ll_jj = dp.predecessors(self_pair(j))[3];
            assert_eq!(vlt, union(&v(ll_jj), nbrs(&vlt, j)), "{p:?}");
            assert_eq!(vlt, union(&v(ll_ii), nbrs(&vlt, i)), "{p:?}");
            assert_eq!(v(ll_ii), union(&v(ll), nbrs(&v(ll_ii), j)), "{p:?}");
            assert_eq!(v(ll_jj), union(&v(ll), nbrs(&v(ll_jj), i)), "{p:?}");
            for x in (1..=n).filter(|x| !v(p).contains(x)) {
                let lx = dp.predecessor_ltll(p, x);
                assert_eq!(vlt, union(&v(lx), nbrs(&vlt, x)), "{p:?} x {x}");
            }
        }
    }
}

#[test]
fn state_count_is_within_the_cubic_bound() {
    for (seed, n, q) in sweep(150, 30) {
        let inst = instance(Kind::Permutation, n, seed, q);
        let dp = compute_permutation_dp(&inst).unwrap();
        let k = (n + inst.graph().edge_count() + 1) as u64;
        assert!(dp.state_count() as u64 <= k * k * k, "seed {seed}: {} states", dp.state_count());
    }
}

fn induced_cycle_lengths(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut out = Vec::new();
    for mask in 1u32..1 << n {
        let vs: Vec<usize> = (1..=n).filter(|&v| mask >> (v - 1) & 1 == 1).collect();
        if vs.len() < 3 {
            continue;
        }
        let deg_two = vs.iter().all(|&u| vs.iter().filter(|&&v| g.has_edge(u, v)).count() == 2);
        if !deg_two {
            continue;
        }
        let mut seen = vec![vs[0]];
        let mut k = 0;
        while k < seen.len() {
            let u = seen[k];
            k += 1;
            for &v in &vs {
                if g.has_edge(u, v) && !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
        if seen.len() == vs.len() {
            out.push(vs.len());
        }
    }
    out
}

#[test]
fn induced_cycles_are_triangles_or_squares() {
    let mut seen_square = false;
    for (seed, n, q) in sweep(200, 10) {
        let inst = instance(Kind::Permutation, n, seed, q);
        for len in induced_cycle_lengths(&inst.graph()) {
            assert!(len == 3 || len == 4, "induced cycle of length {len}, seed {seed}");
            seen_square |= len == 4;
        }
    }
    assert!(seen_square);
}

#[test]
fn leftmost_pair_is_below_every_other_pair() {
    for (seed, n, q) in sweep(200, 12) {
        let inst = instance(Kind::Permutation, n, seed, q);
        let m = model(&inst);
        let g = inst.graph();
        let k = n.min(6);
        let set: Vec<usize> = (1..=k).map(|t| (t * 5 + seed as usize) % n + 1).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let edges: Vec<CrossingPair> = set
            .iter()
            .flat_map(|&u| set.iter().map(move |&v| CrossingPair { i: u, j: v }))
            .filter(|p| p.i < p.j && g.has_edge(p.i, p.j))
            .collect();
        match leftmost_crossing_pair(m, &set) {
            Ok(p) => {
                assert!(edges.contains(&p));
                assert!(edges.iter().all(|e| p.i <= e.i && b(m, p.j) <= b(m, e.j)), "{p:?} in {set:?}");
            }
            Err(_) => assert!(!edges.iter().any(|p| edges.iter().all(|e| p.i <= e.i && b(m, p.j) <= b(m, e.j)))),
        }
    }
}
