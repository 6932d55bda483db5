mod common;

use common::{instance, sweep, Kind};
use sfvs_core::cobipartite::{cobipartition, enumerate_candidate_forests, for_each_candidate, solve_cobipartite};
use sfvs_core::oracle::{maximal_s_forests, oracle_solve};
use sfvs_core::{EdgeListModel, Instance, Model, SolveError};

#[test]
fn candidate_count_is_within_the_quartic_bound() {
    for (seed, n, q) in sweep(300, 40).chain(sweep(30, 12).map(|(s, n, _)| (s + 77, n, 1.0))) {
        let inst = instance(Kind::CoBipartite, n, seed, q);
        let g = inst.graph();
        let part = cobipartition(&g).unwrap();
        let mut count = 0u64;
        for_each_candidate(&g, &inst.s_mask(), &part, |_, _| count += 1);
        let n = n as u64;
        assert!(count <= 22 * n.pow(4), "seed {seed}: {count} candidates for n = {n}");
    }
}

#[test]
fn every_maximal_s_forest_is_a_candidate() {
    let mut forests = 0;
    for (seed, n, q) in sweep(400, 10) {
        let inst = instance(Kind::CoBipartite, n, seed, q);
        let g = inst.graph();
        let s = inst.s_mask();
        let part = cobipartition(&g).unwrap();
        let mut cands: Vec<Vec<usize>> = enumerate_candidate_forests(&g, &s, &part).into_iter().map(|c| c.retained).collect();
        cands.sort();
        for f in maximal_s_forests(&g, &s).unwrap() {
            assert!(cands.binary_search(&f).is_ok(), "seed {seed}: maximal S-forest {f:?} not emitted");
            forests += 1;
        }
    }
    assert!(forests > 1000);
}

#[test]
fn partitions_are_two_cliques() {
    for (seed, n, q) in sweep(300, 30) {
        let inst = instance(Kind::CoBipartite, n, seed, q);
        let g = inst.graph();
        let part = cobipartition(&g).unwrap();
        assert!(part.is_valid(&g), "seed {seed}");
        let mut all: Vec<usize> = part.a.iter().chain(&part.b).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (1..=n).collect::<Vec<_>>());
    }
}

#[test]
fn matches_the_oracle() {
    for (seed, n, q) in sweep(600, 12) {
        let inst = instance(Kind::CoBipartite, n, seed + 3000, q);
        let got = solve_cobipartite(&inst).unwrap();
        got.verify(&inst, &inst.graph()).unwrap();
        assert_eq!(got.removed_weight, oracle_solve(&inst).unwrap().removed_weight, "seed {seed}");
    }
}

fn edge_list(n: usize, edges: &[(usize, usize)], part_a: Option<Vec<usize>>) -> Instance {
    let m = EdgeListModel { n, edges: edges.to_vec(), part_a };
    Instance::new(Model::CoBipartite(m), vec![1; n], (1..=n).collect()).unwrap()
}

#[test]
fn non_cobipartite_graphs_are_refused() {
    let c5 = edge_list(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)], None);
    assert!(matches!(solve_cobipartite(&c5), Err(SolveError::NotCoBipartite(_))));
    let three_isolated = edge_list(3, &[], None);
    assert!(matches!(solve_cobipartite(&three_isolated), Err(SolveError::NotCoBipartite(_))));
}

#[test]
fn a_bad_given_partition_is_recomputed() {
    let c4 = [(1, 2), (2, 3), (3, 4), (4, 1)];
    let good = solve_cobipartite(&edge_list(4, &c4, Some(vec![1, 2]))).unwrap();
    let bad = solve_cobipartite(&edge_list(4, &c4, Some(vec![1, 3]))).unwrap();
    assert_eq!(good.removed_weight, 1);
    assert_eq!(bad.removed_weight, 1);
}
