mod common;

use common::{instance, sweep, Kind};
use sfvs_core::graph::vertex_mask;
use sfvs_core::interval::{compute_interval_dp, interval_predecessors, IntervalDpTables, IntervalState};
use sfvs_core::oracle::best_extension;
use sfvs_core::{is_s_forest, Instance, Model};

struct Probe<'a> {
    inst: &'a Instance,
    dp: IntervalDpTables,
}

impl Probe<'_> {
    fn verts(&self, labels: &[usize]) -> Vec<usize> {
        labels.iter().map(|&l| self.dp.labels.vertex[l]).collect()
    }

    /// Heaviest subset of labels `1..=i` whose union with `forced` is an S-forest.
    fn expected(&self, i: usize, forced: &[usize]) -> Option<u64> {
        let universe: Vec<usize> = self.verts(&(1..=i).collect::<Vec<_>>());
        let g = self.inst.graph();
        best_extension(&g, &self.inst.s_mask(), &self.inst.weight_vec(), &universe, &self.verts(forced)).unwrap()
    }

    /// The traced set lies in `V_i`, weighs `value` and stays an S-forest with `forced`.
    fn check_trace(&self, st: IntervalState, i: usize, forced: &[usize], value: u64) {
        let t = self.dp.trace(st);
        assert!(t.iter().all(|&l| (1..=i).contains(&l)), "{st:?} traced {t:?}");
        assert_eq!(self.dp.weight_of(&t), value, "{st:?}");
        let all: Vec<usize> = self.verts(&t).into_iter().chain(self.verts(forced)).collect();
        let g = self.inst.graph();
        assert!(is_s_forest(&g, &self.inst.s_mask(), &vertex_mask(self.inst.n(), all)), "{st:?}");
    }
}

#[test]
fn every_state_matches_its_definition() {
    let mut c_seen = 0;
    for (seed, n, q) in sweep(200, 10) {
        let inst = instance(Kind::Interval, n, seed, q);
        let p = Probe { inst: &inst, dp: compute_interval_dp(&inst).unwrap() };
        for i in 0..=n {
            let a = p.dp.a_value(i);
            assert_eq!(Some(a), p.expected(i, &[]), "A({i}) seed {seed}");
            p.check_trace(IntervalState::A(i), i, &[], a);
            for x in i + 1..=n {
                let b = p.dp.b_value(i, x);
                assert_eq!(Some(b), p.expected(i, &[x]), "B({i},{x}) seed {seed}");
                p.check_trace(IntervalState::B(i, x), i, &[x], b);
            }
        }
        for (i, x, y) in p.dp.c_states() {
            let c = p.dp.c_value(i, x, y).unwrap();
            assert_eq!(Some(c), p.expected(i, &[x, y]), "C({i},{x},{y}) seed {seed}");
            p.check_trace(IntervalState::C(i, x, y), i, &[x, y], c);
            c_seen += 1;
        }
    }
    assert!(c_seen > 1000, "only {c_seen} C states exercised");
}

#[test]
fn a_values_never_decrease() {
    for (seed, n, q) in sweep(300, 40) {
        let dp = compute_interval_dp(&instance(Kind::Interval, n, seed, q)).unwrap();
        assert!((1..=n).all(|i| dp.a_value(i - 1) <= dp.a_value(i)), "seed {seed}");
    }
}

#[test]
fn predecessors_match_a_scan() {
    for (seed, n, q) in sweep(200, 30) {
        let inst = instance(Kind::Interval, n, seed, q);
        let Model::Interval(m) = &inst.model else { unreachable!() };
        let lab = m.labels().unwrap();
        let p = interval_predecessors(&lab);
        for i in 1..=n {
            let below: Vec<usize> = (0..i).filter(|&h| lab.r[h] < lab.r[i]).collect();
            assert_eq!(p.lt[i], *below.iter().max_by_key(|&&h| lab.r[h]).unwrap());
            let far = below.iter().copied().filter(|&h| !lab.adjacent(h, i)).max_by_key(|&h| lab.r[h]);
            assert_eq!(p.ll[i], far.unwrap(), "seed {seed} label {i}");
        }
    }
}
