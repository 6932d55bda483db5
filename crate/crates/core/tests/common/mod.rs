#![allow(dead_code)]

use sfvs_core::gen::{gen_instance, GenParams};
use sfvs_core::Instance;
pub use sfvs_core::Kind;

pub const S_FRACS: [f64; 3] = [0.0, 0.3, 1.0];

/// Seeded instance with weights in `0..=100`.
pub fn instance(kind: Kind, n: usize, seed: u64, s_frac: f64) -> Instance {
    gen_instance(&GenParams { kind, n, seed, s_frac, max_weight: 100 })
}

/// Yields `(seed, n, s_frac)` for `seeds` runs with `n` cycling over `1..=max_n`.
pub fn sweep(seeds: u64, max_n: usize) -> impl Iterator<Item = (u64, usize, f64)> {
    (0..seeds).map(move |seed| (seed, 1 + (seed as usize * 7 + 3) % max_n, S_FRACS[(seed % 3) as usize]))
}

/// Same instance with every weight set to one.
pub fn unit_weights(inst: &Instance) -> Instance {
    Instance::new(inst.model.clone(), vec![1; inst.n()], inst.s.clone()).unwrap()
}

/// Same instance with `S = V`.
pub fn all_special(inst: &Instance) -> Instance {
    Instance::new(inst.model.clone(), inst.weights.clone(), (1..=inst.n()).collect()).unwrap()
}
