//! Random smooth test functions shared by the unit tests.

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::grid::GridFunction;
use crate::operators::random_smooth;

pub(crate) fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub(crate) fn smooth(rng: &mut StdRng, m: usize, scale: f64) -> GridFunction {
    random_smooth(rng, m, scale).unwrap()
}
