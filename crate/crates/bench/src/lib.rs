//! Fixed inputs shared by the benchmarks, so every run measures the same work.

use nilform::stokes::random::{random_form, random_point, random_tangents, trial_rng, FieldPool};
use nilform::{DifferentialForm, Microcube, Scalar};

pub struct Fixture<S> {
    pub form: DifferentialForm,
    pub point: Vec<S>,
    pub cube: Microcube<S>,
}

/// A random polynomial (or transcendental) k-form on R^n with a matching microcube.
pub fn fixture<S: Scalar>(n: usize, k: usize, pool: FieldPool, seed: u64) -> Fixture<S> {
    let mut rng = trial_rng(seed, 0);
    let form = random_form(&mut rng, n, k, pool);
    let point: Vec<S> = random_point(&mut rng, n, pool);
    let tangents = random_tangents(&mut rng, n, k + 1);
    let cube = Microcube::new(&point, tangents, k + 1).expect("k + 1 <= n");
    Fixture { form, point, cube }
}
