//! Shared fixtures for the benchmarks.
use spreadpack::search::GeneratingSet;
use spreadpack::{FieldTower, Matrix};

pub fn tower(p: u64, k: usize, n: usize) -> FieldTower {
    FieldTower::build(p, 1, k, n).expect("bench tower")
}

pub fn samples(t: &FieldTower, count: u64) -> Vec<Matrix> {
    (0..count).map(|s| spreadpack::linalg::random_gl(t.n(), t.scalars(), s)).collect()
}

pub fn generating_set(t: &FieldTower) -> GeneratingSet {
    GeneratingSet::desarguesian(t)
}
