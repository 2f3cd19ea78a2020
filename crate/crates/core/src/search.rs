//! The Cayley-graph generating set and the greedy construction of partial
//! parallelisms.
//!
//! Vertices are the elements of `GL(n, q)`; `A ~ B` iff some member of the
//! Desarguesian spread is carried by `A⁻¹B` onto a member. The graph is never
//! built: a candidate is adjacent to an accepted vertex exactly when their
//! image spreads share a subspace, so adjacency is a key lookup.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::gaussian_binomial;
use crate::error::{Error, Result};
use crate::field::{FieldTower, ScalarField};
use crate::linalg::{gl_count, image_rref_into, random_gl_with, GlStream, Matrix, SubspaceKey};
use crate::spread::{desarguesian_spread, spread_image, Ambient, PartialParallelism, Spread, SpreadIndex};

/// Candidates handed to the workers per arbiter round.
pub const DEFAULT_BATCH: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub seed: u64,
    /// Number of random candidates drawn in random mode.
    pub sample_limit: u64,
    pub workers: usize,
    /// Largest `|GL(n, q)|` an exhaustive scan may enumerate.
    pub budget: u128,
    /// Stop once `[n−1, k−1]_q` spreads are accepted.
    pub early_exit: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::Exhaustive,
            seed: 0,
            sample_limit: 100_000,
            workers: 1,
            budget: crate::linalg::DEFAULT_GL_BUDGET,
            early_exit: true,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::InvalidParameter("worker count must be positive".into()));
        }
        Ok(())
    }
}

/// Membership in `S = ∪ S_ij \ {I}` against a fixed base spread.
#[derive(Clone, Debug)]
pub struct GeneratingSet {
    base: Spread,
    index: SpreadIndex,
    f: ScalarField,
}

impl GeneratingSet {
    pub fn new(base: Spread, f: &ScalarField) -> Self {
        let index = SpreadIndex::new(&base, f);
        GeneratingSet { base, index, f: f.clone() }
    }

    pub fn desarguesian(tower: &FieldTower) -> Self {
        Self::new(desarguesian_spread(tower), tower.scalars())
    }

    pub fn base(&self) -> &Spread {
        &self.base
    }

    /// `M` maps some member onto some member (the identity included).
    pub fn in_union(&self, m: &Matrix) -> bool {
        let mut buf = vec![0u8; m.rows()];
        self.in_union_with(m, &mut buf)
    }

    #[inline]
    fn in_union_with(&self, m: &Matrix, buf: &mut [u8]) -> bool {
        (0..self.index.len()).any(|i| self.index.image_member(m, i, &self.f, buf).is_some())
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        !m.is_identity() && self.in_union(m)
    }

    /// `S = S⁻¹` at `m`.
    pub fn symmetric_at(&self, m: &Matrix) -> Result<bool> {
        Ok(self.contains(m) == self.contains(&m.inverse(&self.f)?))
    }
}

pub fn in_generating_set(m: &Matrix, base: &Spread, f: &ScalarField) -> bool {
    GeneratingSet::new(base.clone(), f).contains(m)
}

pub fn symmetric_closure_check(m: &Matrix, base: &Spread, f: &ScalarField) -> Result<bool> {
    GeneratingSet::new(base.clone(), f).symmetric_at(m)
}

/// Exact size of `∪ S_ij` and the quantities derived from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSetStats {
    pub ambient: Ambient,
    pub union_size: u128,
    /// `|S| = union_size − 1`; the Cayley graph is `degree`-regular.
    pub degree: u128,
    pub gl_order: u128,
    pub thm31_bound: BigRational,
}

/// Scans all of `GL(n, q)`, split into `workers` contiguous ranges.
pub fn union_size_exact(tower: &FieldTower, workers: usize, budget: u128) -> Result<GeneratingSetStats> {
    let gs = GeneratingSet::desarguesian(tower);
    let counts = scan_gl(tower.n(), tower.scalars(), workers, budget, |m, buf| gs.in_union_with(m, buf))?;
    let union_size = counts.0;
    let gl_order = counts.1;
    Ok(GeneratingSetStats {
        ambient: Ambient::of(tower),
        union_size,
        degree: union_size - 1,
        gl_order,
        thm31_bound: BigRational::new(BigUint::from(gl_order).into(), BigUint::from(union_size).into()),
    })
}

/// Counts the elements of `GL(n, q)` satisfying `pred`; returns `(hits, total)`.
/// The result does not depend on `workers`.
pub fn scan_gl<P>(n: usize, f: &ScalarField, workers: usize, budget: u128, pred: P) -> Result<(u128, u128)>
where
    P: Fn(&Matrix, &mut [u8]) -> bool + Sync,
{
    if workers == 0 {
        return Err(Error::InvalidParameter("worker count must be positive".into()));
    }
    let total = gl_count(n, f.order() as u64)
        .filter(|&t| t <= budget)
        .ok_or(Error::BudgetExceeded { count: gl_count(n, f.order() as u64).unwrap_or(u128::MAX), budget })?;
    let w = workers as u128;
    let hits = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..w)
            .map(|i| {
                let pred = &pred;
                scope.spawn(move || -> Result<u128> {
                    let mut stream = GlStream::range(n, f, total * i / w, total * (i + 1) / w, budget)?;
                    let mut buf = vec![0u8; n];
                    let mut hits = 0u128;
                    while let Some(m) = stream.next_matrix() {
                        if pred(m, &mut buf) {
                            hits += 1;
                        }
                    }
                    Ok(hits)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).sum::<Result<u128>>()
    })?;
    Ok((hits, total))
}

/// A greedy run: the certified result and scan statistics.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub parallelism: PartialParallelism,
    pub scanned: u128,
    pub reached_upper_bound: bool,
    pub elapsed: Duration,
}

impl SearchOutcome {
    pub fn accepted(&self) -> usize {
        self.parallelism.len()
    }
}

struct Acceptor<'a> {
    base: &'a Spread,
    f: &'a ScalarField,
    keys: HashSet<SubspaceKey>,
    spreads: Vec<Spread>,
    generators: Vec<Matrix>,
}

impl Acceptor<'_> {
    /// `m`'s image spread avoids every accepted subspace.
    fn disjoint(&self, m: &Matrix, buf: &mut Vec<u8>) -> bool {
        self.base.members().iter().all(|u| {
            image_rref_into(m, u.basis(), self.f, buf);
            !self.keys.contains(&buf[..])
        })
    }

    fn commit(&mut self, m: Matrix) -> Result<()> {
        let s = spread_image(&m, self.base, self.f)?;
        self.keys.extend(s.keys().iter().cloned());
        self.spreads.push(s);
        self.generators.push(m);
        Ok(())
    }
}

/// Greedy independent set of the Cayley graph, returned as a certified
/// partial parallelism.
///
/// Candidates are processed in batches: workers filter a batch against the
/// accepted set as it stood at the start of the batch, and the arbiter then
/// re-checks the survivors in candidate order before committing. The
/// accepted set is therefore the one a single thread would produce.
pub fn greedy_construct(cfg: &SearchConfig, tower: &FieldTower) -> Result<SearchOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let f = tower.scalars();
    let n = tower.n();
    let base = desarguesian_spread(tower);
    let upper = gaussian_binomial(n - 1, tower.k() - 1, tower.q())?;
    let mut acc = Acceptor { base: &base, f, keys: HashSet::new(), spreads: Vec::new(), generators: Vec::new() };

    let mut source = match cfg.mode {
        SearchMode::Exhaustive => Candidates::Exhaustive(GlStream::new(n, f, cfg.budget)?),
        SearchMode::Random => Candidates::Random {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            left: cfg.sample_limit,
        },
    };

    let batch_len = if cfg.workers == 1 { 1 } else { DEFAULT_BATCH };
    let mut scanned = 0u128;
    let mut reached = false;
    let mut batch = Vec::with_capacity(batch_len);
    let mut buf = Vec::new();
    'outer: loop {
        batch.clear();
        while batch.len() < batch_len {
            match source.next(n, f) {
                Some(m) => batch.push(m),
                None => break,
            }
        }
        if batch.is_empty() {
            break;
        }
        let survivors = filter_batch(&acc, &batch, cfg.workers);
        let before = acc.spreads.len();
        for (pos, m) in batch.drain(..).enumerate() {
            scanned += 1;
            if !survivors[pos] {
                continue;
            }
            if acc.spreads.len() == before || acc.disjoint(&m, &mut buf) {
                acc.commit(m)?;
                if cfg.early_exit && BigUint::from(acc.spreads.len()) >= upper {
                    reached = true;
                    break 'outer;
                }
            }
        }
    }
    let parallelism =
        PartialParallelism { ambient: Ambient::of(tower), spreads: acc.spreads, generators: acc.generators };
    parallelism.certify(f).map_err(|v| Error::Certification(v.to_string()))?;
    let reached_upper_bound = reached || BigUint::from(parallelism.len()) >= upper;
    Ok(SearchOutcome { parallelism, scanned, reached_upper_bound, elapsed: start.elapsed() })
}

enum Candidates<'f> {
    Exhaustive(GlStream<'f>),
    Random { rng: ChaCha8Rng, left: u64 },
}

impl Candidates<'_> {
    fn next(&mut self, n: usize, f: &ScalarField) -> Option<Matrix> {
        match self {
            Candidates::Exhaustive(s) => s.next_matrix().cloned(),
            Candidates::Random { rng, left } => {
                if *left == 0 {
                    return None;
                }
                *left -= 1;
                Some(random_gl_with(n, f, rng))
            }
        }
    }
}

fn filter_batch(acc: &Acceptor<'_>, batch: &[Matrix], workers: usize) -> Vec<bool> {
    if workers == 1 || batch.len() < 2 {
        let mut buf = Vec::new();
        return batch.iter().map(|m| acc.disjoint(m, &mut buf)).collect();
    }
    let chunk = batch.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = batch
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let mut buf = Vec::new();
                    part.iter().map(|m| acc.disjoint(m, &mut buf)).collect::<Vec<bool>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("search worker panicked")).collect()
    })
}

/// No two generators are adjacent: `A⁻¹B ∉ S` for all accepted `A ≠ B`.
pub fn is_independent(generators: &[Matrix], gs: &GeneratingSet, f: &ScalarField) -> Result<bool> {
    for (i, a) in generators.iter().enumerate() {
        let a_inv = a.inverse(f)?;
        for b in &generators[i + 1..] {
            if gs.contains(&a_inv.mul(b, f)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_gl;
    use crate::spread::multiplication_matrix;

    fn tower(p: u64, e: usize, k: usize, n: usize) -> FieldTower {
        FieldTower::build(p, e, k, n).unwrap()
    }

    fn ceil_div(a: u128, b: u128) -> u128 {
        a.div_ceil(b)
    }

    #[test]
    fn generating_set_examples() {
        let t = tower(2, 1, 2, 4);
        let gs = GeneratingSet::desarguesian(&t);
        assert!(!gs.contains(&Matrix::identity(4)));
        assert!(gs.in_union(&Matrix::identity(4)));
        let w = multiplication_matrix(&t, t.omega());
        assert!(gs.contains(&w));
        assert!(gs.symmetric_at(&w).unwrap());
        assert!(gs.symmetric_at(&Matrix::identity(4)).unwrap());
        // a matrix whose image spread meets the base in nothing
        let f = t.scalars();
        let disjoint = (0..)
            .map(|s| random_gl(4, f, s))
            .find(|m| spread_image(m, gs.base(), f).unwrap().shared_members(gs.base()) == 0)
            .unwrap();
        assert!(!gs.contains(&disjoint));
        assert!(!in_generating_set(&disjoint, gs.base(), f));
    }

    #[test]
    fn membership_matches_shared_members() {
        let t = tower(2, 1, 2, 4);
        let f = t.scalars();
        let gs = GeneratingSet::desarguesian(&t);
        for seed in 0..300 {
            let m = random_gl(4, f, seed);
            let shared = spread_image(&m, gs.base(), f).unwrap().shared_members(gs.base());
            assert_eq!(gs.contains(&m), !m.is_identity() && shared > 0);
            assert!(gs.symmetric_at(&m).unwrap());
        }
    }

    #[test]
    fn union_small_instances() {
        let t = tower(2, 1, 1, 2);
        let s = union_size_exact(&t, 1, 1 << 20).unwrap();
        assert_eq!((s.union_size, s.degree, s.gl_order), (6, 5, 6));
        assert_eq!(s.thm31_bound, BigRational::from_integer(1.into()));

        let t = tower(2, 1, 2, 4);
        let one = union_size_exact(&t, 1, 1 << 20).unwrap();
        let three = union_size_exact(&t, 3, 1 << 20).unwrap();
        assert_eq!(one, three);
        assert!(one.union_size <= 14400);
        assert_eq!(one.degree, one.union_size - 1);
        assert!(one.thm31_bound >= BigRational::new(336.into(), 239.into()));
    }

    #[test]
    fn union_budget() {
        let t = tower(2, 1, 2, 4);
        assert_eq!(
            union_size_exact(&t, 1, 1000).unwrap_err(),
            Error::BudgetExceeded { count: 20160, budget: 1000 }
        );
    }

    fn exhaustive(workers: usize) -> SearchConfig {
        SearchConfig { workers, early_exit: false, ..SearchConfig::default() }
    }

    #[test]
    fn greedy_meets_guarantee() {
        for (p, k, n) in [(2u64, 1usize, 2usize), (2, 1, 3), (2, 2, 4)] {
            let t = tower(p, 1, k, n);
            let stats = union_size_exact(&t, 2, 1 << 22).unwrap();
            let out = greedy_construct(&exhaustive(1), &t).unwrap();
            assert!(out.accepted() as u128 >= ceil_div(stats.gl_order, stats.union_size), "({n},{k},{p})");
            assert_eq!(out.scanned, stats.gl_order);
            let gs = GeneratingSet::desarguesian(&t);
            assert!(is_independent(&out.parallelism.generators, &gs, t.scalars()).unwrap());
        }
    }

    #[test]
    fn greedy_whole_space() {
        let t = tower(2, 1, 3, 3);
        let out = greedy_construct(&exhaustive(1), &t).unwrap();
        assert_eq!(out.accepted(), 1);
        assert!(out.reached_upper_bound);
        let early = greedy_construct(&SearchConfig::default(), &t).unwrap();
        assert_eq!(early.accepted(), 1);
        assert_eq!(early.scanned, 1);
    }

    #[test]
    fn greedy_workers_agree() {
        let t = tower(2, 1, 2, 4);
        let a = greedy_construct(&exhaustive(1), &t).unwrap();
        let b = greedy_construct(&exhaustive(4), &t).unwrap();
        assert_eq!(a.parallelism, b.parallelism);
        let cfg = SearchConfig { mode: SearchMode::Random, seed: 11, sample_limit: 500, workers: 3, ..exhaustive(1) };
        let c = greedy_construct(&cfg, &t).unwrap();
        let d = greedy_construct(&SearchConfig { workers: 1, ..cfg }, &t).unwrap();
        assert_eq!(c.parallelism, d.parallelism);
    }

    #[test]
    fn random_mode_deterministic_and_monotone() {
        let t = tower(2, 1, 2, 6);
        let cfg = |limit| SearchConfig {
            mode: SearchMode::Random,
            seed: 7,
            sample_limit: limit,
            early_exit: false,
            ..SearchConfig::default()
        };
        let a = greedy_construct(&cfg(300), &t).unwrap();
        let b = greedy_construct(&cfg(300), &t).unwrap();
        assert_eq!(a.parallelism.generators, b.parallelism.generators);
        let mut last = 0;
        for limit in [1, 10, 50, 300] {
            let out = greedy_construct(&cfg(limit), &t).unwrap();
            assert!(out.accepted() >= last);
            last = out.accepted();
        }
        assert!(last >= 1);
    }

    #[test]
    fn config_errors() {
        let t = tower(2, 1, 2, 4);
        let cfg = SearchConfig { workers: 0, ..SearchConfig::default() };
        assert!(greedy_construct(&cfg, &t).is_err());
        let cfg = SearchConfig { budget: 100, ..SearchConfig::default() };
        assert!(matches!(greedy_construct(&cfg, &t), Err(Error::BudgetExceeded { .. })));
    }
}
