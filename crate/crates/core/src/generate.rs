//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{ExtensionKind, FirmId, Instance, InstanceParts, WorkerId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub n_firms: usize,
    pub n_workers: usize,
    pub max_cap: usize,
    pub extension: ExtensionKind,
}

/// Uniform permutations, each truncated at a uniform cutoff; capacities uniform in `0..=max_cap`.
pub fn random_instance<R: Rng>(rng: &mut R, p: &GenParams) -> Instance {
    let capacities = (0..p.n_firms)
        .map(|_| rng.gen_range(0..=p.max_cap))
        .collect();
    let firm_prefs = (0..p.n_firms)
        .map(|_| {
            truncated_perm(rng, p.n_workers)
                .into_iter()
                .map(WorkerId)
                .collect()
        })
        .collect();
    let worker_prefs = (0..p.n_workers)
        .map(|_| {
            truncated_perm(rng, p.n_firms)
                .into_iter()
                .map(FirmId)
                .collect()
        })
        .collect();
    Instance::new(InstanceParts {
        n_firms: p.n_firms,
        n_workers: p.n_workers,
        capacities,
        firm_prefs,
        worker_prefs,
        extensions: vec![p.extension; p.n_firms],
    })
    .expect("generated lists are valid")
}

/// Like [`random_instance`] but every agent finds every other-side agent acceptable.
pub fn complete_instance<R: Rng>(rng: &mut R, p: &GenParams) -> Instance {
    let capacities = (0..p.n_firms)
        .map(|_| rng.gen_range(0..=p.max_cap))
        .collect();
    let firm_prefs = (0..p.n_firms)
        .map(|_| perm(rng, p.n_workers).into_iter().map(WorkerId).collect())
        .collect();
    let worker_prefs = (0..p.n_workers)
        .map(|_| perm(rng, p.n_firms).into_iter().map(FirmId).collect())
        .collect();
    Instance::new(InstanceParts {
        n_firms: p.n_firms,
        n_workers: p.n_workers,
        capacities,
        firm_prefs,
        worker_prefs,
        extensions: vec![p.extension; p.n_firms],
    })
    .expect("generated lists are valid")
}

/// One shared order over firms for all workers and one over workers for all firms;
/// every firm gets `max_cap` seats.
pub fn masterlist_instance<R: Rng>(rng: &mut R, p: &GenParams) -> Instance {
    let firm_order: Vec<FirmId> = perm(rng, p.n_firms).into_iter().map(FirmId).collect();
    let worker_order: Vec<WorkerId> = perm(rng, p.n_workers).into_iter().map(WorkerId).collect();
    Instance::new(InstanceParts {
        n_firms: p.n_firms,
        n_workers: p.n_workers,
        capacities: vec![p.max_cap; p.n_firms],
        firm_prefs: vec![worker_order; p.n_firms],
        worker_prefs: vec![firm_order; p.n_workers],
        extensions: vec![p.extension; p.n_firms],
    })
    .expect("generated lists are valid")
}

fn perm<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

fn truncated_perm<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v = perm(rng, n);
    let cut = rng.gen_range(0..=n);
    v.truncate(cut);
    v
}
