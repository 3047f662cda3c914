#![allow(dead_code)]

pub mod sweeps;

use std::collections::BTreeSet;

use capmatch::generate::{complete_instance, random_instance, GenParams};
use capmatch::{ExtensionKind, FirmId, Instance, InstanceParts, Matching, WorkerId};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use ExtensionKind::{Lexicographic as LEX, StronglyMonotone as SM};

/// Builds from 1-based lists.
pub fn inst(
    caps: &[usize],
    firms: &[&[usize]],
    workers: &[&[usize]],
    ext: ExtensionKind,
) -> Instance {
    Instance::new(InstanceParts {
        n_firms: firms.len(),
        n_workers: workers.len(),
        capacities: caps.to_vec(),
        firm_prefs: firms
            .iter()
            .map(|l| l.iter().map(|&w| WorkerId(w - 1)).collect())
            .collect(),
        worker_prefs: workers
            .iter()
            .map(|l| l.iter().map(|&f| FirmId(f - 1)).collect())
            .collect(),
        extensions: vec![ext; firms.len()],
    })
    .unwrap()
}

pub fn f(i: usize) -> FirmId {
    FirmId(i - 1)
}

pub fn w(i: usize) -> WorkerId {
    WorkerId(i - 1)
}

pub fn set(ws: &[usize]) -> BTreeSet<WorkerId> {
    ws.iter().map(|&i| w(i)).collect()
}

/// 1-based `(worker, firm)` pairs.
pub fn matching(inst: &Instance, pairs: &[(usize, usize)]) -> Matching {
    Matching::from_pairs(
        inst.n_firms(),
        inst.n_workers(),
        pairs.iter().map(|&(a, b)| (w(a), f(b))),
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random market: up to 4 firms, 5 workers, capacities up to 2, either extension.
pub fn small_random(rng: &mut ChaCha8Rng) -> Instance {
    let p = small_params(rng);
    random_instance(rng, &p)
}

pub fn small_complete(rng: &mut ChaCha8Rng) -> Instance {
    let p = small_params(rng);
    complete_instance(rng, &p)
}

pub fn small_params(rng: &mut ChaCha8Rng) -> GenParams {
    GenParams {
        n_firms: rng.gen_range(1..=4),
        n_workers: rng.gen_range(1..=5),
        max_cap: 2,
        extension: if rng.gen_bool(0.5) { LEX } else { SM },
    }
}

// Worked instances. Lists are most preferred first.

/// Two workers and two firms sharing one order; `f1` starts with no seat.
pub fn master_list() -> Instance {
    inst(&[0, 1], &[&[1, 2], &[1, 2]], &[&[1, 2], &[1, 2]], LEX)
}

/// Adding a seat can hurt a lexicographic firm.
pub fn lp_firm_worse(caps: &[usize]) -> Instance {
    lp_firm_worse_ext(caps, LEX)
}

pub fn lp_firm_worse_ext(caps: &[usize], ext: ExtensionKind) -> Instance {
    inst(
        caps,
        &[&[1, 2, 3], &[3, 2, 1]],
        &[&[2, 1], &[1, 2], &[1, 2]],
        ext,
    )
}

/// Adding a seat can hurt a strongly monotone firm under FPDA.
pub fn increase_firm_worse(caps: &[usize]) -> Instance {
    inst(caps, &[&[1, 2], &[2, 1]], &[&[2, 1], &[1, 2]], SM)
}

/// Three workers, two firms with two seats each.
pub fn canonical_example() -> Instance {
    inst(
        &[2, 2],
        &[&[2, 1], &[3, 2, 1]],
        &[&[1, 2], &[2, 1], &[2]],
        SM,
    )
}

/// A firm receives proposals from every worker but peaks at 2.
pub fn peak_vs_proposals() -> Instance {
    inst(
        &[1, 1, 1],
        &[&[1, 2, 3, 4], &[2, 3, 1, 4], &[3, 4, 2, 1]],
        &[&[1, 2, 3], &[1, 2, 3], &[2, 1, 3], &[3, 1, 2]],
        LEX,
    )
}

/// Below peak under WPDA, misreporting wins.
pub fn wosm_pref_below(ext: ExtensionKind) -> Instance {
    inst(
        &[1, 1, 1],
        &[&[4, 1, 2, 3], &[3, 2, 1, 4], &[1, 4, 2, 3]],
        &[&[2, 1, 3], &[1, 2, 3], &[1, 2, 3], &[3, 1, 2]],
        ext,
    )
}

/// Below peak under WPDA, deleting a seat wins.
pub fn wosm_del_below() -> Instance {
    inst(
        &[2, 1, 1],
        &[&[1, 2, 3, 4], &[2, 4, 1, 3], &[3, 4, 1, 2]],
        &[&[3, 2, 1], &[1, 2, 3], &[1, 3, 2], &[1, 3, 2]],
        LEX,
    )
}

/// Five workers, two firms, one master list on each side.
pub fn masterlist5(ext: ExtensionKind) -> Instance {
    inst(
        &[2, 2],
        &[&[1, 2, 3, 4, 5], &[1, 2, 3, 4, 5]],
        &[&[1, 2], &[1, 2], &[1, 2], &[1, 2], &[1, 2]],
        ext,
    )
}

/// Below peak under FPDA, misreporting wins.
pub fn fosm_pref(ext: ExtensionKind) -> Instance {
    inst(
        &[2, 3],
        &[&[1, 4, 5, 6, 2, 3], &[4, 5, 6, 1, 2, 3]],
        &[&[2, 1], &[2, 1], &[2, 1], &[1, 2], &[1, 2], &[1, 2]],
        ext,
    )
}

/// Below peak under FPDA, deleting beats misreporting.
pub fn fosm_del_pref_below() -> Instance {
    inst(
        &[2, 1, 2],
        &[&[1, 2, 3, 4], &[2, 1, 3, 4], &[3, 4, 1, 2]],
        &[&[3, 2, 1], &[1, 2, 3], &[1, 2, 3], &[1, 2, 3]],
        LEX,
    )
}

/// Below peak under FPDA, deleting beats adding.
pub fn fosm_del_add_below() -> Instance {
    inst(
        &[2, 1],
        &[&[4, 2, 1, 3], &[2, 4, 1, 3]],
        &[&[1, 2], &[1, 2], &[2, 1], &[2, 1]],
        LEX,
    )
}

/// At peak under FPDA, misreporting wins.
pub fn pref_at_peak(ext: ExtensionKind) -> Instance {
    inst(
        &[2, 2],
        &[&[1, 2, 3, 4], &[2, 3, 1, 4]],
        &[&[2, 1], &[1, 2], &[1, 2], &[2, 1]],
        ext,
    )
}

/// Strongly monotone firm above peak that gains by deleting under FPDA.
pub fn smp_del_above_peak() -> Instance {
    inst(
        &[3, 1],
        &[&[1, 2, 3], &[3, 2, 1]],
        &[&[2, 1], &[2, 1], &[1, 2]],
        SM,
    )
}
