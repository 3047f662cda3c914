//! Firm copies: a capacity-c firm becomes c unit-capacity men.

use serde::Serialize;

use crate::error::Error;
use crate::matching::Matching;
use crate::model::{FirmId, Instance, InstanceParts, WorkerId};

/// An instance whose capacities are all 1. Men are `FirmId`s, women are `WorkerId`s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneToOneInstance(Instance);

impl OneToOneInstance {
    pub fn new(inst: Instance) -> Result<Self, Error> {
        for f in inst.firms() {
            if inst.capacity(f) != 1 {
                return Err(Error::InfeasibleMatching {
                    firm: f,
                    size: inst.capacity(f),
                    capacity: 1,
                });
            }
        }
        Ok(OneToOneInstance(inst))
    }

    pub fn instance(&self) -> &Instance {
        &self.0
    }

    pub fn n_men(&self) -> usize {
        self.0.n_firms()
    }

    pub fn n_women(&self) -> usize {
        self.0.n_workers()
    }

    pub fn men(&self) -> impl Iterator<Item = FirmId> {
        self.0.firms()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyMap {
    /// Men standing for each original firm, best copy first.
    pub firm_copies: Vec<Vec<FirmId>>,
    /// Original firm and 0-based copy ordinal of each man.
    pub copy_of: Vec<(FirmId, usize)>,
    pub worker_of_woman: Vec<WorkerId>,
}

impl CopyMap {
    pub fn firm_of(&self, man: FirmId) -> FirmId {
        self.copy_of[man.0].0
    }

    pub fn ordinal(&self, man: FirmId) -> usize {
        self.copy_of[man.0].1
    }

    pub fn n_firms(&self) -> usize {
        self.firm_copies.len()
    }
}

pub fn to_one_to_one(inst: &Instance) -> (OneToOneInstance, CopyMap) {
    let mut firm_copies = Vec::with_capacity(inst.n_firms());
    let mut copy_of = Vec::new();
    for f in inst.firms() {
        let copies: Vec<FirmId> = (0..inst.capacity(f))
            .map(|i| {
                copy_of.push((f, i));
                FirmId(copy_of.len() - 1)
            })
            .collect();
        firm_copies.push(copies);
    }
    let men = copy_of.len();
    let man_prefs: Vec<Vec<WorkerId>> = copy_of
        .iter()
        .map(|&(f, _)| inst.firm_prefs(f).to_vec())
        .collect();
    let woman_prefs: Vec<Vec<FirmId>> = inst
        .workers()
        .map(|w| {
            inst.worker_prefs(w)
                .iter()
                .flat_map(|g| firm_copies[g.0].iter().copied())
                .collect()
        })
        .collect();
    let extensions = copy_of.iter().map(|&(f, _)| inst.extension(f)).collect();
    let reduced = Instance::new(InstanceParts {
        n_firms: men,
        n_workers: inst.n_workers(),
        capacities: vec![1; men],
        firm_prefs: man_prefs,
        worker_prefs: woman_prefs,
        extensions,
    })
    .expect("copies of a valid instance are valid");
    let map = CopyMap {
        firm_copies,
        copy_of,
        worker_of_woman: inst.workers().collect(),
    };
    (OneToOneInstance(reduced), map)
}

pub fn compress_matching(map: &CopyMap, mu1: &Matching) -> Matching {
    let pairs = mu1
        .pairs()
        .map(|(q, p)| (map.worker_of_woman[q.0], map.firm_of(p)));
    Matching::from_pairs(map.n_firms(), map.worker_of_woman.len(), pairs)
        .expect("each woman has at most one man")
}

/// Copy i of f takes f's i-th most preferred worker in `mu(f)`.
pub fn expand_matching(inst: &Instance, map: &CopyMap, mu: &Matching) -> Result<Matching, Error> {
    mu.check_shape(inst)?;
    let mut out = Matching::empty(map.copy_of.len(), mu.n_workers());
    for f in inst.firms() {
        let copies = &map.firm_copies[f.0];
        let mut held: Vec<WorkerId> = mu.workers_of(f).iter().copied().collect();
        if held.len() > copies.len() {
            return Err(Error::InfeasibleMatching {
                firm: f,
                size: held.len(),
                capacity: copies.len(),
            });
        }
        held.sort_by_key(|&w| (inst.firm_rank(f, w).is_none(), inst.firm_rank(f, w), w));
        for (&man, w) in copies.iter().zip(held) {
            out.assign(w, man)?;
        }
    }
    Ok(out)
}
