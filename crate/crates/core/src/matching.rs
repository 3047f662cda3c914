use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::model::{CapacityVector, FirmId, Instance, WorkerId};

/// Many-to-one assignment. Both directions are kept in sync by every mutator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Matching {
    firm_to_workers: Vec<BTreeSet<WorkerId>>,
    worker_to_firm: Vec<Option<FirmId>>,
}

impl Matching {
    pub fn empty(n_firms: usize, n_workers: usize) -> Self {
        Matching {
            firm_to_workers: vec![BTreeSet::new(); n_firms],
            worker_to_firm: vec![None; n_workers],
        }
    }

    pub fn empty_for(inst: &Instance) -> Self {
        Matching::empty(inst.n_firms(), inst.n_workers())
    }

    pub fn from_pairs(
        n_firms: usize,
        n_workers: usize,
        pairs: impl IntoIterator<Item = (WorkerId, FirmId)>,
    ) -> Result<Self, Error> {
        let mut mu = Matching::empty(n_firms, n_workers);
        for (w, f) in pairs {
            mu.assign(w, f)?;
        }
        Ok(mu)
    }

    /// Builds from a per-worker assignment vector.
    pub fn from_assignment(n_firms: usize, assignment: &[Option<FirmId>]) -> Self {
        let mut mu = Matching::empty(n_firms, assignment.len());
        for (w, f) in assignment.iter().enumerate() {
            if let Some(f) = f {
                mu.worker_to_firm[w] = Some(*f);
                mu.firm_to_workers[f.0].insert(WorkerId(w));
            }
        }
        mu
    }

    pub fn n_firms(&self) -> usize {
        self.firm_to_workers.len()
    }

    pub fn n_workers(&self) -> usize {
        self.worker_to_firm.len()
    }

    pub fn fits(&self, inst: &Instance) -> bool {
        self.n_firms() == inst.n_firms() && self.n_workers() == inst.n_workers()
    }

    pub fn check_shape(&self, inst: &Instance) -> Result<(), Error> {
        if self.fits(inst) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                n_firms: inst.n_firms(),
                n_workers: inst.n_workers(),
                found_firms: self.n_firms(),
                found_workers: self.n_workers(),
            })
        }
    }

    pub fn assign(&mut self, w: WorkerId, f: FirmId) -> Result<(), Error> {
        if w.0 >= self.n_workers() {
            return Err(Error::InvalidId(w.into()));
        }
        if f.0 >= self.n_firms() {
            return Err(Error::InvalidId(f.into()));
        }
        if self.worker_to_firm[w.0].is_some() {
            return Err(Error::WorkerMatchedTwice { worker: w });
        }
        self.worker_to_firm[w.0] = Some(f);
        self.firm_to_workers[f.0].insert(w);
        Ok(())
    }

    pub fn unassign(&mut self, w: WorkerId) -> Option<FirmId> {
        let f = self.worker_to_firm[w.0].take()?;
        self.firm_to_workers[f.0].remove(&w);
        Some(f)
    }

    pub fn partner(&self, w: WorkerId) -> Option<FirmId> {
        self.worker_to_firm[w.0]
    }

    pub fn workers_of(&self, f: FirmId) -> &BTreeSet<WorkerId> {
        &self.firm_to_workers[f.0]
    }

    pub fn size(&self, f: FirmId) -> usize {
        self.firm_to_workers[f.0].len()
    }

    pub fn contains(&self, w: WorkerId, f: FirmId) -> bool {
        self.worker_to_firm[w.0] == Some(f)
    }

    /// Matched pairs in worker order.
    pub fn pairs(&self) -> impl Iterator<Item = (WorkerId, FirmId)> + '_ {
        self.worker_to_firm
            .iter()
            .enumerate()
            .filter_map(|(w, f)| f.map(|f| (WorkerId(w), f)))
    }

    pub fn len(&self) -> usize {
        self.worker_to_firm.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn assignment(&self) -> &[Option<FirmId>] {
        &self.worker_to_firm
    }

    /// First firm over capacity, if any.
    pub fn check_feasible(&self, caps: &CapacityVector) -> Result<(), Error> {
        for (f, set) in self.firm_to_workers.iter().enumerate() {
            let c = caps.as_slice().get(f).copied().unwrap_or(0);
            if set.len() > c {
                return Err(Error::InfeasibleMatching {
                    firm: FirmId(f),
                    size: set.len(),
                    capacity: c,
                });
            }
        }
        Ok(())
    }

    pub fn is_feasible(&self, caps: &CapacityVector) -> bool {
        self.check_feasible(caps).is_ok()
    }

    /// Keeps only the pairs accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(WorkerId, FirmId) -> bool) -> Matching {
        let mut mu = Matching::empty(self.n_firms(), self.n_workers());
        for (w, f) in self.pairs() {
            if keep(w, f) {
                mu.worker_to_firm[w.0] = Some(f);
                mu.firm_to_workers[f.0].insert(w);
            }
        }
        mu
    }

    pub fn is_subset_of(&self, other: &Matching) -> bool {
        self.pairs().all(|(w, f)| other.contains(w, f))
    }

    /// Both directions agree.
    pub fn is_consistent(&self) -> bool {
        let forward = self.firm_to_workers.iter().enumerate().all(|(f, set)| {
            set.iter()
                .all(|w| self.worker_to_firm.get(w.0) == Some(&Some(FirmId(f))))
        });
        let backward = self.pairs().all(|(w, f)| {
            self.firm_to_workers
                .get(f.0)
                .is_some_and(|s| s.contains(&w))
        });
        forward && backward
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{{")?;
        let mut first = true;
        for (f, set) in self.firm_to_workers.iter().enumerate() {
            if set.is_empty() {
                continue;
            }
            if !first {
                write!(fm, ",")?;
            }
            first = false;
            let ws: Vec<String> = set.iter().map(|w| w.to_string()).collect();
            write!(fm, "({{{}}},{})", ws.join(","), FirmId(f))?;
        }
        write!(fm, "}}")
    }
}
