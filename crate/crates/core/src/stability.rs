use serde::Serialize;

use crate::error::Error;
use crate::matching::Matching;
use crate::model::{FirmId, Instance, WorkerId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Blocker {
    /// `f` holds `w` but finds `w` unacceptable.
    ByFirm {
        firm: FirmId,
        worker: WorkerId,
    },
    /// `w` is matched to a firm it finds unacceptable.
    ByWorker {
        worker: WorkerId,
    },
    ByPair {
        worker: WorkerId,
        firm: FirmId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub blockers: Vec<Blocker>,
}

pub fn is_blocking_pair(inst: &Instance, mu: &Matching, w: WorkerId, f: FirmId) -> bool {
    let current = mu.partner(w);
    if current == Some(f) || !inst.firm_accepts(f, w) {
        return false;
    }
    if !inst.worker_prefers(w, Some(f), current) {
        return false;
    }
    let held = mu.workers_of(f);
    held.len() < inst.capacity(f) || held.iter().any(|&v| inst.firm_prefers(f, w, v))
}

pub fn check_stability(inst: &Instance, mu: &Matching) -> Result<StabilityReport, Error> {
    mu.check_shape(inst)?;
    mu.check_feasible(inst.capacities())?;
    let mut keyed = Vec::new();
    for w in inst.workers() {
        if let Some(f) = mu.partner(w) {
            if !inst.firm_accepts(f, w) {
                keyed.push(((w.0, f.0, 0), Blocker::ByFirm { firm: f, worker: w }));
            }
            if !inst.worker_accepts(w, f) {
                keyed.push(((w.0, f.0, 1), Blocker::ByWorker { worker: w }));
            }
        }
        for f in inst.firms() {
            if is_blocking_pair(inst, mu, w, f) {
                keyed.push(((w.0, f.0, 2), Blocker::ByPair { worker: w, firm: f }));
            }
        }
    }
    keyed.sort_by_key(|(k, _)| *k);
    let blockers: Vec<Blocker> = keyed.into_iter().map(|(_, b)| b).collect();
    Ok(StabilityReport {
        stable: blockers.is_empty(),
        blockers,
    })
}

/// Fast yes/no stability test; false for infeasible or misshapen matchings.
pub fn is_stable(inst: &Instance, mu: &Matching) -> bool {
    if !mu.fits(inst) || !mu.is_feasible(inst.capacities()) {
        return false;
    }
    for (w, f) in mu.pairs() {
        if !inst.mutually_acceptable(w, f) {
            return false;
        }
    }
    inst.workers().all(|w| {
        inst.worker_prefs(w)
            .iter()
            .all(|&f| !is_blocking_pair(inst, mu, w, f))
    })
}
