//! One-to-one subroutines that delete or add men to stabilize a target matching.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::canonical::OneToOneInstance;
use crate::capmod::InfeasibleReason;
use crate::error::Error;
use crate::matching::Matching;
use crate::model::{CapacityVector, FirmId, Instance, WorkerId};
use crate::stability::{is_blocking_pair, is_stable};

/// Men of a one-to-one instance split into groups with their own budgets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPartition {
    pub groups: Vec<Vec<FirmId>>,
    pub budgets: Vec<usize>,
}

impl GroupPartition {
    pub fn new(groups: Vec<Vec<FirmId>>, budgets: Vec<usize>) -> Self {
        GroupPartition { groups, budgets }
    }

    /// A single group holding every man.
    pub fn single(n_men: usize, budget: usize) -> Self {
        GroupPartition {
            groups: vec![(0..n_men).map(FirmId).collect()],
            budgets: vec![budget],
        }
    }

    pub fn validate(&self, n_men: usize) -> Result<(), Error> {
        if self.groups.len() != self.budgets.len() {
            return Err(Error::InvalidGroupPartition(format!(
                "{} groups but {} budgets",
                self.groups.len(),
                self.budgets.len()
            )));
        }
        let mut seen = vec![false; n_men];
        for p in self.groups.iter().flatten() {
            match seen.get_mut(p.0) {
                None => return Err(Error::InvalidGroupPartition(format!("unknown man {}", p.0))),
                Some(true) => {
                    return Err(Error::InvalidGroupPartition(format!(
                        "man {} in two groups",
                        p.0
                    )))
                }
                Some(s) => *s = true,
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGroupPartition(format!("man {p} in no group")));
        }
        Ok(())
    }
}

/// Outcome of a one-to-one planner: the men deleted or added and the certifying matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MenPlan {
    pub feasible: bool,
    pub men: BTreeSet<FirmId>,
    pub certificate: Option<Matching>,
    pub reason: Option<InfeasibleReason>,
}

impl MenPlan {
    pub(crate) fn yes(men: BTreeSet<FirmId>, certificate: Matching) -> Self {
        MenPlan {
            feasible: true,
            men,
            certificate: Some(certificate),
            reason: None,
        }
    }

    pub(crate) fn no(reason: InfeasibleReason) -> Self {
        MenPlan {
            feasible: false,
            men: BTreeSet::new(),
            certificate: None,
            reason: Some(reason),
        }
    }
}

fn check_unit(inst: &Instance, mu: &Matching) -> Result<(), Error> {
    mu.check_shape(inst)?;
    mu.check_feasible(inst.capacities()).map_err(|e| match e {
        Error::InfeasibleMatching {
            firm,
            size,
            capacity,
        } => Error::InfeasibleTargetMatching {
            firm,
            size,
            capacity,
        },
        e => e,
    })
}

/// The market with only the `present` men.
fn with_men(inst: &Instance, present: &[bool]) -> Instance {
    let caps = present.iter().map(|&p| usize::from(p)).collect();
    inst.with_capacities(CapacityVector::new(caps))
}

/// Men in some blocking pair, or holding a partner that is not mutually acceptable.
fn blocking_men(inst: &Instance, mu: &Matching, present: &[bool]) -> BTreeSet<FirmId> {
    let mut out = BTreeSet::new();
    for (q, p) in mu.pairs() {
        if !inst.mutually_acceptable(q, p) {
            out.insert(p);
        }
    }
    for q in inst.workers() {
        for &p in inst.worker_prefs(q) {
            if present[p.0] && is_blocking_pair(inst, mu, q, p) {
                out.insert(p);
            }
        }
    }
    out
}

/// Deletes exactly the men that every stabilizing deletion must remove.
pub fn delete_men_stabilize(
    inst1: &OneToOneInstance,
    part: &GroupPartition,
    budget: usize,
    mu_star: &Matching,
) -> Result<MenPlan, Error> {
    let inst = inst1.instance();
    part.validate(inst1.n_men())?;
    check_unit(inst, mu_star)?;
    let mut present = vec![true; inst1.n_men()];
    let mut deleted = BTreeSet::new();
    loop {
        let current = with_men(inst, &present);
        let mu = mu_star.restrict(|_, p| present[p.0]);
        let blocking = blocking_men(&current, &mu, &present);
        if blocking.is_empty() {
            break;
        }
        for p in blocking {
            present[p.0] = false;
            deleted.insert(p);
        }
    }
    if deleted.len() > budget {
        return Ok(MenPlan::no(InfeasibleReason::BudgetExceeded));
    }
    for (group, &limit) in part.groups.iter().zip(&part.budgets) {
        if group.iter().filter(|p| deleted.contains(p)).count() > limit {
            return Ok(MenPlan::no(InfeasibleReason::GroupBudgetExceeded));
        }
    }
    let certificate = mu_star.restrict(|_, p| present[p.0]);
    Ok(MenPlan::yes(deleted, certificate))
}

/// Adds exactly the men of `p_add` that every stabilizing addition must include.
///
/// Starts from `mu_star` on the original men and repeatedly brings in the
/// `mu_star` partner of every woman in a blocking pair, until nothing changes.
pub fn add_men_stabilize(
    inst1: &OneToOneInstance,
    p_add: &BTreeSet<FirmId>,
    budget: usize,
    mu_star: &Matching,
) -> Result<MenPlan, Error> {
    let inst = inst1.instance();
    if !inst.is_complete() {
        return Err(Error::IncompletePreferences);
    }
    check_unit(inst, mu_star)?;
    for p in p_add {
        inst.check_firm(*p)?;
    }
    let mut present: Vec<bool> = inst.firms().map(|p| !p_add.contains(&p)).collect();
    let mut added = BTreeSet::new();
    loop {
        let current = with_men(inst, &present);
        let mu = mu_star.restrict(|_, p| present[p.0]);
        let blocking_women: BTreeSet<WorkerId> = inst
            .workers()
            .filter(|&q| {
                inst.worker_prefs(q)
                    .iter()
                    .any(|&p| present[p.0] && is_blocking_pair(&current, &mu, q, p))
            })
            .collect();
        let fresh: Vec<FirmId> = blocking_women
            .iter()
            .filter_map(|&q| mu_star.partner(q))
            .filter(|p| !present[p.0])
            .collect();
        if fresh.is_empty() {
            break;
        }
        for p in fresh {
            present[p.0] = true;
            added.insert(p);
        }
    }
    let current = with_men(inst, &present);
    let mu = mu_star.restrict(|_, p| present[p.0]);
    if !is_stable(&current, &mu) {
        return Ok(MenPlan::no(InfeasibleReason::UnfixableBlockingPair));
    }
    if added.len() > budget {
        return Ok(MenPlan::no(InfeasibleReason::BudgetExceeded));
    }
    Ok(MenPlan::yes(added, mu))
}
