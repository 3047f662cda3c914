//! Exhaustive ground truth for small instances.

use std::str::FromStr;

use serde::Serialize;

use crate::capmod::{canonical_key, Action, BudgetSpec, InfeasibleReason, Objective, PlanResult};
use crate::error::Error;
use crate::matching::Matching;
use crate::model::{CapacityVector, FirmId, Instance, WorkerId};
use crate::stability::is_stable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleLimits {
    pub max_workers: usize,
    pub max_total_capacity: usize,
    pub max_budget: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_workers: 8,
            max_total_capacity: 10,
            max_budget: 4,
        }
    }
}

impl FromStr for OracleLimits {
    type Err = Error;

    /// Parses `"workers,cap,budget"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || {
            Error::LimitExceeded(format!(
                "malformed limits {s:?}, expected workers,cap,budget"
            ))
        };
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        match parts[..] {
            [w, c, b] if w > 0 && c > 0 && b > 0 => Ok(OracleLimits {
                max_workers: w,
                max_total_capacity: c,
                max_budget: b,
            }),
            _ => Err(bad()),
        }
    }
}

impl OracleLimits {
    pub fn new(max_workers: usize, max_total_capacity: usize, max_budget: usize) -> Self {
        OracleLimits {
            max_workers,
            max_total_capacity,
            max_budget,
        }
    }

    /// Capacity beyond the number of workers cannot be used, so it is not counted.
    pub fn check(&self, inst: &Instance) -> Result<(), Error> {
        if inst.n_workers() > self.max_workers {
            return Err(Error::LimitExceeded(format!(
                "{} workers > {}",
                inst.n_workers(),
                self.max_workers
            )));
        }
        let total: usize = inst
            .capacities()
            .as_slice()
            .iter()
            .map(|&c| c.min(inst.n_workers()))
            .sum();
        if total > self.max_total_capacity {
            return Err(Error::LimitExceeded(format!(
                "total capacity {total} > {}",
                self.max_total_capacity
            )));
        }
        Ok(())
    }

    pub fn check_budget(&self, budget: &BudgetSpec) -> Result<(), Error> {
        if budget.global > self.max_budget {
            return Err(Error::LimitExceeded(format!(
                "budget {} > {}",
                budget.global, self.max_budget
            )));
        }
        Ok(())
    }
}

pub fn enumerate_stable_matchings(
    inst: &Instance,
    limits: &OracleLimits,
) -> Result<Vec<Matching>, Error> {
    limits.check(inst)?;
    Ok(search(inst, |_, _| true, false))
}

/// Stable matchings in which every worker's assignment passes `allowed`.
/// Restricting the per-worker domain and then filtering by stability yields
/// exactly the stable matchings satisfying the restriction.
pub(crate) fn search(
    inst: &Instance,
    allowed: impl Fn(WorkerId, Option<FirmId>) -> bool,
    first_only: bool,
) -> Vec<Matching> {
    // Pairs that are not mutually acceptable never appear in a stable matching.
    let options: Vec<Vec<Option<FirmId>>> = inst
        .workers()
        .map(|w| {
            std::iter::once(None)
                .chain(
                    inst.firms()
                        .filter(|&f| inst.mutually_acceptable(w, f))
                        .map(Some),
                )
                .filter(|&o| allowed(w, o))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut assignment = vec![None; inst.n_workers()];
    let mut load = vec![0usize; inst.n_firms()];
    descend(
        inst,
        &options,
        0,
        &mut assignment,
        &mut load,
        first_only,
        &mut out,
    );
    out.sort();
    out
}

fn descend(
    inst: &Instance,
    options: &[Vec<Option<FirmId>>],
    w: usize,
    assignment: &mut Vec<Option<FirmId>>,
    load: &mut Vec<usize>,
    first_only: bool,
    out: &mut Vec<Matching>,
) -> bool {
    if w == options.len() {
        let mu = Matching::from_assignment(inst.n_firms(), assignment);
        if is_stable(inst, &mu) {
            out.push(mu);
            return first_only;
        }
        return false;
    }
    for &o in &options[w] {
        if let Some(f) = o {
            if load[f.0] >= inst.capacity(f) {
                continue;
            }
            load[f.0] += 1;
        }
        assignment[w] = o;
        let done = descend(inst, options, w + 1, assignment, load, first_only, out);
        if let Some(f) = o {
            load[f.0] -= 1;
        }
        if done {
            return true;
        }
    }
    assignment[w] = None;
    false
}

/// Whether some stable matching of `inst` satisfies `objective`.
pub(crate) fn objective_witness(inst: &Instance, objective: &Objective) -> Option<Matching> {
    let found = match objective {
        Objective::MatchPair { worker, firm } => {
            let (ws, fs) = (*worker, *firm);
            search(inst, |w, o| w != ws || o == Some(fs), true)
        }
        Objective::Stabilize(target) => {
            search(inst, |w, o| o.is_none() || o == target.partner(w), true)
        }
    };
    found.into_iter().next()
}

/// Every capacity vector reachable under `action` within `budget`.
pub fn candidate_vectors(
    base: &CapacityVector,
    action: Action,
    budget: &BudgetSpec,
) -> Vec<CapacityVector> {
    let n = base.len();
    let bound: Vec<usize> = (0..n)
        .map(|i| {
            let f = FirmId(i);
            let lim = budget.firm_limit(f);
            match action {
                Action::Add => lim,
                Action::Delete => lim.min(base.get(f)),
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut delta = vec![0usize; n];
    loop {
        if delta.iter().sum::<usize>() <= budget.global {
            let caps = (0..n)
                .map(|i| match action {
                    Action::Add => base.as_slice()[i] + delta[i],
                    Action::Delete => base.as_slice()[i] - delta[i],
                })
                .collect();
            out.push(CapacityVector::new(caps));
        }
        // Odometer increment.
        let mut i = 0;
        while i < n && delta[i] == bound[i] {
            delta[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        delta[i] += 1;
    }
    out
}

pub fn brute_force_plan(
    inst: &Instance,
    objective: &Objective,
    action: Action,
    budget: &BudgetSpec,
    limits: &OracleLimits,
) -> Result<PlanResult, Error> {
    limits.check(inst)?;
    limits.check_budget(budget)?;
    budget.validate(inst.n_firms())?;
    objective.validate(inst)?;
    let mut candidates = candidate_vectors(inst.capacities(), action, budget);
    candidates.sort_by_cached_key(|c| canonical_key(inst.capacities(), c, objective));
    for caps in candidates {
        let modified = inst.with_capacities(caps.clone());
        if let Some(mu) = objective_witness(&modified, objective) {
            return Ok(PlanResult::feasible(inst.capacities(), caps, mu));
        }
    }
    Ok(PlanResult::infeasible(InfeasibleReason::NoFeasibleCapacity))
}

/// Largest stable-match size of `f` over its own capacity `0..=n_workers`.
pub fn brute_force_peak(inst: &Instance, f: FirmId, limits: &OracleLimits) -> Result<usize, Error> {
    inst.check_firm(f)?;
    limits.check(inst)?;
    let mut best = 0;
    for b in 0..=inst.n_workers() {
        let modified = inst.with_capacity(f, b);
        for mu in search(&modified, |_, _| true, false) {
            best = best.max(mu.size(f));
        }
    }
    Ok(best)
}
