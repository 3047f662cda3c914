use std::collections::BTreeSet;

use crate::canonical::{compress_matching, expand_matching, to_one_to_one};
use crate::capmod::{add_men_stabilize, delete_men_stabilize, MenPlan};
use crate::capmod::{caps_after_copy_change, Action, BudgetSpec, GroupPartition, PlanResult};
use crate::error::Error;
use crate::matching::Matching;
use crate::model::{CapacityVector, FirmId, Instance};

fn finish(
    inst: &Instance,
    map: &crate::canonical::CopyMap,
    plan: MenPlan,
    action: Action,
) -> PlanResult {
    if !plan.feasible {
        return PlanResult::infeasible(plan.reason.expect("infeasible plans carry a reason"));
    }
    let caps = caps_after_copy_change(
        inst.capacities(),
        plan.men.iter().map(|&p| map.firm_of(p)),
        action,
    );
    let cert = compress_matching(
        map,
        plan.certificate
            .as_ref()
            .expect("feasible plans carry a certificate"),
    );
    PlanResult::feasible(inst.capacities(), caps, cert)
}

/// Adds the fewest seats so that some stable matching lies inside `mu_star`.
/// Requires complete preferences.
pub fn add_capacity_stabilize(
    inst: &Instance,
    budget: &BudgetSpec,
    mu_star: &Matching,
) -> Result<PlanResult, Error> {
    mu_star.check_shape(inst)?;
    budget.validate(inst.n_firms())?;
    if !inst.is_complete() {
        return Err(Error::IncompletePreferences);
    }
    let mut extended = Vec::with_capacity(inst.n_firms());
    for f in inst.firms() {
        let limit = inst.capacity(f) + budget.firm_limit(f);
        if mu_star.size(f) > limit {
            return Err(Error::TargetExceedsBudget {
                firm: f,
                size: mu_star.size(f),
                limit,
            });
        }
        extended.push(inst.capacity(f).max(mu_star.size(f)));
    }
    let ext = inst.with_capacities(CapacityVector::new(extended));
    let (inst1, map) = to_one_to_one(&ext);
    let p_add: BTreeSet<FirmId> = map
        .copy_of
        .iter()
        .enumerate()
        .filter(|(_, &(f, i))| i >= inst.capacity(f))
        .map(|(p, _)| FirmId(p))
        .collect();
    let target = expand_matching(&ext, &map, mu_star)?;
    let plan = add_men_stabilize(&inst1, &p_add, budget.global, &target)?;
    Ok(finish(inst, &map, plan, Action::Add))
}

/// Deletes the fewest seats so that some stable matching lies inside `mu_star`.
pub fn delete_capacity_stabilize(
    inst: &Instance,
    budget: &BudgetSpec,
    mu_star: &Matching,
) -> Result<PlanResult, Error> {
    mu_star.check_shape(inst)?;
    budget.validate(inst.n_firms())?;
    for f in inst.firms() {
        if mu_star.size(f) > inst.capacity(f) {
            return Err(Error::InfeasibleTargetMatching {
                firm: f,
                size: mu_star.size(f),
                capacity: inst.capacity(f),
            });
        }
    }
    for (w, f) in mu_star.pairs() {
        if !inst.mutually_acceptable(w, f) {
            return Err(Error::UnacceptableTargetPair { worker: w, firm: f });
        }
    }
    let (inst1, map) = to_one_to_one(inst);
    let part = GroupPartition::new(
        map.firm_copies.clone(),
        inst.firms().map(|f| budget.firm_limit(f)).collect(),
    );
    let target = expand_matching(inst, &map, mu_star)?;
    let plan = delete_men_stabilize(&inst1, &part, budget.global, &target)?;
    Ok(finish(inst, &map, plan, Action::Delete))
}
