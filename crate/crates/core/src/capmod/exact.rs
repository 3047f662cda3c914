//! Exhaustive solvers for the budgeted match-pair problems, which have no
//! known polynomial algorithm.

use crate::capmod::{
    add_capacity_match_pair, canonical_key, Action, BudgetSpec, InfeasibleReason, Objective,
    PlanResult,
};
use crate::error::Error;
use crate::model::{CapacityVector, FirmId, Instance, WorkerId};

fn candidates(
    inst: &Instance,
    action: Action,
    budget: &BudgetSpec,
    objective: &Objective,
) -> Vec<CapacityVector> {
    let base = inst.capacities();
    let n = inst.n_firms();
    let bound: Vec<usize> = (0..n)
        .map(|i| {
            let lim = budget.firm_limit(FirmId(i));
            match action {
                Action::Add => lim,
                Action::Delete => lim.min(base.as_slice()[i]),
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut delta = Vec::with_capacity(n);
    collect(&bound, budget.global, &mut delta, &mut |d| {
        let caps = base
            .as_slice()
            .iter()
            .zip(d)
            .map(|(&c, &x)| match action {
                Action::Add => c + x,
                Action::Delete => c - x,
            })
            .collect();
        out.push(CapacityVector::new(caps));
    });
    out.sort_by_cached_key(|c| canonical_key(base, c, objective));
    out
}

// Depth-first over change vectors, pruning on the remaining global budget.
fn collect(bound: &[usize], left: usize, delta: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if delta.len() == bound.len() {
        emit(delta);
        return;
    }
    for x in 0..=bound[delta.len()].min(left) {
        delta.push(x);
        collect(bound, left - x, delta, emit);
        delta.pop();
    }
}

fn solve(
    inst: &Instance,
    w: WorkerId,
    f: FirmId,
    budget: &BudgetSpec,
    action: Action,
) -> Result<PlanResult, Error> {
    inst.check_worker(w)?;
    inst.check_firm(f)?;
    if budget.per_firm.is_none() {
        return Err(Error::BudgetSpecMissing);
    }
    budget.validate(inst.n_firms())?;
    if !inst.mutually_acceptable(w, f) {
        return Ok(PlanResult::infeasible(
            InfeasibleReason::MutuallyUnacceptablePair,
        ));
    }
    let objective = Objective::MatchPair { worker: w, firm: f };
    for caps in candidates(inst, action, budget, &objective) {
        let modified = inst.with_capacities(caps.clone());
        let check = add_capacity_match_pair(&modified, w, f, 0)?;
        if check.feasible {
            let cert = check
                .certificate
                .expect("feasible plans carry a certificate");
            return Ok(PlanResult::feasible(inst.capacities(), caps, cert));
        }
    }
    Ok(PlanResult::infeasible(InfeasibleReason::NoFeasibleCapacity))
}

pub fn budgeted_add_match_pair_exact(
    inst: &Instance,
    w: WorkerId,
    f: FirmId,
    budget: &BudgetSpec,
) -> Result<PlanResult, Error> {
    solve(inst, w, f, budget, Action::Add)
}

pub fn budgeted_delete_match_pair_exact(
    inst: &Instance,
    w: WorkerId,
    f: FirmId,
    budget: &BudgetSpec,
) -> Result<PlanResult, Error> {
    solve(inst, w, f, budget, Action::Delete)
}
