use std::collections::BTreeSet;

use crate::canonical::{compress_matching, to_one_to_one, OneToOneInstance};
use crate::capmod::add_capacity_match_pair;
use crate::capmod::{
    canonical_key, caps_after_copy_change, Action, InfeasibleReason, MenPlan, Objective, PlanResult,
};
use crate::da::wpda;
use crate::error::Error;
use crate::model::{CapacityVector, FirmId, Instance, WorkerId};

/// Deletes the fewest men so that man `p_star` and woman `q_star` are matched in some stable matching.
pub fn delete_men_match_pair(
    inst1: &OneToOneInstance,
    p_star: FirmId,
    q_star: WorkerId,
    budget: usize,
) -> Result<MenPlan, Error> {
    let inst = inst1.instance();
    inst.check_firm(p_star)?;
    inst.check_worker(q_star)?;
    if !inst.mutually_acceptable(q_star, p_star) {
        return Ok(MenPlan::no(InfeasibleReason::MutuallyUnacceptablePair));
    }
    // Men q* prefers to p*, and women p* prefers to q*.
    let a: BTreeSet<FirmId> = inst
        .worker_prefs(q_star)
        .iter()
        .copied()
        .take_while(|&p| p != p_star)
        .filter(|&p| inst.firm_accepts(p, q_star))
        .collect();
    let b: BTreeSet<WorkerId> = inst
        .firm_prefs(p_star)
        .iter()
        .copied()
        .take_while(|&q| q != q_star)
        .filter(|&q| inst.worker_accepts(q, p_star))
        .collect();

    let mut parts = inst.to_parts();
    parts.capacities[p_star.0] = 0;
    parts.firm_prefs[p_star.0].clear();
    parts.worker_prefs[q_star.0].clear();
    for (p, list) in parts.firm_prefs.iter_mut().enumerate() {
        if a.contains(&FirmId(p)) {
            list.truncate(inst.firm_rank(FirmId(p), q_star).expect("a accepts q*"));
        } else {
            list.retain(|&q| q != q_star);
        }
    }
    for (q, list) in parts.worker_prefs.iter_mut().enumerate() {
        if b.contains(&WorkerId(q)) {
            list.truncate(inst.worker_rank(WorkerId(q), p_star).expect("b accepts p*"));
        } else {
            list.retain(|&p| p != p_star);
        }
    }
    let truncated = Instance::new(parts).expect("truncation keeps lists valid");
    let (mut mu, _) = wpda(&truncated);
    if b.iter().any(|&q| mu.partner(q).is_none()) {
        return Ok(MenPlan::no(InfeasibleReason::UnmatchedPreferredWoman));
    }
    let unmatched: BTreeSet<FirmId> = a.into_iter().filter(|&p| mu.size(p) == 0).collect();
    if unmatched.len() > budget {
        return Ok(MenPlan::no(InfeasibleReason::TooManyUnmatchedPreferredMen));
    }
    mu.assign(q_star, p_star)?;
    Ok(MenPlan::yes(unmatched, mu))
}

/// First feasible `delete_men_match_pair` over `p_star_set` in ascending order.
pub fn delete_men_multiple_pairs(
    inst1: &OneToOneInstance,
    p_star_set: &BTreeSet<FirmId>,
    q_star: WorkerId,
    budget: usize,
) -> Result<MenPlan, Error> {
    let mut first_failure = None;
    for &p in p_star_set {
        let plan = delete_men_match_pair(inst1, p, q_star, budget)?;
        if plan.feasible {
            return Ok(plan);
        }
        first_failure.get_or_insert(plan);
    }
    first_failure.ok_or(Error::EmptyManSet)
}

/// Deletes the fewest seats so that `(w*, f*)` is in some stable matching.
///
/// Every copy of `f*` is tried, and the canonical best result is kept; ties in
/// seat count are then settled by the canonical order.
pub fn delete_capacity_match_pair(
    inst: &Instance,
    w_star: WorkerId,
    f_star: FirmId,
    budget: usize,
) -> Result<PlanResult, Error> {
    inst.check_worker(w_star)?;
    inst.check_firm(f_star)?;
    if !inst.mutually_acceptable(w_star, f_star) {
        return Ok(PlanResult::infeasible(
            InfeasibleReason::MutuallyUnacceptablePair,
        ));
    }
    if inst.capacity(f_star) == 0 {
        return Ok(PlanResult::infeasible(InfeasibleReason::ZeroCapacityFirm));
    }
    let (inst1, map) = to_one_to_one(inst);
    let objective = Objective::MatchPair {
        worker: w_star,
        firm: f_star,
    };
    let mut best: Option<PlanResult> = None;
    let mut first_failure = None;
    for &p in &map.firm_copies[f_star.0] {
        let plan = delete_men_match_pair(&inst1, p, w_star, budget)?;
        if !plan.feasible {
            first_failure.get_or_insert(plan.reason.expect("infeasible plans carry a reason"));
            continue;
        }
        let caps = caps_after_copy_change(
            inst.capacities(),
            plan.men.iter().map(|&p| map.firm_of(p)),
            Action::Delete,
        );
        let cert = compress_matching(
            &map,
            plan.certificate
                .as_ref()
                .expect("feasible plans carry a certificate"),
        );
        let candidate = PlanResult::feasible(inst.capacities(), caps, cert);
        let better = match &best {
            None => true,
            Some(b) => {
                let key = |r: &PlanResult| {
                    canonical_key(inst.capacities(), r.new_caps.as_ref().unwrap(), &objective)
                };
                key(&candidate) < key(b)
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    match best {
        Some(found) => canonical_tie_break(inst, w_star, f_star, found, &objective),
        None => Ok(PlanResult::infeasible(
            first_failure.expect("at least one copy"),
        )),
    }
}

/// The copies only pin down the fewest seats; other vectors with as many deletions
/// may precede the found one in canonical order. Scans those with the zero-budget check.
fn canonical_tie_break(
    inst: &Instance,
    w_star: WorkerId,
    f_star: FirmId,
    found: PlanResult,
    objective: &Objective,
) -> Result<PlanResult, Error> {
    let base = inst.capacities();
    let key = canonical_key(base, found.new_caps.as_ref().expect("feasible"), objective);
    let mut earlier: Vec<(_, CapacityVector)> = deletions_of_size(base, found.seats_changed)
        .into_iter()
        .map(|c| (canonical_key(base, &c, objective), c))
        .filter(|(k, _)| *k < key)
        .collect();
    earlier.sort();
    for (_, caps) in earlier {
        let r = add_capacity_match_pair(&inst.with_capacities(caps.clone()), w_star, f_star, 0)?;
        if let Some(cert) = r.certificate {
            return Ok(PlanResult::feasible(base, caps, cert));
        }
    }
    Ok(found)
}

/// Every `C̄ ≤ C` with exactly `k` seats removed.
fn deletions_of_size(base: &CapacityVector, k: usize) -> Vec<CapacityVector> {
    fn go(
        base: &[usize],
        i: usize,
        left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<CapacityVector>,
    ) {
        if i == base.len() {
            if left == 0 {
                out.push(CapacityVector::new(cur.clone()));
            }
            return;
        }
        for d in 0..=left.min(base[i]) {
            cur.push(base[i] - d);
            go(base, i + 1, left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(base.as_slice(), 0, k, &mut Vec::new(), &mut out);
    out
}
