use std::collections::BTreeSet;

use crate::capmod::{InfeasibleReason, PlanResult};
use crate::da::wpda;
use crate::error::Error;
use crate::matching::Matching;
use crate::model::{FirmId, Instance, WorkerId};

/// The truncated market used to decide whether `(w*, f*)` can be forced.
#[derive(Clone, Debug)]
pub struct TruncationContext {
    pub worker: WorkerId,
    pub firm: FirmId,
    /// Workers `f*` prefers to `w*` (and who accept `f*`).
    pub dw: BTreeSet<WorkerId>,
    /// Firms `w*` prefers to `f*` (and who accept `w*`).
    pub df: BTreeSet<FirmId>,
    pub truncated: Instance,
    pub wosm: Matching,
    pub udw: BTreeSet<WorkerId>,
    pub udf: BTreeSet<FirmId>,
    /// One seat must be paid for `w*` when `f*` has none.
    pub extra: usize,
}

impl TruncationContext {
    pub fn seats_needed(&self) -> usize {
        self.udw.len() + self.extra
    }
}

/// Requires `w*` and `f*` to be mutually acceptable.
pub fn truncation_context(inst: &Instance, w_star: WorkerId, f_star: FirmId) -> TruncationContext {
    let dw: BTreeSet<WorkerId> = inst
        .firm_prefs(f_star)
        .iter()
        .copied()
        .take_while(|&w| w != w_star)
        .filter(|&w| inst.worker_accepts(w, f_star))
        .collect();
    let df: BTreeSet<FirmId> = inst
        .worker_prefs(w_star)
        .iter()
        .copied()
        .take_while(|&f| f != f_star)
        .filter(|&f| inst.firm_accepts(f, w_star))
        .collect();

    let mut parts = inst.to_parts();
    let cap = inst.capacity(f_star);
    parts.capacities[f_star.0] = cap.saturating_sub(1);
    parts.worker_prefs[w_star.0].clear();
    for (f, list) in parts.firm_prefs.iter_mut().enumerate() {
        if df.contains(&FirmId(f)) {
            list.truncate(inst.firm_rank(FirmId(f), w_star).expect("df accepts w*"));
        } else {
            list.retain(|&w| w != w_star);
        }
    }
    for &w in &dw {
        let list = &mut parts.worker_prefs[w.0];
        list.truncate(inst.worker_rank(w, f_star).expect("dw accepts f*") + 1);
    }
    let truncated = Instance::new(parts).expect("truncation keeps lists valid");
    let (wosm, _) = wpda(&truncated);
    let udw = dw
        .iter()
        .copied()
        .filter(|&w| wosm.partner(w).is_none())
        .collect();
    let udf = df
        .iter()
        .copied()
        .filter(|&f| wosm.size(f) < truncated.capacity(f))
        .collect();
    TruncationContext {
        worker: w_star,
        firm: f_star,
        dw,
        df,
        truncated,
        wosm,
        udw,
        udf,
        extra: usize::from(cap == 0),
    }
}

/// Adds the fewest seats, all at `f*`, so that `(w*, f*)` is in some stable matching.
pub fn add_capacity_match_pair(
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
    let ctx = truncation_context(inst, w_star, f_star);
    if !ctx.udf.is_empty() {
        return Ok(PlanResult::infeasible(
            InfeasibleReason::UnsaturatedDistractingFirm,
        ));
    }
    let k = ctx.seats_needed();
    if k > budget {
        return Ok(PlanResult::infeasible(
            InfeasibleReason::TooManyUnmatchedDistractingWorkers,
        ));
    }
    let mut caps = inst.capacities().clone();
    caps.set(f_star, inst.capacity(f_star) + k);
    let mut mu = ctx.wosm.clone();
    mu.assign(w_star, f_star)?;
    for &w in &ctx.udw {
        mu.assign(w, f_star)?;
    }
    Ok(PlanResult::feasible(inst.capacities(), caps, mu))
}

/// Whether `(w, f)` belongs to some stable matching of `inst`.
pub fn is_stable_pair(inst: &Instance, w: WorkerId, f: FirmId) -> Result<bool, Error> {
    Ok(add_capacity_match_pair(inst, w, f, 0)?.feasible)
}
