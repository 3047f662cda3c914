//! Capacity-modification planners.

mod add_pair;
mod delete_pair;
mod exact;
mod men;
mod stabilize;

use std::cmp::Reverse;

use serde::Serialize;

pub use add_pair::{
    add_capacity_match_pair, is_stable_pair, truncation_context, TruncationContext,
};
pub use delete_pair::{
    delete_capacity_match_pair, delete_men_match_pair, delete_men_multiple_pairs,
};
pub use exact::{budgeted_add_match_pair_exact, budgeted_delete_match_pair_exact};
pub use men::{add_men_stabilize, delete_men_stabilize, GroupPartition, MenPlan};
pub use stabilize::{add_capacity_stabilize, delete_capacity_stabilize};

use crate::error::Error;
use crate::matching::Matching;
use crate::model::{CapacityVector, FirmId, Instance, WorkerId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Action {
    Add,
    Delete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Objective {
    MatchPair { worker: WorkerId, firm: FirmId },
    Stabilize(Matching),
}

impl Objective {
    pub fn validate(&self, inst: &Instance) -> Result<(), Error> {
        match self {
            Objective::MatchPair { worker, firm } => {
                inst.check_worker(*worker)?;
                inst.check_firm(*firm)
            }
            Objective::Stabilize(mu) => mu.check_shape(inst),
        }
    }

    pub fn is_met_by(&self, mu: &Matching) -> bool {
        match self {
            Objective::MatchPair { worker, firm } => mu.contains(*worker, *firm),
            Objective::Stabilize(target) => mu.is_subset_of(target),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BudgetSpec {
    pub global: usize,
    pub per_firm: Option<Vec<usize>>,
}

impl BudgetSpec {
    pub fn global(global: usize) -> Self {
        BudgetSpec {
            global,
            per_firm: None,
        }
    }

    pub fn per_firm(global: usize, per_firm: Vec<usize>) -> Self {
        BudgetSpec {
            global,
            per_firm: Some(per_firm),
        }
    }

    /// Effective bound on `|c̄_f - c_f|`.
    pub fn firm_limit(&self, f: FirmId) -> usize {
        match &self.per_firm {
            Some(v) => v[f.0].min(self.global),
            None => self.global,
        }
    }

    pub fn validate(&self, n_firms: usize) -> Result<(), Error> {
        match &self.per_firm {
            Some(v) if v.len() != n_firms => Err(Error::BudgetLengthMismatch {
                expected: n_firms,
                found: v.len(),
            }),
            _ => Ok(()),
        }
    }

    pub fn admits(&self, base: &CapacityVector, caps: &CapacityVector) -> bool {
        base.l1_distance(caps) <= self.global
            && base
                .delta(caps)
                .iter()
                .enumerate()
                .all(|(i, &d)| d <= self.firm_limit(FirmId(i)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InfeasibleReason {
    MutuallyUnacceptablePair,
    ZeroCapacityFirm,
    UnsaturatedDistractingFirm,
    TooManyUnmatchedDistractingWorkers,
    UnmatchedPreferredWoman,
    TooManyUnmatchedPreferredMen,
    BudgetExceeded,
    GroupBudgetExceeded,
    UnfixableBlockingPair,
    NoFeasibleCapacity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanResult {
    pub feasible: bool,
    pub new_caps: Option<CapacityVector>,
    pub certificate: Option<Matching>,
    pub seats_changed: usize,
    pub reason: Option<InfeasibleReason>,
}

impl PlanResult {
    pub fn feasible(base: &CapacityVector, caps: CapacityVector, certificate: Matching) -> Self {
        PlanResult {
            feasible: true,
            seats_changed: base.l1_distance(&caps),
            new_caps: Some(caps),
            certificate: Some(certificate),
            reason: None,
        }
    }

    pub fn infeasible(reason: InfeasibleReason) -> Self {
        PlanResult {
            feasible: false,
            new_caps: None,
            certificate: None,
            seats_changed: 0,
            reason: Some(reason),
        }
    }
}

/// Sort key defining the canonical answer among feasible capacity vectors.
///
/// Fewest changed seats first; for a pair objective with added seats, then the
/// most seats added at the pair's firm; then the lexicographically smallest
/// change vector (smallest `ΔC` when adding, largest `C̄` when deleting).
pub fn canonical_key(
    base: &CapacityVector,
    caps: &CapacityVector,
    objective: &Objective,
) -> (usize, Reverse<usize>, Vec<usize>) {
    let delta = base.delta(caps);
    let at_firm = match objective {
        Objective::MatchPair { firm, .. } if caps.dominates(base) => delta[firm.0],
        _ => 0,
    };
    (delta.iter().sum(), Reverse(at_firm), delta)
}

/// Applies one seat change per listed firm.
fn caps_after_copy_change(
    base: &CapacityVector,
    firms: impl IntoIterator<Item = FirmId>,
    action: Action,
) -> CapacityVector {
    let mut caps = base.clone();
    for f in firms {
        let c = caps.get(f);
        caps.set(
            f,
            match action {
                Action::Add => c + 1,
                Action::Delete => c - 1,
            },
        );
    }
    caps
}
