//! Peak computation and firm manipulation: adding seats, deleting seats, or
//! misreporting preferences.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::canonical::{expand_matching, to_one_to_one};
use crate::da::{wpda, Algorithm};
use crate::error::Error;
use crate::extension::{compare_sets, SetOrdering};
use crate::matching::Matching;
use crate::model::{FirmId, Instance, WorkerId};

pub const DEFAULT_PERM_LIMIT: usize = 8;

/// A reported list and the set it yields.
pub type Misreport = (Vec<WorkerId>, BTreeSet<WorkerId>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    BelowPeak,
    AtPeak,
    AbovePeak,
}

impl Regime {
    pub fn of(capacity: usize, peak: usize) -> Regime {
        match capacity.cmp(&peak) {
            std::cmp::Ordering::Less => Regime::BelowPeak,
            std::cmp::Ordering::Equal => Regime::AtPeak,
            std::cmp::Ordering::Greater => Regime::AbovePeak,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeakReport {
    pub firm: FirmId,
    pub peak: usize,
    pub current_capacity: usize,
    pub regime: Regime,
    pub at_peak_wosm_set: BTreeSet<WorkerId>,
}

/// Reads the peak off one WPDA run with `f` able to hold every worker.
pub fn peak(inst: &Instance, f: FirmId) -> Result<PeakReport, Error> {
    inst.check_firm(f)?;
    let (mu, _) = wpda(&inst.with_capacity(f, inst.n_workers()));
    let set = mu.workers_of(f).clone();
    Ok(PeakReport {
        firm: f,
        peak: set.len(),
        current_capacity: inst.capacity(f),
        regime: Regime::of(inst.capacity(f), set.len()),
        at_peak_wosm_set: set,
    })
}

fn outcome(inst: &Instance, f: FirmId, algo: Algorithm) -> BTreeSet<WorkerId> {
    algo.matching(inst).workers_of(f).clone()
}

/// Keeps the first strictly best candidate, then reports it only if it beats `truthful`.
fn best_of<W>(
    inst: &Instance,
    f: FirmId,
    truthful: &BTreeSet<WorkerId>,
    candidates: impl Iterator<Item = (W, BTreeSet<WorkerId>)>,
) -> Result<Option<(W, BTreeSet<WorkerId>)>, Error> {
    let mut best: Option<(W, BTreeSet<WorkerId>)> = None;
    for (w, out) in candidates {
        let replace = match &best {
            None => true,
            Some((_, b)) => compare_sets(inst, f, &out, b)?.is_better(),
        };
        if replace {
            best = Some((w, out));
        }
    }
    match best {
        Some((w, out)) if compare_sets(inst, f, &out, truthful)?.is_better() => Ok(Some((w, out))),
        _ => Ok(None),
    }
}

/// Best strictly improving capacity in `c_f + 1 ..= p_f`.
pub fn best_add(
    inst: &Instance,
    f: FirmId,
    algo: Algorithm,
) -> Result<Option<(usize, BTreeSet<WorkerId>)>, Error> {
    let p = peak(inst, f)?.peak;
    let truthful = outcome(inst, f, algo);
    let c = inst.capacity(f);
    let cands = (c + 1..=p).map(|b| (b, outcome(&inst.with_capacity(f, b), f, algo)));
    best_of(inst, f, &truthful, cands)
}

/// Best strictly improving capacity in `0 .. c_f`.
pub fn best_delete(
    inst: &Instance,
    f: FirmId,
    algo: Algorithm,
) -> Result<Option<(usize, BTreeSet<WorkerId>)>, Error> {
    inst.check_firm(f)?;
    let truthful = outcome(inst, f, algo);
    let cands = (0..inst.capacity(f)).map(|b| (b, outcome(&inst.with_capacity(f, b), f, algo)));
    best_of(inst, f, &truthful, cands)
}

/// Best strictly improving permutation of `f`'s acceptable workers, judged by its true preferences.
pub fn best_pref(
    inst: &Instance,
    f: FirmId,
    algo: Algorithm,
    perm_limit: usize,
) -> Result<Option<Misreport>, Error> {
    inst.check_firm(f)?;
    let mut acceptable = inst.firm_prefs(f).to_vec();
    if acceptable.len() > perm_limit {
        return Err(Error::TooManyAcceptableWorkers {
            firm: f,
            count: acceptable.len(),
            limit: perm_limit,
        });
    }
    // Sorted input makes the permutations come out in lexicographic order.
    acceptable.sort();
    let truthful = outcome(inst, f, algo);
    let k = acceptable.len();
    let cands = acceptable.into_iter().permutations(k).map(|perm| {
        let misreport = inst
            .with_firm_prefs(f, perm.clone())
            .expect("a permutation of a valid list is valid");
        let out = outcome(&misreport, f, algo);
        (perm, out)
    });
    best_of(inst, f, &truthful, cands)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Manipulation {
    Add,
    Delete,
    Pref,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Dominance {
    pub winner: Manipulation,
    pub loser: Manipulation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManipulationReport {
    pub firm: FirmId,
    pub algorithm: Algorithm,
    pub regime: Regime,
    pub truthful_outcome: BTreeSet<WorkerId>,
    pub best_add: Option<(usize, BTreeSet<WorkerId>)>,
    pub best_delete: Option<(usize, BTreeSet<WorkerId>)>,
    pub best_pref: Option<Misreport>,
    pub dominance: Vec<Dominance>,
}

impl ManipulationReport {
    pub fn beats(&self, winner: Manipulation, loser: Manipulation) -> bool {
        self.dominance.contains(&Dominance { winner, loser })
    }

    /// What the firm ends up with under each action; the truthful set when the action does not help.
    pub fn outcome_of(&self, action: Manipulation) -> &BTreeSet<WorkerId> {
        let best = match action {
            Manipulation::Add => self.best_add.as_ref().map(|(_, s)| s),
            Manipulation::Delete => self.best_delete.as_ref().map(|(_, s)| s),
            Manipulation::Pref => self.best_pref.as_ref().map(|(_, s)| s),
        };
        best.unwrap_or(&self.truthful_outcome)
    }
}

pub fn compare_manipulations(
    inst: &Instance,
    f: FirmId,
    algo: Algorithm,
    perm_limit: usize,
) -> Result<ManipulationReport, Error> {
    let report = peak(inst, f)?;
    let mut out = ManipulationReport {
        firm: f,
        algorithm: algo,
        regime: report.regime,
        truthful_outcome: outcome(inst, f, algo),
        best_add: best_add(inst, f, algo)?,
        best_delete: best_delete(inst, f, algo)?,
        best_pref: best_pref(inst, f, algo, perm_limit)?,
        dominance: Vec::new(),
    };
    let actions = [Manipulation::Add, Manipulation::Delete, Manipulation::Pref];
    for &x in &actions {
        for &y in &actions {
            if x != y && compare_sets(inst, f, out.outcome_of(x), out.outcome_of(y))?.is_better() {
                out.dominance.push(Dominance {
                    winner: x,
                    loser: y,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Change {
    Better,
    Equal,
    Worse,
}

impl From<SetOrdering> for Change {
    fn from(o: SetOrdering) -> Self {
        match o {
            SetOrdering::Better => Change::Better,
            SetOrdering::Worse => Change::Worse,
            _ => Change::Equal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeatChanges {
    pub firm: FirmId,
    /// One entry per seat, best seat first.
    pub seats: Vec<Change>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgorithmEffect {
    pub algorithm: Algorithm,
    pub before: Matching,
    pub after: Matching,
    pub focal: Change,
    pub workers: Vec<Change>,
    pub other_firms: Vec<SeatChanges>,
    pub no_worker_worse: bool,
    pub no_other_firm_better: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectReport {
    pub firm: FirmId,
    pub effects: Vec<AlgorithmEffect>,
}

/// How one extra seat at `f` changes every agent's lot under WPDA and FPDA.
pub fn worker_effect_report(inst: &Instance, f: FirmId) -> Result<EffectReport, Error> {
    inst.check_firm(f)?;
    let bigger = inst.with_capacity(f, inst.capacity(f) + 1);
    let (_, small_map) = to_one_to_one(inst);
    let (_, big_map) = to_one_to_one(&bigger);
    let mut effects = Vec::new();
    for algo in [Algorithm::Wpda, Algorithm::Fpda] {
        let before = algo.matching(inst);
        let after = algo.matching(&bigger);
        let workers: Vec<Change> = inst
            .workers()
            .map(|w| {
                let (a, b) = (after.partner(w), before.partner(w));
                if a == b {
                    Change::Equal
                } else if inst.worker_prefers(w, a, b) {
                    Change::Better
                } else {
                    Change::Worse
                }
            })
            .collect();
        let before1 = expand_matching(inst, &small_map, &before)?;
        let after1 = expand_matching(&bigger, &big_map, &after)?;
        let mut other_firms = Vec::new();
        for g in inst.firms().filter(|&g| g != f) {
            let seats = small_map.firm_copies[g.0]
                .iter()
                .zip(&big_map.firm_copies[g.0])
                .map(|(&p_old, &p_new)| {
                    let old = before1.workers_of(p_old).iter().next().copied();
                    let new = after1.workers_of(p_new).iter().next().copied();
                    seat_change(inst, g, new, old)
                })
                .collect();
            other_firms.push(SeatChanges { firm: g, seats });
        }
        let focal = compare_sets(inst, f, after.workers_of(f), before.workers_of(f))?.into();
        effects.push(AlgorithmEffect {
            algorithm: algo,
            no_worker_worse: workers.iter().all(|&c| c != Change::Worse),
            no_other_firm_better: other_firms
                .iter()
                .all(|s| s.seats.iter().all(|&c| c != Change::Better)),
            before,
            after,
            focal,
            workers,
            other_firms,
        });
    }
    Ok(EffectReport { firm: f, effects })
}

fn seat_change(inst: &Instance, g: FirmId, new: Option<WorkerId>, old: Option<WorkerId>) -> Change {
    match (new, old) {
        (a, b) if a == b => Change::Equal,
        (Some(_), None) => Change::Better,
        (None, Some(_)) => Change::Worse,
        (Some(a), Some(b)) if inst.firm_prefers(g, a, b) => Change::Better,
        _ => Change::Worse,
    }
}
