//! JSON shapes of command output. Agents appear by name; lists keep index order.

use std::collections::BTreeSet;

use capmatch::analysis::{Manipulation, ManipulationReport, PeakReport};
use capmatch::capmod::PlanResult;
use capmatch::da::ProposalTrace;
use capmatch::{Algorithm, Blocker, StabilityReport, WorkerId};
use serde_json::{json, Value};

use crate::io::Loaded;

pub fn add_label(loaded: &Loaded, out: &mut Value) {
    if let Some(label) = loaded.label() {
        out["label"] = json!(label);
    }
}

fn names(loaded: &Loaded, set: &BTreeSet<WorkerId>) -> Vec<String> {
    set.iter()
        .map(|&w| loaded.worker_name(w).to_string())
        .collect()
}

fn algo_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Wpda => "wpda",
        Algorithm::Fpda => "fpda",
    }
}

fn action_name(m: Manipulation) -> &'static str {
    match m {
        Manipulation::Add => "add",
        Manipulation::Delete => "delete",
        Manipulation::Pref => "pref",
    }
}

pub fn trace(loaded: &Loaded, log: &ProposalTrace) -> Value {
    let pair =
        |w: WorkerId, f| json!({ "worker": loaded.worker_name(w), "firm": loaded.firm_name(f) });
    let rounds: Vec<Value> = log
        .rounds
        .iter()
        .map(|r| {
            json!({
                "proposals": r.proposals.iter().map(|p| pair(p.worker, p.firm)).collect::<Vec<_>>(),
                "rejections": r.rejections.iter().map(|p| pair(p.worker, p.firm)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "algorithm": algo_name(log.algorithm), "rounds": rounds })
}

pub fn stability(loaded: &Loaded, rep: &StabilityReport) -> Value {
    let blockers: Vec<Value> = rep
        .blockers
        .iter()
        .map(|b| match *b {
            Blocker::ByFirm { firm, worker } => json!({
                "kind": "firm",
                "firm": loaded.firm_name(firm),
                "worker": loaded.worker_name(worker),
            }),
            Blocker::ByWorker { worker } => {
                json!({ "kind": "worker", "worker": loaded.worker_name(worker) })
            }
            Blocker::ByPair { worker, firm } => json!({
                "kind": "pair",
                "worker": loaded.worker_name(worker),
                "firm": loaded.firm_name(firm),
            }),
        })
        .collect();
    let mut out = json!({ "stable": rep.stable, "blockers": blockers });
    add_label(loaded, &mut out);
    out
}

pub fn plan(loaded: &Loaded, planner: &str, result: &PlanResult) -> Value {
    let caps = result.new_caps.as_ref().map(|caps| {
        loaded
            .instance
            .firms()
            .map(|f| json!({ "firm": loaded.firm_name(f), "capacity": caps.get(f) }))
            .collect::<Vec<_>>()
    });
    let mut out = json!({
        "planner": planner,
        "feasible": result.feasible,
        "capacities": caps,
        "seats_changed": result.seats_changed,
        "certificate": result.certificate.as_ref().map(|mu| loaded.matching_file(mu)),
        "reason": result.reason,
    });
    add_label(loaded, &mut out);
    out
}

pub fn analyze(loaded: &Loaded, pk: &PeakReport, man: &ManipulationReport) -> Value {
    let regime = serde_json::to_value(pk.regime).expect("regime serializes");
    let peak = json!({
        "firm": loaded.firm_name(pk.firm),
        "peak": pk.peak,
        "capacity": pk.current_capacity,
        "regime": regime,
        "at_peak_wosm_set": names(loaded, &pk.at_peak_wosm_set),
    });
    let capacity_move = |best: &Option<(usize, BTreeSet<WorkerId>)>| {
        best.as_ref()
            .map(|(c, set)| json!({ "capacity": c, "outcome": names(loaded, set) }))
    };
    let pref = man.best_pref.as_ref().map(|(list, set)| {
        json!({
            "prefs": list.iter().map(|&w| loaded.worker_name(w)).collect::<Vec<_>>(),
            "outcome": names(loaded, set),
        })
    });
    let manipulation = json!({
        "algorithm": algo_name(man.algorithm),
        "regime": man.regime,
        "truthful": names(loaded, &man.truthful_outcome),
        "best_add": capacity_move(&man.best_add),
        "best_delete": capacity_move(&man.best_delete),
        "best_pref": pref,
        "dominance": man
            .dominance
            .iter()
            .map(|d| json!({ "winner": action_name(d.winner), "loser": action_name(d.loser) }))
            .collect::<Vec<_>>(),
    });
    let mut out = json!({ "peak": peak, "manipulation": manipulation });
    add_label(loaded, &mut out);
    out
}
