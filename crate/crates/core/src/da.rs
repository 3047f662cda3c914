//! Worker- and firm-proposing deferred acceptance.
//!
//! Proposals only go to mutually acceptable partners, so every recorded
//! rejection is a capacity (or preference) rejection, never an acceptability one.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::matching::Matching;
use crate::model::{FirmId, Instance, WorkerId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum Algorithm {
    #[default]
    Wpda,
    Fpda,
}

impl Algorithm {
    pub fn run(self, inst: &Instance) -> (Matching, ProposalTrace) {
        match self {
            Algorithm::Wpda => wpda(inst),
            Algorithm::Fpda => fpda(inst),
        }
    }

    /// Runs without keeping the trace.
    pub fn matching(self, inst: &Instance) -> Matching {
        self.run(inst).0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Proposal {
    pub worker: WorkerId,
    pub firm: FirmId,
}

/// A receiver turning down a proposer (firms reject in WPDA, workers in FPDA).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub worker: WorkerId,
    pub firm: FirmId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Round {
    pub proposals: Vec<Proposal>,
    pub rejections: Vec<Rejection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProposalTrace {
    pub algorithm: Algorithm,
    pub rounds: Vec<Round>,
    /// Workers that proposed to each firm (WPDA only).
    pub received_by_firm: Vec<BTreeSet<WorkerId>>,
    /// Firms that proposed to each worker (FPDA only).
    pub received_by_worker: Vec<BTreeSet<FirmId>>,
}

impl ProposalTrace {
    fn new(algorithm: Algorithm, inst: &Instance) -> Self {
        ProposalTrace {
            algorithm,
            rounds: Vec::new(),
            received_by_firm: vec![BTreeSet::new(); inst.n_firms()],
            received_by_worker: vec![BTreeSet::new(); inst.n_workers()],
        }
    }

    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    /// Rejections issued by `f`; only WPDA firms reject.
    pub fn rejections_by_firm(&self, f: FirmId) -> usize {
        if self.algorithm != Algorithm::Wpda {
            return 0;
        }
        self.rounds
            .iter()
            .flat_map(|r| &r.rejections)
            .filter(|r| r.firm == f)
            .count()
    }

    /// Cumulative proposal sets after each round, receiver-side.
    pub fn cumulative_by_firm(&self, f: FirmId) -> Vec<BTreeSet<WorkerId>> {
        let mut acc = BTreeSet::new();
        self.rounds
            .iter()
            .map(|r| {
                acc.extend(r.proposals.iter().filter(|p| p.firm == f).map(|p| p.worker));
                acc.clone()
            })
            .collect()
    }
}

fn round_guard(inst: &Instance) -> usize {
    inst.n_firms() * inst.n_workers() + 1
}

pub fn wpda(inst: &Instance) -> (Matching, ProposalTrace) {
    let n = inst.n_firms();
    let m = inst.n_workers();
    let mut trace = ProposalTrace::new(Algorithm::Wpda, inst);
    let mut next = vec![0usize; m];
    let mut held: Vec<Vec<WorkerId>> = vec![Vec::new(); n];
    let mut partner: Vec<Option<FirmId>> = vec![None; m];

    loop {
        let mut round = Round::default();
        let mut incoming: Vec<Vec<WorkerId>> = vec![Vec::new(); n];
        for w in inst.workers() {
            if partner[w.0].is_some() {
                continue;
            }
            let list = inst.worker_prefs(w);
            while next[w.0] < list.len() && !inst.firm_accepts(list[next[w.0]], w) {
                next[w.0] += 1;
            }
            if let Some(&f) = list.get(next[w.0]) {
                next[w.0] += 1;
                round.proposals.push(Proposal { worker: w, firm: f });
                trace.received_by_firm[f.0].insert(w);
                incoming[f.0].push(w);
                partner[w.0] = Some(f);
            }
        }
        if round.proposals.is_empty() {
            break;
        }
        for f in inst.firms() {
            if incoming[f.0].is_empty() {
                continue;
            }
            let pool = &mut held[f.0];
            pool.append(&mut incoming[f.0]);
            pool.sort_by_key(|&w| inst.firm_rank(f, w));
            let cap = inst.capacity(f);
            if pool.len() > cap {
                let mut out: Vec<WorkerId> = pool.split_off(cap);
                out.sort();
                for w in out {
                    partner[w.0] = None;
                    round.rejections.push(Rejection { worker: w, firm: f });
                }
            }
        }
        round.rejections.sort_by_key(|r| (r.worker, r.firm));
        trace.rounds.push(round);
        assert!(
            trace.rounds.len() <= round_guard(inst),
            "deferred acceptance exceeded its round bound"
        );
    }
    (Matching::from_assignment(n, &partner), trace)
}

pub fn fpda(inst: &Instance) -> (Matching, ProposalTrace) {
    let n = inst.n_firms();
    let m = inst.n_workers();
    let mut trace = ProposalTrace::new(Algorithm::Fpda, inst);
    let mut next = vec![0usize; n];
    let mut held_count = vec![0usize; n];
    let mut partner: Vec<Option<FirmId>> = vec![None; m];

    loop {
        let mut round = Round::default();
        let mut incoming: Vec<Vec<FirmId>> = vec![Vec::new(); m];
        for f in inst.firms() {
            let list = inst.firm_prefs(f);
            let mut free = inst.capacity(f).saturating_sub(held_count[f.0]);
            while free > 0 && next[f.0] < list.len() {
                let w = list[next[f.0]];
                next[f.0] += 1;
                if !inst.worker_accepts(w, f) {
                    continue;
                }
                round.proposals.push(Proposal { worker: w, firm: f });
                trace.received_by_worker[w.0].insert(f);
                incoming[w.0].push(f);
                held_count[f.0] += 1;
                free -= 1;
            }
        }
        if round.proposals.is_empty() {
            break;
        }
        for w in inst.workers() {
            if incoming[w.0].is_empty() {
                continue;
            }
            let mut pool = std::mem::take(&mut incoming[w.0]);
            pool.extend(partner[w.0]);
            pool.sort_by_key(|&f| inst.worker_rank(w, f));
            partner[w.0] = Some(pool[0]);
            for &f in &pool[1..] {
                held_count[f.0] -= 1;
                round.rejections.push(Rejection { worker: w, firm: f });
            }
        }
        trace.rounds.push(round);
        assert!(
            trace.rounds.len() <= round_guard(inst),
            "deferred acceptance exceeded its round bound"
        );
    }
    (Matching::from_assignment(n, &partner), trace)
}
