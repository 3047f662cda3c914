//! Randomized sweeps shared by the invariant tests and the acceptance report.
//!
//! Each sweep draws `cases` instances from a seeded generator and returns the
//! first counterexample as an error string.

use std::collections::BTreeSet;

use capmatch::analysis::{
    best_delete, best_pref, compare_manipulations, peak, worker_effect_report, Manipulation, Regime,
};
use capmatch::canonical::{compress_matching, expand_matching, to_one_to_one};
use capmatch::capmod::*;
use capmatch::generate::{complete_instance, random_instance, GenParams};
use capmatch::oracle::{
    brute_force_peak, brute_force_plan, candidate_vectors, enumerate_stable_matchings, OracleLimits,
};
use capmatch::*;
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::*;

pub type Sweep = Result<(), String>;

/// Planner sweep coverage: feasible verdicts, and feasible verdicts that move seats.
#[derive(Clone, Copy, Debug, Default)]
pub struct Tally {
    pub feasible: usize,
    pub changed: usize,
}

pub fn limits() -> OracleLimits {
    OracleLimits::default()
}

/// Room for capacities pushed past the peak.
pub fn wide_limits() -> OracleLimits {
    OracleLimits::new(8, 32, 4)
}

fn e<T>(r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ctx(case: usize, inst: &Instance) -> String {
    format!("case {case}: {:?}", inst.to_parts())
}

macro_rules! ensure {
    ($cond:expr, $case:expr, $inst:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!("{}\n{}", format!($($msg)*), ctx($case, $inst)));
        }
    };
}

fn stable_set(inst: &Instance) -> Result<Vec<Matching>, String> {
    e(enumerate_stable_matchings(inst, &wide_limits()))
}

fn random_firm(r: &mut ChaCha8Rng, inst: &Instance) -> FirmId {
    FirmId(r.gen_range(0..inst.n_firms()))
}

/// Mostly a mutually acceptable pair outside every stable matching, sometimes any pair.
fn random_pair(r: &mut ChaCha8Rng, inst: &Instance) -> (WorkerId, FirmId) {
    let acceptable: Vec<(WorkerId, FirmId)> = inst
        .workers()
        .cartesian_product(inst.firms().collect::<Vec<_>>())
        .filter(|&(w, f)| inst.mutually_acceptable(w, f))
        .collect();
    let unstable: Vec<(WorkerId, FirmId)> = acceptable
        .iter()
        .copied()
        .filter(|&(w, f)| !is_stable_pair(inst, w, f).unwrap())
        .collect();
    if !unstable.is_empty() && r.gen_bool(0.6) {
        return *unstable.choose(r).unwrap();
    }
    if !acceptable.is_empty() && r.gen_bool(0.8) {
        return *acceptable.choose(r).unwrap();
    }
    (
        WorkerId(r.gen_range(0..inst.n_workers())),
        random_firm(r, inst),
    )
}

/// Small random market with every capacity in `1..=2`, so there are seats to remove.
fn small_seated(r: &mut ChaCha8Rng) -> Instance {
    let inst = small_random(r);
    let caps = inst.firms().map(|_| r.gen_range(1..=2)).collect();
    inst.with_capacities(CapacityVector::new(caps))
}

fn random_budget(r: &mut ChaCha8Rng, n_firms: usize, per_firm: bool) -> BudgetSpec {
    let global = r.gen_range(0..=2);
    if per_firm {
        BudgetSpec::per_firm(global, (0..n_firms).map(|_| r.gen_range(0..=2)).collect())
    } else {
        BudgetSpec::global(global)
    }
}

/// Each worker picks uniformly among ∅ and the firms with room under `bound`.
fn random_matching(
    r: &mut ChaCha8Rng,
    inst: &Instance,
    bound: impl Fn(FirmId) -> usize,
    ir: bool,
) -> Matching {
    let mut mu = Matching::empty_for(inst);
    for w in inst.workers() {
        let mut opts: Vec<Option<FirmId>> = vec![None];
        opts.extend(
            inst.firms()
                .filter(|&f| mu.size(f) < bound(f) && (!ir || inst.mutually_acceptable(w, f)))
                .map(Some),
        );
        if let Some(f) = *opts.choose(r).unwrap() {
            mu.assign(w, f).unwrap();
        }
    }
    mu
}

/// A stable matching of a random capacity vector reachable within `budget`.
fn reachable_stable(
    r: &mut ChaCha8Rng,
    inst: &Instance,
    action: Action,
    budget: &BudgetSpec,
) -> Result<Matching, String> {
    let mut caps = candidate_vectors(inst.capacities(), action, budget);
    if caps.len() > 1 {
        caps.retain(|c| c != inst.capacities());
    }
    let caps = caps.choose(r).unwrap().clone();
    let all = stable_set(&inst.with_capacities(caps))?;
    Ok(all.choose(r).unwrap().clone())
}

fn check_plan(
    case: usize,
    inst: &Instance,
    objective: &Objective,
    budget: &BudgetSpec,
    plan: &PlanResult,
    brute: &PlanResult,
    tally: &mut Tally,
) -> Sweep {
    ensure!(
        plan.feasible == brute.feasible,
        case,
        inst,
        "verdict differs for {objective:?} {budget:?}: planner {plan:?}, brute force {brute:?}"
    );
    ensure!(
        plan.new_caps == brute.new_caps,
        case,
        inst,
        "capacities differ for {objective:?} {budget:?}: planner {:?}, brute force {:?}",
        plan.new_caps,
        brute.new_caps
    );
    if plan.feasible {
        tally.feasible += 1;
        tally.changed += (plan.seats_changed > 0) as usize;
        let caps = plan.new_caps.clone().unwrap();
        let cert = plan.certificate.as_ref().unwrap();
        let modified = inst.with_capacities(caps.clone());
        ensure!(
            is_stable(&modified, cert),
            case,
            inst,
            "certificate {cert} unstable under {caps}"
        );
        ensure!(
            objective.is_met_by(cert),
            case,
            inst,
            "certificate {cert} misses {objective:?}"
        );
        ensure!(
            budget.admits(inst.capacities(), &caps),
            case,
            inst,
            "{caps} breaks {budget:?}"
        );
        ensure!(
            plan.seats_changed == inst.capacities().l1_distance(&caps),
            case,
            inst,
            "seat count mismatch"
        );
    }
    Ok(())
}

pub fn add_pair_vs_oracle(cases: usize, seed: u64) -> Result<Tally, String> {
    let mut r = rng(seed);
    let mut tally = Tally::default();
    for case in 0..cases {
        let inst = small_random(&mut r);
        let (w, f) = random_pair(&mut r, &inst);
        let budget = random_budget(&mut r, inst.n_firms(), false);
        let objective = Objective::MatchPair { worker: w, firm: f };
        let plan = e(add_capacity_match_pair(&inst, w, f, budget.global))?;
        let brute = e(brute_force_plan(
            &inst,
            &objective,
            Action::Add,
            &budget,
            &limits(),
        ))?;
        check_plan(case, &inst, &objective, &budget, &plan, &brute, &mut tally)?;
        let zero = e(add_capacity_match_pair(&inst, w, f, 0))?.feasible;
        ensure!(
            e(is_stable_pair(&inst, w, f))? == zero,
            case,
            &inst,
            "is_stable_pair disagrees"
        );
    }
    Ok(tally)
}

pub fn delete_pair_vs_oracle(cases: usize, seed: u64) -> Result<Tally, String> {
    let mut r = rng(seed);
    let mut tally = Tally::default();
    for case in 0..cases {
        let inst = small_seated(&mut r);
        let (w, f) = random_pair(&mut r, &inst);
        let budget = random_budget(&mut r, inst.n_firms(), false);
        let objective = Objective::MatchPair { worker: w, firm: f };
        let plan = e(delete_capacity_match_pair(&inst, w, f, budget.global))?;
        let brute = e(brute_force_plan(
            &inst,
            &objective,
            Action::Delete,
            &budget,
            &limits(),
        ))?;
        check_plan(case, &inst, &objective, &budget, &plan, &brute, &mut tally)?;
    }
    Ok(tally)
}

pub fn add_stabilize_vs_oracle(cases: usize, seed: u64) -> Result<Tally, String> {
    let mut r = rng(seed);
    let mut tally = Tally::default();
    for case in 0..cases {
        let inst = small_complete(&mut r);
        let per_firm = r.gen_bool(0.5);
        let budget = random_budget(&mut r, inst.n_firms(), per_firm);
        let target = if r.gen_bool(0.5) {
            random_matching(
                &mut r,
                &inst,
                |f| inst.capacity(f) + budget.firm_limit(f),
                false,
            )
        } else {
            reachable_stable(&mut r, &inst, Action::Add, &budget)?
        };
        let objective = Objective::Stabilize(target.clone());
        let plan = e(add_capacity_stabilize(&inst, &budget, &target))?;
        let brute = e(brute_force_plan(
            &inst,
            &objective,
            Action::Add,
            &budget,
            &limits(),
        ))?;
        check_plan(case, &inst, &objective, &budget, &plan, &brute, &mut tally)?;
    }
    Ok(tally)
}

pub fn delete_stabilize_vs_oracle(cases: usize, seed: u64) -> Result<Tally, String> {
    let mut r = rng(seed);
    let mut tally = Tally::default();
    for case in 0..cases {
        let inst = small_seated(&mut r);
        let per_firm = r.gen_bool(0.5);
        let budget = random_budget(&mut r, inst.n_firms(), per_firm);
        let target = if r.gen_bool(0.5) {
            random_matching(&mut r, &inst, |f| inst.capacity(f), true)
        } else {
            reachable_stable(&mut r, &inst, Action::Delete, &budget)?
        };
        let objective = Objective::Stabilize(target.clone());
        let plan = e(delete_capacity_stabilize(&inst, &budget, &target))?;
        let brute = e(brute_force_plan(
            &inst,
            &objective,
            Action::Delete,
            &budget,
            &limits(),
        ))?;
        check_plan(case, &inst, &objective, &budget, &plan, &brute, &mut tally)?;
    }
    Ok(tally)
}

pub fn exact_add_vs_oracle(cases: usize, seed: u64) -> Result<Tally, String> {
    let mut r = rng(seed);
    let mut tally = Tally::default();
    for case in 0..cases {
        let inst = small_random(&mut r);
        let (w, f) = random_pair(&mut r, &inst);
        let budget = random_budget(&mut r, inst.n_firms(), true);
        let objective = Objective::MatchPair { worker: w, firm: f };
        let plan = e(budgeted_add_match_pair_exact(&inst, w, f, &budget))?;
        let brute = e(brute_force_plan(
            &inst,
            &objective,
            Action::Add,
            &budget,
            &limits(),
        ))?;
        check_plan(case, &inst, &objective, &budget, &plan, &brute, &mut tally)?;
    }
    Ok(tally)
}

pub fn exact_delete_vs_oracle(cases: usize, seed: u64) -> Result<Tally, String> {
    let mut r = rng(seed);
    let mut tally = Tally::default();
    for case in 0..cases {
        let inst = small_seated(&mut r);
        let (w, f) = random_pair(&mut r, &inst);
        let budget = random_budget(&mut r, inst.n_firms(), true);
        let objective = Objective::MatchPair { worker: w, firm: f };
        let plan = e(budgeted_delete_match_pair_exact(&inst, w, f, &budget))?;
        let brute = e(brute_force_plan(
            &inst,
            &objective,
            Action::Delete,
            &budget,
            &limits(),
        ))?;
        check_plan(case, &inst, &objective, &budget, &plan, &brute, &mut tally)?;
    }
    Ok(tally)
}

/// One-to-one image of a small random market with at most `max_men` men.
fn small_one_to_one(r: &mut ChaCha8Rng, max_men: usize) -> canonical::OneToOneInstance {
    loop {
        let inst = small_random(r);
        let (one, _) = to_one_to_one(&inst);
        if one.n_men() <= max_men {
            return one;
        }
    }
}

fn without_men(inst: &Instance, men: &BTreeSet<FirmId>) -> Instance {
    let mut caps = inst.capacities().clone();
    for &p in men {
        caps.set(p, 0);
    }
    inst.with_capacities(caps)
}

/// Every man removed by the fixed-point loop lies in every feasible deletion set.
pub fn delete_men_necessity(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let one = small_one_to_one(&mut r, 6);
        let inst = one.instance();
        let target = random_matching(&mut r, inst, |_| 1, true);
        let n = one.n_men();
        let plan = e(delete_men_stabilize(
            &one,
            &GroupPartition::single(n, n),
            n,
            &target,
        ))?;
        ensure!(
            plan.feasible,
            case,
            inst,
            "unbounded deletion infeasible for {target}"
        );
        let mut smallest = usize::MAX;
        for d in one.men().powerset() {
            let d: BTreeSet<FirmId> = d.into_iter().collect();
            let reduced = without_men(inst, &d);
            let ok = stable_set(&reduced)?.iter().any(|mu| {
                inst.workers()
                    .all(|w| mu.partner(w).is_none() || mu.partner(w) == target.partner(w))
            });
            if ok {
                ensure!(
                    plan.men.is_subset(&d),
                    case,
                    inst,
                    "{:?} not inside feasible {d:?}",
                    plan.men
                );
                smallest = smallest.min(d.len());
            }
        }
        ensure!(
            smallest == plan.men.len(),
            case,
            inst,
            "plan deletes {:?}, optimum {smallest}",
            plan.men
        );
    }
    Ok(())
}

/// Removing one man newly matches at most one agent, and never a woman.
pub fn delete_one_man(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let one = small_one_to_one(&mut r, 8);
        let inst = one.instance();
        if one.n_men() == 0 {
            continue;
        }
        let p = FirmId(r.gen_range(0..one.n_men()));
        let before = wpda(inst).0;
        let after = wpda(&without_men(inst, &[p].into())).0;
        let women = inst
            .workers()
            .filter(|&w| before.partner(w).is_none() && after.partner(w).is_some())
            .count();
        let men = inst
            .firms()
            .filter(|&q| q != p && before.size(q) == 0 && after.size(q) > 0)
            .count();
        ensure!(
            women == 0,
            case,
            inst,
            "deleting {p} matched {women} new women"
        );
        ensure!(men <= 1, case, inst, "deleting {p} matched {men} new men");
    }
    Ok(())
}

/// A blocking pair of μ survives deleting men outside the pair.
pub fn blocking_pairs_survive_deletion(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let one = small_one_to_one(&mut r, 8);
        let inst = one.instance();
        let mu = random_matching(&mut r, inst, |_| 1, false);
        let d: BTreeSet<FirmId> = one.men().filter(|_| r.gen_bool(0.3)).collect();
        let reduced = without_men(inst, &d);
        let rest = mu.restrict(|_, p| !d.contains(&p));
        for q in inst.workers() {
            for p in inst.firms().filter(|p| !d.contains(p)) {
                if is_blocking_pair(inst, &mu, q, p) {
                    ensure!(
                        is_blocking_pair(&reduced, &rest, q, p),
                        case,
                        inst,
                        "({q},{p}) stopped blocking after {d:?}"
                    );
                }
            }
        }
    }
    Ok(())
}

/// Assignment product over all firms (acceptable or not), filtered by `check_stability`.
fn cartesian_stable(inst: &Instance) -> Vec<Matching> {
    let domain: Vec<Option<FirmId>> = std::iter::once(None)
        .chain(inst.firms().map(Some))
        .collect();
    let mut out: Vec<Matching> = (0..inst.n_workers())
        .map(|_| domain.iter().copied())
        .multi_cartesian_product()
        .map(|a| Matching::from_assignment(inst.n_firms(), &a))
        .filter(|mu| mu.is_feasible(inst.capacities()))
        .filter(|mu| check_stability(inst, mu).map(|r| r.stable).unwrap_or(false))
        .collect();
    if inst.n_workers() == 0 {
        out = vec![Matching::empty_for(inst)];
    }
    out.sort();
    out
}

pub fn oracle_completeness(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let mut p = small_params(&mut r);
        p.n_workers = p.n_workers.min(4);
        let inst = random_instance(&mut r, &p);
        let found = stable_set(&inst)?;
        ensure!(
            found == cartesian_stable(&inst),
            case,
            &inst,
            "oracle set differs from cartesian enumeration"
        );
        ensure!(!found.is_empty(), case, &inst, "no stable matching");
    }
    Ok(())
}

pub fn rural_hospitals(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let all = stable_set(&inst)?;
        let first = &all[0];
        for mu in &all {
            for f in inst.firms() {
                ensure!(mu.size(f) == first.size(f), case, &inst, "{f} size varies");
                if mu.size(f) < inst.capacity(f) {
                    for nu in &all {
                        ensure!(
                            nu.workers_of(f) == mu.workers_of(f),
                            case,
                            &inst,
                            "unsaturated {f} set varies"
                        );
                    }
                }
            }
            for w in inst.workers() {
                ensure!(
                    mu.partner(w).is_none() == first.partner(w).is_none(),
                    case,
                    &inst,
                    "{w} matched in some stable matchings only"
                );
            }
        }
    }
    Ok(())
}

pub fn canonical_bijection(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let (one, map) = to_one_to_one(&inst);
        let many = stable_set(&inst)?;
        let ones = stable_set(one.instance())?;
        ensure!(
            many.len() == ones.len(),
            case,
            &inst,
            "{} vs {} stable matchings",
            many.len(),
            ones.len()
        );
        for mu in &many {
            let mu1 = e(expand_matching(&inst, &map, mu))?;
            ensure!(
                is_stable(one.instance(), &mu1),
                case,
                &inst,
                "expanded {mu} unstable"
            );
            ensure!(
                &compress_matching(&map, &mu1) == mu,
                case,
                &inst,
                "round trip of {mu} fails"
            );
        }
        for mu1 in &ones {
            let mu = compress_matching(&map, mu1);
            ensure!(
                is_stable(&inst, &mu),
                case,
                &inst,
                "compressed {mu} unstable"
            );
        }
    }
    Ok(())
}

pub fn da_optimality(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let mut p = small_params(&mut r);
        p.max_cap = 3;
        let inst = random_instance(&mut r, &p);
        let (wosm, fosm) = (wpda(&inst).0, fpda(&inst).0);
        let all = stable_set(&inst)?;
        ensure!(
            all.contains(&wosm),
            case,
            &inst,
            "WPDA output {wosm} not stable"
        );
        ensure!(
            all.contains(&fosm),
            case,
            &inst,
            "FPDA output {fosm} not stable"
        );
        for mu in &all {
            for w in inst.workers() {
                ensure!(
                    !inst.worker_prefers(w, mu.partner(w), wosm.partner(w)),
                    case,
                    &inst,
                    "{w} beats WPDA in {mu}"
                );
                ensure!(
                    !inst.worker_prefers(w, fosm.partner(w), mu.partner(w)),
                    case,
                    &inst,
                    "{w} worse than FPDA in {mu}"
                );
            }
            for f in inst.firms() {
                let up = e(compare_sets(&inst, f, fosm.workers_of(f), mu.workers_of(f)))?;
                ensure!(
                    up.is_better_or_equal(),
                    case,
                    &inst,
                    "{f} beats FPDA in {mu}"
                );
                let down = e(compare_sets(&inst, f, mu.workers_of(f), wosm.workers_of(f)))?;
                ensure!(
                    down.is_better_or_equal(),
                    case,
                    &inst,
                    "{f} worse than WPDA in {mu}"
                );
            }
        }
    }
    Ok(())
}

pub fn proposals_shrink_with_capacity(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let f = random_firm(&mut r, &inst);
        let received: Vec<BTreeSet<WorkerId>> = (0..=inst.n_workers())
            .map(|b| wpda(&inst.with_capacity(f, b)).1.received_by_firm[f.0].clone())
            .collect();
        for (b, pair) in received.windows(2).enumerate() {
            ensure!(
                pair[1].is_subset(&pair[0]),
                case,
                &inst,
                "{f} proposals grow from {b} to {} seats",
                b + 1
            );
        }
    }
    Ok(())
}

pub fn peak_matches_oracle(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let f = random_firm(&mut r, &inst);
        let p = e(peak(&inst, f))?.peak;
        let sweep = (0..=inst.n_workers())
            .map(|b| wpda(&inst.with_capacity(f, b)).0.size(f))
            .max()
            .unwrap();
        ensure!(p == sweep, case, &inst, "peak {p} vs WPDA sweep {sweep}");
        let brute = e(brute_force_peak(&inst, f, &limits()))?;
        ensure!(p == brute, case, &inst, "peak {p} vs brute force {brute}");
    }
    Ok(())
}

pub fn no_rejections_at_or_above_peak(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let f = random_firm(&mut r, &inst);
        let p = e(peak(&inst, f))?.peak;
        for b in p..=inst.n_workers() + 1 {
            let (_, trace) = wpda(&inst.with_capacity(f, b));
            ensure!(
                trace.rejections_by_firm(f) == 0,
                case,
                &inst,
                "{f} rejects at {b} seats, peak {p}"
            );
        }
        if p > 0 {
            // Below the peak it still hears from at least `p` workers, so it fills up.
            let (mu, _) = wpda(&inst.with_capacity(f, p - 1));
            ensure!(
                mu.size(f) == p - 1,
                case,
                &inst,
                "{f} unsaturated below peak"
            );
        }
    }
    Ok(())
}

pub fn set_freeze_above_peak(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let f = random_firm(&mut r, &inst);
        let report = e(peak(&inst, f))?;
        for b in report.peak + 1..=inst.n_workers() + 1 {
            for mu in stable_set(&inst.with_capacity(f, b))? {
                ensure!(
                    mu.workers_of(f) == &report.at_peak_wosm_set,
                    case,
                    &inst,
                    "{f} at {b} seats gets {:?} in {mu}",
                    mu.workers_of(f)
                );
            }
        }
    }
    Ok(())
}

fn misreports(inst: &Instance, f: FirmId) -> impl Iterator<Item = Instance> + '_ {
    let list = inst.firm_prefs(f).to_vec();
    let k = list.len();
    list.into_iter()
        .permutations(k)
        .map(move |perm| inst.with_firm_prefs(f, perm).unwrap())
}

pub fn pref_useless_above_peak(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let f = random_firm(&mut r, &inst);
        let report = e(peak(&inst, f))?;
        let inst = inst.with_capacity(f, report.peak + r.gen_range(1..=2));
        for lie in misreports(&inst, f) {
            for mu in stable_set(&lie)? {
                ensure!(
                    mu.workers_of(f) == &report.at_peak_wosm_set,
                    case,
                    &inst,
                    "misreport {:?} gives {f} {:?}",
                    lie.firm_prefs(f),
                    mu.workers_of(f)
                );
            }
        }
        ensure!(
            e(best_pref(&inst, f, Algorithm::Fpda, 8))?.is_none(),
            case,
            &inst,
            "FPDA Pref helps above peak"
        );
    }
    Ok(())
}

pub fn wpda_pref_useless_at_or_above_peak(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let f = random_firm(&mut r, &inst);
        let p = e(peak(&inst, f))?.peak;
        let inst = inst.with_capacity(f, p + r.gen_range(0..=1));
        let truthful = wpda(&inst).0.workers_of(f).clone();
        for lie in misreports(&inst, f) {
            let out = wpda(&lie).0;
            ensure!(
                out.workers_of(f) == &truthful,
                case,
                &inst,
                "misreport {:?} changes {f}",
                lie.firm_prefs(f)
            );
        }
    }
    Ok(())
}

pub fn add_useless_at_or_above_peak(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let f = random_firm(&mut r, &inst);
        let p = e(peak(&inst, f))?.peak;
        let c = p + r.gen_range(0..=1);
        let inst = inst.with_capacity(f, c);
        for algo in [Algorithm::Wpda, Algorithm::Fpda] {
            let base = algo.matching(&inst).workers_of(f).clone();
            for b in c + 1..=inst.n_workers() + 1 {
                let out = algo
                    .matching(&inst.with_capacity(f, b))
                    .workers_of(f)
                    .clone();
                // FPDA at the peak may lose ground above it; everywhere else nothing moves.
                if algo == Algorithm::Fpda && c == p {
                    let ord = e(compare_sets(&inst, f, &out, &base))?;
                    ensure!(!ord.is_better(), case, &inst, "FPDA Add helps {f} at peak");
                } else {
                    ensure!(
                        out == base,
                        case,
                        &inst,
                        "{algo:?} outcome of {f} moves from {c} to {b} seats"
                    );
                }
            }
        }
    }
    Ok(())
}

pub fn no_worker_worse_on_add(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_random(&mut r);
        let f = random_firm(&mut r, &inst);
        let report = e(worker_effect_report(&inst, f))?;
        for effect in &report.effects {
            ensure!(
                effect.no_worker_worse,
                case,
                &inst,
                "{:?}: a worker loses when {f} adds a seat",
                effect.algorithm
            );
            ensure!(
                effect.no_other_firm_better,
                case,
                &inst,
                "{:?}: another firm gains when {f} adds a seat",
                effect.algorithm
            );
        }
    }
    Ok(())
}

/// Half truncated, half complete lists.
fn small_monotone(r: &mut ChaCha8Rng) -> Instance {
    let p = GenParams {
        extension: SM,
        ..small_params(r)
    };
    if r.gen_bool(0.5) {
        random_instance(r, &p)
    } else {
        complete_instance(r, &p)
    }
}

pub fn monotone_wpda_add_never_hurts(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_monotone(&mut r);
        let f = random_firm(&mut r, &inst);
        let before = wpda(&inst).0;
        let after = wpda(&inst.with_capacity(f, inst.capacity(f) + 1)).0;
        let ord = e(compare_sets(
            &inst,
            f,
            after.workers_of(f),
            before.workers_of(f),
        ))?;
        ensure!(
            ord.is_better_or_equal(),
            case,
            &inst,
            "{f} worse after adding a seat"
        );
    }
    Ok(())
}

pub fn monotone_wpda_delete_useless(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_monotone(&mut r);
        let f = random_firm(&mut r, &inst);
        let c = r.gen_range(0..=inst.n_workers() + 1);
        let inst = inst.with_capacity(f, c);
        ensure!(
            e(best_delete(&inst, f, Algorithm::Wpda))?.is_none(),
            case,
            &inst,
            "Delete helps {f} under WPDA"
        );
    }
    Ok(())
}

/// At or below the peak the firm fills every seat in every stable matching,
/// so fewer seats can only mean fewer workers.
pub fn monotone_delete_useless_at_or_below_peak(cases: usize, seed: u64) -> Sweep {
    let mut r = rng(seed);
    for case in 0..cases {
        let inst = small_monotone(&mut r);
        let f = random_firm(&mut r, &inst);
        let p = e(peak(&inst, f))?.peak;
        let inst = inst.with_capacity(f, r.gen_range(0..=p));
        for mu in stable_set(&inst)? {
            ensure!(
                mu.size(f) == inst.capacity(f),
                case,
                &inst,
                "{f} unsaturated at or below peak in {mu}"
            );
        }
        for algo in [Algorithm::Wpda, Algorithm::Fpda] {
            ensure!(
                e(best_delete(&inst, f, algo))?.is_none(),
                case,
                &inst,
                "Delete helps {f} under {algo:?}"
            );
        }
    }
    Ok(())
}

/// Returns how many sampled instances had a useful deletion.
pub fn fpda_delete_above_peak_criterion(cases: usize, seed: u64) -> Result<usize, String> {
    let mut r = rng(seed);
    let mut useful = 0;
    for case in 0..cases {
        let inst = small_monotone(&mut r);
        let f = random_firm(&mut r, &inst);
        let p = e(peak(&inst, f))?.peak;
        let at_peak = inst.with_capacity(f, p);
        let differs = fpda(&at_peak).0.workers_of(f) != wpda(&at_peak).0.workers_of(f);
        let inst = inst.with_capacity(f, p + r.gen_range(1..=2));
        let helps = e(best_delete(&inst, f, Algorithm::Fpda))?.is_some();
        ensure!(
            helps == differs,
            case,
            &inst,
            "Delete useful: {helps}, optimal sets differ at peak: {differs}"
        );
        useful += helps as usize;
    }
    Ok(useful)
}

/// Pairs `(x, y)` such that action `x` beats `y` on some instance, for the
/// given extension class, algorithm and regime. Every other pair is impossible.
pub fn possible_arrows(
    monotone: bool,
    algo: Algorithm,
    regime: Regime,
) -> Vec<(Manipulation, Manipulation)> {
    use Manipulation::{Add as A, Delete as D, Pref as P};
    match (monotone, algo, regime) {
        (false, _, Regime::BelowPeak) => vec![(P, D), (D, P), (D, A), (A, D), (A, P), (P, A)],
        (false, Algorithm::Wpda, _) => vec![(D, P), (D, A)],
        (false, Algorithm::Fpda, Regime::AtPeak) => vec![(P, D), (D, P), (D, A), (P, A)],
        (false, Algorithm::Fpda, Regime::AbovePeak) => vec![(D, P), (D, A)],
        (true, _, Regime::BelowPeak) => vec![(P, D), (A, D), (A, P)],
        (true, Algorithm::Wpda, _) => vec![],
        (true, Algorithm::Fpda, Regime::AtPeak) => vec![(P, D), (P, A)],
        (true, Algorithm::Fpda, Regime::AbovePeak) => vec![(D, P), (D, A)],
    }
}

/// No sampled firm shows an impossible arrow. Capacities land one
/// below, at, or one above the peak. Returns the number of arrows observed.
pub fn no_impossible_arrows(cases: usize, seed: u64) -> Result<usize, String> {
    let mut r = rng(seed);
    let mut seen = 0;
    for case in 0..cases {
        let inst = small_random(&mut r);
        let f = random_firm(&mut r, &inst);
        let p = e(peak(&inst, f))?.peak;
        let inst = inst.with_capacity(f, (p + r.gen_range(0..=2)).saturating_sub(1));
        let monotone = inst.extension(f) == SM;
        for algo in [Algorithm::Wpda, Algorithm::Fpda] {
            let rep = e(compare_manipulations(&inst, f, algo, 8))?;
            let possible = possible_arrows(monotone, algo, rep.regime);
            for d in &rep.dominance {
                ensure!(
                    possible.contains(&(d.winner, d.loser)),
                    case,
                    &inst,
                    "{algo:?} {:?}: {:?} beats {:?} for {f}",
                    rep.regime,
                    d.winner,
                    d.loser
                );
            }
            seen += rep.dominance.len();
        }
    }
    Ok(seen)
}

fn single_firm(list: &[WorkerId], n_workers: usize, ext: ExtensionKind) -> Instance {
    Instance::new(InstanceParts {
        n_firms: 1,
        n_workers,
        capacities: vec![n_workers],
        firm_prefs: vec![list.to_vec()],
        worker_prefs: vec![vec![FirmId(0)]; n_workers],
        extensions: vec![ext],
    })
    .unwrap()
}

/// Exhaustive over every acceptable list on up to four workers and every pair/triple of subsets.
pub fn set_order_is_strict_weak_and_responsive() -> Sweep {
    let f0 = FirmId(0);
    for m in 0..=4usize {
        let workers: Vec<WorkerId> = (0..m).map(WorkerId).collect();
        for k in 0..=m {
            for list in workers.iter().copied().permutations(k) {
                for ext in [LEX, SM] {
                    let inst = single_firm(&list, m, ext);
                    let subsets: Vec<BTreeSet<WorkerId>> = list
                        .iter()
                        .copied()
                        .powerset()
                        .map(|s| s.into_iter().collect())
                        .collect();
                    let cmp = |a: &BTreeSet<WorkerId>, b: &BTreeSet<WorkerId>| {
                        compare_sets(&inst, f0, a, b).unwrap()
                    };
                    let case = m * 1000 + k;
                    for a in &subsets {
                        ensure!(
                            cmp(a, a) == SetOrdering::Equal,
                            case,
                            &inst,
                            "{a:?} not equal to itself"
                        );
                        for b in &subsets {
                            let ab = cmp(a, b);
                            ensure!(
                                ab != SetOrdering::Incomparable,
                                case,
                                &inst,
                                "{a:?} vs {b:?} incomparable"
                            );
                            ensure!(
                                ab == cmp(b, a).reverse(),
                                case,
                                &inst,
                                "{a:?} vs {b:?} not antisymmetric"
                            );
                            if ab == SetOrdering::Equal {
                                ensure!(a == b, case, &inst, "distinct sets {a:?} {b:?} tie");
                            }
                            if !ab.is_better() {
                                continue;
                            }
                            for c in &subsets {
                                if cmp(b, c).is_better() {
                                    ensure!(
                                        cmp(a, c).is_better(),
                                        case,
                                        &inst,
                                        "{a:?} > {b:?} > {c:?} not transitive"
                                    );
                                }
                            }
                        }
                        for &y in list.iter().filter(|y| !a.contains(y)) {
                            let mut grown = a.clone();
                            grown.insert(y);
                            ensure!(
                                cmp(&grown, a).is_better(),
                                case,
                                &inst,
                                "adding {y} to {a:?} not better"
                            );
                            for &x in a.iter().filter(|&&x| inst.firm_prefers(f0, y, x)) {
                                let mut swapped = a.clone();
                                swapped.remove(&x);
                                swapped.insert(y);
                                ensure!(
                                    cmp(&swapped, a).is_better(),
                                    case,
                                    &inst,
                                    "swapping {x} for {y} in {a:?} not better"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
