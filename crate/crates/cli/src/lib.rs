//! Command-line front end for `capmatch`: JSON instance I/O, generators and
//! report emission. The binary is a thin wrapper around [`run`].

pub mod io;
mod report;

use std::path::PathBuf;

use capmatch::analysis::{compare_manipulations, peak, DEFAULT_PERM_LIMIT};
use capmatch::capmod::{
    add_capacity_match_pair, add_capacity_stabilize, budgeted_add_match_pair_exact,
    budgeted_delete_match_pair_exact, delete_capacity_match_pair, delete_capacity_stabilize,
    Action, BudgetSpec, Objective, PlanResult,
};
use capmatch::generate::{masterlist_instance, random_instance, GenParams};
use capmatch::oracle::{
    brute_force_peak, brute_force_plan, enumerate_stable_matchings, OracleLimits,
};
use capmatch::{check_stability, Algorithm, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::io::{emit_instance, load_instance, load_matching, to_json, ExtensionName, Loaded};

pub const LIMITS_ENV: &str = "CAPMATCH_ORACLE_LIMITS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::TooManyAcceptableWorkers { .. } => {
                CliError::usage(format!("{e}; raise --perm-limit to search anyway"))
            }
            _ => CliError::usage(e.to_string()),
        }
    }
}

/// What a successful invocation prints, and its exit code (0 or 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

#[derive(Debug, Parser)]
#[command(
    name = "capmatch",
    version,
    about = "Stable matching with flexible capacities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Wpda,
    Fpda,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Wpda => Algorithm::Wpda,
            AlgoArg::Fpda => Algorithm::Fpda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ActionArg {
    Add,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Random,
    Masterlist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtensionArg {
    Lex,
    Monotone,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PlanArgs {
    /// `pair <worker>,<firm>` or `stabilize <matching.json>`
    #[arg(long, num_args = 2, value_names = ["KIND", "TARGET"])]
    pub objective: Option<Vec<String>>,
    #[arg(long, value_enum)]
    pub action: Option<ActionArg>,
    /// Total seats that may change.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Per-firm limit `<firm>=<seats>`; firms not listed get the total budget.
    #[arg(long = "firm-budget", value_name = "FIRM=SEATS")]
    pub firm_budget: Vec<String>,
    /// Use the exhaustive solver (pair objectives with per-firm budgets).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run deferred acceptance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "wpda")]
        algo: AlgoArg,
        #[arg(long)]
        trace: bool,
    },
    /// Check a matching for blocking agents and pairs.
    Stability {
        instance: PathBuf,
        matching: PathBuf,
    },
    /// Plan a capacity change.
    Capmod {
        instance: PathBuf,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Peak and manipulation report for one firm.
    Analyze {
        instance: PathBuf,
        #[arg(long)]
        firm: String,
        #[arg(long, value_enum, default_value = "wpda")]
        algo: AlgoArg,
        #[arg(long, default_value_t = DEFAULT_PERM_LIMIT)]
        perm_limit: usize,
    },
    /// Generate a seeded instance.
    Gen {
        #[arg(long, value_enum, default_value = "random")]
        kind: GenKind,
        #[arg(long)]
        firms: usize,
        #[arg(long)]
        workers: usize,
        #[arg(long, default_value_t = 1)]
        max_cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "lex")]
        extension: ExtensionArg,
    },
    /// Exhaustive answers for small instances.
    Oracle {
        instance: PathBuf,
        #[command(flatten)]
        mode: OracleMode,
        #[command(flatten)]
        plan: PlanArgs,
        /// With --plan, also run the planner and exit 1 if the answers differ.
        #[arg(long, requires = "plan")]
        check: bool,
    },
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct OracleMode {
    /// List every stable matching.
    #[arg(long)]
    pub enumerate: bool,
    /// Peak of a firm by search over its capacity.
    #[arg(long, value_name = "FIRM")]
    pub peak: Option<String>,
    /// Brute-force capacity plan; takes the capmod flags.
    #[arg(long)]
    pub plan: bool,
}

pub fn run(cli: &Cli, env_limits: Option<&str>) -> Result<Output, CliError> {
    match &cli.command {
        Command::Solve {
            instance,
            algo,
            trace,
        } => solve(&load_instance(instance)?, (*algo).into(), *trace),
        Command::Stability { instance, matching } => {
            let loaded = load_instance(instance)?;
            let mu = load_matching(matching, &loaded)?;
            let rep = check_stability(&loaded.instance, &mu)?;
            Ok(Output {
                stdout: to_json(&report::stability(&loaded, &rep)),
                code: if rep.stable { 0 } else { 1 },
            })
        }
        Command::Capmod { instance, plan } => {
            let loaded = load_instance(instance)?;
            let request = PlanRequest::parse(&loaded, plan)?;
            let (planner, result) = request.run_planner(&loaded)?;
            Ok(plan_output(&loaded, planner, &result))
        }
        Command::Analyze {
            instance,
            firm,
            algo,
            perm_limit,
        } => {
            let loaded = load_instance(instance)?;
            let f = loaded.firm(firm)?;
            let pk = peak(&loaded.instance, f)?;
            let man = compare_manipulations(&loaded.instance, f, (*algo).into(), *perm_limit)?;
            Ok(Output {
                stdout: to_json(&report::analyze(&loaded, &pk, &man)),
                code: 0,
            })
        }
        Command::Gen {
            kind,
            firms,
            workers,
            max_cap,
            seed,
            extension,
        } => gen(*kind, *firms, *workers, *max_cap, *seed, *extension),
        Command::Oracle {
            instance,
            mode,
            plan,
            check,
        } => {
            let limits = match env_limits {
                Some(s) => s.parse::<OracleLimits>()?,
                None => OracleLimits::default(),
            };
            oracle(&load_instance(instance)?, mode, plan, *check, &limits)
        }
    }
}

fn solve(loaded: &Loaded, algo: Algorithm, trace: bool) -> Result<Output, CliError> {
    let (mu, log) = algo.run(&loaded.instance);
    let mut out = serde_json::to_value(loaded.matching_file(&mu)).expect("matching serializes");
    if let Some(label) = loaded.label() {
        out["label"] = json!(label);
    }
    if trace {
        out["trace"] = report::trace(loaded, &log);
    }
    Ok(Output {
        stdout: to_json(&out),
        code: 0,
    })
}

fn gen(
    kind: GenKind,
    firms: usize,
    workers: usize,
    max_cap: usize,
    seed: u64,
    extension: ExtensionArg,
) -> Result<Output, CliError> {
    if firms == 0 || workers == 0 {
        return Err(CliError::usage("--firms and --workers must be positive"));
    }
    let ext = match extension {
        ExtensionArg::Lex => ExtensionName::Lex,
        ExtensionArg::Monotone => ExtensionName::Monotone,
    };
    let p = GenParams {
        n_firms: firms,
        n_workers: workers,
        max_cap,
        extension: ext.into(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = match kind {
        GenKind::Random => random_instance(&mut rng, &p),
        GenKind::Masterlist => masterlist_instance(&mut rng, &p),
    };
    Ok(Output {
        stdout: to_json(&emit_instance(&inst, None)),
        code: 0,
    })
}

fn plan_output(loaded: &Loaded, planner: &str, result: &PlanResult) -> Output {
    Output {
        stdout: to_json(&report::plan(loaded, planner, result)),
        code: if result.feasible { 0 } else { 1 },
    }
}

fn oracle(
    loaded: &Loaded,
    mode: &OracleMode,
    plan: &PlanArgs,
    check: bool,
    limits: &OracleLimits,
) -> Result<Output, CliError> {
    let inst = &loaded.instance;
    if mode.enumerate {
        let all = enumerate_stable_matchings(inst, limits)?;
        let mut out = json!({
            "count": all.len(),
            "matchings": all.iter().map(|mu| loaded.matching_file(mu)).collect::<Vec<_>>(),
        });
        report::add_label(loaded, &mut out);
        return Ok(Output {
            stdout: to_json(&out),
            code: 0,
        });
    }
    if let Some(name) = &mode.peak {
        let f = loaded.firm(name)?;
        let mut out = json!({ "firm": name, "peak": brute_force_peak(inst, f, limits)? });
        report::add_label(loaded, &mut out);
        return Ok(Output {
            stdout: to_json(&out),
            code: 0,
        });
    }
    let request = PlanRequest::parse_for_oracle(loaded, plan)?;
    let truth = brute_force_plan(
        inst,
        &request.objective,
        request.action,
        &request.budget,
        limits,
    )?;
    if !check {
        return Ok(plan_output(loaded, "brute_force_plan", &truth));
    }
    let (planner, answer) = request.run_planner(loaded)?;
    let agree = truth.feasible == answer.feasible && truth.new_caps == answer.new_caps;
    let mut out = json!({
        "agree": agree,
        "oracle": report::plan(loaded, "brute_force_plan", &truth),
        "planner": report::plan(loaded, planner, &answer),
    });
    report::add_label(loaded, &mut out);
    Ok(Output {
        stdout: to_json(&out),
        code: if agree { 0 } else { 1 },
    })
}

/// Parsed capmod flags; exactly one planner applies to each valid combination.
struct PlanRequest {
    objective: Objective,
    action: Action,
    budget: BudgetSpec,
}

impl PlanRequest {
    fn parse_for_oracle(loaded: &Loaded, args: &PlanArgs) -> Result<Self, CliError> {
        let objective = match args.objective.as_deref() {
            Some([kind, target]) => parse_objective(loaded, kind, target)?,
            _ => {
                return Err(CliError::usage(
                    "--objective pair <worker>,<firm> | stabilize <matching> is required",
                ))
            }
        };
        let action = match args.action {
            Some(ActionArg::Add) => Action::Add,
            Some(ActionArg::Delete) => Action::Delete,
            None => return Err(CliError::usage("--action add|delete is required")),
        };
        let global = args
            .budget
            .ok_or_else(|| CliError::usage("--budget is required"))?;
        let budget = if args.firm_budget.is_empty() {
            BudgetSpec::global(global)
        } else {
            let mut per = vec![global; loaded.instance.n_firms()];
            for spec in &args.firm_budget {
                let (name, seats) = spec.split_once('=').ok_or_else(|| {
                    CliError::usage(format!("--firm-budget {spec:?}: expected FIRM=SEATS"))
                })?;
                let seats: usize = seats.trim().parse().map_err(|_| {
                    CliError::usage(format!("--firm-budget {spec:?}: seats must be a number"))
                })?;
                per[loaded.firm(name.trim())?.0] = seats;
            }
            BudgetSpec::per_firm(global, per)
        };
        Ok(PlanRequest {
            objective,
            action,
            budget,
        })
    }

    fn parse(loaded: &Loaded, args: &PlanArgs) -> Result<Self, CliError> {
        let req = Self::parse_for_oracle(loaded, args)?;
        let per_firm = req.budget.per_firm.is_some();
        match (&req.objective, per_firm, args.exact) {
            (Objective::MatchPair { .. }, true, false) => Err(CliError::usage(
                "per-firm budgets on a pair objective need the exhaustive solver; add --exact",
            )),
            (Objective::MatchPair { .. }, false, true) => Err(CliError::usage(
                "--exact applies only together with --firm-budget",
            )),
            (Objective::Stabilize(_), _, true) => {
                Err(CliError::usage("--exact applies only to pair objectives"))
            }
            _ => Ok(req),
        }
    }

    fn run_planner(&self, loaded: &Loaded) -> Result<(&'static str, PlanResult), CliError> {
        let inst = &loaded.instance;
        let global = self.budget.global;
        let per_firm = self.budget.per_firm.is_some();
        let out = match (&self.objective, self.action) {
            (&Objective::MatchPair { worker, firm }, Action::Add) if per_firm => (
                "budgeted_add_match_pair_exact",
                budgeted_add_match_pair_exact(inst, worker, firm, &self.budget)?,
            ),
            (&Objective::MatchPair { worker, firm }, Action::Delete) if per_firm => (
                "budgeted_delete_match_pair_exact",
                budgeted_delete_match_pair_exact(inst, worker, firm, &self.budget)?,
            ),
            (&Objective::MatchPair { worker, firm }, Action::Add) => (
                "add_capacity_match_pair",
                add_capacity_match_pair(inst, worker, firm, global)?,
            ),
            (&Objective::MatchPair { worker, firm }, Action::Delete) => (
                "delete_capacity_match_pair",
                delete_capacity_match_pair(inst, worker, firm, global)?,
            ),
            (Objective::Stabilize(mu), Action::Add) => (
                "add_capacity_stabilize",
                add_capacity_stabilize(inst, &self.budget, mu)?,
            ),
            (Objective::Stabilize(mu), Action::Delete) => (
                "delete_capacity_stabilize",
                delete_capacity_stabilize(inst, &self.budget, mu)?,
            ),
        };
        Ok(out)
    }
}

fn parse_objective(loaded: &Loaded, kind: &str, target: &str) -> Result<Objective, CliError> {
    match kind {
        "pair" => {
            let (w, f) = target.split_once(',').ok_or_else(|| {
                CliError::usage(format!("pair objective {target:?}: expected WORKER,FIRM"))
            })?;
            Ok(Objective::MatchPair {
                worker: loaded.worker(w.trim())?,
                firm: loaded.firm(f.trim())?,
            })
        }
        "stabilize" => Ok(Objective::Stabilize(load_matching(
            std::path::Path::new(target),
            loaded,
        )?)),
        other => Err(CliError::usage(format!(
            "unknown objective {other:?}; use pair or stabilize"
        ))),
    }
}
