use crate::model::{AgentId, FirmId, InstanceErrors, WorkerId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Instance(#[from] InstanceErrors),
    #[error("unknown agent {0}")]
    InvalidId(AgentId),
    #[error("infeasible matching: {firm} holds {size} workers but has capacity {capacity}")]
    InfeasibleMatching {
        firm: FirmId,
        size: usize,
        capacity: usize,
    },
    #[error("worker {worker} is matched more than once")]
    WorkerMatchedTwice { worker: WorkerId },
    #[error(
        "matching shape {found_firms}x{found_workers} does not fit instance {n_firms}x{n_workers}"
    )]
    ShapeMismatch {
        n_firms: usize,
        n_workers: usize,
        found_firms: usize,
        found_workers: usize,
    },
    #[error("{worker} is unacceptable to {firm}")]
    UnacceptableWorker { firm: FirmId, worker: WorkerId },
    #[error("per-firm budgets are required for the exact solvers")]
    BudgetSpecMissing,
    #[error("per-firm budget vector has length {found}, expected {expected}")]
    BudgetLengthMismatch { expected: usize, found: usize },
    #[error("preferences must be complete")]
    IncompletePreferences,
    #[error("target gives {firm} {size} workers, above capacity plus budget {limit}")]
    TargetExceedsBudget {
        firm: FirmId,
        size: usize,
        limit: usize,
    },
    #[error("target gives {firm} {size} workers, above its capacity {capacity}")]
    InfeasibleTargetMatching {
        firm: FirmId,
        size: usize,
        capacity: usize,
    },
    #[error("target pairs {worker} with {firm} but they are not mutually acceptable")]
    UnacceptableTargetPair { worker: WorkerId, firm: FirmId },
    #[error("{firm} has {count} acceptable workers, above the permutation limit {limit}")]
    TooManyAcceptableWorkers {
        firm: FirmId,
        count: usize,
        limit: usize,
    },
    #[error("oracle limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("invalid group partition: {0}")]
    InvalidGroupPartition(String),
    #[error("man set is empty")]
    EmptyManSet,
}
