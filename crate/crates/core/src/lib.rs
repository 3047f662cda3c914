//! Many-to-one stable matching with flexible capacities.
//!
//! Firms hold up to their capacity of workers; both sides rank the other
//! side with strict lists that stop at the last acceptable agent. On top of
//! deferred acceptance the crate plans capacity changes that force a pair
//! into a stable matching or stabilize a target matching, and analyzes when
//! a firm gains from adding seats, deleting seats or misreporting.

pub mod analysis;
pub mod canonical;
pub mod capmod;
pub mod da;
pub mod error;
pub mod extension;
pub mod generate;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod stability;

pub use da::{fpda, wpda, Algorithm};
pub use error::Error;
pub use extension::{compare_sets, SetOrdering};
pub use matching::Matching;
pub use model::{
    validate_instance, AgentId, CapacityVector, ExtensionKind, FirmId, Instance, InstanceError,
    InstanceParts, PreferenceList, Side, WorkerId,
};
pub use stability::{check_stability, is_blocking_pair, is_stable, Blocker, StabilityReport};
