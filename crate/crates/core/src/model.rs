use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FirmId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WorkerId(pub usize);

impl fmt::Display for FirmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0 + 1)
    }
}

impl fmt::Display for WorkerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0 + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Firm,
    Worker,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AgentId {
    pub side: Side,
    pub index: usize,
}

impl AgentId {
    pub fn firm(index: usize) -> Self {
        AgentId {
            side: Side::Firm,
            index,
        }
    }

    pub fn worker(index: usize) -> Self {
        AgentId {
            side: Side::Worker,
            index,
        }
    }
}

impl From<FirmId> for AgentId {
    fn from(f: FirmId) -> Self {
        AgentId::firm(f.0)
    }
}

impl From<WorkerId> for AgentId {
    fn from(w: WorkerId) -> Self {
        AgentId::worker(w.0)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Firm => write!(f, "{}", FirmId(self.index)),
            Side::Worker => write!(f, "{}", WorkerId(self.index)),
        }
    }
}

/// How a firm ranks sets of workers, given its ranking of single workers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum ExtensionKind {
    #[default]
    Lexicographic,
    StronglyMonotone,
}

/// Ranked acceptable agents, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceList<T> {
    ranked: Vec<T>,
}

impl<T: Copy + PartialEq> PreferenceList<T> {
    pub fn new(ranked: Vec<T>) -> Self {
        PreferenceList { ranked }
    }

    pub fn ranked(&self) -> &[T] {
        &self.ranked
    }

    pub fn position(&self, agent: T) -> Option<usize> {
        self.ranked.iter().position(|&a| a == agent)
    }

    pub fn is_acceptable(&self, agent: T) -> bool {
        self.ranked.contains(&agent)
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CapacityVector(Vec<usize>);

impl CapacityVector {
    pub fn new(caps: Vec<usize>) -> Self {
        CapacityVector(caps)
    }

    pub fn zeros(n: usize) -> Self {
        CapacityVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, f: FirmId) -> usize {
        self.0[f.0]
    }

    pub fn set(&mut self, f: FirmId, c: usize) {
        self.0[f.0] = c;
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `|self - other|_1`. Panics on length mismatch.
    pub fn l1_distance(&self, other: &CapacityVector) -> usize {
        assert_eq!(self.len(), other.len(), "capacity vectors differ in length");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.abs_diff(*b))
            .sum()
    }

    /// Coordinatewise `self >= other`.
    pub fn dominates(&self, other: &CapacityVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Coordinatewise absolute difference.
    pub fn delta(&self, other: &CapacityVector) -> Vec<usize> {
        assert_eq!(self.len(), other.len(), "capacity vectors differ in length");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.abs_diff(*b))
            .collect()
    }
}

impl From<Vec<usize>> for CapacityVector {
    fn from(v: Vec<usize>) -> Self {
        CapacityVector(v)
    }
}

impl fmt::Display for CapacityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Raw instance data prior to validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstanceParts {
    pub n_firms: usize,
    pub n_workers: usize,
    pub capacities: Vec<usize>,
    pub firm_prefs: Vec<Vec<WorkerId>>,
    pub worker_prefs: Vec<Vec<FirmId>>,
    pub extensions: Vec<ExtensionKind>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("capacity-length mismatch: {found} capacities for {expected} firms")]
    CapacityLengthMismatch { expected: usize, found: usize },
    #[error("extension-length mismatch: {found} extensions for {expected} firms")]
    ExtensionLengthMismatch { expected: usize, found: usize },
    #[error("{side:?} list count mismatch: {found} lists for {expected} agents")]
    ListCountMismatch {
        side: Side,
        expected: usize,
        found: usize,
    },
    #[error("duplicate ranked entry {entry} in list of {owner}")]
    DuplicateEntry { owner: AgentId, entry: AgentId },
    #[error("out-of-range id {entry} in list of {owner}")]
    OutOfRange { owner: AgentId, entry: AgentId },
}

/// Returns every invariant violation of `parts`.
pub fn validate_instance(parts: &InstanceParts) -> Result<(), Vec<InstanceError>> {
    let mut errs = Vec::new();
    if parts.capacities.len() != parts.n_firms {
        errs.push(InstanceError::CapacityLengthMismatch {
            expected: parts.n_firms,
            found: parts.capacities.len(),
        });
    }
    if parts.extensions.len() != parts.n_firms {
        errs.push(InstanceError::ExtensionLengthMismatch {
            expected: parts.n_firms,
            found: parts.extensions.len(),
        });
    }
    if parts.firm_prefs.len() != parts.n_firms {
        errs.push(InstanceError::ListCountMismatch {
            side: Side::Firm,
            expected: parts.n_firms,
            found: parts.firm_prefs.len(),
        });
    }
    if parts.worker_prefs.len() != parts.n_workers {
        errs.push(InstanceError::ListCountMismatch {
            side: Side::Worker,
            expected: parts.n_workers,
            found: parts.worker_prefs.len(),
        });
    }
    for (f, list) in parts.firm_prefs.iter().enumerate() {
        let idx: Vec<usize> = list.iter().map(|w| w.0).collect();
        check_list(
            AgentId::firm(f),
            &idx,
            parts.n_workers,
            AgentId::worker,
            &mut errs,
        );
    }
    for (w, list) in parts.worker_prefs.iter().enumerate() {
        let idx: Vec<usize> = list.iter().map(|f| f.0).collect();
        check_list(
            AgentId::worker(w),
            &idx,
            parts.n_firms,
            AgentId::firm,
            &mut errs,
        );
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

fn check_list(
    owner: AgentId,
    list: &[usize],
    bound: usize,
    mk: fn(usize) -> AgentId,
    errs: &mut Vec<InstanceError>,
) {
    let mut seen = BTreeSet::new();
    for &e in list {
        if e >= bound {
            errs.push(InstanceError::OutOfRange {
                owner,
                entry: mk(e),
            });
        } else if !seen.insert(e) {
            errs.push(InstanceError::DuplicateEntry {
                owner,
                entry: mk(e),
            });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid instance: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InstanceErrors(pub Vec<InstanceError>);

/// A validated many-to-one market. Immutable; modifications return new instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    capacities: CapacityVector,
    firm_prefs: Vec<PreferenceList<WorkerId>>,
    worker_prefs: Vec<PreferenceList<FirmId>>,
    extensions: Vec<ExtensionKind>,
    // firm_rank[f][w], worker_rank[w][f]
    firm_rank: Vec<Vec<Option<usize>>>,
    worker_rank: Vec<Vec<Option<usize>>>,
}

impl Instance {
    pub fn new(parts: InstanceParts) -> Result<Self, InstanceErrors> {
        validate_instance(&parts).map_err(InstanceErrors)?;
        let InstanceParts {
            n_firms,
            n_workers,
            capacities,
            firm_prefs,
            worker_prefs,
            extensions,
        } = parts;
        let mut firm_rank = vec![vec![None; n_workers]; n_firms];
        for (f, list) in firm_prefs.iter().enumerate() {
            for (r, w) in list.iter().enumerate() {
                firm_rank[f][w.0] = Some(r);
            }
        }
        let mut worker_rank = vec![vec![None; n_firms]; n_workers];
        for (w, list) in worker_prefs.iter().enumerate() {
            for (r, f) in list.iter().enumerate() {
                worker_rank[w][f.0] = Some(r);
            }
        }
        Ok(Instance {
            capacities: CapacityVector(capacities),
            firm_prefs: firm_prefs.into_iter().map(PreferenceList::new).collect(),
            worker_prefs: worker_prefs.into_iter().map(PreferenceList::new).collect(),
            extensions,
            firm_rank,
            worker_rank,
        })
    }

    /// Builds from 0-based index lists with one extension kind for every firm.
    pub fn build(
        capacities: &[usize],
        firm_prefs: &[&[usize]],
        worker_prefs: &[&[usize]],
        extension: ExtensionKind,
    ) -> Result<Self, InstanceErrors> {
        Instance::new(InstanceParts {
            n_firms: firm_prefs.len(),
            n_workers: worker_prefs.len(),
            capacities: capacities.to_vec(),
            firm_prefs: firm_prefs
                .iter()
                .map(|l| l.iter().map(|&w| WorkerId(w)).collect())
                .collect(),
            worker_prefs: worker_prefs
                .iter()
                .map(|l| l.iter().map(|&f| FirmId(f)).collect())
                .collect(),
            extensions: vec![extension; firm_prefs.len()],
        })
    }

    pub fn to_parts(&self) -> InstanceParts {
        InstanceParts {
            n_firms: self.n_firms(),
            n_workers: self.n_workers(),
            capacities: self.capacities.0.clone(),
            firm_prefs: self.firm_prefs.iter().map(|l| l.ranked.clone()).collect(),
            worker_prefs: self.worker_prefs.iter().map(|l| l.ranked.clone()).collect(),
            extensions: self.extensions.clone(),
        }
    }

    pub fn n_firms(&self) -> usize {
        self.firm_prefs.len()
    }

    pub fn n_workers(&self) -> usize {
        self.worker_prefs.len()
    }

    pub fn firms(&self) -> impl Iterator<Item = FirmId> {
        (0..self.n_firms()).map(FirmId)
    }

    pub fn workers(&self) -> impl Iterator<Item = WorkerId> {
        (0..self.n_workers()).map(WorkerId)
    }

    pub fn capacities(&self) -> &CapacityVector {
        &self.capacities
    }

    pub fn capacity(&self, f: FirmId) -> usize {
        self.capacities.get(f)
    }

    pub fn firm_prefs(&self, f: FirmId) -> &[WorkerId] {
        self.firm_prefs[f.0].ranked()
    }

    pub fn worker_prefs(&self, w: WorkerId) -> &[FirmId] {
        self.worker_prefs[w.0].ranked()
    }

    pub fn extension(&self, f: FirmId) -> ExtensionKind {
        self.extensions[f.0]
    }

    pub fn firm_rank(&self, f: FirmId, w: WorkerId) -> Option<usize> {
        self.firm_rank[f.0][w.0]
    }

    pub fn worker_rank(&self, w: WorkerId, f: FirmId) -> Option<usize> {
        self.worker_rank[w.0][f.0]
    }

    pub fn firm_accepts(&self, f: FirmId, w: WorkerId) -> bool {
        self.firm_rank(f, w).is_some()
    }

    pub fn worker_accepts(&self, w: WorkerId, f: FirmId) -> bool {
        self.worker_rank(w, f).is_some()
    }

    pub fn mutually_acceptable(&self, w: WorkerId, f: FirmId) -> bool {
        self.firm_accepts(f, w) && self.worker_accepts(w, f)
    }

    /// Strict preference of `f` for `a` over `b`; an unacceptable worker ranks below every acceptable one.
    pub fn firm_prefers(&self, f: FirmId, a: WorkerId, b: WorkerId) -> bool {
        match (self.firm_rank(f, a), self.firm_rank(f, b)) {
            (Some(x), Some(y)) => x < y,
            (Some(_), None) => true,
            _ => false,
        }
    }

    /// Strict preference of `w` for `a` over `b`, where `None` is being unmatched.
    /// A matched but unacceptable firm ranks below `None`.
    pub fn worker_prefers(&self, w: WorkerId, a: Option<FirmId>, b: Option<FirmId>) -> bool {
        self.worker_key(w, a) < self.worker_key(w, b)
    }

    fn worker_key(&self, w: WorkerId, f: Option<FirmId>) -> usize {
        let n = self.n_firms();
        match f {
            None => n,
            Some(f) => self.worker_rank(w, f).unwrap_or(n + 1),
        }
    }

    /// Every firm lists every worker and every worker lists every firm.
    pub fn is_complete(&self) -> bool {
        self.firm_prefs.iter().all(|l| l.len() == self.n_workers())
            && self.worker_prefs.iter().all(|l| l.len() == self.n_firms())
    }

    pub fn check_firm(&self, f: FirmId) -> Result<(), Error> {
        if f.0 < self.n_firms() {
            Ok(())
        } else {
            Err(Error::InvalidId(AgentId::from(f)))
        }
    }

    pub fn check_worker(&self, w: WorkerId) -> Result<(), Error> {
        if w.0 < self.n_workers() {
            Ok(())
        } else {
            Err(Error::InvalidId(AgentId::from(w)))
        }
    }

    pub fn with_capacities(&self, caps: CapacityVector) -> Instance {
        assert_eq!(caps.len(), self.n_firms(), "capacity-length mismatch");
        Instance {
            capacities: caps,
            ..self.clone()
        }
    }

    pub fn with_capacity(&self, f: FirmId, c: usize) -> Instance {
        let mut caps = self.capacities.clone();
        caps.set(f, c);
        self.with_capacities(caps)
    }

    pub fn with_extension(&self, kind: ExtensionKind) -> Instance {
        Instance {
            extensions: vec![kind; self.n_firms()],
            ..self.clone()
        }
    }

    pub fn with_firm_prefs(
        &self,
        f: FirmId,
        list: Vec<WorkerId>,
    ) -> Result<Instance, InstanceErrors> {
        let mut parts = self.to_parts();
        parts.firm_prefs[f.0] = list;
        Instance::new(parts)
    }

    pub fn with_worker_prefs(
        &self,
        w: WorkerId,
        list: Vec<FirmId>,
    ) -> Result<Instance, InstanceErrors> {
        let mut parts = self.to_parts();
        parts.worker_prefs[w.0] = list;
        Instance::new(parts)
    }
}
