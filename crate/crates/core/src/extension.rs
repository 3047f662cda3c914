use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Error;
use crate::model::{ExtensionKind, FirmId, Instance, WorkerId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SetOrdering {
    Better,
    Worse,
    Equal,
    Incomparable,
}

impl SetOrdering {
    pub fn is_better(self) -> bool {
        self == SetOrdering::Better
    }

    pub fn is_better_or_equal(self) -> bool {
        matches!(self, SetOrdering::Better | SetOrdering::Equal)
    }

    pub fn reverse(self) -> SetOrdering {
        match self {
            SetOrdering::Better => SetOrdering::Worse,
            SetOrdering::Worse => SetOrdering::Better,
            o => o,
        }
    }

    fn from_ord(o: Ordering) -> SetOrdering {
        // Smaller keys are better.
        match o {
            Ordering::Less => SetOrdering::Better,
            Ordering::Greater => SetOrdering::Worse,
            Ordering::Equal => SetOrdering::Equal,
        }
    }
}

/// Compares two acceptable worker sets from `f`'s point of view.
pub fn compare_sets(
    inst: &Instance,
    f: FirmId,
    s: &BTreeSet<WorkerId>,
    t: &BTreeSet<WorkerId>,
) -> Result<SetOrdering, Error> {
    inst.check_firm(f)?;
    let rs = ranks(inst, f, s)?;
    let rt = ranks(inst, f, t)?;
    Ok(compare_ranks(inst.extension(f), &rs, &rt))
}

/// Sorted ranks of `s` in `f`'s list.
pub fn ranks(inst: &Instance, f: FirmId, s: &BTreeSet<WorkerId>) -> Result<Vec<usize>, Error> {
    let mut out = Vec::with_capacity(s.len());
    for &w in s {
        inst.check_worker(w)?;
        match inst.firm_rank(f, w) {
            Some(r) => out.push(r),
            None => return Err(Error::UnacceptableWorker { firm: f, worker: w }),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Compares two sorted rank vectors (rank 0 = most preferred).
pub fn compare_ranks(kind: ExtensionKind, a: &[usize], b: &[usize]) -> SetOrdering {
    match kind {
        ExtensionKind::Lexicographic => {
            // The best worker in the symmetric difference decides.
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return SetOrdering::Better,
                    Ordering::Greater => return SetOrdering::Worse,
                }
            }
            match (i < a.len(), j < b.len()) {
                (true, false) => SetOrdering::Better,
                (false, true) => SetOrdering::Worse,
                _ => SetOrdering::Equal,
            }
        }
        ExtensionKind::StronglyMonotone => match b.len().cmp(&a.len()) {
            Ordering::Equal => SetOrdering::from_ord(a.cmp(b)),
            o => SetOrdering::from_ord(o),
        },
    }
}
