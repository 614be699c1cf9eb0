use crate::error::Error;

/// Default node budget for the exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Result of a budgeted exhaustive search.
///
/// `Exhausted` is a proof that no witness exists; running out of budget is
/// reported separately as `Inconclusive` and never as nonexistence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Exhausted,
    Inconclusive { nodes: u64 },
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, SearchOutcome::Exhausted)
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, SearchOutcome::Inconclusive { .. })
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found(t) => SearchOutcome::Found(f(t)),
            SearchOutcome::Exhausted => SearchOutcome::Exhausted,
            SearchOutcome::Inconclusive { nodes } => SearchOutcome::Inconclusive { nodes },
        }
    }

    /// Collapses to a definite yes/no, turning budget exhaustion into an error.
    pub fn decided(self) -> Result<Option<T>, Error> {
        match self {
            SearchOutcome::Found(t) => Ok(Some(t)),
            SearchOutcome::Exhausted => Ok(None),
            SearchOutcome::Inconclusive { nodes } => Err(Error::Inconclusive { nodes }),
        }
    }
}

/// Node counter shared by a single search.
#[derive(Debug)]
pub(crate) struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    /// Charges one node; returns false once the limit is exceeded.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }
}
