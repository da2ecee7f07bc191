//! Cooperative cancellation shared between workers.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("cancelled")]
pub struct Cancelled;

type Condition = Arc<dyn Fn() -> bool + Send + Sync>;

struct Inner {
    flag: AtomicBool,
    deadline: Option<Instant>,
    condition: Option<Condition>,
    parent: Option<CancelToken>,
}

/// A cancellation flag that also fires on a deadline, on a custom condition, or
/// when any ancestor token fires.
#[derive(Clone)]
pub struct CancelToken(Arc<Inner>);

impl fmt::Debug for CancelToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CancelToken(cancelled={})", self.is_cancelled())
    }
}

impl Default for CancelToken {
    fn default() -> Self {
        Self::new()
    }
}

impl CancelToken {
    pub fn new() -> Self {
        Self::build(None, None, None)
    }

    pub fn with_deadline(deadline: Instant) -> Self {
        Self::build(Some(deadline), None, None)
    }

    fn build(deadline: Option<Instant>, condition: Option<Condition>, parent: Option<CancelToken>) -> Self {
        CancelToken(Arc::new(Inner { flag: AtomicBool::new(false), deadline, condition, parent }))
    }

    /// Child token; cancelling the child leaves the parent untouched.
    pub fn child(&self) -> Self {
        Self::build(None, None, Some(self.clone()))
    }

    /// Child token that also fires once `cond` returns true.
    pub fn child_when<F: Fn() -> bool + Send + Sync + 'static>(&self, cond: F) -> Self {
        Self::build(None, Some(Arc::new(cond)), Some(self.clone()))
    }

    pub fn cancel(&self) {
        self.0.flag.store(true, Ordering::Release);
    }

    pub fn is_cancelled(&self) -> bool {
        let mut cur = Some(self);
        while let Some(t) = cur {
            let i = &t.0;
            if i.flag.load(Ordering::Acquire) {
                return true;
            }
            if i.deadline.is_some_and(|d| Instant::now() >= d) {
                return true;
            }
            if i.condition.as_ref().is_some_and(|c| c()) {
                return true;
            }
            cur = i.parent.as_ref();
        }
        false
    }

    pub fn check(&self) -> Result<(), Cancelled> {
        if self.is_cancelled() {
            Err(Cancelled)
        } else {
            Ok(())
        }
    }
}
