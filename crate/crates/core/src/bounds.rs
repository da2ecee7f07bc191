//! Lower and upper bounds shared between the two workers.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

/// Monotone pair of bounds. The lower bound only rises, the upper bound only
/// falls, and an update that would cross the other bound is rejected.
#[derive(Debug)]
pub struct SharedBounds {
    lower: AtomicUsize,
    upper: AtomicUsize,
    generation: AtomicU64,
}

impl Default for SharedBounds {
    fn default() -> Self {
        Self::new()
    }
}

impl SharedBounds {
    pub fn new() -> Self {
        SharedBounds { lower: AtomicUsize::new(0), upper: AtomicUsize::new(usize::MAX), generation: AtomicU64::new(0) }
    }

    pub fn lower(&self) -> usize {
        self.lower.load(Ordering::SeqCst)
    }

    pub fn upper(&self) -> usize {
        self.upper.load(Ordering::SeqCst)
    }

    /// Bumped on every accepted update.
    pub fn generation(&self) -> u64 {
        self.generation.load(Ordering::SeqCst)
    }

    pub fn met(&self) -> bool {
        self.lower() >= self.upper()
    }

    /// Raises the lower bound to `k`. Returns false if `k` is not an
    /// improvement or exceeds the upper bound.
    pub fn offer_lower(&self, k: usize) -> bool {
        let mut cur = self.lower();
        loop {
            if k <= cur || k > self.upper() {
                return false;
            }
            match self.lower.compare_exchange(cur, k, Ordering::SeqCst, Ordering::SeqCst) {
                Ok(_) => {
                    self.generation.fetch_add(1, Ordering::SeqCst);
                    return true;
                }
                Err(seen) => cur = seen,
            }
        }
    }

    /// Lowers the upper bound to `k`. Returns false if `k` is not an
    /// improvement or is below the lower bound.
    pub fn offer_upper(&self, k: usize) -> bool {
        let mut cur = self.upper();
        loop {
            if k >= cur || k < self.lower() {
                return false;
            }
            match self.upper.compare_exchange(cur, k, Ordering::SeqCst, Ordering::SeqCst) {
                Ok(_) => {
                    self.generation.fetch_add(1, Ordering::SeqCst);
                    return true;
                }
                Err(seen) => cur = seen,
            }
        }
    }
}
