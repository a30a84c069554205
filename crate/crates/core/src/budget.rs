//! Cooperative budget token for bounded searches. Shared by reference so
//! nested searches draw from one pool; deterministic because callers consume
//! in canonical order.

use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug)]
pub struct Budget {
    remaining: AtomicU64,
    initial: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("search budget exhausted after {initial} steps")]
pub struct BudgetExhausted {
    pub initial: u64,
}

impl Budget {
    pub fn new(steps: u64) -> Self {
        assert!(steps > 0, "budget must be positive");
        Budget { remaining: AtomicU64::new(steps), initial: steps }
    }

    /// Consumes `n` steps, failing once the pool is empty.
    pub fn spend(&self, n: u64) -> Result<(), BudgetExhausted> {
        let mut cur = self.remaining.load(Ordering::Relaxed);
        loop {
            if cur < n {
                self.remaining.store(0, Ordering::Relaxed);
                return Err(BudgetExhausted { initial: self.initial });
            }
            match self.remaining.compare_exchange_weak(
                cur,
                cur - n,
                Ordering::Relaxed,
                Ordering::Relaxed,
            ) {
                Ok(_) => return Ok(()),
                Err(seen) => cur = seen,
            }
        }
    }

    pub fn tick(&self) -> Result<(), BudgetExhausted> {
        self.spend(1)
    }

    pub fn exhausted(&self) -> bool {
        self.remaining.load(Ordering::Relaxed) == 0
    }

    pub fn initial(&self) -> u64 {
        self.initial
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(10_000)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spend_until_exhausted() {
        let b = Budget::new(3);
        assert!(b.spend(2).is_ok());
        assert!(b.spend(2).is_err());
        assert!(b.exhausted());
        assert!(b.tick().is_err());
    }

    #[test]
    #[should_panic(expected = "budget must be positive")]
    fn zero_budget_rejected() {
        let _ = Budget::new(0);
    }
}
