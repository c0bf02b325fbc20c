//! Cooperative cancellation for long-running computations.
//!
//! Every exponential search in the crate polls a [`Budget`] at each search
//! node. A budget trips either when its wall-clock deadline passes or when
//! its shared cancellation flag is raised by another thread.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("computation interrupted")]
pub struct Interrupted;

#[derive(Debug, Clone, Default)]
pub struct Budget {
    flag: Option<Arc<AtomicBool>>,
    deadline: Option<Instant>,
}

impl Budget {
    /// A budget that never trips.
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_timeout(limit: Duration) -> Self {
        Budget {
            flag: None,
            deadline: Instant::now().checked_add(limit),
        }
    }

    pub fn with_flag(flag: Arc<AtomicBool>) -> Self {
        Budget {
            flag: Some(flag),
            deadline: None,
        }
    }

    pub fn and_timeout(mut self, limit: Duration) -> Self {
        self.deadline = Instant::now().checked_add(limit);
        self
    }

    pub fn is_exhausted(&self) -> bool {
        if let Some(flag) = &self.flag {
            if flag.load(Ordering::Relaxed) {
                return true;
            }
        }
        matches!(self.deadline, Some(d) if Instant::now() >= d)
    }

    #[inline]
    pub fn check(&self) -> Result<(), Interrupted> {
        if self.is_exhausted() {
            Err(Interrupted)
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_and_deadline_trip() {
        assert!(Budget::unlimited().check().is_ok());
        let flag = Arc::new(AtomicBool::new(false));
        let b = Budget::with_flag(flag.clone());
        assert!(b.check().is_ok());
        flag.store(true, Ordering::Relaxed);
        assert_eq!(b.check(), Err(Interrupted));
        let t = Budget::with_timeout(Duration::ZERO);
        assert_eq!(t.check(), Err(Interrupted));
    }
}
