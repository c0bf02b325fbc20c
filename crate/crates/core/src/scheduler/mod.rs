//! Multilevel feedback queue for invariant jobs.
//!
//! Every job starts in level 0. A job that overruns its level's wall-clock
//! limit is cancelled and re-enqueued one level down, where the limit is
//! larger; overrunning the last level ends in a timeout. Idle workers always
//! take the oldest job of the lowest non-empty level.

mod clock;
mod mlfq;
mod pool;
pub mod sim;

pub use clock::{Clock, SystemClock, VirtualClock};
pub use mlfq::{Dispatched, Expiry, GraphId, Job, JobId, JobStatus, Level, Mlfq, QueueConfig, SchedulerError};
pub use pool::{Computer, JobQueue, SharedQueue, WorkerPool, GRACE};
