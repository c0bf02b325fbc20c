use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::Duration;

use parking_lot::{Condvar, Mutex};

use crate::budget::{Budget, Interrupted};
use crate::invariants::InvariantValue;

use super::mlfq::{Dispatched, JobId, Mlfq};
use super::Clock;

/// How long a cancelled computation may keep running before its worker
/// abandons it.
pub const GRACE: Duration = Duration::from_secs(1);

/// Queue operations a worker needs. Implementations serialize the
/// transitions and may persist them.
pub trait JobQueue: Send + Sync {
    fn dispatch(&self) -> Option<Dispatched>;
    fn complete(&self, job: JobId, value: InvariantValue);
    fn expire(&self, job: JobId);
    /// The pool is shutting down and will not finish this job.
    fn release(&self, job: JobId);
}

pub trait Computer: Send + Sync {
    fn compute(&self, job: &Dispatched, budget: &Budget) -> Result<InvariantValue, Interrupted>;
}

impl<F> Computer for F
where
    F: Fn(&Dispatched, &Budget) -> Result<InvariantValue, Interrupted> + Send + Sync,
{
    fn compute(&self, job: &Dispatched, budget: &Budget) -> Result<InvariantValue, Interrupted> {
        self(job, budget)
    }
}

/// An in-memory queue guarded by one lock.
pub struct SharedQueue {
    mlfq: Mutex<Mlfq>,
    clock: Arc<dyn Clock>,
}

impl SharedQueue {
    pub fn new(mlfq: Mlfq, clock: Arc<dyn Clock>) -> Self {
        SharedQueue { mlfq: Mutex::new(mlfq), clock }
    }

    pub fn with<R>(&self, f: impl FnOnce(&mut Mlfq) -> R) -> R {
        f(&mut self.mlfq.lock())
    }

    pub fn now_ms(&self) -> u64 {
        self.clock.now_ms()
    }
}

impl JobQueue for SharedQueue {
    fn dispatch(&self) -> Option<Dispatched> {
        self.mlfq.lock().dispatch()
    }

    fn complete(&self, job: JobId, value: InvariantValue) {
        let _ = self.mlfq.lock().complete(job, value);
    }

    fn expire(&self, job: JobId) {
        let now = self.clock.now_ms();
        let _ = self.mlfq.lock().expire(job, now);
    }

    fn release(&self, job: JobId) {
        let _ = self.mlfq.lock().release(job);
    }
}

#[derive(Default)]
struct Signal {
    generation: Mutex<u64>,
    cond: Condvar,
}

impl Signal {
    fn notify(&self) {
        *self.generation.lock() += 1;
        self.cond.notify_all();
    }

    fn wait(&self, timeout: Duration) {
        let mut g = self.generation.lock();
        self.cond.wait_for(&mut g, timeout);
    }
}

struct Shared {
    stop: AtomicBool,
    signal: Signal,
    active: Mutex<Vec<Arc<AtomicBool>>>,
}

/// Worker threads pulling jobs under strict level priority.
pub struct WorkerPool {
    shared: Arc<Shared>,
    handles: Vec<JoinHandle<()>>,
}

enum Finish {
    Value(InvariantValue),
    Overran,
    Stopped,
}

impl WorkerPool {
    pub fn start(workers: usize, queue: Arc<dyn JobQueue>, computer: Arc<dyn Computer>) -> Self {
        let shared = Arc::new(Shared { stop: AtomicBool::new(false), signal: Signal::default(), active: Mutex::default() });
        let handles = (0..workers.max(1))
            .map(|i| {
                let shared = shared.clone();
                let queue = queue.clone();
                let computer = computer.clone();
                thread::Builder::new()
                    .name(format!("invariant-worker-{i}"))
                    .spawn(move || worker_loop(&shared, &*queue, computer))
                    .expect("spawn worker thread")
            })
            .collect();
        WorkerPool { shared, handles }
    }

    pub fn default_workers() -> usize {
        thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    }

    /// Wakes idle workers after new jobs were submitted.
    pub fn notify(&self) {
        self.shared.signal.notify();
    }

    /// Cancels running computations, returns their jobs to the queue and
    /// joins the workers.
    pub fn shutdown(mut self) {
        self.stop_and_join();
    }

    fn stop_and_join(&mut self) {
        self.shared.stop.store(true, Ordering::SeqCst);
        for flag in self.shared.active.lock().iter() {
            flag.store(true, Ordering::SeqCst);
        }
        self.shared.signal.notify();
        for h in self.handles.drain(..) {
            let _ = h.join();
        }
    }
}

impl Drop for WorkerPool {
    fn drop(&mut self) {
        self.stop_and_join();
    }
}

fn worker_loop(shared: &Shared, queue: &dyn JobQueue, computer: Arc<dyn Computer>) {
    while !shared.stop.load(Ordering::SeqCst) {
        let Some(job) = queue.dispatch() else {
            shared.signal.wait(Duration::from_millis(100));
            continue;
        };
        match run_one(shared, &job, computer.clone()) {
            Finish::Value(v) => queue.complete(job.job, v),
            Finish::Overran => queue.expire(job.job),
            Finish::Stopped => queue.release(job.job),
        }
    }
}

fn run_one(shared: &Shared, job: &Dispatched, computer: Arc<dyn Computer>) -> Finish {
    let flag = Arc::new(AtomicBool::new(false));
    shared.active.lock().push(flag.clone());
    let budget = Budget::with_flag(flag.clone()).and_timeout(job.limit);
    let (tx, rx) = mpsc::channel();
    let task = job.clone();
    let spawned = thread::Builder::new().name(format!("job-{}", job.job)).spawn(move || {
        let _ = tx.send(computer.compute(&task, &budget));
    });
    let outcome = match spawned {
        Err(_) => Finish::Overran,
        Ok(_) => match rx.recv_timeout(job.limit + GRACE) {
            Ok(Ok(v)) => Finish::Value(v),
            Ok(Err(Interrupted)) | Err(_) => {
                // result discarded; an abandoned thread finishes on its own
                flag.store(true, Ordering::SeqCst);
                if shared.stop.load(Ordering::SeqCst) {
                    Finish::Stopped
                } else {
                    Finish::Overran
                }
            }
        },
    };
    shared.active.lock().retain(|f| !Arc::ptr_eq(f, &flag));
    outcome
}
