use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::{InvariantId, InvariantValue};

pub type GraphId = u64;
pub type JobId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    #[serde(with = "secs")]
    pub limit: Duration,
    /// Share of workers nominally reserved for this level. Dispatch is
    /// strict priority across one shared pool, so this is informational.
    #[serde(default = "one")]
    pub weight: u32,
}

fn one() -> u32 {
    1
}

mod secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let v = f64::deserialize(d)?;
        Duration::try_from_secs_f64(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueConfig {
    levels: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedulerError {
    #[error("a queue needs at least one level")]
    NoLevels,
    #[error("level limits must be strictly increasing")]
    LimitsNotIncreasing,
    #[error("unknown job {0}")]
    UnknownJob(JobId),
    #[error("job {0} is not computing")]
    NotComputing(JobId),
}

impl QueueConfig {
    pub fn new(levels: Vec<Level>) -> Result<Self, SchedulerError> {
        if levels.is_empty() {
            return Err(SchedulerError::NoLevels);
        }
        if levels.windows(2).any(|w| w[0].limit >= w[1].limit) || levels[0].limit.is_zero() {
            return Err(SchedulerError::LimitsNotIncreasing);
        }
        Ok(QueueConfig { levels })
    }

    pub fn from_limits(limits: &[Duration]) -> Result<Self, SchedulerError> {
        Self::new(limits.iter().map(|&limit| Level { limit, weight: 1 }).collect())
    }

    pub fn from_secs(limits: &[f64]) -> Result<Self, SchedulerError> {
        let limits: Vec<Duration> = limits
            .iter()
            .map(|&s| Duration::try_from_secs_f64(s).map_err(|_| SchedulerError::LimitsNotIncreasing))
            .collect::<Result<_, _>>()?;
        Self::from_limits(&limits)
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn limit(&self, level: usize) -> Duration {
        self.levels[level].limit
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

impl Default for QueueConfig {
    /// One minute, then ten minutes, then 100 minutes.
    fn default() -> Self {
        QueueConfig::from_secs(&[60.0, 600.0, 6000.0]).expect("default limits are increasing")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "value", rename_all = "lowercase")]
pub enum JobStatus {
    Pending,
    Computing,
    Done(InvariantValue),
    Timeout,
}

impl JobStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            JobStatus::Pending => "pending",
            JobStatus::Computing => "computing",
            JobStatus::Done(_) => "done",
            JobStatus::Timeout => "timeout",
        }
    }

    /// Text shown to users.
    pub fn label(&self) -> String {
        match self {
            JobStatus::Pending => "pending".into(),
            JobStatus::Computing => "computing".into(),
            JobStatus::Done(v) => v.to_string(),
            JobStatus::Timeout => "computation timeout".into(),
        }
    }

    pub fn value(&self) -> Option<&InvariantValue> {
        match self {
            JobStatus::Done(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_final(&self) -> bool {
        matches!(self, JobStatus::Done(_) | JobStatus::Timeout)
    }
}

impl fmt::Display for JobStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Job {
    pub id: JobId,
    pub graph: GraphId,
    pub invariant: InvariantId,
    pub level: usize,
    /// Milliseconds on the scheduler clock at the latest enqueue.
    pub enqueued_ms: u64,
    pub attempts: u32,
    pub computing: bool,
    /// FIFO position; larger is later.
    #[serde(skip)]
    seq: u64,
}

/// A dispatched job together with its level's wall-clock limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dispatched {
    pub job: JobId,
    pub graph: GraphId,
    pub invariant: InvariantId,
    pub level: usize,
    pub limit: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expiry {
    Demoted { level: usize },
    TimedOut,
}

/// The multilevel feedback queue as a plain state machine. Callers
/// serialize access; time is passed in explicitly.
#[derive(Debug, Clone)]
pub struct Mlfq {
    config: QueueConfig,
    next_id: JobId,
    next_seq: u64,
    queues: Vec<VecDeque<JobId>>,
    jobs: BTreeMap<JobId, Job>,
    live: HashMap<(GraphId, InvariantId), JobId>,
    records: BTreeMap<(GraphId, InvariantId), JobStatus>,
}

impl Mlfq {
    pub fn new(config: QueueConfig) -> Self {
        let levels = config.len();
        Mlfq {
            config,
            next_id: 1,
            next_seq: 0,
            queues: vec![VecDeque::new(); levels],
            jobs: BTreeMap::new(),
            live: HashMap::new(),
            records: BTreeMap::new(),
        }
    }

    pub fn config(&self) -> &QueueConfig {
        &self.config
    }

    /// Enqueues one level-0 job per invariant. A pair that already has a
    /// live job keeps it and its id is returned instead.
    pub fn submit(&mut self, graph: GraphId, invariants: &[InvariantId], now_ms: u64) -> Vec<JobId> {
        invariants
            .iter()
            .map(|&inv| {
                if let Some(&id) = self.live.get(&(graph, inv)) {
                    return id;
                }
                let id = self.next_id;
                self.next_id += 1;
                let seq = self.bump_seq();
                self.jobs.insert(
                    id,
                    Job { id, graph, invariant: inv, level: 0, enqueued_ms: now_ms, attempts: 0, computing: false, seq },
                );
                self.queues[0].push_back(id);
                self.live.insert((graph, inv), id);
                self.records.insert((graph, inv), JobStatus::Pending);
                id
            })
            .collect()
    }

    fn bump_seq(&mut self) -> u64 {
        let s = self.next_seq;
        self.next_seq += 1;
        s
    }

    /// Takes the oldest pending job of the lowest non-empty level.
    pub fn dispatch(&mut self) -> Option<Dispatched> {
        let level = self.queues.iter().position(|q| !q.is_empty())?;
        let id = self.queues[level].pop_front().expect("queue is non-empty");
        let job = self.jobs.get_mut(&id).expect("queued jobs exist");
        job.computing = true;
        job.attempts += 1;
        self.records.insert((job.graph, job.invariant), JobStatus::Computing);
        Some(Dispatched {
            job: id,
            graph: job.graph,
            invariant: job.invariant,
            level,
            limit: self.config.limit(level),
        })
    }

    fn take_computing(&mut self, id: JobId) -> Result<Job, SchedulerError> {
        let job = self.jobs.get(&id).ok_or(SchedulerError::UnknownJob(id))?;
        if !job.computing {
            return Err(SchedulerError::NotComputing(id));
        }
        Ok(self.jobs.remove(&id).expect("job exists"))
    }

    pub fn complete(&mut self, id: JobId, value: InvariantValue) -> Result<(), SchedulerError> {
        let job = self.take_computing(id)?;
        self.live.remove(&(job.graph, job.invariant));
        self.records.insert((job.graph, job.invariant), JobStatus::Done(value));
        Ok(())
    }

    /// The job overran its level: demote it, or time it out at the last level.
    pub fn expire(&mut self, id: JobId, now_ms: u64) -> Result<Expiry, SchedulerError> {
        let mut job = self.take_computing(id)?;
        let key = (job.graph, job.invariant);
        if job.level + 1 < self.config.len() {
            job.level += 1;
            job.computing = false;
            job.enqueued_ms = now_ms;
            job.seq = self.bump_seq();
            let level = job.level;
            self.queues[level].push_back(id);
            self.jobs.insert(id, job);
            self.records.insert(key, JobStatus::Pending);
            Ok(Expiry::Demoted { level })
        } else {
            self.live.remove(&key);
            self.records.insert(key, JobStatus::Timeout);
            Ok(Expiry::TimedOut)
        }
    }

    /// Returns an unfinished computing job to the front of its level, as when
    /// a worker shuts down mid-computation.
    pub fn release(&mut self, id: JobId) -> Result<(), SchedulerError> {
        let job = self.jobs.get_mut(&id).ok_or(SchedulerError::UnknownJob(id))?;
        if !job.computing {
            return Err(SchedulerError::NotComputing(id));
        }
        job.computing = false;
        job.attempts = job.attempts.saturating_sub(1);
        let (level, key) = (job.level, (job.graph, job.invariant));
        self.queues[level].push_front(id);
        self.records.insert(key, JobStatus::Pending);
        Ok(())
    }

    /// After a restart: computing jobs return to pending at their level, in
    /// their original FIFO position. The interrupted attempt is not counted.
    pub fn recover(&mut self) {
        let mut stranded: Vec<(u64, JobId)> = Vec::new();
        for job in self.jobs.values_mut() {
            if job.computing {
                job.computing = false;
                job.attempts = job.attempts.saturating_sub(1);
                stranded.push((job.seq, job.id));
                self.records.insert((job.graph, job.invariant), JobStatus::Pending);
            }
        }
        if stranded.is_empty() {
            return;
        }
        stranded.sort_unstable();
        for (_, id) in stranded {
            let level = self.jobs[&id].level;
            self.queues[level].push_back(id);
        }
        for q in &mut self.queues {
            let jobs = &self.jobs;
            q.make_contiguous().sort_by_key(|id| jobs[id].seq);
        }
    }

    pub fn status(&self, graph: GraphId) -> BTreeMap<InvariantId, JobStatus> {
        self.records
            .range((graph, InvariantId::ALL[0])..=(graph, *InvariantId::ALL.last().expect("registry is non-empty")))
            .map(|(&(_, inv), s)| (inv, s.clone()))
            .collect()
    }

    pub fn record(&self, graph: GraphId, invariant: InvariantId) -> Option<&JobStatus> {
        self.records.get(&(graph, invariant))
    }

    pub fn records(&self) -> impl Iterator<Item = (GraphId, InvariantId, &JobStatus)> {
        self.records.iter().map(|(&(g, i), s)| (g, i, s))
    }

    pub fn job(&self, id: JobId) -> Option<&Job> {
        self.jobs.get(&id)
    }

    /// Live jobs in FIFO order.
    pub fn jobs(&self) -> Vec<&Job> {
        let mut all: Vec<&Job> = self.jobs.values().collect();
        all.sort_by_key(|j| j.seq);
        all
    }

    pub fn queue_lengths(&self) -> Vec<usize> {
        self.queues.iter().map(|q| q.len()).collect()
    }

    pub fn is_idle(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn live_job(&self, graph: GraphId, invariant: InvariantId) -> Option<JobId> {
        self.live.get(&(graph, invariant)).copied()
    }

    /// Records a final status loaded from persistent storage.
    pub fn restore_record(&mut self, graph: GraphId, invariant: InvariantId, status: JobStatus) {
        self.records.insert((graph, invariant), status);
    }

    /// Re-creates a live job loaded from persistent storage, appended at the
    /// back of its level (clamped to the configured levels).
    pub fn restore_job(
        &mut self,
        id: JobId,
        graph: GraphId,
        invariant: InvariantId,
        level: usize,
        attempts: u32,
        enqueued_ms: u64,
        computing: bool,
    ) {
        let level = level.min(self.config.len() - 1);
        let seq = self.bump_seq();
        self.jobs.insert(id, Job { id, graph, invariant, level, enqueued_ms, attempts, computing, seq });
        if !computing {
            self.queues[level].push_back(id);
        }
        self.live.insert((graph, invariant), id);
        self.records.insert(
            (graph, invariant),
            if computing { JobStatus::Computing } else { JobStatus::Pending },
        );
        self.next_id = self.next_id.max(id + 1);
    }

    pub fn next_job_id(&self) -> JobId {
        self.next_id
    }

    /// Ids are never reused, so this only ever moves the counter forward.
    pub fn reserve_job_ids(&mut self, next: JobId) {
        self.next_id = self.next_id.max(next);
    }
}
