//! Discrete-event simulation of the queue on virtual time with stub jobs
//! of known duration.
//!
//! At any instant, finishing workers report first (in worker order), then
//! arrivals are submitted (in input order), then idle workers dispatch (in
//! worker order). A job whose work exceeds its level's limit runs for the
//! full limit and then expires; the next attempt starts from scratch.

use std::collections::HashMap;
use std::time::Duration;

use crate::invariants::{InvariantId, InvariantValue};

use super::mlfq::{Expiry, GraphId, JobId, Mlfq, QueueConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimJob {
    pub graph: GraphId,
    pub invariant: InvariantId,
    pub arrival: Duration,
    pub work: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimEventKind {
    Dispatched { worker: usize, level: usize },
    Completed,
    Demoted { level: usize },
    TimedOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimEvent {
    pub at: Duration,
    /// Index into the input job list.
    pub job: usize,
    pub kind: SimEventKind,
}

struct Running {
    job: JobId,
    ends: Duration,
    completes: bool,
}

pub struct Simulation {
    pub events: Vec<SimEvent>,
    pub mlfq: Mlfq,
}

impl Simulation {
    /// Time each input job reached a final state.
    pub fn finish_times(&self) -> Vec<Option<Duration>> {
        let n = self.events.iter().map(|e| e.job + 1).max().unwrap_or(0);
        let mut out = vec![None; n];
        for e in &self.events {
            if matches!(e.kind, SimEventKind::Completed | SimEventKind::TimedOut) {
                out[e.job] = Some(e.at);
            }
        }
        out
    }

    /// Input job indices in dispatch order.
    pub fn dispatch_order(&self) -> Vec<usize> {
        self.events.iter().filter(|e| matches!(e.kind, SimEventKind::Dispatched { .. })).map(|e| e.job).collect()
    }
}

pub fn simulate(config: QueueConfig, workers: usize, jobs: &[SimJob]) -> Simulation {
    let mut mlfq = Mlfq::new(config);
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by_key(|&i| (jobs[i].arrival, i));
    let mut next_arrival = 0;
    let mut index_of: HashMap<JobId, usize> = HashMap::new();
    let mut running: Vec<Option<Running>> = (0..workers.max(1)).map(|_| None).collect();
    let mut events = Vec::new();
    let mut now = Duration::ZERO;
    loop {
        for slot in running.iter_mut() {
            if let Some(r) = slot.as_ref().filter(|r| r.ends == now) {
                let idx = index_of[&r.job];
                let kind = if r.completes {
                    mlfq.complete(r.job, InvariantValue::Bool(true)).expect("job is computing");
                    SimEventKind::Completed
                } else {
                    match mlfq.expire(r.job, now.as_millis() as u64).expect("job is computing") {
                        Expiry::Demoted { level } => SimEventKind::Demoted { level },
                        Expiry::TimedOut => SimEventKind::TimedOut,
                    }
                };
                events.push(SimEvent { at: now, job: idx, kind });
                *slot = None;
            }
        }
        while next_arrival < order.len() && jobs[order[next_arrival]].arrival == now {
            let i = order[next_arrival];
            let id = mlfq.submit(jobs[i].graph, &[jobs[i].invariant], now.as_millis() as u64)[0];
            index_of.entry(id).or_insert(i);
            next_arrival += 1;
        }
        for (worker, slot) in running.iter_mut().enumerate() {
            if slot.is_some() {
                continue;
            }
            let Some(d) = mlfq.dispatch() else { break };
            let idx = index_of[&d.job];
            let work = jobs[idx].work;
            let completes = work <= d.limit;
            let ends = now + if completes { work } else { d.limit };
            events.push(SimEvent { at: now, job: idx, kind: SimEventKind::Dispatched { worker, level: d.level } });
            *slot = Some(Running { job: d.job, ends, completes });
        }
        let next_end = running.iter().flatten().map(|r| r.ends).min();
        let next_in = order.get(next_arrival).map(|&i| jobs[i].arrival);
        now = match (next_end, next_in) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => break,
        };
    }
    Simulation { events, mlfq }
}
