//! A second, deliberately plain model of the queue: per-level FIFO lists
//! and a worker table, stepped on integer milliseconds.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    TimedOut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// (input job, level, worker) per dispatch, in order.
    pub dispatches: Vec<(usize, usize, usize)>,
    pub finished: Vec<Option<(u64, Outcome)>>,
}

/// `jobs` are (arrival ms, work ms). Same tie rules as the real queue:
/// finishers report in worker order, then arrivals in input order, then
/// idle workers take work in worker order.
pub fn run(limits_ms: &[u64], workers: usize, jobs: &[(u64, u64)]) -> Trace {
    let mut levels: Vec<VecDeque<usize>> = vec![VecDeque::new(); limits_ms.len()];
    let mut level_of = vec![0usize; jobs.len()];
    // (job, ends at, completes)
    let mut busy: Vec<Option<(usize, u64, bool)>> = vec![None; workers];
    let mut arrived = vec![false; jobs.len()];
    let mut trace = Trace { dispatches: Vec::new(), finished: vec![None; jobs.len()] };
    let mut now = 0u64;
    loop {
        for slot in busy.iter_mut() {
            if let Some((j, ends, completes)) = *slot {
                if ends == now {
                    if completes {
                        trace.finished[j] = Some((now, Outcome::Done));
                    } else if level_of[j] + 1 < limits_ms.len() {
                        level_of[j] += 1;
                        levels[level_of[j]].push_back(j);
                    } else {
                        trace.finished[j] = Some((now, Outcome::TimedOut));
                    }
                    *slot = None;
                }
            }
        }
        for (j, &(arrival, _)) in jobs.iter().enumerate() {
            if arrival == now && !arrived[j] {
                arrived[j] = true;
                levels[0].push_back(j);
            }
        }
        for w in 0..workers {
            if busy[w].is_some() {
                continue;
            }
            let Some(l) = (0..levels.len()).find(|&l| !levels[l].is_empty()) else { break };
            let j = levels[l].pop_front().unwrap();
            let limit = limits_ms[l];
            let work = jobs[j].1;
            busy[w] = Some((j, now + work.min(limit), work <= limit));
            trace.dispatches.push((j, l, w));
        }
        let next_end = busy.iter().flatten().map(|&(_, e, _)| e).min();
        let next_arrival = jobs.iter().enumerate().filter(|(j, _)| !arrived[*j]).map(|(_, &(a, _))| a).min();
        now = match (next_end, next_arrival) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return trace,
        };
    }
}
