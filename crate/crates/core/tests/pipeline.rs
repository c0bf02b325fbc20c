//! Upload, compute with real worker threads, restart.

use std::sync::Arc;
use std::time::{Duration, Instant};

use graphdb_core::codecs::EncodedGraph;
use graphdb_core::invariants::{compute, InvariantId};
use graphdb_core::scheduler::{JobStatus, QueueConfig, WorkerPool};
use graphdb_core::store::{Store, StoreComputer, StoreOptions, UploadMeta};
use graphdb_core::Budget;

fn wait_idle(s: &Store) {
    let start = Instant::now();
    while !s.is_idle() {
        assert!(start.elapsed() < Duration::from_secs(60), "queue did not drain");
        std::thread::sleep(Duration::from_millis(10));
    }
}

#[test]
fn workers_fill_in_every_invariant_and_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let opts = StoreOptions { queue: QueueConfig::from_secs(&[5.0, 20.0]).unwrap(), durable: false };
    let graphs = ["IheA@GUAo", "Dhc", "C~", "E?~o"];
    let dump = {
        let store = Arc::new(Store::open(dir.path(), opts.clone()).unwrap());
        let pool = WorkerPool::start(3, store.clone(), Arc::new(StoreComputer::new(store.clone())));
        for g6 in graphs {
            store.upload(&EncodedGraph::graph6(g6), UploadMeta::default(), Some("ann")).unwrap();
            pool.notify();
        }
        wait_idle(&store);
        pool.shutdown();
        for id in 1..=graphs.len() as u64 {
            let g = store.graph(id).unwrap();
            for &inv in InvariantId::ALL {
                let want = compute(inv, &g, &Budget::unlimited()).unwrap();
                assert_eq!(store.read(|st| st.status(id, inv).cloned()), Some(JobStatus::Done(want)), "{id} {inv}");
            }
        }
        store.dump_string()
    };
    let reopened = Store::open(dir.path(), opts).unwrap();
    assert_eq!(reopened.dump_string(), dump);
}

#[test]
fn shutdown_returns_running_jobs_to_the_queue() {
    let store = Arc::new(Store::in_memory(QueueConfig::from_secs(&[30.0]).unwrap()));
    let slow = |_: &graphdb_core::scheduler::Dispatched, b: &Budget| loop {
        b.check()?;
        std::thread::sleep(Duration::from_millis(2));
    };
    let pool = WorkerPool::start(2, store.clone(), Arc::new(slow));
    store.upload(&EncodedGraph::graph6("Bw"), UploadMeta::default(), Some("ann")).unwrap();
    pool.notify();
    let start = Instant::now();
    while store.read(|st| st.mlfq().jobs().iter().filter(|j| j.computing).count()) < 2 {
        assert!(start.elapsed() < Duration::from_secs(10));
        std::thread::sleep(Duration::from_millis(5));
    }
    pool.shutdown();
    let jobs = store.read(|st| st.mlfq().jobs().iter().map(|j| (j.computing, j.attempts)).collect::<Vec<_>>());
    assert_eq!(jobs.len(), InvariantId::ALL.len());
    assert!(jobs.iter().all(|&(computing, attempts)| !computing && attempts == 0), "{jobs:?}");
}
