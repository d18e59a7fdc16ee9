//! Threaded driver for the Monte-Carlo oracle.
//!
//! The core estimator is organized in fixed-size chunks, each drawing from
//! its own counter-derived random stream, and the final reduction sorts
//! chunks by index — so the estimate is a pure function of
//! `(shape, samples, seed)` no matter how many threads ran the chunks or in
//! which order they finished.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use hypervol_core::oracle::{
    chunk_count, chunk_len, combine_chunks, run_chunk, McChunk, McEstimate, McPlan,
};
use hypervol_core::{HalfSpaceSystem, OracleError};

/// Number of worker threads to use: `HYPERVOL_THREADS` when set to a
/// positive integer, otherwise the machine's available parallelism.
pub fn thread_budget() -> usize {
    if let Ok(raw) = std::env::var("HYPERVOL_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
        eprintln!("warning: ignoring invalid HYPERVOL_THREADS={raw:?}");
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Monte-Carlo volume estimate on `threads` workers.
///
/// Identical to [`hypervol_core::oracle::mc_volume`] for every thread
/// count; threads only affect wall-clock time.
pub fn mc_volume_parallel(
    system: &HalfSpaceSystem,
    samples: u64,
    seed: u64,
    r_max: f64,
    threads: usize,
) -> Result<McEstimate, OracleError> {
    let plan = McPlan::new(system, r_max)?;
    let n_chunks = chunk_count(samples);
    let workers = threads.clamp(1, n_chunks.max(1) as usize);

    let next = AtomicU64::new(0);
    let chunks: Mutex<Vec<McChunk>> = Mutex::new(Vec::with_capacity(n_chunks as usize));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut local = Vec::new();
                loop {
                    let index = next.fetch_add(1, Ordering::Relaxed);
                    if index >= n_chunks {
                        break;
                    }
                    local.push(run_chunk(system, &plan, seed, index, chunk_len(samples, index)));
                }
                chunks
                    .lock()
                    .expect("no worker panics while holding the chunk lock")
                    .extend(local);
            });
        }
    });

    let mut chunks = chunks.into_inner().expect("all workers have exited");
    combine_chunks(&plan, seed, samples, &mut chunks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypervol_core::oracle::mc_volume;
    use hypervol_core::{DihedralAngles, TetrahedronShape};

    fn octahedral_system() -> HalfSpaceSystem {
        let angles = DihedralAngles::uniform(0.0).unwrap();
        let shape = TetrahedronShape::realize(&angles).unwrap();
        HalfSpaceSystem::from_shape(&shape).unwrap()
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let system = octahedral_system();
        // 3.5 chunks worth of samples exercises the ragged tail.
        let samples = (3 << 20) + (1 << 19);
        let sequential = mc_volume(&system, samples, 9, 1.0).unwrap();
        for threads in [1, 2, 5] {
            let parallel = mc_volume_parallel(&system, samples, 9, 1.0, threads).unwrap();
            assert_eq!(parallel, sequential, "threads = {threads}");
        }
    }

    #[test]
    fn thread_budget_is_positive() {
        assert!(thread_budget() >= 1);
    }
}
