//! A small deterministic work queue on top of `std::thread::scope`.
//!
//! Parameter sweeps (per-shift sampling sections, per-ρ ladders) are
//! independent jobs; results are merged by input index, so the outcome is
//! identical for any worker count. The global cap set by [`set_max_jobs`]
//! lets a command-line `--jobs` flag bound parallelism process-wide.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

static MAX_JOBS: AtomicUsize = AtomicUsize::new(0);

/// Caps the number of worker threads used by [`parallel_map`]
/// (0 = use the available hardware parallelism).
pub fn set_max_jobs(jobs: usize) {
    MAX_JOBS.store(jobs, Ordering::Relaxed);
}

fn effective_jobs(n_items: usize) -> usize {
    let hw = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cap = MAX_JOBS.load(Ordering::Relaxed);
    let jobs = if cap == 0 { hw } else { cap.min(hw) };
    jobs.max(1).min(n_items.max(1))
}

/// Applies `f` to every item, possibly in parallel, returning results in
/// input order. The result is independent of the worker count.
pub fn parallel_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let n = items.len();
    let jobs = effective_jobs(n);
    if jobs <= 1 || n <= 1 {
        return items.iter().map(|t| f(t)).collect();
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, R)>();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            let tx = tx.clone();
            let next = &next;
            let items = &items;
            let f = &f;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let r = f(&items[i]);
                if tx.send((i, r)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut slots: Vec<Option<R>> = (0..n).map(|_| None).collect();
        for (i, r) in rx {
            slots[i] = Some(r);
        }
        slots.into_iter().map(|s| s.expect("worker dropped a result")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_input_order() {
        let items: Vec<u64> = (0..257).collect();
        let out = parallel_map(items.clone(), |&x| x * x);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, (i as u64) * (i as u64));
        }
    }

    #[test]
    fn independent_of_job_cap() {
        let items: Vec<u64> = (0..64).collect();
        set_max_jobs(1);
        let serial = parallel_map(items.clone(), |&x| x.wrapping_mul(2654435761));
        set_max_jobs(7);
        let parallel = parallel_map(items, |&x| x.wrapping_mul(2654435761));
        set_max_jobs(0);
        assert_eq!(serial, parallel);
    }
}
