//! Deterministic fork/join over independent jobs.
//!
//! Concurrency never changes results: each job owns an output slot keyed by
//! its index, so the merged vector is identical to a sequential run no
//! matter how the scheduler interleaves workers. The thread budget comes
//! from `REALGAME_THREADS` when set, otherwise from the machine's available
//! parallelism.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::CliError;

pub const THREADS_ENV: &str = "REALGAME_THREADS";

/// Worker-thread cap: `REALGAME_THREADS` if set (must parse to ≥ 1),
/// otherwise the machine's available parallelism.
pub fn thread_budget() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(raw) => {
            let n: usize = raw.trim().parse().map_err(|_| {
                CliError::invalid(format!(
                    "{THREADS_ENV} must be a positive integer, got `{raw}`"
                ))
            })?;
            if n == 0 {
                return Err(CliError::invalid(format!("{THREADS_ENV} must be ≥ 1")));
            }
            Ok(n)
        }
        Err(std::env::VarError::NotPresent) => Ok(std::thread::available_parallelism()
            .map(usize::from)
            .unwrap_or(1)),
        Err(std::env::VarError::NotUnicode(_)) => Err(CliError::invalid(format!(
            "{THREADS_ENV} is not valid UTF-8"
        ))),
    }
}

/// Runs `f(0), …, f(n-1)` across up to `thread_budget()` scoped threads and
/// returns the results in index order. The first error by job index wins,
/// mirroring what a sequential loop would report.
pub fn parallel_map<T, F>(n: usize, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(usize) -> Result<T, CliError> + Sync,
{
    let budget = thread_budget()?.min(n.max(1));
    if budget <= 1 || n <= 1 {
        return (0..n).map(&f).collect();
    }

    let next = AtomicUsize::new(0);
    let mut harvest: Vec<Vec<(usize, Result<T, CliError>)>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(budget);
        for _ in 0..budget {
            let next = &next;
            let f = &f;
            handles.push(scope.spawn(move || {
                let mut mine = Vec::new();
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= n {
                        return mine;
                    }
                    mine.push((i, f(i)));
                }
            }));
        }
        for h in handles {
            harvest.push(h.join().expect("worker panicked"));
        }
    });

    let mut slots: Vec<Option<Result<T, CliError>>> = (0..n).map(|_| None).collect();
    for (i, r) in harvest.into_iter().flatten() {
        slots[i] = Some(r);
    }
    let mut out = Vec::with_capacity(n);
    for slot in slots {
        out.push(slot.expect("every job index claimed exactly once")?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_arrive_in_index_order() {
        let out = parallel_map(64, |i| Ok(i * i)).unwrap();
        assert_eq!(out, (0..64).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn earliest_error_index_wins() {
        let err = parallel_map(32, |i| {
            if i % 2 == 1 {
                Err(CliError::invalid(format!("job {i}")))
            } else {
                Ok(i)
            }
        })
        .unwrap_err();
        assert_eq!(err.message, "job 1");
    }

    #[test]
    fn zero_jobs_is_empty() {
        let out: Vec<usize> = parallel_map(0, Ok).unwrap();
        assert!(out.is_empty());
    }
}
