//! Evaluation strategy for grid scans.
//!
//! Scans are written as "evaluate cell `i`" closures. An [`Executor`] maps
//! them over `0..n` and must return results in index order, so every
//! reduction downstream is independent of how the work was scheduled.

use alloc::vec::Vec;

pub trait Executor: Sync {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every cell on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

/// Index and value of the minimum; ties go to the smallest index and NaN
/// never wins.
pub fn argmin(values: impl IntoIterator<Item = f64>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            Some((_, b)) if v >= b => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

/// Index and value of the maximum, same tie-break rule as [`argmin`].
pub fn argmax(values: impl IntoIterator<Item = f64>) -> Option<(usize, f64)> {
    argmin(values.into_iter().map(|v| -v)).map(|(i, v)| (i, -v))
}
