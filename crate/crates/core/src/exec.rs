//! Site-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! the per-site work out over the rayon pool; without it, every policy runs
//! sequentially. Per-site work never shares state, so both policies produce
//! bit-identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Whether this policy actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Minimum number of sites handed to one rayon task.
#[cfg(feature = "parallel")]
const MIN_SITES_PER_TASK: usize = 32;

/// Runs `f(site, chunk)` over consecutive `width`-sized chunks of `out`.
///
/// On failure the error of the lowest failing site is returned, annotated
/// with that site index, regardless of scheduling.
pub(crate) fn for_each_site<F>(exec: Execution, out: &mut [f64], width: usize, f: F) -> Result<()>
where
    F: Fn(usize, &mut [f64]) -> Result<()> + Sync + Send,
{
    let first_err = if exec.is_parallel() {
        par_first_err(out, width, &f)
    } else {
        out.chunks_mut(width).enumerate().find_map(|(x, c)| f(x, c).err().map(|e| (x, e)))
    };
    match first_err {
        Some((site, e)) => Err(e.at_site(site)),
        None => Ok(()),
    }
}

#[cfg(feature = "parallel")]
fn par_first_err<F>(out: &mut [f64], width: usize, f: &F) -> Option<(usize, Error)>
where
    F: Fn(usize, &mut [f64]) -> Result<()> + Sync + Send,
{
    out.par_chunks_mut(width)
        .with_min_len(MIN_SITES_PER_TASK)
        .enumerate()
        .filter_map(|(x, c)| f(x, c).err().map(|e| (x, e)))
        .min_by_key(|(x, _)| *x)
}

#[cfg(not(feature = "parallel"))]
fn par_first_err<F>(out: &mut [f64], width: usize, f: &F) -> Option<(usize, Error)>
where
    F: Fn(usize, &mut [f64]) -> Result<()> + Sync + Send,
{
    out.chunks_mut(width).enumerate().find_map(|(x, c)| f(x, c).err().map(|e| (x, e)))
}
