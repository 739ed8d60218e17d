//! Size guards for the exhaustive constructions.
//!
//! Everything in this crate is exponential in `n`. The default bound keeps each
//! construction at desk scale; the CLI lets `WRCOLLAPSE_MAX_N` raise it.

use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::procset::MAX_DIMENSION;

/// Default largest ambient dimension for level-one constructions.
pub const DEFAULT_MAX_N: usize = 3;

/// Environment variable that overrides [`DEFAULT_MAX_N`] in the CLI.
pub const MAX_N_ENV: &str = "WRCOLLAPSE_MAX_N";

static MAX_N: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_N);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("size bound exceeded: {what} (bound {bound})")]
pub struct SizeBoundExceeded {
    pub what: String,
    pub bound: usize,
}

/// Current bound on `n`.
pub fn max_n() -> usize {
    MAX_N.load(Ordering::Relaxed)
}

/// Sets the bound on `n`, clamped to what a process set can hold.
pub fn set_max_n(bound: usize) {
    MAX_N.store(bound.min(MAX_DIMENSION), Ordering::Relaxed);
}

/// Reads [`MAX_N_ENV`] if present. Returns the value that was applied.
pub fn init_from_env() -> Option<usize> {
    let raw = std::env::var(MAX_N_ENV).ok()?;
    let bound = raw.trim().parse::<usize>().ok()?;
    set_max_n(bound);
    Some(max_n())
}

pub fn check_n(n: usize) -> Result<(), SizeBoundExceeded> {
    let bound = max_n();
    if n > bound {
        return Err(SizeBoundExceeded {
            what: format!("n = {n}"),
            bound,
        });
    }
    Ok(())
}

/// Guard for iterated complexes: `(1, k <= 3)`, `(2, k <= 2)`, and a single
/// level for anything else within [`max_n`].
pub fn check_iterated(n: usize, k: usize) -> Result<(), SizeBoundExceeded> {
    check_n(n)?;
    let allowed = match n {
        0 => k <= 4,
        1 => k <= 3,
        2 => k <= 2,
        _ => k <= 1,
    };
    if !allowed {
        return Err(SizeBoundExceeded {
            what: format!("iterated complex (n = {n}, k = {k})"),
            bound: max_n(),
        });
    }
    Ok(())
}
