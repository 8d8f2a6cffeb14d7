//! Shared inputs for the benchmarks.

use l2fractal::invariants::log_grid;
use l2fractal::{Exhaustion, Family};

/// Builds `family` to `levels`, panicking on failure.
pub fn built(family: Family, levels: usize) -> Exhaustion {
    family
        .build(levels)
        .unwrap_or_else(|e| panic!("{family} to level {levels}: {e}"))
}

/// Time grid used by the heat-curve benchmarks.
pub fn heat_times() -> Vec<f64> {
    log_grid(0.1, 1e4, 41)
}
