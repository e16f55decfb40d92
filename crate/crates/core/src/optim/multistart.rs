//! Deterministic multi-start driver.
//!
//! Starts run in fixed-size batches (parallel within a batch). The reduction
//! is ordered by start index, so results do not depend on thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Optimizer limits for one multi-start search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub max_evals: usize,
    /// Local convergence tolerance (simplex spread / per-step decrease).
    pub tol: f64,
}

impl Budget {
    pub const BASIS: Budget = Budget { restarts: 16, max_evals: 2000, tol: 1e-10 };
    pub const ROOF: Budget = Budget { restarts: 64, max_evals: 2000, tol: 1e-10 };
    pub const MEASUREMENT: Budget = Budget { restarts: 16, max_evals: 2000, tol: 1e-10 };

    pub fn with_restarts(self, restarts: usize) -> Self {
        Self { restarts: restarts.max(1), ..self }
    }

    pub fn with_max_evals(self, max_evals: usize) -> Self {
        Self { max_evals: max_evals.max(1), ..self }
    }
}

/// Best two restarts must agree within this for a search to count as converged.
pub const RESTART_AGREEMENT: f64 = 1e-6;

const BATCH: usize = 4;

#[derive(Debug, Clone)]
pub struct StartResult<T> {
    pub point: T,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct MultiStart<T> {
    pub best: T,
    pub value: f64,
    pub best_index: usize,
    /// Final value of each executed start, by index.
    pub values: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Runs up to `restarts` starts and keeps the lowest value (ties to the lower
/// index). When `floor` is given and two starts have reached it, remaining
/// batches are skipped: nothing can beat a known lower bound.
pub fn multistart<T, F>(restarts: usize, floor: Option<f64>, run: F) -> MultiStart<T>
where
    T: Send,
    F: Fn(usize) -> StartResult<T> + Sync,
{
    let restarts = restarts.max(1);
    let mut results: Vec<StartResult<T>> = Vec::with_capacity(restarts);
    let mut next = 0;
    while next < restarts {
        let end = (next + BATCH).min(restarts);
        let batch: Vec<StartResult<T>> = (next..end).into_par_iter().map(&run).collect();
        results.extend(batch);
        next = end;
        if let Some(fl) = floor {
            let at_floor = results.iter().filter(|r| r.value <= fl + 1e-14).count();
            if at_floor >= 2 || (at_floor >= 1 && restarts == 1) {
                break;
            }
        }
    }

    let values: Vec<f64> = results.iter().map(|r| r.value).collect();
    let evaluations = results.iter().map(|r| r.evals).sum();
    let best_index = (0..results.len())
        .min_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)))
        .expect("at least one start");
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let agree = sorted.len() < 2 || sorted[1] - sorted[0] <= RESTART_AGREEMENT;
    let converged = agree && results[best_index].converged;
    let best = results.swap_remove(best_index);
    MultiStart { best: best.point, value: best.value, best_index, values, evaluations, converged }
}
