//! Searches over the unitary group via `U = U_ref · exp(iG)`.
//!
//! `G` is Hermitian with zero diagonal: diagonal phases only rephase the
//! columns, which leaves basis projectors and rank-1 measurements unchanged,
//! so `d(d-1)` real parameters cover the relevant quotient locally.

use crate::optim::multistart::{multistart, Budget, MultiStart, StartResult};
use crate::optim::nelder_mead::minimize_with_restarts;
use crate::qcore::linalg::{c, expi_hermitian, ComplexMatrix, ZERO};
use crate::qcore::random::{random_unitary, Seed};

pub fn param_count(dim: usize) -> usize {
    dim * dim.saturating_sub(1)
}

/// Zero-diagonal Hermitian matrix from `d(d-1)` reals.
pub fn offdiag_hermitian(dim: usize, x: &[f64]) -> ComplexMatrix {
    debug_assert_eq!(x.len(), param_count(dim));
    let mut g = ComplexMatrix::from_element(dim, dim, ZERO);
    let mut p = 0;
    for j in 0..dim {
        for k in (j + 1)..dim {
            let z = c(x[p], x[p + 1]);
            g[(j, k)] = z;
            g[(k, j)] = z.conj();
            p += 2;
        }
    }
    g
}

pub fn unitary_from_params(reference: &ComplexMatrix, x: &[f64]) -> ComplexMatrix {
    let dim = reference.nrows();
    if x.is_empty() {
        return reference.clone();
    }
    reference * expi_hermitian(&offdiag_hermitian(dim, x))
}

#[derive(Debug, Clone)]
pub struct UnitarySearch {
    pub unitary: ComplexMatrix,
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
    pub restart_values: Vec<f64>,
}

/// Minimizes `objective(U)` over `U(dim)`. Start `i` uses `warm[i]` as its
/// reference when available, otherwise a Haar unitary from `seed.split(i)`.
pub fn minimize_over_unitaries<F>(
    dim: usize,
    objective: F,
    warm: &[ComplexMatrix],
    budget: Budget,
    seed: Seed,
    floor: Option<f64>,
) -> UnitarySearch
where
    F: Fn(&ComplexMatrix) -> f64 + Sync,
{
    let n = param_count(dim);
    let restarts = budget.restarts.max(warm.len().min(1));
    let result: MultiStart<ComplexMatrix> = multistart(restarts, floor, |i| {
        let reference = warm.get(i).cloned().unwrap_or_else(|| random_unitary(dim, seed.split(i as u64)));
        let local = minimize_with_restarts(
            |x| objective(&unitary_from_params(&reference, x)),
            &vec![0.0; n],
            0.4,
            budget.max_evals,
            budget.tol,
            floor.unwrap_or(f64::NEG_INFINITY),
        );
        StartResult {
            point: unitary_from_params(&reference, &local.x),
            value: local.value,
            evals: local.evals,
            converged: local.converged,
        }
    });
    UnitarySearch {
        unitary: result.best,
        value: result.value,
        converged: result.converged,
        evaluations: result.evaluations,
        restart_values: result.values,
    }
}

/// Refines a near-optimal unitary with a small-step local descent and no
/// spread tolerance; used to drive an already tiny residual towards zero.
pub fn polish_unitary<F>(dim: usize, objective: F, start: &ComplexMatrix, max_evals: usize) -> (ComplexMatrix, f64)
where
    F: Fn(&ComplexMatrix) -> f64,
{
    let local = minimize_with_restarts(
        |x| objective(&unitary_from_params(start, x)),
        &vec![0.0; param_count(dim)],
        1e-3,
        max_evals,
        0.0,
        0.0,
    );
    let start_value = objective(start);
    if local.value < start_value {
        (unitary_from_params(start, &local.x), local.value)
    } else {
        (start.clone(), start_value)
    }
}
