//! Riemannian conjugate gradient on the complex Stiefel manifold
//! `{Y ∈ C^{m×r} : Y†Y = I}` with a polar retraction.

use crate::qcore::linalg::{c, eig_hermitian_unchecked, ComplexMatrix};

pub trait StiefelObjective {
    fn value(&self, y: &ComplexMatrix) -> f64;
    /// Value and Euclidean gradient `E` with `df = Re tr(E† dY)`.
    fn value_and_gradient(&self, y: &ComplexMatrix) -> (f64, ComplexMatrix);
}

#[derive(Debug, Clone)]
pub struct StiefelResult {
    pub y: ComplexMatrix,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

fn inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Tangent projection `E - Y herm(Y†E)`.
pub fn project(y: &ComplexMatrix, e: &ComplexMatrix) -> ComplexMatrix {
    let ye = y.adjoint() * e;
    let herm = (&ye + ye.adjoint()) * c(0.5, 0.0);
    e - y * herm
}

/// Polar retraction `Z (Z†Z)^{-1/2}`.
pub fn retract(z: &ComplexMatrix) -> ComplexMatrix {
    let s = z.adjoint() * z;
    if s.nrows() == 1 {
        return z / c(s[(0, 0)].re.sqrt(), 0.0);
    }
    let inv_sqrt = eig_hermitian_unchecked(&s).map(|l| 1.0 / l.max(1e-300).sqrt());
    z * inv_sqrt
}

pub fn minimize_stiefel(
    obj: &impl StiefelObjective,
    y0: ComplexMatrix,
    max_evals: usize,
    tol: f64,
    floor: f64,
) -> StiefelResult {
    let mut y = y0;
    let (mut f, e) = obj.value_and_gradient(&y);
    let mut evals = 1usize;
    let mut g = project(&y, &e);
    let mut d = -g.clone();
    let mut step = 0.1 / inner(&g, &g).sqrt().max(1e-12);
    let mut stalls = 0;
    let mut converged = false;

    while evals < max_evals {
        let gg = inner(&g, &g);
        if f <= floor || gg.sqrt() < 1e-12 {
            converged = true;
            break;
        }
        let mut slope = inner(&g, &d);
        if slope >= 0.0 {
            d = -g.clone();
            slope = -gg;
        }
        // Armijo backtracking
        let mut t = step;
        let mut accepted = None;
        while evals < max_evals {
            let cand = retract(&(&y + &d * c(t, 0.0)));
            let fc = obj.value(&cand);
            evals += 1;
            if fc <= f + 1e-4 * t * slope {
                accepted = Some(cand);
                break;
            }
            t *= 0.5;
            if t < 1e-18 {
                break;
            }
        }
        let Some(y_new) = accepted else {
            converged = evals < max_evals;
            break;
        };
        let (f_new, e_new) = obj.value_and_gradient(&y_new);
        evals += 1;
        let g_new = project(&y_new, &e_new);
        let g_old = project(&y_new, &g);
        let d_old = project(&y_new, &d);
        let beta = (inner(&g_new, &(&g_new - &g_old)) / gg).max(0.0);
        d = -&g_new + d_old * c(beta, 0.0);

        let decrease = f - f_new;
        y = y_new;
        f = f_new;
        g = g_new;
        step = (t * 2.0).min(1e3);
        if decrease <= tol * (1.0 + f.abs()) {
            stalls += 1;
            if stalls >= 3 {
                converged = true;
                break;
            }
        } else {
            stalls = 0;
        }
    }
    StiefelResult { y, value: f, evals, converged }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{diag_real, max_abs_diff, trace};
    use crate::qcore::random::{random_isometry_with, Seed};

    // f(Y) = Re tr(Y† A Y), minimized by the bottom eigenvectors of A.
    struct Rayleigh(ComplexMatrix);
    impl StiefelObjective for Rayleigh {
        fn value(&self, y: &ComplexMatrix) -> f64 {
            trace(&(y.adjoint() * &self.0 * y)).re
        }
        fn value_and_gradient(&self, y: &ComplexMatrix) -> (f64, ComplexMatrix) {
            (self.value(y), &self.0 * y * c(2.0, 0.0))
        }
    }

    #[test]
    fn retraction_gives_isometry() {
        let z = random_isometry_with(&mut Seed(1).rng(), 6, 3) * c(1.7, 0.2);
        let y = retract(&z);
        assert!(max_abs_diff(&(y.adjoint() * &y), &ComplexMatrix::identity(3, 3)) < 1e-12);
    }

    #[test]
    fn finds_bottom_eigenspace() {
        let a = diag_real(&[3.0, 1.0, 4.0, 0.5, 2.0, 6.0]);
        let y0 = random_isometry_with(&mut Seed(2).rng(), 6, 2);
        let r = minimize_stiefel(&Rayleigh(a), y0, 5000, 1e-15, f64::NEG_INFINITY);
        assert!((r.value - 1.5).abs() < 1e-8, "{}", r.value);
    }
}
