//! Derivative-free simplex descent with dimension-adaptive coefficients.

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Stop when `f_max - f_min` over the simplex drops below this.
    pub tol: f64,
    pub initial_step: f64,
    /// Known lower bound; reaching it (within 1e-14) ends the search.
    pub floor: f64,
}

#[derive(Debug, Clone)]
pub struct LocalMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64]) -> LocalMinimum {
        let n = x0.len();
        if n == 0 {
            return LocalMinimum { x: vec![], value: f(x0), evals: 1, converged: true };
        }
        let nf = n as f64;
        let (alpha, gamma) = (1.0, 1.0 + 2.0 / nf);
        let (rho, sigma) = (0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
        let (rho, sigma) = if n == 1 { (0.5, 0.5) } else { (rho, sigma) };

        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() { f64::INFINITY } else { v }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let v0 = eval(x0, &mut evals);
        simplex.push((x0.to_vec(), v0));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.initial_step;
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }

        let mut converged = false;
        let mut centroid = vec![0.0; n];
        let point = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
            c.iter().zip(w).map(|(ci, wi)| ci + t * (wi - ci)).collect()
        };
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[n].1 - simplex[0].1 <= self.tol || simplex[0].1 <= self.floor + 1e-14 {
                converged = true;
                break;
            }
            if evals >= self.max_evals {
                break;
            }
            centroid.iter_mut().for_each(|c| *c = 0.0);
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let worst = simplex[n].0.clone();
            let f_best = simplex[0].1;
            let f_second_worst = simplex[n - 1].1;
            let f_worst = simplex[n].1;

            let xr = point(&centroid, &worst, -alpha);
            let fr = eval(&xr, &mut evals);
            if fr < f_best {
                let xe = point(&centroid, &worst, -alpha * gamma);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < f_second_worst {
                simplex[n] = (xr, fr);
                continue;
            }
            // contraction
            let (xc, fc) = if fr < f_worst {
                let xc = point(&centroid, &worst, -alpha * rho);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = point(&centroid, &worst, rho);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < fr.min(f_worst) {
                simplex[n] = (xc, fc);
                continue;
            }
            // shrink toward the best vertex
            let best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x = point(&best, &vertex.0, sigma);
                let v = eval(&x, &mut evals);
                *vertex = (x, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        LocalMinimum { x, value, evals, converged }
    }
}

/// Repeats simplex descent from the incumbent with a shrinking step until a
/// rerun no longer improves by more than `tol` or the budget is spent.
pub fn minimize_with_restarts(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    initial_step: f64,
    max_evals: usize,
    tol: f64,
    floor: f64,
) -> LocalMinimum {
    let mut step = initial_step;
    let mut x = x0.to_vec();
    let mut best: Option<LocalMinimum> = None;
    let mut used = 0usize;
    while used < max_evals {
        let nm = NelderMead { max_evals: max_evals - used, tol, initial_step: step, floor };
        let r = nm.minimize(&mut f, &x);
        used += r.evals;
        let improved = best.as_ref().map_or(f64::INFINITY, |b| b.value - r.value);
        let done = (r.converged && improved <= tol) || r.value <= floor + 1e-14;
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            x = r.x.clone();
            best = Some(r);
        }
        if done || x.is_empty() {
            let mut b = best.expect("at least one run");
            b.converged = true;
            b.evals = used;
            return b;
        }
        step = (step * 0.5).max(1e-3);
    }
    let mut b = best.expect("at least one run");
    b.converged = false;
    b.evals = used;
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = minimize_with_restarts(f, &[-1.2, 1.0], 0.5, 20_000, 1e-14, f64::NEG_INFINITY);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4, "{:?}", r.x);
    }

    #[test]
    fn quadratic_in_many_dims() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.3).powi(2)).sum::<f64>();
        let r = minimize_with_restarts(f, &[0.0; 6], 0.5, 20_000, 1e-16, f64::NEG_INFINITY);
        assert!(r.value < 1e-10, "{}", r.value);
    }

    #[test]
    fn zero_dimensional_problem() {
        let r = NelderMead { max_evals: 10, tol: 1e-10, initial_step: 1.0, floor: f64::NEG_INFINITY }.minimize(|_| 3.0, &[]);
        assert_eq!(r.value, 3.0);
        assert!(r.converged);
    }

    #[test]
    fn budget_is_respected() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(2);
        let r = NelderMead { max_evals: 20, tol: 0.0, initial_step: 0.1, floor: f64::NEG_INFINITY }.minimize(f, &[0.0, 0.0]);
        assert!(!r.converged);
        assert!(r.evals <= 24);
    }
}
