//! Multistart-friendly wrapper over a Nelder–Mead simplex search.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    pub max_iters: u64,
    /// Stop when the standard deviation of the vertex costs drops below this.
    pub cost_spread: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { initial_step: 0.3, max_iters: 2000, cost_spread: 1e-12 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iters: u64,
    pub converged: bool,
}

struct Objective<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Objective<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> Result<f64, argmin::core::Error> {
        let v = (self.0)(p);
        // NaN would poison the simplex ordering
        Ok(if v.is_nan() { f64::INFINITY } else { v })
    }
}

/// Minimizes `f` from `x0`. Never fails: if the solver itself errors the
/// starting point is returned unconverged.
pub fn minimize<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: &SimplexOptions) -> Minimum {
    let mut simplex = vec![x0.to_vec()];
    for k in 0..x0.len() {
        let mut v = x0.to_vec();
        v[k] += opts.initial_step;
        simplex.push(v);
    }
    let fallback = |f: &F| Minimum { x: x0.to_vec(), value: f(x0), iters: 0, converged: false };
    let solver = match NelderMead::new(simplex).with_sd_tolerance(opts.cost_spread) {
        Ok(s) => s,
        Err(_) => return fallback(&f),
    };
    let run = Executor::new(Objective(&f), solver)
        .configure(|st| st.max_iters(opts.max_iters))
        .run();
    match run {
        Ok(res) => {
            let st = res.state();
            let converged = matches!(
                st.get_termination_status(),
                TerminationStatus::Terminated(TerminationReason::SolverConverged)
            );
            match st.get_best_param() {
                Some(x) => Minimum { x: x.clone(), value: st.get_best_cost(), iters: st.get_iter(), converged },
                None => fallback(&f),
            }
        }
        Err(_) => fallback(&f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |p: &[f64]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2);
        let m = minimize(f, &[-1.2, 1.0], &SimplexOptions { initial_step: 0.1, ..Default::default() });
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{m:?}");
    }

    #[test]
    fn nan_is_treated_as_infinite() {
        let f = |p: &[f64]| if p[0] < 0.0 { f64::NAN } else { (p[0] - 2.0).powi(2) };
        let m = minimize(f, &[1.0], &SimplexOptions::default());
        assert!((m.x[0] - 2.0).abs() < 1e-5);
    }
}
