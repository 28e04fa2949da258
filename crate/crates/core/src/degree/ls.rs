//! Numerical Lewenstein–Sanpera decompositions.
//!
//! For a fixed pure part ψ the weight μ = 1 − λ of ψ must satisfy two
//! conditions: P − μΨ ≥ 0, which holds exactly for μ ≤ μ_p = 1/⟨ψ|P⁺|ψ⟩
//! when ψ lies in the range of P, and (P − μΨ)^Γ ≥ 0. The second condition
//! reads h(μ) ≥ 0 with h(μ) = λ_min(P^Γ − μΨ^Γ) concave, so Newton steps
//! from μ = 0 approach its first root from below. The outer search over ψ
//! is a multistart simplex search.

use num_complex::Complex64;

use crate::classify::{is_state, separable_unchecked, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen_desc, is_positive_definite_shifted, outer, partial_transpose_first, CMat4, CVec4};
use crate::optimize::{minimize, SimplexOptions};
use crate::random::{complex_normal, rng_from_seed};
use crate::state::{PureStateVector, TwoQubitState};

/// Eigenvalues above this span the range in which ψ is searched.
const RANGE_EPS: f64 = 1e-10;
/// Tolerance of the final separability certificate.
pub const CERTIFICATE_TOL: f64 = 1e-10;
const NEWTON_MAX: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsOptions {
    pub restarts: usize,
    /// Resolution on λ of [`ls_lambda_for_pure`] and the stopping spread of
    /// the simplex search.
    pub tol: f64,
    pub seed: u64,
}

impl Default for LsOptions {
    fn default() -> Self {
        LsOptions { restarts: 64, tol: 1e-6, seed: 0 }
    }
}

/// Slack of the separable part: smallest eigenvalue of the matrix and of
/// its partial reflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SepMargins {
    pub min_eigenvalue: f64,
    pub ppt_min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LSDecomposition {
    pub lambda: f64,
    pub sep: TwoQubitState,
    /// `None` when the input is separable and λ = 1.
    pub pure: Option<PureStateVector>,
    pub margins: SepMargins,
    /// Best λ after each restart.
    pub objective_history: Vec<(usize, f64)>,
    pub restarts_used: usize,
}

impl LSDecomposition {
    /// λ·sep + (1 − λ)·pure
    pub fn reassemble(&self) -> TwoQubitState {
        match &self.pure {
            Some(psi) => {
                let pure = psi.to_state();
                let mu = 1.0 - self.lambda;
                TwoQubitState::from_parts(
                    self.sep.s() * self.lambda + pure.s() * mu,
                    self.sep.t() * self.lambda + pure.t() * mu,
                    self.sep.c() * self.lambda + pure.c() * mu,
                )
            }
            None => self.sep,
        }
    }
}

fn require_state(state: &TwoQubitState) -> Result<()> {
    if is_state(state, DEFAULT_TOL)?.decision {
        Ok(())
    } else {
        Err(Error::precondition("input is not a valid state"))
    }
}

fn feasible(p: &CMat4, psi_proj: &CMat4, lambda: f64) -> bool {
    let r = p - psi_proj * Complex64::new(1.0 - lambda, 0.0);
    let shift = CERTIFICATE_TOL * lambda.max(f64::MIN_POSITIVE);
    is_positive_definite_shifted(&r, shift) && is_positive_definite_shifted(&partial_transpose_first(&r), shift)
}

/// Largest λ ∈ [0, 1] for which (P − (1 − λ)|ψ⟩⟨ψ|)/λ is a separable state,
/// to resolution `tol`; 0 when no positive λ on a 64-point grid is feasible.
pub fn ls_lambda_for_pure(state: &TwoQubitState, psi: &PureStateVector, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::argument("tolerance must be positive"));
    }
    require_state(state)?;
    let p = *state.to_density_matrix().matrix();
    let proj = outer(psi.amplitudes());
    if feasible(&p, &proj, 1.0) {
        return Ok(1.0);
    }
    const GRID: usize = 64;
    let Some(k) = (1..GRID).rev().find(|&k| feasible(&p, &proj, k as f64 / GRID as f64)) else {
        return Ok(0.0);
    };
    let (mut lo, mut hi) = (k as f64 / GRID as f64, (k + 1) as f64 / GRID as f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(&p, &proj, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !feasible(&p, &proj, lo) {
        return Err(Error::inconsistency("bisection endpoint lost feasibility"));
    }
    Ok(lo)
}

/// Outcome of the inner problem for one ψ.
enum Inner {
    /// Smallest admissible μ.
    Feasible(f64),
    /// Largest value of h seen (negative).
    Infeasible(f64),
}

struct Problem {
    p_gamma: CMat4,
    /// Range eigenvectors and eigenvalues, descending.
    basis: Vec<(f64, CVec4)>,
}

impl Problem {
    fn new(state: &TwoQubitState) -> Self {
        let p = *state.to_density_matrix().matrix();
        let (vals, vecs) = hermitian_eigen_desc(&p);
        let basis = (0..4).filter(|&i| vals[i] > RANGE_EPS).map(|i| (vals[i], vecs[i])).collect();
        Problem { p_gamma: partial_transpose_first(&p), basis }
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }

    fn n_params(&self) -> usize {
        2 * (self.rank() - 1)
    }

    /// Hyperspherical magnitudes and relative phases → range coordinates.
    fn coords(&self, theta: &[f64]) -> Vec<Complex64> {
        let r = self.rank();
        let mut c = vec![Complex64::new(0.0, 0.0); r];
        let mut rest = 1.0;
        for k in 0..r {
            let mag = if k + 1 < r { rest * theta[k].cos() } else { rest };
            if k + 1 < r {
                rest *= theta[k].sin();
            }
            let phase = if k == 0 { 0.0 } else { theta[r - 1 + k - 1] };
            c[k] = Complex64::from_polar(mag, phase);
        }
        c
    }

    fn params_of(&self, c: &[Complex64]) -> Vec<f64> {
        let r = self.rank();
        let mut theta = vec![0.0; self.n_params()];
        let norms: Vec<f64> = c.iter().map(|z| z.norm()).collect();
        for k in 0..r.saturating_sub(1) {
            let tail: f64 = norms[k + 1..].iter().map(|v| v * v).sum::<f64>().sqrt();
            theta[k] = tail.atan2(norms[k]);
            theta[r - 1 + k] = c[k + 1].arg() - c[0].arg();
        }
        theta
    }

    fn vector(&self, c: &[Complex64]) -> CVec4 {
        self.basis.iter().zip(c).fold(CVec4::zeros(), |acc, ((_, v), ck)| acc + v * *ck)
    }

    fn mu_positivity(&self, c: &[Complex64]) -> f64 {
        let inv: f64 = self.basis.iter().zip(c).map(|((pv, _), ck)| ck.norm_sqr() / pv).sum();
        1.0 / inv
    }

    /// λ_min(P^Γ − μΨ^Γ) and its derivative in μ.
    fn h(&self, b: &CMat4, mu: f64) -> (f64, f64) {
        let m = self.p_gamma - b * Complex64::new(mu, 0.0);
        let (vals, vecs) = hermitian_eigen_desc(&m);
        let v = &vecs[3];
        (vals[3], -(v.adjoint() * b * v)[(0, 0)].re)
    }

    fn inner(&self, psi: &CVec4, mu_p: f64) -> Inner {
        let b = partial_transpose_first(&outer(psi));
        let mut mu = 0.0;
        for _ in 0..NEWTON_MAX {
            let (h, dh) = self.h(&b, mu);
            if h >= -1e-14 {
                return Inner::Feasible(mu);
            }
            if dh <= 0.0 {
                return Inner::Infeasible(self.max_h(&b, 0.0, mu));
            }
            // tangent lies above the concave h, so its root stays left of h's
            let next = mu - h / dh;
            if next > mu_p {
                return Inner::Infeasible(self.max_h(&b, mu, mu_p));
            }
            if next - mu <= 1e-15 {
                return Inner::Feasible(next);
            }
            mu = next;
        }
        Inner::Feasible(mu)
    }

    /// Maximum of the concave h on [lo, hi], by bisection on the sign of h′.
    fn max_h(&self, b: &CMat4, mut lo: f64, mut hi: f64) -> f64 {
        let (h_hi, dh_hi) = self.h(b, hi);
        if dh_hi >= 0.0 {
            return h_hi;
        }
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if self.h(b, mid).1 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.h(b, 0.5 * (lo + hi)).0
    }

    /// Simplex objective: μ when feasible, 1 + shortfall otherwise.
    fn objective(&self, theta: &[f64]) -> f64 {
        let c = self.coords(theta);
        match self.inner(&self.vector(&c), self.mu_positivity(&c)) {
            Inner::Feasible(mu) => mu,
            Inner::Infeasible(h) => 1.0 - h,
        }
    }

    /// Certified decomposition for ψ at weight μ, nudging μ upward against
    /// rounding; `None` if no nearby μ certifies.
    fn certify(&self, state: &TwoQubitState, psi: &CVec4, mu: f64) -> Option<(f64, TwoQubitState, SepMargins)> {
        let pure = PureStateVector::new(*psi).ok()?.to_state();
        for nudge in [0.0, 1e-13, 1e-12, 1e-11, 1e-10, 1e-9] {
            let mu = (mu + nudge).min(1.0);
            let lambda = 1.0 - mu;
            if lambda <= 0.0 {
                return None;
            }
            let sep = TwoQubitState::from_parts(
                (state.s() - pure.s() * mu) / lambda,
                (state.t() - pure.t() * mu) / lambda,
                (state.c() - pure.c() * mu) / lambda,
            );
            let Ok(valid) = is_state(&sep, CERTIFICATE_TOL) else { continue };
            if !valid.decision {
                continue;
            }
            let Ok(ppt) = separable_unchecked(&sep, CERTIFICATE_TOL) else { continue };
            if ppt.decision {
                let margins = SepMargins {
                    min_eigenvalue: valid.margin("min_eigenvalue").unwrap_or(f64::NAN),
                    ppt_min_eigenvalue: ppt.margin("min_eigenvalue").unwrap_or(f64::NAN),
                };
                return Some((lambda, sep, margins));
            }
        }
        None
    }
}

/// Product vectors inside span{v₁, v₂}: zeros of det of the 2×2 reshaped
/// amplitude matrix, a quadratic form in the two coefficients.
fn product_vectors_in_span(v1: &CVec4, v2: &CVec4) -> Vec<CVec4> {
    let d = |u: &CVec4| u[0] * u[3] - u[1] * u[2];
    let c = d(v1);
    let a = d(v2);
    let b = v1[0] * v2[3] + v2[0] * v1[3] - v1[1] * v2[2] - v2[1] * v1[2];
    let scale = a.norm().max(b.norm()).max(c.norm());
    if a.norm().max(c.norm()) <= 1e-14 * scale {
        return vec![*v1, *v2];
    }
    // lead·z² + b·z + trail = 0 with |lead| ≥ |trail|
    let (lead, trail, z_is_b) = if a.norm() >= c.norm() { (a, c, true) } else { (c, a, false) };
    let disc = (b * b - lead * trail * 4.0).sqrt();
    let q = if (b + disc).norm() >= (b - disc).norm() { -(b + disc) * 0.5 } else { -(b - disc) * 0.5 };
    let mut roots = vec![q / lead];
    if q.norm() > 0.0 {
        roots.push(trail / q);
    } else {
        roots.push(q / lead);
    }
    if (roots[0] - roots[1]).norm() <= 1e-9 * (1.0 + roots[0].norm()) {
        roots.truncate(1);
    }
    roots
        .into_iter()
        .map(|z| {
            let u = if z_is_b { v1 + v2 * z } else { v1 * z + v2 };
            u / Complex64::new(u.norm(), 0.0)
        })
        .collect()
}

/// Rank-2 inputs: the separable part lies in the range of the state, where
/// the separable states are the mixtures of the (at most two) product
/// vectors there. λ along that segment is 1/λ_max(P⁺·sep), and λ_max is
/// convex in the mixing weight, so a golden-section search is exact.
fn rank_two_search(state: &TwoQubitState, prob: &Problem) -> Result<LSDecomposition> {
    let (p1, v1) = prob.basis[0];
    let (p2, v2) = prob.basis[1];
    let products = product_vectors_in_span(&v1, &v2);
    let proj: Vec<CMat4> = products.iter().map(outer).collect();
    let sep_at = |w: f64| match proj.len() {
        1 => proj[0],
        _ => proj[0] * Complex64::new(w, 0.0) + proj[1] * Complex64::new(1.0 - w, 0.0),
    };
    // λ_max of P^(-1/2)·sep·P^(-1/2) restricted to the range
    let growth = |w: f64| {
        let m = sep_at(w);
        let e11 = (v1.adjoint() * m * v1)[(0, 0)].re / p1;
        let e22 = (v2.adjoint() * m * v2)[(0, 0)].re / p2;
        let e12 = (v1.adjoint() * m * v2)[(0, 0)] / (p1 * p2).sqrt();
        let mean = 0.5 * (e11 + e22);
        mean + (0.25 * (e11 - e22).powi(2) + e12.norm_sqr()).sqrt()
    };
    let w = if proj.len() == 1 {
        1.0
    } else {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0f64, 1.0f64);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (growth(c), growth(d));
        while b - a > 1e-12 {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = growth(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = growth(d);
            }
        }
        // the minimum may sit on an end of the segment
        [0.0, 0.5 * (a + b), 1.0].into_iter().min_by(|x, y| growth(*x).total_cmp(&growth(*y))).unwrap()
    };
    let lambda = (1.0 / growth(w)).min(1.0);
    let sep_m = sep_at(w);
    let p = *state.to_density_matrix().matrix();
    let rest = p - sep_m * Complex64::new(lambda, 0.0);
    let (_, vecs) = hermitian_eigen_desc(&rest);
    let pure = PureStateVector::new(vecs[0])?;
    let sep = TwoQubitState::from_density_matrix(&crate::state::DensityMatrix::new(sep_m)?);
    let valid = is_state(&sep, CERTIFICATE_TOL)?;
    let ppt = separable_unchecked(&sep, CERTIFICATE_TOL)?;
    if !(valid.decision && ppt.decision) {
        return Err(Error::inconsistency("separable segment point failed its certificate"));
    }
    let margins = SepMargins {
        min_eigenvalue: valid.margin("min_eigenvalue").unwrap_or(f64::NAN),
        ppt_min_eigenvalue: ppt.margin("min_eigenvalue").unwrap_or(f64::NAN),
    };
    Ok(LSDecomposition {
        lambda,
        sep,
        pure: Some(pure),
        margins,
        objective_history: vec![(0, lambda)],
        restarts_used: 1,
    })
}

fn separable_result(state: &TwoQubitState) -> Result<LSDecomposition> {
    let ppt = separable_unchecked(state, CERTIFICATE_TOL)?;
    let min_ev = state.to_density_matrix().min_eigenvalue();
    Ok(LSDecomposition {
        lambda: 1.0,
        sep: *state,
        pure: None,
        margins: SepMargins { min_eigenvalue: min_ev, ppt_min_eigenvalue: ppt.margin("min_eigenvalue").unwrap_or(f64::NAN) },
        objective_history: vec![(0, 1.0)],
        restarts_used: 0,
    })
}

/// Best LS decomposition found by a multistart search over the pure part.
/// The returned λ is a certified lower bound on the degree of separability.
///
/// Restarts begin at the eigenvectors of the state (largest eigenvalue
/// first) and continue from seeded random points of its range. The best
/// restart wins; ties go to the earlier restart.
pub fn ls_optimize(state: &TwoQubitState, opts: &LsOptions) -> Result<LSDecomposition> {
    if opts.restarts == 0 {
        return Err(Error::argument("at least one restart is required"));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::argument("tolerance must be positive"));
    }
    require_state(state)?;
    if separable_unchecked(state, CERTIFICATE_TOL)?.decision {
        return separable_result(state);
    }
    let prob = Problem::new(state);
    let r = prob.rank();
    if r == 1 {
        // a non-separable pure state: nothing separable can be split off
        let psi = PureStateVector::new(prob.basis[0].1)?;
        return Ok(LSDecomposition {
            lambda: 0.0,
            sep: TwoQubitState::chaotic(),
            pure: Some(psi),
            margins: SepMargins { min_eigenvalue: 0.25, ppt_min_eigenvalue: 0.25 },
            objective_history: vec![(0, 0.0)],
            restarts_used: 1,
        });
    }

    if r == 2 {
        return rank_two_search(state, &prob);
    }

    let mut rng = rng_from_seed(opts.seed);
    let simplex = SimplexOptions { initial_step: 0.3, max_iters: 1500, cost_spread: opts.tol * 1e-4 };
    let mut best: Option<(f64, PureStateVector, TwoQubitState, SepMargins)> = None;
    let mut history = Vec::with_capacity(opts.restarts);
    for restart in 0..opts.restarts {
        let start: Vec<Complex64> = if restart < r {
            (0..r).map(|k| Complex64::new(if k == restart { 1.0 } else { 0.0 }, 0.0)).collect()
        } else {
            (0..r).map(|_| complex_normal(&mut rng)).collect()
        };
        let theta0 = prob.params_of(&start);
        let m = minimize(|th| prob.objective(th), &theta0, &simplex);
        if m.value < 1.0 {
            let c = prob.coords(&m.x);
            let psi = prob.vector(&c);
            if let Some((lambda, sep, margins)) = prob.certify(state, &psi, m.value) {
                if best.as_ref().map_or(true, |b| lambda > b.0) {
                    best = Some((lambda, PureStateVector::new(psi)?, sep, margins));
                }
            }
        }
        history.push((restart, best.as_ref().map_or(0.0, |b| b.0)));
    }
    match best {
        Some((lambda, pure, sep, margins)) => Ok(LSDecomposition {
            lambda,
            sep,
            pure: Some(pure),
            margins,
            objective_history: history,
            restarts_used: opts.restarts,
        }),
        None => Err(Error::Convergence { best_residual: f64::INFINITY, restarts: opts.restarts }),
    }
}
