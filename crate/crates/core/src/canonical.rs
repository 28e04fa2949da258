//! Local transformations and canonical forms.
//!
//! A pair of proper rotations acts as `(s, t, C) → (O_ee s, O_nnᵀ t, O_ee C O_nn)`.
//! The cross dyadic is brought to `±diag(c₁, c₂, c₃)`, pure states to the
//! one-parameter generic form and rank-2 states to the (γ₁, γ₂, x) form.

use nalgebra::SVD;
use num_complex::Complex64;

use crate::classify::{purity_rank, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::family::{rank_two_from_components, sigma_components, PauliComponents, Rank2Params, Sign};
use crate::linalg::{hermitian_eigen_desc, outer, rotation_from_vector, rotation_residual, Mat3, Vec3};
use crate::optimize::{minimize, SimplexOptions};
use crate::random::{random_rotation, rng_from_seed};
use crate::state::{DensityMatrix, TwoQubitState};

pub const ROTATION_TOL: f64 = 1e-10;

/// Target and failure thresholds on the max parameter mismatch of the
/// rank-2 reduction.
pub const RANK2_TARGET: f64 = 1e-7;
pub const RANK2_FAIL: f64 = 1e-6;
pub const RANK2_RESTARTS: usize = 32;

const PURE_TOL: f64 = 1e-9;

pub fn apply_local(state: &TwoQubitState, o_ee: &Mat3, o_nn: &Mat3) -> Result<TwoQubitState> {
    for (name, o) in [("O_ee", o_ee), ("O_nn", o_nn)] {
        let r = rotation_residual(o);
        if !(r <= ROTATION_TOL) {
            return Err(Error::argument(format!("{name} is not a proper rotation (residual {r:e})")));
        }
    }
    Ok(apply_unchecked(state, o_ee, o_nn))
}

fn apply_unchecked(state: &TwoQubitState, o_ee: &Mat3, o_nn: &Mat3) -> TwoQubitState {
    TwoQubitState::from_parts(o_ee * state.s(), o_nn.transpose() * state.t(), o_ee * state.c() * o_nn)
}

/// `C = sign · O_ee · diag(c) · O_nn` with proper rotations and
/// `c₁ ≥ c₂ ≥ c₃ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalForm {
    pub o_ee: Mat3,
    pub o_nn: Mat3,
    pub c: [f64; 3],
    pub sign: Sign,
}

impl CanonicalForm {
    pub fn reassemble(&self) -> Mat3 {
        self.o_ee * Mat3::from_diagonal(&Vec3::from(self.c)) * self.o_nn * self.sign.value()
    }

    /// The local transformation that takes the state to diagonal form.
    pub fn to_diagonal_frame(&self, state: &TwoQubitState) -> TwoQubitState {
        apply_unchecked(state, &self.o_ee.transpose(), &self.o_nn.transpose())
    }
}

/// SVD of `m` with singular values descending and both factors proper.
/// The third singular value carries the sign of det m.
fn proper_svd(m: &Mat3) -> (Mat3, [f64; 3], Mat3) {
    let svd = SVD::new(*m, true, true);
    let (u, v_t) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]).then(a.cmp(&b)));
    let mut u_s = Mat3::zeros();
    let mut v_s = Mat3::zeros();
    let mut sv = [0.0; 3];
    for (k, &i) in order.iter().enumerate() {
        u_s.set_column(k, &u.column(i));
        v_s.set_column(k, &v_t.row(i).transpose());
        sv[k] = svd.singular_values[i];
    }
    if u_s.determinant() < 0.0 {
        u_s.column_mut(2).neg_mut();
        sv[2] = -sv[2];
    }
    if v_s.determinant() < 0.0 {
        v_s.column_mut(2).neg_mut();
        sv[2] = -sv[2];
    }
    (u_s, sv, v_s.transpose())
}

pub fn diagonalize_cross(state: &TwoQubitState) -> CanonicalForm {
    let (u, sv, v_t) = proper_svd(state.c());
    if sv[2] < 0.0 {
        // C = −(U·diag(−1,−1,1))·diag(|c|)·Vᵀ
        let flip = Mat3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0));
        CanonicalForm { o_ee: u * flip, o_nn: v_t, c: [sv[0], sv[1], -sv[2]], sign: Sign::Minus }
    } else {
        CanonicalForm { o_ee: u, o_nn: v_t, c: [sv[0], sv[1], sv[2].abs()], sign: Sign::Plus }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureCanonical {
    pub p: f64,
    pub q: f64,
    pub form: CanonicalForm,
}

/// Parameter `p = |s|` of the generic pure form, with its consistency checks.
pub fn pure_canonical(state: &TwoQubitState) -> Result<PureCanonical> {
    let pr = purity_rank(state, DEFAULT_TOL)?;
    if !pr.pure {
        return Err(Error::precondition(format!("state has rank {}, not 1", pr.rank)));
    }
    let p = state.s().norm();
    let t_norm = state.t().norm();
    if (t_norm - p).abs() > PURE_TOL {
        return Err(Error::inconsistency(format!("|t| = {t_norm} differs from |s| = {p}")));
    }
    let form = diagonalize_cross(state);
    let q_sq = (1.0 - p * p).max(0.0);
    let q = q_sq.sqrt();
    // |c − q| evaluated as |c² − q²|/(c + q), which stays accurate for q → 0
    let gap = |c: f64| {
        let d = (c * c + p * p - 1.0).abs();
        if c + q > 0.0 {
            d / (c + q)
        } else {
            0.0
        }
    };
    let worst = (form.c[0] - 1.0).abs().max(gap(form.c[1])).max(gap(form.c[2]));
    if worst > PURE_TOL {
        return Err(Error::inconsistency(format!("characteristic values {:?} are not (1, q, q) with q = {q}", form.c)));
    }
    Ok(PureCanonical { p, q, form })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank2Canonical {
    pub params: Rank2Params,
    /// `apply_local(state, o_ee, o_nn)` matches the generic form.
    pub o_ee: Mat3,
    pub o_nn: Mat3,
    /// Max parameter mismatch after the reduction.
    pub residual: f64,
}

struct Rank2Fit {
    sig: [PauliComponents; 4],
}

impl Rank2Fit {
    fn project(&self, rotated: &TwoQubitState) -> (TwoQubitState, [f64; 3]) {
        let x = [1, 2, 3].map(|k| self.sig[k].expectation(rotated));
        (rank_two_from_components(&self.sig, x), x)
    }

    fn sq_mismatch(&self, state: &TwoQubitState, o_ee: &Mat3, o_nn: &Mat3) -> f64 {
        let rotated = apply_unchecked(state, o_ee, o_nn);
        let (fit, _) = self.project(&rotated);
        let (a, b) = (rotated.parameters(), fit.parameters());
        a.iter().zip(b.iter()).map(|(u, v)| (u - v).powi(2)).sum()
    }

    fn evaluate(&self, state: &TwoQubitState, o_ee: &Mat3, o_nn: &Mat3) -> (f64, [f64; 3]) {
        let rotated = apply_unchecked(state, o_ee, o_nn);
        let (fit, x) = self.project(&rotated);
        (rotated.max_abs_diff(&fit), x)
    }

    /// Polishes a rotation pair by a simplex search over two rotation vectors.
    fn polish(&self, state: &TwoQubitState, o_ee: &Mat3, o_nn: &Mat3) -> (Mat3, Mat3) {
        let build = |p: &[f64]| {
            let r1 = rotation_from_vector(&Vec3::new(p[0], p[1], p[2])) * o_ee;
            let r2 = o_nn * rotation_from_vector(&Vec3::new(p[3], p[4], p[5]));
            (r1, r2)
        };
        let opts = SimplexOptions { initial_step: 0.05, max_iters: 4000, cost_spread: 1e-30 };
        let m = minimize(
            |p| {
                let (r1, r2) = build(p);
                self.sq_mismatch(state, &r1, &r2)
            },
            &[0.0; 6],
            &opts,
        );
        build(&m.x)
    }
}

/// Range projector Π of a rank-2 state, returned as the state Π/2.
fn range_projector(state: &TwoQubitState) -> Result<TwoQubitState> {
    let (_, vecs) = hermitian_eigen_desc(state.to_density_matrix().matrix());
    let pi = outer(&vecs[0]) + outer(&vecs[1]);
    let half = DensityMatrix::new(pi * Complex64::new(0.5, 0.0))?;
    Ok(TwoQubitState::from_density_matrix(&half))
}

/// Angles (γ₁, γ₂) of the subspace spanned by Π, from the invariants of Π/2:
/// |s₀| = cos γ₁ cos γ₂, |t₀| = sin γ₁ sin γ₂, and the two nonzero
/// characteristic values sin γ₁ cos γ₂ ≥ cos γ₁ sin γ₂.
fn subspace_angles(half_pi: &TwoQubitState, sv: [f64; 3]) -> (f64, f64) {
    let (a, b) = (half_pi.s().norm(), half_pi.t().norm());
    let diff = (sv[0] - sv[1]).max(0.0).atan2(a + b);
    let sum = (sv[0] + sv[1]).max(0.0).atan2(a - b);
    let g1 = ((sum + diff) / 2.0).clamp(0.0, std::f64::consts::FRAC_PI_2);
    let g2 = ((sum - diff) / 2.0).clamp(0.0, g1);
    (g1, g2)
}

/// Rotation pairs taking Π/2 to Σ₀/2: s₀ and t₀ onto +z, C₀ onto
/// diag(σ₁, σ₂, 0). Several sign choices are returned where the SVD leaves
/// them free.
fn projector_alignments(half_pi: &TwoQubitState) -> Vec<(Mat3, Mat3)> {
    let (u, _, v_t) = proper_svd(half_pi.c());
    let v = v_t.transpose();
    let mut out = Vec::new();
    for flip_u3 in [false, true] {
        for flip_v3 in [false, true] {
            let mut uu = u;
            let mut vv = v;
            if flip_u3 {
                uu.column_mut(2).neg_mut();
            }
            if flip_v3 {
                vv.column_mut(2).neg_mut();
            }
            // restore properness through the second axis
            if uu.determinant() < 0.0 {
                uu.column_mut(1).neg_mut();
            }
            if vv.determinant() < 0.0 {
                vv.column_mut(1).neg_mut();
            }
            out.push((uu.transpose(), vv));
        }
    }
    out
}

/// Generic-form parameters of a rank-2 state.
///
/// The sign convention is x₁ ≥ 0, and x₂ ≥ 0 when x₁ = 0; a joint π rotation
/// about z flips (x₁, x₂) together.
pub fn rank2_canonical(state: &TwoQubitState) -> Result<Rank2Canonical> {
    let pr = purity_rank(state, DEFAULT_TOL)?;
    if pr.rank != 2 {
        return Err(Error::precondition(format!("state has rank {}, not 2", pr.rank)));
    }
    let half_pi = range_projector(state)?;
    let (_, sv, _) = proper_svd(half_pi.c());
    let (g1, g2) = subspace_angles(&half_pi, [sv[0], sv[1], sv[2].abs()]);
    let fit = Rank2Fit { sig: sigma_components(g1, g2)? };

    let mut best: Option<(f64, Mat3, Mat3)> = None;
    let consider = |o_ee: Mat3, o_nn: Mat3, best: &mut Option<(f64, Mat3, Mat3)>| {
        let (r, _) = fit.evaluate(state, &o_ee, &o_nn);
        if best.as_ref().map_or(true, |b| r < b.0) {
            *best = Some((r, o_ee, o_nn));
        }
    };
    for (o_ee, o_nn) in projector_alignments(&half_pi) {
        consider(o_ee, o_nn, &mut best);
    }
    let (r0, e0, n0) = best.expect("at least one alignment");
    if r0 > RANK2_TARGET {
        let (e, n) = fit.polish(state, &e0, &n0);
        consider(e, n, &mut best);
    }
    let mut rng = rng_from_seed(0x72616e6b32);
    let mut restarts = 0;
    while best.as_ref().unwrap().0 > RANK2_TARGET && restarts < RANK2_RESTARTS {
        let (e, n) = fit.polish(state, &random_rotation(&mut rng), &random_rotation(&mut rng));
        consider(e, n, &mut best);
        restarts += 1;
    }
    let (residual, mut o_ee, mut o_nn) = best.unwrap();
    if residual > RANK2_FAIL {
        return Err(Error::Convergence { best_residual: residual, restarts });
    }
    let (_, mut x) = fit.evaluate(state, &o_ee, &o_nn);
    if x[0] < 0.0 || (x[0] == 0.0 && x[1] < 0.0) {
        let rz = Mat3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0));
        o_ee = rz * o_ee;
        o_nn *= rz;
        x = fit.evaluate(state, &o_ee, &o_nn).1;
    }
    // the fitted x can exceed the unit ball by rounding
    let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if norm > 1.0 {
        x = x.map(|v| v / norm);
    }
    Ok(Rank2Canonical { params: Rank2Params::new(g1, g2, x)?, o_ee, o_nn, residual })
}
