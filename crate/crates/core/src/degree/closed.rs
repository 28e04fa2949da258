//! Closed-form degrees of separability for the special families.

use crate::classify::{separable_unchecked, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::family::{construct_family, FamilySpec, Rank2Params};
use crate::invariants::trace_modulus;
use crate::state::TwoQubitState;

/// Pauli vectors count as zero below this.
pub const ZERO_VECTOR_TOL: f64 = 1e-12;

const Q0_SCAN: usize = 1024;
const Q0_RESOLUTION: f64 = 1e-10;
/// Required agreement with q₀ = 1 inside the Bell window.
const Q0_WINDOW_TOL: f64 = 1e-8;

fn check_werner_range(x: f64) -> Result<()> {
    if (-1.0 / 3.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::argument(format!("mixing weight x = {x} outside [-1/3, 1]")))
    }
}

pub fn degree_werner(x: f64) -> Result<f64> {
    check_werner_range(x)?;
    Ok(if x <= 1.0 / 3.0 { 1.0 } else { 1.5 * (1.0 - x) })
}

/// States with vanishing Pauli vectors.
pub fn degree_werner_first(state: &TwoQubitState) -> Result<f64> {
    if state.s().amax() > ZERO_VECTOR_TOL || state.t().amax() > ZERO_VECTOR_TOL {
        return Err(Error::precondition("Pauli vectors must vanish"));
    }
    let v = crate::classify::is_state(state, DEFAULT_TOL)?;
    if !v.decision {
        return Err(Error::precondition("input is not a valid state"));
    }
    let det = state.c().determinant();
    let sp = trace_modulus(state.c());
    Ok(if det >= 0.0 || sp <= 1.0 { 1.0 } else { 1.5 - 0.5 * sp })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondKindDegree {
    pub s: f64,
    /// q and p of the optimal pure part; absent when the state is separable.
    pub q0: Option<f64>,
    pub p0: Option<f64>,
}

/// Slack RHS − LHS of the feasibility condition on q₀; q₀ is admissible
/// when it is nonnegative.
pub fn second_kind_slack(x: f64, p: f64, q0: f64) -> f64 {
    let q = (1.0 - p * p).sqrt();
    let a = q * x - (1.0 - x) / 2.0;
    let p0 = (1.0 - q0 * q0).max(0.0).sqrt();
    a + (x - x * x * p * p) / a - (1.0 + x - 2.0 * x * p * p0) / q0
}

/// Interval of x in which the optimal pure part is a Bell state (q₀ = 1).
pub fn second_kind_bell_window(p: f64) -> (f64, f64) {
    let q = (1.0 - p * p).sqrt();
    (1.0 / (1.0 + 2.0 * q), 0.75 / (q - 0.25 + ((1.0 - q) * (1.0 + q / 2.0)).sqrt()))
}

fn bisect_upper(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) ≥ 0 > f(hi)
    while hi - lo > Q0_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    (m, f(m))
}

pub fn degree_werner_second(x: f64, p: f64) -> Result<SecondKindDegree> {
    check_werner_range(x)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::argument(format!("p = {p} outside (0, 1)")));
    }
    let q = (1.0 - p * p).sqrt();
    if x <= 1.0 / (1.0 + 2.0 * q) {
        return Ok(SecondKindDegree { s: 1.0, q0: None, p0: None });
    }
    let slack = |q0: f64| second_kind_slack(x, p, q0);
    let step = 1.0 / Q0_SCAN as f64;
    let top = (1..=Q0_SCAN).rev().find(|&k| slack(k as f64 * step) >= 0.0);
    let q0 = match top {
        Some(k) if k == Q0_SCAN => 1.0,
        Some(k) => bisect_upper(slack, k as f64 * step, (k + 1) as f64 * step),
        None => {
            // feasible set narrower than the scan grid (x close to 1)
            let (arg, best) = golden_max(slack, step * 1e-3, 1.0);
            if best >= 0.0 {
                bisect_upper(slack, arg, 1.0)
            } else if best >= -1e-12 {
                arg
            } else {
                return Err(Error::inconsistency(format!(
                    "no admissible q0 for x = {x}, p = {p} (best slack {best:e})"
                )));
            }
        }
    };
    let (lo, hi) = second_kind_bell_window(p);
    if x > lo && x <= hi && (q0 - 1.0).abs() > Q0_WINDOW_TOL {
        return Err(Error::inconsistency(format!("q0 = {q0} inside the Bell window for x = {x}")));
    }
    let s = 1.0 - ((1.0 + 2.0 * q) * x - 1.0) / (2.0 * q0);
    Ok(SecondKindDegree { s, q0: Some(q0), p0: Some((1.0 - q0 * q0).max(0.0).sqrt()) })
}

/// Kinds of optimal pure/separable pairs for rank-2 states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// Pure part with x₁ = 0, separable part strictly inside.
    A,
    /// Separable part at x₁ = sin 2ϑ.
    B,
    /// Separable part at x₁ = −sin 2ϑ.
    C,
}

impl PairKind {
    pub fn label(self) -> &'static str {
        match self {
            PairKind::A => "a",
            PairKind::B => "b",
            PairKind::C => "c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank2Degree {
    pub s: f64,
    pub pair_kind: Option<PairKind>,
    /// ϑ with cos 2ϑ = tan γ₂ / tan γ₁; absent for the all-separable subspaces.
    pub theta: Option<f64>,
    /// Whether the branch inequality selecting pairs (b)/(c) holds.
    pub branch_bc: Option<bool>,
    pub separable: bool,
}

/// ϑ ∈ [0, π/4] of a subspace, or `None` when sin γ₁ cos γ₂ = 0.
pub fn rank2_theta(gamma1: f64, gamma2: f64) -> Option<f64> {
    let den = gamma1.sin() * gamma2.cos();
    if den <= 1e-15 {
        return None;
    }
    let cos2 = (gamma2.sin() * gamma1.cos() / den).clamp(-1.0, 1.0);
    Some(0.5 * cos2.acos())
}

/// Left and right sides of the branch inequality.
pub fn rank2_branch_sides(x: [f64; 3], theta: f64) -> (f64, f64) {
    let (st, ct) = theta.sin_cos();
    let ax1 = x[0].abs();
    let lhs = ((1.0 + x[2]) * st - ax1 * ct) * ((1.0 - x[2]) * ct - ax1 * st);
    (lhs, x[1] * x[1] * st * ct)
}

/// Degree of separability on the (b)/(c) branch.
pub fn rank2_formula_bc(x: [f64; 3], theta: f64) -> f64 {
    let x2 = x.iter().map(|v| v * v).sum::<f64>();
    let (s2, c2) = (2.0 * theta).sin_cos();
    0.5 * (1.0 - x2) / (1.0 - x[2] * c2 - x[0].abs() * s2)
}

/// Degree of separability on the (a) branch.
pub fn rank2_formula_a(x: [f64; 3], theta: f64) -> f64 {
    let (s2, c2) = (2.0 * theta).sin_cos();
    let root = ((x[2] - c2).powi(2) + (x[1] * s2).powi(2)).sqrt();
    (1.0 - x[2] * c2 - root) / (s2 * s2)
}

pub fn degree_rank2(params: &Rank2Params) -> Result<Rank2Degree> {
    params.validate()?;
    let Some(theta) = rank2_theta(params.gamma1, params.gamma2) else {
        return Ok(Rank2Degree { s: 1.0, pair_kind: None, theta: None, branch_bc: None, separable: true });
    };
    let state = construct_family(&FamilySpec::RankTwo(*params))?;
    if separable_unchecked(&state, DEFAULT_TOL)?.decision {
        return Ok(Rank2Degree { s: 1.0, pair_kind: None, theta: Some(theta), branch_bc: None, separable: true });
    }
    let x = params.x;
    let (lhs, rhs) = rank2_branch_sides(x, theta);
    let (s, kind, bc) = if lhs <= rhs {
        let kind = if x[0] < 0.0 { PairKind::C } else { PairKind::B };
        (rank2_formula_bc(x, theta), kind, true)
    } else {
        (rank2_formula_a(x, theta), PairKind::A, false)
    };
    Ok(Rank2Degree { s, pair_kind: Some(kind), theta: Some(theta), branch_bc: Some(bc), separable: false })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeparablePures {
    /// sin γ₁ cos γ₂ = 0: every state of the subspace is separable.
    Everything,
    Points(Vec<Rank2Params>),
}

pub fn rank2_separable_pures(gamma1: f64, gamma2: f64) -> Result<SeparablePures> {
    Rank2Params::new(gamma1, gamma2, [0.0; 3])?;
    let Some(theta) = rank2_theta(gamma1, gamma2) else {
        return Ok(SeparablePures::Everything);
    };
    let (s2, c2) = (2.0 * theta).sin_cos();
    let mut points = vec![Rank2Params::new(gamma1, gamma2, [s2, 0.0, c2])?];
    if s2 > 1e-12 {
        points.push(Rank2Params::new(gamma1, gamma2, [-s2, 0.0, c2])?);
    }
    Ok(points_normalized(points))
}

// keep x on the unit sphere exactly despite rounding of sin/cos
fn points_normalized(points: Vec<Rank2Params>) -> SeparablePures {
    SeparablePures::Points(
        points
            .into_iter()
            .map(|mut p| {
                let n = p.x_squared().sqrt();
                if n > 1.0 {
                    p.x = p.x.map(|v| v / n);
                }
                p
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_separable, purity_rank};
    use crate::linalg::{Mat3, Vec3};

    #[test]
    fn werner_values() {
        assert_eq!(degree_werner(1.0 / 3.0).unwrap(), 1.0);
        assert_eq!(degree_werner(1.0).unwrap(), 0.0);
        assert!((degree_werner(0.6).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(degree_werner(-1.0 / 3.0).unwrap(), 1.0);
        assert!(degree_werner(1.01).is_err());
    }

    fn first_kind(sign: f64, c: [f64; 3]) -> TwoQubitState {
        TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), Mat3::from_diagonal(&Vec3::from(c)) * sign).unwrap()
    }

    #[test]
    fn first_kind_values() {
        assert_eq!(degree_werner_first(&first_kind(1.0, [0.3, 0.3, 0.3])).unwrap(), 1.0);
        // with a plus sign positivity already forces Sp|C| ≤ 1
        assert!(matches!(degree_werner_first(&first_kind(1.0, [0.9, 0.9, 0.9])), Err(Error::Precondition(_))));
        assert!((degree_werner_first(&first_kind(-1.0, [0.7, 0.4, 0.2])).unwrap() - 0.85).abs() < 1e-12);
        assert!(degree_werner_first(&first_kind(-1.0, [1.0, 1.0, 1.0])).unwrap().abs() < 1e-12);
        let with_s = TwoQubitState::new(Vec3::new(0.1, 0.0, 0.0), Vec3::zeros(), Mat3::zeros()).unwrap();
        assert!(matches!(degree_werner_first(&with_s), Err(Error::Precondition(_))));
    }

    #[test]
    fn werner_is_first_kind_exactly() {
        for k in 0..=30 {
            let x = -1.0 / 3.0 + k as f64 * (4.0 / 3.0) / 30.0;
            let x = x.min(1.0);
            let st = first_kind(-x, [1.0, 1.0, 1.0]);
            let (a, b) = (degree_werner(x).unwrap(), degree_werner_first(&st).unwrap());
            assert!((a - b).abs() <= 4.0 * f64::EPSILON, "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn second_kind_boundaries() {
        let p = 0.6;
        let q = 0.8;
        assert_eq!(degree_werner_second(1.0 / (1.0 + 2.0 * q), p).unwrap().s, 1.0);
        let end = degree_werner_second(1.0, p).unwrap();
        assert!((end.q0.unwrap() - q).abs() < 1e-6, "{end:?}");
        assert!(end.s.abs() < 1e-6);
        let (lo, hi) = second_kind_bell_window(p);
        for k in 1..=10 {
            let x = lo + (hi - lo) * k as f64 / 10.0;
            let r = degree_werner_second(x, p).unwrap();
            assert!((r.q0.unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn second_kind_q0_exceeds_q_and_decreases() {
        let p = 0.6;
        let mut last = 1.0 + 1e-12;
        for x in [0.75, 0.8, 0.9, 0.95, 0.99, 0.999] {
            let q0 = degree_werner_second(x, p).unwrap().q0.unwrap();
            assert!(q0 > 0.8 && q0 <= last, "x = {x}: q0 = {q0}");
            last = q0;
        }
    }

    #[test]
    fn rank2_zero_x_branch_a() {
        // ϑ = π/6: cos 2ϑ = 1/2
        let g1: f64 = 1.1;
        let g2 = (0.5 * g1.tan()).atan();
        let p = Rank2Params::new(g1, g2, [0.0; 3]).unwrap();
        let d = degree_rank2(&p).unwrap();
        assert!((d.theta.unwrap() - std::f64::consts::PI / 6.0).abs() < 1e-12);
        assert_eq!(d.pair_kind, Some(PairKind::A));
        assert!((d.s - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank2_degenerate_subspaces_are_separable() {
        let half_pi = std::f64::consts::FRAC_PI_2;
        for (g1, g2) in [(half_pi, half_pi), (0.0, 0.0)] {
            let d = degree_rank2(&Rank2Params::new(g1, g2, [0.3, 0.4, -0.2]).unwrap()).unwrap();
            assert_eq!((d.s, d.separable, d.theta), (1.0, true, None));
        }
    }

    #[test]
    fn separable_pure_points() {
        match rank2_separable_pures(0.7, 0.7).unwrap() {
            SeparablePures::Points(v) => {
                assert_eq!(v.len(), 1);
                assert!((v[0].x[2] - 1.0).abs() < 1e-12 && v[0].x[0].abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let SeparablePures::Points(v) = rank2_separable_pures(1.2, 0.4).unwrap() else { panic!() };
        assert_eq!(v.len(), 2);
        for p in v {
            let st = construct_family(&FamilySpec::RankTwo(p)).unwrap();
            assert!(is_separable(&st, DEFAULT_TOL).unwrap().decision);
            assert!(purity_rank(&st, DEFAULT_TOL).unwrap().pure);
            assert!(degree_rank2(&p).unwrap().separable);
        }
        assert_eq!(rank2_separable_pures(0.0, 0.0).unwrap(), SeparablePures::Everything);
    }

    #[test]
    fn mixed_points_on_the_separable_segment() {
        let theta = rank2_theta(1.2, 0.4).unwrap();
        let (s2, c2) = (2.0 * theta).sin_cos();
        for f in [-0.9, -0.3, 0.0, 0.5, 0.99] {
            let p = Rank2Params::new(1.2, 0.4, [f * s2, 0.0, c2]).unwrap();
            let st = construct_family(&FamilySpec::RankTwo(p)).unwrap();
            assert!(is_separable(&st, DEFAULT_TOL).unwrap().decision, "f = {f}");
        }
    }

    #[test]
    fn branch_formulas_meet_on_the_boundary() {
        let theta = rank2_theta(1.2, 0.4).unwrap();
        // walk x₂ at fixed x₁, x₃ and locate the sign change of lhs − rhs
        let (x1, x3) = (0.3, 0.1);
        let g = |x2: f64| {
            let (l, r) = rank2_branch_sides([x1, x2, x3], theta);
            l - r
        };
        let (mut lo, mut hi) = (0.0, 0.9);
        assert!(g(lo) > 0.0 && g(hi) < 0.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = [x1, lo, x3];
        assert!((rank2_formula_a(x, theta) - rank2_formula_bc(x, theta)).abs() < 1e-9);
    }
}
