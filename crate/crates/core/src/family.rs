//! Named state families and the Σ operators of a rank-2 subspace.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    rotation_residual, sigma_first, sigma_tau, tau_second, CMat4, Mat3, Vec3,
};
use crate::state::{DensityMatrix, TwoQubitState};

const ANGLE_SLACK: f64 = 1e-12;
const ROTATION_TOL: f64 = 1e-10;

/// Overall sign in front of the diagonalised cross dyadic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn of(x: f64) -> Self {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Generic-form parameters of a rank-2 state: the angles fixing the
/// two-dimensional support and the coordinates `x` within it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank2Params {
    pub gamma1: f64,
    pub gamma2: f64,
    pub x: [f64; 3],
}

impl Rank2Params {
    pub fn new(gamma1: f64, gamma2: f64, x: [f64; 3]) -> Result<Self> {
        let p = Self { gamma1, gamma2, x };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_angles(self.gamma1, self.gamma2)?;
        if !self.x.iter().all(|v| v.is_finite()) {
            return Err(Error::argument("rank-2 coordinates must be finite"));
        }
        if self.x_squared() > 1.0 + ANGLE_SLACK {
            return Err(Error::argument(format!(
                "rank-2 coordinates have x² = {} > 1",
                self.x_squared()
            )));
        }
        Ok(())
    }

    pub fn x_squared(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum()
    }
}

fn check_angles(gamma1: f64, gamma2: f64) -> Result<()> {
    let ok = gamma1.is_finite()
        && gamma2.is_finite()
        && gamma1 <= FRAC_PI_2 + ANGLE_SLACK
        && gamma1 >= gamma2 - ANGLE_SLACK
        && gamma2 >= -ANGLE_SLACK;
    if ok {
        Ok(())
    } else {
        Err(Error::argument(format!(
            "angles must satisfy π/2 ≥ γ₁ ≥ γ₂ ≥ 0 (got γ₁={gamma1}, γ₂={gamma2})"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    Chaotic,
    /// s = t = 0, C = −O_en.
    Bell { o_en: Mat3 },
    /// s = (p,0,0), t = (−p,0,0), C = diag(−1, −q, −q), q = √(1−p²).
    GenericPure { p: f64 },
    /// (1 − x)·chaos + x·Bell(O_en), −1/3 ≤ x ≤ 1.
    Werner { x: f64, o_en: Mat3 },
    /// s = t = 0, C = ±O_en·diag(c).
    WernerFirst { sign: Sign, c: [f64; 3], o_en: Mat3 },
    /// (1 − x)·chaos + x·GenericPure(p), 0 < p < 1.
    WernerSecond { x: f64, p: f64 },
    RankTwo(Rank2Params),
}

fn check_rotation(o: &Mat3) -> Result<()> {
    let r = rotation_residual(o);
    if r > ROTATION_TOL {
        return Err(Error::argument(format!(
            "O_en is not a proper rotation (residual {r:e})"
        )));
    }
    Ok(())
}

fn check_werner_x(x: f64) -> Result<()> {
    if !(-1.0 / 3.0 - ANGLE_SLACK..=1.0 + ANGLE_SLACK).contains(&x) {
        return Err(Error::argument(format!("Werner weight x={x} outside [−1/3, 1]")));
    }
    Ok(())
}

pub fn generic_pure(p: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::argument(format!("pure-state parameter p={p} outside [0, 1]")));
    }
    let q = (1.0 - p * p).sqrt();
    TwoQubitState::new(
        Vec3::new(p, 0.0, 0.0),
        Vec3::new(-p, 0.0, 0.0),
        Mat3::from_diagonal(&Vec3::new(-1.0, -q, -q)),
    )
}

pub fn construct_family(spec: &FamilySpec) -> Result<TwoQubitState> {
    match *spec {
        FamilySpec::Chaotic => Ok(TwoQubitState::chaotic()),
        FamilySpec::Bell { o_en } => {
            check_rotation(&o_en)?;
            TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), -o_en)
        }
        FamilySpec::GenericPure { p } => generic_pure(p),
        FamilySpec::Werner { x, o_en } => {
            check_werner_x(x)?;
            check_rotation(&o_en)?;
            TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), -o_en * x)
        }
        FamilySpec::WernerFirst { sign, c, o_en } => {
            check_rotation(&o_en)?;
            if !c.iter().all(|v| v.is_finite() && *v >= 0.0) {
                return Err(Error::argument("characteristic values must be finite and ≥ 0"));
            }
            let cross = o_en * Mat3::from_diagonal(&Vec3::from(c)) * sign.value();
            let st = TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), cross)?;
            let min_eigenvalue = st.to_density_matrix().min_eigenvalue();
            if min_eigenvalue < -ANGLE_SLACK {
                return Err(Error::Validity { min_eigenvalue });
            }
            Ok(st)
        }
        FamilySpec::WernerSecond { x, p } => {
            check_werner_x(x)?;
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::argument(format!("second-kind Werner needs 0 < p < 1 (got {p})")));
            }
            Ok(generic_pure(p)?.scaled(x))
        }
        FamilySpec::RankTwo(params) => {
            params.validate()?;
            let [s0, s1, s2, s3] = sigma_basis(params.gamma1, params.gamma2)?;
            let [x1, x2, x3] = params.x;
            let m = (s0 + s1 * c(x1) + s2 * c(x2) + s3 * c(x3)) * c(0.5);
            Ok(TwoQubitState::from_density_matrix(&DensityMatrix::new(m)?))
        }
    }
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Operator `a·1 + s·σ + t·τ + σ·C·τ`.
pub(crate) fn pauli_expansion(a: f64, s: &Vec3, t: &Vec3, cross: &Mat3) -> CMat4 {
    let mut m = CMat4::identity() * c(a);
    for i in 0..3 {
        if s[i] != 0.0 {
            m += sigma_first(i) * c(s[i]);
        }
        if t[i] != 0.0 {
            m += tau_second(i) * c(t[i]);
        }
        for j in 0..3 {
            if cross[(i, j)] != 0.0 {
                m += sigma_tau(i, j) * c(cross[(i, j)]);
            }
        }
    }
    m
}

/// Expansion ½(a·1 + s·σ + t·τ + σ·C·τ) of an operator in Pauli products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliComponents {
    pub identity: f64,
    pub s: Vec3,
    pub t: Vec3,
    pub c: Mat3,
}

impl PauliComponents {
    pub fn to_matrix(&self) -> CMat4 {
        pauli_expansion(self.identity, &self.s, &self.t, &self.c) * c(0.5)
    }

    /// tr(ρ·Σ) for the state ρ = ¼(1 + s·σ + t·τ + σ·C·τ).
    pub fn expectation(&self, state: &TwoQubitState) -> f64 {
        let cross: f64 = self.c.component_mul(state.c()).sum();
        0.5 * (self.identity + self.s.dot(state.s()) + self.t.dot(state.t()) + cross)
    }
}

/// Σ₀…Σ₃ in Pauli-component form.
pub fn sigma_components(gamma1: f64, gamma2: f64) -> Result<[PauliComponents; 4]> {
    check_angles(gamma1, gamma2)?;
    let (s1, c1) = gamma1.sin_cos();
    let (s2, c2) = gamma2.sin_cos();

    let mut m0 = Mat3::zeros();
    m0[(0, 0)] = s1 * c2;
    m0[(1, 1)] = c1 * s2;
    let mut m1 = Mat3::zeros();
    m1[(0, 2)] = s2;
    m1[(2, 0)] = c1;
    let mut m2 = Mat3::zeros();
    m2[(1, 2)] = s1;
    m2[(2, 1)] = c2;
    let mut m3 = Mat3::zeros();
    m3[(0, 0)] = -c1 * s2;
    m3[(1, 1)] = -s1 * c2;
    m3[(2, 2)] = 1.0;

    Ok([
        PauliComponents {
            identity: 1.0,
            s: Vec3::new(0.0, 0.0, c1 * c2),
            t: Vec3::new(0.0, 0.0, s1 * s2),
            c: m0,
        },
        PauliComponents {
            identity: 0.0,
            s: Vec3::new(s1, 0.0, 0.0),
            t: Vec3::new(c2, 0.0, 0.0),
            c: m1,
        },
        PauliComponents {
            identity: 0.0,
            s: Vec3::new(0.0, s2, 0.0),
            t: Vec3::new(0.0, c1, 0.0),
            c: m2,
        },
        PauliComponents {
            identity: 0.0,
            s: Vec3::new(0.0, 0.0, s1 * s2),
            t: Vec3::new(0.0, 0.0, c1 * c2),
            c: m3,
        },
    ])
}

/// Σ₀ (projector onto the support) and the Pauli-like Σ₁, Σ₂, Σ₃ of the
/// rank-2 subspace labelled by (γ₁, γ₂).
pub fn sigma_basis(gamma1: f64, gamma2: f64) -> Result<[CMat4; 4]> {
    Ok(sigma_components(gamma1, gamma2)?.map(|op| op.to_matrix()))
}

/// (s, t, C) of ½(Σ₀ + x₁Σ₁ + x₂Σ₂ + x₃Σ₃) without forming matrices.
pub(crate) fn rank_two_from_components(sig: &[PauliComponents; 4], x: [f64; 3]) -> TwoQubitState {
    let mut s = sig[0].s;
    let mut t = sig[0].t;
    let mut cross = sig[0].c;
    for k in 0..3 {
        s += sig[k + 1].s * x[k];
        t += sig[k + 1].t * x[k];
        cross += sig[k + 1].c * x[k];
    }
    TwoQubitState::from_parts(s, t, cross)
}
