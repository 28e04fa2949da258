//! Two-qubit states as (s, t, C) and as 4×4 density matrices.

use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermiticity_residual, outer, sigma_first, sigma_tau, tau_second, trace_product_re, CMat2,
    CMat4, CVec4, Mat3, Vec3,
};

/// Tolerance on Hermiticity and trace accepted by [`DensityMatrix::new`].
pub const REPRESENTATION_TOL: f64 = 1e-9;

/// Pauli vectors `s = ⟨σ⟩`, `t = ⟨τ⟩` and cross dyadic `C_αβ = ⟨σ_α τ_β⟩`.
///
/// Being a valid quantum state is not an invariant of this type; see
/// [`crate::classify::is_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    s: Vec3,
    t: Vec3,
    c: Mat3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflection {
    /// (s, t, C) → (−s, −t, C)
    Global,
    /// (s, t, C) → (−s, t, −C)
    Partial,
}

impl TwoQubitState {
    pub fn new(s: Vec3, t: Vec3, c: Mat3) -> Result<Self> {
        if !(s.iter().chain(t.iter()).chain(c.iter()).all(|v| v.is_finite())) {
            return Err(Error::argument("state parameters must be finite"));
        }
        Ok(Self { s, t, c })
    }

    /// Construction for values already known to be finite.
    pub(crate) fn from_parts(s: Vec3, t: Vec3, c: Mat3) -> Self {
        debug_assert!(s.iter().chain(t.iter()).chain(c.iter()).all(|v| v.is_finite()));
        Self { s, t, c }
    }

    /// The maximally mixed state 1/4.
    pub fn chaotic() -> Self {
        Self::from_parts(Vec3::zeros(), Vec3::zeros(), Mat3::zeros())
    }

    /// ρ₁ρ₂ for single-qubit Pauli vectors `s`, `t`: cross dyadic `s tᵀ`.
    pub fn product(s: Vec3, t: Vec3) -> Result<Self> {
        Self::new(s, t, s * t.transpose())
    }

    pub fn s(&self) -> &Vec3 {
        &self.s
    }

    pub fn t(&self) -> &Vec3 {
        &self.t
    }

    pub fn c(&self) -> &Mat3 {
        &self.c
    }

    /// The 15 parameters in the order s, t, C (row-major).
    pub fn parameters(&self) -> [f64; 15] {
        let mut out = [0.0; 15];
        out[..3].copy_from_slice(self.s.as_slice());
        out[3..6].copy_from_slice(self.t.as_slice());
        for a in 0..3 {
            for b in 0..3 {
                out[6 + 3 * a + b] = self.c[(a, b)];
            }
        }
        out
    }

    pub fn from_parameters(p: &[f64; 15]) -> Result<Self> {
        let s = Vec3::new(p[0], p[1], p[2]);
        let t = Vec3::new(p[3], p[4], p[5]);
        let c = Mat3::from_row_slice(&p[6..15]);
        Self::new(s, t, c)
    }

    /// Largest componentwise difference over all 15 parameters.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.parameters()
            .iter()
            .zip(other.parameters().iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// (1/4)(1 + s·σ + t·τ + σ·C·τ) in the computational basis.
    pub fn to_density_matrix(&self) -> DensityMatrix {
        let mut m = CMat4::identity();
        for a in 0..3 {
            m += sigma_first(a) * Complex64::new(self.s[a], 0.0);
            m += tau_second(a) * Complex64::new(self.t[a], 0.0);
            for b in 0..3 {
                m += sigma_tau(a, b) * Complex64::new(self.c[(a, b)], 0.0);
            }
        }
        DensityMatrix(m * Complex64::new(0.25, 0.0))
    }

    pub fn from_density_matrix(rho: &DensityMatrix) -> Self {
        let m = &rho.0;
        let s = Vec3::from_fn(|a, _| trace_product_re(&sigma_first(a), m));
        let t = Vec3::from_fn(|b, _| trace_product_re(&tau_second(b), m));
        let c = Mat3::from_fn(|a, b| trace_product_re(&sigma_tau(a, b), m));
        Self::from_parts(s, t, c)
    }

    /// Pauli vectors of the two reduced single-qubit states.
    pub fn reduced_states(&self) -> (Vec3, Vec3) {
        #[cfg(debug_assertions)]
        {
            let rho = self.to_density_matrix();
            let (r1, r2) = (rho.partial_trace_second(), rho.partial_trace_first());
            let s = single_qubit_pauli_vector(&r1);
            let t = single_qubit_pauli_vector(&r2);
            debug_assert!((s - self.s).amax() < 1e-12 && (t - self.t).amax() < 1e-12);
        }
        (self.s, self.t)
    }

    /// E = C − s tᵀ; the state is entangled iff E ≠ 0.
    pub fn entanglement_dyadic(&self) -> Mat3 {
        self.c - self.s * self.t.transpose()
    }

    pub fn reflect(&self, kind: Reflection) -> Self {
        match kind {
            Reflection::Global => Self::from_parts(-self.s, -self.t, self.c),
            Reflection::Partial => Self::from_parts(-self.s, self.t, -self.c),
        }
    }

    /// (1 − x)·chaos + x·self, i.e. every parameter scaled by `x`.
    ///
    /// `x` may lie outside [0, 1]; the result is then not necessarily a state.
    pub fn scaled(&self, x: f64) -> Self {
        Self::from_parts(self.s * x, self.t * x, self.c * x)
    }
}

/// Convex combination of states, componentwise in (s, t, C).
pub fn mix(states: &[TwoQubitState], weights: &[f64]) -> Result<TwoQubitState> {
    if states.is_empty() || states.len() != weights.len() {
        return Err(Error::argument(format!(
            "mix needs one weight per state (got {} states, {} weights)",
            states.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(Error::argument(format!("mixing weight {w} is negative or not finite")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::argument(format!("mixing weights sum to {total}, not 1")));
    }
    let mut s = Vec3::zeros();
    let mut t = Vec3::zeros();
    let mut c = Mat3::zeros();
    for (st, &w) in states.iter().zip(weights) {
        s += st.s * w;
        t += st.t * w;
        c += st.c * w;
    }
    Ok(TwoQubitState::from_parts(s, t, c))
}

fn single_qubit_pauli_vector(rho: &CMat2) -> Vec3 {
    // ρ = (1 + r·σ)/2
    Vec3::new(
        2.0 * rho[(0, 1)].re,
        -2.0 * rho[(0, 1)].im,
        (rho[(0, 0)] - rho[(1, 1)]).re,
    )
}

/// A 4×4 Hermitian, unit-trace matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(CMat4);

impl DensityMatrix {
    pub fn new(m: CMat4) -> Result<Self> {
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Representation {
                property: "finite entries",
                magnitude: f64::INFINITY,
            });
        }
        let herm = hermiticity_residual(&m);
        if herm > REPRESENTATION_TOL {
            return Err(Error::Representation {
                property: "Hermiticity",
                magnitude: herm,
            });
        }
        let tr = m.trace();
        let dev = (tr - Complex64::new(1.0, 0.0)).norm();
        if dev > REPRESENTATION_TOL {
            return Err(Error::Representation {
                property: "unit trace",
                magnitude: dev,
            });
        }
        Ok(Self(m))
    }

    /// Projector |ψ⟩⟨ψ|.
    pub fn pure(psi: &PureStateVector) -> Self {
        Self(outer(&psi.0))
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.0
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        crate::linalg::hermitian_eigenvalues(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// tr(ρ²)
    pub fn purity(&self) -> f64 {
        trace_product_re(&self.0, &self.0)
    }

    /// Reduced state of qubit 1.
    pub fn partial_trace_second(&self) -> CMat2 {
        let m = &self.0;
        CMat2::from_fn(|i, j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)])
    }

    /// Reduced state of qubit 2.
    pub fn partial_trace_first(&self) -> CMat2 {
        let m = &self.0;
        CMat2::from_fn(|i, j| m[(i, j)] + m[(2 + i, 2 + j)])
    }
}

impl Index<(usize, usize)> for DensityMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

/// Normalised 4-amplitude vector with the first non-negligible amplitude
/// made real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureStateVector(CVec4);

impl PureStateVector {
    /// Amplitudes below this magnitude are skipped when fixing the phase.
    pub const PHASE_EPS: f64 = 1e-12;

    pub fn new(amplitudes: CVec4) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::argument("pure state amplitudes must be finite and nonzero"));
        }
        let mut v = amplitudes / Complex64::new(norm, 0.0);
        if let Some(lead) = v.iter().find(|z| z.norm() > Self::PHASE_EPS).copied() {
            let phase = lead / Complex64::new(lead.norm(), 0.0);
            v /= phase;
        }
        Ok(Self(v))
    }

    pub fn amplitudes(&self) -> &CVec4 {
        &self.0
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &PureStateVector) -> f64 {
        self.0.dotc(&other.0).norm_sqr()
    }

    pub fn to_state(&self) -> TwoQubitState {
        TwoQubitState::from_density_matrix(&DensityMatrix::pure(self))
    }

    /// The singlet (|01⟩ − |10⟩)/√2, whose cross dyadic is −1.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(CVec4::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
            Complex64::new(0.0, 0.0),
        ))
        .expect("singlet is normalised")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigen_desc;

    fn bell() -> TwoQubitState {
        TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), -Mat3::identity()).unwrap()
    }

    #[test]
    fn chaotic_density_matrix_is_quarter_identity() {
        let rho = TwoQubitState::chaotic().to_density_matrix();
        assert!((rho.matrix() - CMat4::identity() * Complex64::new(0.25, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn bell_has_singlet_as_only_eigenvector() {
        let rho = bell().to_density_matrix();
        let (vals, vecs) = hermitian_eigen_desc(rho.matrix());
        assert!((vals[0] - 1.0).abs() < 1e-14);
        for v in &vals[1..] {
            assert!(v.abs() < 1e-14);
        }
        let top = PureStateVector::new(vecs[0]).unwrap();
        assert!((top.fidelity(&PureStateVector::singlet()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn werner_eigenvalues() {
        for &x in &[-1.0 / 3.0, -0.1, 0.0, 0.2, 0.5, 0.9, 1.0] {
            let ev = bell().scaled(x).to_density_matrix().eigenvalues();
            let mut expected = [(1.0 + 3.0 * x) / 4.0, (1.0 - x) / 4.0, (1.0 - x) / 4.0, (1.0 - x) / 4.0];
            expected.sort_by(f64::total_cmp);
            for (a, b) in ev.iter().zip(expected.iter()) {
                assert!((a - b).abs() < 1e-12, "x={x}: {ev:?}");
            }
        }
    }

    #[test]
    fn singlet_projector_parameters() {
        let st = PureStateVector::singlet().to_state();
        assert!(st.s().amax() < 1e-15 && st.t().amax() < 1e-15);
        assert!((st.c() + Mat3::identity()).amax() < 1e-15);
    }

    #[test]
    fn computational_zero_zero_is_product() {
        let mut m = CMat4::zeros();
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        let st = TwoQubitState::from_density_matrix(&DensityMatrix::new(m).unwrap());
        assert_eq!(*st.s(), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(*st.t(), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(*st.c(), st.s() * st.t().transpose());
        assert!(st.entanglement_dyadic().amax() == 0.0);
    }

    #[test]
    fn entanglement_dyadic_examples() {
        let prod = TwoQubitState::product(Vec3::new(0.3, 0.1, -0.5), Vec3::new(0.0, 0.6, 0.2)).unwrap();
        assert!(prod.entanglement_dyadic().amax() < 1e-16);
        assert_eq!(bell().entanglement_dyadic(), -Mat3::identity());

        let mut c = Mat3::zeros();
        c[(0, 0)] = -1.0;
        let sep_pure = TwoQubitState::new(Vec3::x(), -Vec3::x(), c).unwrap();
        let e = sep_pure.entanglement_dyadic();
        assert_eq!(e[(0, 0)], 0.0);
        // Same thing through P − ρ₁ρ₂ = (1/4)σ·E·τ
        let diff = sep_pure.to_density_matrix().matrix()
            - TwoQubitState::product(Vec3::x(), -Vec3::x()).unwrap().to_density_matrix().matrix();
        assert!(diff.norm() < 1e-15);
    }

    #[test]
    fn partial_reflection_of_bell_is_not_positive() {
        let pr = bell().reflect(Reflection::Partial);
        assert_eq!(*pr.c(), Mat3::identity());
        assert!((pr.to_density_matrix().min_eigenvalue() + 0.5).abs() < 1e-14);
        assert_eq!(pr.reflect(Reflection::Partial), bell());
        assert_eq!(bell().scaled(0.4).reflect(Reflection::Global), bell().scaled(0.4));
    }

    #[test]
    fn mix_examples() {
        let p = TwoQubitState::new(
            Vec3::new(0.1, 0.2, 0.3),
            Vec3::new(-0.2, 0.0, 0.1),
            Mat3::from_row_slice(&[0.1, 0.0, 0.2, 0.0, -0.3, 0.0, 0.05, 0.0, 0.4]),
        )
        .unwrap();
        let y = 0.4;
        let py = mix(
            &[p, p.reflect(Reflection::Global)],
            &[(1.0 + y) / 2.0, (1.0 - y) / 2.0],
        )
        .unwrap();
        assert!((py.s() - p.s() * y).amax() < 1e-15);
        assert!((py.t() - p.t() * y).amax() < 1e-15);
        assert!((py.c() - p.c()).amax() < 1e-15);

        let x = 0.7;
        let px = mix(&[TwoQubitState::chaotic(), p], &[1.0 - x, x]).unwrap();
        assert!(px.max_abs_diff(&p.scaled(x)) < 1e-15);
        assert_eq!(mix(&[p], &[1.0]).unwrap(), p);
    }

    #[test]
    fn mix_rejects_bad_weights() {
        let p = TwoQubitState::chaotic();
        assert!(matches!(mix(&[p, p], &[1.2, -0.2]), Err(Error::Argument(_))));
        assert!(matches!(mix(&[p, p], &[0.5, 0.4]), Err(Error::Argument(_))));
        assert!(matches!(mix(&[p], &[0.5, 0.5]), Err(Error::Argument(_))));
    }

    #[test]
    fn density_matrix_rejects_non_hermitian_and_bad_trace() {
        let mut m = CMat4::identity() * Complex64::new(0.25, 0.0);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        match DensityMatrix::new(m) {
            Err(Error::Representation { property, magnitude }) => {
                assert_eq!(property, "Hermiticity");
                assert!((magnitude - 0.1).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        let m = CMat4::identity() * Complex64::new(0.3, 0.0);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::Representation { property: "unit trace", .. })
        ));
    }

    #[test]
    fn non_finite_parameters_rejected() {
        assert!(TwoQubitState::new(Vec3::new(f64::NAN, 0.0, 0.0), Vec3::zeros(), Mat3::zeros()).is_err());
    }

    #[test]
    fn pure_state_phase_is_fixed() {
        let v = CVec4::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 0.0),
        );
        let psi = PureStateVector::new(v).unwrap();
        let a = psi.amplitudes();
        assert!(a[1].im.abs() < 1e-16 && a[1].re > 0.0);
        assert!((a.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reduced_states_of_product() {
        let (s0, t0) = (Vec3::new(0.2, -0.4, 0.1), Vec3::new(0.5, 0.5, -0.5));
        let st = TwoQubitState::product(s0, t0).unwrap();
        assert_eq!(st.reduced_states(), (s0, t0));
    }
}
