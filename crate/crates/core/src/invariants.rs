//! Local invariants (unchanged by independent rotations of the two qubits'
//! frames), global invariants (unchanged by any unitary), and the spectrum
//! obtained from the global invariants.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::quartic::solve_monic_quartic;
use crate::state::TwoQubitState;

/// Imaginary parts up to this size are treated as rounding noise.
pub const IMAG_TRUNCATE: f64 = 1e-9;
/// Imaginary parts above this signal a non-Hermitian input.
pub const IMAG_FATAL: f64 = 1e-6;

/// The nine local invariants, grouped by their degree in (s, t, C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalInvariants {
    /// Sp(CᵀC)
    pub a2_1: f64,
    /// s·s
    pub a2_2: f64,
    /// t·t
    pub a2_3: f64,
    /// det C
    pub a3_1: f64,
    /// s·C·t
    pub a3_2: f64,
    /// Sp((CᵀC)²)
    pub a4_1: f64,
    /// s·sub(C)·t
    pub a4_2: f64,
    /// s·C·Cᵀ·s
    pub a4_3: f64,
    /// t·Cᵀ·C·t
    pub a4_4: f64,
}

impl LocalInvariants {
    pub fn as_array(&self) -> [f64; 9] {
        [
            self.a2_1, self.a2_2, self.a2_3, self.a3_1, self.a3_2, self.a4_1, self.a4_2, self.a4_3,
            self.a4_4,
        ]
    }

    pub const NAMES: [&'static str; 9] = [
        "a2_1", "a2_2", "a2_3", "a3_1", "a3_2", "a4_1", "a4_2", "a4_3", "a4_4",
    ];

    /// Degree n of each invariant: it scales as xⁿ under (s, t, C) → x(s, t, C).
    pub const DEGREES: [i32; 9] = [2, 2, 2, 3, 3, 4, 4, 4, 4];
}

/// Coefficients (A₂, A₁, A₀) of κ⁴ − A₂κ² + A₁κ − A₀ = 0, whose roots give
/// the eigenvalues (1 − κ)/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalInvariants {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl GlobalInvariants {
    /// A₂ − A₁ + A₀, bounded by 1 for states.
    pub fn first(&self) -> f64 {
        self.a2 - self.a1 + self.a0
    }

    /// 2A₂ − A₁, bounded by 4 for states.
    pub fn second(&self) -> f64 {
        2.0 * self.a2 - self.a1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumResult {
    /// Quartic roots, descending.
    pub kappa: [f64; 4],
    /// (1 − κ)/4, hence ascending.
    pub eigenvalues: [f64; 4],
    /// Largest imaginary part discarded from the roots.
    pub max_imag: f64,
}

/// Signed 2×2 cofactors: C·sub(C)ᵀ = det(C)·1.
pub fn subdeterminant(c: &Mat3) -> Mat3 {
    Mat3::from_fn(|i, j| {
        let (r0, r1) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c0, c1) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = c[(r0, c0)] * c[(r1, c1)] - c[(r0, c1)] * c[(r1, c0)];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    })
}

pub fn local_invariants(state: &TwoQubitState) -> LocalInvariants {
    let (s, t, c) = (state.s(), state.t(), state.c());
    let ctc = c.transpose() * c;
    LocalInvariants {
        a2_1: ctc.trace(),
        a2_2: s.dot(s),
        a2_3: t.dot(t),
        a3_1: c.determinant(),
        a3_2: s.dot(&(c * t)),
        a4_1: (ctc * ctc).trace(),
        a4_2: s.dot(&(subdeterminant(c) * t)),
        a4_3: (c.transpose() * s).norm_squared(),
        a4_4: (c * t).norm_squared(),
    }
}

/// det E = det C − s·sub(C)·t.
pub fn det_entanglement(state: &TwoQubitState) -> f64 {
    let inv = local_invariants(state);
    let via_invariants = inv.a3_1 - inv.a4_2;
    debug_assert!(
        (via_invariants - state.entanglement_dyadic().determinant()).abs() < 1e-12,
        "det E identity violated"
    );
    via_invariants
}

/// Eigenvalues ζ of CᵀC (ascending, clamped at 0).
pub fn cross_gram_eigenvalues(c: &Mat3) -> Vec3 {
    let ctc = c.transpose() * c;
    let mut z = SymmetricEigen::new(ctc).eigenvalues;
    z.as_mut_slice().sort_by(f64::total_cmp);
    z.map(|v| v.max(0.0))
}

/// Sp|C| = √ζ₁ + √ζ₂ + √ζ₃, the sum of singular values of C.
pub fn trace_modulus(c: &Mat3) -> f64 {
    let zeta = cross_gram_eigenvalues(c);
    #[cfg(debug_assertions)]
    {
        // each ζ solves ζ³ − a₁⁽²⁾ζ² + ½[(a₁⁽²⁾)² − a₁⁽⁴⁾]ζ − (a₁⁽³⁾)² = 0
        let ctc = c.transpose() * c;
        let (a21, a41, a31) = (ctc.trace(), (ctc * ctc).trace(), c.determinant());
        let scale = 1.0 + a21.powi(3);
        for z in zeta.iter() {
            let r = z.powi(3) - a21 * z * z + 0.5 * (a21 * a21 - a41) * z - a31 * a31;
            debug_assert!(r.abs() < 1e-10 * scale, "cubic residual {r}");
        }
    }
    zeta.iter().map(|z| z.sqrt()).sum()
}

pub fn global_invariants(loc: &LocalInvariants) -> GlobalInvariants {
    let LocalInvariants {
        a2_1,
        a2_2,
        a2_3,
        a3_1,
        a3_2,
        a4_1,
        a4_2,
        a4_3,
        a4_4,
    } = *loc;
    GlobalInvariants {
        a2: 2.0 * (a2_1 + a2_2 + a2_3),
        a1: 8.0 * (a3_2 - a3_1),
        a0: a2_1 * a2_1 - 2.0 * a2_1 * (a2_2 + a2_3) - (a2_2 - a2_3).powi(2) - 2.0 * a4_1
            - 8.0 * a4_2
            + 4.0 * a4_3
            + 4.0 * a4_4,
    }
}

/// Eigenvalues of the density matrix from the roots of the invariant quartic.
pub fn spectrum_from_invariants(g: &GlobalInvariants) -> Result<SpectrumResult> {
    let roots = solve_monic_quartic([0.0, -g.a2, g.a1, -g.a0]);
    let max_imag = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_imag > IMAG_FATAL {
        return Err(Error::inconsistency(format!(
            "quartic has a root with imaginary part {max_imag:e}; input is not Hermitian"
        )));
    }
    let kappa = roots.map(|z| z.re);
    Ok(SpectrumResult {
        kappa,
        eigenvalues: kappa.map(|k| (1.0 - k) / 4.0),
        max_imag,
    })
}

pub fn spectrum(state: &TwoQubitState) -> Result<SpectrumResult> {
    spectrum_from_invariants(&global_invariants(&local_invariants(state)))
}
