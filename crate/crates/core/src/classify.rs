//! Validity, entanglement, separability and rank decisions.
//!
//! Validity and separability are decided twice: once from the global
//! invariants and once from an explicit eigensolve. The two paths are
//! mathematically equivalent for Hermitian inputs; they can only disagree
//! within rounding distance of the boundary.

use crate::error::{Error, Result};
use crate::invariants::{det_entanglement, global_invariants, local_invariants, GlobalInvariants};
use crate::state::{Reflection, TwoQubitState};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Disagreements between the two paths are tolerated (and settled by the
/// eigensolve) when the smallest eigenvalue lies within this many `tol` of 0.
const BOUNDARY_BAND: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    InvariantForm,
    MatrixForm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub name: &'static str,
    /// Slack of the inequality; nonnegative when it holds.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub decision: bool,
    pub margins: Vec<Margin>,
    pub method: Method,
}

impl Verdict {
    pub fn margin(&self, name: &str) -> Option<f64> {
        self.margins.iter().find(|m| m.name == name).map(|m| m.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityRank {
    pub rank: usize,
    pub pure: bool,
    /// x² = (A₂ − 2)/4 when the invariant rank-2 equalities hold.
    pub rank2_x_squared: Option<f64>,
    /// Density-matrix eigenvalues, ascending.
    pub eigenvalues: [f64; 4],
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::argument(format!("tolerance must be positive (got {tol})")))
    }
}

fn combine(
    invariant_ok: bool,
    matrix_ok: bool,
    min_eigenvalue: f64,
    tol: f64,
    margins: Vec<Margin>,
    what: &str,
) -> Result<Verdict> {
    if invariant_ok == matrix_ok {
        return Ok(Verdict { decision: matrix_ok, margins, method: Method::Both });
    }
    if min_eigenvalue.abs() <= BOUNDARY_BAND * tol {
        return Ok(Verdict { decision: matrix_ok, margins, method: Method::MatrixForm });
    }
    let listed: Vec<String> = margins.iter().map(|m| format!("{}={:e}", m.name, m.value)).collect();
    Err(Error::inconsistency(format!(
        "{what}: invariant test says {invariant_ok}, eigensolve says {matrix_ok} ({})",
        listed.join(", ")
    )))
}

/// Whether (s, t, C) describes a positive operator.
///
/// Margins: `first` = 1 − (A₂ − A₁ + A₀), `second` = 4 − (2A₂ − A₁),
/// `third` = 6 − A₂, `min_eigenvalue`.
pub fn is_state(state: &TwoQubitState, tol: f64) -> Result<Verdict> {
    check_tol(tol)?;
    let g = global_invariants(&local_invariants(state));
    let (m1, m2, m3) = (1.0 - g.first(), 4.0 - g.second(), 6.0 - g.a2);
    let min_ev = state.to_density_matrix().min_eigenvalue();
    let margins = vec![
        Margin { name: "first", value: m1 },
        Margin { name: "second", value: m2 },
        Margin { name: "third", value: m3 },
        Margin { name: "min_eigenvalue", value: min_ev },
    ];
    let invariant_ok = m1 >= -tol && m2 >= -tol && m3 >= -tol;
    combine(invariant_ok, min_ev >= -tol, min_ev, tol, margins, "positivity")
}

fn require_state(state: &TwoQubitState, tol: f64) -> Result<()> {
    let v = is_state(state, tol)?;
    if v.decision {
        Ok(())
    } else {
        Err(Error::precondition(format!(
            "input is not a valid state (min eigenvalue {:e})",
            v.margin("min_eigenvalue").unwrap_or(f64::NAN)
        )))
    }
}

/// E = C − s tᵀ differs from zero by more than `tol` in some entry.
pub fn is_entangled(state: &TwoQubitState, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    require_state(state, tol)?;
    Ok(state.entanglement_dyadic().amax() > tol)
}

/// Separability through positivity of the partial reflection.
///
/// Margins: `first` = 1 + 16 det E − (A₂ − A₁ + A₀),
/// `second` = 4 + 16 det C − (2A₂ − A₁), `third` = 6 − A₂,
/// `min_eigenvalue` of the partially reflected matrix.
pub fn is_separable(state: &TwoQubitState, tol: f64) -> Result<Verdict> {
    check_tol(tol)?;
    require_state(state, tol)?;
    separable_unchecked(state, tol)
}

/// [`is_separable`] without the validity precondition.
pub(crate) fn separable_unchecked(state: &TwoQubitState, tol: f64) -> Result<Verdict> {
    let loc = local_invariants(state);
    let g: GlobalInvariants = global_invariants(&loc);
    let det_e = det_entanglement(state);
    let m1 = 1.0 + 16.0 * det_e - g.first();
    let m2 = 4.0 + 16.0 * loc.a3_1 - g.second();
    let m3 = 6.0 - g.a2;
    let min_ev = state.reflect(Reflection::Partial).to_density_matrix().min_eigenvalue();
    let margins = vec![
        Margin { name: "first", value: m1 },
        Margin { name: "second", value: m2 },
        Margin { name: "third", value: m3 },
        Margin { name: "min_eigenvalue", value: min_ev },
    ];
    let invariant_ok = m1 >= -tol && m2 >= -tol && m3 >= -tol;
    combine(invariant_ok, min_ev >= -tol, min_ev, tol, margins, "separability")
}

pub fn purity_rank(state: &TwoQubitState, tol: f64) -> Result<PurityRank> {
    check_tol(tol)?;
    require_state(state, tol)?;
    let eigenvalues = state.to_density_matrix().eigenvalues();
    let rank = eigenvalues.iter().filter(|v| **v > tol).count();
    let g = global_invariants(&local_invariants(state));
    let rank2_eqs = (g.first() - 1.0).abs() <= tol && (g.second() - 4.0).abs() <= tol;
    let rank2_x_squared = if rank == 2 && rank2_eqs {
        Some((g.a2 - 2.0) / 4.0)
    } else {
        None
    };
    Ok(PurityRank { rank, pure: rank == 1, rank2_x_squared, eigenvalues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{construct_family, FamilySpec, Rank2Params};
    use crate::linalg::{Mat3, Vec3};
    use crate::random::random_state;

    fn werner(x: f64) -> TwoQubitState {
        TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), -Mat3::identity() * x).unwrap()
    }

    #[test]
    fn chaotic_is_a_state_with_reported_margins() {
        let v = is_state(&TwoQubitState::chaotic(), DEFAULT_TOL).unwrap();
        assert!(v.decision);
        assert_eq!(v.method, Method::Both);
        let m: Vec<f64> = v.margins.iter().map(|m| m.value).collect();
        assert_eq!(m[..3], [1.0, 4.0, 6.0]);
        assert!((m[3] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn over_weighted_werner_is_not_a_state() {
        assert!(!is_state(&werner(1.2), DEFAULT_TOL).unwrap().decision);
        assert!(is_state(&werner(1.0), DEFAULT_TOL).unwrap().decision);
        assert!(!is_state(&werner(-0.34), DEFAULT_TOL).unwrap().decision);
    }

    #[test]
    fn outside_tetrahedron() {
        let st = TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), -Mat3::from_diagonal(&Vec3::new(0.8, 0.5, 0.2))).unwrap();
        let v = is_state(&st, DEFAULT_TOL).unwrap();
        assert!(!v.decision);
        assert!((v.margin("min_eigenvalue").unwrap() + 0.025).abs() < 1e-14);
    }

    #[test]
    fn entanglement_examples() {
        let prod = TwoQubitState::product(Vec3::new(0.1, 0.5, 0.2), Vec3::new(0.0, 0.0, -0.9)).unwrap();
        assert!(!is_entangled(&prod, DEFAULT_TOL).unwrap());
        assert!(is_entangled(&werner(0.1), DEFAULT_TOL).unwrap());
        let sep_pure = construct_family(&FamilySpec::GenericPure { p: 1.0 }).unwrap();
        assert!(!is_entangled(&sep_pure, DEFAULT_TOL).unwrap());
        assert!(matches!(is_entangled(&werner(1.5), DEFAULT_TOL), Err(Error::Precondition(_))));
    }

    #[test]
    fn separability_examples() {
        let bell = is_separable(&werner(1.0), DEFAULT_TOL).unwrap();
        assert!(!bell.decision);
        // 1 ≤ 1 + 16·(−1) fails by 16
        assert!((bell.margin("first").unwrap() + 16.0).abs() < 1e-12);
        assert!(is_separable(&werner(1.0 / 3.0), DEFAULT_TOL).unwrap().decision);
        assert!(!is_separable(&werner(1.0 / 3.0 + 1e-6), DEFAULT_TOL).unwrap().decision);
        assert!(!is_separable(&werner(0.5), DEFAULT_TOL).unwrap().decision);
        assert!(is_separable(&werner(-1.0 / 3.0), DEFAULT_TOL).unwrap().decision);
    }

    #[test]
    fn paths_agree_on_random_states() {
        for seed in 0..500 {
            let st = random_state(seed, None).unwrap();
            let v = is_separable(&st, DEFAULT_TOL).unwrap();
            assert_eq!(v.method, Method::Both, "seed {seed}");
        }
    }

    #[test]
    fn rank_examples() {
        let pure = construct_family(&FamilySpec::GenericPure { p: 0.5 }).unwrap();
        let r = purity_rank(&pure, DEFAULT_TOL).unwrap();
        assert_eq!((r.rank, r.pure), (1, true));

        let rk2 = construct_family(&FamilySpec::RankTwo(Rank2Params::new(1.0, 0.5, [0.2, 0.1, 0.3]).unwrap())).unwrap();
        let r = purity_rank(&rk2, DEFAULT_TOL).unwrap();
        assert_eq!((r.rank, r.pure), (2, false));
        assert!((r.rank2_x_squared.unwrap() - 0.14).abs() < 1e-12);

        let r = purity_rank(&werner(0.5), DEFAULT_TOL).unwrap();
        assert_eq!((r.rank, r.pure, r.rank2_x_squared), (4, false, None));
    }

    #[test]
    fn bad_tolerance_rejected() {
        assert!(is_state(&werner(0.2), 0.0).is_err());
        assert!(is_state(&werner(0.2), f64::NAN).is_err());
    }
}
