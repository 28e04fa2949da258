//! Degree of separability: closed forms for the special families, a
//! numerical LS optimiser for everything else, and a dispatcher.

mod closed;
mod ls;

pub use closed::{
    degree_rank2, degree_werner, degree_werner_first, degree_werner_second, rank2_branch_sides,
    rank2_formula_a, rank2_formula_bc, rank2_separable_pures, rank2_theta, second_kind_bell_window,
    second_kind_slack, PairKind, Rank2Degree, SecondKindDegree, SeparablePures, ZERO_VECTOR_TOL,
};
pub use ls::{ls_lambda_for_pure, ls_optimize, LSDecomposition, LsOptions, SepMargins, CERTIFICATE_TOL};

use crate::canonical::{diagonalize_cross, rank2_canonical};
use crate::classify::{is_state, purity_rank, separable_unchecked, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::family::{construct_family, FamilySpec, Rank2Params, Sign};
use crate::linalg::hermitian_eigen_desc;
use crate::state::{PureStateVector, TwoQubitState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMethod {
    ClosedFormWerner,
    ClosedFormWernerFirst,
    ClosedFormWernerSecond,
    ClosedFormRank2,
    SeparableShortcut,
    Optimizer,
}

impl DegreeMethod {
    pub fn name(self) -> &'static str {
        match self {
            DegreeMethod::ClosedFormWerner => "ClosedFormWerner",
            DegreeMethod::ClosedFormWernerFirst => "ClosedFormWernerFirst",
            DegreeMethod::ClosedFormWernerSecond => "ClosedFormWernerSecond",
            DegreeMethod::ClosedFormRank2 => "ClosedFormRank2",
            DegreeMethod::SeparableShortcut => "SeparableShortcut",
            DegreeMethod::Optimizer => "Optimizer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FamilyData {
    pub q0: Option<f64>,
    pub p0: Option<f64>,
    pub pair_kind: Option<PairKind>,
    pub theta: Option<f64>,
    /// Whether the (b)/(c) branch inequality holds.
    pub branch_bc: Option<bool>,
    pub rank2: Option<Rank2Params>,
    /// (x, p) of a second-kind state.
    pub second_kind: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeResult {
    pub s: f64,
    pub method: DegreeMethod,
    pub decomposition: Option<LSDecomposition>,
    pub family_data: Option<FamilyData>,
    /// Set when `s` is only a certified lower bound.
    pub lower_bound: bool,
}

impl DegreeResult {
    fn closed(s: f64, method: DegreeMethod, family_data: Option<FamilyData>) -> Self {
        DegreeResult { s, method, decomposition: None, family_data, lower_bound: false }
    }
}

/// Recognised special structure of a state, up to local rotations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyMatch {
    Chaotic,
    Bell,
    Werner { x: f64 },
    WernerFirst { sign: Sign, c: [f64; 3] },
    GenericPure { p: f64 },
    WernerSecond { x: f64, p: f64 },
    RankTwo(Rank2Params),
    General,
}

impl FamilyMatch {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyMatch::Chaotic => "chaotic",
            FamilyMatch::Bell => "bell",
            FamilyMatch::Werner { .. } => "werner",
            FamilyMatch::WernerFirst { .. } => "werner-first",
            FamilyMatch::GenericPure { .. } => "generic-pure",
            FamilyMatch::WernerSecond { .. } => "werner-second",
            FamilyMatch::RankTwo(_) => "rank-two",
            FamilyMatch::General => "general",
        }
    }
}

fn pauli_vectors_vanish(state: &TwoQubitState) -> bool {
    state.s().amax() <= ZERO_VECTOR_TOL && state.t().amax() <= ZERO_VECTOR_TOL
}

/// (x, p) when the spectrum is {(1+3x)/4, (1−x)/4 three-fold}, i.e. the
/// state is (1−x)/4 + x|ψ⟩⟨ψ| for some pure ψ with Pauli length p.
fn second_kind_structure(state: &TwoQubitState, tol: f64) -> Option<(f64, f64)> {
    let (vals, vecs) = hermitian_eigen_desc(state.to_density_matrix().matrix());
    let (single, x) = if (vals[1] - vals[3]).abs() <= tol && (vals[0] - vals[1]).abs() > tol {
        (0, vals[0] - vals[3])
    } else if (vals[0] - vals[2]).abs() <= tol && (vals[2] - vals[3]).abs() > tol {
        (3, vals[3] - vals[0])
    } else {
        return None;
    };
    let psi = PureStateVector::new(vecs[single]).ok()?;
    Some((x.min(1.0), psi.to_state().s().norm().min(1.0)))
}

/// Family recognition with spectral tolerance `tol`.
pub fn detect_family(state: &TwoQubitState, tol: f64) -> Result<FamilyMatch> {
    let pr = purity_rank(state, tol.max(DEFAULT_TOL))?;
    if state.parameters().iter().all(|v| v.abs() <= tol) {
        return Ok(FamilyMatch::Chaotic);
    }
    if pauli_vectors_vanish(state) {
        let f = diagonalize_cross(state);
        let equal = (f.c[0] - f.c[2]).abs() <= tol;
        return Ok(match (equal, f.sign) {
            (true, Sign::Minus) if (f.c[0] - 1.0).abs() <= tol => FamilyMatch::Bell,
            (true, _) => FamilyMatch::Werner { x: -f.sign.value() * f.c[0] },
            _ => FamilyMatch::WernerFirst { sign: f.sign, c: f.c },
        });
    }
    if let Some((x, p)) = second_kind_structure(state, tol) {
        return Ok(if pr.pure { FamilyMatch::GenericPure { p } } else { FamilyMatch::WernerSecond { x, p } });
    }
    if pr.rank == 2 {
        return Ok(FamilyMatch::RankTwo(rank2_canonical(state)?.params));
    }
    Ok(FamilyMatch::General)
}

/// Degree of separability, dispatched in order: separability shortcut,
/// vanishing Pauli vectors, mixture of a pure state with the chaotic state,
/// rank 2, and finally the optimiser (a lower bound).
pub fn degree(state: &TwoQubitState, opts: &LsOptions) -> Result<DegreeResult> {
    if !is_state(state, DEFAULT_TOL)?.decision {
        return Err(Error::precondition("input is not a valid state"));
    }
    if separable_unchecked(state, DEFAULT_TOL)?.decision {
        return Ok(DegreeResult::closed(1.0, DegreeMethod::SeparableShortcut, None));
    }
    if pauli_vectors_vanish(state) {
        return Ok(DegreeResult::closed(degree_werner_first(state)?, DegreeMethod::ClosedFormWernerFirst, None));
    }
    if let Some((x, p)) = second_kind_structure(state, 1e-10) {
        if p > 0.0 && p < 1.0 {
            let r = degree_werner_second(x.max(-1.0 / 3.0), p)?;
            let data = FamilyData { q0: r.q0, p0: r.p0, second_kind: Some((x, p)), ..Default::default() };
            return Ok(DegreeResult::closed(r.s, DegreeMethod::ClosedFormWernerSecond, Some(data)));
        }
    }
    if purity_rank(state, DEFAULT_TOL)?.rank == 2 {
        let params = rank2_canonical(state)?.params;
        let r = degree_rank2(&params)?;
        let data = FamilyData {
            pair_kind: r.pair_kind,
            theta: r.theta,
            branch_bc: r.branch_bc,
            rank2: Some(params),
            ..Default::default()
        };
        return Ok(DegreeResult::closed(r.s, DegreeMethod::ClosedFormRank2, Some(data)));
    }
    let dec = ls_optimize(state, opts)?;
    Ok(DegreeResult {
        s: dec.lambda,
        method: DegreeMethod::Optimizer,
        decomposition: Some(dec),
        family_data: None,
        lower_bound: true,
    })
}

/// Degree of separability straight from family parameters.
pub fn degree_of_family(spec: &FamilySpec) -> Result<DegreeResult> {
    let state = construct_family(spec)?;
    match spec {
        FamilySpec::Chaotic => Ok(DegreeResult::closed(1.0, DegreeMethod::SeparableShortcut, None)),
        FamilySpec::Bell { .. } => Ok(DegreeResult::closed(0.0, DegreeMethod::ClosedFormWerner, None)),
        FamilySpec::Werner { x, .. } => Ok(DegreeResult::closed(degree_werner(*x)?, DegreeMethod::ClosedFormWerner, None)),
        FamilySpec::WernerFirst { .. } => {
            Ok(DegreeResult::closed(degree_werner_first(&state)?, DegreeMethod::ClosedFormWernerFirst, None))
        }
        FamilySpec::WernerSecond { x, p } => {
            let r = degree_werner_second(*x, *p)?;
            let data = FamilyData { q0: r.q0, p0: r.p0, second_kind: Some((*x, *p)), ..Default::default() };
            Ok(DegreeResult::closed(r.s, DegreeMethod::ClosedFormWernerSecond, Some(data)))
        }
        FamilySpec::GenericPure { .. } | FamilySpec::RankTwo(_) => degree(&state, &LsOptions::default()),
    }
}
