//! JSON sections of the command reports.

use qpair::canonical::{diagonalize_cross, pure_canonical, rank2_canonical, CanonicalForm};
use qpair::classify::{is_entangled, is_separable, is_state, purity_rank, Method, Verdict};
use qpair::degree::{degree, detect_family, DegreeResult, FamilyData, FamilyMatch, LSDecomposition, LsOptions};
use qpair::expectations::table_of_five;
use qpair::invariants::{det_entanglement, global_invariants, local_invariants, spectrum, trace_modulus, LocalInvariants};
use qpair::{Rank2Params, Result, Sign, TwoQubitState};
use serde_json::{Map, Value};

use crate::json::{array, cmat4, cvec4, mat3, num, object, opt, vec3};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn state(st: &TwoQubitState) -> Value {
    object([("s", vec3(st.s())), ("t", vec3(st.t())), ("C", mat3(st.c()))])
}

fn method(m: Method) -> &'static str {
    match m {
        Method::InvariantForm => "invariant-form",
        Method::MatrixForm => "matrix-form",
        Method::Both => "both",
    }
}

fn sign(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

pub fn verdict(v: &Verdict) -> Value {
    let margins: Map<String, Value> = v.margins.iter().map(|m| (m.name.to_string(), num(m.value))).collect();
    object([
        ("decision", Value::Bool(v.decision)),
        ("method", method(v.method).into()),
        ("margins", Value::Object(margins)),
    ])
}

pub fn validity(st: &TwoQubitState, tol: f64) -> Result<(bool, Value)> {
    let v = is_state(st, tol)?;
    Ok((v.decision, verdict(&v)))
}

pub fn invariants(st: &TwoQubitState) -> Result<Value> {
    let loc = local_invariants(st);
    let g = global_invariants(&loc);
    let local: Map<String, Value> =
        LocalInvariants::NAMES.iter().zip(loc.as_array()).map(|(n, v)| (n.to_string(), num(v))).collect();
    let sp = spectrum(st)?;
    Ok(object([
        ("local", Value::Object(local)),
        ("global", object([("A2", num(g.a2)), ("A1", num(g.a1)), ("A0", num(g.a0))])),
        ("det_E", num(det_entanglement(st))),
        ("trace_modulus", num(trace_modulus(st.c()))),
        (
            "spectrum",
            object([
                ("kappa", array(&sp.kappa)),
                ("eigenvalues", array(&sp.eigenvalues)),
                ("max_imag", num(sp.max_imag)),
                ("eigensolve", array(&st.to_density_matrix().eigenvalues())),
            ]),
        ),
    ]))
}

fn rank2_params(p: &Rank2Params) -> Value {
    object([("gamma1", num(p.gamma1)), ("gamma2", num(p.gamma2)), ("x", array(&p.x))])
}

fn family(m: &FamilyMatch) -> Value {
    let params = match m {
        FamilyMatch::Chaotic | FamilyMatch::Bell | FamilyMatch::General => Value::Null,
        FamilyMatch::Werner { x } => object([("x", num(*x))]),
        FamilyMatch::WernerFirst { sign: s, c } => object([("sign", sign(*s).into()), ("c", array(c))]),
        FamilyMatch::GenericPure { p } => object([("p", num(*p))]),
        FamilyMatch::WernerSecond { x, p } => object([("x", num(*x)), ("p", num(*p))]),
        FamilyMatch::RankTwo(p) => rank2_params(p),
    };
    object([("name", m.name().into()), ("params", params)])
}

pub fn classification(st: &TwoQubitState, tol: f64) -> Result<Value> {
    let pr = purity_rank(st, tol)?;
    Ok(object([
        ("entangled", Value::Bool(is_entangled(st, tol)?)),
        ("separability", verdict(&is_separable(st, tol)?)),
        ("rank", pr.rank.into()),
        ("pure", Value::Bool(pr.pure)),
        ("rank2_x_squared", opt(pr.rank2_x_squared)),
        ("family", family(&detect_family(st, tol)?)),
    ]))
}

fn cross_form(f: &CanonicalForm) -> Value {
    object([
        ("O_ee", mat3(&f.o_ee)),
        ("O_nn", mat3(&f.o_nn)),
        ("c", array(&f.c)),
        ("sign", sign(f.sign).into()),
    ])
}

/// Diagonal cross dyadic always; generic-form parameters for valid pure and
/// rank-2 states.
pub fn canonical(st: &TwoQubitState, tol: f64) -> Result<Value> {
    let f = diagonalize_cross(st);
    let rank = if is_state(st, tol)?.decision { Some(purity_rank(st, tol)?.rank) } else { None };
    let pure = match rank {
        Some(1) => {
            let p = pure_canonical(st)?;
            object([("p", num(p.p)), ("q", num(p.q))])
        }
        _ => Value::Null,
    };
    let rank2 = match rank {
        Some(2) => {
            let r = rank2_canonical(st)?;
            let mut v = rank2_params(&r.params);
            let m = v.as_object_mut().expect("object");
            m.insert("O_ee".into(), mat3(&r.o_ee));
            m.insert("O_nn".into(), mat3(&r.o_nn));
            m.insert("residual".into(), num(r.residual));
            v
        }
        _ => Value::Null,
    };
    Ok(object([("cross", cross_form(&f)), ("pure", pure), ("rank2", rank2)]))
}

pub fn expectations(st: &TwoQubitState) -> Value {
    let rows = table_of_five(st)
        .rows
        .iter()
        .map(|r| {
            let values: Map<String, Value> = r.values.iter().map(|e| (e.label.to_string(), num(e.value))).collect();
            object([("observable", r.observable.into()), ("values", Value::Object(values))])
        })
        .collect();
    Value::Array(rows)
}

pub fn decomposition(d: &LSDecomposition, input: &TwoQubitState) -> Value {
    object([
        ("lambda", num(d.lambda)),
        ("separable_part", state(&d.sep)),
        ("pure_part", d.pure.as_ref().map_or(Value::Null, |p| cvec4(p.amplitudes()))),
        (
            "margins",
            object([
                ("min_eigenvalue", num(d.margins.min_eigenvalue)),
                ("ppt_min_eigenvalue", num(d.margins.ppt_min_eigenvalue)),
            ]),
        ),
        (
            "objective_history",
            Value::Array(d.objective_history.iter().map(|(k, v)| Value::Array(vec![(*k).into(), num(*v)])).collect()),
        ),
        ("restarts_used", d.restarts_used.into()),
        ("reassembly_error", num(d.reassemble().max_abs_diff(input))),
    ])
}

fn family_data(f: &FamilyData) -> Value {
    object([
        ("q0", opt(f.q0)),
        ("p0", opt(f.p0)),
        ("pair_kind", f.pair_kind.map_or(Value::Null, |k| k.label().into())),
        ("theta", opt(f.theta)),
        ("branch_bc", f.branch_bc.map_or(Value::Null, Value::Bool)),
        ("rank2", f.rank2.as_ref().map_or(Value::Null, rank2_params)),
        ("second_kind", f.second_kind.map_or(Value::Null, |(x, p)| object([("x", num(x)), ("p", num(p))]))),
    ])
}

pub fn degree_result(r: &DegreeResult, input: &TwoQubitState) -> Value {
    object([
        ("S", num(r.s)),
        ("method", r.method.name().into()),
        ("lower_bound", Value::Bool(r.lower_bound)),
        ("family_data", r.family_data.as_ref().map_or(Value::Null, family_data)),
        ("decomposition", r.decomposition.as_ref().map_or(Value::Null, |d| decomposition(d, input))),
    ])
}

pub fn options(o: &LsOptions) -> Value {
    object([("restarts", o.restarts.into()), ("seed", o.seed.into()), ("tol", num(o.tol))])
}

pub fn density_matrix(st: &TwoQubitState) -> Value {
    cmat4(st.to_density_matrix().matrix())
}

/// Everything at once. Sections that presuppose a valid state are `null`
/// for invalid input.
pub fn full(st: &TwoQubitState, tol: f64, opts: &LsOptions) -> Result<(bool, Value)> {
    let (valid, validity) = validity(st, tol)?;
    let (classification, deg) = if valid {
        (classification(st, tol)?, degree_result(&degree(st, opts)?, st))
    } else {
        (Value::Null, Value::Null)
    };
    Ok((
        valid,
        object([
            ("validity", validity),
            ("invariants", invariants(st)?),
            ("canonical", canonical(st, tol)?),
            ("classification", classification),
            ("degree", deg),
            ("expectations", expectations(st)),
            ("density_matrix", density_matrix(st)),
            ("options", options(opts)),
        ]),
    ))
}
