use qpair::{construct_family, FamilySpec, Mat3, TwoQubitState, Vec3};
use qpair_cli::{parse_state, run, serialize_state, ParseError, Payload, StateFile};
use serde_json::Value;

fn temp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qpair-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn state_file(st: TwoQubitState) -> String {
    serialize_state(&StateFile::new(st), false)
}

fn exec(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("qpair").chain(args.iter().copied()));
    (out.code, serde_json::from_str(&out.stdout).unwrap_or(Value::Null))
}

const CHAOTIC: &str = r#"{"format":"qpair-state/1","s":[0,0,0],"t":[0,0,0],"C":[[0,0,0],[0,0,0],[0,0,0]]}"#;

#[test]
fn parses_both_payloads() {
    let a = parse_state(CHAOTIC.as_bytes()).unwrap();
    assert_eq!((a.state, a.payload), (TwoQubitState::chaotic(), Payload::Pauli));
    let rho = r#"{"format":"qpair-state/1","rho":{"re":[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],
                  "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]},"metadata":{"origin":"hand"}}"#;
    let b = parse_state(rho.as_bytes()).unwrap();
    assert_eq!((b.state, b.payload), (TwoQubitState::chaotic(), Payload::Rho));
    assert_eq!(b.metadata["origin"], "hand");
    // out-of-range entries are a validity matter, not a parse failure
    let big = CHAOTIC.replacen("[[0,0,0]", "[[2.0,0,0]", 1);
    assert_eq!(parse_state(big.as_bytes()).unwrap().state.c()[(0, 0)], 2.0);
}

#[test]
fn parse_errors_are_distinct() {
    let kind = |text: &str| parse_state(text.as_bytes()).unwrap_err();
    assert!(matches!(kind("{\"format\": "), ParseError::Syntax { line: 1, .. }));
    assert!(matches!(kind(&CHAOTIC.replace("qpair-state/1", "qpair-state/9")), ParseError::UnknownFormat { .. }));
    match kind(&CHAOTIC.replace("\"s\":[0,0,0]", "\"s\":[0,0]")) {
        ParseError::Shape { path, .. } => assert_eq!(path, "$.s"),
        e => panic!("{e:?}"),
    }
    match kind(&CHAOTIC.replace("\"t\":[0,0,0]", "\"t\":[0,1e999,0]")) {
        ParseError::NonFinite { location } => assert!(location.contains("column")),
        e => panic!("{e:?}"),
    }
    assert!(matches!(kind(&CHAOTIC.replace("\"t\":[0,0,0]", "\"t\":[0,NaN,0]")), ParseError::NonFinite { .. }));
    assert!(matches!(kind(r#"{"format":"qpair-state/1"}"#), ParseError::Payload { .. }));
    let both = CHAOTIC.replace("}", r#","rho":{"re":[],"im":[]}}"#);
    assert!(matches!(kind(&both), ParseError::Payload { .. }));
    let nonherm = r#"{"format":"qpair-state/1","rho":{"re":[[0.25,0.1,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],
                      "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}}"#;
    assert!(matches!(kind(nonherm), ParseError::Payload { .. }));
}

#[test]
fn check_exit_codes() {
    let bad = TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), -Mat3::from_diagonal(&Vec3::new(0.8, 0.5, 0.2))).unwrap();
    let path = temp("outside.json", &state_file(bad));
    let (code, v) = exec(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let m = v["result"]["margins"]["min_eigenvalue"].as_f64().unwrap();
    assert!((m + 0.025).abs() < 1e-12, "{m}");

    let path = temp("chaotic.json", CHAOTIC);
    assert_eq!(exec(&["check", "--input", path.to_str().unwrap()]).0, 0);
    let (code, v) = exec(&["check", "/nonexistent/state.json"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("io")));
    let (code, v) = exec(&["check", "--frobnicate"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("usage")));
}

#[test]
fn degree_of_werner_file() {
    let w = construct_family(&FamilySpec::Werner { x: 0.5, o_en: Mat3::identity() }).unwrap();
    let path = temp("werner.json", &state_file(w));
    let (code, v) = exec(&["degree", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!((v["result"]["degree"]["S"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(v["result"]["degree"]["method"], "ClosedFormWernerFirst");
}

#[test]
fn random_bell_then_classify() {
    let out = run(["qpair", "random", "--seed", "7", "--family", "bell"]);
    assert_eq!(out.code, 0);
    let path = temp("bell.json", &out.stdout);
    let (code, v) = exec(&["classify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["entangled"], true);
    assert_eq!(r["separability"]["decision"], false);
    assert_eq!(r["rank"], 1);
}

#[test]
fn payload_forms_give_the_same_report() {
    // binary fractions throughout, so both payloads describe the same floats
    let st = TwoQubitState::new(Vec3::new(0.125, 0.0, 0.0), Vec3::new(0.0, 0.0, 0.25), -Mat3::identity() * 0.5).unwrap();
    let m = st.to_density_matrix();
    let part = |f: fn(&qpair::linalg::Complex64) -> f64| {
        (0..4).map(|r| format!("[{}]", (0..4).map(|c| format!("{:?}", f(&m.matrix()[(r, c)]))).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(",")
    };
    let rho = format!(r#"{{"format":"qpair-state/1","rho":{{"re":[{}],"im":[{}]}}}}"#, part(|z| z.re), part(|z| z.im));
    let a = temp("pauli.json", &state_file(st));
    let b = temp("rho.json", &rho);
    assert_eq!(parse_state(rho.as_bytes()).unwrap().state, st);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("input");
        v
    };
    for cmd in ["invariants", "classify", "degree", "expectations", "report"] {
        let (ca, va) = exec(&[cmd, a.to_str().unwrap()]);
        let (cb, vb) = exec(&[cmd, b.to_str().unwrap()]);
        assert_eq!((ca, cb), (0, 0));
        assert_eq!(strip(va), strip(vb), "{cmd}");
    }
}

#[test]
fn output_flag_writes_the_report() {
    let path = temp("chaotic2.json", CHAOTIC);
    let target = path.with_file_name("report.json");
    let out = run(["qpair", "report", "--pretty", "--output", target.to_str().unwrap(), path.to_str().unwrap()]);
    assert_eq!((out.code, out.stdout.as_str()), (0, ""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["result"]["degree"]["S"].as_f64(), Some(1.0));
    assert_eq!(v["result"]["classification"]["family"]["name"], "chaotic");
}

#[test]
fn report_on_an_invalid_state() {
    let bad = TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), -Mat3::identity() * 1.2).unwrap();
    let path = temp("bad.json", &state_file(bad));
    let (code, v) = exec(&["report", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["validity"]["decision"], false);
    assert!(v["result"]["degree"].is_null());
    let (code, v) = exec(&["degree", path.to_str().unwrap()]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("compute")));
}

#[test]
fn canonical_and_decompose() {
    let out = run(["qpair", "random", "--family", "rank-two", "--params", "1.2", "0.4", "0.5", "0", "0.2"]);
    let path = temp("rank2.json", &out.stdout);
    let (_, v) = exec(&["canonical", path.to_str().unwrap()]);
    let r2 = &v["result"]["rank2"];
    assert!((r2["gamma1"].as_f64().unwrap() - 1.2).abs() < 1e-7);
    assert!((r2["x"][0].as_f64().unwrap() - 0.5).abs() < 1e-7);

    let (code, v) = exec(&["decompose", "--restarts", "8", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let d = &v["result"]["decomposition"];
    assert!(d["reassembly_error"].as_f64().unwrap() < 1e-9);
    let (_, deg) = exec(&["degree", path.to_str().unwrap()]);
    let s = deg["result"]["degree"]["S"].as_f64().unwrap();
    assert!((d["lambda"].as_f64().unwrap() - s).abs() < 5e-3);
}

#[test]
fn random_rank_and_metadata() {
    let out = run(["qpair", "random", "--seed", "3", "--rank", "2"]);
    let f = parse_state(out.stdout.as_bytes()).unwrap();
    assert_eq!(f.metadata["rank"], "2");
    assert_eq!(f.state, qpair::random::random_state(3, Some(2)).unwrap());
    let out = run(["qpair", "random", "--family", "werner", "--params", "0.2", "0.3"]);
    assert_eq!(out.code, 1);
}
