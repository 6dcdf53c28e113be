use std::io::Write;
use std::process::{Command, Output, Stdio};

use holonomy_core::pentagon::check_identifications;
use holonomy_core::{Isometry, Pentagon, PlanePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn run(args: &[&str], stdin: &[u8]) -> Output {
    run_env(args, stdin, &[])
}

fn run_env(args: &[&str], stdin: &[u8], env: &[(&str, &str)]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_holonomy"))
        .args(args)
        .envs(env.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // The process may exit before reading everything.
    let _ = child.stdin.take().unwrap().write_all(stdin);
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&o.stdout));
    })
}

const TRIPLE_333: &[u8] = br#"{"x": 3, "y": 3, "z": 3}"#;
const HALF_TURNS: &[u8] = br#"{"g": [[0, 1], [-1, 0]], "h": [[0, 2], [-0.5, 0]]}"#;

#[test]
fn classify_cusp_pair() {
    let o = run(&["classify", "--realize"], TRIPLE_333);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["case"], "AtMinus2");
    assert!((v["kappa"].as_f64().unwrap() + 2.0).abs() < 1e-9);
    assert_eq!(v["abelian"], false);
    assert_eq!(v["in_V"], false);
    assert!(v["commutator_region"].as_str().unwrap().starts_with("Par"));
}

#[test]
fn classify_commuting_pair() {
    let o = run(
        &["classify"],
        br#"{"g": [[2, 0], [0, 0.5]], "h": [[3, 0], [0, 0.3333333333333333]]}"#,
    );
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["abelian"], true);
}

#[test]
fn triples_need_realize_for_matrix_commands() {
    for cmd in ["classify", "construct", "render"] {
        assert_eq!(code(&run(&[cmd], TRIPLE_333)), 3, "{cmd}");
    }
}

#[test]
fn normalize_fixture_and_rejections() {
    let o = run(&["normalize"], br#"{"x": 0, "y": 1, "z": 3}"#);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let mut out: Vec<f64> = v["output_triple"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    out.sort_by(f64::total_cmp);
    assert_eq!(out, vec![3.0, 3.0, 8.0]);
    assert_eq!(v["kappa"], 8.0);
    assert!(!v["word"].as_array().unwrap().is_empty());

    let o = run(&["normalize"], br#"{"x": 0, "y": 0, "z": 3}"#);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["reason"], "in V");

    let o = run(&["normalize"], br#"{"x": 1, "y": 1, "z": 1}"#);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["reason"], "kappa ≤ 2");
}

#[test]
fn construct_cusp_pair() {
    let o = run(&["construct", "--realize"], TRIPLE_333);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["case"], "ParNeg");
    assert_eq!(v["verified"], true);
    let theta = v["theta"].as_f64().unwrap();
    assert!(theta > std::f64::consts::PI && theta < 3.0 * std::f64::consts::PI);
}

#[test]
fn construct_rejects_half_turns() {
    let o = run(&["construct"], HALF_TURNS);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["reason"], "VirtuallyAbelian");
}

#[test]
fn construct_needs_a_word_for_small_traces() {
    let o = run(&["construct", "--realize"], br#"{"x": 2, "y": 2, "z": 3}"#);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["case"].as_str().unwrap().starts_with("HypPos"));
    assert!(!v["word"].as_array().unwrap().is_empty());
}

fn matrix(v: &Value) -> Isometry {
    let e: [[f64; 2]; 2] = serde_json::from_value(v.clone()).unwrap();
    Isometry::from_entries(e).unwrap()
}

#[test]
fn construct_output_round_trips() {
    for doc in [
        &br#"{"x": 3, "y": 3, "z": 3}"#[..],
        br#"{"x": 2, "y": 2, "z": 3}"#,
        br#"{"x": 3, "y": 3, "z": 7}"#,
        br#"{"x": 0.5, "y": 3, "z": 2}"#,
    ] {
        let o = run(&["construct", "--realize"], doc);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        let verts: Vec<PlanePoint> = v["vertices"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| PlanePoint::new(p[0].as_f64().unwrap(), p[1].as_f64().unwrap()).unwrap())
            .collect();
        let pent = Pentagon::from_vertices(verts.try_into().unwrap());
        assert!(pent.is_simple());
        assert!(check_identifications(
            &matrix(&v["g_eff"]),
            &matrix(&v["h_eff"]),
            &pent
        ));
        let sum = pent.angle_sum().unwrap();
        assert!((sum - v["theta"].as_f64().unwrap()).abs() < 1e-6);
    }
}

#[test]
fn construct_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let out = dir.path().join("out.json");
    let svg = dir.path().join("p.svg");
    std::fs::write(&input, TRIPLE_333).unwrap();
    let args = [
        "construct",
        "--realize",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ];
    let o = run(&args, b"");
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["case"], "ParNeg");
    let picture = std::fs::read_to_string(&svg).unwrap();
    assert!(picture.contains("axis-g"));
}

#[test]
fn render_to_stdout_and_depth_cap() {
    let o = run(
        &["render", "--realize", "--depth", "2", "--model", "disc"],
        TRIPLE_333,
    );
    assert_eq!(code(&o), 0);
    let svg = String::from_utf8(o.stdout.clone()).unwrap();
    assert!(svg.starts_with("<?xml"));
    let err = String::from_utf8(o.stderr).unwrap();
    let tiles: usize = err.trim().strip_prefix("tiles: ").unwrap().parse().unwrap();
    assert!(tiles <= 17);
    assert_eq!(svg.matches("class=\"tile\"").count(), tiles);

    let again = run(
        &["render", "--realize", "--depth", "2", "--model", "disc"],
        TRIPLE_333,
    );
    assert_eq!(again.stdout, o.stdout);

    assert_eq!(
        code(&run(&["render", "--realize", "--depth", "9"], TRIPLE_333)),
        3
    );
}

#[test]
fn invalid_inputs_exit_3() {
    assert_eq!(code(&run(&["classify"], b"not json")), 3);
    assert_eq!(
        code(&run(
            &["classify"],
            br#"{"g": [[2, 0], [0, 1]], "h": [[1, 0], [0, 1]]}"#
        )),
        3
    );
    assert_eq!(code(&run(&["construct", "--bogus"], b"")), 3);
    assert_eq!(
        code(&run(&["classify", "--in", "/nonexistent/input.json"], b"")),
        3
    );
    assert_eq!(code(&run(&["render", "--model", "sphere"], TRIPLE_333)), 3);
}

#[test]
fn never_panics_on_arbitrary_bytes() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut inputs: Vec<Vec<u8>> = vec![
        br#"{"g": [[1e200, 0], [0, 1e-200]], "h": [[1, 1e300], [0, 1]]}"#.to_vec(),
        br#"{"g": [[1, 0], [0, 1]], "h": [[1, 0], [0, 1]]}"#.to_vec(),
        br#"{"x": 1e308, "y": 1e308, "z": 1e308}"#.to_vec(),
        br#"{"x": 2, "y": 2, "z": 2}"#.to_vec(),
        br#"{"x": -2, "y": 0, "z": 0}"#.to_vec(),
        br#"{"g": [[1, 0], [0, 1]], "h": [[1, 0], [0, 1]], "options": {"depth": 99}}"#.to_vec(),
        b"[]".to_vec(),
        b"".to_vec(),
    ];
    for _ in 0..20 {
        let n = rng.gen_range(0..64);
        inputs.push((0..n).map(|_| rng.gen()).collect());
    }
    for bytes in &inputs {
        for cmd in ["classify", "normalize", "construct", "render"] {
            let o = run(&[cmd, "--realize"], bytes);
            let c = code(&o);
            let err = String::from_utf8_lossy(&o.stderr);
            assert!(matches!(c, 0 | 2 | 3 | 4), "{cmd} exited {c}");
            assert!(!err.contains("internal error"), "{cmd} panicked: {err}");
        }
    }
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest", "--seed", "3", "--count", "200"], b"");
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["random"]["unverified"], 0);
}

#[test]
fn log_level_comes_from_the_environment() {
    let o = run_env(
        &["construct", "--realize"],
        TRIPLE_333,
        &[("HOLONOMY_LOG", "debug")],
    );
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("case ParNeg"));
    let quiet = run(&["construct", "--realize"], TRIPLE_333);
    assert!(quiet.stderr.is_empty());
}

#[test]
fn outputs_carry_the_schema_fields() {
    let schema: Value =
        serde_json::from_str(include_str!("../schema/holonomy.schema.json")).unwrap();
    let cases: [(&str, &[&str], &[u8]); 3] = [
        ("classify", &["classify", "--realize"], TRIPLE_333),
        ("normalize", &["normalize"], br#"{"x": 0, "y": 1, "z": 3}"#),
        ("construct", &["construct", "--realize"], TRIPLE_333),
    ];
    for (def, args, input) in cases {
        let v = json(&run(args, input));
        for key in schema["$defs"][def]["required"].as_array().unwrap() {
            assert!(v.get(key.as_str().unwrap()).is_some(), "{def} lacks {key}");
        }
    }
}
