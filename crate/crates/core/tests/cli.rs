mod common;

use std::process::Command;

use common::*;
use locusmith::cli::{run, EXIT_CHECK_FAILED, EXIT_IO, EXIT_PASS, EXIT_USAGE};
use locusmith::linalg::line_angle;
use locusmith::manifest::jet_from_str;
use locusmith::sections::{normal_section, project_along};
use locusmith::ProjectiveDirection;
use nalgebra::DVector;

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn call(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("locusmith").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{out}"))
}

fn parse_tuple(text: &str) -> DVector<f64> {
    let inner = text.trim_start_matches('(').trim_end_matches(')');
    DVector::from_vec(inner.split(',').map(|s| s.parse().unwrap()).collect())
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn classify_summaries() {
    let roman = call(&["classify", &path("roman_steiner")]);
    assert_eq!(roman.code, EXIT_PASS);
    assert!(value(&roman.out, "summary").starts_with("reg-3manifold; dim N1=3; H in Ep=true"));

    let square_mixed = call(&["classify", &path("orbit_square_mixed")]);
    assert_eq!(
        value(&square_mixed.out, "summary"),
        "sing-3manifold; orbit (x,y,z^2,xz,0); planar-region"
    );

    let zero = call(&["classify", &path("orbit_zero")]);
    assert!(value(&zero.out, "summary").ends_with("orbit (x,y,0,0,0); point"));
}

#[test]
fn verify_blowup_fixture() {
    let r = call(&["verify", &path("blowup")]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.out);
    let dev: f64 = value(&r.out, "diagram.max_deviation").parse().unwrap();
    assert!(dev < 1e-9);
    assert_eq!(value(&r.out, "status"), "pass");
}

#[test]
fn verify_fails_under_an_impossible_tolerance() {
    let out = Command::new(env!("CARGO_BIN_EXE_locusmith"))
        .args(["verify", &path("roman_steiner"), "--direction", "0.3,-0.5,0.8"])
        .env("LOCUSMITH_TOL", "1e-300")
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let dev: f64 = value(&text, "diagram.max_deviation").parse().unwrap();
    assert!(dev > 1e-300, "{text}");
    assert_eq!(out.status.code(), Some(EXIT_CHECK_FAILED), "{text}");
    assert_eq!(value(&text, "status"), "fail");
}

#[test]
fn bad_tolerance_variable_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_locusmith"))
        .args(["classify", &path("orbit_zero")])
        .env("LOCUSMITH_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn asymptotic_root_table_of_the_cyclic_jet() {
    let r = call(&["asymptotic", &path("sing_cyclic")]);
    assert_eq!(r.code, EXIT_PASS);
    let u = DVector::from_vec(vec![0.0, 1.0, -1.0]);
    let nu = DVector::from_vec(vec![-1.0, 1.0, 1.0]);
    let found = r
        .out
        .lines()
        .filter_map(|l| l.strip_prefix("root="))
        .filter_map(|l| l.split_once("->"))
        .any(|(d, b)| line_angle(&parse_tuple(d), &u) < 1e-9 && line_angle(&parse_tuple(b), &nu) < 1e-9);
    assert!(found);
}

#[test]
fn asymptotic_table_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("roots.csv");
    let r = call(&["asymptotic", &path("asymptotic_reg"), "--out", out.to_str().unwrap(), "--direction", "0,0,1"]);
    assert_eq!(r.code, EXIT_PASS);
    assert_eq!(value(&r.out, "direction_asymptotic"), "true");
    let table = std::fs::read_to_string(out).unwrap();
    assert!(table.starts_with("a,b,c,nu1,nu2,nu3,sigma_ratio\n"));
    assert_eq!(table.lines().count() - 1, value(&r.out, "roots").parse::<usize>().unwrap());
}

#[test]
fn locus_of_the_zero_jet_is_the_origin() {
    let r = call(&["locus", &path("orbit_zero"), "--grid", "1x1"]);
    assert_eq!(r.code, EXIT_PASS);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines, ["theta,phi_or_c,n1,n2,n3", "0.0,0.0,0.0,0.0,0.0"]);
}

#[test]
fn locus_obj_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("roman.obj");
    let r = call(&["locus", &path("roman_steiner"), "--grid", "8x5", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 40);
    assert!(text.lines().any(|l| l.starts_with("f ")));
}

#[test]
fn section_and_projection_manifests_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &str, &str); 4] = [
        ("section", "roman_steiner", "1,-1,0"),
        ("section", "sing_cyclic", "1,2,0"),
        ("project", "asymptotic_reg", "0,0,1"),
        ("project", "blowup", "0.3,-0.4,0.5"),
    ];
    for (k, (cmd, name, dir_arg)) in cases.iter().enumerate() {
        let out = dir.path().join(format!("out{k}.ron"));
        let r = call(&[cmd, &path(name), "--direction", dir_arg, "--out", out.to_str().unwrap()]);
        assert_eq!(r.code, EXIT_PASS, "{}", r.err);
        let again = jet_from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let parent = load(name);
        let u: Vec<f64> = dir_arg.split(',').map(|s| s.parse().unwrap()).collect();
        let expected = match *cmd {
            "section" => normal_section(&parent, &ProjectiveDirection::new(u).unwrap()).unwrap(),
            _ => project_along(&parent, &DVector::from_vec(u)).unwrap().jet,
        };
        assert!(again.max_abs_diff(&expected) <= 1e-15, "{cmd} {name}");
        assert_eq!(value(&r.out, "jet"), again.to_string());
    }
}

#[test]
fn section_family_report() {
    let r = call(&["section", &path("orbit_square_mixed"), "--family-steps", "41"]);
    assert_eq!(r.code, EXIT_PASS);
    assert_eq!(value(&r.out, "sections"), "43");
    assert_eq!(value(&r.out, "section[X=0]"), "half-line");
    assert_eq!(value(&r.out, "count[nondegenerate-parabola]"), "42");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["asymptotic", "sing_cyclic"],
        vec!["verify", "best_perturbed"],
        vec!["locus", "blowup"],
        vec!["classify", "crosscap_r4"],
    ] {
        let p = path(args[1]);
        let argv = [args[0], p.as_str()];
        let a = call(&argv);
        let b = call(&argv);
        assert_eq!(a.code, b.code);
        assert_eq!(a.out, b.out);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ron");
    std::fs::write(&bad, "(\n  source_dim: 3,\n  ambient_dim: 5,\n  corank: 1,\n  quadratic: [(3, \"w^2\", 1)],\n)").unwrap();
    let r = call(&["classify", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("line 5"), "{}", r.err);

    assert_eq!(call(&["classify", "/nonexistent/x.ron"]).code, EXIT_IO);
    let unwritable = dir.path().join("missing").join("x.csv");
    assert_eq!(
        call(&["locus", &path("blowup"), "--out", unwritable.to_str().unwrap()]).code,
        EXIT_IO
    );
    assert_eq!(call(&["verify", &path("crosscap_r4")]).code, EXIT_USAGE);
    assert_eq!(call(&["section", &path("sing_cyclic"), "--direction", "0,0,1"]).code, EXIT_USAGE);
    assert_eq!(call(&["locus", &path("blowup"), "--grid", "3"]).code, EXIT_USAGE);
    assert_eq!(call(&["project", &path("blowup")]).code, EXIT_USAGE);
}
