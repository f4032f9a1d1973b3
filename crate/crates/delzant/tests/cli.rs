//! End-to-end tests of the command-line interface, mostly in-process against
//! explicit streams, plus one real pipeline through the compiled binary.

use std::io::Write as _;
use std::process::{Command, Stdio};

fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("delzant")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = delzant::cli::run(&argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn gen_writes_polygon_text() {
    let (code, out, err) = run(&["gen", "hirzebruch", "1", "1"], "");
    assert_eq!((code, err.as_str()), (0, ""));
    assert_eq!(out, "0 0\n2 0\n1 1\n0 1\n");

    let (code, out, _) = run(&["gen", "hirzebruch", "1", "3/2"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "0 0\n5/2 0\n3/2 1\n0 1\n");
}

#[test]
fn gen_action_pipeline_reports_exact_action() {
    let (_, polygon, _) = run(&["gen", "hirzebruch", "1", "1"], "");
    let (code, out, err) = run(&["action"], &polygon);
    assert_eq!((code, err.as_str()), (0, ""));
    assert!(out.contains("action = 111/13"), "{out}");
    assert!(out.contains("futaki = (-4/9 pi, 8/9 pi)"), "{out}");
    assert!(out.contains("calabi_bound = 3552/13 pi^2"), "{out}");
    assert!(out.contains("weyl_bound = 296/13 pi^2"), "{out}");
    assert!(out.contains("euler = 4"), "{out}");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let (_, polygon, _) = run(&["gen", "twopoint", "1", "1"], "");
    let first = run(&["action", "--csv"], &polygon);
    let second = run(&["action", "--csv"], &polygon);
    assert_eq!(first, second);
    assert_eq!(first.0, 0);
}

#[test]
fn write_read_write_round_trip() {
    let (_, once, _) = run(&["gen", "twopoint", "3/2", "2/7"], "");
    let (code, twice, _) = run(&["gen"], &once);
    assert_eq!(code, 0);
    assert_eq!(once, twice);
}

#[test]
fn validate_names_the_offending_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.poly");
    std::fs::write(&path, "0 0\n1 0\n0 2\n").unwrap();
    let (code, out, err) =
        run(&["validate", "file", path.to_str().unwrap()], "");
    assert_eq!(code, 1);
    assert!(out.contains("delzant = no"), "{out}");
    assert!(out.contains("(1, 0)"), "{out}");
    assert!(out.contains("= 2"), "{out}");
    assert!(err.contains("not Delzant"), "{err}");

    let good = dir.path().join("good.poly");
    std::fs::write(&good, "# unit square\n0 0\n1 0\n1 1\n0 1\n").unwrap();
    let (code, out, _) = run(&["validate", "file", good.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert!(out.contains("delzant = yes"));
}

#[test]
fn measure_reports_unit_triangle() {
    let (code, out, _) = run(&["measure"], "0 0\n1 0\n0 1\n");
    assert_eq!(code, 0);
    assert!(out.contains("area = 1/2"), "{out}");
    assert!(out.contains("perimeter = 3"), "{out}");
    assert!(out.contains("displacement = (0, 0)"), "{out}");

    let (code, out, _) = run(&["measure", "--csv", "cp2", "1"], "");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "area,perimeter,xbar1,xbar2,bx1,bx2,d1,d2,pi11,pi12,pi22\n\
         1/2,3,1/3,1/3,1/3,1/3,0,0,1/36,-1/72,1/36\n"
    );
}

#[test]
fn exit_codes_distinguish_usage_and_domain_errors() {
    // Unknown flag.
    let (code, _, err) = run(&["action", "--bogus", "cp2", "1"], "");
    assert_eq!(code, 2, "{err}");
    // Unknown verb.
    let (code, _, _) = run(&["frobnicate"], "");
    assert_eq!(code, 2);
    // Unknown generator.
    let (code, _, err) = run(&["action", "pear", "1"], "");
    assert_eq!(code, 2);
    assert!(err.contains("unknown generator"), "{err}");
    // Malformed rational in the spec.
    let (code, _, _) = run(&["action", "cp2", "x/y"], "");
    assert_eq!(code, 2);
    // Nonpositive generator parameter is a domain error.
    let (code, _, err) = run(&["action", "cp2", "0"], "");
    assert_eq!(code, 1);
    assert!(err.contains("nonpositive parameter"), "{err}");
    // Inadmissible chop size.
    let (_, square, _) = run(&["gen", "p1xp1", "1", "1"], "");
    let (code, _, err) = run(&["blowup", "0", "1", ""], &square);
    assert_eq!(code, 2, "{err}"); // empty word is not a generator
    let (code, _, err) = run(&["blowup", "0", "1"], &square);
    assert_eq!(code, 1);
    assert!(err.contains("not strictly smaller"), "{err}");
    // Non-Delzant polygon where Delzant is required.
    let (code, _, err) = run(&["topology"], "0 0\n1 0\n0 2\n");
    assert_eq!(code, 1);
    assert!(err.contains("not Delzant"), "{err}");
}

#[test]
fn action_on_non_delzant_polygon_warns_but_computes() {
    let (code, out, err) = run(&["action"], "0 0\n1 0\n0 2\n");
    assert_eq!(code, 0);
    assert!(err.contains("warning"), "{err}");
    assert!(out.contains("action = "), "{out}");
    assert!(!out.contains("euler"), "{out}");
}

#[test]
fn blowup_chops_the_corner() {
    let (code, out, _) = run(&["blowup", "0", "1", "cp2", "2"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "0 1\n1 0\n2 0\n0 2\n");
}

#[test]
fn futaki_and_topology_reports() {
    let (code, out, _) = run(&["futaki", "hirzebruch", "1", "1"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "futaki = (-4/9 pi, 8/9 pi)\nfutaki_norm_sq = 256/39 pi^2\n");

    let (code, out, _) = run(&["topology", "--csv", "cp2", "1"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "euler,signature,b2,c1_squared\n3,1,1,9\n");
}

#[test]
fn scan_emits_exact_and_float_columns() {
    let (code, out, err) = run(&["scan", "hirzebruch", "1", "--grid", "1:3:3"], "");
    assert_eq!((code, err.as_str()), (0, ""));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "alpha,action,action_float");
    assert_eq!(lines[1], "1,111/13,8.538461538461538");
    assert_eq!(lines.len(), 4);

    let (code, out, _) =
        run(&["scan", "twopoint", "--grid", "1:2:2,1:2:2"], "");
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    assert!(out.starts_with("alpha,beta,action,action_float\n1,1,2919/409,"), "{out}");

    let (code, _, _) = run(&["scan", "hirzebruch", "1", "--grid", "1:3"], "");
    assert_eq!(code, 2);
}

#[test]
fn minimize_reports_a_critical_class() {
    let (code, out, _) = run(
        &["minimize", "hirzebruch", "1", "--grid", "1/1000:10", "--csv"],
        "",
    );
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "alpha,alpha_witness,action_float,action_witness,gradient_norm,classification"
    );
    assert!(lines[1].ends_with(",interior_min"), "{out}");

    let (code, out, _) = run(&["minimize", "hirzebruch", "2", "--grid", "1/1000:10"], "");
    assert_eq!(code, 0);
    assert!(out.contains("classification = boundary"), "{out}");

    // Two-parameter coordinate descent through the CLI.
    let (code, out, _) =
        run(&["minimize", "twopoint", "--grid", "1/100:10,1/100:10"], "");
    assert_eq!(code, 0);
    assert!(out.contains("classification = interior_min"), "{out}");
    assert!(out.contains("beta_witness = "), "{out}");
}

#[test]
fn binary_pipeline_and_thread_cap() {
    let exe = env!("CARGO_BIN_EXE_delzant");

    let mut gen = Command::new(exe)
        .args(["gen", "cp2", "2"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut blowup = Command::new(exe)
        .args(["blowup", "0", "1"])
        .stdin(Stdio::from(gen.stdout.take().unwrap()))
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let action = Command::new(exe)
        .args(["action"])
        .stdin(Stdio::from(blowup.stdout.take().unwrap()))
        .stdout(Stdio::piped())
        .output()
        .unwrap();
    assert!(gen.wait().unwrap().success());
    assert!(blowup.wait().unwrap().success());
    assert!(action.status.success());
    let text = String::from_utf8(action.stdout).unwrap();
    assert!(text.contains("area = 3/2"), "{text}");

    // DELZANT_THREADS caps scan parallelism; output is unchanged.
    let mut scan = Command::new(exe)
        .args(["scan", "hirzebruch", "2", "--grid", "1:5:5"])
        .env("DELZANT_THREADS", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    scan.stdin.take().unwrap().write_all(b"").unwrap();
    let capped = scan.wait_with_output().unwrap();
    assert!(capped.status.success());
    let (_, uncapped, _) = run(&["scan", "hirzebruch", "2", "--grid", "1:5:5"], "");
    assert_eq!(String::from_utf8(capped.stdout).unwrap(), uncapped);

    let bad = Command::new(exe)
        .args(["scan", "hirzebruch", "2", "--grid", "1:5:5"])
        .env("DELZANT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = run(&["--help"], "");
    assert_eq!(code, 0);
    assert!(out.contains("delzant"));
    let (code, _, _) = run(&["--version"], "");
    assert_eq!(code, 0);
}
