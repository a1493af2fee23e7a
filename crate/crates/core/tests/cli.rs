use std::path::Path;
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use ulrich::polyring::PolyRing;

const P2: &str = r#"{"kind":"P","N":2}"#;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["ulrich"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ulrich::cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn check_multmap_report() {
    let (code, out, _) = run(&["check-multmap", "--base", P2, "--n", "1", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "base: P^2\nmultiplication map: degree 1, 2-fold\nimage dimension: 6\ntarget dimension: 6\nsurjective: true\n"
    );
}

#[test]
fn decompose_report() {
    let (code, out, _) = run(&["decompose", "--base", P2, "--n", "1", "--d", "2", "--branch", "x0^2 + x1*x2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "base: P^2\nbranch: x0^2 + x1*x2\nterms: 2\n  (x0) * (x0)\n  (x1) * (x2)\n");
}

#[test]
fn feasibility_reports() {
    let (code, out, _) = run(&["feasibility", "--genus-base", "1", "--d", "2", "--m-deg", "1"]);
    assert_eq!(code, 3);
    assert!(out.ends_with("verdict: InfeasibleH0 (bound 1 < required 2)\n"), "{out}");
    let (code, out, _) = run(&["feasibility", "--genus-base", "2", "--d", "3", "--etale"]);
    assert_eq!(code, 3);
    assert!(out.contains("InfeasibleEtale"), "{out}");
    let (code, out, _) = run(&["feasibility", "--genus-base", "0", "--d", "2", "--m-deg", "2"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("verdict: not excluded\n"), "{out}");
}

#[test]
fn elliptic_demo_report() {
    let (code, out, _) = run(&["elliptic-demo", "--A", "-1", "--B", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("image of H0(L) (x) H0(L): span{1, x, x^2}, dim 3 of 4\ncokernel: y\n"), "{out}");
    assert!(out.ends_with("branch y: NotInImage\n"), "{out}");
    let (code, _, err) = run(&["elliptic-demo", "--A", "0", "--B", "0"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn cover_info_report() {
    let spec = r#"{"stages":[{"d":2,"m_deg":1},{"d":3,"m_deg":2}]}"#;
    let (code, out, _) = run(&["cover-info", "--spec", spec, "--terms", "1,2"]);
    assert_eq!(code, 0);
    assert!(out.contains("summands: 6\n"), "{out}");
    assert!(out.contains("stage 1: d = 2, 1 terms, rank 1 (double cover pair)\n"), "{out}");
    assert!(out.ends_with("total rank: 9\n"), "{out}");
    let (code, _, _) = run(&["cover-info", "--spec", spec, "--terms", "1,2", "--no-specialize"]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["bogus"]).0, 1);
    assert_eq!(run(&["check-multmap", "--base", P2, "--n", "1"]).0, 1);
    assert_eq!(run(&["feasibility", "--genus-base", "1", "--d", "2"]).0, 1);
    assert_eq!(run(&["decompose", "--base", P2, "--n", "2", "--d", "2", "--branch", "x0^3"]).0, 1);
    assert_eq!(run(&["verify-root", "/nonexistent/root.json"]).0, 1);
    assert_eq!(run(&["check-multmap", "--base", "{\"kind\":\"Q\"}", "--n", "1", "--m", "2"]).0, 1);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-root"));
}

#[test]
fn json_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &Path| {
        vec![
            "--seed".to_string(),
            "7".into(),
            "--out".into(),
            path_str(p).into(),
            "ulrich".into(),
            "--base".into(),
            P2.into(),
            "--n".into(),
            "1".into(),
            "--d".into(),
            "3".into(),
            "--branch".into(),
            "x0^3 - 2*x0*x1*x2 + x2^3".into(),
        ]
    };
    for p in [&a, &b] {
        let owned = args(p);
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        let (code, out, err) = run(&refs);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out, format!("wrote {}\n", p.display()));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let doc = read_json(&a);
    assert_eq!(doc["format_version"], "1");
    assert_eq!(doc["rank"], 27);
    let first = run(&["verify-root", path_str(&a), "--det-samples", "3"]);
    let second = run(&["verify-root", path_str(&a), "--det-samples", "3"]);
    assert_eq!(first, second);
    assert_eq!(first.0, 0, "{}", first.1);
    assert!(first.1.ends_with("result: pass\n"), "{}", first.1);
}

#[test]
fn decompose_build_verify_chain() {
    let dir = tempfile::tempdir().unwrap();
    let dec = dir.path().join("dec.json");
    let root = dir.path().join("root.json");
    let (code, _, err) =
        run(&["--out", path_str(&dec), "decompose", "--base", P2, "--n", "1", "--d", "2", "--branch", "x0^2 + x1*x2"]);
    assert_eq!(code, 0, "{err}");
    let doc = read_json(&dec);
    assert_eq!(doc["terms"], serde_json::json!([["x0", "x0"], ["x1", "x2"]]));
    let (code, _, err) = run(&["--out", path_str(&root), "build-root", "--cert", path_str(&dec)]);
    assert_eq!(code, 0, "{err}");
    let doc = read_json(&root);
    assert_eq!((doc["size"].as_u64(), doc["target"].as_str()), (Some(8), Some("T^2 - x0^2 - x1*x2")));
    let (code, out, _) = run(&["verify-root", path_str(&root)]);
    assert_eq!(code, 0, "{out}");

    std::fs::write(&dec, r#"{"d":2,"n":1,"terms":[["x0","x1"]]}"#).unwrap();
    let (code, _, err) = run(&["--out", path_str(&root), "build-root", "--cert", path_str(&dec)]);
    assert_eq!(code, 0, "{err}");
    let doc = read_json(&root);
    assert_eq!(doc["size"], 2);
    assert_eq!(run(&["verify-root", path_str(&root), "--det-samples", "4"]).0, 0);
}

fn corrupt_entry(path: &Path, row: usize, col: usize, extra: &str) {
    let mut doc = read_json(path);
    let entries = if doc.get("root").is_some() { &mut doc["root"]["entries"] } else { &mut doc["entries"] };
    let cell = &mut entries[row][col];
    let old = cell.as_str().unwrap().to_string();
    *cell = Value::String(format!("{old} + {extra}"));
    std::fs::write(path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
}

#[test]
fn corrupted_roots_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let (code, _, err) =
        run(&["--out", path_str(&cert), "ulrich", "--base", P2, "--n", "1", "--d", "3", "--branch", "x0*x1*x2 + x1^3"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(run(&["verify-root", path_str(&cert)]).0, 0);

    let bad = dir.path().join("bad.json");
    std::fs::copy(&cert, &bad).unwrap();
    corrupt_entry(&bad, 2, 5, "3*x1");
    let (code, out, _) = run(&["verify-root", path_str(&bad)]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("B1[2][5]"), "{out}");
    assert!(out.ends_with("result: fail\n"), "{out}");

    std::fs::copy(&cert, &bad).unwrap();
    corrupt_entry(&bad, 0, 1, "x0^2");
    let (code, out, _) = run(&["verify-root", path_str(&bad)]);
    assert_eq!(code, 3, "{out}");

    let mut doc = read_json(&cert);
    doc["decomposition"]["terms"][0][0] = Value::String("x2".into());
    std::fs::write(&bad, doc.to_string()).unwrap();
    assert_eq!(run(&["verify-root", path_str(&bad)]).0, 2);
}

#[test]
fn random_divisors_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let bases = [(r#"{"kind":"P","N":1}"#, 2usize), (P2, 3)];
    for k in 0..24 {
        let (base, vars) = bases[k % 2];
        let d = 2 + (k % 3) as u32 / 2;
        let n = if vars == 2 { 1 + (k % 4) as u32 / 2 } else { 1 };
        let ring = PolyRing::rational(vars);
        let s = loop {
            let s = ring.random_form(d * n, 4, &mut rng);
            if !s.is_zero() {
                break s;
            }
        };
        let path = dir.path().join(format!("c{k}.json"));
        let (ns, ds, branch) = (n.to_string(), d.to_string(), s.to_string());
        let (code, _, err) = run(&[
            "--out",
            path_str(&path),
            "ulrich",
            "--base",
            base,
            "--n",
            &ns,
            "--d",
            &ds,
            "--branch",
            &branch,
            "--det-samples",
            "2",
        ]);
        assert_eq!(code, 0, "{branch}: {err}");
        let doc = read_json(&path);
        assert_eq!(doc["verified"], true);
        let (code, out, _) = run(&["verify-root", path_str(&path)]);
        assert_eq!(code, 0, "{branch}: {out}");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ulrich");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["feasibility", "--genus-base", "1", "--d", "2", "--m-deg", "1"]), Some(3));
    assert_eq!(status(&["check-multmap", "--base", P2, "--n", "1", "--m", "3"]), Some(0));
    assert_eq!(status(&["nonsense"]), Some(1));
    let out = Command::new(bin).args(["--version"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ulrich "));
}
