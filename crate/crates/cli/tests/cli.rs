use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_svfield"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str], file: &Path) -> Output {
    let mut cmd = bin();
    cmd.arg(args[0]).arg(file).args(&args[1..]);
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn toy_singular_values(re: f64, im: f64) -> (f64, f64) {
    // F*F for [[1, z], [0, z - 1]] has trace 1 + |z|² + |z−1|² and determinant |z − 1|².
    let z2 = re * re + im * im;
    let w2 = (re - 1.0).powi(2) + im * im;
    let t = 1.0 + z2 + w2;
    let disc = (t * t - 4.0 * w2).max(0.0).sqrt();
    let s1 = (0.5 * (t + disc)).sqrt();
    (s1, w2.sqrt() / s1)
}

#[test]
fn help_and_version() {
    assert!(bin().arg("--help").output().unwrap().status.success());
    let out = bin().arg("--version").output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn scan_matches_golden_csv() {
    let out = run(&["scan", "--k", "all"], &fixture("toy_small.svf"));
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read(fixture("toy_small.csv")).unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn scan_values_match_closed_form() {
    let out = run(&["scan"], &fixture("toy_small.svf"));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,s1,s2,flag"));
    let mut rows = 0;
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 5);
        let (s1, s2) = toy_singular_values(cells[0], cells[1]);
        assert!((cells[2] - s1).abs() <= 1e-14 * s1, "{line}");
        assert!((cells[3] - s2).abs() <= 1e-13, "{line}");
        assert_eq!(cells[4], 0.0);
        rows += 1;
    }
    assert_eq!(rows, 15);
}

#[test]
fn scan_flags_eigenvalues_and_selects_k() {
    let out = run(&["scan", "--k", "2"], &fixture("resolvent_small.svf"));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re,im,s2,flag");
    assert_eq!(lines[1], "0.0,0.0,,1");
    assert_eq!(lines[3], "1.0,0.0,,1");
    assert_eq!(lines[2], "0.5,0.0,2.0,0");
    assert_eq!(lines.iter().filter(|l| l.ends_with(",1")).count(), 2);
}

#[test]
fn scan_corpus_resolvent_spectrum_is_flagged_not_fatal() {
    let out = run(&["scan"], &scenario("singular/resolvent_spectrum.svf"));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let flagged: Vec<&str> = text.lines().filter(|l| l.ends_with(",1")).collect();
    assert_eq!(flagged.len(), 2);
    for line in flagged {
        let re: f64 = line.split(',').next().unwrap().parse().unwrap();
        assert!(re.abs() < 1e-12 || (re - 1.0).abs() < 1e-12, "{line}");
    }
}

#[test]
fn constant_norm_scan_has_unit_s1() {
    let out = run(&["scan", "--k", "1"], &scenario("constant_norm.svf"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(2) == Some("1.0")));
}

#[test]
fn out_file_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("field.csv");
    let ok = run(&["scan", "--out", target.to_str().unwrap()], &fixture("toy_small.svf"));
    assert_eq!(ok.status.code(), Some(0));
    assert!(ok.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), std::fs::read(fixture("toy_small.csv")).unwrap());

    let bad = dir.path().join("bad.svf");
    std::fs::write(&bad, "function F = [[1, z]\nregion rect re=[0,1] im=[0,1] grid=2x2\n").unwrap();
    let other = dir.path().join("other.csv");
    let out = run(&["scan", "--out", other.to_str().unwrap()], &bad);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert!(!other.exists());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 2, "no temporary files left behind");
}

#[test]
fn exit_codes() {
    let missing = run(&["scan"], Path::new("/nonexistent/scenario.svf"));
    assert_eq!(missing.status.code(), Some(3));
    let unwritable = run(&["scan", "--out", "/nonexistent/dir/out.csv"], &fixture("toy_small.svf"));
    assert_eq!(unwritable.status.code(), Some(3));
    let unknown = run(&["verify", "--check", "bogus"], &fixture("toy_small.svf"));
    assert_eq!(unknown.status.code(), Some(2));
    let big_k = run(&["scan", "--k", "3"], &fixture("toy_small.svf"));
    assert_eq!(big_k.status.code(), Some(2));
    let laplace = run(&["verify", "--check", "laplace"], &scenario("toy.svf"));
    assert_eq!(laplace.status.code(), Some(5));
    assert!(laplace.stdout.is_empty());
    let exp = run(&["verify", "--check", "exp-example"], &scenario("toy.svf"));
    assert_eq!(exp.status.code(), Some(5));
    let spectrum = run(&["verify", "--check", "resolvent"], &scenario("singular/resolvent_spectrum.svf"));
    assert_eq!(spectrum.status.code(), Some(5));
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = bin()
        .env("SVFIELD_THREADS", "zero")
        .arg("scan")
        .arg(fixture("toy_small.svf"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_mean_value_on_toy() {
    let out = run(
        &["verify", "--check", "mean-value", "--z0", "0,0", "--r", "0.5", "--x", "e2", "--K", "2", "--N", "256"],
        &scenario("toy.svf"),
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "certified");
    let lhs = v["witnesses"]["lhs"].as_f64().unwrap();
    let rhs = v["witnesses"]["rhs"].as_f64().unwrap();
    assert!((lhs - 1.5).abs() < 1e-10 && (rhs - 1.5).abs() < 1e-10);
}

#[test]
fn verify_factorize_constant_norm() {
    let out = run(&["verify", "--check", "factorize", "--z0", "0,0"], &scenario("constant_norm.svf"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["witnesses"]["d"], 1);
    assert_eq!(v["witnesses"]["sigma"].as_f64(), Some(1.0));
}

#[test]
fn verify_resolvent_jordan_block() {
    let out = run(&["verify", "--check", "resolvent"], &scenario("jordan_resolvent.svf"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "certified");
    assert_eq!(v["witnesses"]["max_s1_on_boundary"], true);
    assert_eq!(v["witnesses"]["min_sn_on_boundary"], true);
    // The resolvent norm is largest on the edge nearest the double eigenvalue at 0.
    assert_eq!(v["witnesses"]["max_s1_location"]["re"].as_f64(), Some(0.5));
}

#[test]
fn verify_refuted_and_inconclusive() {
    // The corner maximizes s1 on the grid but is not interior; the fixed-direction conclusion fails.
    let out = run(&["verify", "--check", "max-direction", "--z0=-2,-2"], &scenario("toy.svf"));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "refuted");
    let out = run(&["verify", "--check", "factorize"], &scenario("toy.svf"));
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["verdict"], "inconclusive");
}

#[test]
fn verify_spectral_checks_use_scenario_matrix() {
    for (check, extra) in [
        ("laplace", vec!["--z0", "2,0"]),
        ("cauchy", vec!["--t", "2"]),
        ("resolvent-derivative", vec!["--z0", "1,0"]),
    ] {
        let mut args = vec!["verify", "--check", check];
        args.extend(extra);
        let out = run(&args, &scenario("jordan_resolvent.svf"));
        assert_eq!(out.status.code(), Some(0), "{check}");
    }
    let out = run(&["verify", "--check", "laplace", "--matrix", "B", "--z0", "4,0"], &scenario("blockdiag.svf"));
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "--check", "laplace", "--matrix", "Q"], &scenario("blockdiag.svf"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extrema_of_toy_family() {
    let out = run(&["extrema", "--k", "all"], &scenario("toy.svf"));
    assert_eq!(out.status.code(), Some(0));
    let list = json(&out);
    let list = list.as_array().unwrap();
    assert_eq!(list.len(), 4);
    let find = |k: u64, kind: &str| {
        list.iter()
            .find(|e| e["k"] == k && e["kind"] == kind)
            .unwrap_or_else(|| panic!("no {kind} for k = {k}"))
    };
    let loc = |e: &Value| (e["location"][0].as_f64().unwrap(), e["location"][1].as_f64().unwrap());
    let (re, im) = loc(find(1, "min"));
    assert!(re.hypot(im) < 1e-4);
    let (re, im) = loc(find(2, "min"));
    assert!((re - 1.0).hypot(im) < 1e-4);
    assert_eq!(find(1, "max")["on_boundary"], true);
}

#[test]
fn extrema_of_constant_scenario_are_exact_and_unrefined() {
    let out = run(&["extrema"], &scenario("constant_diag.svf"));
    let list = json(&out);
    let expected = [3.0, 2.0, 2.0];
    for e in list.as_array().unwrap() {
        assert_eq!(e["refined"], false);
        let k = e["k"].as_u64().unwrap() as usize;
        assert_eq!(e["value"].as_f64(), Some(expected[k - 1]));
    }
}

#[test]
fn manifest_records_run_and_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f.csv");
    let manifest = dir.path().join("m.json");
    let args = ["scan", "--out", csv.to_str().unwrap(), "--manifest", manifest.to_str().unwrap()];
    assert_eq!(run(&args, &fixture("toy_small.svf")).status.code(), Some(0));
    let m: Value = serde_json::from_slice(&std::fs::read(&manifest).unwrap()).unwrap();
    assert_eq!(m["command"], "scan");
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["scenario_sha256"].as_str().unwrap().len(), 64);
    let first = std::fs::read(&manifest).unwrap();

    // Replaying the recorded arguments yields the same output digest.
    let replay: Vec<String> = m["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_string()).collect();
    assert_eq!(bin().args(&replay).status().unwrap().code(), Some(0));
    assert_eq!(std::fs::read(&manifest).unwrap(), first);

    let report = dir.path().join("r.json");
    let vm = dir.path().join("vm.json");
    let out = run(
        &["verify", "--check", "factorize", "--out", report.to_str().unwrap(), "--manifest", vm.to_str().unwrap()],
        &scenario("constant_norm.svf"),
    );
    assert_eq!(out.status.code(), Some(0));
    let m: Value = serde_json::from_slice(&std::fs::read(&vm).unwrap()).unwrap();
    assert_eq!(m["seed"], 0x5EED);
    assert_eq!(m["checks"][0]["verdict"], "certified");
    assert!(m["checks"][0]["residuals"]["offdiag"]["value"].is_number());
}

#[test]
fn verify_json_is_deterministic_across_threads() {
    let run_with = |threads: &str| {
        bin()
            .env("SVFIELD_THREADS", threads)
            .args(["verify"])
            .arg(scenario("constant_norm.svf"))
            .args(["--check", "max-direction"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run_with("1"), run_with("3"));
}
