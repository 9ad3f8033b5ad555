use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn run<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_kruskal-cert"))
        .args(args)
        .env_remove("KRUSKAL_CERT_MAX_SUBSET_N")
        .output()
        .expect("spawn");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/v1")
}

fn fixture(name: &str) -> String {
    fixtures()
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let out = path(dir, name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &out]);
    let r = run(&all);
    assert_eq!(r.code, 0, "{}", r.stderr);
    out
}

fn bound(report: &Value, method: &str) -> u64 {
    report["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["method"] == method)
        .unwrap_or_else(|| panic!("no {method} bound"))["lower_bound"]
        .as_u64()
        .unwrap()
}

#[test]
fn check_exit_codes_follow_status() {
    assert_eq!(run(["check", "kgen", &fixture("example_8_1")]).code, 0);
    assert_eq!(run(["check", "kruskal", &fixture("example_8_1")]).code, 1);
    let r = run(["check", "kgen", &fixture("example_8_1")]);
    assert_eq!(r.json()["status"], "certified");
}

#[test]
fn condition_c_rejects_four_modes() {
    let dir = TempDir::new().unwrap();
    let f = generate(
        &dir,
        "m4.json",
        &["fixture", "identity", "--n", "3", "--m", "4"],
    );
    let r = run(["check", "condition-c", &f, "--pivot", "2"]);
    assert_eq!(r.code, 3);
    assert!(r.stdout.is_empty());
}

#[test]
fn failed_check_leaves_no_certificate() {
    let dir = TempDir::new().unwrap();
    let f = generate(
        &dir,
        "m4.json",
        &["fixture", "identity", "--n", "3", "--m", "4"],
    );
    let cert = path(&dir, "cert.json");
    assert_eq!(
        run(["check", "condition-c", &f, "--pivot", "2", "--out", &cert]).code,
        3
    );
    assert!(!Path::new(&cert).exists());
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 1, "{names:?}");
}

#[test]
fn unknown_criterion_and_bad_params() {
    assert_eq!(run(["check", "nope", &fixture("example_8_1")]).code, 3);
    assert_eq!(run(["check", "kgen", "/nonexistent/family.json"]).code, 3);
    assert_eq!(
        run(["check", "nonrank-irreducible", &fixture("identity_3_3")]).code,
        3
    );
}

#[test]
fn zero_factor_error_names_location() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "bad.json");
    fs::write(
        &f,
        "{\n  \"field\": {\"type\": \"rational\"},\n  \"mode_dims\": [2, 2],\n  \"tensors\": [\n    [[1, 0], [1, 0]],\n    [[0, 1], [0, 0]]\n  ]\n}\n",
    )
    .unwrap();
    let r = run(["kranks", &f]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("line 6"), "{}", r.stderr);
    assert!(r.stderr.contains("tensors[1][1]"), "{}", r.stderr);
    assert!(r.stderr.contains("zero factor"), "{}", r.stderr);
}

#[test]
fn floats_are_rejected() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "float.json");
    fs::write(
        &f,
        r#"{"field": {"type": "rational"}, "mode_dims": [1, 1], "tensors": [[[0.5], [1]]]}"#,
    )
    .unwrap();
    assert_eq!(run(["kranks", &f]).code, 3);
}

#[test]
fn bounds_on_section_examples() {
    let r = run(["bounds", &fixture("four_term")]);
    assert_eq!(r.code, 0);
    let j = r.json();
    assert_eq!(bound(&j, "mu"), 4);
    assert_eq!(bound(&j, "flattening"), 3);
    assert_eq!(j["best"], 4);

    let j = run(["bounds", &fixture("five_term")]).json();
    assert_eq!(bound(&j, "subset"), 5);
    assert_eq!(bound(&j, "mu"), 4);
    assert_eq!(j["best_method"], "subset");
}

#[test]
fn bounds_on_rank_one_input() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "r1.json");
    fs::write(&f, r#"{"field": {"type": "rational"}, "mode_dims": [2, 3], "tensors": [[[1, 2], [0, "1/2", 1]]]}"#).unwrap();
    let j = run(["bounds", &f]).json();
    for b in j["bounds"].as_array().unwrap() {
        assert_eq!(b["lower_bound"], 1, "{b}");
    }
    assert_eq!(j["bounds"].as_array().unwrap().len(), 3);
}

#[test]
fn bounds_method_selection() {
    let j = run([
        "bounds",
        &fixture("symmetric_identity_3_3"),
        "--method",
        "waring",
    ])
    .json();
    assert_eq!(bound(&j, "waring"), 3);
    assert_eq!(j["bounds"].as_array().unwrap().len(), 1);
    assert_eq!(
        run(["bounds", &fixture("four_term"), "--method", "waring"]).code,
        3
    );
}

#[test]
fn structure_dumps() {
    let dir = TempDir::new().unwrap();
    let f = generate(
        &dir,
        "i.json",
        &["fixture", "identity", "--n", "2", "--m", "2"],
    );
    let j = run(["components", &f]).json();
    assert_eq!(j["blocks"], serde_json::json!([[1], [2]]));

    let c = generate(&dir, "c.json", &["circuit", "--dims", "2,2", "--p", "7"]);
    let j = run(["ears", &c]).json();
    assert_eq!(j["ears"].as_array().unwrap().len(), 1);
    assert_eq!(j["ears"][0]["circuit"], serde_json::json!([1, 2, 3, 4]));

    let j = run(["kranks", &fixture("example_8_1")]).json();
    assert_eq!(j["k"], serde_json::json!([2, 2, 2]));

    let j = run(["split", &fixture("identity_3_3")]).json();
    assert_eq!(j["splits"], true);
}

#[test]
fn dims_subsets_respects_cap() {
    let r = run(["dims", &fixture("example_8_1"), "--subsets"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["subsets"].as_array().unwrap().len(), 31);
    let r = run([
        "dims",
        &fixture("example_8_1"),
        "--subsets",
        "--max-subset-n",
        "4",
    ]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("cap"), "{}", r.stderr);
    let out = Command::new(env!("CARGO_BIN_EXE_kruskal-cert"))
        .args(["dims", &fixture("example_8_1"), "--subsets"])
        .env("KRUSKAL_CERT_MAX_SUBSET_N", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_rank_and_uniqueness() {
    let dir = TempDir::new().unwrap();
    let f = generate(
        &dir,
        "identity2.json",
        &["fixture", "identity", "--n", "2", "--m", "3"],
    );
    let r = run(["oracle", "rank", &f, "--p", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["rank"], 2);

    let r = run(["oracle", "unique", &f, "--p", "2", "--rmax", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["unique"], true);

    // matrices always admit other decompositions
    let g = generate(
        &dir,
        "matrix.json",
        &["fixture", "identity", "--n", "2", "--m", "2"],
    );
    assert_eq!(
        run(["oracle", "unique", &g, "--p", "2", "--rmax", "2"]).code,
        1
    );
}

#[test]
fn oracle_needs_a_prime_for_rational_input() {
    assert_eq!(run(["oracle", "rank", &fixture("identity_2_2")]).code, 3);
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "g7.json", &["circuit", "--dims", "2,2", "--p", "7"]);
    assert_eq!(run(["oracle", "rank", &f, "--p", "5"]).code, 3);
}

#[test]
fn oracle_budget_exceeded() {
    let r = run([
        "oracle",
        "condition-u",
        &fixture("identity_3_3"),
        "--p",
        "2",
        "--max-candidates",
        "4",
    ]);
    assert_eq!(r.code, 4, "{}", r.stderr);
}

#[test]
fn generate_identity_fixture() {
    let r = run(["generate", "fixture", "identity", "--n", "3", "--m", "3"]);
    assert_eq!(r.code, 0);
    let j = r.json();
    assert_eq!(j["mode_dims"], serde_json::json!([3, 3, 3]));
    assert_eq!(j["tensors"].as_array().unwrap().len(), 3);
    assert_eq!(
        r.stdout,
        fs::read_to_string(fixture("identity_3_3"))
            .unwrap()
            .replace("identity_3_3", "identity")
    );
}

#[test]
fn generate_is_deterministic() {
    let a = run(["generate", "circuit", "--dims", "2,3", "--p", "11"]);
    let b = run(["generate", "circuit", "--dims", "2,3", "--p", "11"]);
    let c = run([
        "generate", "circuit", "--dims", "2,3", "--p", "11", "--seed", "9",
    ]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(c.code, 0);
    assert_eq!(a.json()["tensors"].as_array().unwrap().len(), 5);
}

#[test]
fn generate_sharp_symmetric() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "sharp");
    let r = run([
        "generate",
        "sharp-symmetric",
        "--m",
        "3",
        "--d",
        "2",
        "--n",
        "2",
        "--r",
        "3",
        "--p",
        "101",
        "--out-dir",
        &out,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let inst: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sharp/instance.json")).unwrap())
            .unwrap();
    let p = &inst["params"];
    assert_eq!(p["n"].as_u64().unwrap() + p["r"].as_u64().unwrap(), 5);
    assert_eq!(run(["kranks", &path(&dir, "sharp/e.json")]).code, 0);
    assert_eq!(run(["kranks", &path(&dir, "sharp/f.json")]).code, 0);
}

#[test]
fn generate_sharp_tensor_meets_mu_bound() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "st");
    let r = run([
        "generate",
        "sharp-tensor",
        "--dims",
        "3,3,2",
        "--kranks",
        "2,2,2",
        "--mode",
        "1",
        "--n",
        "5",
        "--p",
        "101",
        "--out-dir",
        &out,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j = run(["bounds", &path(&dir, "st/e.json"), "--method", "mu"]).json();
    let f: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("st/f.json")).unwrap()).unwrap();
    assert_eq!(
        bound(&j, "mu") as usize,
        f["tensors"].as_array().unwrap().len()
    );
}

#[test]
fn generation_failure_exits_five() {
    assert_eq!(
        run([
            "generate",
            "circuit",
            "--dims",
            "2,2",
            "--p",
            "7",
            "--attempts",
            "0"
        ])
        .code,
        5
    );
}

#[test]
fn certificate_round_trip_and_revalidation() {
    let dir = TempDir::new().unwrap();
    let cert = path(&dir, "cert.json");
    assert_eq!(
        run(["check", "kgen", &fixture("example_8_1"), "--out", &cert]).code,
        0
    );
    let text = fs::read_to_string(&cert).unwrap();
    let j: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(j["criterion"], "kgen");
    assert_eq!(j["schema"], 1);
    assert_eq!(j["input"]["sha256"].as_str().unwrap().len(), 64);

    let r = run(["revalidate", &cert, "--family", &fixture("example_8_1")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["consistent"], true);

    // the hash binds the certificate to its input
    assert_eq!(
        run(["revalidate", &cert, "--family", &fixture("five_term")]).code,
        3
    );

    let forged = path(&dir, "forged.json");
    fs::write(
        &forged,
        text.replace(
            "\"status\": \"certified\"",
            "\"status\": \"hypothesis-fails\"",
        ),
    )
    .unwrap();
    assert_eq!(run(["revalidate", &forged]).code, 3);
}

#[test]
fn failing_certificate_revalidates_with_its_status() {
    let dir = TempDir::new().unwrap();
    let cert = path(&dir, "cert.json");
    assert_eq!(
        run(["check", "kruskal", &fixture("example_8_1"), "--out", &cert]).code,
        1
    );
    assert_eq!(run(["revalidate", &cert]).code, 1);
}

#[test]
fn batch_mode_writes_one_certificate_per_file() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in");
    fs::create_dir(&input).unwrap();
    for name in ["example_8_1", "identity_3_3"] {
        fs::copy(fixture(name), input.join(format!("{name}.json"))).unwrap();
    }
    let out = dir.path().join("out");
    fs::create_dir(&out).unwrap();
    let r = run([
        "check".as_ref(),
        "kruskal".as_ref(),
        input.as_os_str(),
        "--out".as_ref(),
        out.as_os_str(),
    ]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    for (name, status) in [
        ("example_8_1", "hypothesis-fails"),
        ("identity_3_3", "certified"),
    ] {
        let text = fs::read_to_string(out.join(format!("{name}.kruskal.cert.json"))).unwrap();
        let j: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(j["status"], status);
    }
    assert_eq!(
        run(["check".as_ref(), "kruskal".as_ref(), input.as_os_str()]).code,
        3
    );
}

#[test]
fn committed_fixtures_match_the_catalog() {
    let dir = TempDir::new().unwrap();
    let r = run([
        "generate",
        "fixtures",
        "--out-dir",
        &dir.path().display().to_string(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let mut committed: Vec<_> = fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    committed.sort();
    assert_eq!(names, committed);
    for n in names {
        assert_eq!(
            fs::read_to_string(dir.path().join(&n)).unwrap(),
            fs::read_to_string(fixtures().join(&n)).unwrap(),
            "{n:?}"
        );
    }
}

#[test]
fn committed_fixtures_meet_their_expectations() {
    for entry in fs::read_dir(fixtures()).unwrap() {
        let p = entry.unwrap().path();
        let name = p.file_name().unwrap().to_str().unwrap().to_string();
        let Some(stem) = name.strip_suffix(".expected.json") else {
            continue;
        };
        let file: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
        let expected = &file["expected"];
        let family = fixture(stem);
        if !expected["kranks"].is_null() {
            let j = run(["kranks", &family]).json();
            assert_eq!(j["k"], expected["kranks"], "{stem}");
            assert_eq!(j["d"], expected["dims"], "{stem}");
        }
        for b in expected["bounds"].as_array().unwrap() {
            let j = run(["bounds", &family, "--method", b["method"].as_str().unwrap()]).json();
            assert_eq!(j["bounds"][0]["status"], b["status"], "{stem}");
            assert_eq!(j["bounds"][0]["lower_bound"], b["value"], "{stem}");
        }
        for c in expected["checks"].as_array().unwrap() {
            let mut args = vec![
                "check".to_string(),
                c["criterion"].as_str().unwrap().to_string(),
                family.clone(),
            ];
            for (k, v) in c["params"].as_object().unwrap() {
                args.push(format!("--{k}"));
                args.push(v.to_string());
            }
            let r = run(&args);
            assert_eq!(r.json()["status"], c["status"], "{stem} {args:?}");
        }
    }
}
