use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");

fn eqk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqk"))
        .args(args)
        .env_remove("KTHEORY_SUITE_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(!stderr.contains("panicked"), "{stderr}");
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn catalog_suite_passes() {
    let out = eqk(&[
        "verify", "--suite", "catalog", "--primes", "I,3", "J,3", "I,5",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failed"));
}

#[test]
fn default_verify_passes_without_p2() {
    let out = eqk(&["verify"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("p2 checks skipped"));
}

#[test]
fn p2_suite_needs_the_flag() {
    let out = eqk(&["verify", "--suite", "p2"]);
    assert_eq!(code(&out), 2);
    let out = eqk(&["--experimental-p2", "verify", "--suite", "p2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("[expected-fail] p2.point_square_consistency"));
}

#[test]
fn p2_primes_need_the_flag() {
    assert_eq!(
        code(&eqk(&["kunneth", "--prime", "I,2", "--space", "pt"])),
        2
    );
    // (J,2) is the same ideal
    assert_eq!(
        code(&eqk(&["kunneth", "--prime", "J,2", "--space", "pt"])),
        2
    );
    let out = eqk(&[
        "--experimental-p2",
        "kunneth",
        "--prime",
        "J,2",
        "--space",
        "pt",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn broken_six_term_data_fails_verification() {
    let path = format!("{FIXTURES}/broken_pt_six_term.json");
    let out = eqk(&["six-term", "--data", &path]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("K0_G"));
    let out = eqk(&["six-term"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn invalid_module_fails_verification() {
    let out = eqk(&[
        "localize",
        "--module",
        r#"{"gens": 1, "rels": [], "t": [[2]]}"#,
        "--prime",
        "I,3",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("t^2 != 1"));
}

#[test]
fn malformed_input_reports_a_pointer() {
    let out = eqk(&[
        "localize",
        "--module",
        r#"{"gens": 2, "rels": [], "t": [[1, 0], [0, "x"]]}"#,
        "--prime",
        "I,3",
    ]);
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("/t/1/1"), "{stderr}");
}

#[test]
fn garbage_never_panics() {
    let cases: &[&[&str]] = &[
        &["localize", "--module", "{", "--prime", "I,3"],
        &["localize", "--module", "[]", "--prime", "I,3"],
        &[
            "localize",
            "--module",
            r#"{"gens": -1, "rels": [], "t": []}"#,
            "--prime",
            "I,3",
        ],
        &[
            "localize",
            "--module",
            r#"{"gens": 1, "rels": [[1, 2]], "t": [[1]]}"#,
            "--prime",
            "I,3",
        ],
        &[
            "localize",
            "--module",
            r#"{"gens": 1, "rels": [], "t": [[1]]}"#,
            "--prime",
            "I,4",
        ],
        &[
            "localize",
            "--module",
            r#"{"gens": 1, "rels": [], "t": [[1]]}"#,
            "--prime",
            "K,3",
        ],
        &["kunneth", "--prime", "I,3", "--space", r#"{"atom": "R^0"}"#],
        &[
            "kunneth",
            "--prime",
            "I,3",
            "--space",
            r#"{"product": [{"atom": "pt"}]}"#,
        ],
        &["kunneth", "--prime", "I,3", "--space", "/nonexistent.json"],
        &[
            "tensor",
            "--left",
            r#"{"p": 3, "rank": 1, "torsion": []}"#,
            "--right",
            r#"{"p": 5, "rank": 1, "torsion": []}"#,
        ],
        &["doubling", "--prime", "J,3", "--space", "pt"],
        &["verify", "--primes", "I,9"],
        &["--mode", "sideways", "spec-r"],
        &["no-such-command"],
    ];
    for args in cases {
        assert_eq!(code(&eqk(args)), 2, "{args:?}");
    }
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = eqk(&[
            "--json",
            path.to_str().unwrap(),
            "verify",
            "--primes",
            "I,3",
            "J,5",
        ]);
        assert_eq!(code(&out), 0);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v = report(&a);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["inputs_sha256"].as_str().unwrap().len(), 64);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn kunneth_report_contents() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let space = r#"{"product": [{"atom": "G"}, {"atom": "G"}]}"#;
    let out = eqk(&[
        "--json",
        path.to_str().unwrap(),
        "kunneth",
        "--prime",
        "I,3",
        "--space",
        space,
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = report(&path);
    let even = &v["results"]["graded"]["even"];
    assert_eq!(even["rank"], Value::from(4));
    assert_eq!(v["results"]["ambiguous"], Value::Bool(false));
}

#[test]
fn remark_failure_output() {
    let out = eqk(&["remark-failure", "--prime", "I,5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("predicts K0_G rank 1"), "{text}");
    assert!(text.contains("actual K0_G rank 2"), "{text}");
}

#[test]
fn spec_r_lists_the_coincidence() {
    let out = eqk(&["spec-r", "--max-prime", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("(I,2)=(J,2)"));
}

fn copy_fixtures(to: &Path) {
    for entry in std::fs::read_dir(FIXTURES).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), to.join(entry.file_name())).unwrap();
    }
}

#[test]
fn suite_dir_override_is_used() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_eqk"))
            .args(["verify", "--suite", "catalog"])
            .env("KTHEORY_SUITE_DIR", dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(code(&run()), 0);

    // a valid fixture swapped for a mutant must now fail
    let mut pt = report(&dir.path().join("pt.json"));
    let mutant = report(&dir.path().join("mutant_broken_t2.json"));
    pt["kinvariant"] = mutant["kinvariant"].clone();
    std::fs::write(dir.path().join("pt.json"), pt.to_string()).unwrap();
    let out = run();
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("[FAIL] kinv.valid @ pt"));

    std::fs::remove_file(dir.path().join("V.json")).unwrap();
    let out = run();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("V.json"));
}
