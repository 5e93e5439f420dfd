use std::path::PathBuf;
use std::process::{Command, Output};

use orbcoh::classify::{Classifier, VerifyReport};
use orbcoh::index::SpaceDescriptor;
use orbcoh::report::{chase_report, classify_report, index_output, ss_report, ChaseReport, ClassifyReport, IndexOutput, SsReport};
use orbcoh::FieldTag;

fn orbcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbcoh"))
        .args(args)
        .env_remove("ORBCOH_FIXTURES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json<T: serde::de::DeserializeOwned>(args: &[&str]) -> T {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = orbcoh(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    serde_json::from_str(&text).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbcoh-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn documented_examples() {
    let o = orbcoh(&["classify", "--d", "3", "--n", "5", "--m", "7", "--coeff", "z2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: ClassifyReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.families.len(), 1);
    assert_eq!(r.families[0].tag, "i");

    let o = orbcoh(&["chase", "--d", "3", "--n", "1", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no consistent profile: no free S³ action with this cohomology"));
    let o = orbcoh(&["chase", "--d", "1", "--n", "2", "--m", "4"]);
    assert!(stdout(&o).contains("no free S¹ action"));

    let o = orbcoh(&["index", "--space", "sphere", "--d", "3", "--dim", "43"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ind = co-ind = 10"));
}

#[test]
fn json_output_round_trips() {
    let c: ChaseReport = json(&["chase", "--d", "3", "--n", "5", "--m", "7"]);
    assert_eq!(c, chase_report(3, 5, 7).unwrap());
    let s: SsReport = json(&["ss", "--d", "3", "--n", "4", "--m", "7", "--coeff", "q"]);
    assert_eq!(s, ss_report(3, 4, 7, FieldTag::Q).unwrap());
    let k: ClassifyReport = json(&["classify", "--d", "1", "--n", "3", "--m", "5"]);
    assert_eq!(k, classify_report(Classifier::embedded(), 1, 3, 5, FieldTag::Z2).unwrap());
    let i: IndexOutput = json(&["index", "--space", "product", "--d", "1", "--n", "3", "--m", "5"]);
    let space = SpaceDescriptor::ProductSpheres { d: 1, n: 3, m: 5, field: FieldTag::Z2 };
    assert_eq!(i, index_output(Classifier::embedded(), space).unwrap());
    let v: VerifyReport = json(&["verify", "--grid-max", "8"]);
    assert_eq!(v, Classifier::embedded().verify(8));
    assert!(v.all_pass());
}

#[test]
fn presentation_file_and_output_flag() {
    let dir = scratch("pres");
    let pres = dir.join("p.json");
    std::fs::write(
        &pres,
        r#"{"field":"z2","generators":[{"name":"u","degree":4},{"name":"v","degree":5}],"relations":["u^3","v^2"],"truncation":20}"#,
    )
    .unwrap();
    let out = dir.join("out.json");
    let o = orbcoh(&[
        "index",
        "--space",
        "presentation-file",
        "--file",
        pres.to_str().unwrap(),
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: IndexOutput = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.entries[0].report.cohom_index, 2);
    assert_eq!(r.entries[0].forbidden_from, 3);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["classify", "--d", "2", "--n", "1", "--m", "1"],
        vec!["classify", "--d", "3", "--n", "5", "--m", "3"],
        vec!["classify", "--d", "1", "--n", "1", "--m", "3", "--coeff", "q"],
        vec!["chase", "--d", "3", "--n", "1"],
        vec!["ss", "--d", "3", "--n", "1", "--m", "2", "--coeff", "z3"],
        vec!["index", "--space", "sphere", "--d", "3", "--dim", "44"],
        vec!["index", "--space", "sphere", "--d", "3"],
        vec!["index", "--space", "presentation-file", "--file", "/nonexistent/p.json"],
        vec!["frobnicate"],
    ] {
        let o = orbcoh(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_failure_exits_with_one() {
    let dir = scratch("fixtures");
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    for entry in std::fs::read_dir(&src).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    let path = dir.join("s3_mod2.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("\"m % 4 == 3\"", "\"m % 4 == 1\"", 1);
    assert_ne!(text, tampered);
    std::fs::write(&path, tampered).unwrap();

    let o = Command::new(env!("CARGO_BIN_EXE_orbcoh"))
        .args(["verify", "--grid-max", "8"])
        .env("ORBCOH_FIXTURES", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL s3-mod2"));

    std::fs::write(dir.join("s1_mod2.json"), "{").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_orbcoh"))
        .args(["verify"])
        .env("ORBCOH_FIXTURES", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("s1_mod2.json"));
    std::fs::remove_dir_all(dir).ok();
}
