use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tyclass_cli::ResultDocument;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tyclass"));
    c.env_remove("TYCLASS_CONFIG").env_remove("TYCLASS_CACHE_DIR");
    c
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run_job(job: &Path, extra: &[&str]) -> Output {
    bin().arg("--job").arg(job).args(["--output", "json"]).args(extra).output().unwrap()
}

/// Every `*.job.json` must reproduce its `*.out.json`; set
/// `TYCLASS_UPDATE_GOLDEN=1` to rewrite them.
#[test]
fn golden_files() {
    let mut jobs: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".job.json"))
        .collect();
    jobs.sort();
    assert!(jobs.len() >= 10);
    for job in jobs {
        let expected = PathBuf::from(job.to_string_lossy().replace(".job.json", ".out.json"));
        let o = run_job(&job, &[]);
        assert!(o.status.success(), "{}: {}", job.display(), String::from_utf8_lossy(&o.stderr));
        if std::env::var_os("TYCLASS_UPDATE_GOLDEN").is_some() {
            std::fs::write(&expected, &o.stdout).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&expected).unwrap();
        assert_eq!(stdout(&o), want, "{}", job.display());
    }
}

fn doc(o: &Output) -> ResultDocument {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn coeffs(d: &ResultDocument, section: &str) -> Vec<String> {
    d.terms.iter().filter(|t| t.section == section).map(|t| t.coeff.to_string()).collect()
}

#[test]
fn strata_of_the_six_dimensional_example() {
    let o = bin().args(["--task", "strata", "--family", "C", "--n", "6", "--p", "3", "--q", "5,2,-1,-4", "--output", "json"]).output().unwrap();
    assert!(o.status.success());
    let d = doc(&o);
    assert_eq!(d.terms.len(), 8);
    let w: Vec<String> = coeffs(&d, "strata");
    assert_eq!(w, ["1", "-y", "-y", "y^2", "y^2", "-y^3", "-y^3", "y^4"]);
}

#[test]
fn lagrangian_chi_genus() {
    let o = bin().args(["--task", "chi-genus", "--space", "lg", "--n", "3", "--output", "json"]).output().unwrap();
    // (1 - y)(1 + y^2)(1 - y^3)
    assert_eq!(coeffs(&doc(&o), "chi_y"), ["1 - y + y^2 - 2*y^3 + y^4 - y^5 + y^6"]);
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let job = golden_dir().join("motivic_main.job.json");
    let a = stdout(&run_job(&job, &[]));
    let b = stdout(&run_job(&job, &[]));
    assert_eq!(a, b);
    let parsed: ResultDocument = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed.to_json(), a);
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let job = golden_dir().join("schubert_lg4.job.json");
    let cold = run_job(&job, &["--cache-dir", dir.path().to_str().unwrap()]);
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some(), "cache was not written");
    let warm = run_job(&job, &["--cache-dir", dir.path().to_str().unwrap()]);
    let none = run_job(&job, &["--no-cache"]);
    assert_eq!(stdout(&cold), stdout(&warm));
    assert_eq!(stdout(&cold), stdout(&none));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let job = golden_dir().join("chi_lg3.job.json");
    let o = bin().arg("--job").arg(&job).env("TYCLASS_CACHE_DIR", dir.path()).output().unwrap();
    assert!(o.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tyclass.toml");
    std::fs::write(&cfg, "truncation = 3\noutput = \"json\"\n").unwrap();
    let base = ["--task", "resolution-class", "--family", "C", "--n", "3", "--q", "2,1"];
    let from_file = bin().args(base).arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(doc(&from_file).job.truncation, Some(3));
    let overridden = bin().args(base).arg("--config").arg(&cfg).args(["--truncation", "5"]).output().unwrap();
    assert_eq!(doc(&overridden).job.truncation, Some(5));
    let via_env = bin().args(base).env("TYCLASS_CONFIG", &cfg).output().unwrap();
    assert_eq!(doc(&via_env).job.truncation, Some(3));
}

#[test]
fn malformed_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "truncation = [").unwrap();
    let o = bin().args(["--task", "chi-genus", "--space", "lg", "--n", "2", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn error_of(o: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    v["error"].clone()
}

#[test]
fn exit_codes() {
    let ok = bin().args(["--task", "chi-genus", "--space", "og", "--n", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));

    // q entries must strictly decrease
    let bad = bin().args(["--task", "strata", "--family", "C", "--n", "4", "--p", "1", "--q", "1,2", "--output", "json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(error_of(&bad)["kind"], "InvalidSpec");

    let missing = bin().args(["--task", "orbit", "--group", "O"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let not_inv = bin().args(["--task", "orbit", "--group", "O", "--z", "2,3,1", "--output", "json"]).output().unwrap();
    assert_eq!(not_inv.status.code(), Some(2));

    let nonvex = bin().args(["--task", "orbit", "--group", "O", "--z", "2,1,4,3", "--output", "json"]).output().unwrap();
    assert_eq!(nonvex.status.code(), Some(3));
    assert_eq!(error_of(&nonvex)["exit_code"], 3);
}

#[test]
fn symplectic_fixed_points_are_reported() {
    let o = bin().args(["--task", "orbit", "--group", "Sp", "--z", "3,2,1", "--y", "-1", "--output", "json"]).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!doc(&o).diagnostics.is_empty());
}

#[test]
fn timings_only_on_request() {
    let base = ["--task", "chi-genus", "--space", "lg", "--n", "2", "--output", "json"];
    assert!(doc(&bin().args(base).output().unwrap()).timings.is_none());
    assert!(doc(&bin().args(base).arg("--timings").output().unwrap()).timings.is_some());
}
