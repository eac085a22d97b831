use std::process::{Command, Output};

use beurling_lab::report::parse_json;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beurling-lab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gaussian_ka_example() {
    let o = lab(&["ka-eval", "--n", "1", "--fn", "gaussian", "--a", "0.6"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("measured=11.0714871779409"), "{s}");
    assert!(s.contains("K_a = 11.0714871779409"), "{s}");
}

#[test]
fn scaling_fit_example_reports_exponent() {
    let o = lab(&["scaling-fit", "--fn", "gaussian", "--grid", "0.9,0.99,0.999"]);
    let s = stdout(&o);
    let m: f64 = s.split("measured=").nth(1).unwrap().split('\t').next().unwrap().parse().unwrap();
    assert!((m - 0.5).abs() < 0.04, "{s}");
}

#[test]
fn envelope_example_passes() {
    let o = lab(&["envelope-check", "--kind", "eigenfunction", "--fn", "eigen", "--seed", "7", "--degree", "12", "--a", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("\tpass"));
}

#[test]
fn exit_codes() {
    assert_eq!(lab(&["ka-eval", "--fn", "random"]).status.code(), Some(1));
    assert_eq!(lab(&["ka-eval", "--nope"]).status.code(), Some(1));
    assert_eq!(lab(&["check", "c99"]).status.code(), Some(1));
    let fail = lab(&["laguerre-growth", "--rho", "1e-4"]);
    assert_eq!(fail.status.code(), Some(2), "{}", stdout(&fail));
    let inconclusive = lab(&["scaling-fit", "--fn", "chirp", "--chirp", "1", "--grid", "0.3,0.4,0.5"]);
    assert_eq!(inconclusive.status.code(), Some(3), "{}", stdout(&inconclusive));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "id = \"x\"\n[experiment]\ncommand = \"ka-eval\"\nfoo = 1\n").unwrap();
    let o = lab(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn saved_config_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let first = lab(&[
        "duality-check", "--fn", "random", "--degree", "8", "--seed", "3", "--csv", &p("a.csv"), "--json", &p("a.json"),
        "--save-config", &p("cfg.toml"),
    ]);
    assert_eq!(first.status.code(), Some(0));
    let again = lab(&["run", &p("cfg.toml"), "--csv", &p("b.csv"), "--json", &p("b.json")]);
    assert_eq!(again.status.code(), Some(0));
    for (a, b) in [("a.csv", "b.csv"), ("a.json", "b.json")] {
        assert_eq!(std::fs::read(p(a)).unwrap(), std::fs::read(p(b)).unwrap());
    }
    let doc = parse_json(&std::fs::read_to_string(p("a.json")).unwrap()).unwrap();
    assert_eq!(doc.rows.len(), 1);
    assert_eq!(doc.rows[0].experiment_id, "duality-check");
}

#[test]
fn run_all_subset_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["run-all", "--only", "1,2,14", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("run-all.csv")).unwrap();
    assert!(csv.starts_with("experiment_id,params,measured,reference,rel_err,verdict\r\n"));
    let ids: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(ids.contains(&"c01-orthonormality") && ids.contains(&"c14-laguerre"));
}
