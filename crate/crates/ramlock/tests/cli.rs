//! The `ramlock` binary: examples, exit codes, JSON round trips and
//! determinism.

use std::process::{Command, Output};

use ramlock::bounds::BoundReport;
use ramlock::cli::{CoinvOutput, HilbertTableOutput, InvariantsOutput, OzekiOutput};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn ramlock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramlock"))
        .args(args)
        .env_remove("RAMLOCK_DEGREE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn field_invariants_of_q3_zeta3() {
    let o = ramlock(&["invariants", "--field", &data("q3_zeta3.toml"), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out: InvariantsOutput = serde_json::from_str(&stdout(&o)).unwrap();
    let inv = &out.invariants;
    assert_eq!((inv.m, inv.mur), (Some(1), Some(1)));
    assert_eq!(inv.e0.as_deref(), Some("1/1"));
    let r = inv.r.unwrap();
    assert_eq!((r.leq, r.strict), (0, 1));
    assert!(out.curve.is_none());
}

#[test]
fn curve_invariants_of_the_cm_curve() {
    let o = ramlock(&["invariants", "--curve", &data("cm_q5.toml"), "--json", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out: InvariantsOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((out.invariants.n, out.invariants.nhat), (Some(0), Some(0)));
    assert_eq!(out.curve.unwrap().reduction, ramlock::elliptic::ReductionKind::GoodOrdinary);
    assert_eq!(out.seed, 9);
}

#[test]
fn malformed_eisenstein_polynomial() {
    let o = ramlock(&["invariants", "--field", &data("bad_eisenstein.toml")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NonEisenstein"));
}

#[test]
fn missing_file_and_bad_caps() {
    let o = ramlock(&["invariants", "--field", "/nonexistent.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Io"));
    let o = ramlock(&["invariants", "--field", &data("q5.toml"), "--nmax", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("InvalidDescriptor"));
    let o = ramlock(&["invariants", "--field", &data("q5.toml"), "--curve", &data("ss_q3.toml")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FieldMismatch"));
}

#[test]
fn bounds_examples() {
    let o = ramlock(&["bounds", "--curve", &data("cm_q5.toml"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = BoundReport::from_json(&stdout(&o)).unwrap();
    assert!(r.bounds.exact.unwrap().is_trivial());

    let o = ramlock(&["bounds", "--curve", &data("ss_q3.toml")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("TorsionHypothesisFails"));

    let o = ramlock(&["bounds", "--abstract", "g=2", "N=1", "Mur=1", "--field", &data("q3.toml"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = BoundReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.bounds.exact.unwrap().divisors(), &[3, 3]);
    assert_eq!(r.field.unwrap().p, 3);

    let o = ramlock(&["bounds", "--abstract", "1", "2", "1", "--p", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("OrderViolation"));

    let o = ramlock(&["bounds", "--curve", &data("ord_q3_zeta3.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exact      Z/3"));
}

#[test]
fn supersingular_sandwich_report() {
    let o = ramlock(&["bounds", "--curve", &data("ss_torsion_field.toml"), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = BoundReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.bounds.lower.divisors(), &[3, 3]);
    assert!(r.witness.is_some());
    assert!(r.caveats.iter().any(|c| c.contains("cites")));
}

#[test]
fn strict_mode_and_caps() {
    // m = 2 needs degree 20, above the default cap
    let o = ramlock(&["ozeki", "--curve", &data("cm_q5.toml"), "--strict"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("CapReached"));
    let o = ramlock(&["ozeki", "--curve", &data("cm_q5.toml"), "--dmax", "20", "--strict", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let out: OzekiOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(out.tower.rows.len(), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_ramlock"))
        .args(["ozeki", "--curve", &data("cm_q5.toml"), "--strict"])
        .env("RAMLOCK_DEGREE_CAP", "20")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn tables_and_modules_round_trip() {
    let o = ramlock(&["hilbert-table", "--field", &data("q3_zeta3.toml"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let t: HilbertTableOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(t.orders.iter().all(|(_, _, got, want)| got == want));
    assert_eq!(serde_json::to_string_pretty(&t).unwrap(), stdout(&o).trim_end());

    let o = ramlock(&["coinv", "--module", &data("serre_tate_3_2_3.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let c: CoinvOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(c.coinvariants.divisors(), &[3, 9]);
    assert_eq!(c.semisimple, Some(false));
}

#[test]
fn selftest_filter_and_fault() {
    let o = ramlock(&["selftest", "--suite", "hilbert"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("hilbert  pass"));
    assert_eq!(text.lines().count(), 1);

    let o = ramlock(&["selftest", "--suite", "coinv", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["bounds", "--curve", &data("ss_torsion_field.toml"), "--json", "--seed", "17"];
    let a = ramlock(&args);
    let b = ramlock(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"seed\": 17"));
}
