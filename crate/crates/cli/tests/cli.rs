use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagmirror"))
        .args(args)
        .env("FLAGMIRROR_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn grassmannian_wp_text() {
    assert_eq!(
        stdout(&["wp", "4:2", "--format", "text"]).trim(),
        "p[1]/p[] + p[2,1]/p[2] + p[2,1]/p[1,1] + q*p[1]/p[2,2]"
    );
}

#[test]
fn wp_json_term_counts() {
    assert_eq!(
        json(&["wp", "4:2,1", "--format", "json"])["terms"]
            .as_array()
            .unwrap()
            .len(),
        6
    );
    assert_eq!(
        json(&["wp", "4:3,2,1", "--format", "json"])["terms"]
            .as_array()
            .unwrap()
            .len(),
        9
    );
}

#[test]
fn wp_latex_has_one_fraction_per_term() {
    let s = stdout(&["wp", "4:2,1", "--format", "latex"]);
    assert_eq!(s.matches("\\frac").count(), 6);
    assert!(s.contains("\\frac{p^{1}_{(2,1)} + q_{1}}{p^{1}_{(2)}}"));
}

#[test]
fn pieri_numerator_of_fl_6_4_2_1() {
    assert_eq!(
        stdout(&["pieri", "6:4,2,1", "-i", "1", "--lambda", "2,2,2"]).trim(),
        "s1[2,2,2,1] + q1*s12[(1,1),(1)]"
    );
}

#[test]
fn ladder_dot_counts() {
    let dot = stdout(&["ladder", "5:3,2,1", "--dot"]);
    assert_eq!(dot.matches("->").count(), 17);
    assert_eq!(dot.matches("[shape=").count(), 13);
    let j = json(&["ladder", "4:2"]);
    assert_eq!(j["vertices"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_passes_and_is_reproducible() {
    let args = ["verify", "5:3,2,1", "--trials", "100", "--seed", "7"];
    let a = stdout(&args);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["main_theorem"]["passed"], true);
    assert_eq!(v["structure"]["passed"], true);
    assert_eq!(a, stdout(&args));
}

#[test]
fn verify_with_plain_externals() {
    let v = json(&["verify", "4:2,1", "--trials", "20", "--externals", "plain"]);
    assert_eq!(v["main_theorem"]["externals"], "plain");
    assert_eq!(v["main_theorem"]["passed"], true);
}

#[test]
fn crit_reports_closed_form_and_identities() {
    let v = json(&["crit", "4:2,1", "--q", "2,3", "--starts", "0"]);
    assert_eq!(v["count"], 12);
    assert_eq!(v["identities"].as_array().unwrap().len(), 12);
    for p in v["points"].as_array().unwrap() {
        assert!(p["grad_norm"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn crit_search_is_seed_stable() {
    let args = ["crit", "4:2", "--q", "1", "--starts", "300", "--seed", "5"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["karp"]["sign"], -1);
    assert!(v["search"]["note"]
        .as_str()
        .unwrap()
        .contains("best effort"));
}

#[test]
fn crit_flags_the_degenerate_parameters() {
    let v = json(&["crit", "4:2,1", "--q", "1,1", "--starts", "0"]);
    assert!(v["cp_points"].as_str().unwrap().contains("q1^2"));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = run(&["wp", "4:x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 2"));
    let out = run(&["pieri", "4:2", "-i", "1", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["crit", "4:2,1", "--q", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = stdout(&["selftest"]);
    assert!(!out.contains("FAIL"), "{out}");
    assert!(out.contains("PASS wp_fl_6_4_2_1_twelve_terms"));
}
