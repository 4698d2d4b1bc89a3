use std::process::{Command, Output};

use cycle_revival::expr::eval;
use cycle_revival::record::SolutionRecord;
use cycle_revival::solver::{tables, verify_point};
use cycle_revival::walk::CoinParams;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycle-revival"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

/// `(step, position, coin, re, im, prob)` rows.
fn csv_rows(text: &str) -> Vec<(u64, i64, usize, f64, f64, f64)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header, ["step", "position", "coin", "re", "im", "prob"]);
    r.deserialize().map(|row| row.unwrap()).collect()
}

fn records(text: &str) -> Vec<SolutionRecord> {
    text.lines().map(|l| SolutionRecord::from_json(l).unwrap()).collect()
}

/// Powers the walk directly for each record.
fn reverify(recs: &[SolutionRecord]) {
    for r in recs {
        let p = CoinParams::from_delta(r.rho.value, r.delta_radians().unwrap()).unwrap();
        let d = verify_point(r.k, &p, r.n).unwrap();
        assert!(d < 1e-9, "k={} N={} rho={}: {d:e}", r.k, r.n, r.rho.value);
    }
}

#[test]
fn simulate_eight_steps_returns_to_start() {
    let rows = csv_rows(&ok(&[
        "simulate", "--k", "3", "--rho", "2/3", "--delta-frac", "0/1", "--steps", "8", "--initial", "up0",
    ]));
    assert_eq!(rows.len(), 9 * 6);
    let first: Vec<_> = rows.iter().filter(|r| r.0 == 0).collect();
    let last: Vec<_> = rows.iter().filter(|r| r.0 == 8).collect();
    for (a, b) in first.iter().zip(&last) {
        assert_eq!((a.1, a.2), (b.1, b.2));
        assert!((a.3 - b.3).abs() < 1e-9 && (a.4 - b.4).abs() < 1e-9);
    }
    // Earlier steps move away from the start.
    let at4: f64 = rows.iter().filter(|r| r.0 == 4 && r.1 == 0 && r.2 == 0).map(|r| r.5).sum();
    assert!(at4 < 0.99);
}

#[test]
fn zero_steps_echo_the_initial_state() {
    let rows = csv_rows(&ok(&["simulate", "--k", "4", "--rho", "1/2", "--steps", "0", "--initial", "symmetric"]));
    assert_eq!(rows.len(), 8);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert_eq!(rows[0], (0, 0, 0, h, 0.0, rows[0].5));
    assert!((rows[1].4 - h).abs() < 1e-15 && rows[1].3 == 0.0);
    assert!(rows[2..].iter().all(|r| r.3 == 0.0 && r.4 == 0.0));
}

#[test]
fn hadamard_line_walk_drifts_left() {
    let rows = csv_rows(&ok(&["simulate", "--line", "--steps", "3", "--initial", "up0"]));
    let step3: Vec<_> = rows.iter().filter(|r| r.0 == 3).collect();
    let left: f64 = step3.iter().filter(|r| r.1 < 0).map(|r| r.5).sum();
    let right: f64 = step3.iter().filter(|r| r.1 > 0).map(|r| r.5).sum();
    // By hand: probabilities 1/8, 5/8, 1/8, 1/8 at -3, -1, 1, 3.
    assert!((left - 0.75).abs() < 1e-12 && (right - 0.25).abs() < 1e-12);
    assert!(left > right);
}

#[test]
fn simulate_json_lists_amplitudes_and_site_probabilities() {
    let text = ok(&["simulate", "--k", "5", "--rho", "0.3", "--delta-rad", "1", "--steps", "3", "--out", "json"]);
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    for (t, l) in lines.iter().enumerate() {
        assert_eq!(l["step"], t as u64);
        assert_eq!(l["amplitudes"].as_array().unwrap().len(), 10);
        let p: f64 = l["probabilities"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
        assert!((p - 1.0).abs() < 1e-12);
    }
}

#[test]
fn simulate_rejects_bad_input() {
    assert_eq!(code(&["simulate", "--k", "2", "--rho", "1/2", "--initial", "1,1"]), 1);
    assert_eq!(code(&["simulate", "--k", "2", "--rho", "1/2", "--initial", "1,0,0,0,0"]), 2);
    assert_eq!(code(&["simulate", "--k", "2"]), 2);
    assert_eq!(code(&["simulate", "--k", "2", "--rho", "2"]), 1);
    assert_eq!(code(&["simulate", "--k", "2", "--rho", "1/2", "--delta-frac", "1/3", "--delta-rad", "1"]), 2);
    assert_eq!(code(&["simulate", "--k", "2", "--rho", "1/2", "--bogus"]), 2);
    assert_eq!(code(&["simulate", "--rho", "1/2"]), 2);
}

fn verify_report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
}

#[test]
fn verify_every_table() {
    for t in 1..=5 {
        let (c, rep) = verify_report(&["verify", "--table", &t.to_string()]);
        assert_eq!(c, 0, "table {t}: {}", rep["failures"]);
        assert_eq!(rep["passed"], true);
        assert!(rep["checks"].as_u64().unwrap() > 0);
    }
}

#[test]
fn verify_single_points() {
    let (c, rep) = verify_report(&["verify", "--k", "8", "--rho", "1/2", "--delta-frac", "0/1", "--n", "24"]);
    assert_eq!(c, 0);
    assert!(rep["max_deviation"].as_f64().unwrap() < 1e-9);

    let (c, rep) = verify_report(&["verify", "--k", "7", "--rho", "1/2", "--delta-frac", "0/1", "--n", "24"]);
    assert_eq!(c, 1);
    assert_eq!(rep["passed"], false);
    let d = rep["failures"][0]["max_deviation"].as_f64().unwrap();
    assert!(d > 0.1, "{d}");

    // A loose enough tolerance lets the same point through.
    assert_eq!(code(&["verify", "--k", "7", "--rho", "1/2", "--n", "24", "--tol", "0.5"]), 0);
    assert_eq!(code(&["verify", "--table", "6"]), 2);
    assert_eq!(code(&["verify", "--k", "7", "--n", "24"]), 2);
    assert_eq!(code(&["verify", "--table", "1", "--k", "3"]), 2);
}

#[test]
fn solve_k2_worked_example() {
    let recs = records(&ok(&["solve", "--k", "2", "--case", "k2", "--seed", "2/5", "--delta-frac", "2/3"]));
    assert_eq!(recs.len(), 1);
    let r = &recs[0];
    assert_eq!(r.n, 30);
    assert_eq!(r.case_tag, "k2_seeded");
    let want = (2.0 / 3.0) * (1.0 - (7.0 * std::f64::consts::PI / 30.0).sin());
    assert!((r.rho.value - want).abs() < 1e-14);
    let gens: Vec<(u64, u64)> = r.generators.iter().map(|g| (g.num, g.den)).collect();
    assert_eq!(gens, [(4, 15), (2, 5), (23, 30), (9, 10)]);
    reverify(&recs);
}

#[test]
fn solve_two_form_k5() {
    let recs = records(&ok(&["solve", "--k", "5", "--case", "two-form", "--delta-frac", "0/1"]));
    assert_eq!(recs.len(), 2);
    let s5 = 5f64.sqrt();
    for (r, want) in recs.iter().zip([(5.0 - s5) / 10.0, (5.0 + s5) / 10.0]) {
        assert_eq!(r.n, 60);
        assert!((r.rho.value - want).abs() < 1e-12);
        assert_eq!(r.forms.len(), 2);
    }
    reverify(&recs);
}

#[test]
fn solve_k3_scan_matches_table_rows_at_zero_delta() {
    let recs = records(&ok(&["solve", "--k", "3", "--case", "k3", "--delta-frac", "0/1", "--max-den", "15"]));
    let mut want: Vec<(u64, f64)> = tables::TABLE3
        .iter()
        .filter(|row| row.deltas.contains(&(0, 1)))
        .flat_map(|row| row.rhos.iter().map(move |r| (row.n, eval(r).unwrap())))
        .collect();
    want.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let got: Vec<(u64, f64)> = recs.iter().map(|r| (r.n, r.rho.value)).collect();
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert_eq!(g.0, w.0);
        assert!((g.1 - w.1).abs() < 1e-12, "{g:?} vs {w:?}");
    }
    assert!(got.iter().all(|&(n, _)| n <= 30));
    reverify(&recs);
}

#[test]
fn solve_output_is_canonical_and_round_trips() {
    let text = ok(&["solve", "--k", "4", "--case", "k4", "--delta-frac", "1/4", "--max-den", "60", "--max-n", "30"]);
    let recs = records(&text);
    assert!(!recs.is_empty());
    for (line, r) in text.lines().zip(&recs) {
        assert_eq!(r.to_json().unwrap(), line);
    }
    let keys: Vec<(u64, f64)> = recs.iter().map(|r| (r.n, r.rho.value)).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert!(recs.iter().all(|r| r.n <= 30));
    reverify(&recs);
}

#[test]
fn solve_other_cases() {
    let edge = records(&ok(&["solve", "--k", "3", "--case", "rho-edge", "--delta-frac", "1/3"]));
    let tags: Vec<&str> = edge.iter().map(|r| r.case_tag.as_str()).collect();
    assert_eq!(tags.len(), 2);
    assert!(tags.contains(&"rho0") && tags.contains(&"rho1"));
    reverify(&edge);

    let single = records(&ok(&["solve", "--case", "k3", "--seed", "1/8", "--delta-frac", "0/1"]));
    assert_eq!(single[0].n, 8);
    assert!((single[0].rho.value - 2.0 / 3.0).abs() < 1e-12);

    let approx = records(&ok(&["solve", "--k", "3", "--case", "approx", "--rho", "2/3", "--epsilon", "1e-9"]));
    assert_eq!(approx[0].n, 8);
    assert_eq!(approx[0].case_tag, "approximate");

    let eight = records(&ok(&["solve", "--k", "8", "--case", "two-form", "--max-den", "24"]));
    assert!(eight.iter().any(|r| r.n == 24 && (r.rho.value - 0.5).abs() < 1e-12));
}

#[test]
fn solve_rejects_inconsistent_flags() {
    for args in [
        &["solve", "--case", "k2", "--delta-frac", "2/3"][..],
        &["solve", "--k", "3", "--case", "k2", "--seed", "2/5"],
        &["solve", "--case", "two-form"],
        &["solve", "--k", "6", "--case", "two-form"],
        &["solve", "--k", "3", "--case", "approx", "--rho", "1/2"],
        &["solve", "--k", "3", "--case", "k3", "--epsilon", "0.1"],
        &["solve", "--k", "3", "--case", "k3", "--delta-frac", "1/5"],
        &["solve", "--k", "3", "--case", "k3", "--delta-rad", "1"],
        &["solve", "--k", "3", "--case", "nonsense"],
    ] {
        assert_eq!(code(args), 2, "{args:?}");
    }
}

fn special(args: &[&str]) -> (i32, Option<Value>) {
    let out = run(args);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).ok())
}

#[test]
fn special_state_with_period_five() {
    let (c, rep) = special(&["special", "--k", "4", "--rho", "(5-sqrt5)/8", "--delta-frac", "0/1", "--period", "5"]);
    assert_eq!(c, 0);
    let rep = rep.unwrap();
    let f: Vec<f64> = rep["fidelity"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(f.len(), 6);
    assert!(f[5] > 1.0 - 1e-9);
    assert!(f[1..5].iter().all(|&x| x < 1.0 - 1e-3));
    let state = rep["state"].as_array().unwrap();
    assert_eq!(state.len(), 8);
}

#[test]
fn special_full_revival_accepts_any_coefficients() {
    let (c, rep) = special(&[
        "special", "--k", "3", "--rho", "2/3", "--period", "8", "--coeffs", "1,2,-3,0:4,5:1,0.25",
    ]);
    assert_eq!(c, 0);
    let rep = rep.unwrap();
    assert_eq!(rep["eigenvectors"].as_array().unwrap().len(), 6);
    assert!(rep["fidelity"][8].as_f64().unwrap() > 1.0 - 1e-9);
}

#[test]
fn special_without_a_period_five_eigenvalue_fails() {
    let (c, _) = special(&["special", "--k", "4", "--rho", "0.3", "--delta-frac", "0/1", "--period", "5"]);
    assert_eq!(c, 1);
    // At δ = π every block depends on ρ and none lands on a fifth root.
    let (c, _) = special(&["special", "--k", "3", "--rho", "0.3", "--delta-frac", "1/2", "--period", "5"]);
    assert_eq!(c, 1);
    assert_eq!(code(&["special", "--k", "3", "--rho", "2/3", "--period", "8", "--coeffs", "1,2"]), 2);
    assert_eq!(code(&["special", "--k", "3", "--rho", "2/3", "--period", "0"]), 2);
}
