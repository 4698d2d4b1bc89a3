use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::revival::revival_period;

fn f(m: u64, n: u64) -> ReducedFraction {
    ReducedFraction::new(m, n).unwrap()
}

fn fs(v: &[(u64, u64)]) -> Vec<ReducedFraction> {
    let mut out: Vec<_> = v.iter().map(|&(m, n)| f(m, n)).collect();
    out.sort();
    out
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() < tol
}

#[test]
fn rho_edge_examples() {
    let s = solve_rho_edge(5, f(1, 3), RhoEdge::Zero).unwrap();
    assert_eq!(s.certificate.n, 6);
    assert_eq!(s.case, CaseTag::Rho0);

    let s = solve_rho_edge(3, f(1, 2), RhoEdge::One).unwrap();
    assert_eq!(s.certificate.n, 6);
    assert_eq!(s.case, CaseTag::Rho1);

    let s = solve_rho_edge(2, f(1, 2), RhoEdge::Zero).unwrap();
    assert_eq!(s.certificate.n, 4);
    // Oracle: four dense multiplications.
    let op = build_walk_operator(2, &CoinParams::from_delta_fraction(0.0, f(1, 2)).unwrap()).unwrap();
    let m = op.matrix();
    let p = m * m * m * m;
    let dev = (p - crate::CMat::identity(4, 4)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(dev < 1e-12);

    assert!(solve_rho_edge(3, ReducedFraction::ZERO, RhoEdge::One).is_err());
    assert!(solve_rho_edge(1, f(1, 2), RhoEdge::One).is_err());
}

#[test]
fn rho_one_period_is_a_multiple_of_the_order() {
    // lcm(2, 3, 6) = 6 while the eigenphases have order 3 here.
    let s = solve_rho_edge(3, f(1, 2), RhoEdge::One).unwrap();
    assert_eq!(s.certificate.generator_lcm().unwrap(), 3);
    assert!(verify_point(3, &s.certificate.params().unwrap(), 3).unwrap() < 1e-9);
}

#[test]
fn k2_worked_example() {
    assert_eq!(k2_window(f(2, 5)).unwrap(), (f(2, 5), f(9, 10)));
    let s = solve_k2(f(2, 5), f(2, 3), DEFAULT_MAX_DEN).unwrap();
    let c = &s.certificate;
    let want = (2.0 / 3.0) * (1.0 - (7.0 * std::f64::consts::PI / 30.0).sin());
    assert!(close(c.rho, want, 1e-14));
    assert_eq!(c.generators, fs(&[(4, 15), (2, 5), (23, 30), (9, 10)]));
    assert_eq!(c.n, 30);
    assert!(c.max_deviation < 1e-9);
}

#[test]
fn k2_rejections() {
    assert!(solve_k2(f(2, 5), f(2, 5), 100).is_err());
    assert!(solve_k2(f(2, 5), f(9, 10), 100).is_err());
    assert!(solve_k2(f(2, 5), f(1, 5), 100).is_err());
    assert!(solve_k2(f(1, 2), f(1, 4), 100).is_err());
    // Companions reach denominator 30.
    assert!(matches!(solve_k2(f(2, 5), f(2, 3), 20), Err(Error::Range(_))));
}

#[test]
fn k2_free_rho() {
    for rho in [0.0, 0.1, 0.5, 0.93, 1.0] {
        let s = solve_k2_free(rho).unwrap();
        assert_eq!(s.certificate.n, 2);
    }
}

#[test]
fn k3_examples() {
    let s = solve_k3(ReducedFraction::ZERO, f(1, 8)).unwrap();
    assert!(close(s.certificate.rho, 2.0 / 3.0, 1e-14));
    assert_eq!(s.certificate.n, 8);

    let s = solve_k3(ReducedFraction::ZERO, f(1, 10)).unwrap();
    assert!(close(s.certificate.rho, (5.0 - 5f64.sqrt()) / 6.0, 1e-14));
    assert_eq!(s.certificate.n, 10);

    // ρ = 2/3 at δ = 2π/3: 2x - 1/3 = 1/4.
    let s = solve_k3(f(1, 3), f(7, 24)).unwrap();
    assert!(close(s.certificate.rho, 2.0 / 3.0, 1e-14));
    assert_eq!(s.certificate.n, 24);

    assert!(solve_k3(f(1, 2), f(1, 8)).is_err());
    // 4π/3 lands on ρ = 1.
    assert!(solve_k3(ReducedFraction::ZERO, f(1, 3)).is_err());
    assert!(solve_k3(ReducedFraction::ZERO, f(1, 2)).is_err());
}

#[test]
fn k4_examples() {
    let s = solve_k4(ReducedFraction::ZERO, f(1, 6)).unwrap();
    assert!(close(s.certificate.rho, 0.75, 1e-14));
    assert_eq!(s.certificate.n, 6);

    let s = solve_k4(ReducedFraction::ZERO, f(1, 8)).unwrap();
    assert!(close(s.certificate.rho, 0.5, 1e-14));
    assert_eq!(s.certificate.n, 8);

    let target = (2.0 - 3f64.sqrt()) / 2.0;
    let hits: Vec<_> = scan_single_form(4, f(1, 4), 30, None, CaseTag::K4Family)
        .unwrap()
        .into_iter()
        .filter(|s| close(s.certificate.rho, target, 1e-12))
        .collect();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0].certificate.n, 12);

    assert!(solve_k4(f(1, 3), f(1, 8)).is_err());
}

fn table_rhos(rows: &[tables::TableRow], delta: (u64, u64), max_n: u64) -> BTreeSet<i64> {
    rows.iter()
        .filter(|r| r.n <= max_n && r.deltas.contains(&delta))
        .flat_map(|r| r.rhos.iter())
        .map(|e| (expr::eval(e).unwrap() * 1e9).round() as i64)
        .collect()
}

#[test]
fn k3_scan_reproduces_the_table() {
    for delta in [(0, 1), (1, 3), (2, 3)] {
        let found = scan_single_form(3, fraction(delta), 15, Some(30), CaseTag::K3Family).unwrap();
        let got: BTreeSet<i64> =
            found.iter().map(|s| (s.certificate.rho * 1e9).round() as i64).collect();
        assert_eq!(got, table_rhos(tables::TABLE3, delta, 30), "delta {delta:?}");
        for s in &found {
            let row = tables::TABLE3
                .iter()
                .find(|r| {
                    r.deltas.contains(&delta)
                        && r.rhos.iter().any(|e| close(expr::eval(e).unwrap(), s.certificate.rho, 1e-9))
                })
                .unwrap();
            assert_eq!(row.n, s.certificate.n);
        }
    }
}

#[test]
fn k4_scan_reproduces_the_table() {
    // The printed N = 18 row stops at two values; the class angle 4/9 gives a
    // third, ρ = (1 + cos(π/9))/2, at δ = 0.
    let extra = expr::eval("(1/2)(1+cos(pi/9))").unwrap();
    for delta in [(0, 1), (1, 2), (1, 4), (3, 4)] {
        let found = scan_single_form(4, fraction(delta), 60, Some(30), CaseTag::K4Family).unwrap();
        let mut got: BTreeSet<i64> =
            found.iter().map(|s| (s.certificate.rho * 1e9).round() as i64).collect();
        if delta == (0, 1) {
            let s = found.iter().find(|s| close(s.certificate.rho, extra, 1e-12)).unwrap();
            assert_eq!(s.certificate.n, 18);
            assert!(got.remove(&((extra * 1e9).round() as i64)));
        }
        assert_eq!(got, table_rhos(tables::TABLE4, delta, 30), "delta {delta:?}");
    }
}

#[test]
fn two_form_k8() {
    for (i, d) in [(0, 1), (1, 4), (1, 2), (3, 4)].into_iter().enumerate() {
        let found = solve_two_form(8, fraction(d), 24).unwrap();
        assert_eq!(found.len(), 1, "delta {d:?}");
        let s = &found[0];
        let row = &tables::TABLE5[10 + i];
        assert_eq!(row.delta, d);
        assert!(close(s.certificate.rho, 0.5, 1e-12));
        assert_eq!(s.certificate.n, 24);
        assert_eq!(s.forms[0], fs(row.primed));
        assert_eq!(s.forms[1], fs(row.double_primed));
    }
}

#[test]
fn two_form_k5_and_k10_match_the_table() {
    for row in &tables::TABLE5[..10] {
        let rho = expr::eval(row.rho).unwrap();
        for &k in row.ks {
            let found = solve_two_form(k, fraction(row.delta), 60).unwrap();
            assert_eq!(found.len(), 2, "k {k} delta {:?}", row.delta);
            let s = found.iter().find(|s| close(s.certificate.rho, rho, 1e-12)).unwrap();
            assert_eq!(s.certificate.n, 60);
            assert_eq!(s.forms[0], fs(row.primed), "k {k} {:?}", row.delta);
            assert_eq!(s.forms[1], fs(row.double_primed), "k {k} {:?}", row.delta);
        }
    }
}

#[test]
fn two_form_rejections() {
    assert!(solve_two_form(7, ReducedFraction::ZERO, 10).is_err());
    assert!(solve_two_form(5, f(1, 4), 10).is_err());
    assert!(solve_two_form(8, f(1, 5), 10).is_err());
    assert!(solve_two_form(8, ReducedFraction::ZERO, 6).unwrap().is_empty());
}

#[test]
fn tables_verify() {
    for id in 1..=5 {
        let r = verify_table(id).unwrap();
        assert!(!r.rows.is_empty());
        assert!(r.passed(), "table {id}: {:?}", r.failures(1e-9));
    }
    assert!(verify_table(6).is_err());
}

#[test]
fn table_spot_rows() {
    let r = check_row(4, 24, "1/2", f(1, 4)).unwrap();
    assert!(r.passes(1e-9));
    for k in [3, 6] {
        assert!(check_row(k, 30, "(5-sqrt5)/6", f(1, 3)).unwrap().passes(1e-9));
    }
    for k in [5, 10] {
        assert!(check_row(k, 60, "(5+sqrt5)/10", f(4, 5)).unwrap().passes(1e-9));
    }
}

#[test]
fn canonical_order_and_dedupe() {
    let a = solve_k3(ReducedFraction::ZERO, f(1, 10)).unwrap();
    let b = solve_k3(ReducedFraction::ZERO, f(1, 8)).unwrap();
    let c = solve_k3(ReducedFraction::ZERO, f(3, 8)).unwrap();
    let mut v = vec![a.clone(), b.clone(), c];
    canonicalize(&mut v);
    assert_eq!(v.len(), 2);
    assert_eq!(v[0].certificate.n, 8);
    assert_eq!(v[1].certificate.n, 10);
}

#[test]
fn family_requires_verified_members() {
    let s = solve_k3(ReducedFraction::ZERO, f(1, 8)).unwrap();
    let fam =
        SolutionFamily::new(3, CaseTag::K3Family, ReducedFraction::ZERO, vec![s.certificate.clone()]);
    assert!(fam.is_ok());
    let mut bad = s.certificate.clone();
    bad.max_deviation = 0.5;
    assert!(SolutionFamily::new(3, CaseTag::K3Family, ReducedFraction::ZERO, vec![bad]).is_err());
    assert!(SolutionFamily::new(4, CaseTag::K3Family, ReducedFraction::ZERO, vec![s.certificate])
        .is_err());
}

#[test]
fn period_is_minimal() {
    // Oracle: the smallest n with ‖U^n - I‖ < 1e-9 by stepping.
    let cases = [
        solve_k3(ReducedFraction::ZERO, f(1, 8)).unwrap(),
        solve_k4(f(1, 2), f(1, 8)).unwrap(),
        solve_k2(f(2, 5), f(2, 3), 100).unwrap(),
    ];
    for s in cases {
        let c = &s.certificate;
        let p = c.params().unwrap();
        let r = revival_period(c.k, &p, 1000, 1e-9).unwrap().unwrap();
        assert_eq!(r.n, c.n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn k2_window_edges(n in 3u64..40, m_raw in 1u64..40, pos in 1u64..999) {
        let m = m_raw % n;
        prop_assume!(m > 0 && num_integer::gcd(m, n) == 1);
        let seed = f(m, n);
        let (lo, hi) = k2_window(seed).unwrap();
        // u/v strictly inside, avoiding the point where ρ vanishes.
        let den = 2 * n * 1000;
        let num = lo.num() * (den / lo.den()) + pos * n;
        let uv = ReducedFraction::new(num, den).unwrap();
        prop_assume!(lo < uv && uv < hi);
        let zero = seed.scale_turns(2);
        prop_assume!(uv != zero);
        let rho = k2_rho(seed, uv).unwrap();
        prop_assert!(rho > 0.0 && rho < 1.0, "rho {}", rho);
        for edge in [lo, hi] {
            let r = k2_rho(seed, edge).unwrap();
            prop_assert!(r.abs() < 1e-9 || (r - 1.0).abs() < 1e-9, "edge {} rho {}", edge, r);
        }
    }

    #[test]
    fn k3_solutions_double_to_k6(n in 3u64..31, m in 1u64..30, d in 0u64..3) {
        prop_assume!(m < n && num_integer::gcd(m, n) == 1);
        let Ok(s) = solve_k3(ReducedFraction::new(d, 3).unwrap(), f(m, n)) else {
            return Ok(());
        };
        prop_assert!(s.certificate.deviation_on(6).unwrap() < 1e-9);
    }
}

#[test]
fn k5_solutions_double_to_k10() {
    for d in 0..5 {
        for s in solve_two_form(5, f(d, 5), 60).unwrap() {
            assert!(s.certificate.deviation_on(10).unwrap() < 1e-9);
        }
    }
}
