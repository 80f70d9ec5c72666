use std::f64::consts::PI;
use tammes::cases::{
    angle_chain, build_p13, case1_u18, case1_verdict, case2_nested, case2_point, case3_analysis, case3_u19,
    coordinates_text, min_distance, solve_delta13, CaseId, Conclusion, Evidence,
};
use tammes::geom::{alpha, angular_dist, SphericalPoint};
use tammes::graphs::{contact_graph, gamma13_fixtures, isomorphic, DEFAULT_CONTACT_TOL};

const DEG: f64 = PI / 180.0;

#[test]
fn delta13_matches_the_published_value() {
    let (a, d) = solve_delta13();
    assert!((d / DEG - 57.1367).abs() < 1e-3, "{}", d / DEG);
    assert!((a / DEG - 69.4051).abs() < 1e-3, "{}", a / DEG);
    assert!((alpha(d).unwrap() - a).abs() < 1e-12);
}

#[test]
fn optimal_configuration_is_consistent() {
    let p = build_p13();
    let (_, d) = solve_delta13();
    let (m, pairs) = min_distance(&p, 1e-8);
    assert!((m - d).abs() < 1e-8);
    let g = contact_graph(&p, DEFAULT_CONTACT_TOL).unwrap();
    assert_eq!(pairs, g.num_edges());
    assert!(isomorphic(&g, &gamma13_fixtures()[0].graph));
}

#[test]
fn coordinates_text_round_trips() {
    let p = build_p13();
    let text = coordinates_text(&p);
    let back: Vec<SphericalPoint> = text
        .lines()
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
            SphericalPoint::normalize([v[0], v[1], v[2]]).unwrap()
        })
        .collect();
    assert_eq!(back.len(), 13);
    for (a, b) in p.iter().zip(&back) {
        assert!(angular_dist(*a, *b) < 1e-10);
    }
}

#[test]
fn symmetric_chain_is_the_optimum() {
    // at d13 the symmetric point closes and lies on both region boundaries
    let (a, d) = solve_delta13();
    let c = angle_chain(PI / 2.0, PI / 2.0, d).unwrap();
    assert!((c.u0() - a).abs() < 1e-9);
    let p = case2_point(PI / 2.0, PI / 2.0, 1e-7).unwrap();
    assert!(p.in_d1 && p.in_d2 && p.rhombi_admissible);
    assert!((p.d - d).abs() < 1e-7, "{} vs {d}", p.d);
}

#[test]
fn first_case_curve_falls_below_alpha() {
    let v = case1_verdict(1e-3);
    assert_eq!(v.case, CaseId::Gamma1);
    assert_eq!(v.conclusion, Conclusion::Eliminated);
    let Evidence::Monotone { table, strictly_decreasing, unsolved, .. } = v.evidence else { panic!() };
    assert!(strictly_decreasing && unsolved.is_empty());
    assert_eq!(table.len(), 25);
    let p = case1_u18(1.0).unwrap();
    assert!(p.closure_residual.abs() < 1e-9 && p.v7_residual.abs() < 1e-9);
}

#[test]
fn second_case_shrinks_to_the_centre() {
    let v = case2_nested(&[2.0 * DEG, 1.0 * DEG]);
    assert_eq!(v.conclusion, Conclusion::OptimalUnique);
    let Evidence::RegionScans { scans } = v.evidence else { panic!() };
    for s in scans {
        assert!(s.contains_centre && s.diameter < 3.0 * s.resolution);
        assert!(s.in_d1 > 0 && s.in_d2 > 0);
    }
}

#[test]
fn third_case_is_eliminated() {
    let v = case3_analysis(2e-3);
    assert_eq!(v.conclusion, Conclusion::Eliminated);
    let s = case3_u19(1.0).unwrap();
    assert!(s.value < s.alpha);
}
