use flagmirror::combinat::{binomial, FlagShape};
use flagmirror::critical::{
    cp_points, find_all_critical, grad_wp, gu_sharpe_residual, identity_checks, karp_points,
    GaugeModel, GRADIENT_TOLERANCE,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn grassmannian_fixed_points_are_critical() {
    for (n, r) in [(3, 1), (4, 1), (4, 2), (5, 2), (6, 2), (6, 3)] {
        let s = FlagShape::grassmannian(n, r).unwrap();
        for q in [c(1.0, 0.0), c(-2.0, 0.5)] {
            let pts = karp_points(n, r, q).unwrap();
            assert_eq!(pts.len() as u64, binomial(n, r));
            for p in &pts {
                let g = grad_wp(p, &s).unwrap();
                assert!(g.norm < GRADIENT_TOLERANCE, "Gr({n},{r}) q={q}: {g:?}");
            }
        }
    }
}

#[test]
fn cp_family_is_critical_and_satisfies_identities() {
    for n in 4..=6 {
        let s = FlagShape::new(n, vec![2, 1]).unwrap();
        let (q1, q2) = (c(2.0, 0.0), c(3.0, 0.0));
        let pts = cp_points(n, q1, q2).unwrap();
        assert_eq!(pts.len() as u64, 2 * binomial(n, 2));
        for p in &pts {
            assert!(gu_sharpe_residual(&s, &p.x, &p.q).unwrap() < 1e-9);
            assert!(grad_wp(p, &s).unwrap().norm < GRADIENT_TOLERANCE, "n={n}");
            let r = identity_checks(n, p).unwrap();
            assert!(r.max() < 1e-8 && r.display < 1e-6, "n={n}: {r:?}");
        }
    }
}

#[test]
fn search_recovers_the_cp_family_of_fl_3_2_1() {
    let s: FlagShape = "3:2,1".parse().unwrap();
    let q = [c(2.0, 0.0), c(3.0, 0.0)];
    let found = find_all_critical(&s, &q, 2000, 1).unwrap();
    let model = GaugeModel::new(&s, &q).unwrap();
    let cp = cp_points(3, q[0], q[1]).unwrap();
    assert_eq!(found.count, cp.len());
    for p in &found.points {
        let a: Vec<Complex64> = p.gauge.iter().map(|z| c(z[0], z[1])).collect();
        let pv = model.pluckers(&a).unwrap();
        assert!(cp
            .iter()
            .any(|x| x.pluckers().unwrap().distance(&pv) < 1e-6));
    }
}
