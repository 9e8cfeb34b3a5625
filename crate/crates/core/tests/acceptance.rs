//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flagmirror::combinat::{
    binomial, enumerate_m, enumerate_s, enumerate_tuples, perm_to_tuple, tuple_to_perm,
    FlagPermutation, FlagShape,
};
use flagmirror::critical::{
    cp_points, display_residual, find_all_critical, grad_wp, identity_checks, karp_points,
    GaugeModel, GRADIENT_TOLERANCE,
};
use flagmirror::exactalg::{determinant, rational, rational_to_complex, select_columns, RatFunc};
use flagmirror::geometry::{sample_point, FactorMatrix, YPoint};
use flagmirror::mirror::{expand_in_rectangles, normalize_empty, pullback_wt, Externals};
use flagmirror::schubert::{flag_pieri, quantum_pieri_gr};
use flagmirror::selftest::{
    compare_wp, expected_fl_4_2_1, expected_fl_6_4_2_1, expected_gr_4_2, expected_gr_4_2_rectangles,
};
use flagmirror::verify::{check_main_theorem, check_structure};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn shape(s: &str) -> FlagShape {
    s.parse().unwrap()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn golden_formulas() -> Check {
    compare_wp(&shape("4:2"), &expected_gr_4_2())?;
    compare_wp(&shape("4:2,1"), &expected_fl_4_2_1())?;
    compare_wp(&shape("6:4,2,1"), &expected_fl_6_4_2_1())?;
    Ok("Gr(4,2) 4 terms, Fl(4;2,1) 6 terms, Fl(6;4,2,1) 12 terms".into())
}

fn main_theorem() -> Check {
    let mut total = 0;
    for s in ["4:2", "5:2", "6:3", "4:2,1", "5:3,2,1", "6:4,2,1"] {
        let r = check_main_theorem(&shape(s), 100, 2024);
        if !r.passed() {
            return Err(format!(
                "{s}: {} failing trials, first {:?}",
                r.failures.len(),
                r.failures.first()
            ));
        }
        total += r.trials;
    }
    Ok(format!("{total}/{total} exact trials agree"))
}

fn grassmannian_reduction() -> Check {
    let s = shape("4:2");
    let display = RatFunc::from(expected_gr_4_2_rectangles());
    let expanded = expand_in_rectangles(&s).map_err(|e| e.to_string())?;
    let pulled =
        normalize_empty(&pullback_wt(&s, Externals::Cumulative).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    if expanded != pulled {
        return Err("expansion differs from the ladder pullback".into());
    }
    if expanded != display {
        return Err(format!(
            "expansion {} is not the 6-term display",
            expanded.to_text(true)
        ));
    }
    Ok("expansion = pullback = 6-term chart polynomial".into())
}

fn structural_invariants() -> Check {
    let mut count = 0;
    for n in 1..=8 {
        for s in FlagShape::all_with_n(n) {
            let r = check_structure(&s);
            if !r.passed() {
                return Err(format!("{s}: {r:?}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} shapes"))
}

fn pieri_cross_check() -> Check {
    let mut count = 0;
    for n in 1..=7 {
        for r in 1..n {
            let s = FlagShape::grassmannian(n, r).map_err(|e| e.to_string())?;
            for lambda in enumerate_m(n, r).map_err(|e| e.to_string())? {
                let a = flag_pieri(1, &lambda, &s).map_err(|e| e.to_string())?;
                let b = quantum_pieri_gr(&lambda, n, r).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("Gr({n},{r}) λ={lambda}: {a} vs {b}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} products agree"))
}

fn critical_loci() -> Check {
    let gr = shape("4:2");
    let karp = karp_points(4, 2, c(1.0)).map_err(|e| e.to_string())?;
    let worst_karp = karp
        .iter()
        .map(|p| grad_wp(p, &gr).map(|g| g.norm))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(0.0, f64::max);
    if karp.len() != 6 || worst_karp >= GRADIENT_TOLERANCE {
        return Err(format!(
            "(a) {} Karp points, max gradient {worst_karp:e}",
            karp.len()
        ));
    }

    let fl = shape("4:2,1");
    let q = [c(2.0), c(3.0)];
    let cp = cp_points(4, q[0], q[1]).map_err(|e| e.to_string())?;
    let worst_cp = cp
        .iter()
        .map(|p| grad_wp(p, &fl).map(|g| g.norm))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(0.0, f64::max);
    if cp.len() != 12 || worst_cp >= GRADIENT_TOLERANCE {
        return Err(format!(
            "(b) {} C_P points, max gradient {worst_cp:e}",
            cp.len()
        ));
    }
    let search = find_all_critical(&fl, &q, 10_000, 1).map_err(|e| e.to_string())?;
    let model = GaugeModel::new(&fl, &q).map_err(|e| e.to_string())?;
    let all_in_cp = search.points.iter().all(|p| {
        let a: Vec<Complex64> = p.gauge.iter().map(|z| Complex64::new(z[0], z[1])).collect();
        let pv = model.pluckers(&a).unwrap();
        cp.iter()
            .any(|x| x.pluckers().unwrap().distance(&pv) < 1e-6)
    });
    if search.count != 12 || !all_in_cp {
        return Err(format!(
            "(b) search found {} points, all in C_P: {all_in_cp}",
            search.count
        ));
    }

    let degenerate =
        find_all_critical(&fl, &[c(1.0), c(1.0)], 10_000, 1).map_err(|e| e.to_string())?;
    if degenerate.count != 11 {
        return Err(format!(
            "(c) {} points from {} starts",
            degenerate.count, degenerate.starts
        ));
    }
    Ok(format!(
        "(a) 6 Karp points, max |grad| {worst_karp:.1e}; (b) 12 C_P points, max |grad| {worst_cp:.1e}, \
         search agrees; (c) 11 points at q=(1,1) from {} starts ({} converged, best effort)",
        degenerate.starts, degenerate.converged
    ))
}

fn to_complex(pt: &YPoint<BigRational>) -> YPoint<Complex64> {
    let factors = pt
        .factors()
        .iter()
        .map(|f| {
            let rows = f
                .rows()
                .iter()
                .map(|r| r.iter().map(rational_to_complex).collect())
                .collect();
            FactorMatrix::new(f.level(), rows).unwrap()
        })
        .collect();
    YPoint::new(pt.shape(), factors).unwrap()
}

fn identity_checks_criterion() -> Check {
    let mut worst: f64 = 0.0;
    let mut worst_display: f64 = 0.0;
    for n in [4, 5] {
        for p in cp_points(n, c(2.0), c(3.0)).map_err(|e| e.to_string())? {
            let r = identity_checks(n, &p).map_err(|e| e.to_string())?;
            worst = worst.max(r.max());
            worst_display = worst_display.max(r.display);
        }
        let s = FlagShape::new(n, vec![2, 1]).unwrap();
        for seed in 0..20 {
            let pt = to_complex(&sample_point(&s, seed).map_err(|e| e.to_string())?);
            let r = display_residual(&pt, &[Complex64::new(1.5, -0.5), c(0.7)])
                .map_err(|e| e.to_string())?;
            worst_display = worst_display.max(r);
        }
    }
    if worst >= 1e-8 || worst_display >= 1e-6 {
        return Err(format!(
            "max residual {worst:e}, display error {worst_display:e}"
        ));
    }
    Ok(format!(
        "max residual {worst:.1e}, display relative error {worst_display:.1e}"
    ))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for w in permutations(n - 1) {
        for pos in 0..=w.len() {
            let mut v = w.clone();
            v.insert(pos, n);
            out.push(v);
        }
    }
    out
}

fn round_trips() -> Check {
    let mut perms_checked = 0;
    for n in 1..=6 {
        let perms = permutations(n);
        for s in FlagShape::all_with_n(n) {
            let mut images = std::collections::BTreeSet::new();
            for w in &perms {
                let w = FlagPermutation::new(w.clone()).unwrap();
                if let Ok(t) = perm_to_tuple(&w, &s) {
                    if tuple_to_perm(&t, &s).ok() != Some(w.clone()) {
                        return Err(format!("{s}: {:?} does not round-trip", w.word()));
                    }
                    images.insert(t);
                    perms_checked += 1;
                }
            }
            let tuples = enumerate_tuples(&s);
            if images.len() != tuples.len() {
                return Err(format!(
                    "{s}: {} images of {} tuples",
                    images.len(),
                    tuples.len()
                ));
            }
            for t in tuples {
                let w = tuple_to_perm(&t, &s).map_err(|e| e.to_string())?;
                if perm_to_tuple(&w, &s).map_err(|e| e.to_string())? != t {
                    return Err(format!("{s}: {t} does not round-trip"));
                }
            }
        }
    }
    for n in 1..=10 {
        for r in 1..n {
            if enumerate_s(n, r).unwrap().len() as u64 != binomial(n, r)
                || enumerate_m(n, r).unwrap().len() != n
            {
                return Err(format!("index set sizes wrong at ({n},{r})"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for cols in [4usize, 5] {
        for _ in 0..1000 {
            let m: Vec<Vec<BigRational>> = (0..2)
                .map(|_| {
                    (0..cols)
                        .map(|_| rational(rng.gen_range(-100..=100), rng.gen_range(1..=100)))
                        .collect()
                })
                .collect();
            let p = |a: usize, b: usize| determinant(&select_columns(&m, &[a, b]));
            for i in 0..cols {
                for j in i + 1..cols {
                    for k in j + 1..cols {
                        for l in k + 1..cols {
                            if p(i, k) * p(j, l) != p(i, j) * p(k, l) + p(i, l) * p(j, k) {
                                return Err(format!(
                                    "three-term relation fails for columns {i}{j}{k}{l}"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{perms_checked} permutations round-trip; index sets sized; 2000 matrices satisfy the three-term relation"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 golden formulas", golden_formulas, Duration::from_secs(1)),
        (
            "2 main theorem harness",
            main_theorem,
            Duration::from_secs(300),
        ),
        (
            "3 Grassmannian symbolic reduction",
            grassmannian_reduction,
            Duration::from_secs(1),
        ),
        (
            "4 structural invariants",
            structural_invariants,
            Duration::from_secs(30),
        ),
        (
            "5 quantum Pieri cross-check",
            pieri_cross_check,
            Duration::from_secs(10),
        ),
        ("6 critical loci", critical_loci, Duration::from_secs(600)),
        (
            "7 identity checks",
            identity_checks_criterion,
            Duration::from_secs(60),
        ),
        (
            "8 round trips and bijections",
            round_trips,
            Duration::from_secs(30),
        ),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        match result {
            Ok(detail) if elapsed <= budget => println!("PASS {name} [{elapsed:.2?}] {detail}"),
            Ok(detail) => {
                failed += 1;
                println!("FAIL {name} [{elapsed:.2?} > {budget:?}] {detail}");
            }
            Err(why) => {
                failed += 1;
                println!("FAIL {name} [{elapsed:.2?}] {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
