//! Literal reference values for the documented examples, runnable as a suite.
//!
//! Expected superpotentials are written out by hand here, term by term, and compared
//! with what the constructions produce.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinat::{
    enumerate_m, perm_to_tuple, tuple_to_perm, FlagPermutation, FlagShape, Partition,
    PartitionTuple,
};
use crate::critical::{
    cp_points, find_all_critical, grad_wp, gu_sharpe_system, identity_checks, karp_points,
    GRADIENT_TOLERANCE,
};
use crate::exactalg::{rational, LaurentExpr, Monomial, RatFunc, VarId};
use crate::geometry::FactorMatrix;
use crate::mirror::{
    build_ladder, build_wp, expand_in_rectangles, grading, normalize_empty, phi_labels,
    pullback_wt, Externals, VertexKind,
};
use crate::schubert::{flag_pieri, quantum_pieri_gr};
use crate::verify::check_main_theorem;

pub type Outcome = std::result::Result<(), String>;

pub struct Case {
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub name: &'static str,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn shape(s: &str) -> FlagShape {
    s.parse().expect("literal shape")
}

fn part(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).expect("literal partition")
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

/// `p^level_parts`.
pub fn p(level: usize, parts: &[u32]) -> LaurentExpr {
    LaurentExpr::var(VarId::plucker(level, part(parts)))
}

pub fn q(i: usize) -> LaurentExpr {
    LaurentExpr::var(VarId::q(i))
}

/// A hand-written term `numerator / p^level_denominator`.
pub type Term = (usize, Vec<u32>, LaurentExpr);

fn sum(xs: &[LaurentExpr]) -> LaurentExpr {
    xs.iter().fold(LaurentExpr::zero(), |a, b| &a + b)
}

fn prod(xs: &[LaurentExpr]) -> LaurentExpr {
    xs.iter().fold(LaurentExpr::one(), |a, b| &a * b)
}

/// `W_P` of `Gr(4,2)`.
pub fn expected_gr_4_2() -> Vec<Term> {
    vec![
        (1, vec![], p(1, &[1])),
        (1, vec![2], p(1, &[2, 1])),
        (1, vec![1, 1], p(1, &[2, 1])),
        (1, vec![2, 2], prod(&[q(1), p(1, &[1])])),
    ]
}

/// `W_P` of `Fl(4;2,1)`.
pub fn expected_fl_4_2_1() -> Vec<Term> {
    vec![
        (1, vec![], p(1, &[1])),
        (1, vec![2], sum(&[p(1, &[2, 1]), q(1)])),
        (1, vec![1, 1], p(1, &[2, 1])),
        (1, vec![2, 2], prod(&[q(1), p(1, &[1]), p(2, &[1])])),
        (2, vec![], p(2, &[1])),
        (2, vec![1], q(2)),
    ]
}

/// `W_P` of `Fl(6;4,2,1)`.
pub fn expected_fl_6_4_2_1() -> Vec<Term> {
    vec![
        (1, vec![], p(1, &[1])),
        (1, vec![1, 1, 1, 1], p(1, &[2, 1, 1, 1])),
        (1, vec![2], p(1, &[2, 1])),
        (
            1,
            vec![2, 2],
            sum(&[p(1, &[2, 2, 1]), prod(&[q(1), p(1, &[1])])]),
        ),
        (
            1,
            vec![2, 2, 2],
            sum(&[
                p(1, &[2, 2, 2, 1]),
                prod(&[q(1), p(1, &[1, 1]), p(2, &[1])]),
            ]),
        ),
        (
            1,
            vec![2, 2, 2, 2],
            prod(&[q(1), p(1, &[1, 1, 1]), p(2, &[1, 1])]),
        ),
        (2, vec![], p(2, &[1])),
        (2, vec![1, 1], p(2, &[2, 1])),
        (2, vec![2], sum(&[p(2, &[2, 1]), q(2)])),
        (2, vec![2, 2], prod(&[q(2), p(2, &[1]), p(3, &[1])])),
        (3, vec![], p(3, &[1])),
        (3, vec![1], q(3)),
    ]
}

/// Compares `build_wp(shape)` with a hand-written term list, ignoring term order.
pub fn compare_wp(s: &FlagShape, expected: &[Term]) -> Outcome {
    let wp = build_wp(s);
    let actual: BTreeSet<(usize, Partition, String)> = wp
        .terms()
        .iter()
        .map(|t| (t.level, t.denominator.clone(), t.numerator.to_text(false)))
        .collect();
    let wanted: BTreeSet<(usize, Partition, String)> = expected
        .iter()
        .map(|(l, d, n)| (*l, part(d), n.to_text(false)))
        .collect();
    ensure(wp.len() == expected.len(), || {
        format!("{s}: {} terms, expected {}", wp.len(), expected.len())
    })?;
    ensure(actual == wanted, || {
        let missing: Vec<_> = wanted.difference(&actual).collect();
        let extra: Vec<_> = actual.difference(&wanted).collect();
        format!("{s}: missing {missing:?}, unexpected {extra:?}")
    })
}

/// The six-term rectangles-chart Laurent polynomial of `Gr(4,2)`, with `p_∅ = 1`.
pub fn expected_gr_4_2_rectangles() -> LaurentExpr {
    let m = |pairs: &[(&[u32], i32)]| {
        LaurentExpr::from_monomial(Monomial::from_pairs(
            pairs.iter().map(|(l, e)| (VarId::plucker(1, part(l)), *e)),
        ))
    };
    sum(&[
        m(&[(&[1], 1)]),
        m(&[(&[1, 1], 1), (&[1], -1)]),
        m(&[(&[2], 1), (&[1], -1)]),
        m(&[(&[2, 2], 1), (&[1], -1), (&[1, 1], -1)]),
        m(&[(&[2, 2], 1), (&[1], -1), (&[2], -1)]),
        &q(1) * &m(&[(&[1], 1), (&[2, 2], -1)]),
    ])
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn frozen_of_gr_4_2() -> Outcome {
    let m: BTreeSet<Partition> = enumerate_m(4, 2).map_err(err)?.into_iter().collect();
    let want: BTreeSet<Partition> = [part(&[]), part(&[2]), part(&[1, 1]), part(&[2, 2])].into();
    ensure(m == want, || format!("M(4,2) = {m:?}"))
}

fn permutation_tuples_of_fl_4_2_1() -> Outcome {
    let s = shape("4:2,1");
    let cases: [(&[usize], &[u32], &[u32]); 4] = [
        (&[1, 2, 3, 4], &[], &[]),
        (&[2, 1, 3, 4], &[], &[1]),
        (&[3, 2, 1, 4], &[1, 1], &[1]),
        (&[1, 3, 2, 4], &[1], &[]),
    ];
    for (word, a, b) in cases {
        let w = FlagPermutation::new(word.to_vec()).map_err(err)?;
        let t = PartitionTuple(vec![part(a), part(b)]);
        let got = perm_to_tuple(&w, &s).map_err(err)?;
        ensure(got == t, || format!("{word:?} -> {got}, expected {t}"))?;
        let back = tuple_to_perm(&t, &s).map_err(err)?;
        ensure(back == w, || format!("{t} -> {:?}", back.word()))?;
    }
    Ok(())
}

fn grassmannian_pieri_gr_4_2() -> Outcome {
    let a = quantum_pieri_gr(&part(&[2, 2]), 4, 2)
        .map_err(err)?
        .to_string();
    ensure(a == "q1*s1[1]", || format!("s1 * s(2,2) = {a}"))?;
    let b = quantum_pieri_gr(&part(&[2]), 4, 2)
        .map_err(err)?
        .to_string();
    ensure(b == "s1[2,1]", || format!("s1 * s(2) = {b}"))
}

fn flag_pieri_fl_4_2_1_row() -> Outcome {
    let a = flag_pieri(1, &part(&[2]), &shape("4:2,1"))
        .map_err(err)?
        .to_string();
    ensure(a == "s1[2,1] + q1", || format!("got {a}"))
}

fn flag_pieri_fl_6_4_2_1_column_block() -> Outcome {
    let a = flag_pieri(1, &part(&[2, 2, 2]), &shape("6:4,2,1"))
        .map_err(err)?
        .to_string();
    ensure(a == "s1[2,2,2,1] + q1*s12[(1,1),(1)]", || {
        format!("got {a}")
    })
}

fn wp_gr_4_2_four_terms() -> Outcome {
    compare_wp(&shape("4:2"), &expected_gr_4_2())
}

fn wp_fl_4_2_1_six_terms() -> Outcome {
    compare_wp(&shape("4:2,1"), &expected_fl_4_2_1())
}

fn wp_fl_6_4_2_1_twelve_terms() -> Outcome {
    compare_wp(&shape("6:4,2,1"), &expected_fl_6_4_2_1())
}

fn wp_gr_4_2_grading() -> Outcome {
    let s = shape("4:2");
    let wp = build_wp(&s);
    ensure(wp.len() == 4, || format!("{} terms", wp.len()))?;
    ensure(grading(&s)(&VarId::q(1)) == 4, || "deg q != 4".into())?;
    ensure(wp.degrees() == BTreeSet::from([1]), || {
        format!("degrees {:?}", wp.degrees())
    })
}

fn ladder_counts() -> Outcome {
    for (s, vertices, internal, arrows) in [("5:3,2,1", 13, 9, 17), ("4:2", 6, 4, 6)] {
        let d = build_ladder(&shape(s));
        ensure(
            d.vertices().len() == vertices
                && d.internal_count() == internal
                && d.arrows().len() == arrows,
            || {
                format!(
                    "{s}: {} vertices, {} internal, {} arrows",
                    d.vertices().len(),
                    d.internal_count(),
                    d.arrows().len()
                )
            },
        )?;
    }
    Ok(())
}

fn label_of(s: &str, block: usize, row: usize, col: usize) -> Result<Monomial, String> {
    let d = build_ladder(&shape(s));
    let labels = phi_labels(&d, Externals::Cumulative);
    d.vertices()
        .iter()
        .position(|v| v.kind == VertexKind::Internal { block, row, col })
        .map(|k| labels[k].clone())
        .ok_or_else(|| format!("{s} has no vertex ({block},{row},{col})"))
}

fn ladder_labels() -> Outcome {
    let d = label_of("4:2", 1, 2, 2)?;
    let want = Monomial::from_pairs([
        (VarId::plucker(1, part(&[2, 2])), 1),
        (VarId::plucker(1, part(&[1])), -1),
    ]);
    ensure(d == want, || format!("Gr(4,2) vertex (2,2): {d:?}"))?;
    let k = label_of("5:3,2,1", 2, 1, 1)?;
    let want = Monomial::from_pairs([
        (VarId::q(1), 1),
        (VarId::plucker(2, part(&[1])), 1),
        (VarId::plucker(2, part(&[])), -1),
    ]);
    ensure(k == want, || format!("Fl(5;3,2,1) vertex (2,1,1): {k:?}"))?;
    let d = build_ladder(&shape("5:3,2,1"));
    let labels = phi_labels(&d, Externals::Cumulative);
    for i in 1..=3 {
        let k = d
            .vertices()
            .iter()
            .position(|v| v.kind == VertexKind::External(i))
            .ok_or("missing corner")?;
        let want = Monomial::from_pairs((1..=i).map(|j| (VarId::q(j), 1)));
        ensure(labels[k] == want, || format!("corner {i}: {:?}", labels[k]))?;
    }
    Ok(())
}

fn rectangles_chart_gr_4_2() -> Outcome {
    let s = shape("4:2");
    let want = RatFunc::from(expected_gr_4_2_rectangles());
    let expanded = expand_in_rectangles(&s).map_err(err)?;
    ensure(expanded == want, || {
        format!("expansion {}", expanded.to_text(true))
    })?;
    let pulled =
        normalize_empty(&pullback_wt(&s, Externals::Cumulative).map_err(err)?).map_err(err)?;
    ensure(pulled == want, || {
        format!("pullback {}", pulled.to_text(true))
    })
}

fn plucker_relation_2x4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let rows: Vec<Vec<BigRational>> = (0..2)
            .map(|_| {
                (0..4)
                    .map(|_| rational(rng.gen_range(-50..=50), rng.gen_range(1..=50)))
                    .collect()
            })
            .collect();
        let m = FactorMatrix::new(1, rows).map_err(err)?;
        let minor = |l: &[u32]| m.minor(&part(l)).map_err(err);
        let lhs = minor(&[2])? * minor(&[1, 1])? + minor(&[])? * minor(&[2, 2])?;
        let rhs = minor(&[1])? * minor(&[2, 1])?;
        ensure(lhs == rhs, || "three-term relation fails".into())?;
    }
    Ok(())
}

fn main_theorem_gr_4_2() -> Outcome {
    let r = check_main_theorem(&shape("4:2"), 100, 0);
    ensure(r.passed(), || format!("{} failures", r.failures.len()))
}

fn gu_sharpe_fl_5_2_1() -> Outcome {
    let sys = gu_sharpe_system(&shape("5:2,1"));
    let x11 = LaurentExpr::var(VarId::chern(1, 1));
    let x12 = LaurentExpr::var(VarId::chern(1, 2));
    let x21 = LaurentExpr::var(VarId::chern(2, 1));
    let level1 = &x11.pow(5) + &(&q(1) * &(&x21 - &x11));
    let level2 = &(&(&x21 - &x11) * &(&x21 - &x12)) - &q(2);
    let get = |i, j| {
        sys.iter()
            .find(|(k, _)| *k == (i, j))
            .map(|(_, e)| e.clone())
    };
    ensure(get(1, 1) == Some(level1), || "level 1 equation".into())?;
    ensure(
        get(2, 1).map(|e| -&e) == Some(level2.clone()) || get(2, 1) == Some(level2),
        || "level 2 equation".into(),
    )
}

fn karp_points_gr_4_2() -> Outcome {
    let s = shape("4:2");
    let pts = karp_points(4, 2, c(1.0)).map_err(err)?;
    ensure(pts.len() == 6, || format!("{} points", pts.len()))?;
    for pt in &pts {
        let g = grad_wp(pt, &s).map_err(err)?;
        ensure(g.norm < GRADIENT_TOLERANCE, || {
            format!("gradient {:e}", g.norm)
        })?;
    }
    Ok(())
}

fn cp_points_fl_4_2_1() -> Outcome {
    let s = shape("4:2,1");
    let pts = cp_points(4, c(2.0), c(3.0)).map_err(err)?;
    ensure(pts.len() == 12, || format!("{} points", pts.len()))?;
    for pt in &pts {
        let g = grad_wp(pt, &s).map_err(err)?;
        ensure(g.norm < GRADIENT_TOLERANCE, || {
            format!("gradient {:e}", g.norm)
        })?;
        let r = identity_checks(4, pt).map_err(err)?;
        ensure(r.max() < 1e-8 && r.display < 1e-6, || format!("{r:?}"))?;
    }
    Ok(())
}

fn cp_guard_at_equal_parameters() -> Outcome {
    ensure(cp_points(4, c(1.0), c(1.0)).is_err(), || {
        "guard did not trigger".into()
    })
}

fn degenerate_fl_4_2_1_has_eleven_points() -> Outcome {
    let r = find_all_critical(&shape("4:2,1"), &[c(1.0), c(1.0)], 10_000, 0).map_err(err)?;
    ensure(r.count == 11, || {
        format!("{} points from {} starts", r.count, r.starts)
    })
}

fn newton_search_gr_4_2() -> Outcome {
    let r = find_all_critical(&shape("4:2"), &[c(1.0)], 10_000, 0).map_err(err)?;
    ensure(r.count == 6, || format!("{} points", r.count))
}

pub fn cases() -> Vec<Case> {
    macro_rules! case {
        ($f:ident) => {
            Case {
                name: stringify!($f),
                run: $f,
            }
        };
    }
    vec![
        case!(frozen_of_gr_4_2),
        case!(permutation_tuples_of_fl_4_2_1),
        case!(grassmannian_pieri_gr_4_2),
        case!(flag_pieri_fl_4_2_1_row),
        case!(flag_pieri_fl_6_4_2_1_column_block),
        case!(wp_gr_4_2_four_terms),
        case!(wp_fl_4_2_1_six_terms),
        case!(wp_fl_6_4_2_1_twelve_terms),
        case!(wp_gr_4_2_grading),
        case!(ladder_counts),
        case!(ladder_labels),
        case!(rectangles_chart_gr_4_2),
        case!(plucker_relation_2x4),
        case!(main_theorem_gr_4_2),
        case!(gu_sharpe_fl_5_2_1),
        case!(karp_points_gr_4_2),
        case!(cp_points_fl_4_2_1),
        case!(cp_guard_at_equal_parameters),
        case!(degenerate_fl_4_2_1_has_eleven_points),
        case!(newton_search_gr_4_2),
    ]
}

pub fn run_all() -> Vec<CaseResult> {
    cases()
        .into_iter()
        .map(|case| {
            let start = Instant::now();
            let outcome = (case.run)();
            CaseResult {
                name: case.name,
                outcome,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}
