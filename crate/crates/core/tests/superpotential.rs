use flagmirror::combinat::FlagShape;
use flagmirror::exactalg::VarId;
use flagmirror::mirror::{
    all_coefficients_one, build_wp, expand_in_rectangles, normalize_empty, pullback_wt, Externals,
};
use flagmirror::selftest::{compare_wp, expected_fl_4_2_1, expected_fl_6_4_2_1, expected_gr_4_2};
use flagmirror::verify::{check_main_theorem, check_main_theorem_with, check_structure};
use proptest::prelude::*;

fn shape(s: &str) -> FlagShape {
    s.parse().unwrap()
}

#[test]
fn displayed_superpotentials() {
    compare_wp(&shape("4:2"), &expected_gr_4_2()).unwrap();
    compare_wp(&shape("4:2,1"), &expected_fl_4_2_1()).unwrap();
    compare_wp(&shape("6:4,2,1"), &expected_fl_6_4_2_1()).unwrap();
}

#[test]
fn fl_4_2_1_latex() {
    let want = "\\frac{p^{1}_{(1)}}{p^{1}_{\\emptyset}} + \\frac{p^{1}_{(2,1)} + q_{1}}{p^{1}_{(2)}} + \
                \\frac{p^{1}_{(2,1)}}{p^{1}_{(1,1)}} + \\frac{q_{1} p^{1}_{(1)} p^{2}_{(1)}}{p^{1}_{(2,2)}} + \
                \\frac{p^{2}_{(1)}}{p^{2}_{\\emptyset}} + \\frac{q_{2}}{p^{2}_{(1)}}";
    assert_eq!(build_wp(&shape("4:2,1")).to_latex(), want);
}

#[test]
fn symbolic_expansion_matches_ladder_pullback() {
    for s in ["2:1", "4:2", "5:2", "4:2,1", "5:2,1", "4:3,2,1", "5:3,2,1"] {
        let s = shape(s);
        let expanded = expand_in_rectangles(&s).unwrap();
        let pulled = normalize_empty(&pullback_wt(&s, Externals::Cumulative).unwrap()).unwrap();
        assert_eq!(expanded, pulled, "{s}");
    }
}

#[test]
fn fl_4_2_1_chart_is_a_positive_laurent_polynomial_in_five_variables() {
    let s = shape("4:2,1");
    let f = expand_in_rectangles(&s).unwrap();
    let laurent = f.as_laurent().expect("Laurent polynomial");
    assert!(all_coefficients_one(laurent));
    let pluckers: Vec<VarId> = laurent
        .variables()
        .into_iter()
        .filter(VarId::is_plucker)
        .collect();
    assert_eq!(pluckers.len(), s.dimension());
}

#[test]
fn criterion_shapes_pass_quickly() {
    for s in ["4:2", "5:2", "6:3", "4:2,1", "5:3,2,1", "6:4,2,1"] {
        let r = check_main_theorem(&shape(s), 10, 11);
        assert!(r.passed(), "{s}: {:?}", r.failures);
    }
}

fn any_shape(max_n: usize) -> impl Strategy<Value = FlagShape> {
    (2..=max_n).prop_flat_map(|n| {
        let shapes = FlagShape::all_with_n(n);
        (0..shapes.len()).prop_map(move |k| shapes[k].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structure_holds(s in any_shape(8)) {
        let r = check_structure(&s);
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn theorem_holds_on_random_shapes(s in any_shape(6), seed in any::<u64>()) {
        let r = check_main_theorem(&s, 3, seed);
        prop_assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn plain_externals_agree_after_reparametrization(s in any_shape(5), seed in any::<u64>()) {
        let r = check_main_theorem_with(&s, 2, seed, Externals::Plain).unwrap();
        prop_assert!(r.passed(), "{:?}", r.failures);
    }
}
