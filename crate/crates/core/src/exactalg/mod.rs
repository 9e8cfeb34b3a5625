//! Exact Laurent-polynomial and rational-function arithmetic over `BigRational`.
//!
//! Floating point only enters at [`LaurentExpr::evaluate`] / [`RatFunc::evaluate`]
//! when the assignment itself is complex.

mod compiled;
mod laurent;
mod linalg;
mod ratfunc;
mod scalar;
mod var;

use std::collections::{BTreeMap, HashMap};

pub use compiled::{CompiledExpr, VarIndex};
pub use laurent::{LaurentExpr, Monomial};
pub use linalg::{determinant, select_columns, solve};
pub use ratfunc::RatFunc;
pub use scalar::{format_rational, parse_rational, rational, rational_to_complex, Scalar};
pub use var::VarId;

/// A (partial) map from variables to values.
pub trait Assignment<T> {
    fn value(&self, v: &VarId) -> Option<T>;
}

impl<T: Clone> Assignment<T> for HashMap<VarId, T> {
    fn value(&self, v: &VarId) -> Option<T> {
        self.get(v).cloned()
    }
}

impl<T: Clone> Assignment<T> for BTreeMap<VarId, T> {
    fn value(&self, v: &VarId) -> Option<T> {
        self.get(v).cloned()
    }
}

impl<T, F: Fn(&VarId) -> Option<T>> Assignment<T> for F {
    fn value(&self, v: &VarId) -> Option<T> {
        self(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::Partition;
    use crate::error::Error;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn x() -> VarId {
        VarId::chern(1, 1)
    }
    fn y() -> VarId {
        VarId::chern(1, 2)
    }
    fn q() -> VarId {
        VarId::q(1)
    }
    fn lx() -> LaurentExpr {
        LaurentExpr::var(x())
    }
    fn ly() -> LaurentExpr {
        LaurentExpr::var(y())
    }
    fn r(a: i64, b: i64) -> BigRational {
        rational(a, b)
    }
    fn mono(pairs: &[(VarId, i32)]) -> LaurentExpr {
        LaurentExpr::from_monomial(Monomial::from_pairs(pairs.iter().cloned()))
    }

    #[test]
    fn difference_of_squares() {
        let lhs = (&lx() + &ly()) * (&lx() - &ly());
        let rhs = &lx().pow(2) - &ly().pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_cancellation() {
        let f = RatFunc::new(
            &lx().pow(2) - &LaurentExpr::one(),
            &lx() - &LaurentExpr::one(),
        )
        .unwrap();
        assert_eq!(f, RatFunc::from(&lx() + &LaurentExpr::one()));
        assert!(RatFunc::new(lx(), LaurentExpr::zero()).is_err());
        assert_eq!(
            RatFunc::one().div(&RatFunc::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn plucker_ratio_evaluation() {
        let p0 = VarId::plucker(1, Partition::empty());
        let p1 = VarId::plucker(1, Partition::new(vec![1]).unwrap());
        let w = &mono(&[(p1.clone(), 1), (p0.clone(), -1)])
            + &mono(&[(q(), 1), (p0.clone(), 1), (p1.clone(), -1)]);
        let a: BTreeMap<VarId, BigRational> = [(p0, r(1, 1)), (p1, r(2, 1)), (q(), r(3, 1))].into();
        assert_eq!(w.evaluate(&a).unwrap(), r(7, 2));
    }

    #[test]
    fn derivative_examples() {
        let f = mono(&[(q(), 1), (x(), 2), (y(), -1)]);
        assert_eq!(
            f.differentiate(&x()),
            mono(&[(q(), 1), (x(), 1), (y(), -1)]).scale(&r(2, 1))
        );
        let g = &lx() + &mono(&[(q(), 1), (x(), -1)]);
        assert_eq!(
            g.differentiate(&x()),
            &LaurentExpr::one() - &mono(&[(q(), 1), (x(), -2)])
        );
    }

    #[test]
    fn evaluation_examples() {
        let f = &lx().pow(2) - &ly().pow(2);
        let a: BTreeMap<VarId, BigRational> = [(x(), r(3, 1)), (y(), r(2, 1))].into();
        assert_eq!(f.evaluate(&a).unwrap(), r(5, 1));

        let inv = RatFunc::new(LaurentExpr::one(), lx()).unwrap();
        let zero: BTreeMap<VarId, BigRational> = [(x(), r(0, 1))].into();
        match inv.evaluate(&zero) {
            Err(Error::DenominatorVanishes { variables }) => assert_eq!(variables, vec!["x1_1"]),
            other => panic!("unexpected {other:?}"),
        }
        let nonlaurent = RatFunc::new(LaurentExpr::one(), &lx() - &ly()).unwrap();
        let diag: BTreeMap<VarId, BigRational> = [(x(), r(2, 1)), (y(), r(2, 1))].into();
        assert!(matches!(
            nonlaurent.evaluate(&diag),
            Err(Error::DenominatorVanishes { .. })
        ));
        assert!(matches!(
            lx().evaluate(&BTreeMap::<VarId, BigRational>::new()),
            Err(Error::UnassignedVariable(_))
        ));
    }

    #[test]
    fn quotient_rule() {
        // d/dx 1/(x - y) = -1/(x - y)^2
        let f = RatFunc::new(LaurentExpr::one(), &lx() - &ly()).unwrap();
        let expected = RatFunc::new(-LaurentExpr::one(), (&lx() - &ly()).pow(2)).unwrap();
        assert_eq!(f.differentiate(&x()), expected);
    }

    #[test]
    fn monomial_denominators_fold_into_laurent() {
        let f = RatFunc::new(&lx() + &ly(), mono(&[(x(), 2)]).scale(&r(3, 1))).unwrap();
        assert!(f.as_laurent().is_some());
        let g = f.add(&RatFunc::from(mono(&[(y(), -1)])));
        assert!(g.as_laurent().is_some());
    }

    #[test]
    fn substitution() {
        // z + q/z with z = p1/p0
        let z = VarId::Ladder(0);
        let w = &LaurentExpr::var(z.clone()) + &mono(&[(q(), 1), (z.clone(), -1)]);
        let p0 = VarId::plucker(1, Partition::empty());
        let p1 = VarId::plucker(1, Partition::new(vec![1]).unwrap());
        let image = RatFunc::from(mono(&[(p1.clone(), 1), (p0.clone(), -1)]));
        let pulled = w.substitute(|v| (v == &z).then(|| image.clone())).unwrap();
        let expected =
            &mono(&[(p1.clone(), 1), (p0.clone(), -1)]) + &mono(&[(q(), 1), (p0, 1), (p1, -1)]);
        assert_eq!(pulled, RatFunc::from(expected));
    }

    #[test]
    fn json_round_trip_and_latex() {
        let p21 = VarId::plucker(1, Partition::new(vec![2, 1]).unwrap());
        let f = &mono(&[(p21.clone(), 1)]) + &mono(&[(q(), 1), (p21, -1)]).scale(&r(-3, 2));
        let v = f.to_json_value();
        assert_eq!(LaurentExpr::from_json_value(&v).unwrap(), f);
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains(r#""coeff":"-3/2""#), "{s}");
        assert!(s.contains(r#""p1[2,1]":-1"#), "{s}");
        assert_eq!(
            f.to_latex(false),
            "p^{1}_{(2,1)} - \\frac{3 q_{1}}{2 p^{1}_{(2,1)}}"
        );
    }

    #[test]
    fn compiled_matches_exact() {
        let f = &mono(&[(x(), 2), (y(), -1)]) + &mono(&[(q(), 1)]).scale(&r(5, 3));
        let mut index = VarIndex::default();
        let c = CompiledExpr::<BigRational>::compile(&f, &mut index);
        let vals: Vec<BigRational> = index
            .vars()
            .iter()
            .map(|v| {
                if v == &x() {
                    r(3, 1)
                } else if v == &y() {
                    r(2, 1)
                } else {
                    r(6, 1)
                }
            })
            .collect();
        let a: BTreeMap<VarId, BigRational> =
            [(x(), r(3, 1)), (y(), r(2, 1)), (q(), r(6, 1))].into();
        assert_eq!(c.eval(&vals), f.evaluate(&a).unwrap());
    }

    fn vars() -> Vec<VarId> {
        vec![
            x(),
            y(),
            q(),
            VarId::plucker(2, Partition::new(vec![1]).unwrap()),
        ]
    }

    fn arb_expr() -> impl Strategy<Value = LaurentExpr> {
        prop::collection::vec(
            (prop::collection::vec(-2i32..3, 4), -5i64..6, 1i64..4),
            0..4,
        )
        .prop_map(|terms| {
            LaurentExpr::from_terms(terms.into_iter().map(|(exps, a, b)| {
                (
                    Monomial::from_pairs(vars().into_iter().zip(exps)),
                    rational(a, b),
                )
            }))
        })
    }

    fn arb_point() -> impl Strategy<Value = BTreeMap<VarId, BigRational>> {
        prop::collection::vec((1i64..9, 1i64..5, any::<bool>()), 4).prop_map(|vals| {
            vars()
                .into_iter()
                .zip(vals)
                .map(|(v, (a, b, neg))| (v, rational(if neg { -a } else { a }, b)))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn leibniz_rule(a in arb_expr(), b in arb_expr(), d in arb_expr()) {
            let den = &d + &LaurentExpr::var(x()).pow(3);
            let f = RatFunc::new(a, LaurentExpr::one()).unwrap();
            let g = RatFunc::new(b, den).unwrap();
            let lhs = f.mul(&g).differentiate(&x());
            let rhs = f.differentiate(&x()).mul(&g).add(&f.mul(&g.differentiate(&x())));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_expr(), b in arb_expr(), pt in arb_point()) {
            let ea: BigRational = a.evaluate(&pt).unwrap();
            let eb: BigRational = b.evaluate(&pt).unwrap();
            prop_assert_eq!((&a * &b).evaluate(&pt).unwrap(), &ea * &eb);
            prop_assert_eq!((&a + &b).evaluate(&pt).unwrap(), ea + eb);
        }

        #[test]
        fn json_round_trip(a in arb_expr()) {
            prop_assert_eq!(LaurentExpr::from_json_value(&a.to_json_value()).unwrap(), a);
        }
    }
}
