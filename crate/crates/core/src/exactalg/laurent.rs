use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ratfunc::RatFunc;
use super::scalar::{format_rational, parse_rational, Scalar};
use super::var::VarId;
use super::Assignment;
use crate::error::{Error, Result};

/// A Laurent monomial: variables in canonical order with nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(VarId, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs<I: IntoIterator<Item = (VarId, i32)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<VarId, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    pub fn factors(&self) -> &[(VarId, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &VarId) -> i32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = self.0[i].1 + other.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), e * k)).collect())
    }

    /// Weighted degree `sum e_v * weight(v)`.
    pub fn weighted_degree<F: Fn(&VarId) -> i64>(&self, weight: F) -> i64 {
        self.0.iter().map(|(v, e)| *e as i64 * weight(v)).sum()
    }

    pub fn total_degree(&self) -> i64 {
        self.weighted_degree(|_| 1)
    }

    /// Splits into (positive part, inverse of negative part).
    pub fn split_signs(&self) -> (Monomial, Monomial) {
        let pos = self.0.iter().filter(|(_, e)| *e > 0).cloned().collect();
        let neg = self
            .0
            .iter()
            .filter(|(_, e)| *e < 0)
            .map(|(v, e)| (v.clone(), -e))
            .collect();
        (Monomial(pos), Monomial(neg))
    }

    fn evaluate<T: Scalar, A: Assignment<T> + ?Sized>(
        &self,
        assignment: &A,
        poles: &mut BTreeSet<VarId>,
    ) -> Result<T> {
        let mut acc = T::one();
        for (v, e) in &self.0 {
            let x = assignment
                .value(v)
                .ok_or_else(|| Error::UnassignedVariable(v.to_string()))?;
            if *e < 0 {
                if x.is_zero() {
                    poles.insert(v.clone());
                    continue;
                }
                acc = acc / x.pow_u(e.unsigned_abs());
            } else {
                acc = acc * x.pow_u(*e as u32);
            }
        }
        Ok(acc)
    }

    fn render(&self, grassmannian: bool, latex: bool, quantum_first: bool) -> String {
        let mut factors: Vec<&(VarId, i32)> = self.0.iter().collect();
        if quantum_first {
            factors.sort_by_key(|(v, _)| !v.is_quantum());
        }
        let parts: Vec<String> = factors
            .iter()
            .map(|(v, e)| {
                let base = if latex {
                    v.latex(grassmannian)
                } else {
                    v.text(grassmannian)
                };
                match (*e, latex) {
                    (1, _) => base,
                    (e, true) => format!("{base}^{{{e}}}"),
                    (e, false) => format!("{base}^{e}"),
                }
            })
            .collect();
        parts.join(if latex { " " } else { "*" })
    }
}

/// Exact Laurent polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentExpr {
    terms: BTreeMap<Monomial, BigRational>,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    coeff: String,
    monomial: BTreeMap<VarId, i32>,
}

impl LaurentExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Monomial::var(v), BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentExpr { terms }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(m, BigRational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(terms: I) -> Self {
        let mut out = LaurentExpr::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_monomial()
            .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// `Some` when the expression is a single term.
    pub fn as_monomial(&self) -> Option<(&Monomial, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentExpr {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentExpr {
            terms: self
                .terms
                .iter()
                .map(|(n, k)| (n.mul(m), k.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// All coefficients strictly positive.
    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Coordinate-wise minimum exponent over all terms (the monomial content).
    pub fn monomial_content(&self) -> Monomial {
        Monomial::from_pairs(self.variables().into_iter().map(|v| {
            let e = self.terms.keys().map(|m| m.exponent(&v)).min().unwrap_or(0);
            (v, e)
        }))
    }

    pub fn differentiate(&self, v: &VarId) -> Self {
        let mut out = LaurentExpr::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e != 0 {
                let dm = m.mul(&Monomial::from_pairs([(v.clone(), -1)]));
                out.add_term(dm, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    pub fn evaluate<T: Scalar, A: Assignment<T> + ?Sized>(&self, assignment: &A) -> Result<T> {
        let mut poles = BTreeSet::new();
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let v = m.evaluate(assignment, &mut poles)?;
            acc = acc + T::from_rational(c) * v;
        }
        if !poles.is_empty() {
            return Err(Error::DenominatorVanishes {
                variables: poles.iter().map(|v| v.to_string()).collect(),
            });
        }
        Ok(acc)
    }

    /// Replaces variables by rational functions; unmapped variables stay symbolic.
    pub fn substitute<F: Fn(&VarId) -> Option<RatFunc>>(&self, map: F) -> Result<RatFunc> {
        let mut cache: BTreeMap<VarId, Option<RatFunc>> = BTreeMap::new();
        let mut acc = RatFunc::zero();
        // Terms sharing a denominator are collected before combining to limit growth.
        let mut laurent_part = LaurentExpr::zero();
        for (m, c) in &self.terms {
            let mut term = RatFunc::from(LaurentExpr::constant(c.clone()));
            let mut kept = Vec::new();
            for (v, e) in m.factors() {
                let image = cache.entry(v.clone()).or_insert_with(|| map(v)).clone();
                match image {
                    Some(f) => term = term.mul(&f.powi(*e)?),
                    None => kept.push((v.clone(), *e)),
                }
            }
            let term = term.mul(&RatFunc::from(LaurentExpr::from_monomial(
                Monomial::from_pairs(kept),
            )));
            match term.as_laurent() {
                Some(l) => laurent_part = &laurent_part + l,
                None => acc = acc.add(&term),
            }
        }
        Ok(acc.add(&RatFunc::from(laurent_part)))
    }

    /// Degree of every term under a weight function.
    pub fn weighted_degrees<F: Fn(&VarId) -> i64 + Copy>(&self, weight: F) -> BTreeSet<i64> {
        self.terms
            .keys()
            .map(|m| m.weighted_degree(weight))
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm {
                coeff: format_rational(c),
                monomial: m.factors().iter().cloned().collect(),
            })
            .collect();
        serde_json::to_value(terms).expect("serializable")
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        let terms: Vec<JsonTerm> = serde_json::from_value(value.clone())?;
        let mut out = LaurentExpr::zero();
        for t in terms {
            let c = parse_rational(&t.coeff)
                .ok_or_else(|| Error::Json(format!("bad coefficient {:?}", t.coeff)))?;
            out.add_term(Monomial::from_pairs(t.monomial), c);
        }
        Ok(out)
    }

    /// Summands in display order: by quantum degree, then canonical order.
    fn display_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(m, _)| {
            m.factors()
                .iter()
                .filter(|(v, _)| v.is_quantum())
                .map(|(_, e)| *e as i64)
                .sum::<i64>()
        });
        v
    }

    /// Plain text. Negative exponents are written as `^-k`.
    pub fn to_text(&self, grassmannian: bool) -> String {
        self.render(grassmannian, false)
    }

    /// LaTeX with negative exponents collected into `\frac`.
    pub fn to_latex(&self, grassmannian: bool) -> String {
        self.render(grassmannian, true)
    }

    fn render(&self, grassmannian: bool, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.display_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let body = if latex {
                let (num, den) = m.split_signs();
                let coeff_num = if abs.numer().is_one() && !num.is_one() {
                    String::new()
                } else {
                    abs.numer().to_string()
                };
                let num_s = [coeff_num, num.render(grassmannian, true, true)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join(" ");
                let num_s = if num_s.is_empty() { "1".into() } else { num_s };
                let den_coeff = if abs.denom().is_one() {
                    String::new()
                } else {
                    abs.denom().to_string()
                };
                let den_s = [den_coeff, den.render(grassmannian, true, true)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join(" ");
                if den_s.is_empty() {
                    num_s
                } else {
                    format!("\\frac{{{num_s}}}{{{den_s}}}")
                }
            } else {
                let mono = m.render(grassmannian, false, true);
                match (abs.is_one(), mono.is_empty()) {
                    (true, true) => "1".to_string(),
                    (true, false) => mono,
                    (false, true) => format_rational(&abs),
                    (false, false) => format!("{}*{mono}", format_rational(&abs)),
                }
            };
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for LaurentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(false))
    }
}

impl From<VarId> for LaurentExpr {
    fn from(v: VarId) -> Self {
        LaurentExpr::var(v)
    }
}

impl Add for &LaurentExpr {
    type Output = LaurentExpr;
    fn add(self, rhs: &LaurentExpr) -> LaurentExpr {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentExpr {
    type Output = LaurentExpr;
    fn sub(self, rhs: &LaurentExpr) -> LaurentExpr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &LaurentExpr {
    type Output = LaurentExpr;
    fn mul(self, rhs: &LaurentExpr) -> LaurentExpr {
        let mut out = LaurentExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentExpr {
    type Output = LaurentExpr;
    fn neg(self) -> LaurentExpr {
        LaurentExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentExpr {
            type Output = LaurentExpr;
            fn $method(self, rhs: LaurentExpr) -> LaurentExpr {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentExpr> for LaurentExpr {
            type Output = LaurentExpr;
            fn $method(self, rhs: &LaurentExpr) -> LaurentExpr {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentExpr {
    type Output = LaurentExpr;
    fn neg(self) -> LaurentExpr {
        -&self
    }
}

impl std::iter::Sum for LaurentExpr {
    fn sum<I: Iterator<Item = LaurentExpr>>(iter: I) -> Self {
        iter.fold(LaurentExpr::zero(), |acc, x| &acc + &x)
    }
}
