use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::laurent::{LaurentExpr, Monomial};
use super::scalar::Scalar;
use super::var::VarId;
use super::Assignment;
use crate::error::{Error, Result};

/// A ratio of Laurent polynomials.
///
/// Normal form: a monomial denominator is folded into the numerator (so Laurent
/// polynomials have denominator exactly `1`); otherwise the denominator carries no
/// monomial factor and has leading coefficient `1`. Equality is decided by
/// cross-multiplication.
#[derive(Debug, Clone)]
pub struct RatFunc {
    num: LaurentExpr,
    den: LaurentExpr,
}

impl RatFunc {
    pub fn new(num: LaurentExpr, den: LaurentExpr) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: LaurentExpr, den: LaurentExpr) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some((m, c)) = den.as_monomial() {
            let inv = BigRational::one() / c;
            return RatFunc {
                num: num.mul_monomial(&m.inverse()).scale(&inv),
                den: LaurentExpr::one(),
            };
        }
        let content = den.monomial_content().inverse();
        let lead = den
            .terms()
            .next()
            .map(|(_, c)| BigRational::one() / c)
            .expect("nonzero denominator");
        RatFunc {
            num: num.mul_monomial(&content).scale(&lead),
            den: den.mul_monomial(&content).scale(&lead),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: LaurentExpr::zero(),
            den: LaurentExpr::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from(LaurentExpr::one())
    }

    pub fn var(v: VarId) -> Self {
        RatFunc::from(LaurentExpr::var(v))
    }

    pub fn numerator(&self) -> &LaurentExpr {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentExpr {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial, when the denominator is trivial.
    pub fn as_laurent(&self) -> Option<&LaurentExpr> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return Self::normalized(&self.num + &other.num, self.den.clone());
        }
        Self::normalized(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        Self::normalized(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(
            &self.num * &other.den,
            &self.den * &other.num,
        ))
    }

    pub fn recip(&self) -> Result<RatFunc> {
        RatFunc::one().div(self)
    }

    pub fn powi(&self, e: i32) -> Result<RatFunc> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        if let Some(l) = base.as_laurent() {
            if let Some((m, c)) = l.as_monomial() {
                let k = e.unsigned_abs();
                let c = (0..k).fold(BigRational::one(), |acc, _| acc * c);
                return Ok(RatFunc::from(LaurentExpr::term(m.pow(k as i32), c)));
            }
        }
        Ok((0..e.unsigned_abs()).fold(RatFunc::one(), |acc, _| acc.mul(&base)))
    }

    /// Quotient rule, exact.
    pub fn differentiate(&self, v: &VarId) -> RatFunc {
        let dn = self.num.differentiate(v);
        if self.den.is_one() {
            return RatFunc::from(dn);
        }
        let dd = self.den.differentiate(v);
        Self::normalized(
            &(&dn * &self.den) - &(&self.num * &dd),
            &self.den * &self.den,
        )
    }

    pub fn evaluate<T: Scalar, A: Assignment<T> + ?Sized>(&self, assignment: &A) -> Result<T> {
        let d = self.den.evaluate(assignment)?;
        if d.is_zero() {
            return Err(Error::DenominatorVanishes {
                variables: self.den.variables().iter().map(|v| v.to_string()).collect(),
            });
        }
        let n = self.num.evaluate(assignment)?;
        Ok(n / d)
    }

    pub fn substitute<F: Fn(&VarId) -> Option<RatFunc>>(&self, map: F) -> Result<RatFunc> {
        let n = self.num.substitute(&map)?;
        let d = self.den.substitute(&map)?;
        n.div(&d)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "numerator": self.num.to_json_value(),
            "denominator": self.den.to_json_value(),
        })
    }

    pub fn to_text(&self, grassmannian: bool) -> String {
        if self.den.is_one() {
            self.num.to_text(grassmannian)
        } else {
            format!(
                "({}) / ({})",
                self.num.to_text(grassmannian),
                self.den.to_text(grassmannian)
            )
        }
    }

    pub fn to_latex(&self, grassmannian: bool) -> String {
        if self.den.is_one() {
            self.num.to_latex(grassmannian)
        } else {
            format!(
                "\\frac{{{}}}{{{}}}",
                self.num.to_latex(grassmannian),
                self.den.to_latex(grassmannian)
            )
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl From<LaurentExpr> for RatFunc {
    fn from(l: LaurentExpr) -> Self {
        RatFunc {
            num: l,
            den: LaurentExpr::one(),
        }
    }
}

impl From<Monomial> for RatFunc {
    fn from(m: Monomial) -> Self {
        RatFunc::from(LaurentExpr::from_monomial(m))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(false))
    }
}
