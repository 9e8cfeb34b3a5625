use std::collections::BTreeMap;

use super::laurent::LaurentExpr;
use super::scalar::Scalar;
use super::var::VarId;

/// A Laurent polynomial with variables resolved to slot indices, for hot loops.
///
/// No pole checks are made; in floating point a vanishing variable raised to a
/// negative power yields a non-finite value.
#[derive(Debug, Clone)]
pub struct CompiledExpr<T> {
    terms: Vec<(T, Vec<(usize, i32)>)>,
}

/// Slot assignment shared by several compiled expressions.
#[derive(Debug, Clone, Default)]
pub struct VarIndex {
    slots: BTreeMap<VarId, usize>,
    order: Vec<VarId>,
}

impl VarIndex {
    pub fn new<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        let mut index = VarIndex::default();
        for v in vars {
            index.slot(&v);
        }
        index
    }

    pub fn slot(&mut self, v: &VarId) -> usize {
        if let Some(&s) = self.slots.get(v) {
            return s;
        }
        let s = self.order.len();
        self.slots.insert(v.clone(), s);
        self.order.push(v.clone());
        s
    }

    pub fn get(&self, v: &VarId) -> Option<usize> {
        self.slots.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn vars(&self) -> &[VarId] {
        &self.order
    }
}

impl<T: Scalar> CompiledExpr<T> {
    pub fn compile(expr: &LaurentExpr, index: &mut VarIndex) -> Self {
        let terms = expr
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .factors()
                    .iter()
                    .map(|(v, e)| (index.slot(v), *e))
                    .collect();
                (T::from_rational(c), factors)
            })
            .collect();
        CompiledExpr { terms }
    }

    pub fn eval(&self, values: &[T]) -> T {
        let mut acc = T::zero();
        for (c, factors) in &self.terms {
            let mut t = c.clone();
            for &(slot, e) in factors {
                let x = &values[slot];
                if e >= 0 {
                    t = t * x.pow_u(e as u32);
                } else {
                    t = t / x.pow_u(e.unsigned_abs());
                }
            }
            acc = acc + t;
        }
        acc
    }
}
