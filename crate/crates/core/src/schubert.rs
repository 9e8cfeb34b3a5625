//! Schur polynomials, Littlewood–Richardson products and the quantum Pieri rules.
//!
//! [`quantum_pieri_gr`] multiplies by the hyperplane class of a Grassmannian through
//! classical Pieri plus rim-hook reduction. [`flag_pieri`] is the case-by-case rule for
//! `s^i_□ * s^i_λ` on a flag variety when `λ` is a frozen rectangle; at `ρ = 1` the
//! two agree, which the tests check exhaustively.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::combinat::{is_frozen, FlagShape, Partition, PartitionTuple};
use crate::error::{Error, Result};
use crate::exactalg::{determinant, Scalar};

/// `h_k(xs)`, zero for negative `k`.
pub fn complete_homogeneous<T: Scalar>(k: i64, xs: &[T]) -> T {
    if k < 0 {
        return T::zero();
    }
    let k = k as usize;
    let mut h = vec![T::zero(); k + 1];
    h[0] = T::one();
    for x in xs {
        for d in 1..=k {
            let v = h[d].clone() + x.clone() * h[d - 1].clone();
            h[d] = v;
        }
    }
    h.pop().expect("k + 1 entries")
}

fn check_length(lambda: &Partition, vars: usize) -> Result<()> {
    if lambda.len() > vars {
        return Err(Error::PartitionTooLong {
            partition: lambda.to_string(),
            parts: lambda.len(),
            variables: vars,
        });
    }
    Ok(())
}

/// `s_λ(xs)`, via Jacobi–Trudi.
pub fn schur_eval<T: Scalar>(lambda: &Partition, xs: &[T]) -> Result<T> {
    schur_jacobi_trudi(lambda, xs)
}

/// `det(h_{λ_i - i + j})`.
pub fn schur_jacobi_trudi<T: Scalar>(lambda: &Partition, xs: &[T]) -> Result<T> {
    check_length(lambda, xs.len())?;
    let l = lambda.len();
    let max = lambda.part(0) as i64 + l as i64;
    let h: Vec<T> = (0..max.max(1))
        .map(|k| complete_homogeneous(k, xs))
        .collect();
    let hk = |k: i64| -> T {
        if k < 0 {
            T::zero()
        } else {
            h[k as usize].clone()
        }
    };
    let m: Vec<Vec<T>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| hk(lambda.part(i) as i64 - i as i64 + j as i64))
                .collect()
        })
        .collect();
    Ok(determinant(&m))
}

/// `det(x_i^{λ_j + r - j}) / det(x_i^{r - j})`; the values must be pairwise distinct.
pub fn schur_bialternant<T: Scalar>(lambda: &Partition, xs: &[T]) -> Result<T> {
    check_length(lambda, xs.len())?;
    let r = xs.len();
    let alternant = |shift: &dyn Fn(usize) -> u32| -> T {
        let m: Vec<Vec<T>> = xs
            .iter()
            .map(|x| {
                (0..r)
                    .map(|j| x.pow_u(shift(j) + (r - 1 - j) as u32))
                    .collect()
            })
            .collect();
        determinant(&m)
    };
    let vandermonde = alternant(&|_| 0);
    if vandermonde.is_zero() {
        return Err(Error::DegenerateParameters(
            "bialternant needs pairwise distinct values".into(),
        ));
    }
    Ok(alternant(&|j| lambda.part(j)) / vandermonde)
}

/// Expansion of `s_λ · s_μ` in the Schur basis, by counting Littlewood–Richardson tableaux.
pub fn lr_multiply(lambda: &Partition, mu: &Partition) -> BTreeMap<Partition, u64> {
    // Rows of the skew filling: `fill[row]` lists the labels added in that row, left to right.
    fn place(
        label: usize,
        mu: &Partition,
        shape: &mut Vec<u32>,
        fill: &mut Vec<Vec<u32>>,
        out: &mut BTreeMap<Partition, u64>,
    ) {
        if label == mu.len() {
            if is_lattice(fill) {
                let nu = Partition::new(shape.clone()).expect("valid shape");
                *out.entry(nu).or_insert(0) += 1;
            }
            return;
        }
        let before = shape.clone();
        strips(0, mu.part(label), label, &before, mu, shape, fill, out);
    }

    // Adds a horizontal strip of `left` boxes labelled `label + 1`, choosing row by row.
    #[allow(clippy::too_many_arguments)]
    fn strips(
        row: usize,
        left: u32,
        label: usize,
        before: &[u32],
        mu: &Partition,
        shape: &mut Vec<u32>,
        fill: &mut Vec<Vec<u32>>,
        out: &mut BTreeMap<Partition, u64>,
    ) {
        if left == 0 {
            place(label + 1, mu, shape, fill, out);
            return;
        }
        if row > before.len() {
            return;
        }
        if row == shape.len() {
            shape.push(0);
            fill.push(Vec::new());
        }
        let current = before.get(row).copied().unwrap_or(0);
        let cap = if row == 0 {
            left
        } else {
            left.min(before[row - 1] - current)
        };
        for k in (0..=cap).rev() {
            shape[row] = current + k;
            fill[row].extend(std::iter::repeat_n(label as u32 + 1, k as usize));
            strips(row + 1, left - k, label, before, mu, shape, fill, out);
            let len = fill[row].len() - k as usize;
            fill[row].truncate(len);
        }
        shape[row] = current;
        if current == 0 && row + 1 == shape.len() {
            shape.pop();
            fill.pop();
        }
    }

    fn is_lattice(fill: &[Vec<u32>]) -> bool {
        let mut counts = vec![0u32; 64];
        for row in fill {
            for &l in row.iter().rev() {
                let l = l as usize;
                counts[l] += 1;
                if l > 1 && counts[l] > counts[l - 1] {
                    return false;
                }
            }
        }
        true
    }

    let mut out = BTreeMap::new();
    let mut shape = lambda.parts().to_vec();
    let mut fill = vec![Vec::new(); shape.len()];
    place(0, mu, &mut shape, &mut fill, &mut out);
    out
}

/// Partitions obtained from `λ` by adding one box.
pub fn add_box(lambda: &Partition) -> Vec<Partition> {
    let parts = lambda.parts();
    (0..=parts.len())
        .filter(|&i| i == 0 || parts[i - 1] > lambda.part(i))
        .map(|i| {
            let mut p = parts.to_vec();
            if i == p.len() {
                p.push(1);
            } else {
                p[i] += 1;
            }
            Partition::new(p).expect("adding a corner keeps a partition")
        })
        .collect()
}

/// Image of `s_ν` in the quantum cohomology of `Gr(n, r)`, as `(sign, q-power, partition)`.
///
/// Classes with more than `r` rows vanish. A class wider than `n - r` loses one
/// `n`-rim hook: the largest shifted part `ν_1 + r - 1` drops by `n` and is re-sorted,
/// the sign being `(-1)^(r - height)`. Anything still outside the box is sent to zero.
pub fn rim_hook_reduce(nu: &Partition, n: usize, r: usize) -> Option<(i64, u32, Partition)> {
    if nu.len() > r {
        return None;
    }
    if nu.part(0) as usize <= n - r {
        return Some((1, 0, nu.clone()));
    }
    let mut beta: Vec<i64> = (0..r)
        .map(|j| nu.part(j) as i64 + (r - 1 - j) as i64)
        .collect();
    beta[0] -= n as i64;
    if beta[0] < 0 || beta[1..].contains(&beta[0]) {
        return None;
    }
    let moved = beta[1..].iter().filter(|&&b| b > beta[0]).count();
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let parts: Vec<u32> = (0..r)
        .map(|j| (beta[j] - (r - 1 - j) as i64) as u32)
        .collect();
    let reduced = Partition::new(parts).ok()?;
    if reduced.part(0) as usize > n - r {
        return None;
    }
    let sign = if (r - 1 + moved).is_multiple_of(2) {
        1
    } else {
        -1
    };
    Some((sign, 1, reduced))
}

/// `s_□ * s_λ` in the quantum cohomology of `Gr(n, r)`.
pub fn quantum_pieri_gr(lambda: &Partition, n: usize, r: usize) -> Result<ClassExpr> {
    if r == 0 || r >= n {
        return Err(Error::InvalidShape(format!("Gr({n},{r})")));
    }
    if lambda.len() > r || lambda.part(0) as usize > n - r {
        return Err(Error::OutsideBox {
            partition: lambda.to_string(),
            rows: r,
            cols: n - r,
        });
    }
    let mut out = ClassExpr::new(1);
    for nu in add_box(lambda) {
        if let Some((sign, qpow, reduced)) = rim_hook_reduce(&nu, n, r) {
            out.add_term(sign, vec![qpow], PartitionTuple(vec![reduced]));
        }
    }
    Ok(out)
}

/// `F^i_λ = s^i_□ * s^i_λ` for a frozen rectangle `λ` at level `i`.
///
/// With `r = r_i`, `c = r_{i-1} - r_i` and `r' = r_{i+1}`:
/// - `λ = (a^r)`, `a < c`: `s^i_{(a+1, a^{r-1})}`;
/// - `λ = (c^a)`, `1 <= a < r`: `s^i_{(c^a, 1)} + s^{i-1,i}_{□,λ}`, plus
///   `q_i s^{i,i+1}_{((c-1)^{a-1}), (1^{a-r+r'})}` once `a >= r - r'`;
/// - `λ = (c^r)`: `s^{i-1,i}_{□,λ} + q_i s^{i,i+1}_{((c-1)^{r-1}), (1^{r'})}`.
///
/// Classes touching level `0` or with a nonempty level-`ρ+1` entry are zero.
pub fn flag_pieri(level: usize, lambda: &Partition, shape: &FlagShape) -> Result<ClassExpr> {
    shape.check_level(level)?;
    let b = shape.level_box(level);
    if !is_frozen(lambda, b) {
        return Err(Error::NotFrozen {
            partition: lambda.to_string(),
            rows: b.rows,
            cols: b.cols,
        });
    }
    let rho = shape.rho();
    let (r, c, rn) = (b.rows, b.cols, shape.r(level + 1));
    let mut out = ClassExpr::new(rho);
    let no_q = vec![0; rho];
    let mut q_i = no_q.clone();
    q_i[level - 1] = 1;

    let cross = |out: &mut ClassExpr| {
        if level > 1 {
            let mut t = PartitionTuple::single(rho, level, lambda.clone());
            t.0[level - 2] = Partition::column(1);
            out.add_term(1, no_q.clone(), t);
        }
    };
    let quantum = |out: &mut ClassExpr, a: usize| {
        let upper = Partition::rectangle(a - 1, c - 1);
        let lower = Partition::column(a - (r - rn));
        let mut t = PartitionTuple::single(rho, level, upper);
        if level < rho {
            t.0[level] = lower;
        } else if !lower.is_empty() {
            return;
        }
        out.add_term(1, q_i.clone(), t);
    };

    let full = Partition::rectangle(r, c);
    if *lambda == full {
        cross(&mut out);
        quantum(&mut out, r);
    } else if lambda.len() == r || lambda.is_empty() {
        let a = lambda.part(0);
        let mut parts = vec![a; r];
        parts[0] = a + 1;
        let nu = Partition::new(parts).expect("valid");
        out.add_term(1, no_q.clone(), PartitionTuple::single(rho, level, nu));
    } else {
        let a = lambda.len();
        let mut parts = vec![c as u32; a];
        parts.push(1);
        let nu = Partition::new(parts).expect("valid");
        out.add_term(1, no_q.clone(), PartitionTuple::single(rho, level, nu));
        cross(&mut out);
        if a >= r - rn {
            quantum(&mut out, a);
        }
    }
    Ok(out)
}

/// One summand `coeff · q^e · s_μ` of a [`ClassExpr`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTerm {
    pub coeff: i64,
    pub q: Vec<u32>,
    pub tuple: PartitionTuple,
}

impl ClassTerm {
    pub fn q_degree(&self) -> u32 {
        self.q.iter().sum()
    }
}

/// A formal integer combination of `q`-monomials times Schubert classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassExpr {
    rho: usize,
    terms: BTreeMap<(u32, Vec<u32>, PartitionTuple), i64>,
}

impl ClassExpr {
    pub fn new(rho: usize) -> Self {
        ClassExpr {
            rho,
            terms: BTreeMap::new(),
        }
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn add_term(&mut self, coeff: i64, q: Vec<u32>, tuple: PartitionTuple) {
        assert_eq!(q.len(), self.rho, "q exponent length");
        assert_eq!(tuple.0.len(), self.rho, "tuple length");
        let key = (q.iter().sum(), q, tuple);
        let c = self.terms.entry(key.clone()).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&key);
        }
    }

    /// Terms ordered by `q`-degree, then exponent vector, then index.
    pub fn terms(&self) -> impl Iterator<Item = ClassTerm> + '_ {
        self.terms.iter().map(|((_, q, t), c)| ClassTerm {
            coeff: *c,
            q: q.clone(),
            tuple: t.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|t| {
                    let mut obj = json!({ "q": t.q, "tuple": t.tuple });
                    if t.coeff != 1 {
                        obj["coeff"] = json!(t.coeff);
                    }
                    obj
                })
                .collect(),
        )
    }

    pub fn from_json_value(value: &Value, rho: usize) -> Result<Self> {
        let bad = |m: &str| Error::Json(m.to_string());
        let mut out = ClassExpr::new(rho);
        for item in value.as_array().ok_or_else(|| bad("expected an array"))? {
            let q: Vec<u32> = serde_json::from_value(item["q"].clone())?;
            let tuple: PartitionTuple = serde_json::from_value(item["tuple"].clone())?;
            let coeff = item
                .get("coeff")
                .map_or(Some(1), Value::as_i64)
                .ok_or_else(|| bad("coeff"))?;
            if q.len() != rho || tuple.0.len() != rho {
                return Err(bad("length mismatch"));
            }
            out.add_term(coeff, q, tuple);
        }
        Ok(out)
    }
}

fn class_text(tuple: &PartitionTuple) -> Option<String> {
    let support = tuple.support();
    match support.as_slice() {
        [] => None,
        [i] => Some(format!("s{i}{}", tuple.at(*i).bracketed())),
        levels => {
            let sep = if levels.iter().any(|&l| l > 9) {
                ","
            } else {
                ""
            };
            let names = levels
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(sep);
            let parts = levels
                .iter()
                .map(|&l| format!("({})", tuple.at(l).comma_separated()))
                .collect::<Vec<_>>()
                .join(",");
            Some(format!("s{names}[{parts}]"))
        }
    }
}

fn q_text(q: &[u32]) -> Option<String> {
    let factors: Vec<String> = q
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("q{}", i + 1)
            } else {
                format!("q{}^{e}", i + 1)
            }
        })
        .collect();
    (!factors.is_empty()).then(|| factors.join("*"))
}

/// Renders as e.g. `s1[2,2,2,1] + q1*s12[(1,1),(1)]`.
impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms().enumerate() {
            let magnitude = t.coeff.unsigned_abs();
            match (k, t.coeff < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if magnitude != 1 {
                factors.push(magnitude.to_string());
            }
            factors.extend(q_text(&t.q));
            factors.extend(class_text(&t.tuple));
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
