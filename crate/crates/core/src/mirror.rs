//! The Plücker-coordinate superpotential, the ladder diagram and its labelling.
//!
//! [`build_wp`] sums `G^i_λ / p^i_λ` over the frozen rectangles of every level, where
//! `G^i_λ` is the quantum Pieri product `s^i_□ * s^i_λ` with Schubert classes replaced
//! by Plücker coordinates. The `s^{i-1,i}` terms cancel against `-r_{i+1} p^i_□` and are
//! dropped. [`pullback_wt`] evaluates the ladder superpotential on the rectangle labels
//! of [`phi_labels`]; the two agree on the open torus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde_json::{json, Value};

use crate::combinat::{
    columns_to_partition, frozen_in_box, partitions_in_box, FlagShape, Partition,
};
use crate::error::{Error, Result};
use crate::exactalg::{rational, Assignment, LaurentExpr, Monomial, RatFunc, Scalar, VarId};
use crate::schubert::{flag_pieri, ClassExpr, ClassTerm};

/// One summand `numerator / p^level_denominator` of `W_P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WpTerm {
    pub level: usize,
    pub denominator: Partition,
    pub numerator: LaurentExpr,
}

impl WpTerm {
    pub fn denominator_var(&self) -> VarId {
        VarId::plucker(self.level, self.denominator.clone())
    }

    pub fn to_laurent(&self) -> LaurentExpr {
        self.numerator
            .mul_monomial(&Monomial::from_pairs([(self.denominator_var(), -1)]))
    }
}

/// `W_P` in post-cancellation form, one term per frozen rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superpotential {
    shape: FlagShape,
    terms: Vec<WpTerm>,
}

/// `G`: a Schubert class times `q`-monomial becomes the corresponding Plücker monomial.
fn class_to_monomial(term: &ClassTerm) -> LaurentExpr {
    let qs = term
        .q
        .iter()
        .enumerate()
        .map(|(j, &e)| (VarId::q(j + 1), e as i32));
    let ps = term
        .tuple
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, mu)| !mu.is_empty())
        .map(|(j, mu)| (VarId::plucker(j + 1, mu.clone()), 1));
    LaurentExpr::term(Monomial::from_pairs(qs.chain(ps)), rational(term.coeff, 1))
}

fn is_cross_term(term: &ClassTerm, level: usize) -> bool {
    level > 1 && term.q_degree() == 0 && !term.tuple.at(level - 1).is_empty()
}

/// `F^i_λ` for every level and frozen rectangle, in term order.
pub fn pieri_products(shape: &FlagShape) -> Vec<(usize, Partition, ClassExpr)> {
    shape
        .levels()
        .flat_map(|i| {
            frozen_in_box(shape.level_box(i))
                .into_iter()
                .map(move |lambda| {
                    let f =
                        flag_pieri(i, &lambda, shape).expect("frozen rectangle at a valid level");
                    (i, lambda, f)
                })
        })
        .collect()
}

pub fn build_wp(shape: &FlagShape) -> Superpotential {
    let terms = pieri_products(shape)
        .into_iter()
        .map(|(level, lambda, f)| {
            let numerator = f
                .terms()
                .filter(|t| !is_cross_term(t, level))
                .map(|t| class_to_monomial(&t))
                .sum();
            WpTerm {
                level,
                denominator: lambda,
                numerator,
            }
        })
        .collect();
    Superpotential {
        shape: shape.clone(),
        terms,
    }
}

/// `Σ_i Σ_λ G^i_λ / p^i_λ - r_{i+1} p^i_□` before cancelling the cross terms.
pub fn wp_uncancelled(shape: &FlagShape) -> LaurentExpr {
    let mut out = LaurentExpr::zero();
    for (level, lambda, f) in pieri_products(shape) {
        let den = Monomial::from_pairs([(VarId::plucker(level, lambda), -1)]);
        for t in f.terms() {
            out = &out + &class_to_monomial(&t).mul_monomial(&den);
        }
    }
    for i in shape.levels() {
        let box_var = LaurentExpr::var(VarId::plucker(i, Partition::column(1)));
        out = &out - &box_var.scale(&rational(shape.r(i + 1) as i64, 1));
    }
    out
}

/// `deg p^i_λ = |λ|`, `deg q_i = r_{i-1} - r_{i+1}`.
pub fn grading(shape: &FlagShape) -> impl Fn(&VarId) -> i64 + Copy + '_ {
    move |v: &VarId| match v {
        VarId::Plucker { partition, .. } => partition.size() as i64,
        VarId::Quantum(i) => shape.r(i - 1) as i64 - shape.r(i + 1) as i64,
        _ => 0,
    }
}

impl Superpotential {
    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    pub fn terms(&self) -> &[WpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_laurent(&self) -> LaurentExpr {
        self.terms.iter().map(WpTerm::to_laurent).sum()
    }

    pub fn evaluate<T: Scalar, A: Assignment<T> + ?Sized>(&self, assignment: &A) -> Result<T> {
        self.to_laurent().evaluate(assignment)
    }

    /// Degrees of all monomial summands under [`grading`].
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.to_laurent().weighted_degrees(grading(&self.shape))
    }

    pub fn to_text(&self) -> String {
        let g = self.shape.is_grassmannian();
        self.terms
            .iter()
            .map(|t| {
                let den = t.denominator_var().text(g);
                match t.numerator.as_monomial() {
                    Some(_) => format!("{}/{den}", t.numerator.to_text(g)),
                    None => format!("({})/{den}", t.numerator.to_text(g)),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_latex(&self) -> String {
        let g = self.shape.is_grassmannian();
        self.terms
            .iter()
            .map(|t| {
                format!(
                    "\\frac{{{}}}{{{}}}",
                    t.numerator.to_latex(g),
                    t.denominator_var().latex(g)
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "shape": self.shape,
            "terms": self.terms.iter().map(|t| json!({
                "level": t.level,
                "denominator": t.denominator,
                "numerator": t.numerator.to_json_value(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Superpotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    /// Box at 1-based `row` (from the top) and `col` of block `block`.
    Internal {
        block: usize,
        row: usize,
        col: usize,
    },
    External(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
    pub kind: VertexKind,
}

/// The ladder quiver: blocks `r_i x (r_{i-1} - r_i)` sharing a bottom row, left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderDiagram {
    shape: FlagShape,
    vertices: Vec<Vertex>,
    arrows: Vec<(usize, usize)>,
}

pub fn build_ladder(shape: &FlagShape) -> LadderDiagram {
    let mut vertices = Vec::new();
    let mut corners = Vec::new();
    let mut x0 = 0i64;
    for i in shape.levels() {
        let b = shape.level_box(i);
        for row in 1..=b.rows {
            for col in 1..=b.cols {
                vertices.push(Vertex {
                    x: x0 + col as i64 - 1,
                    y: (b.rows - row) as i64,
                    kind: VertexKind::Internal { block: i, row, col },
                });
            }
        }
        corners.push(Vertex {
            x: x0,
            y: b.rows as i64,
            kind: VertexKind::External(i - 1),
        });
        x0 += b.cols as i64;
    }
    vertices.extend(corners);
    vertices.push(Vertex {
        x: x0,
        y: 0,
        kind: VertexKind::External(shape.rho()),
    });

    let at: BTreeMap<(i64, i64), usize> = vertices
        .iter()
        .enumerate()
        .map(|(k, v)| ((v.x, v.y), k))
        .collect();
    let mut arrows = Vec::new();
    for (k, v) in vertices.iter().enumerate() {
        for target in [(v.x + 1, v.y), (v.x, v.y - 1)] {
            if let Some(&h) = at.get(&target) {
                arrows.push((k, h));
            }
        }
    }
    arrows.sort_unstable();
    LadderDiagram {
        shape: shape.clone(),
        vertices,
        arrows,
    }
}

impl LadderDiagram {
    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn internal_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| matches!(v.kind, VertexKind::Internal { .. }))
            .count()
    }

    pub fn vertex_name(&self, k: usize) -> String {
        match self.vertices[k].kind {
            VertexKind::Internal { block, row, col } => format!("v{block}_{row}_{col}"),
            VertexKind::External(i) => format!("e{i}"),
        }
    }

    pub fn to_json_value(&self) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let mut obj = json!({ "id": k, "name": self.vertex_name(k), "x": v.x, "y": v.y });
                match v.kind {
                    VertexKind::Internal { block, row, col } => {
                        obj["kind"] = json!("internal");
                        obj["block"] = json!(block);
                        obj["row"] = json!(row);
                        obj["col"] = json!(col);
                    }
                    VertexKind::External(i) => {
                        obj["kind"] = json!("external");
                        obj["index"] = json!(i);
                    }
                }
                obj
            })
            .collect();
        json!({ "shape": self.shape, "vertices": vertices, "arrows": self.arrows })
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph ladder {{\n  label=\"{}\";\n", self.shape);
        for (k, v) in self.vertices.iter().enumerate() {
            let style = match v.kind {
                VertexKind::Internal { .. } => "circle",
                VertexKind::External(_) => "box",
            };
            out.push_str(&format!(
                "  {} [shape={style}, pos=\"{},{}!\"];\n",
                self.vertex_name(k),
                v.x,
                v.y
            ));
        }
        for &(t, h) in &self.arrows {
            out.push_str(&format!(
                "  {} -> {};\n",
                self.vertex_name(t),
                self.vertex_name(h)
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Values placed on the external vertices `0..=ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Externals {
    /// `1, q_1, q_1 q_2, …, q_1⋯q_ρ`.
    #[default]
    Cumulative,
    /// `1, q_1, q_2, …, q_ρ`.
    Plain,
}

impl Externals {
    /// `Q_i`, the value on external vertex `i`.
    pub fn external(&self, i: usize) -> Monomial {
        match self {
            Externals::Cumulative => Monomial::from_pairs((1..=i).map(|k| (VarId::q(k), 1))),
            Externals::Plain if i == 0 => Monomial::one(),
            Externals::Plain => Monomial::var(VarId::q(i)),
        }
    }

    pub fn values(&self, rho: usize) -> Vec<RatFunc> {
        (0..=rho).map(|i| RatFunc::from(self.external(i))).collect()
    }
}

impl FromStr for Externals {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cumulative" => Ok(Externals::Cumulative),
            "plain" => Ok(Externals::Plain),
            _ => Err(Error::Parse {
                input: s.to_string(),
                position: 0,
                message: "expected `cumulative` or `plain`".into(),
            }),
        }
    }
}

impl fmt::Display for Externals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Externals::Cumulative => "cumulative",
            Externals::Plain => "plain",
        })
    }
}

/// `Σ_arrows z_head / z_tail`, internal vertex `k` carrying `z_k`.
pub fn build_wt(d: &LadderDiagram, external_values: &[RatFunc]) -> Result<RatFunc> {
    let rho = d.shape.rho();
    if external_values.len() != rho + 1 {
        return Err(Error::ExternalCount {
            expected: rho + 1,
            got: external_values.len(),
        });
    }
    let value = |k: usize| match d.vertices[k].kind {
        VertexKind::Internal { .. } => RatFunc::var(VarId::Ladder(k)),
        VertexKind::External(i) => external_values[i].clone(),
    };
    let mut out = RatFunc::zero();
    for &(t, h) in &d.arrows {
        out = out.add(&value(h).div(&value(t))?);
    }
    Ok(out)
}

/// The change of variables, one monomial per vertex in diagram order.
///
/// Internal `(i, a, b)` goes to `Q_{i-1} p^i_{a×b} / p^i_{(a-1)×(b-1)}` and external `i`
/// to `Q_i`, where `Q` are the external values of the chosen convention.
pub fn phi_labels(d: &LadderDiagram, externals: Externals) -> Vec<Monomial> {
    d.vertices
        .iter()
        .map(|v| match v.kind {
            VertexKind::Internal { block, row, col } => {
                let scale = externals.external(block - 1);
                let ratio = Monomial::from_pairs([
                    (VarId::plucker(block, Partition::rectangle(row, col)), 1),
                    (
                        VarId::plucker(block, Partition::rectangle(row - 1, col - 1)),
                        -1,
                    ),
                ]);
                scale.mul(&ratio)
            }
            VertexKind::External(i) => externals.external(i),
        })
        .collect()
}

/// `φ^*(W_T)`: the ladder superpotential in rectangle Plücker coordinates.
pub fn pullback_wt(shape: &FlagShape, externals: Externals) -> Result<RatFunc> {
    let d = build_ladder(shape);
    let labels = phi_labels(&d, externals);
    let wt = build_wt(&d, &externals.values(shape.rho()))?;
    wt.substitute(|v| match v {
        VarId::Ladder(k) => Some(RatFunc::from(labels[*k].clone())),
        _ => None,
    })
}

/// Rewrites `q_i ↦ q_i / q_{i-1}`, turning an identity with cumulative external values
/// into the same identity with plain ones.
pub fn reparametrize_plain(expr: &LaurentExpr) -> Result<LaurentExpr> {
    let f = expr.substitute(|v| match v {
        VarId::Quantum(i) if *i > 1 => Some(RatFunc::from(Monomial::from_pairs([
            (VarId::q(*i), 1),
            (VarId::q(i - 1), -1),
        ]))),
        _ => None,
    })?;
    f.as_laurent().cloned().ok_or_else(|| {
        Error::Unsupported("reparametrization left a non-monomial denominator".into())
    })
}

/// Sets every `p^i_∅` to `1`.
pub fn normalize_empty(f: &RatFunc) -> Result<RatFunc> {
    f.substitute(|v| match v {
        VarId::Plucker { partition, .. } if partition.is_empty() => Some(RatFunc::one()),
        _ => None,
    })
}

/// Every Plücker coordinate of level `level` as a rational function of the rectangle
/// coordinates, by repeatedly solving three-term Plücker relations. `p_∅` is set to `1`.
pub fn rectangle_expansions(
    shape: &FlagShape,
    level: usize,
) -> Result<BTreeMap<Partition, RatFunc>> {
    let b = shape.level_box(level);
    if b.rows.min(b.cols) > 2 {
        return Err(Error::Unsupported(format!(
            "rectangle expansion needs min(r, c) <= 2, level {level} of {shape} is {}x{}",
            b.rows, b.cols
        )));
    }
    let all = partitions_in_box(b);
    let mut known: BTreeMap<Partition, RatFunc> = all
        .iter()
        .filter(|p| p.as_rectangle().is_some())
        .map(|p| {
            let f = if p.is_empty() {
                RatFunc::one()
            } else {
                RatFunc::var(VarId::plucker(level, p.clone()))
            };
            (p.clone(), f)
        })
        .collect();

    let n = b.rows + b.cols;
    let r = b.rows;
    let mut relations = Vec::new();
    if r >= 2 && n >= r + 2 {
        let cols: Vec<usize> = (1..=n).collect();
        for s in subsets(&cols, r - 2) {
            let rest: Vec<usize> = cols.iter().copied().filter(|c| !s.contains(c)).collect();
            for quad in subsets(&rest, 4) {
                let (i, j, k, l) = (quad[0], quad[1], quad[2], quad[3]);
                let name = |a: usize, b2: usize| -> Result<Partition> {
                    let mut set = s.clone();
                    set.extend([a, b2]);
                    set.sort_unstable();
                    columns_to_partition(&set, b)
                };
                // p(ik) p(jl) = p(ij) p(kl) + p(il) p(jk)
                relations.push([
                    name(i, k)?,
                    name(j, l)?,
                    name(i, j)?,
                    name(k, l)?,
                    name(i, l)?,
                    name(j, k)?,
                ]);
            }
        }
    }

    while known.len() < all.len() {
        let mut progress = false;
        for rel in &relations {
            let unknown: Vec<usize> = (0..6).filter(|&k| !known.contains_key(&rel[k])).collect();
            if unknown.len() != 1 {
                continue;
            }
            let u = unknown[0];
            let partner = u ^ 1;
            let pair = |a: usize| known[&rel[a]].mul(&known[&rel[a ^ 1]]);
            let partner_value = &known[&rel[partner]];
            if partner_value.is_zero() {
                continue;
            }
            let rhs = match u {
                0 | 1 => pair(2).add(&pair(4)),
                2 | 3 => pair(0).sub(&pair(4)),
                _ => pair(0).sub(&pair(2)),
            };
            known.insert(rel[u].clone(), rhs.div(partner_value)?);
            progress = true;
        }
        if !progress {
            return Err(Error::Unsupported(format!(
                "three-term relations do not reach every coordinate of level {level}"
            )));
        }
    }
    Ok(known)
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (idx, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[idx + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `W_P` written in rectangle coordinates with `p^i_∅ = 1`.
pub fn expand_in_rectangles(shape: &FlagShape) -> Result<RatFunc> {
    let mut images: BTreeMap<VarId, RatFunc> = BTreeMap::new();
    for i in shape.levels() {
        for (p, f) in rectangle_expansions(shape, i)? {
            images.insert(VarId::plucker(i, p), f);
        }
    }
    let wp = build_wp(shape).to_laurent();
    wp.substitute(|v| images.get(v).cloned())
}

/// `true` when every coefficient of the Laurent form is `+1`.
pub fn all_coefficients_one(expr: &LaurentExpr) -> bool {
    expr.terms().all(|(_, c)| c.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> FlagShape {
        s.parse().unwrap()
    }

    #[test]
    fn grassmannian_text() {
        let wp = build_wp(&shape("4:2"));
        assert_eq!(
            wp.to_text(),
            "p[1]/p[] + p[2,1]/p[2] + p[2,1]/p[1,1] + q*p[1]/p[2,2]"
        );
    }

    #[test]
    fn cross_terms_cancel() {
        for n in 2..=7 {
            for s in FlagShape::all_with_n(n) {
                assert_eq!(wp_uncancelled(&s), build_wp(&s).to_laurent(), "{s}");
            }
        }
    }

    #[test]
    fn small_ladders() {
        let d = build_ladder(&shape("2:1"));
        assert_eq!((d.vertices().len(), d.arrows().len()), (3, 2));
        let wt = build_wt(&d, &Externals::Cumulative.values(1)).unwrap();
        let z = LaurentExpr::var(VarId::Ladder(0));
        let q = LaurentExpr::var(VarId::q(1));
        let expected = &z + &q.mul_monomial(&Monomial::from_pairs([(VarId::Ladder(0), -1)]));
        assert_eq!(wt, RatFunc::from(expected));
        assert!(matches!(
            build_wt(&d, &[]),
            Err(Error::ExternalCount {
                expected: 2,
                got: 0
            })
        ));
    }

    #[test]
    fn grassmannian_2_1_pullback() {
        let f = pullback_wt(&shape("2:1"), Externals::Cumulative).unwrap();
        let p0 = VarId::plucker(1, Partition::empty());
        let p1 = VarId::plucker(1, Partition::column(1));
        let expected =
            LaurentExpr::from_monomial(Monomial::from_pairs([(p1.clone(), 1), (p0.clone(), -1)]))
                + LaurentExpr::from_monomial(Monomial::from_pairs([
                    (VarId::q(1), 1),
                    (p0, 1),
                    (p1, -1),
                ]));
        assert_eq!(f, RatFunc::from(expected));
    }

    #[test]
    fn externals_parse() {
        assert_eq!("plain".parse::<Externals>().unwrap(), Externals::Plain);
        assert!("other".parse::<Externals>().is_err());
    }

    #[test]
    fn expansion_limits() {
        assert!(matches!(
            expand_in_rectangles(&shape("6:3")),
            Err(Error::Unsupported(_))
        ));
        assert!(expand_in_rectangles(&shape("5:2")).is_ok());
    }
}
