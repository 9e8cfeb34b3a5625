//! Critical points of `W_P` in complex floating point.
//!
//! Candidates come from closed-form constructions (Grassmannian roots of unity, the
//! `C_P` family of `Fl(n;2,1)`) realized as Vandermonde matrices, or from multistart
//! Newton iteration in the gauge chart `[I | A_i]` of every factor. Criticality is
//! measured with Richardson-extrapolated central differences along gauge coordinates.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::combinat::{binomial, frozen_in_box, partitions_in_box, FlagShape, Partition};
use crate::error::{Error, Result};
use crate::exactalg::{solve, CompiledExpr, LaurentExpr, VarId, VarIndex};
use crate::geometry::{gauge_coords, FactorMatrix, PluckerVector, YPoint};
use crate::mirror::build_wp;
use crate::schubert::schur_eval;

/// Default tolerance for calling a point critical.
pub const GRADIENT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Source {
    GuSharpe,
    Karp,
    CP,
    Newton,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalCandidate {
    /// `x[i-1][j-1] = x_{ij}`; empty for Newton points.
    pub x: Vec<Vec<Complex64>>,
    pub q: Vec<Complex64>,
    pub realization: YPoint<Complex64>,
    pub source: Source,
}

fn c_json(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

impl CriticalCandidate {
    pub fn shape(&self) -> &FlagShape {
        self.realization.shape()
    }

    pub fn pluckers(&self) -> Result<PluckerVector<Complex64>> {
        self.realization.pluckers()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "source": self.source,
            "x": self.x.iter().map(|l| l.iter().map(c_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "q": self.q.iter().map(c_json).collect::<Vec<_>>(),
            "pluckers": self.pluckers().map(|p| p.to_json_value()).unwrap_or(Value::Null),
        })
    }
}

/// `Π_k (x_{ij} - x_{i-1,k}) - (-1)^{r_i - 1} q_i Π_k (x_{i+1,k} - x_{ij})` for every
/// `(i, j)`, with `x_{0k} = 0` and no factors past level `ρ`.
pub fn gu_sharpe_system(shape: &FlagShape) -> Vec<((usize, usize), LaurentExpr)> {
    let x = |i: usize, j: usize| LaurentExpr::var(VarId::chern(i, j));
    let mut out = Vec::new();
    for i in shape.levels() {
        for j in 1..=shape.r(i) {
            let lhs = (1..=shape.r(i - 1)).fold(LaurentExpr::one(), |acc, k| {
                let below = if i == 1 {
                    LaurentExpr::zero()
                } else {
                    x(i - 1, k)
                };
                &acc * &(&x(i, j) - &below)
            });
            let rhs = (1..=shape.r(i + 1)).fold(LaurentExpr::var(VarId::q(i)), |acc, k| {
                &acc * &(&x(i + 1, k) - &x(i, j))
            });
            let sign = if shape.r(i) % 2 == 1 { 1 } else { -1 };
            out.push((
                (i, j),
                &lhs - &rhs.scale(&crate::exactalg::rational(sign, 1)),
            ));
        }
    }
    out
}

/// Largest absolute value of the Gu–Sharpe equations at `x`.
pub fn gu_sharpe_residual(shape: &FlagShape, x: &[Vec<Complex64>], q: &[Complex64]) -> Result<f64> {
    let assignment = |v: &VarId| match v {
        VarId::ChernRoot { level, index } => {
            x.get(level - 1).and_then(|l| l.get(index - 1)).copied()
        }
        VarId::Quantum(i) => q.get(i - 1).copied(),
        _ => None,
    };
    let mut worst: f64 = 0.0;
    for (_, eq) in gu_sharpe_system(shape) {
        let v: Complex64 = eq.evaluate(&assignment)?;
        worst = worst.max(v.norm());
    }
    Ok(worst)
}

fn roots_of(c: Complex64, n: usize) -> Vec<Complex64> {
    let base = c.powf(1.0 / n as f64);
    (0..n)
        .map(|k| base * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

fn index_subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    (r - 1..n)
        .flat_map(|last| {
            index_subsets(last, r - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// All `r`-element subsets of the roots of `x^n = sign · q`, as Vandermonde points of `Gr(n, r)`.
pub fn karp_points_with_sign(
    n: usize,
    r: usize,
    q: Complex64,
    sign: i32,
) -> Result<Vec<CriticalCandidate>> {
    let shape = FlagShape::grassmannian(n, r)?;
    if q.norm() == 0.0 {
        return Err(Error::DegenerateParameters("q must be nonzero".into()));
    }
    let roots = roots_of(q * sign as f64, n);
    index_subsets(n, r)
        .into_iter()
        .map(|idx| {
            let xs: Vec<Complex64> = idx.iter().map(|&k| roots[k]).collect();
            let m = FactorMatrix::vandermonde(1, &xs, n)?;
            Ok(CriticalCandidate {
                x: vec![xs],
                q: vec![q],
                realization: YPoint::new(&shape, vec![m])?,
                source: Source::Karp,
            })
        })
        .collect()
}

/// The sign `σ` in `x^n = σ q` for which the Vandermonde points are critical, decided
/// by comparing gradients of both choices.
pub fn karp_sign(n: usize, r: usize, q: Complex64) -> Result<i32> {
    let shape = FlagShape::grassmannian(n, r)?;
    let score = |sign: i32| -> Result<f64> {
        let c = karp_points_with_sign(n, r, q, sign)?;
        Ok(grad_wp(&c[0], &shape)?.norm)
    };
    let plus = score(1)?;
    let minus = score(-1)?;
    Ok(if plus <= minus { 1 } else { -1 })
}

/// The `binomial(n, r)` Grassmannian critical points, with the sign resolved by [`karp_sign`].
pub fn karp_points(n: usize, r: usize, q: Complex64) -> Result<Vec<CriticalCandidate>> {
    let sign = karp_sign(n, r, q)?;
    karp_points_with_sign(n, r, q, sign)
}

/// `h_{n-1}(x, y)` as a polynomial in `e1 = x + y` with `e2 = xy` fixed, constant term first.
fn complete_in_elementary(n: usize, e2: Complex64) -> Vec<Complex64> {
    // h_k = e1 h_{k-1} - e2 h_{k-2}
    let mut prev: Vec<Complex64> = vec![Complex64::new(1.0, 0.0)];
    let mut prev2: Vec<Complex64> = Vec::new();
    for _ in 1..n {
        let mut next = vec![Complex64::new(0.0, 0.0); prev.len() + 1];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] += c;
        }
        for (d, c) in prev2.iter().enumerate() {
            next[d] -= e2 * c;
        }
        prev2 = prev;
        prev = next;
    }
    prev
}

fn poly_eval(coeffs: &[Complex64], t: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        d = d * t + v;
        v = v * t + c;
    }
    (v, d)
}

/// Roots of `Σ coeffs[k] t^k` by Aberth–Ehrlich iteration, refined by Newton steps.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return Err(Error::DegenerateParameters(
            "leading coefficient vanishes".into(),
        ));
    }
    // Cauchy bound on root moduli.
    let radius = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / deg as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for k in 0..deg {
            let (v, d) = poly_eval(coeffs, z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if w.re.is_finite() && w.im.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for root in &mut z {
        for _ in 0..3 {
            let (v, d) = poly_eval(coeffs, *root);
            if d.norm() == 0.0 {
                break;
            }
            *root -= v / d;
        }
    }
    let worst = z
        .iter()
        .map(|r| poly_eval(coeffs, *r).0.norm() / lead.norm() / r.norm().max(1.0).powi(deg as i32))
        .fold(0.0, f64::max);
    if worst.is_nan() || worst >= 1e-10 {
        return Err(Error::DegenerateParameters(
            "root iteration did not converge".into(),
        ));
    }
    Ok(z)
}

/// The `2·binomial(n, 2)` points of `C_P` for `Fl(n; 2, 1)`.
///
/// Eliminating `x_21` from the Gu–Sharpe system leaves `e2^n = q_1^2 q_2` and
/// `h_{n-1}(x_11, x_12) = q_1`; then `x_21 = x_11 - x_11^n / q_1`. The realization is
/// `Vandermonde(x_11, x_12)` on level 1 and `p^2_□ = q_2 / x_21` on level 2.
pub fn cp_points(n: usize, q1: Complex64, q2: Complex64) -> Result<Vec<CriticalCandidate>> {
    let shape = FlagShape::new(n, vec![2, 1])?;
    if q1.norm() == 0.0 || q2.norm() == 0.0 {
        return Err(Error::DegenerateParameters("q1 q2 must be nonzero".into()));
    }
    let lhs = q1 * q1;
    let rhs = q2.powu(n as u32 - 1);
    if (lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()) {
        return Err(Error::DegenerateParameters(format!(
            "q1^2 = q2^{} makes C_P undefined",
            n - 1
        )));
    }
    let expected = 2 * binomial(n, 2) as usize;
    let mut out = Vec::new();
    for e2 in roots_of(q1 * q1 * q2, n) {
        let mut h = complete_in_elementary(n, e2);
        h[0] -= q1;
        for e1 in polynomial_roots(&h)? {
            let disc = (e1 * e1 - e2 * 4.0).sqrt();
            let x11 = (e1 + disc) / 2.0;
            let x12 = (e1 - disc) / 2.0;
            if (x11 - x12).norm() < 1e-9 {
                continue;
            }
            let x21 = x11 - x11.powu(n as u32) / q1;
            if x21.norm() < 1e-12 {
                continue;
            }
            let level1 = FactorMatrix::vandermonde(1, &[x11, x12], n)?;
            let level2 = FactorMatrix::new(2, vec![vec![Complex64::new(1.0, 0.0), q2 / x21]])?;
            out.push(CriticalCandidate {
                x: vec![vec![x11, x12], vec![x21]],
                q: vec![q1, q2],
                realization: YPoint::new(&shape, vec![level1, level2])?,
                source: Source::CP,
            });
        }
    }
    if out.len() < expected {
        return Err(Error::SolverUnderCount {
            expected,
            found: out.len(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientReport {
    /// Largest extrapolated partial derivative.
    pub norm: f64,
    /// Largest plain central difference at steps `h` and `h/2`.
    pub norm_h: f64,
    pub norm_h2: f64,
    pub h: f64,
    /// Largest difference between the step-`h` and step-`h/2` estimates and the
    /// extrapolated value, respectively.
    pub error_h: f64,
    pub error_h2: f64,
}

/// Default finite-difference step.
pub const STEP: f64 = 1e-3;

fn compiled_wp(shape: &FlagShape) -> (CompiledExpr<Complex64>, VarIndex) {
    let mut index = VarIndex::default();
    let wp = CompiledExpr::compile(&build_wp(shape).to_laurent(), &mut index);
    (wp, index)
}

fn assignment_values(
    index: &VarIndex,
    pluckers: &PluckerVector<Complex64>,
    q: &[Complex64],
) -> Result<Vec<Complex64>> {
    index
        .vars()
        .iter()
        .map(|v| match v {
            VarId::Plucker { level, partition } => pluckers
                .get(*level, partition)
                .copied()
                .ok_or_else(|| Error::UnassignedVariable(v.to_string())),
            VarId::Quantum(i) => q
                .get(i - 1)
                .copied()
                .ok_or_else(|| Error::UnassignedVariable(v.to_string())),
            _ => Err(Error::UnassignedVariable(v.to_string())),
        })
        .collect()
}

fn check_open(shape: &FlagShape, p: &PluckerVector<Complex64>) -> Result<()> {
    for i in shape.levels() {
        for l in frozen_in_box(shape.level_box(i)) {
            let v = p.get(i, &l).map_or(0.0, |z| z.norm());
            if v < 1e-10 {
                return Err(Error::OutsideOpenLocus(format!("|p^{i}_{l}| = {v:e}")));
            }
        }
    }
    Ok(())
}

/// Central differences of `W_P` along the gauge coordinates of each factor, with
/// Richardson extrapolation over steps `h` and `h/2`.
pub fn grad_wp_at(point: &YPoint<Complex64>, q: &[Complex64], h: f64) -> Result<GradientReport> {
    let shape = point.shape();
    let (wp, index) = compiled_wp(shape);
    check_open(shape, &point.pluckers()?)?;
    let charts = point
        .factors()
        .iter()
        .map(gauge_coords)
        .collect::<Result<Vec<_>>>()?;
    let value_at = |level: usize, free: &[Complex64]| -> Result<Complex64> {
        let mut factors = point.factors().to_vec();
        factors[level] = charts[level].reconstruct(free)?;
        let p = YPoint::new(shape, factors)?.pluckers()?;
        Ok(wp.eval(&assignment_values(&index, &p, q)?))
    };
    let mut report = GradientReport {
        norm: 0.0,
        norm_h: 0.0,
        norm_h2: 0.0,
        h,
        error_h: 0.0,
        error_h2: 0.0,
    };
    for (level, chart) in charts.iter().enumerate() {
        let base = chart.free().to_vec();
        for k in 0..base.len() {
            let step = h * base[k].norm().max(1.0);
            let central = |s: f64| -> Result<Complex64> {
                let mut plus = base.clone();
                let mut minus = base.clone();
                plus[k] += s;
                minus[k] -= s;
                Ok((value_at(level, &plus)? - value_at(level, &minus)?) / (2.0 * s))
            };
            let d1 = central(step)?;
            let d2 = central(step / 2.0)?;
            let rich = (d2 * 4.0 - d1) / 3.0;
            report.norm = report.norm.max(rich.norm());
            report.norm_h = report.norm_h.max(d1.norm());
            report.norm_h2 = report.norm_h2.max(d2.norm());
            report.error_h = report.error_h.max((d1 - rich).norm());
            report.error_h2 = report.error_h2.max((d2 - rich).norm());
        }
    }
    Ok(report)
}

pub fn grad_wp(candidate: &CriticalCandidate, shape: &FlagShape) -> Result<GradientReport> {
    if candidate.shape() != shape {
        return Err(Error::InvalidShape(format!(
            "candidate lives on {}, not {shape}",
            candidate.shape()
        )));
    }
    grad_wp_at(&candidate.realization, &candidate.q, STEP)
}

fn symbolic_det(m: &[Vec<LaurentExpr>]) -> LaurentExpr {
    match m.len() {
        0 => LaurentExpr::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = LaurentExpr::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<LaurentExpr>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &symbolic_det(&minor);
                acc = if col % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// `W_P` as a function of the gauge entries of `[I | A_i]`, with analytic first and
/// second derivatives by the chain rule through the Plücker minors.
pub struct GaugeModel {
    shape: FlagShape,
    gauge: Vec<VarId>,
    plucker_vars: Vec<VarId>,
    /// Per Plücker variable: value, gradient and Hessian entries in gauge coordinates.
    minors: Vec<CompiledExpr<Complex64>>,
    minor_grad: Vec<Vec<(usize, CompiledExpr<Complex64>)>>,
    minor_hess: Vec<Vec<(usize, usize, CompiledExpr<Complex64>)>>,
    /// `∂W/∂p` and `∂²W/∂p∂p'` over the Plücker variables, `q` fixed.
    dw: Vec<CompiledExpr<Complex64>>,
    d2w: Vec<Vec<(usize, CompiledExpr<Complex64>)>>,
    w: CompiledExpr<Complex64>,
    frozen: Vec<usize>,
}

impl GaugeModel {
    pub fn new(shape: &FlagShape, q: &[Complex64]) -> Result<Self> {
        if q.len() != shape.rho() {
            return Err(Error::InvalidShape(format!(
                "{shape} needs {} quantum parameters, got {}",
                shape.rho(),
                q.len()
            )));
        }
        let mut gauge = Vec::new();
        let mut minor_exprs: BTreeMap<VarId, LaurentExpr> = BTreeMap::new();
        for i in shape.levels() {
            let b = shape.level_box(i);
            let cols = b.rows + b.cols;
            let matrix: Vec<Vec<LaurentExpr>> = (0..b.rows)
                .map(|row| {
                    (0..cols)
                        .map(|c| {
                            if c < b.rows {
                                if c == row {
                                    LaurentExpr::one()
                                } else {
                                    LaurentExpr::zero()
                                }
                            } else {
                                LaurentExpr::var(VarId::Gauge {
                                    level: i,
                                    row: row + 1,
                                    col: c - b.rows + 1,
                                })
                            }
                        })
                        .collect()
                })
                .collect();
            for row in 1..=b.rows {
                for col in 1..=b.cols {
                    gauge.push(VarId::Gauge { level: i, row, col });
                }
            }
            for lambda in partitions_in_box(b) {
                let cols: Vec<usize> = crate::combinat::partition_to_columns(&lambda, b)?
                    .into_iter()
                    .map(|c| c - 1)
                    .collect();
                let sub: Vec<Vec<LaurentExpr>> = matrix
                    .iter()
                    .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                    .collect();
                minor_exprs.insert(VarId::plucker(i, lambda), symbolic_det(&sub));
            }
        }

        let wp = build_wp(shape).to_laurent();
        let plucker_vars: Vec<VarId> = minor_exprs.keys().cloned().collect();

        let mut gindex = VarIndex::new(gauge.iter().cloned());
        let mut minors = Vec::new();
        let mut minor_grad = Vec::new();
        let mut minor_hess = Vec::new();
        for v in &plucker_vars {
            let e = &minor_exprs[v];
            minors.push(CompiledExpr::compile(e, &mut gindex));
            let mut grads = Vec::new();
            let mut hess = Vec::new();
            for (a, ga) in gauge.iter().enumerate() {
                let da = e.differentiate(ga);
                if da.is_zero() {
                    continue;
                }
                for (b, gb) in gauge.iter().enumerate().skip(a) {
                    let dab = da.differentiate(gb);
                    if !dab.is_zero() {
                        hess.push((a, b, CompiledExpr::compile(&dab, &mut gindex)));
                    }
                }
                grads.push((a, CompiledExpr::compile(&da, &mut gindex)));
            }
            minor_grad.push(grads);
            minor_hess.push(hess);
        }
        assert_eq!(
            gindex.len(),
            gauge.len(),
            "minors only involve gauge entries"
        );

        // Slots: Plücker variables first, then q.
        let mut pindex = VarIndex::new(
            plucker_vars
                .iter()
                .cloned()
                .chain(shape.levels().map(VarId::q)),
        );
        let w = CompiledExpr::compile(&wp, &mut pindex);
        let mut dw = Vec::new();
        let mut d2w = Vec::new();
        for va in &plucker_vars {
            let da = wp.differentiate(va);
            let mut row = Vec::new();
            for (b, vb) in plucker_vars.iter().enumerate() {
                let dab = da.differentiate(vb);
                if !dab.is_zero() {
                    row.push((b, CompiledExpr::compile(&dab, &mut pindex)));
                }
            }
            dw.push(CompiledExpr::compile(&da, &mut pindex));
            d2w.push(row);
        }
        assert_eq!(pindex.len(), plucker_vars.len() + shape.rho());

        let frozen = plucker_vars
            .iter()
            .enumerate()
            .filter(|(_, v)| match v {
                VarId::Plucker { level, partition } => {
                    crate::combinat::is_frozen(partition, shape.level_box(*level))
                }
                _ => false,
            })
            .map(|(k, _)| k)
            .collect();

        Ok(GaugeModel {
            shape: shape.clone(),
            gauge,
            plucker_vars,
            minors,
            minor_grad,
            minor_hess,
            dw,
            d2w,
            w,
            frozen,
        })
    }

    pub fn dimension(&self) -> usize {
        self.gauge.len()
    }

    fn plucker_slots(&self, a: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
        self.minors
            .iter()
            .map(|m| m.eval(a))
            .chain(q.iter().copied())
            .collect()
    }

    pub fn value(&self, a: &[Complex64], q: &[Complex64]) -> Complex64 {
        self.w.eval(&self.plucker_slots(a, q))
    }

    /// Gradient and Hessian of `W_P` in gauge coordinates.
    pub fn derivatives(
        &self,
        a: &[Complex64],
        q: &[Complex64],
    ) -> (Vec<Complex64>, Vec<Vec<Complex64>>) {
        let d = self.gauge.len();
        let slots = self.plucker_slots(a, q);
        let dw: Vec<Complex64> = self.dw.iter().map(|e| e.eval(&slots)).collect();
        let dp: Vec<Vec<Complex64>> = self
            .minor_grad
            .iter()
            .map(|g| {
                let mut row = vec![Complex64::new(0.0, 0.0); d];
                for (k, e) in g {
                    row[*k] = e.eval(a);
                }
                row
            })
            .collect();
        let mut grad = vec![Complex64::new(0.0, 0.0); d];
        let mut hess = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for (v, dwv) in dw.iter().enumerate() {
            for k in 0..d {
                grad[k] += dwv * dp[v][k];
            }
            for (k, l, e) in &self.minor_hess[v] {
                let val = dwv * e.eval(a);
                hess[*k][*l] += val;
                if k != l {
                    hess[*l][*k] += val;
                }
            }
            for (w, e) in &self.d2w[v] {
                let c = e.eval(&slots);
                for k in 0..d {
                    if dp[v][k].norm() == 0.0 {
                        continue;
                    }
                    for l in 0..d {
                        hess[k][l] += c * dp[v][k] * dp[*w][l];
                    }
                }
            }
        }
        (grad, hess)
    }

    /// The Plücker vector of the gauge point `a`.
    pub fn pluckers(&self, a: &[Complex64]) -> Result<PluckerVector<Complex64>> {
        self.realize(a)?.pluckers()
    }

    pub fn realize(&self, a: &[Complex64]) -> Result<YPoint<Complex64>> {
        let mut offset = 0;
        let mut factors = Vec::new();
        for i in self.shape.levels() {
            let b = self.shape.level_box(i);
            let rows = (0..b.rows)
                .map(|row| {
                    (0..b.rows + b.cols)
                        .map(|c| {
                            if c < b.rows {
                                Complex64::new(if c == row { 1.0 } else { 0.0 }, 0.0)
                            } else {
                                a[offset + row * b.cols + (c - b.rows)]
                            }
                        })
                        .collect()
                })
                .collect();
            factors.push(FactorMatrix::new(i, rows)?);
            offset += b.rows * b.cols;
        }
        YPoint::new(&self.shape, factors)
    }

    fn frozen_floor(&self, a: &[Complex64]) -> f64 {
        self.frozen
            .iter()
            .map(|&k| self.minors[k].eval(a).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn plucker_vars(&self) -> &[VarId] {
        &self.plucker_vars
    }
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Damped Newton iteration from `start`; `None` when it diverges, stalls or leaves `Y°`.
///
/// Steps are halved until the gradient norm decreases, at most ten times; the iteration
/// stops when no halving helps.
pub fn newton(
    model: &GaugeModel,
    q: &[Complex64],
    start: Vec<Complex64>,
) -> Option<Vec<Complex64>> {
    let mut a = start;
    let (mut g, mut h) = model.derivatives(&a, q);
    let mut gnorm = max_norm(&g);
    for _ in 0..200 {
        if gnorm < 1e-12 {
            break;
        }
        let rhs: Vec<Vec<Complex64>> = g.iter().map(|z| vec![-z]).collect();
        let step: Vec<Complex64> = solve(&h, &rhs)?.into_iter().map(|r| r[0]).collect();
        let size = max_norm(&step);
        let scale = max_norm(&a).max(1.0);
        let mut t = if size > scale { scale / size } else { 1.0 };
        let mut accepted = None;
        for _ in 0..10 {
            let trial: Vec<Complex64> = a.iter().zip(&step).map(|(x, s)| x + s * t).collect();
            if model.frozen_floor(&trial) >= 1e-8 {
                let (tg, th) = model.derivatives(&trial, q);
                let tn = max_norm(&tg);
                if tn < gnorm {
                    accepted = Some((trial, tg, th, tn));
                    break;
                }
            }
            t /= 2.0;
        }
        let Some((na, ng, nh, nn)) = accepted else {
            break;
        };
        if max_norm(&na) > 1e6 {
            return None;
        }
        a = na;
        g = ng;
        h = nh;
        gnorm = nn;
    }
    (gnorm < 1e-9).then_some(a)
}

/// Predictor-corrector steps allowed per path.
pub const MAX_TRACK_STEPS: usize = 100;

/// Tracks `∇W(a) = (1 - t) ∇W(start)` from `t = 0` to `t = 1` with an Euler predictor and
/// Newton corrector, then polishes with [`newton`].
pub fn track(model: &GaugeModel, q: &[Complex64], start: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let (g0, _) = model.derivatives(&start, q);
    let mut a = start;
    let mut t: f64 = 0.0;
    let mut dt: f64 = 0.05;
    for _ in 0..MAX_TRACK_STEPS {
        if t >= 1.0 {
            break;
        }
        let t1 = (t + dt).min(1.0);
        let (_, h) = model.derivatives(&a, q);
        let rhs: Vec<Vec<Complex64>> = g0.iter().map(|z| vec![-z * (t1 - t)]).collect();
        let mut trial: Vec<Complex64> = a
            .iter()
            .zip(solve(&h, &rhs)?)
            .map(|(x, d)| x + d[0])
            .collect();
        let mut ok = false;
        for _ in 0..4 {
            if max_norm(&trial) > 1e6 || model.frozen_floor(&trial) < 1e-8 {
                break;
            }
            let (g, h) = model.derivatives(&trial, q);
            let rhs: Vec<Vec<Complex64>> = g
                .iter()
                .zip(&g0)
                .map(|(z, z0)| vec![-(z - z0 * (1.0 - t1))])
                .collect();
            let Some(step) = solve(&h, &rhs) else { break };
            let size = step.iter().map(|r| r[0].norm()).fold(0.0, f64::max);
            for (x, d) in trial.iter_mut().zip(&step) {
                *x += d[0];
            }
            if !size.is_finite() {
                break;
            }
            if size < 1e-9 * max_norm(&trial).max(1.0) {
                ok = true;
                break;
            }
        }
        if ok {
            a = trial;
            t = t1;
            dt = (dt * 1.5).min(0.2);
        } else {
            dt /= 2.0;
            if dt < 1e-7 {
                return None;
            }
        }
    }
    if t < 1.0 {
        return None;
    }
    newton(model, q, a)
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalPoint {
    pub gauge: Vec<[f64; 2]>,
    pub pluckers: Value,
    pub grad_norm: f64,
    /// Number of starts that converged here.
    pub hits: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalSearch {
    pub shape: String,
    pub q: Vec<[f64; 2]>,
    pub starts: usize,
    pub seed: u64,
    pub converged: usize,
    pub count: usize,
    pub points: Vec<CriticalPoint>,
    pub note: String,
}

/// Multistart search over random complex gauge points, each tracked by [`track`]. Distinct
/// limits are merged when their Plücker vectors agree to `1e-6`. Completeness is not
/// guaranteed.
pub fn find_all_critical(
    shape: &FlagShape,
    q: &[Complex64],
    starts: usize,
    seed: u64,
) -> Result<CriticalSearch> {
    if shape.dimension() > 6 {
        return Err(Error::Unsupported(format!(
            "multistart search supports dimension <= 6, {shape} has {}",
            shape.dimension()
        )));
    }
    let model = GaugeModel::new(shape, q)?;
    let d = model.dimension();
    let limits: Vec<Vec<Complex64>> = (0..starts as u64)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let start = (0..d)
                .map(|_| {
                    let radius = (rng.gen_range(-1.0..1.5f64)).exp();
                    Complex64::from_polar(radius, rng.gen_range(0.0..2.0 * PI))
                })
                .collect();
            track(&model, q, start)
        })
        .collect();

    let mut reps: Vec<(Vec<Complex64>, PluckerVector<Complex64>, usize)> = Vec::new();
    for a in &limits {
        let p = model.pluckers(a)?;
        let scale = p.iter().map(|(_, v)| v.norm()).fold(1.0, f64::max);
        match reps
            .iter_mut()
            .find(|(_, rp, _)| rp.distance(&p) < 1e-6 * scale)
        {
            Some(rep) => rep.2 += 1,
            None => reps.push((a.clone(), p, 1)),
        }
    }
    let key = |a: &[Complex64]| -> Vec<(i64, i64)> {
        a.iter()
            .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
            .collect()
    };
    reps.sort_by_key(|(a, _, _)| key(a));
    let points = reps
        .iter()
        .map(|(a, p, hits)| {
            let (g, _) = model.derivatives(a, q);
            CriticalPoint {
                gauge: a.iter().map(|z| [z.re, z.im]).collect(),
                pluckers: p.to_json_value(),
                grad_norm: max_norm(&g),
                hits: *hits,
            }
        })
        .collect::<Vec<_>>();
    Ok(CriticalSearch {
        shape: shape.spec_string(),
        q: q.iter().map(|z| [z.re, z.im]).collect(),
        starts,
        seed,
        converged: limits.len(),
        count: points.len(),
        points,
        note: format!(
            "best effort: distinct Newton limits from {starts} random starts; \
             critical points with no basin hit are missed"
        ),
    })
}

/// Residuals of the quantum relations checked at a `C_P` point of `Fl(n; 2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    /// `q1 q2 S¹_(n-3) - (S²_□)² S¹_(n-2,n-2) + q2 S¹_(n-2,n-2)`, relative to its largest term.
    pub goal: f64,
    /// `(S²_□)² - q2 - S¹_□ S²_□ + S¹_(1,1)`, relative to its largest term.
    pub reduction: f64,
    /// Relative error of `p²_□ ∂W/∂p²_□ = q1 p¹_(n-3) p²_□ / p¹_(n-2,n-2) + p²_□ - q2 / p²_□`
    /// with the derivative taken by finite differences.
    pub display: f64,
    /// Largest Gu–Sharpe residual of the candidate.
    pub gu_sharpe: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.goal.max(self.reduction)
    }
}

fn relative(terms: &[Complex64]) -> f64 {
    let sum: Complex64 = terms.iter().sum();
    let scale = terms.iter().map(|t| t.norm()).fold(1.0, f64::max);
    sum.norm() / scale
}

/// Evaluates the identities without requiring the candidate to be critical.
pub fn identity_residuals(n: usize, candidate: &CriticalCandidate) -> Result<IdentityResiduals> {
    let shape = FlagShape::new(n, vec![2, 1])?;
    if n < 4 || candidate.x.len() != 2 || candidate.x[0].len() != 2 || candidate.x[1].len() != 1 {
        return Err(Error::InvalidShape(format!(
            "identity checks need an Fl(n;2,1) candidate with n >= 4, got {}",
            candidate.shape()
        )));
    }
    let (q1, q2) = (candidate.q[0], candidate.q[1]);
    let x1 = &candidate.x[0];
    let s2 = candidate.x[1][0];
    let s1 = |parts: Vec<u32>| -> Result<Complex64> { schur_eval(&Partition::new(parts)?, x1) };
    let m = n as u32;
    let a = s1(vec![m - 3])?;
    let b = s1(vec![m - 2, m - 2])?;
    let goal = relative(&[q1 * q2 * a, -(s2 * s2) * b, q2 * b]);
    let reduction = relative(&[s2 * s2, -q2, -s1(vec![1])? * s2, s1(vec![1, 1])?]);

    let display = display_residual(&candidate.realization, &candidate.q)?;

    Ok(IdentityResiduals {
        goal,
        reduction,
        display,
        gu_sharpe: gu_sharpe_residual(&shape, &candidate.x, &candidate.q)?,
    })
}

/// Relative error, against the largest term on the right, of
/// `p²_□ ∂W/∂p²_□ = q1 p¹_(n-3) p²_□ / p¹_(n-2,n-2) + p²_□ - q2 / p²_□` at a point of
/// `Fl(n; 2, 1)`, the derivative taken by extrapolated central differences with the
/// level-1 factor fixed.
pub fn display_residual(point: &YPoint<Complex64>, q: &[Complex64]) -> Result<f64> {
    let shape = point.shape().clone();
    let n = shape.n();
    if n < 4 || shape.ranks() != [2, 1] || q.len() != 2 {
        return Err(Error::InvalidShape(format!(
            "the p²_□ derivative display needs Fl(n;2,1) with n >= 4, got {shape}"
        )));
    }
    let p = point.pluckers()?;
    let p2 = p
        .get(2, &Partition::column(1))
        .copied()
        .ok_or_else(|| Error::UnassignedVariable("p2[1]".into()))?;
    let (wp, index) = compiled_wp(&shape);
    let at = |t: Complex64| -> Result<Complex64> {
        let level2 = FactorMatrix::new(2, vec![vec![Complex64::new(1.0, 0.0), t]])?;
        let pt = YPoint::new(&shape, vec![point.factors()[0].clone(), level2])?;
        Ok(wp.eval(&assignment_values(&index, &pt.pluckers()?, q)?))
    };
    if p2.norm() < 1e-10 {
        return Err(Error::OutsideOpenLocus(format!(
            "|p2[1]| = {:e}",
            p2.norm()
        )));
    }
    let h = STEP * p2.norm();
    let d = |s: f64| -> Result<Complex64> { Ok((at(p2 + s)? - at(p2 - s)?) / (2.0 * s)) };
    let derivative = (d(h / 2.0)? * 4.0 - d(h)?) / 3.0;
    let p1 = |parts: Vec<u32>| -> Result<Complex64> {
        p.get(1, &Partition::new(parts)?)
            .copied()
            .ok_or_else(|| Error::UnassignedVariable("p1".into()))
    };
    let m = n as u32;
    let terms = [
        q[0] * p1(vec![m - 3])? * p2 / p1(vec![m - 2, m - 2])?,
        p2,
        -q[1] / p2,
    ];
    let rhs: Complex64 = terms.iter().sum();
    let scale = terms
        .iter()
        .map(|t| t.norm())
        .fold(f64::MIN_POSITIVE, f64::max);
    Ok((p2 * derivative - rhs).norm() / scale)
}

/// As [`identity_residuals`], refusing candidates whose Gu–Sharpe residual exceeds `1e-6`.
pub fn identity_checks(n: usize, candidate: &CriticalCandidate) -> Result<IdentityResiduals> {
    let r = identity_residuals(n, candidate)?;
    if r.gu_sharpe > 1e-6 {
        return Err(Error::UntrustedCandidate(r.gu_sharpe));
    }
    Ok(r)
}
