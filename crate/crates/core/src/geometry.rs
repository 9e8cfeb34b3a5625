//! Points of the mirror space `Y = Π Gr(r_{i-1} - r_i, r_{i-1})` as tuples of matrices.
//!
//! The level-`i` factor is an `r_i x r_{i-1}` matrix of full rank. Its Plücker
//! coordinate `p^i_λ` is the maximal minor on the columns `J(λ)` divided by the minor on
//! `J(∅) = {1, …, r_i}`, so `p^i_∅ = 1` throughout.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::combinat::{
    frozen_in_box, partition_to_columns, partitions_in_box, BoxShape, FlagShape, Partition,
};
use crate::error::{Error, Result};
use crate::exactalg::{determinant, rational, select_columns, solve, Assignment, Scalar, VarId};

/// Retry budget of [`sample_point`].
pub const SAMPLE_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct FactorMatrix<T> {
    level: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> FactorMatrix<T> {
    pub fn new(level: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || rows.len() >= width || rows.iter().any(|r| r.len() != width) {
            return Err(Error::MatrixShape {
                level,
                rows: rows.len(),
                cols: width,
                shape: "a wide matrix".into(),
            });
        }
        Ok(FactorMatrix { level, rows })
    }

    /// Rows `(1, x, x^2, …)`; its normalized minors are Schur polynomials in `xs`.
    pub fn vandermonde(level: usize, xs: &[T], cols: usize) -> Result<Self> {
        let rows = xs
            .iter()
            .map(|x| (0..cols).map(|k| x.pow_u(k as u32)).collect())
            .collect();
        FactorMatrix::new(level, rows)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn shape(&self) -> BoxShape {
        let r = self.rows.len();
        BoxShape::new(r, self.rows[0].len() - r)
    }

    /// Unnormalized maximal minor on the columns of `λ`.
    pub fn minor(&self, lambda: &Partition) -> Result<T> {
        let cols: Vec<usize> = partition_to_columns(lambda, self.shape())?
            .into_iter()
            .map(|c| c - 1)
            .collect();
        Ok(determinant(&select_columns(&self.rows, &cols)))
    }

    /// All normalized Plücker coordinates of this factor.
    pub fn pluckers(&self) -> Result<BTreeMap<Partition, T>> {
        let base = self.minor(&Partition::empty())?;
        if base.is_zero() {
            return Err(Error::NormalizingMinorVanishes { level: self.level });
        }
        partitions_in_box(self.shape())
            .into_iter()
            .map(|lambda| {
                let m = self.minor(&lambda)?;
                Ok((lambda, m / base.clone()))
            })
            .collect()
    }

    /// `g · M` for a square `g`.
    pub fn left_multiply(&self, g: &[Vec<T>]) -> Self {
        let rows = g
            .iter()
            .map(|grow| {
                (0..self.rows[0].len())
                    .map(|c| {
                        grow.iter()
                            .zip(&self.rows)
                            .fold(T::zero(), |acc, (a, row)| acc + a.clone() * row[c].clone())
                    })
                    .collect()
            })
            .collect();
        FactorMatrix {
            level: self.level,
            rows,
        }
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }
}

/// Plücker coordinates of every level, keyed by `(level, λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PluckerVector<T> {
    values: BTreeMap<(usize, Partition), T>,
}

impl<T: Scalar> PluckerVector<T> {
    pub fn get(&self, level: usize, lambda: &Partition) -> Option<&T> {
        self.values.get(&(level, lambda.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, Partition), &T)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The Plücker values together with `q_1, …, q_ρ`.
    pub fn with_q(&self, q: &[T]) -> BTreeMap<VarId, T> {
        self.values
            .iter()
            .map(|((i, l), v)| (VarId::plucker(*i, l.clone()), v.clone()))
            .chain(
                q.iter()
                    .enumerate()
                    .map(|(k, v)| (VarId::q(k + 1), v.clone())),
            )
            .collect()
    }

    /// Whether every frozen coordinate is nonzero.
    pub fn in_open_locus(&self, shape: &FlagShape) -> bool {
        self.all_nonzero(shape, frozen_in_box)
    }

    /// Whether every rectangle coordinate is nonzero, i.e. the rectangles chart applies.
    pub fn in_rectangles_torus(&self, shape: &FlagShape) -> bool {
        self.all_nonzero(shape, |b| {
            partitions_in_box(b)
                .into_iter()
                .filter(|p| p.as_rectangle().is_some())
                .collect()
        })
    }

    fn all_nonzero<F: Fn(BoxShape) -> Vec<Partition>>(&self, shape: &FlagShape, index: F) -> bool {
        shape.levels().all(|i| {
            index(shape.level_box(i))
                .iter()
                .all(|l| self.get(i, l).is_some_and(|v| !v.is_zero()))
        })
    }

    /// Largest coordinate-wise distance to `other` over shared keys.
    pub fn distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .filter_map(|(k, v)| {
                other
                    .values
                    .get(k)
                    .map(|w| (v.clone() - w.clone()).magnitude())
            })
            .fold(0.0, f64::max)
    }

    /// Object keyed by `"i:[parts]"`.
    pub fn to_json_value(&self) -> Value {
        let map: Map<String, Value> = self
            .values
            .iter()
            .map(|((i, l), v)| (format!("{i}:{}", l.bracketed()), v.to_json()))
            .collect();
        Value::Object(map)
    }
}

impl<T: Scalar> Assignment<T> for PluckerVector<T> {
    fn value(&self, v: &VarId) -> Option<T> {
        match v {
            VarId::Plucker { level, partition } => self.get(*level, partition).cloned(),
            _ => None,
        }
    }
}

/// A point of `Y`, one factor matrix per level.
#[derive(Debug, Clone, PartialEq)]
pub struct YPoint<T> {
    shape: FlagShape,
    factors: Vec<FactorMatrix<T>>,
}

impl<T: Scalar> YPoint<T> {
    pub fn new(shape: &FlagShape, factors: Vec<FactorMatrix<T>>) -> Result<Self> {
        if factors.len() != shape.rho() {
            return Err(Error::InvalidShape(format!(
                "{shape} needs {} factors, got {}",
                shape.rho(),
                factors.len()
            )));
        }
        for (k, f) in factors.iter().enumerate() {
            let i = k + 1;
            let (rows, cols) = (f.rows.len(), f.rows[0].len());
            if f.level != i || rows != shape.r(i) || cols != shape.r(i - 1) {
                return Err(Error::MatrixShape {
                    level: i,
                    rows,
                    cols,
                    shape: shape.to_string(),
                });
            }
        }
        Ok(YPoint {
            shape: shape.clone(),
            factors,
        })
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    pub fn factors(&self) -> &[FactorMatrix<T>] {
        &self.factors
    }

    pub fn pluckers(&self) -> Result<PluckerVector<T>> {
        let mut values = BTreeMap::new();
        for f in &self.factors {
            for (l, v) in f.pluckers()? {
                values.insert((f.level, l), v);
            }
        }
        Ok(PluckerVector { values })
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "shape": self.shape,
            "factors": self.factors.iter().map(FactorMatrix::to_json_value).collect::<Vec<_>>(),
        })
    }
}

/// Which coordinates a sampled point must keep nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleLocus {
    /// Frozen coordinates only: the open set `Y°`.
    Open,
    /// All rectangle coordinates, so the rectangles chart is defined as well.
    RectanglesTorus,
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    rational(rng.gen_range(-100..=100), rng.gen_range(1..=100))
}

/// Deterministic sample of `Y°` with entries `a/b`, `|a|, b <= 100`.
pub fn sample_point(shape: &FlagShape, seed: u64) -> Result<YPoint<BigRational>> {
    sample_point_stream(shape, seed, 0, SampleLocus::Open)
}

/// As [`sample_point`], drawing from stream `stream` of the seed so parallel trials stay
/// independent and reproducible.
pub fn sample_point_stream(
    shape: &FlagShape,
    seed: u64,
    stream: u64,
    locus: SampleLocus,
) -> Result<YPoint<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    sample_with(shape, &mut rng, locus)
}

pub fn sample_with(
    shape: &FlagShape,
    rng: &mut ChaCha8Rng,
    locus: SampleLocus,
) -> Result<YPoint<BigRational>> {
    for _ in 0..SAMPLE_RETRIES {
        let factors = shape
            .levels()
            .map(|i| {
                let rows = (0..shape.r(i))
                    .map(|_| (0..shape.r(i - 1)).map(|_| random_rational(rng)).collect())
                    .collect();
                FactorMatrix::new(i, rows)
            })
            .collect::<Result<Vec<_>>>()?;
        let point = YPoint::new(shape, factors)?;
        let Ok(p) = point.pluckers() else { continue };
        let ok = match locus {
            SampleLocus::Open => p.in_open_locus(shape),
            SampleLocus::RectanglesTorus => p.in_rectangles_torus(shape),
        };
        if ok {
            return Ok(point);
        }
    }
    Err(Error::RetryBudgetExhausted(SAMPLE_RETRIES))
}

/// A factor written as `[I | A]` up to column order: the identity sits in the pivot
/// columns and the entries of `A` are local coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeChart<T> {
    level: usize,
    cols: usize,
    pivots: Vec<usize>,
    free_cols: Vec<usize>,
    free: Vec<T>,
}

impl<T: Scalar> GaugeChart<T> {
    /// 0-based pivot columns.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Free entries, row-major over the non-pivot columns.
    pub fn free(&self) -> &[T] {
        &self.free
    }

    /// The matrix with the given free entries.
    pub fn reconstruct(&self, free: &[T]) -> Result<FactorMatrix<T>> {
        let r = self.pivots.len();
        let f = self.free_cols.len();
        if free.len() != r * f {
            return Err(Error::MatrixShape {
                level: self.level,
                rows: r,
                cols: free.len(),
                shape: format!("{r} x {f} free entries"),
            });
        }
        let mut rows = vec![vec![T::zero(); self.cols]; r];
        for (k, row) in rows.iter_mut().enumerate() {
            row[self.pivots[k]] = T::one();
            for (j, &c) in self.free_cols.iter().enumerate() {
                row[c] = free[k * f + j].clone();
            }
        }
        FactorMatrix::new(self.level, rows)
    }
}

/// Row-reduces `m` against the first `r` columns when that minor is nonzero, and
/// otherwise against greedily chosen pivot columns.
pub fn gauge_coords<T: Scalar>(m: &FactorMatrix<T>) -> Result<GaugeChart<T>> {
    let r = m.rows.len();
    let n = m.rows[0].len();
    let first: Vec<usize> = (0..r).collect();
    let pivots = if !determinant(&select_columns(&m.rows, &first)).is_zero() {
        first
    } else {
        greedy_pivots(&m.rows).ok_or(Error::RankDeficient)?
    };
    let reduced = solve(&select_columns(&m.rows, &pivots), &m.rows).ok_or(Error::RankDeficient)?;
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let free = reduced
        .iter()
        .flat_map(|row| {
            free_cols
                .iter()
                .map(|&c| row[c].clone())
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(GaugeChart {
        level: m.level,
        cols: n,
        pivots,
        free_cols,
        free,
    })
}

#[allow(clippy::needless_range_loop)]
fn greedy_pivots<T: Scalar>(rows: &[Vec<T>]) -> Option<Vec<usize>> {
    let mut a = rows.to_vec();
    let r = a.len();
    let n = a[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == r {
            break;
        }
        let best = (row..r).max_by(|&i, &j| {
            a[i][col]
                .magnitude()
                .partial_cmp(&a[j][col].magnitude())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[best][col].is_zero() {
            continue;
        }
        a.swap(best, row);
        let p = a[row][col].clone();
        for i in row + 1..r {
            let factor = a[i][col].clone() / p.clone();
            for k in col..n {
                let v = a[i][k].clone() - factor.clone() * a[row][k].clone();
                a[i][k] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (pivots.len() == r).then_some(pivots)
}
