//! Partitions in boxes, flag shapes and the permutation dictionary.
//!
//! A level-`i` Schubert index lives in the `r_i x (r_{i-1} - r_i)` box, i.e. it
//! has at most `r_i` rows and at most `r_{i-1} - r_i` columns. The same box
//! indexes the Plücker coordinates of the `i`-th Grassmannian factor through
//! [`partition_to_columns`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Young diagram, stored as its nonzero parts in weakly decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates `parts`; trailing zeros are dropped.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The `rows x cols` rectangle; empty when either side is zero.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        if rows == 0 || cols == 0 {
            return Partition::empty();
        }
        Partition(vec![cols as u32; rows])
    }

    /// A single column of `len` boxes, i.e. the transpose of the one-row partition `(len)`.
    pub fn column(len: usize) -> Self {
        Partition(vec![1; len])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// The `i`-th part (0-based), reading missing parts as zero.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn width(&self) -> usize {
        self.part(0) as usize
    }

    pub fn fits(&self, shape: BoxShape) -> bool {
        self.len() <= shape.rows && self.width() <= shape.cols
    }

    /// `Some((rows, cols))` when the diagram is a (possibly empty) rectangle.
    pub fn as_rectangle(&self) -> Option<(usize, usize)> {
        if self.0.windows(2).all(|w| w[0] == w[1]) {
            Some((self.len(), self.width()))
        } else {
            None
        }
    }

    pub fn transpose(&self) -> Partition {
        transpose(self)
    }

    /// Bracketed form used in variable names, e.g. `[2,1]` or `[]`.
    pub fn bracketed(&self) -> String {
        format!("[{}]", self.comma_separated())
    }

    pub fn comma_separated(&self) -> String {
        self.0
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Graded lexicographic: by size, then lexicographically decreasing parts.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "({})", self.comma_separated())
        }
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `2,1`, `[2,1]`, `(2,1)`, and `[]`/`()`/empty string/`∅` for the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s
            .trim()
            .trim_start_matches(['[', '('])
            .trim_end_matches([']', ')'])
            .trim();
        if trimmed.is_empty() || trimmed == "∅" {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        let mut offset = 0;
        for piece in trimmed.split(',') {
            let value = piece.trim().parse::<u32>().map_err(|_| Error::Parse {
                input: s.to_string(),
                position: offset,
                message: format!("expected a nonnegative integer, found {piece:?}"),
            })?;
            parts.push(value);
            offset += piece.len() + 1;
        }
        Partition::new(parts)
    }
}

pub fn transpose(lambda: &Partition) -> Partition {
    let width = lambda.width();
    let parts = (0..width)
        .map(|j| lambda.0.iter().filter(|&&p| p as usize > j).count() as u32)
        .collect();
    Partition(parts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxShape {
    pub rows: usize,
    pub cols: usize,
}

impl BoxShape {
    pub fn new(rows: usize, cols: usize) -> Self {
        BoxShape { rows, cols }
    }

    /// Ambient dimension `n = rows + cols` of the Grassmannian the box belongs to.
    pub fn ambient(&self) -> usize {
        self.rows + self.cols
    }
}

/// `Fl(n; r_1 > ... > r_rho)`, the flag variety of quotients of `C^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawShape")]
pub struct FlagShape {
    n: usize,
    ranks: Vec<usize>,
}

#[derive(Deserialize)]
struct RawShape {
    n: usize,
    ranks: Vec<usize>,
}

impl TryFrom<RawShape> for FlagShape {
    type Error = Error;
    fn try_from(raw: RawShape) -> Result<Self> {
        FlagShape::new(raw.n, raw.ranks)
    }
}

impl FlagShape {
    pub fn new(n: usize, ranks: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidShape("n must be positive".into()));
        }
        if ranks.is_empty() {
            return Err(Error::InvalidShape("at least one rank is required".into()));
        }
        if ranks[0] >= n {
            return Err(Error::InvalidShape(format!(
                "largest rank {} must be below n = {n}",
                ranks[0]
            )));
        }
        if ranks.windows(2).any(|w| w[0] <= w[1]) || ranks.contains(&0) {
            return Err(Error::InvalidShape(format!(
                "ranks {ranks:?} must be positive and strictly decreasing"
            )));
        }
        Ok(FlagShape { n, ranks })
    }

    pub fn grassmannian(n: usize, r: usize) -> Result<Self> {
        FlagShape::new(n, vec![r])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Number of steps `rho`.
    pub fn rho(&self) -> usize {
        self.ranks.len()
    }

    /// `r_i` with the conventions `r_0 = n` and `r_{rho+1} = 0`.
    pub fn r(&self, i: usize) -> usize {
        match i {
            0 => self.n,
            i if i <= self.rho() => self.ranks[i - 1],
            _ => 0,
        }
    }

    /// The `r_i x (r_{i-1} - r_i)` box of level `i`.
    pub fn level_box(&self, level: usize) -> BoxShape {
        BoxShape::new(self.r(level), self.r(level - 1) - self.r(level))
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.rho()
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.rho() {
            return Err(Error::LevelOutOfRange {
                level,
                rho: self.rho(),
            });
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.levels()
            .map(|i| {
                let b = self.level_box(i);
                b.rows * b.cols
            })
            .sum()
    }

    pub fn is_grassmannian(&self) -> bool {
        self.rho() == 1
    }

    /// Every flag shape with the given `n`, ordered by rank sequence.
    pub fn all_with_n(n: usize) -> Vec<FlagShape> {
        let mut out = Vec::new();
        if n < 2 {
            return out;
        }
        for mask in 1u64..(1u64 << (n - 1)) {
            let ranks: Vec<usize> = (1..n)
                .rev()
                .filter(|r| mask & (1 << (r - 1)) != 0)
                .collect();
            out.push(FlagShape { n, ranks });
        }
        out.sort();
        out
    }

    /// The `n:r1,r2,...` form accepted by [`FromStr`].
    pub fn spec_string(&self) -> String {
        let ranks = self
            .ranks
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("{}:{}", self.n, ranks)
    }
}

impl fmt::Display for FlagShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_grassmannian() {
            write!(f, "Gr({},{})", self.n, self.ranks[0])
        } else {
            let ranks = self
                .ranks
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",");
            write!(f, "Fl({};{})", self.n, ranks)
        }
    }
}

impl FromStr for FlagShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |position: usize, message: String| Error::Parse {
            input: s.to_string(),
            position,
            message,
        };
        let colon = s
            .find(':')
            .ok_or_else(|| parse_err(s.len(), "expected `n:r1,r2,...`".into()))?;
        let n = s[..colon]
            .trim()
            .parse::<usize>()
            .map_err(|_| parse_err(0, format!("invalid n {:?}", &s[..colon])))?;
        let mut ranks = Vec::new();
        let mut position = colon + 1;
        for piece in s[colon + 1..].split(',') {
            let r = piece
                .trim()
                .parse::<usize>()
                .map_err(|_| parse_err(position, format!("invalid rank {piece:?}")))?;
            ranks.push(r);
            position += piece.len() + 1;
        }
        FlagShape::new(n, ranks).map_err(|e| parse_err(colon + 1, e.to_string()))
    }
}

/// A tuple `(mu_1, ..., mu_rho)` with `mu_i` in the level-`i` box.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartitionTuple(pub Vec<Partition>);

impl PartitionTuple {
    /// The all-empty tuple, i.e. the unit class.
    pub fn unit(rho: usize) -> Self {
        PartitionTuple(vec![Partition::empty(); rho])
    }

    /// The tuple with `lambda` at `level` (1-based) and `∅` elsewhere.
    pub fn single(rho: usize, level: usize, lambda: Partition) -> Self {
        let mut t = Self::unit(rho);
        t.0[level - 1] = lambda;
        t
    }

    pub fn entries(&self) -> &[Partition] {
        &self.0
    }

    /// Partition at `level` (1-based).
    pub fn at(&self, level: usize) -> &Partition {
        &self.0[level - 1]
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(Partition::is_empty)
    }

    pub fn validate(&self, shape: &FlagShape) -> Result<()> {
        if self.0.len() != shape.rho() {
            return Err(Error::InvalidTuple(format!(
                "expected {} partitions for {shape}, got {}",
                shape.rho(),
                self.0.len()
            )));
        }
        for (i, mu) in self.0.iter().enumerate() {
            let b = shape.level_box(i + 1);
            if !mu.fits(b) {
                return Err(Error::InvalidTuple(format!(
                    "{mu} does not fit the {}x{} box of level {}",
                    b.rows,
                    b.cols,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Levels carrying a nonempty partition.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.0.len())
            .filter(|&i| !self.at(i).is_empty())
            .collect()
    }
}

impl fmt::Display for PartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = self
            .0
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        write!(f, "({inner})")
    }
}

/// A permutation of `{1..n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlagPermutation {
    word: Vec<usize>,
}

impl FlagPermutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &a in &word {
            if a == 0 || a > n || seen[a] {
                return Err(Error::InvalidPermutation {
                    word,
                    reason: "not a permutation of 1..n".into(),
                });
            }
            seen[a] = true;
        }
        Ok(FlagPermutation { word })
    }

    pub fn identity(n: usize) -> Self {
        FlagPermutation {
            word: (1..=n).collect(),
        }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Positions `p` (1-based) with `w(p) > w(p+1)`.
    pub fn descents(&self) -> Vec<usize> {
        self.word
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(p, _)| p + 1)
            .collect()
    }
}

impl fmt::Display for FlagPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .word
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        write!(f, "{s}")
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Partitions with at most `r` rows and at most `n - r` columns, graded-lex ordered.
pub fn enumerate_s(n: usize, r: usize) -> Result<Vec<Partition>> {
    if r > n {
        return Err(Error::RankExceedsDimension { n, r });
    }
    Ok(partitions_in_box(BoxShape::new(r, n - r)))
}

pub fn partitions_in_box(shape: BoxShape) -> Vec<Partition> {
    fn extend(prefix: &mut Vec<u32>, max_part: u32, rows_left: usize, out: &mut Vec<Partition>) {
        out.push(Partition(prefix.clone()));
        if rows_left == 0 {
            return;
        }
        for p in 1..=max_part {
            prefix.push(p);
            extend(prefix, p, rows_left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), shape.cols as u32, shape.rows, &mut out);
    out.sort();
    out
}

/// The frozen index set: rectangles of full width or full height in the `r x (n-r)` box.
pub fn enumerate_m(n: usize, r: usize) -> Result<Vec<Partition>> {
    if r == 0 || r >= n {
        return Err(Error::InvalidShape(format!(
            "M(n, r) needs 1 <= r < n, got n = {n}, r = {r}"
        )));
    }
    Ok(frozen_in_box(BoxShape::new(r, n - r)))
}

pub fn frozen_in_box(shape: BoxShape) -> Vec<Partition> {
    let set: BTreeSet<Partition> = (0..=shape.rows)
        .map(|k| Partition::rectangle(k, shape.cols))
        .chain((0..=shape.cols).map(|a| Partition::rectangle(shape.rows, a)))
        .collect();
    set.into_iter().collect()
}

pub fn is_frozen(lambda: &Partition, shape: BoxShape) -> bool {
    match lambda.as_rectangle() {
        Some((rows, cols)) => {
            lambda.fits(shape) && (rows == 0 || rows == shape.rows || cols == shape.cols)
        }
        None => false,
    }
}

/// `J(lambda) = { lambda_{r+1-k} + k : k = 1..r }`, returned in increasing order.
pub fn partition_to_columns(lambda: &Partition, shape: BoxShape) -> Result<Vec<usize>> {
    if !lambda.fits(shape) {
        return Err(Error::OutsideBox {
            partition: lambda.to_string(),
            rows: shape.rows,
            cols: shape.cols,
        });
    }
    let r = shape.rows;
    Ok((1..=r).map(|k| lambda.part(r - k) as usize + k).collect())
}

/// Inverse of [`partition_to_columns`]; `columns` must be an `rows`-subset of `1..=rows+cols`.
pub fn columns_to_partition(columns: &[usize], shape: BoxShape) -> Result<Partition> {
    let bad = || Error::InvalidColumns {
        columns: columns.to_vec(),
        rows: shape.rows,
        cols: shape.cols,
    };
    let mut sorted = columns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != shape.rows || sorted.iter().any(|&c| c == 0 || c > shape.ambient()) {
        return Err(bad());
    }
    let r = shape.rows;
    let mut parts = vec![0u32; r];
    for (idx, &c) in sorted.iter().enumerate() {
        let k = idx + 1;
        parts[r - k] = (c - k) as u32;
    }
    Partition::new(parts)
}

/// Schubert index of a permutation with descents in `{r_1, ..., r_rho}`.
///
/// `T_i` is the set of the first `r_i` letters; the positions of `T_{i+1}` inside
/// the sorted `T_i` are the column set of the level-`(i+1)` partition.
pub fn perm_to_tuple(w: &FlagPermutation, shape: &FlagShape) -> Result<PartitionTuple> {
    if w.word().len() != shape.n() {
        return Err(Error::InvalidPermutation {
            word: w.word().to_vec(),
            reason: format!("length must be n = {}", shape.n()),
        });
    }
    let allowed: BTreeSet<usize> = shape.ranks().iter().copied().collect();
    if let Some(d) = w.descents().into_iter().find(|d| !allowed.contains(d)) {
        return Err(Error::InvalidPermutation {
            word: w.word().to_vec(),
            reason: format!("descent at position {d} is not among the ranks"),
        });
    }
    let mut tuple = Vec::with_capacity(shape.rho());
    for level in shape.levels() {
        let mut outer: Vec<usize> = w.word()[..shape.r(level - 1)].to_vec();
        outer.sort_unstable();
        let inner = &w.word()[..shape.r(level)];
        let positions: Vec<usize> = inner
            .iter()
            .map(|a| outer.iter().position(|b| b == a).expect("nested prefix") + 1)
            .collect();
        tuple.push(columns_to_partition(&positions, shape.level_box(level))?);
    }
    Ok(PartitionTuple(tuple))
}

pub fn tuple_to_perm(t: &PartitionTuple, shape: &FlagShape) -> Result<FlagPermutation> {
    t.validate(shape)?;
    let mut nested: Vec<Vec<usize>> = vec![(1..=shape.n()).collect()];
    for level in shape.levels() {
        let cols = partition_to_columns(t.at(level), shape.level_box(level))?;
        let outer = nested.last().expect("nonempty");
        nested.push(cols.iter().map(|&c| outer[c - 1]).collect());
    }
    let mut word = nested.last().expect("nonempty").clone();
    for level in (0..shape.rho()).rev() {
        let inner: BTreeSet<usize> = nested[level + 1].iter().copied().collect();
        word.extend(nested[level].iter().filter(|a| !inner.contains(a)));
    }
    FlagPermutation::new(word)
}

/// All Schubert indices `S(n, r_1, ..., r_rho)`.
pub fn enumerate_tuples(shape: &FlagShape) -> Vec<PartitionTuple> {
    let mut out = vec![Vec::new()];
    for level in shape.levels() {
        let choices = partitions_in_box(shape.level_box(level));
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Partition>| {
                choices.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(PartitionTuple).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn fl(n: usize, ranks: &[usize]) -> FlagShape {
        FlagShape::new(n, ranks.to_vec()).unwrap()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(transpose(&Partition::empty()), Partition::empty());
        assert_eq!(transpose(&p(&[2, 1])), p(&[2, 1]));
        assert_eq!(transpose(&p(&[3, 1])), p(&[2, 1, 1]));
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
    }

    #[test]
    fn s_examples() {
        assert_eq!(
            enumerate_s(2, 1).unwrap(),
            vec![Partition::empty(), p(&[1])]
        );
        assert_eq!(
            enumerate_s(4, 2).unwrap(),
            vec![
                Partition::empty(),
                p(&[1]),
                p(&[2]),
                p(&[1, 1]),
                p(&[2, 1]),
                p(&[2, 2])
            ]
        );
        assert_eq!(enumerate_s(6, 4).unwrap().len(), 15);
        assert!(enumerate_s(2, 3).is_err());
    }

    #[test]
    fn m_examples() {
        assert_eq!(
            enumerate_m(4, 2).unwrap(),
            vec![Partition::empty(), p(&[2]), p(&[1, 1]), p(&[2, 2])]
        );
        assert_eq!(
            enumerate_m(2, 1).unwrap(),
            vec![Partition::empty(), p(&[1])]
        );
        let m64 = enumerate_m(6, 4).unwrap();
        assert_eq!(m64.len(), 6);
        assert!(m64.iter().all(|l| is_frozen(l, BoxShape::new(4, 2))));
        assert!(!is_frozen(&p(&[2, 1]), BoxShape::new(2, 2)));
    }

    #[test]
    fn column_examples() {
        let b = BoxShape::new(2, 2);
        assert_eq!(
            partition_to_columns(&Partition::empty(), b).unwrap(),
            vec![1, 2]
        );
        assert_eq!(partition_to_columns(&p(&[2, 2]), b).unwrap(), vec![3, 4]);
        assert_eq!(partition_to_columns(&p(&[2, 1]), b).unwrap(), vec![2, 4]);
        assert!(partition_to_columns(&p(&[3]), b).is_err());
        assert!(columns_to_partition(&[1, 5], b).is_err());
    }

    #[test]
    fn perm_examples() {
        let shape = fl(4, &[2, 1]);
        let t = |w: &[usize]| perm_to_tuple(&FlagPermutation::new(w.to_vec()).unwrap(), &shape);
        assert_eq!(t(&[1, 2, 3, 4]).unwrap(), PartitionTuple::unit(2));
        assert_eq!(
            t(&[2, 1, 3, 4]).unwrap(),
            PartitionTuple(vec![Partition::empty(), p(&[1])])
        );
        assert_eq!(
            t(&[1, 3, 2, 4]).unwrap(),
            PartitionTuple(vec![p(&[1]), Partition::empty()])
        );
        assert_eq!(
            t(&[3, 2, 1, 4]).unwrap(),
            PartitionTuple(vec![p(&[1, 1]), p(&[1])])
        );
        // descent at position 3
        assert!(t(&[1, 2, 4, 3]).is_err());
    }

    #[test]
    fn tuple_to_perm_examples() {
        let shape = fl(4, &[2, 1]);
        assert_eq!(
            tuple_to_perm(&PartitionTuple::unit(2), &shape).unwrap(),
            FlagPermutation::identity(4)
        );
        assert_eq!(
            tuple_to_perm(&PartitionTuple(vec![p(&[1]), Partition::empty()]), &shape)
                .unwrap()
                .word(),
            &[1, 3, 2, 4]
        );
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for perm in permutations(n - 1) {
            for pos in 0..=perm.len() {
                let mut v = perm.clone();
                v.insert(pos, n);
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn fl421_has_twelve_schubert_indices() {
        let shape = fl(4, &[2, 1]);
        let allowed: BTreeSet<usize> = [1, 2].into();
        let perms: Vec<_> = permutations(4)
            .into_iter()
            .map(|w| FlagPermutation::new(w).unwrap())
            .filter(|w| w.descents().iter().all(|d| allowed.contains(d)))
            .collect();
        assert_eq!(perms.len(), 12);
        let tuples = enumerate_tuples(&shape);
        assert_eq!(tuples.len(), 12);
        for t in &tuples {
            let w = tuple_to_perm(t, &shape).unwrap();
            assert!(perms.contains(&w));
            assert_eq!(&perm_to_tuple(&w, &shape).unwrap(), t);
        }
    }

    #[test]
    fn shape_parsing() {
        assert_eq!("4:2,1".parse::<FlagShape>().unwrap(), fl(4, &[2, 1]));
        assert_eq!("4:2".parse::<FlagShape>().unwrap().to_string(), "Gr(4,2)");
        match "4:2,x".parse::<FlagShape>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!("4:1,2".parse::<FlagShape>().is_err());
        assert!("4:4".parse::<FlagShape>().is_err());
        let shape = fl(6, &[4, 2, 1]);
        assert_eq!(shape.dimension(), 4 * 2 + 2 * 2 + 1);
        assert_eq!(shape.r(0), 6);
        assert_eq!(shape.r(4), 0);
    }

    #[test]
    fn json_forms() {
        assert_eq!(serde_json::to_string(&p(&[2, 1])).unwrap(), "[2,1]");
        assert_eq!(
            serde_json::to_string(&fl(4, &[2, 1])).unwrap(),
            r#"{"n":4,"ranks":[2,1]}"#
        );
        let back: FlagShape = serde_json::from_str(r#"{"n":4,"ranks":[2,1]}"#).unwrap();
        assert_eq!(back, fl(4, &[2, 1]));
        assert!(serde_json::from_str::<FlagShape>(r#"{"n":4,"ranks":[1,2]}"#).is_err());
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
        assert_eq!(
            serde_json::to_string(&PartitionTuple(vec![p(&[1, 1]), p(&[1])])).unwrap(),
            "[[1,1],[1]]"
        );
    }

    #[test]
    fn all_shapes_count() {
        assert_eq!(FlagShape::all_with_n(4).len(), 7);
        assert!(FlagShape::all_with_n(5).iter().all(|s| s.n() == 5));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn transpose_is_involution_between_boxes(n in 1usize..9, r_seed in 0usize..9, idx in 0usize..200) {
                let r = r_seed % (n + 1);
                let s = enumerate_s(n, r).unwrap();
                let lambda = &s[idx % s.len()];
                let t = transpose(lambda);
                prop_assert_eq!(transpose(&t), lambda.clone());
                prop_assert!(t.fits(BoxShape::new(n - r, r)));
            }

            #[test]
            fn columns_round_trip(n in 1usize..10, r_seed in 0usize..10, idx in 0usize..300) {
                let r = r_seed % (n + 1);
                let b = BoxShape::new(r, n - r);
                let s = partitions_in_box(b);
                let lambda = &s[idx % s.len()];
                let cols = partition_to_columns(lambda, b).unwrap();
                prop_assert_eq!(cols.len(), r);
                prop_assert_eq!(&columns_to_partition(&cols, b).unwrap(), lambda);
            }
        }
    }
}
