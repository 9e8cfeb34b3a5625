use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combinat::Partition;
use crate::error::{Error, Result};

/// Variables of the expression ring.
///
/// The derived order (variant first, then fields) is the canonical variable order;
/// monomials are compared lexicographically on their sorted variable lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    /// `p^level_partition`
    Plucker { level: usize, partition: Partition },
    /// `q_level`
    Quantum(usize),
    /// Internal ladder vertex `z_id`.
    Ladder(usize),
    /// Chern root `x_{level,index}`.
    ChernRoot { level: usize, index: usize },
    /// Free entry `(row, col)` of the gauge-fixed level matrix; both indices 1-based,
    /// `col` counting non-pivot columns only.
    Gauge {
        level: usize,
        row: usize,
        col: usize,
    },
}

impl VarId {
    pub fn plucker(level: usize, partition: Partition) -> Self {
        VarId::Plucker { level, partition }
    }

    pub fn q(level: usize) -> Self {
        VarId::Quantum(level)
    }

    pub fn chern(level: usize, index: usize) -> Self {
        VarId::ChernRoot { level, index }
    }

    pub fn is_plucker(&self) -> bool {
        matches!(self, VarId::Plucker { .. })
    }

    pub fn is_quantum(&self) -> bool {
        matches!(self, VarId::Quantum(_))
    }

    /// LaTeX form; `grassmannian` drops the level index from Plücker and quantum symbols.
    pub fn latex(&self, grassmannian: bool) -> String {
        match self {
            VarId::Plucker { level, partition } => {
                let sub = if partition.is_empty() {
                    "\\emptyset".to_string()
                } else {
                    format!("({})", partition.comma_separated())
                };
                if grassmannian {
                    format!("p_{{{sub}}}")
                } else {
                    format!("p^{{{level}}}_{{{sub}}}")
                }
            }
            VarId::Quantum(i) => {
                if grassmannian {
                    "q".to_string()
                } else {
                    format!("q_{{{i}}}")
                }
            }
            VarId::Ladder(v) => format!("z_{{{v}}}"),
            VarId::ChernRoot { level, index } => format!("x_{{{level},{index}}}"),
            VarId::Gauge { level, row, col } => format!("a^{{{level}}}_{{{row},{col}}}"),
        }
    }

    /// Plain-text form; `grassmannian` drops the level index.
    pub fn text(&self, grassmannian: bool) -> String {
        match self {
            VarId::Plucker { partition, .. } if grassmannian => {
                format!("p{}", partition.bracketed())
            }
            VarId::Quantum(_) if grassmannian => "q".to_string(),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Plucker { level, partition } => write!(f, "p{level}{}", partition.bracketed()),
            VarId::Quantum(i) => write!(f, "q{i}"),
            VarId::Ladder(v) => write!(f, "z{v}"),
            VarId::ChernRoot { level, index } => write!(f, "x{level}_{index}"),
            VarId::Gauge { level, row, col } => write!(f, "g{level}_{row}_{col}"),
        }
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |message: &str| Error::Parse {
            input: s.to_string(),
            position: 0,
            message: message.to_string(),
        };
        let num = |t: &str| t.parse::<usize>().map_err(|_| err("expected an index"));
        let (head, rest) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        match head {
            "p" => {
                let open = rest.find('[').ok_or_else(|| err("expected `[`"))?;
                let level = num(&rest[..open])?;
                let partition = rest[open..].parse::<Partition>()?;
                Ok(VarId::Plucker { level, partition })
            }
            "q" => Ok(VarId::Quantum(num(rest)?)),
            "z" => Ok(VarId::Ladder(num(rest)?)),
            "x" => {
                let (a, b) = rest
                    .split_once('_')
                    .ok_or_else(|| err("expected `x<i>_<j>`"))?;
                Ok(VarId::ChernRoot {
                    level: num(a)?,
                    index: num(b)?,
                })
            }
            "g" => {
                let idx: Vec<&str> = rest.split('_').collect();
                if idx.len() != 3 {
                    return Err(err("expected `g<level>_<row>_<col>`"));
                }
                Ok(VarId::Gauge {
                    level: num(idx[0])?,
                    row: num(idx[1])?,
                    col: num(idx[2])?,
                })
            }
            _ => Err(err("unknown variable kind")),
        }
    }
}

impl Serialize for VarId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VarId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
