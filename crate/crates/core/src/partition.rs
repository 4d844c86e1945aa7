//! Set partitions of the column indices: column contraction `A_p`, repetition
//! patterns `p[x]`, non-triviality, and the realised family `P(A)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::classify::{is_irredundant, proper_solution};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::solutions::{enumerate_solutions, GroundSet, SolutionClass};
use crate::system::LinearSystem;

/// Largest `m` for which all `Bell(m)` partitions are enumerated.
pub const DEFAULT_PARTITION_CAP: usize = 12;

/// A partition of `{0, .., m-1}`. Blocks are sorted internally and ordered by
/// their minima.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnPartition {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl ColumnPartition {
    /// Validates and normalises arbitrary blocks.
    pub fn new(m: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= m {
                    return Err(Error::IndexOutOfRange { index: i, cols: m });
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidArgument(format!("column {} repeated", i + 1)));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("blocks do not cover all columns".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { m, blocks })
    }

    /// From a restricted growth string: `labels[i]` is the block of column `i`,
    /// with `labels[0] = 0` and each label at most one more than all earlier ones.
    pub fn from_labels(labels: &[usize]) -> Self {
        let s = labels.iter().max().map_or(0, |&x| x + 1);
        let mut blocks = vec![Vec::new(); s];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l].push(i);
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_unstable_by_key(|b| b[0]);
        Self { m: labels.len(), blocks }
    }

    pub fn singletons(m: usize) -> Self {
        Self { m, blocks: (0..m).map(|i| vec![i]).collect() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks `|p|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.m
    }

    /// Block index of each column, blocks numbered by their minima.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.m];
        for (k, block) in self.blocks.iter().enumerate() {
            for &i in block {
                labels[i] = k;
            }
        }
        labels
    }
}

impl fmt::Display for ColumnPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, block) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (t, i) in block.iter().enumerate() {
                if t > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Iterator over all set partitions of `{0, .., m-1}` in lexicographic order
/// of restricted growth strings.
#[derive(Clone, Debug)]
pub struct Partitions {
    labels: Vec<usize>,
    maxima: Vec<usize>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = ColumnPartition;

    fn next(&mut self) -> Option<ColumnPartition> {
        if self.done {
            return None;
        }
        let current = ColumnPartition::from_labels(&self.labels);
        // advance: rightmost position that can still grow
        let m = self.labels.len();
        let mut i = m;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.labels[i] <= self.maxima[i - 1] {
                self.labels[i] += 1;
                self.maxima[i] = self.maxima[i - 1].max(self.labels[i]);
                for j in i + 1..m {
                    self.labels[j] = 0;
                    self.maxima[j] = self.maxima[i];
                }
                break;
            }
        }
        Some(current)
    }
}

pub fn partitions_of(m: usize) -> Result<Partitions> {
    partitions_with_cap(m, DEFAULT_PARTITION_CAP)
}

pub fn partitions_with_cap(m: usize, cap: usize) -> Result<Partitions> {
    if m == 0 {
        return Err(Error::InvalidArgument("partitions need m >= 1".into()));
    }
    if m > cap {
        return Err(Error::CapExceeded { what: "partition enumeration", m, cap });
    }
    Ok(Partitions { labels: vec![0; m], maxima: vec![0; m], done: false })
}

/// `A_p`: column `k` is the sum of the columns of `A` in block `k`.
pub fn contract(a: &LinearSystem, p: &ColumnPartition) -> Result<LinearSystem> {
    if p.m() != a.cols() {
        return Err(Error::DimensionMismatch { expected: a.cols(), found: p.m() });
    }
    let rows = (0..a.rows())
        .map(|i| {
            p.blocks()
                .iter()
                .map(|block| block.iter().map(|&j| a.matrix().get(i, j)).sum())
                .collect()
        })
        .collect();
    LinearSystem::new(IntMatrix::from_rows(p.len(), rows)?)
}

/// `p[x]`: columns grouped by equal entries.
pub fn pattern_of<T: Eq + std::hash::Hash>(x: &[T]) -> ColumnPartition {
    let mut first: HashMap<&T, usize> = HashMap::with_capacity(x.len());
    let labels: Vec<usize> = x
        .iter()
        .map(|v| {
            let next = first.len();
            *first.entry(v).or_insert(next)
        })
        .collect();
    ColumnPartition::from_labels(&labels)
}

/// Whether `rank(A_p) = rank(A)`.
pub fn pattern_is_nontrivial(a: &LinearSystem, p: &ColumnPartition) -> Result<bool> {
    Ok(contract(a, p)?.rank() == a.rank())
}

/// A solution `x` is non-trivial when `rank(A_{p[x]}) = rank(A)`.
pub fn is_nontrivial(a: &LinearSystem, x: &[BigInt]) -> Result<bool> {
    if !a.is_solution(x)? {
        return Err(Error::NotASolution);
    }
    pattern_is_nontrivial(a, &pattern_of(x))
}

/// A pattern of `P(A)` with an integer solution realising it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizedPattern {
    pub partition: ColumnPartition,
    pub witness: Vec<BigInt>,
}

/// `P(A)` over the integers: every `p` with `rank(A_p) = rank(A)` and `A_p`
/// irredundant, each with a witness `x` in `S_1(A)` and `p[x] = p`.
pub fn realized_patterns(a: &LinearSystem) -> Result<Vec<RealizedPattern>> {
    let mut out = Vec::new();
    for p in partitions_of(a.cols())? {
        let contracted = contract(a, &p)?;
        if contracted.rank() != a.rank() || !is_irredundant(&contracted) {
            continue;
        }
        let inner = proper_solution(&contracted).expect("irredundant systems have proper solutions");
        let labels = p.labels();
        let witness: Vec<BigInt> = labels.iter().map(|&l| inner[l].clone()).collect();
        debug_assert!(a.is_solution(&witness)? && pattern_of(&witness) == p);
        out.push(RealizedPattern { partition: p, witness });
    }
    Ok(out)
}

/// Patterns of non-trivial solutions with all entries in `T`.
pub fn realized_patterns_in(a: &LinearSystem, t: &GroundSet) -> Result<Vec<ColumnPartition>> {
    let mut seen: Vec<ColumnPartition> = enumerate_solutions(a, t, SolutionClass::NonTrivial, None)?
        .map(|x| pattern_of(&x))
        .collect();
    seen.sort();
    seen.dedup();
    Ok(seen)
}

/// Bell numbers by the Bell triangle, for cross-checking enumeration.
pub fn bell(m: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..m {
        let mut next = vec![*row.last().expect("nonempty")];
        for v in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}
