//! Solutions of `A x = b` with every entry in a finite ground set.
//!
//! `A` is brought to integer reduced echelon form; the `m - rank(A)` free
//! columns range over the ground set and the pivot columns are solved for
//! exactly. Counting on an interval `[lo, hi]` goes further: for each
//! assignment of all but the last free column, the admissible values of the
//! last one form an arithmetic progression, and only the finitely many values
//! where two entries collide are inspected individually.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::classify::ComplementRanks;
use crate::error::{Error, Result};
use crate::linalg::IntegerRref;
use crate::partition::{pattern_is_nontrivial, pattern_of, ColumnPartition};
use crate::system::LinearSystem;

/// Which of `S(A) ⊇ S_1(A) ⊇ S_0(A)` to select.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolutionClass {
    All,
    NonTrivial,
    Proper,
}

impl fmt::Display for SolutionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionClass::All => "all",
            SolutionClass::NonTrivial => "nontrivial",
            SolutionClass::Proper => "proper",
        })
    }
}

impl FromStr for SolutionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SolutionClass::All),
            "nontrivial" | "non-trivial" => Ok(SolutionClass::NonTrivial),
            "proper" => Ok(SolutionClass::Proper),
            other => Err(Error::InvalidArgument(format!("unknown solution class {other:?}"))),
        }
    }
}

const DENSE_LOOKUP_SPAN: i64 = 1 << 24;

/// A finite set of positive integers, kept sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct GroundSet {
    elements: Vec<i64>,
    dense: Option<Vec<bool>>,
}

impl GroundSet {
    /// Elements must be positive and strictly increasing.
    pub fn new(elements: Vec<i64>) -> Result<Self> {
        if elements.first().is_some_and(|&e| e < 1) {
            return Err(Error::InvalidArgument("ground set elements must be positive".into()));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "ground set elements must be strictly increasing".into(),
            ));
        }
        let dense = match elements.last() {
            Some(&max) if max <= DENSE_LOOKUP_SPAN => {
                let mut bits = vec![false; max as usize + 1];
                elements.iter().for_each(|&e| bits[e as usize] = true);
                Some(bits)
            }
            Some(_) => None,
            None => Some(Vec::new()),
        };
        Ok(Self { elements, dense })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut elements: Vec<i64>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        Self::new(elements)
    }

    /// `{lo, .., hi}`; empty when `hi < lo`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        Self::new((lo..=hi).collect()).expect("valid interval")
    }

    /// `[n] = {1, .., n}`.
    pub fn range(n: usize) -> Self {
        Self::interval(1, n as i64)
    }

    pub fn empty() -> Self {
        Self { elements: Vec::new(), dense: Some(Vec::new()) }
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: i64) -> bool {
        match &self.dense {
            Some(bits) => v >= 0 && (v as usize) < bits.len() && bits[v as usize],
            None => self.elements.binary_search(&v).is_ok(),
        }
    }

    fn contains_wide(&self, v: i128) -> bool {
        i64::try_from(v).is_ok_and(|v| self.contains(v))
    }

    /// `Some((lo, hi))` when the set is a nonempty run of consecutive integers.
    pub fn as_interval(&self) -> Option<(i64, i64)> {
        let (&lo, &hi) = (self.elements.first()?, self.elements.last()?);
        (hi - lo + 1 == self.elements.len() as i64).then_some((lo, hi))
    }

    pub fn is_subset(&self, other: &GroundSet) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.elements).finish()
    }
}

/// The set of distinct entries `s(x)`.
pub fn support<T: Ord + Clone>(x: &[T]) -> BTreeSet<T> {
    x.iter().cloned().collect()
}

/// Affine description of the solution set of `A x = b`:
/// `den_k x_{pivot_k} = constant_k - sum_f coeffs_k[f] x_{free_f}`.
#[derive(Clone, Debug)]
struct Parametrization {
    m: usize,
    free: Vec<usize>,
    bound: Vec<BoundColumn>,
    consistent: bool,
}

#[derive(Clone, Debug)]
struct BoundColumn {
    col: usize,
    den: i128,
    constant: i128,
    coeffs: Vec<i128>,
}

impl Parametrization {
    fn new(a: &LinearSystem, b: Option<&[BigInt]>) -> Result<Self> {
        let m = a.cols();
        let zeros;
        let b = match b {
            Some(b) if b.len() != a.rows() => {
                return Err(Error::DimensionMismatch { expected: a.rows(), found: b.len() })
            }
            Some(b) => b,
            None => {
                zeros = vec![BigInt::zero(); a.rows()];
                &zeros
            }
        };
        let rows = a
            .matrix()
            .row_vecs()
            .into_iter()
            .zip(b)
            .map(|(mut row, bi)| {
                row.push(bi.clone());
                row
            })
            .collect();
        let rref = IntegerRref::of_rows(m, rows);
        let consistent = rref.rows.len() == rref.pivots.len();
        let free: Vec<usize> = (0..m).filter(|c| !rref.pivots.contains(c)).collect();
        let wide = |v: &BigInt| v.to_i128().ok_or(Error::Overflow);
        let bound = rref
            .pivots
            .iter()
            .zip(&rref.rows)
            .map(|(&col, row)| {
                Ok(BoundColumn {
                    col,
                    den: wide(&row[col])?,
                    constant: wide(&row[m])?,
                    coeffs: free.iter().map(|&f| wide(&row[f])).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { m, free, bound, consistent })
    }
}

/// Decides class membership from repetition patterns, caching the rank test
/// for non-trivial solutions.
struct ClassFilter<'a> {
    system: &'a LinearSystem,
    class: SolutionClass,
    cache: HashMap<Vec<usize>, bool>,
}

impl<'a> ClassFilter<'a> {
    fn new(system: &'a LinearSystem, class: SolutionClass) -> Self {
        Self { system, class, cache: HashMap::new() }
    }

    fn accepts_pattern(&mut self, p: &ColumnPartition) -> bool {
        match self.class {
            SolutionClass::All => true,
            SolutionClass::Proper => p.is_singletons(),
            SolutionClass::NonTrivial => {
                if p.is_singletons() {
                    return true;
                }
                let system = self.system;
                *self
                    .cache
                    .entry(p.labels())
                    .or_insert_with(|| pattern_is_nontrivial(system, p).expect("same width"))
            }
        }
    }

    fn accepts(&mut self, x: &[i64]) -> bool {
        match self.class {
            SolutionClass::All => true,
            SolutionClass::Proper => all_distinct(x),
            SolutionClass::NonTrivial => all_distinct(x) || self.accepts_pattern(&pattern_of(x)),
        }
    }
}

fn all_distinct(x: &[i64]) -> bool {
    if x.len() <= 8 {
        return (0..x.len()).all(|i| (i + 1..x.len()).all(|j| x[i] != x[j]));
    }
    let mut s = x.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

/// Lazy enumeration of a solution class inside a ground set, lexicographic in
/// the free-column assignment.
pub struct Solutions<'a> {
    param: Parametrization,
    ground: &'a GroundSet,
    filter: ClassFilter<'a>,
    odometer: Vec<usize>,
    // partial[l][k]: constant of bound column k minus the first l free terms
    partial: Vec<Vec<i128>>,
    exhausted: bool,
}

impl<'a> Solutions<'a> {
    fn new(
        a: &'a LinearSystem,
        ground: &'a GroundSet,
        class: SolutionClass,
        b: Option<&[BigInt]>,
    ) -> Result<Self> {
        let param = Parametrization::new(a, b)?;
        let f = param.free.len();
        let exhausted = !param.consistent || (f > 0 && ground.is_empty());
        let base: Vec<i128> = param.bound.iter().map(|bc| bc.constant).collect();
        let mut it = Self {
            filter: ClassFilter::new(a, class),
            odometer: vec![0; f],
            partial: vec![base; f + 1],
            param,
            ground,
            exhausted,
        };
        if !it.exhausted {
            it.refresh_from(0);
        }
        Ok(it)
    }

    fn refresh_from(&mut self, level: usize) {
        let t = self.ground.elements();
        for l in level..self.param.free.len() {
            let x = t[self.odometer[l]] as i128;
            for k in 0..self.param.bound.len() {
                self.partial[l + 1][k] = self.partial[l][k] - self.param.bound[k].coeffs[l] * x;
            }
        }
    }

    fn advance(&mut self) {
        let n = self.ground.len();
        let mut l = self.param.free.len();
        loop {
            if l == 0 {
                self.exhausted = true;
                return;
            }
            l -= 1;
            self.odometer[l] += 1;
            if self.odometer[l] < n {
                self.refresh_from(l);
                return;
            }
            self.odometer[l] = 0;
        }
    }

    fn candidate(&self) -> Option<Vec<i64>> {
        let t = self.ground.elements();
        let mut x = vec![0i64; self.param.m];
        for (l, &col) in self.param.free.iter().enumerate() {
            x[col] = t[self.odometer[l]];
        }
        let last = &self.partial[self.param.free.len()];
        for (k, bc) in self.param.bound.iter().enumerate() {
            let num = last[k];
            if num % bc.den != 0 {
                return None;
            }
            let v = num / bc.den;
            if !self.ground.contains_wide(v) {
                return None;
            }
            x[bc.col] = v as i64;
        }
        Some(x)
    }
}

impl Iterator for Solutions<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        while !self.exhausted {
            let found = self.candidate();
            if self.param.free.is_empty() {
                self.exhausted = true;
            } else {
                self.advance();
            }
            if let Some(x) = found {
                if self.filter.accepts(&x) {
                    return Some(x);
                }
            }
        }
        None
    }
}

/// All members of the chosen class of `S(A, b)` with entries in `T`.
pub fn enumerate_solutions<'a>(
    a: &'a LinearSystem,
    t: &'a GroundSet,
    class: SolutionClass,
    b: Option<&[BigInt]>,
) -> Result<Solutions<'a>> {
    Solutions::new(a, t, class, b)
}

pub fn contains_solution(a: &LinearSystem, t: &GroundSet, class: SolutionClass) -> Result<bool> {
    Ok(enumerate_solutions(a, t, class, None)?.next().is_some())
}

/// Solution counts split by the number of distinct entries:
/// `by_support[k]` counts solutions with `|s(x)| = k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportProfile {
    pub by_support: Vec<u64>,
}

impl SupportProfile {
    fn with_width(m: usize) -> Self {
        Self { by_support: vec![0; m + 1] }
    }

    pub fn total(&self) -> u64 {
        self.by_support.iter().sum()
    }

    fn merge(mut self, other: Self) -> Self {
        if self.by_support.len() < other.by_support.len() {
            self.by_support.resize(other.by_support.len(), 0);
        }
        for (a, b) in self.by_support.iter_mut().zip(other.by_support) {
            *a += b;
        }
        self
    }
}

pub fn count_solutions(
    a: &LinearSystem,
    t: &GroundSet,
    class: SolutionClass,
    b: Option<&[BigInt]>,
) -> Result<u64> {
    Ok(support_profile(a, t, class, b)?.total())
}

/// Counts by support size. Intervals use the progression counter; other
/// ground sets are enumerated.
pub fn support_profile(
    a: &LinearSystem,
    t: &GroundSet,
    class: SolutionClass,
    b: Option<&[BigInt]>,
) -> Result<SupportProfile> {
    match t.as_interval() {
        Some((lo, hi)) => interval_profile(a, lo, hi, class, b),
        None => enumerated_profile(a, t, class, b),
    }
}

/// Reference path: enumerate and tally.
pub fn enumerated_profile(
    a: &LinearSystem,
    t: &GroundSet,
    class: SolutionClass,
    b: Option<&[BigInt]>,
) -> Result<SupportProfile> {
    let mut profile = SupportProfile::with_width(a.cols());
    for x in enumerate_solutions(a, t, class, b)? {
        profile.by_support[support_size(&x)] += 1;
    }
    Ok(profile)
}

fn support_size(x: &[i64]) -> usize {
    let mut s = x.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// `(constant + slope * t) / den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
struct Affine {
    constant: i128,
    slope: i128,
    den: i128,
}

impl Affine {
    fn at(&self, t: i128) -> i128 {
        (self.constant + self.slope * t) / self.den
    }
}

/// `t ≡ residue (mod modulus)` intersected with `[lo, hi]`.
#[derive(Clone, Copy, Debug)]
struct Progression {
    lo: i128,
    hi: i128,
    residue: i128,
    modulus: i128,
}

impl Progression {
    fn contains(&self, t: i128) -> bool {
        t >= self.lo && t <= self.hi && (t - self.residue).rem_euclid(self.modulus) == 0
    }

    fn count(&self) -> u64 {
        if self.hi < self.lo {
            return 0;
        }
        let first = self.lo + (self.residue - self.lo).rem_euclid(self.modulus);
        if first > self.hi {
            0
        } else {
            ((self.hi - first) / self.modulus + 1) as u64
        }
    }

    /// Adds `coeff * t ≡ rhs (mod den)`; false when unsatisfiable.
    fn add_congruence(&mut self, coeff: i128, rhs: i128, den: i128) -> bool {
        let coeff = coeff.rem_euclid(den);
        let rhs = rhs.rem_euclid(den);
        let g = coeff.gcd(&den);
        if rhs % g != 0 {
            return false;
        }
        if den == 1 || g == den {
            return true;
        }
        let modulus = den / g;
        let residue = (rhs / g) * mod_inverse(coeff / g, modulus) % modulus;
        self.merge_residue(residue, modulus)
    }

    fn merge_residue(&mut self, residue: i128, modulus: i128) -> bool {
        // x ≡ r1 (m1), x ≡ r2 (m2)
        let (r1, m1) = (self.residue, self.modulus);
        let g = m1.gcd(&modulus);
        if (residue - r1).rem_euclid(g) != 0 {
            return false;
        }
        let lcm = m1 / g * modulus;
        let m1g = m1 / g;
        let m2g = modulus / g;
        let k = if m2g == 1 {
            0
        } else {
            ((residue - r1) / g).rem_euclid(m2g) * mod_inverse(m1g.rem_euclid(m2g), m2g) % m2g
        };
        self.residue = (r1 + m1 * k).rem_euclid(lcm);
        self.modulus = lcm;
        true
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

fn interval_profile(
    a: &LinearSystem,
    lo: i64,
    hi: i64,
    class: SolutionClass,
    b: Option<&[BigInt]>,
) -> Result<SupportProfile> {
    let param = Parametrization::new(a, b)?;
    let m = a.cols();
    if !param.consistent {
        return Ok(SupportProfile::with_width(m));
    }
    let ground = GroundSet::interval(lo, hi);
    if param.free.is_empty() {
        return enumerated_profile(a, &ground, class, b);
    }
    let f = param.free.len();
    let width = (hi - lo + 1) as u64;
    // the first outer free column is split across workers
    if f == 1 {
        let mut filter = ClassFilter::new(a, class);
        return Ok(count_last_free(&param, lo, hi, &[], &mut filter));
    }
    let outer_total = width.checked_pow((f - 1) as u32).ok_or(Error::Overflow)?;
    if outer_total > u64::MAX / 4 {
        return Err(Error::TooLarge(format!("{outer_total} outer assignments")));
    }
    Ok((lo..=hi)
        .into_par_iter()
        .map(|first| {
            let mut filter = ClassFilter::new(a, class);
            let mut profile = SupportProfile::with_width(m);
            let mut rest = vec![lo; f - 2];
            loop {
                let mut outer = Vec::with_capacity(f - 1);
                outer.push(first);
                outer.extend_from_slice(&rest);
                profile = profile.merge(count_last_free(&param, lo, hi, &outer, &mut filter));
                // odometer over the remaining outer columns
                let mut l = rest.len();
                loop {
                    if l == 0 {
                        return profile;
                    }
                    l -= 1;
                    if rest[l] < hi {
                        rest[l] += 1;
                        break;
                    }
                    rest[l] = lo;
                }
            }
        })
        .reduce(|| SupportProfile::with_width(m), SupportProfile::merge))
}

/// Counts solutions with the first `f - 1` free columns fixed to `outer`.
fn count_last_free(
    param: &Parametrization,
    lo: i64,
    hi: i64,
    outer: &[i64],
    filter: &mut ClassFilter<'_>,
) -> SupportProfile {
    let m = param.m;
    let f = param.free.len();
    let mut profile = SupportProfile::with_width(m);
    let (lo, hi) = (lo as i128, hi as i128);
    let mut coords = vec![Affine { constant: 0, slope: 0, den: 1 }; m];
    for (l, &col) in param.free.iter().enumerate() {
        coords[col] = if l + 1 == f {
            Affine { constant: 0, slope: 1, den: 1 }
        } else {
            Affine { constant: outer[l] as i128, slope: 0, den: 1 }
        };
    }
    let mut prog = Progression { lo, hi, residue: 0, modulus: 1 };
    for bc in &param.bound {
        let constant = bc.constant
            - outer.iter().zip(&bc.coeffs).map(|(&x, &c)| c * x as i128).sum::<i128>();
        let slope = -bc.coeffs[f - 1];
        coords[bc.col] = Affine { constant, slope, den: bc.den };
        // den * x = constant + slope * t must be divisible and in [lo, hi]
        if !prog.add_congruence(-slope, constant, bc.den) {
            return profile;
        }
        let (low, high) = (lo * bc.den - constant, hi * bc.den - constant);
        match slope.signum() {
            0 => {
                if low > 0 || high < 0 {
                    return profile;
                }
            }
            1 => {
                prog.lo = prog.lo.max(ceil_div(low, slope));
                prog.hi = prog.hi.min(floor_div(high, slope));
            }
            _ => {
                let s = -slope;
                prog.lo = prog.lo.max(ceil_div(-high, s));
                prog.hi = prog.hi.min(floor_div(-low, s));
            }
        }
    }
    let total = prog.count();
    if total == 0 {
        return profile;
    }

    // generic coincidences hold for every t; special ones at a single t
    let mut generic = (0..m).collect::<Vec<usize>>();
    let mut special: Vec<i128> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (ci, cj) = (coords[i], coords[j]);
            let coeff = ci.slope * cj.den - cj.slope * ci.den;
            let rhs = cj.constant * ci.den - ci.constant * cj.den;
            if coeff == 0 {
                if rhs == 0 {
                    union(&mut generic, i, j);
                }
            } else if rhs % coeff == 0 {
                let t = rhs / coeff;
                if prog.contains(t) && !special.contains(&t) {
                    special.push(t);
                }
            }
        }
    }
    let labels: Vec<usize> = (0..m).map(|i| find(&mut generic, i)).collect();
    let generic_pattern = pattern_of(&labels);
    if filter.accepts_pattern(&generic_pattern) {
        profile.by_support[generic_pattern.len()] += total - special.len() as u64;
    }
    for &t in &special {
        let x: Vec<i64> = coords.iter().map(|c| c.at(t) as i64).collect();
        let p = pattern_of(&x);
        if filter.accepts_pattern(&p) {
            profile.by_support[p.len()] += 1;
        }
    }
    profile
}

fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

fn union(parent: &mut [usize], i: usize, j: usize) {
    let (a, b) = (find(parent, i), find(parent, j));
    if a != b {
        parent[a.max(b)] = a.min(b);
    }
}

/// Maximum `l`-degree of the solution hypergraph on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub ell: usize,
    pub max_degree: u64,
    /// Lexicographically smallest `l`-set attaining the maximum.
    pub attaining: Vec<i64>,
}

/// Upper bound on enumerated solutions times `C(m, l)` before refusing.
pub const DEFAULT_DEGREE_WORK_CAP: u64 = 400_000_000;

/// For every `l`-subset `L` of `[n]`, counts ordered proper solutions whose
/// entry set contains `L`, and reports the maximum.
pub fn max_ell_degree(a: &LinearSystem, n: usize, ell: usize) -> Result<DegreeProfile> {
    let m = a.cols();
    if ell == 0 || ell > m {
        return Err(Error::InvalidArgument(format!("ell must lie in 1..={m}")));
    }
    let ground = GroundSet::range(n);
    let solutions = count_solutions(a, &ground, SolutionClass::Proper, None)?;
    let work = solutions.saturating_mul(binomial(m as u64, ell as u64));
    if work > DEFAULT_DEGREE_WORK_CAP {
        return Err(Error::TooLarge(format!("{work} subset updates for n = {n}, ell = {ell}")));
    }
    if n < ell {
        return Ok(DegreeProfile { ell, max_degree: 0, attaining: Vec::new() });
    }
    let table = BinomialTable::new(n, ell);
    let dense_size = table.get(n, ell);
    let mut dense: Option<Vec<u32>> = (dense_size <= 1 << 25).then(|| vec![0; dense_size as usize]);
    let mut sparse: HashMap<Vec<i64>, u64> = HashMap::new();
    let mut subset = vec![0usize; ell];
    for x in enumerate_solutions(a, &ground, SolutionClass::Proper, None)? {
        let mut s = x.clone();
        s.sort_unstable();
        for_each_combination(m, ell, &mut subset, &mut |idx| {
            match dense.as_mut() {
                Some(counts) => {
                    let rank = table.rank(idx.iter().map(|&i| (s[i] - 1) as u64));
                    counts[rank as usize] += 1;
                }
                None => {
                    *sparse.entry(idx.iter().map(|&i| s[i]).collect()).or_insert(0) += 1;
                }
            }
        });
    }
    let (max_degree, attaining) = match dense {
        Some(counts) => {
            let max = counts.iter().copied().max().unwrap_or(0) as u64;
            let best = counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c as u64 == max)
                .map(|(r, _)| table.unrank(r as u64, ell).into_iter().map(|v| v as i64 + 1).collect())
                .min()
                .unwrap_or_default();
            (max, best)
        }
        None => {
            let max = sparse.values().copied().max().unwrap_or(0);
            let best = if max == 0 {
                (1..=ell as i64).collect()
            } else {
                sparse.iter().filter(|(_, &c)| c == max).map(|(k, _)| k.clone()).min().unwrap()
            };
            (max, best)
        }
    };
    Ok(DegreeProfile { ell, max_degree, attaining })
}

/// `l! m^l max_{|Q| = l} n^{(m - rank A) - (|Q| - r_Q)}`.
pub fn degree_upper_bound(a: &LinearSystem, n: usize, ell: usize) -> Result<BigUint> {
    let m = a.cols();
    if ell == 0 || ell > m {
        return Err(Error::InvalidArgument(format!("ell must lie in 1..={m}")));
    }
    let ranks = ComplementRanks::compute(a, crate::classify::DEFAULT_DENSITY_CAP)?;
    let exponent = (1u64..1 << m)
        .filter(|mask| mask.count_ones() as usize == ell)
        .map(|mask| (m - a.rank()) + ranks.r_q_mask(mask) - ell)
        .max()
        .expect("some subset of size ell");
    let factorial: BigUint = (1..=ell as u64).map(BigUint::from).product();
    Ok(factorial * BigUint::from(m).pow(ell as u32) * BigUint::from(n).pow(exponent as u32))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn for_each_combination(m: usize, k: usize, idx: &mut [usize], f: &mut impl FnMut(&[usize])) {
    for (i, v) in idx.iter_mut().enumerate() {
        *v = i;
    }
    loop {
        f(idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Colexicographic ranking of `k`-subsets of `{0, .., n-1}`.
struct BinomialTable {
    table: Vec<Vec<u64>>,
}

impl BinomialTable {
    fn new(n: usize, k: usize) -> Self {
        let table = (0..=n)
            .map(|i| (0..=k).map(|j| binomial(i as u64, j as u64)).collect())
            .collect();
        Self { table }
    }

    fn get(&self, n: usize, k: usize) -> u64 {
        self.table[n][k]
    }

    /// `sorted` must be strictly increasing.
    fn rank(&self, sorted: impl Iterator<Item = u64>) -> u64 {
        sorted.enumerate().map(|(i, v)| self.table[v as usize][i + 1]).sum()
    }

    fn unrank(&self, mut rank: u64, k: usize) -> Vec<u64> {
        let mut out = vec![0; k];
        for i in (0..k).rev() {
            let mut v = i;
            while v + 1 < self.table.len() && self.table[v + 1][i + 1] <= rank {
                v += 1;
            }
            rank -= self.table[v][i + 1];
            out[i] = v as u64;
        }
        out
    }
}

/// Rational value of `n^e` helper used by callers needing `n^{m - rank}`.
pub fn trivial_upper_bound(a: &LinearSystem, n: usize) -> BigUint {
    BigUint::from(n).pow((a.cols() - a.rank()) as u32)
}

/// Whether `x` lies in `S(A, b)`.
pub fn satisfies(a: &LinearSystem, x: &[i64], b: Option<&[BigInt]>) -> Result<bool> {
    let x: Vec<BigInt> = x.iter().map(|&v| v.into()).collect();
    let lhs = a.matrix().mul_vec(&x)?;
    Ok(match b {
        Some(b) => lhs.as_slice() == b,
        None => lhs.iter().all(Zero::is_zero),
    })
}
