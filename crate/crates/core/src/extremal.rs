//! Largest solution-free subsets and supersaturation probes.
//!
//! A ground set `T` and a solution class give a hypergraph on `T` whose edges
//! are the supports of the solutions; a subset is solution-free iff it is
//! independent. Edges that contain another edge are dropped.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::solutions::{enumerate_solutions, GroundSet, SolutionClass};
use crate::system::LinearSystem;

/// Node and wall-clock limits for exact searches. Both are optional.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(limit: u64) -> Self {
        Self { nodes: Some(limit), time: None }
    }

    pub fn time(limit: Duration) -> Self {
        Self { nodes: None, time: Some(limit) }
    }
}

struct Meter {
    budget: Budget,
    start: Instant,
    nodes: u64,
    exhausted: bool,
}

impl Meter {
    fn new(budget: Budget) -> Self {
        Self { budget, start: Instant::now(), nodes: 0, exhausted: false }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.budget.nodes.is_some_and(|limit| self.nodes > limit) {
            self.exhausted = true;
        }
        if self.nodes.is_multiple_of(1024) && self.budget.time.is_some_and(|t| self.start.elapsed() > t) {
            self.exhausted = true;
        }
        !self.exhausted
    }
}

/// Outcome of an exact decision procedure that may run out of budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    True,
    False,
    Indeterminate,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Decision::True => Some(true),
            Decision::False => Some(false),
            Decision::Indeterminate => None,
        }
    }
}

/// Minimal solution supports on a ground set, as vertex indices.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    vertices: Vec<i64>,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn of_solutions(a: &LinearSystem, t: &GroundSet, class: SolutionClass) -> Result<Self> {
        let vertices = t.elements().to_vec();
        let mut supports: HashSet<Vec<usize>> = HashSet::new();
        for x in enumerate_solutions(a, t, class, None)? {
            let mut s: Vec<usize> =
                x.iter().map(|v| vertices.binary_search(v).expect("entry in T")).collect();
            s.sort_unstable();
            s.dedup();
            supports.insert(s);
        }
        Ok(Self::from_edges(vertices, supports.into_iter().collect()))
    }

    /// Keeps only inclusion-minimal edges, sorted by size then lexicographically.
    pub fn from_edges(vertices: Vec<i64>, edges: Vec<Vec<usize>>) -> Self {
        let all: HashSet<Vec<usize>> = edges.iter().cloned().collect();
        let mut edges: Vec<Vec<usize>> = all
            .iter()
            .filter(|e| !has_proper_subset_in(e, &all))
            .cloned()
            .collect();
        edges.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v].push(k);
            }
        }
        Self { vertices, edges, incidence }
    }

    pub fn vertices(&self) -> &[i64] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Indices of the edges containing `v`.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn is_independent(&self, chosen: &[bool]) -> bool {
        self.edges.iter().all(|e| e.iter().any(|&v| !chosen[v]))
    }

    /// Vertices in decreasing degree order, ties by value.
    fn order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        order
    }
}

fn has_proper_subset_in(e: &[usize], all: &HashSet<Vec<usize>>) -> bool {
    let k = e.len();
    if k > 20 {
        return all.iter().any(|f| f.len() < k && f.iter().all(|v| e.contains(v)));
    }
    (1u32..(1 << k) - 1).any(|mask| {
        let sub: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| e[i]).collect();
        all.contains(&sub)
    })
}

/// Largest solution-free subset found, with a certificate of optimality or an
/// upper bound when the budget ran out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalResult {
    pub n: usize,
    pub value: usize,
    pub witness: GroundSet,
    pub exact: bool,
    pub upper_bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Undecided,
    In,
    Out,
}

struct Search<'a> {
    h: &'a Hypergraph,
    order: Vec<usize>,
    state: Vec<State>,
    in_count: Vec<usize>,
    out_count: Vec<usize>,
    undecided: usize,
    chosen: usize,
    best: usize,
    best_set: Option<Vec<usize>>,
    stop_at: Option<usize>,
    open_bound: usize,
    meter: Meter,
    trail: Vec<(usize, State)>,
    mark: Vec<u64>,
    stamp: u64,
}

impl<'a> Search<'a> {
    fn new(h: &'a Hypergraph, budget: Budget, floor: usize, stop_at: Option<usize>) -> Self {
        let n = h.vertices.len();
        Self {
            h,
            order: h.order(),
            state: vec![State::Undecided; n],
            in_count: vec![0; h.edges.len()],
            out_count: vec![0; h.edges.len()],
            undecided: n,
            chosen: 0,
            best: floor,
            best_set: None,
            stop_at,
            open_bound: 0,
            meter: Meter::new(budget),
            trail: Vec::new(),
            mark: vec![0; n],
            stamp: 0,
        }
    }

    fn set(&mut self, v: usize, s: State) {
        self.trail.push((v, self.state[v]));
        self.state[v] = s;
        self.undecided -= 1;
        match s {
            State::In => {
                self.chosen += 1;
                for &e in &self.h.incidence[v] {
                    self.in_count[e] += 1;
                }
            }
            State::Out => {
                for &e in &self.h.incidence[v] {
                    self.out_count[e] += 1;
                }
            }
            State::Undecided => unreachable!(),
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let (v, prev) = self.trail.pop().expect("nonempty trail");
            match self.state[v] {
                State::In => {
                    self.chosen -= 1;
                    for &e in &self.h.incidence[v] {
                        self.in_count[e] -= 1;
                    }
                }
                State::Out => {
                    for &e in &self.h.incidence[v] {
                        self.out_count[e] -= 1;
                    }
                }
                State::Undecided => unreachable!(),
            }
            self.state[v] = prev;
            self.undecided += 1;
        }
    }

    /// Puts `v` in and forces out the last free vertex of every edge that is
    /// now one short of complete. False if `v` cannot go in.
    fn include(&mut self, v: usize) -> bool {
        let h = self.h;
        if h.incidence[v]
            .iter()
            .any(|&e| self.out_count[e] == 0 && self.in_count[e] + 1 == h.edges[e].len())
        {
            return false;
        }
        self.set(v, State::In);
        for &e in &h.incidence[v] {
            if self.out_count[e] == 0 && self.in_count[e] + 1 == h.edges[e].len() {
                let u = h.edges[e]
                    .iter()
                    .copied()
                    .find(|&u| self.state[u] == State::Undecided)
                    .expect("one vertex left");
                self.set(u, State::Out);
            }
        }
        true
    }

    /// `|In| + |Undecided|` minus a greedy packing of live edges that are
    /// disjoint on their undecided vertices.
    fn bound(&mut self) -> usize {
        self.stamp += 1;
        let mut packed = 0;
        for (e, edge) in self.h.edges.iter().enumerate() {
            if self.out_count[e] > 0 {
                continue;
            }
            let free = edge.iter().filter(|&&u| self.state[u] == State::Undecided);
            if free.clone().any(|&u| self.mark[u] == self.stamp) {
                continue;
            }
            for &u in free {
                self.mark[u] = self.stamp;
            }
            packed += 1;
        }
        self.chosen + self.undecided - packed
    }

    /// Vertices forming a one-element edge can never be chosen.
    fn exclude_loops(&mut self) {
        for edge in &self.h.edges {
            if edge.len() == 1 && self.state[edge[0]] == State::Undecided {
                self.set(edge[0], State::Out);
            }
        }
    }

    fn done(&self) -> bool {
        self.stop_at.is_some_and(|k| self.best >= k)
    }

    fn run(&mut self, pos: usize) {
        if !self.meter.tick() {
            self.open_bound = self.open_bound.max(self.chosen + self.undecided);
            return;
        }
        let bound = self.bound();
        if bound <= self.best {
            return;
        }
        let mut pos = pos;
        while pos < self.order.len() && self.state[self.order[pos]] != State::Undecided {
            pos += 1;
        }
        if pos == self.order.len() {
            self.best = self.chosen;
            self.best_set = Some((0..self.state.len()).filter(|&v| self.state[v] == State::In).collect());
            return;
        }
        let v = self.order[pos];
        let mark = self.trail.len();
        if self.include(v) {
            self.run(pos + 1);
        }
        self.undo_to(mark);
        if self.meter.exhausted {
            self.open_bound = self.open_bound.max(bound);
            return;
        }
        if self.done() {
            return;
        }
        self.set(v, State::Out);
        self.run(pos + 1);
        self.undo_to(mark);
    }
}

/// Largest subset of `T` containing no solution of the given class.
pub fn max_free_subset(
    a: &LinearSystem,
    t: &GroundSet,
    class: SolutionClass,
    budget: Budget,
) -> Result<ExtremalResult> {
    let h = Hypergraph::of_solutions(a, t, class)?;
    Ok(max_independent(&h, budget))
}

pub fn max_independent(h: &Hypergraph, budget: Budget) -> ExtremalResult {
    let mut search = Search::new(h, budget, 0, None);
    search.exclude_loops();
    search.run(0);
    let chosen = search.best_set.clone().unwrap_or_default();
    let exact = !search.meter.exhausted;
    let upper_bound = if exact { search.best } else { search.best.max(search.open_bound) };
    ExtremalResult {
        n: h.vertices.len(),
        value: chosen.len(),
        witness: GroundSet::new(chosen.iter().map(|&v| h.vertices[v]).collect())
            .expect("subset of a ground set"),
        exact,
        upper_bound,
    }
}

/// Whether some independent set has at least `k` vertices; the witness is
/// returned when one is found.
pub fn has_independent_set(h: &Hypergraph, k: usize, budget: Budget) -> (Decision, Option<Vec<i64>>) {
    if k == 0 {
        return (Decision::True, Some(Vec::new()));
    }
    let mut search = Search::new(h, budget, k - 1, Some(k));
    search.exclude_loops();
    search.run(0);
    match search.best_set {
        Some(set) => (Decision::True, Some(set.into_iter().map(|v| h.vertices[v]).collect())),
        None if search.meter.exhausted => (Decision::Indeterminate, None),
        None => (Decision::False, None),
    }
}

/// `ex(n, A)`: the largest subset of `[n]` without a proper solution.
pub fn extremal_number(a: &LinearSystem, n: usize, budget: Budget) -> Result<ExtremalResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    max_free_subset(a, &GroundSet::range(n), SolutionClass::Proper, budget)
}

/// Finite-`n` values of `ex(n, A) / n`. These are not limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityPoint {
    pub n: usize,
    pub ex: usize,
    pub ratio: BigRational,
    pub exact: bool,
}

pub fn pi_sequence(a: &LinearSystem, ns: &[usize], budget: Budget) -> Result<Vec<DensityPoint>> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n values must be strictly increasing".into()));
    }
    ns.iter()
        .map(|&n| {
            let r = extremal_number(a, n, budget)?;
            Ok(DensityPoint {
                n,
                ex: r.value,
                ratio: BigRational::new(r.value.into(), n.into()),
                exact: r.exact,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupersatMode {
    /// Every subset of the required size; refused above `cap` subsets.
    Exact { cap: u64 },
    /// `samples` uniform subsets of the required size.
    Sampled { samples: usize, seed: u64 },
}

pub const DEFAULT_SUPERSAT_CAP: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupersaturationReport {
    pub n: usize,
    pub delta: BigRational,
    pub size: usize,
    pub min_count: u64,
    pub total_count: u64,
    pub zeta_empirical: BigRational,
    pub witness: GroundSet,
    pub exact: bool,
}

/// Minimum number of ordered proper solutions inside a subset of `[n]` of
/// size `ceil(delta n)`.
pub fn supersaturation_min(
    a: &LinearSystem,
    n: usize,
    delta: &BigRational,
    mode: SupersatMode,
) -> Result<SupersaturationReport> {
    if delta.is_negative() || *delta > BigRational::from_integer(1.into()) {
        return Err(Error::InvalidArgument("delta must lie in [0, 1]".into()));
    }
    let scaled = delta * BigRational::from_integer(BigInt::from(n));
    let size = scaled.ceil().to_integer().to_usize().expect("at most n");
    let ground = GroundSet::range(n);
    let mut supports: Vec<(Vec<usize>, u64)> = Vec::new();
    {
        let mut index = std::collections::HashMap::new();
        for x in enumerate_solutions(a, &ground, SolutionClass::Proper, None)? {
            let mut s: Vec<usize> = x.iter().map(|&v| v as usize - 1).collect();
            s.sort_unstable();
            s.dedup();
            *index.entry(s).or_insert(0u64) += 1;
        }
        supports.extend(index);
        supports.sort();
    }
    let total: u64 = supports.iter().map(|(_, w)| w).sum();
    let count_in = |chosen: &[bool]| -> u64 {
        supports.iter().filter(|(s, _)| s.iter().all(|&v| chosen[v])).map(|(_, w)| w).sum()
    };

    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut consider = |subset: &[usize]| {
        let mut chosen = vec![false; n];
        subset.iter().for_each(|&v| chosen[v] = true);
        let c = count_in(&chosen);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, subset.to_vec()));
        }
    };
    let exact = match mode {
        SupersatMode::Exact { cap } => {
            let subsets = binomial_capped(n as u64, size as u64, cap);
            if subsets > cap {
                return Err(Error::TooLarge(format!("C({n}, {size}) subsets exceeds cap {cap}")));
            }
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                consider(&idx);
                let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else { break };
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
            true
        }
        SupersatMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples.max(1) {
                let mut subset = sample(&mut rng, n, size).into_vec();
                subset.sort_unstable();
                consider(&subset);
            }
            size == n
        }
    };
    let (min_count, witness) = best.expect("at least one subset considered");
    let zeta_empirical = if total == 0 {
        BigRational::zero()
    } else {
        BigRational::new(min_count.into(), total.into())
    };
    Ok(SupersaturationReport {
        n,
        delta: delta.clone(),
        size,
        min_count,
        total_count: total,
        zeta_empirical,
        witness: GroundSet::new(witness.iter().map(|&v| v as i64 + 1).collect())?,
        exact,
    })
}

fn binomial_capped(n: u64, k: u64, cap: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return cap + 1;
        }
    }
    acc as u64
}
