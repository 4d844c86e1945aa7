//! Exact deciders for `T ->_eps A` and `T ->_s A` and their class variants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::extremal::{has_independent_set, Budget, Decision, Hypergraph};
use crate::solutions::{GroundSet, SolutionClass};
use crate::system::LinearSystem;

/// A decision with the object refuting the arrow when it fails: a
/// solution-free subset for `->_eps`, a colour class list for `->_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Decision,
    pub witness: Option<Vec<Vec<i64>>>,
}

/// Every subset of `T` with at least `eps |T|` elements contains a solution
/// of the class.
pub fn arrow_epsilon(
    a: &LinearSystem,
    t: &GroundSet,
    eps: &BigRational,
    class: SolutionClass,
    budget: Budget,
) -> Result<Verdict> {
    if !eps.is_positive() || *eps > BigRational::from_integer(1.into()) {
        return Err(Error::InvalidArgument("epsilon must lie in (0, 1]".into()));
    }
    let h = Hypergraph::of_solutions(a, t, class)?;
    let k = (eps * BigRational::from_integer(BigInt::from(t.len())))
        .ceil()
        .to_integer()
        .to_usize()
        .expect("at most |T|");
    Ok(match has_independent_set(&h, k, budget) {
        (Decision::True, witness) => {
            Verdict { decision: Decision::False, witness: witness.map(|w| vec![w]) }
        }
        (Decision::False, _) => Verdict { decision: Decision::True, witness: None },
        (Decision::Indeterminate, _) => Verdict { decision: Decision::Indeterminate, witness: None },
    })
}

/// Every `s`-colouring of `T` has a monochromatic solution of the class.
pub fn arrow_s(
    a: &LinearSystem,
    t: &GroundSet,
    s: usize,
    class: SolutionClass,
    budget: Budget,
) -> Result<Verdict> {
    if s == 0 || s > 64 {
        return Err(Error::InvalidArgument("s must lie in 1..=64".into()));
    }
    let h = Hypergraph::of_solutions(a, t, class)?;
    let mut c = Colouring::new(&h, s, budget);
    Ok(match c.solve() {
        Decision::False => {
            let mut classes = vec![Vec::new(); c.used];
            for (v, &col) in c.colour.iter().enumerate() {
                classes[col].push(h.vertices()[v]);
            }
            Verdict { decision: Decision::False, witness: Some(classes) }
        }
        d => Verdict { decision: d, witness: None },
    })
}

/// Whether each class is free of monochromatic edges.
pub fn is_valid_colouring(h: &Hypergraph, colour: &[usize]) -> bool {
    h.edges().iter().all(|e| e.iter().any(|&v| colour[v] != colour[e[0]]))
}

const UNCOLOURED: usize = usize::MAX;

struct Colouring<'a> {
    h: &'a Hypergraph,
    s: usize,
    order: Vec<usize>,
    colour: Vec<usize>,
    // count[e * s + c]: vertices of edge e with colour c
    count: Vec<usize>,
    uncoloured: Vec<usize>,
    // forbidden[v * s + c]: edges that would turn monochromatic
    forbidden: Vec<usize>,
    used: usize,
    budget: Budget,
    nodes: u64,
    start: std::time::Instant,
    exhausted: bool,
}

impl<'a> Colouring<'a> {
    fn new(h: &'a Hypergraph, s: usize, budget: Budget) -> Self {
        let n = h.vertices().len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
        Self {
            h,
            s,
            order,
            colour: vec![UNCOLOURED; n],
            count: vec![0; h.edges().len() * s],
            uncoloured: h.edges().iter().map(Vec::len).collect(),
            forbidden: vec![0; n * s],
            used: 0,
            budget,
            nodes: 0,
            start: std::time::Instant::now(),
            exhausted: false,
        }
    }

    fn solve(&mut self) -> Decision {
        if self.h.edges().iter().any(|e| e.len() == 1) {
            return Decision::True;
        }
        if self.search(0) {
            return Decision::False;
        }
        if self.exhausted {
            Decision::Indeterminate
        } else {
            Decision::True
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.budget.nodes.is_some_and(|l| self.nodes > l)
            || (self.nodes.is_multiple_of(1024) && self.budget.time.is_some_and(|t| self.start.elapsed() > t))
        {
            self.exhausted = true;
        }
        !self.exhausted
    }

    /// Colours `v` with `c` and records the colours this forbids on the last
    /// uncoloured vertex of each edge. The flag is false if some vertex loses
    /// every colour.
    fn assign(&mut self, v: usize, c: usize) -> (Vec<(usize, usize)>, bool) {
        let s = self.s;
        self.colour[v] = c;
        let mut forbids = Vec::new();
        let mut ok = true;
        let h = self.h;
        for &e in h.incident_edges(v) {
            self.count[e * s + c] += 1;
            self.uncoloured[e] -= 1;
        }
        for &e in h.incident_edges(v) {
            let edge = &h.edges()[e];
            if self.uncoloured[e] != 1 {
                continue;
            }
            let u = edge.iter().copied().find(|&u| self.colour[u] == UNCOLOURED).expect("one left");
            // the remaining vertex must avoid any colour held by all the others
            for col in 0..s {
                if self.count[e * s + col] == edge.len() - 1 {
                    self.forbidden[u * s + col] += 1;
                    forbids.push((u, col));
                    if (0..s).all(|k| self.forbidden[u * s + k] > 0) {
                        ok = false;
                    }
                }
            }
        }
        (forbids, ok)
    }

    fn unassign(&mut self, v: usize, forbids: Vec<(usize, usize)>) {
        let s = self.s;
        let c = self.colour[v];
        for (u, col) in forbids {
            self.forbidden[u * s + col] -= 1;
        }
        for &e in self.h.incident_edges(v) {
            self.count[e * s + c] -= 1;
            self.uncoloured[e] += 1;
        }
        self.colour[v] = UNCOLOURED;
    }

    fn search(&mut self, pos: usize) -> bool {
        if !self.tick() {
            return false;
        }
        if pos == self.order.len() {
            return true;
        }
        let v = self.order[pos];
        // new colours are opened in order, so colourings differing by a
        // relabelling are visited once
        let limit = (self.used + 1).min(self.s);
        for c in 0..limit {
            if self.forbidden[v * self.s + c] > 0 {
                continue;
            }
            let opened = c == self.used;
            if opened {
                self.used += 1;
            }
            let (forbids, ok) = self.assign(v, c);
            if ok && self.search(pos + 1) {
                return true;
            }
            self.unassign(v, forbids);
            if opened {
                self.used -= 1;
            }
            if self.exhausted {
                return false;
            }
        }
        false
    }
}
