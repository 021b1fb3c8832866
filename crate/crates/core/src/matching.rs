//! Edges, matchings, and exact maximum-weight k-matching on small edge sets.
//!
//! [`solve_exact`] is a branch and bound over edges in decreasing beta order;
//! [`enumerate_oracle`] is an independent exhaustive search used to check it.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt::Debug;
use std::ops::Add;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Edge weights usable by the solvers.
pub trait Weight: Copy + Ord + Default + Add<Output = Self> + Debug + Send + Sync {}

impl Weight for u64 {}

/// An `f64` weight with a total order, used for rounded class weights.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealWeight(pub f64);

impl PartialEq for RealWeight {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for RealWeight {}

impl PartialOrd for RealWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for RealWeight {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        RealWeight(self.0 + rhs.0)
    }
}

impl Weight for RealWeight {}

/// Beta key of an edge: weight, then smaller endpoint, then larger endpoint.
pub type BetaKey<W> = (W, Vertex, Vertex);

/// Undirected weighted edge with `u < v`.
///
/// Field order makes the derived `Ord` the beta order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge<W = u64> {
    pub w: W,
    pub u: Vertex,
    pub v: Vertex,
}

impl<W: Copy> Edge<W> {
    /// Normalizes the endpoint order. Self-loops are rejected.
    pub fn new(a: Vertex, b: Vertex, w: W) -> Result<Self> {
        match a.cmp(&b) {
            Ordering::Less => Ok(Self { w, u: a, v: b }),
            Ordering::Greater => Ok(Self { w, u: b, v: a }),
            Ordering::Equal => Err(Error::param(format!("self-loop at vertex {a}"))),
        }
    }

    pub fn beta(&self) -> BetaKey<W> {
        (self.w, self.u, self.v)
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }

    pub fn touches(&self, other: &Self) -> bool {
        self.u == other.u || self.u == other.v || self.v == other.u || self.v == other.v
    }

    pub fn with_weight<V>(&self, w: V) -> Edge<V> {
        Edge { w, u: self.u, v: self.v }
    }
}

/// A set of pairwise vertex-disjoint edges, stored in decreasing beta order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching<W = u64> {
    edges: Vec<Edge<W>>,
    weight: W,
}

impl<W: Weight> Matching<W> {
    /// Validates disjointness; the edges are re-sorted into decreasing beta order.
    pub fn new(mut edges: Vec<Edge<W>>) -> Result<Self> {
        validate_disjoint(&edges)?;
        edges.sort_unstable_by(|a, b| b.cmp(a));
        let weight = total_weight(&edges);
        Ok(Self { edges, weight })
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn weight(&self) -> W {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Beta keys in decreasing order; compared lexicographically to break ties.
    pub fn beta_sequence(&self) -> Vec<BetaKey<W>> {
        self.edges.iter().map(Edge::beta).collect()
    }

    /// Orders by weight, then by beta sequence.
    pub fn preference(&self, other: &Self) -> Ordering {
        self.weight.cmp(&other.weight).then_with(|| self.edges.cmp(&other.edges))
    }
}

fn total_weight<W: Weight>(edges: &[Edge<W>]) -> W {
    edges.iter().fold(W::default(), |acc, e| acc + e.w)
}

fn validate_disjoint<W>(edges: &[Edge<W>]) -> Result<()> {
    let mut seen = HashSet::with_capacity(2 * edges.len());
    for e in edges {
        if e.u >= e.v {
            return Err(Error::param(format!("edge ({}, {}) not normalized", e.u, e.v)));
        }
        if !seen.insert(e.u) || !seen.insert(e.v) {
            return Err(Error::param("edges share a vertex"));
        }
    }
    Ok(())
}

/// Independent check that `m` is a genuine `k`-matching whose edges all occur in `graph`.
pub fn is_valid_k_matching<W: Weight>(m: &Matching<W>, k: usize, graph: &[Edge<W>]) -> bool {
    let present: BTreeSet<&Edge<W>> = graph.iter().collect();
    let mut vertices = HashSet::new();
    m.edges().len() == k
        && m.edges().iter().all(|e| present.contains(e) && vertices.insert(e.u) && vertices.insert(e.v))
        && total_weight(m.edges()) == m.weight()
}

/// Edge list without repeated vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmallGraph<W = u64> {
    edges: Vec<Edge<W>>,
}

impl<W: Weight> SmallGraph<W> {
    pub fn new(edges: Vec<Edge<W>>) -> Result<Self> {
        let mut pairs = HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.u >= e.v {
                return Err(Error::param(format!("edge ({}, {}) not normalized", e.u, e.v)));
            }
            if !pairs.insert((e.u, e.v)) {
                return Err(Error::param(format!("duplicate edge ({}, {})", e.u, e.v)));
            }
        }
        Ok(Self { edges })
    }

    /// Keeps, for each vertex pair, the beta-largest copy.
    pub fn dedup(mut edges: Vec<Edge<W>>) -> Self {
        edges.sort_unstable_by(|a, b| (a.u, a.v, b.w).cmp(&(b.u, b.v, a.w)));
        edges.dedup_by_key(|e| (e.u, e.v));
        Self { edges }
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Maximum-weight matching with exactly `k` edges, if any exists. Among
/// equal-weight optima the lexicographically largest beta sequence wins.
pub fn solve_exact<W: Weight>(g: &SmallGraph<W>, k: usize) -> Option<Matching<W>> {
    if k == 0 {
        return Some(Matching { edges: vec![], weight: W::default() });
    }
    let mut edges = g.edges().to_vec();
    edges.sort_unstable_by(|a, b| b.cmp(a));
    let max_vertex = edges.iter().map(|e| e.v).max()? as usize;
    let mut search = BranchAndBound {
        edges: &edges,
        used: vec![false; max_vertex + 1],
        chosen: Vec::with_capacity(k),
        best: None,
    };
    search.run(0, k, W::default());
    search.best.map(|(idx, _)| {
        let edges: Vec<Edge<W>> = idx.iter().map(|&i| edges[i]).collect();
        let weight = total_weight(&edges);
        Matching { edges, weight }
    })
}

struct BranchAndBound<'a, W> {
    /// Sorted by decreasing beta.
    edges: &'a [Edge<W>],
    used: Vec<bool>,
    chosen: Vec<usize>,
    best: Option<(Vec<usize>, W)>,
}

impl<W: Weight> BranchAndBound<'_, W> {
    fn best_weight(&self) -> Option<W> {
        self.best.as_ref().map(|(_, w)| *w)
    }

    fn free(&self, e: &Edge<W>) -> bool {
        !self.used[e.u as usize] && !self.used[e.v as usize]
    }

    /// Sum of the `r` heaviest edges from `start` on that avoid used vertices,
    /// or `None` if fewer than `r` exist.
    fn optimistic(&self, start: usize, r: usize) -> Option<W> {
        let mut sum = W::default();
        let mut found = 0;
        for e in &self.edges[start..] {
            if found == r {
                break;
            }
            if self.free(e) {
                sum = sum + e.w;
                found += 1;
            }
        }
        (found == r).then_some(sum)
    }

    fn run(&mut self, start: usize, r: usize, current: W) {
        if r == 0 {
            // DFS visits equal-weight solutions in decreasing beta-sequence
            // order, so only strict improvements replace the incumbent
            if self.best_weight().is_none_or(|b| current > b) {
                self.best = Some((self.chosen.clone(), current));
            }
            return;
        }
        let best = self.best_weight();
        match self.optimistic(start, r) {
            None => return,
            Some(bound) => {
                if best.is_some_and(|b| current + bound <= b) {
                    return;
                }
            }
        }
        for i in start..self.edges.len() {
            if self.edges.len() - i < r {
                break;
            }
            let e = self.edges[i];
            if !self.free(&e) {
                continue;
            }
            let best = self.best_weight();
            if let Some(b) = best {
                let mut cap = current;
                for _ in 0..r {
                    cap = cap + e.w;
                }
                if cap <= b {
                    break;
                }
            }
            self.used[e.u as usize] = true;
            self.used[e.v as usize] = true;
            self.chosen.push(i);
            self.run(i + 1, r - 1, current + e.w);
            self.chosen.pop();
            self.used[e.u as usize] = false;
            self.used[e.v as usize] = false;
        }
    }
}

/// Exhaustive maximum over all `k`-matchings. Exponential; for small inputs.
pub fn enumerate_oracle<W: Weight>(g: &SmallGraph<W>, k: usize) -> Option<Matching<W>> {
    enumerate_filtered(g.edges(), k, |_| true)
}

/// Exhaustive maximum over `k`-matchings whose `2k` endpoints lie in `2k`
/// distinct parts of `part`.
pub fn max_nice_matching<W: Weight, F: Fn(Vertex) -> u64>(g: &SmallGraph<W>, part: F, k: usize) -> Option<Matching<W>> {
    enumerate_filtered(g.edges(), k, |m: &[Edge<W>]| {
        let mut parts = HashSet::with_capacity(2 * m.len());
        m.iter().all(|e| parts.insert(part(e.u)) && parts.insert(part(e.v)))
    })
}

fn enumerate_filtered<W: Weight>(
    edges: &[Edge<W>],
    k: usize,
    accept: impl Fn(&[Edge<W>]) -> bool,
) -> Option<Matching<W>> {
    let mut best: Option<Matching<W>> = None;
    let mut stack: Vec<Edge<W>> = Vec::with_capacity(k);
    let mut consider = |chosen: &[Edge<W>]| {
        if best.as_ref().is_some_and(|b| total_weight(chosen) < b.weight()) || !accept(chosen) {
            return;
        }
        let cand = Matching::new(chosen.to_vec()).expect("enumeration keeps edges disjoint");
        if best.as_ref().is_none_or(|b| cand.preference(b) == Ordering::Greater) {
            best = Some(cand);
        }
    };
    enumerate_rec(edges, 0, k, &mut stack, &mut consider);
    best
}

fn enumerate_rec<W: Copy, F: FnMut(&[Edge<W>])>(
    edges: &[Edge<W>],
    start: usize,
    k: usize,
    stack: &mut Vec<Edge<W>>,
    visit: &mut F,
) {
    if stack.len() == k {
        visit(stack);
        return;
    }
    for i in start..edges.len() {
        let e = edges[i];
        if stack.iter().any(|s| s.u == e.u || s.u == e.v || s.v == e.u || s.v == e.v) {
            continue;
        }
        stack.push(e);
        enumerate_rec(edges, i + 1, k, stack, visit);
        stack.pop();
    }
}
