//! Maximum-weight k-matching over a dynamic (insert/delete) edge stream.
//!
//! Every vertex is mapped to `d2` indices by a [`HashScheme`] built for
//! subsets of size `2k`. An edge `uv` of weight `w` is fed to the l0-sampler
//! keyed `(i, j, w)` for every `i` in `G(u)` and `j` in `G(v)`; samplers are
//! created on first use. A query draws one edge from every sampler and solves
//! the resulting small graph exactly.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matching::{solve_exact, Edge, Matching, RealWeight, SmallGraph, Vertex};
use crate::partition::HashScheme;
use crate::sampler::{L0Sampler, SampleOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateOp {
    Insert,
    Delete,
}

/// One stream element. Weights are fixed-point integers (see [`crate::stream`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeUpdate {
    pub u: Vertex,
    pub v: Vertex,
    pub w: u64,
    pub op: UpdateOp,
}

impl EdgeUpdate {
    /// Normalizes endpoints so that `u < v`.
    pub fn new(a: Vertex, b: Vertex, w: u64, op: UpdateOp) -> Result<Self> {
        let e = Edge::new(a, b, w)?;
        Ok(Self { u: e.u, v: e.v, w, op })
    }

    pub fn insert(a: Vertex, b: Vertex, w: u64) -> Result<Self> {
        Self::new(a, b, w, UpdateOp::Insert)
    }

    pub fn delete(a: Vertex, b: Vertex, w: u64) -> Result<Self> {
        Self::new(a, b, w, UpdateOp::Delete)
    }

    pub fn edge(&self) -> Edge<u64> {
        Edge { w: self.w, u: self.u, v: self.v }
    }
}

/// How sampler keys treat weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightMode {
    /// One sampler family per distinct weight.
    Exact,
    /// Weights rounded up to powers of `1 + epsilon`. `scale` converts stored
    /// fixed-point weights to reals (`10^precision`).
    Rounded { epsilon: f64, scale: u64 },
}

/// Canonical index of the pair `u < v`: `v(v-1)/2 + u`.
pub fn edge_id(u: Vertex, v: Vertex, n: u64) -> Result<u64> {
    if v as u64 >= n {
        return Err(Error::Domain { value: v as u64, bound: n });
    }
    if u >= v {
        return Err(Error::Domain { value: u as u64, bound: v as u64 });
    }
    let v = v as u64;
    Ok(v * (v - 1) / 2 + u as u64)
}

/// Inverse of [`edge_id`].
pub fn edge_from_id(id: u64) -> (Vertex, Vertex) {
    // largest v with v(v-1)/2 <= id
    let mut v = ((1.0 + (1.0 + 8.0 * id as f64).sqrt()) / 2.0) as u64;
    while v * (v - 1) / 2 > id {
        v -= 1;
    }
    while (v + 1) * v / 2 <= id {
        v += 1;
    }
    let u = id - v * (v - 1) / 2;
    (u as Vertex, v as Vertex)
}

/// The unique `i` with `(1+eps)^(i-1) < w <= (1+eps)^i`.
pub fn weight_class(w: f64, epsilon: f64) -> Result<i64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!("epsilon {epsilon} outside (0, 1)")));
    }
    if w.is_nan() || w <= 0.0 || w.is_infinite() {
        return Err(Error::NonPositiveWeight);
    }
    let base = 1.0 + epsilon;
    let mut i = (w.ln() / base.ln()).ceil() as i64;
    while base.powi(i as i32 - 1) >= w {
        i -= 1;
    }
    while base.powi(i as i32) < w {
        i += 1;
    }
    Ok(i)
}

/// Representative weight `(1+eps)^i` of class `i`.
pub fn class_weight(class: i64, epsilon: f64) -> f64 {
    (1.0 + epsilon).powi(class as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SamplerKey {
    pub i: u64,
    pub j: u64,
    /// The weight itself in exact mode, the rounding class otherwise.
    pub class: i64,
}

/// Work done by the latest update.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpdateCost {
    pub touched_samplers: u64,
    pub created_samplers: u64,
    pub sampler_ops: u64,
    /// Largest possible `sampler_ops` for this update, from sampler shapes.
    pub sampler_ops_bound: u64,
}

/// Outcome counts over the samplers visited by one query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub sampled: u64,
    pub failed: u64,
    pub empty: u64,
}

/// A returned matching, carrying exact weights or rounded class weights.
#[derive(Debug, Clone, PartialEq)]
pub enum DynMatching {
    Exact(Matching<u64>),
    Rounded(Matching<RealWeight>),
}

impl DynMatching {
    pub fn endpoints(&self) -> Vec<(Vertex, Vertex)> {
        match self {
            DynMatching::Exact(m) => m.edges().iter().map(Edge::endpoints).collect(),
            DynMatching::Rounded(m) => m.edges().iter().map(Edge::endpoints).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            DynMatching::Exact(m) => m.len(),
            DynMatching::Rounded(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Weight as reported by the sketch (class weights in rounded mode).
    pub fn reported_weight(&self) -> f64 {
        match self {
            DynMatching::Exact(m) => m.weight() as f64,
            DynMatching::Rounded(m) => m.weight().0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DynamicMatcher {
    n: u64,
    k: usize,
    delta: f64,
    edge_domain: u64,
    mode: WeightMode,
    scheme: HashScheme,
    bank: BTreeMap<SamplerKey, L0Sampler>,
    sampler_rng: ChaCha8Rng,
    classes: BTreeSet<i64>,
    updates: u64,
    sampler_words: usize,
    last_cost: UpdateCost,
    gu: Vec<u64>,
    gv: Vec<u64>,
}

impl DynamicMatcher {
    /// Builds the hash scheme for subsets of size `2k` over `n` vertices.
    pub fn new<R: Rng + ?Sized>(n: u64, k: usize, mode: WeightMode, rng: &mut R) -> Result<Self> {
        if n < 2 || k == 0 || k as u64 > n / 2 {
            return Err(Error::param(format!("need 1 <= k <= n/2, got n={n} k={k}")));
        }
        if let WeightMode::Rounded { epsilon, scale } = mode {
            if !(epsilon > 0.0 && epsilon < 1.0) || scale == 0 {
                return Err(Error::param(format!("bad rounding parameters eps={epsilon} scale={scale}")));
            }
        }
        let scheme = HashScheme::build(n, 2 * k as u64, rng)?;
        let sampler_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        Ok(Self {
            n,
            k,
            delta: Self::sampler_delta(k),
            edge_domain: n * (n - 1) / 2,
            mode,
            scheme,
            bank: BTreeMap::new(),
            sampler_rng,
            classes: BTreeSet::new(),
            updates: 0,
            sampler_words: 0,
            last_cost: UpdateCost::default(),
            gu: Vec::new(),
            gv: Vec::new(),
        })
    }

    /// Per-sampler failure probability `1 / (20 k^4 ln 2k)`.
    pub fn sampler_delta(k: usize) -> f64 {
        let k = k as f64;
        1.0 / (20.0 * k.powi(4) * (2.0 * k).ln())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn scheme(&self) -> &HashScheme {
        &self.scheme
    }

    pub fn bank(&self) -> &BTreeMap<SamplerKey, L0Sampler> {
        &self.bank
    }

    pub fn bank_len(&self) -> usize {
        self.bank.len()
    }

    /// Distinct weight classes that have reached the bank.
    pub fn classes_seen(&self) -> &BTreeSet<i64> {
        &self.classes
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn last_cost(&self) -> UpdateCost {
        self.last_cost
    }

    /// Words held: sampler counters and randomness plus the hash scheme.
    pub fn stored_words(&self) -> usize {
        self.sampler_words + self.scheme.stored_words()
    }

    fn class_of(&self, w: u64) -> Result<i64> {
        match self.mode {
            WeightMode::Exact => i64::try_from(w).map_err(|_| Error::param(format!("weight {w} too large"))),
            WeightMode::Rounded { epsilon, scale } => weight_class(w as f64 / scale as f64, epsilon),
        }
    }

    pub fn update(&mut self, upd: &EdgeUpdate) -> Result<()> {
        let id = edge_id(upd.u, upd.v, self.n)?;
        let class = self.class_of(upd.w)?;
        let delta = match upd.op {
            UpdateOp::Insert => 1,
            UpdateOp::Delete => -1,
        };
        self.scheme.relation_into(upd.u as u64, &mut self.gu)?;
        self.scheme.relation_into(upd.v as u64, &mut self.gv)?;

        let mut cost = UpdateCost::default();
        let Self { bank, sampler_rng, gu, gv, edge_domain, delta: sampler_delta, sampler_words, .. } = self;
        for &i in gu.iter() {
            for &j in gv.iter() {
                let sampler = bank.entry(SamplerKey { i, j, class }).or_insert_with(|| {
                    cost.created_samplers += 1;
                    L0Sampler::new(*edge_domain, *sampler_delta, sampler_rng).expect("validated sampler parameters")
                });
                let before = sampler.stored_words();
                cost.sampler_ops += sampler.update(id, delta)?;
                cost.sampler_ops_bound += sampler.max_update_ops();
                cost.touched_samplers += 1;
                *sampler_words = *sampler_words + sampler.stored_words() - before;
            }
        }
        self.classes.insert(class);
        self.updates += 1;
        self.last_cost = cost;
        Ok(())
    }

    /// Checks the bank-size bounds: at most `classes * range^2` samplers, and
    /// at most `updates * d2^2`.
    pub fn bank_within_bounds(&self) -> bool {
        let p = self.scheme.params();
        let range = p.index_range() as u128;
        let d2 = p.d2 as u128;
        let len = self.bank.len() as u128;
        len <= self.classes.len() as u128 * range * range && len <= self.updates as u128 * d2 * d2
    }

    fn edge_weight(&self, class: i64) -> RealWeight {
        match self.mode {
            WeightMode::Rounded { epsilon, .. } => RealWeight(class_weight(class, epsilon)),
            WeightMode::Exact => RealWeight(class as f64),
        }
    }

    /// Samples every bank entry once and solves the sampled graph exactly.
    /// Does not modify the sketches.
    pub fn query(&self) -> Option<DynMatching> {
        self.query_with_stats().0
    }

    pub fn query_with_stats(&self) -> (Option<DynMatching>, QueryStats) {
        let mut stats = QueryStats::default();
        let mut sampled: Vec<(u64, i64)> = Vec::new();
        for (key, sampler) in &self.bank {
            match sampler.query() {
                SampleOutcome::Sampled(id) => {
                    stats.sampled += 1;
                    sampled.push((id, key.class));
                }
                SampleOutcome::Fail => stats.failed += 1,
                SampleOutcome::Empty => stats.empty += 1,
            }
        }
        let edges = sampled.into_iter().map(|(id, class)| {
            let (u, v) = edge_from_id(id);
            (Edge { w: (), u, v }, class)
        });
        let answer = match self.mode {
            WeightMode::Exact => {
                let g = SmallGraph::dedup(edges.map(|(e, c)| e.with_weight(c as u64)).collect());
                solve_exact(&g, self.k).map(DynMatching::Exact)
            }
            WeightMode::Rounded { .. } => {
                let g = SmallGraph::dedup(edges.map(|(e, c)| e.with_weight(self.edge_weight(c))).collect());
                solve_exact(&g, self.k).map(DynMatching::Rounded)
            }
        };
        (answer, stats)
    }
}
