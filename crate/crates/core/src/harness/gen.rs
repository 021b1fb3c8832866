//! Seeded stream generators.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dynamic::EdgeUpdate;
use crate::error::{Error, Result};
use crate::matching::{enumerate_oracle, solve_exact, Matching, SmallGraph, Vertex};
use crate::stream::{Header, LiveGraph, Record, StreamFile, StreamModel};

/// Parameters of a planted-matching stream.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub n: u64,
    pub k: usize,
    /// Noise weights are drawn from `1..=weights`.
    pub weights: u64,
    /// Number of updates.
    pub m: usize,
    /// Probability that a step deletes a live noise edge.
    pub del_rate: f64,
    /// Planted weights; by default drawn from the upper half of the palette.
    pub planted: Option<Vec<u64>>,
    pub model: StreamModel,
}

impl PlantedConfig {
    pub fn new(n: u64, k: usize, weights: u64, m: usize, del_rate: f64, model: StreamModel) -> Self {
        Self { n, k, weights, m, del_rate, planted: None, model }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k as u64 > self.n / 2 {
            return Err(Error::param(format!("need 1 <= k <= n/2, got n={} k={}", self.n, self.k)));
        }
        if self.weights == 0 {
            return Err(Error::param("weight palette must be non-empty"));
        }
        if self.m < self.k {
            return Err(Error::param(format!("m={} cannot hold {} planted edges", self.m, self.k)));
        }
        if !(0.0..1.0).contains(&self.del_rate) {
            return Err(Error::param(format!("del_rate {} outside [0, 1)", self.del_rate)));
        }
        if self.model == StreamModel::InsertOnly && self.del_rate > 0.0 {
            return Err(Error::param("insert-only streams cannot delete"));
        }
        if let Some(p) = &self.planted {
            if p.len() != self.k {
                return Err(Error::param(format!("{} planted weights given for k={}", p.len(), self.k)));
            }
        }
        let pairs = self.n * (self.n - 1) / 2;
        if self.model == StreamModel::InsertOnly && self.m as u64 > pairs {
            return Err(Error::param(format!("m={} exceeds the {pairs} vertex pairs", self.m)));
        }
        Ok(())
    }
}

/// A generated stream with the optimum of its final graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Planted {
    pub stream: StreamFile,
    pub opt: Option<Matching>,
}

fn random_pair<R: Rng + ?Sized>(n: u64, rng: &mut R) -> (Vertex, Vertex) {
    let a = rng.gen_range(0..n) as Vertex;
    let mut b = rng.gen_range(0..n - 1) as Vertex;
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

/// Largest `C(m, k)` for which the exhaustive oracle is used.
const ORACLE_SUBSETS: f64 = 2e7;

/// Maximum-weight `k`-matching of `g`: exhaustive when the instance is small
/// enough, branch and bound otherwise.
pub fn optimum(g: &SmallGraph, k: usize) -> Option<Matching> {
    let subsets: f64 = (0..k).map(|i| (g.len() as f64 - i as f64).max(0.0) / (i + 1) as f64).product();
    if subsets <= ORACLE_SUBSETS {
        enumerate_oracle(g, k)
    } else {
        solve_exact(g, k)
    }
}

/// Plants `k` disjoint edges among random noise; noise is inserted and, in
/// the dynamic model, deleted again at rate `del_rate`. Planted edges stay.
pub fn gen_planted<R: Rng + ?Sized>(cfg: &PlantedConfig, rng: &mut R) -> Result<Planted> {
    cfg.validate()?;
    let mut vertices: Vec<Vertex> = (0..cfg.n as Vertex).collect();
    vertices.shuffle(rng);
    let planted_w: Vec<u64> = match &cfg.planted {
        Some(p) => p.clone(),
        None => {
            let lo = cfg.weights.div_ceil(2).max(1);
            (0..cfg.k).map(|_| rng.gen_range(lo..=cfg.weights)).collect()
        }
    };
    let planted: Vec<EdgeUpdate> = (0..cfg.k)
        .map(|i| {
            let (a, b) = (vertices[2 * i], vertices[2 * i + 1]);
            EdgeUpdate::insert(a, b, planted_w[i])
        })
        .collect::<Result<_>>()?;
    let planted_pairs: BTreeSet<(Vertex, Vertex)> = planted.iter().map(|u| (u.u, u.v)).collect();

    let noise_steps = cfg.m - cfg.k;
    let mut slots: Vec<usize> = (0..cfg.m).collect();
    slots.shuffle(rng);
    let planted_at: BTreeMap<usize, usize> = slots[..cfg.k].iter().enumerate().map(|(i, &s)| (s, i)).collect();

    let mut weight_of: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
    let mut used: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut live: Vec<(Vertex, Vertex)> = Vec::new();
    let mut live_set: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut records = Vec::with_capacity(cfg.m + 1);
    let max_noise_pairs = cfg.n * (cfg.n - 1) / 2 - cfg.k as u64;
    let mut done_noise = 0;
    for step in 0..cfg.m {
        if let Some(&i) = planted_at.get(&step) {
            records.push(Record::Update(planted[i]));
            continue;
        }
        let delete = !live.is_empty()
            && (rng.gen_bool(cfg.del_rate) || live_set.len() as u64 >= max_noise_pairs);
        if delete {
            let idx = rng.gen_range(0..live.len());
            let pair = live.swap_remove(idx);
            live_set.remove(&pair);
            records.push(Record::Update(EdgeUpdate::delete(pair.0, pair.1, weight_of[&pair])?));
        } else {
            let pair = loop {
                let p = random_pair(cfg.n, rng);
                let fresh = match cfg.model {
                    StreamModel::InsertOnly => !used.contains(&p),
                    StreamModel::Dynamic => !live_set.contains(&p),
                };
                if fresh && !planted_pairs.contains(&p) {
                    break p;
                }
            };
            let w = *weight_of.entry(pair).or_insert_with(|| rng.gen_range(1..=cfg.weights));
            used.insert(pair);
            live.push(pair);
            live_set.insert(pair);
            records.push(Record::Update(EdgeUpdate::insert(pair.0, pair.1, w)?));
        }
        done_noise += 1;
    }
    debug_assert_eq!(done_noise, noise_steps);
    records.push(Record::Query);
    let stream = StreamFile { header: Header { n: cfg.n, k: cfg.k, precision: 0 }, records };
    let mut final_graph = LiveGraph::default();
    stream.updates().for_each(|u| final_graph.apply(u));
    let opt = optimum(&final_graph.graph(), cfg.k);
    Ok(Planted { stream, opt })
}

/// A dynamic stream whose final graph has no `k`-matching: every surviving
/// edge lies inside a fixed set of `2k - 1` vertices. Edges leaving that set
/// are inserted and all deleted again before the final query.
pub fn gen_no_matching<R: Rng + ?Sized>(
    n: u64,
    k: usize,
    weights: u64,
    m: usize,
    del_rate: f64,
    rng: &mut R,
) -> Result<StreamFile> {
    if k == 0 || k as u64 > n / 2 || weights == 0 {
        return Err(Error::param(format!("bad parameters n={n} k={k} weights={weights}")));
    }
    let mut vertices: Vec<Vertex> = (0..n as Vertex).collect();
    vertices.shuffle(rng);
    let core: Vec<Vertex> = vertices[..2 * k - 1].to_vec();
    let core_set: BTreeSet<Vertex> = core.iter().copied().collect();
    let mut core_pairs: Vec<(Vertex, Vertex)> = Vec::new();
    for (i, &a) in core.iter().enumerate() {
        for &b in &core[i + 1..] {
            core_pairs.push((a.min(b), a.max(b)));
        }
    }
    core_pairs.shuffle(rng);

    let mut weight_of: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
    let mut extra: Vec<(Vertex, Vertex)> = Vec::new();
    let mut extra_set: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut records = Vec::new();
    let mut weight = |pair, rng: &mut R| *weight_of.entry(pair).or_insert_with(|| rng.gen_range(1..=weights));
    for step in 0..m {
        let remaining = m - step;
        let can_delete = !extra.is_empty();
        let must_delete = extra.len() >= remaining;
        let can_insert_extra = extra.len() + 1 < remaining;
        let upd = if must_delete || (can_delete && rng.gen_bool(del_rate)) {
            let pair = extra.swap_remove(rng.gen_range(0..extra.len()));
            extra_set.remove(&pair);
            EdgeUpdate::delete(pair.0, pair.1, weight(pair, rng))?
        } else if !core_pairs.is_empty() && (!can_insert_extra || rng.gen_bool(0.5)) {
            let pair = core_pairs.pop().expect("non-empty");
            EdgeUpdate::insert(pair.0, pair.1, weight(pair, rng))?
        } else if can_insert_extra {
            let pair = loop {
                let p = random_pair(n, rng);
                let outside = !core_set.contains(&p.0) || !core_set.contains(&p.1);
                if outside && !extra_set.contains(&p) {
                    break p;
                }
            };
            extra.push(pair);
            extra_set.insert(pair);
            EdgeUpdate::insert(pair.0, pair.1, weight(pair, rng))?
        } else if can_delete {
            let pair = extra.swap_remove(rng.gen_range(0..extra.len()));
            extra_set.remove(&pair);
            EdgeUpdate::delete(pair.0, pair.1, weight(pair, rng))?
        } else {
            break;
        };
        records.push(Record::Update(upd));
    }
    debug_assert!(extra.is_empty());
    records.push(Record::Query);
    Ok(StreamFile { header: Header { n, k, precision: 0 }, records })
}

/// `m` distinct random edges with weights in `1..=weights`, followed by a query.
pub fn gen_random_inserts<R: Rng + ?Sized>(n: u64, k: usize, weights: u64, m: usize, rng: &mut R) -> Result<StreamFile> {
    if n < 2 || weights == 0 || m as u64 > n * (n - 1) / 2 {
        return Err(Error::param(format!("cannot draw {m} distinct edges on {n} vertices")));
    }
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut records = Vec::with_capacity(m + 1);
    while records.len() < m {
        let p = random_pair(n, rng);
        if seen.insert(p) {
            records.push(Record::Update(EdgeUpdate::insert(p.0, p.1, rng.gen_range(1..=weights))?));
        }
    }
    records.push(Record::Query);
    Ok(StreamFile { header: Header { n, k, precision: 0 }, records })
}
