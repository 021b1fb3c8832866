//! Seeded Monte-Carlo trials and instrumentation.
//!
//! Seeds: a master seed `s` yields the sub-seed `mix(mix(s ^ tag * C) ^ index)`
//! for component `tag` and trial `index`, where `mix` is the SplitMix64
//! finalizer. Each sub-seed initializes its own ChaCha8 generator, so trials
//! are independent of scheduling order.

mod gen;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use gen::{gen_no_matching, gen_planted, gen_random_inserts, optimum, Planted, PlantedConfig};

use crate::dynamic::{DynamicMatcher, EdgeUpdate, UpdateOp, WeightMode};
use crate::error::{Error, Result};
use crate::insert_only::InsertOnlyMatcher;
use crate::matching::{Matching, Vertex};
use crate::stream::{LiveGraph, Record, StreamFile};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Component tags for [`sub_seed`].
pub mod tag {
    pub const STREAM: u64 = 1;
    pub const ALGORITHM: u64 = 2;
}

pub fn sub_seed(master: u64, tag: u64, index: u64) -> u64 {
    splitmix(splitmix(master ^ tag.wrapping_mul(GOLDEN)) ^ index)
}

pub fn sub_rng(master: u64, tag: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sub_seed(master, tag, index))
}

/// Which streaming algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Dynamic,
    DynamicApprox { epsilon: f64 },
    InsertOnly { delta: f64 },
}

/// A live algorithm instance behind one interface.
#[derive(Debug, Clone)]
pub enum Engine {
    Dynamic(Box<DynamicMatcher>),
    InsertOnly(InsertOnlyMatcher),
}

/// Endpoints of an answer and the weight the algorithm reports for it, in
/// scaled units.
#[derive(Debug, Clone, PartialEq)]
pub struct Answer {
    pub edges: Vec<(Vertex, Vertex)>,
    pub reported_weight: f64,
}

impl Engine {
    /// `scale` is `10^precision` of the stream weights.
    pub fn new(algorithm: Algorithm, n: u64, k: usize, scale: u64, rng: &mut ChaCha8Rng) -> Result<Self> {
        Ok(match algorithm {
            Algorithm::Dynamic => Engine::Dynamic(Box::new(DynamicMatcher::new(n, k, WeightMode::Exact, rng)?)),
            Algorithm::DynamicApprox { epsilon } => {
                Engine::Dynamic(Box::new(DynamicMatcher::new(n, k, WeightMode::Rounded { epsilon, scale }, rng)?))
            }
            Algorithm::InsertOnly { delta } => Engine::InsertOnly(InsertOnlyMatcher::new(n, k, delta, rng)?),
        })
    }

    pub fn update(&mut self, upd: &EdgeUpdate) -> Result<()> {
        match self {
            Engine::Dynamic(d) => d.update(upd),
            Engine::InsertOnly(m) => match upd.op {
                UpdateOp::Insert => m.update(upd.edge()),
                UpdateOp::Delete => Err(Error::Model("deletion fed to the insert-only matcher".into())),
            },
        }
    }

    pub fn query(&self) -> Option<Answer> {
        match self {
            Engine::Dynamic(d) => d.query().map(|m| Answer { edges: m.endpoints(), reported_weight: m.reported_weight() }),
            Engine::InsertOnly(m) => m.query().map(|m| Answer {
                edges: m.edges().iter().map(|e| e.endpoints()).collect(),
                reported_weight: m.weight() as f64,
            }),
        }
    }

    pub fn last_update_ops(&self) -> u64 {
        match self {
            Engine::Dynamic(d) => d.last_cost().sampler_ops,
            Engine::InsertOnly(m) => m.last_update_ops(),
        }
    }

    pub fn stored_words(&self) -> usize {
        match self {
            Engine::Dynamic(d) => d.stored_words(),
            Engine::InsertOnly(m) => m.stored_words(),
        }
    }

    /// Checks the space and time bounds after an update.
    pub fn bounds_hold(&self) -> bool {
        match self {
            Engine::Dynamic(d) => {
                let c = d.last_cost();
                let d2 = d.scheme().params().d2 as u64;
                d.bank_within_bounds() && c.touched_samplers == d2 * d2 && c.sampler_ops <= c.sampler_ops_bound
            }
            Engine::InsertOnly(m) => {
                m.last_update_ops() <= m.max_update_ops()
                    && m.copies().iter().all(|c| c.stored_edges() <= 5 * c.q() && c.reduced().len() <= c.q())
            }
        }
    }
}

/// Checks `answer` against the live graph: `k` vertex-disjoint live edges.
/// Returns the true weight when valid.
pub fn true_weight(answer: &Answer, live: &LiveGraph, k: usize) -> Option<u64> {
    if answer.edges.len() != k {
        return None;
    }
    let mut seen = std::collections::HashSet::new();
    let mut total = 0u64;
    for &(u, v) in &answer.edges {
        if !seen.insert(u) || !seen.insert(v) {
            return None;
        }
        total += live.weight(u, v)?;
    }
    Some(total)
}

/// How the trial streams are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Workload {
    Planted(PlantedConfig),
    NoMatching { n: u64, k: usize, weights: u64, m: usize, del_rate: f64 },
}

impl Workload {
    pub fn k(&self) -> usize {
        match self {
            Workload::Planted(c) => c.k,
            Workload::NoMatching { k, .. } => *k,
        }
    }

    pub fn generate(&self, rng: &mut ChaCha8Rng) -> Result<StreamFile> {
        match self {
            Workload::Planted(c) => gen_planted(c, rng).map(|p| p.stream),
            Workload::NoMatching { n, k, weights, m, del_rate } => gen_no_matching(*n, *k, *weights, *m, *del_rate, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub algorithm: Algorithm,
    pub workload: Workload,
    pub trials: usize,
    pub seed: u64,
}

/// Result of replaying one stream.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StreamOutcome {
    pub queries: usize,
    /// Queries whose graph has a `k`-matching.
    pub with_matching: usize,
    /// Queries answered with an optimal (exact mode) or `(1-eps)`-close
    /// (rounded mode) `k`-matching.
    pub correct: usize,
    /// Non-empty answers on queries whose graph has a `k`-matching.
    pub answered: usize,
    /// Answers that are not a `k`-matching of the live graph.
    pub violations: usize,
    /// Smallest `true / optimum` ratio over answered queries.
    pub worst_ratio: Option<f64>,
    pub max_update_ops: u64,
    pub peak_stored_words: usize,
    pub bound_failures: usize,
    pub classes_seen: usize,
    /// Rounded mode only: more weight classes than `ceil(log_{1+eps} W') + 1`,
    /// with `W'` the ratio of largest to smallest stream weight.
    pub class_bound_exceeded: bool,
}

/// Replays `stream` into `engine`, checking each query against the oracle.
pub fn replay(engine: &mut Engine, stream: &StreamFile, k: usize, epsilon: Option<f64>) -> Result<StreamOutcome> {
    let mut out = StreamOutcome::default();
    let mut live = LiveGraph::default();
    for r in &stream.records {
        match r {
            Record::Update(u) => {
                engine.update(u)?;
                live.apply(u);
                out.max_update_ops = out.max_update_ops.max(engine.last_update_ops());
                out.peak_stored_words = out.peak_stored_words.max(engine.stored_words());
                if !engine.bounds_hold() {
                    out.bound_failures += 1;
                }
            }
            Record::Query => {
                out.queries += 1;
                let opt: Option<Matching> = optimum(&live.graph(), k);
                let answer = engine.query();
                let truth = answer.as_ref().map(|a| true_weight(a, &live, k));
                if matches!(truth, Some(None)) {
                    out.violations += 1;
                }
                if let Some(opt) = opt {
                    out.with_matching += 1;
                    if let Some(Some(w)) = truth {
                        out.answered += 1;
                        let ratio = if opt.weight() == 0 { 1.0 } else { w as f64 / opt.weight() as f64 };
                        out.worst_ratio = Some(out.worst_ratio.map_or(ratio, |r: f64| r.min(ratio)));
                        let ok = match epsilon {
                            None => w == opt.weight(),
                            Some(eps) => w as f64 > (1.0 - eps) * opt.weight() as f64,
                        };
                        if ok {
                            out.correct += 1;
                        }
                    }
                }
            }
        }
    }
    if let Engine::Dynamic(d) = engine {
        out.classes_seen = d.classes_seen().len();
        if let (Some(eps), Some(spread)) = (epsilon, stream.weight_spread()) {
            out.class_bound_exceeded = out.classes_seen > class_bound(spread, eps);
        }
    }
    Ok(out)
}

/// `ceil(log_{1+eps} spread) + 1`, with a small tolerance for rounding error
/// in the logarithm.
pub fn class_bound(spread: f64, epsilon: f64) -> usize {
    ((spread.ln() / epsilon.ln_1p()) - 1e-9).ceil().max(0.0) as usize + 1
}

/// Aggregate over trials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialReport {
    pub trials: usize,
    /// Trials whose every query graph has a `k`-matching.
    pub with_matching: usize,
    /// Trials among `with_matching` where every query was answered correctly.
    pub successes: usize,
    /// Trials among `with_matching` where every query returned a matching.
    pub answered: usize,
    pub one_sided_violations: usize,
    pub bound_failures: usize,
    pub worst_ratio: Option<f64>,
    pub max_update_ops: u64,
    pub peak_stored_words: usize,
    pub max_classes_seen: usize,
    pub class_bound_failures: usize,
}

impl TrialReport {
    fn add(&mut self, o: &StreamOutcome) {
        self.trials += 1;
        if o.queries > 0 && o.with_matching == o.queries {
            self.with_matching += 1;
            if o.correct == o.queries {
                self.successes += 1;
            }
            if o.answered == o.queries {
                self.answered += 1;
            }
        }
        self.one_sided_violations += o.violations;
        self.bound_failures += o.bound_failures;
        if let Some(r) = o.worst_ratio {
            self.worst_ratio = Some(self.worst_ratio.map_or(r, |x: f64| x.min(r)));
        }
        self.max_update_ops = self.max_update_ops.max(o.max_update_ops);
        self.peak_stored_words = self.peak_stored_words.max(o.peak_stored_words);
        self.max_classes_seen = self.max_classes_seen.max(o.classes_seen);
        self.class_bound_failures += o.class_bound_exceeded as usize;
    }

    /// Successes over trials that have a `k`-matching.
    pub fn success_rate(&self) -> f64 {
        if self.with_matching == 0 {
            return 1.0;
        }
        self.successes as f64 / self.with_matching as f64
    }

    /// Successes over answered trials.
    pub fn answered_success_rate(&self) -> f64 {
        if self.answered == 0 {
            return 1.0;
        }
        self.successes as f64 / self.answered as f64
    }
}

fn run_one(cfg: &TrialConfig, index: u64) -> Result<StreamOutcome> {
    let stream = cfg.workload.generate(&mut sub_rng(cfg.seed, tag::STREAM, index))?;
    let h = stream.header;
    let mut engine = Engine::new(cfg.algorithm, h.n, h.k, h.scale(), &mut sub_rng(cfg.seed, tag::ALGORITHM, index))?;
    let eps = match cfg.algorithm {
        Algorithm::DynamicApprox { epsilon } => Some(epsilon),
        _ => None,
    };
    replay(&mut engine, &stream, h.k, eps)
}

/// Runs `cfg.trials` independent trials in parallel. The report depends only
/// on the configuration.
pub fn run_trials(cfg: &TrialConfig) -> Result<TrialReport> {
    let outcomes: Vec<StreamOutcome> =
        (0..cfg.trials as u64).into_par_iter().map(|i| run_one(cfg, i)).collect::<Result<_>>()?;
    let mut report = TrialReport::default();
    outcomes.iter().for_each(|o| report.add(o));
    Ok(report)
}

/// Per-update cost profile of one stream.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Profile {
    pub updates: u64,
    /// Update count per primitive-op total.
    pub histogram: BTreeMap<u64, u64>,
    pub max_update_ops: u64,
    pub peak_stored_words: usize,
    /// Updates after which a space or time bound failed.
    pub bound_failures: u64,
}

/// Feeds every update of `stream` to `engine`, recording costs. Queries are
/// skipped.
pub fn measure(engine: &mut Engine, stream: &StreamFile) -> Result<Profile> {
    let mut p = Profile::default();
    for u in stream.updates() {
        engine.update(u)?;
        let ops = engine.last_update_ops();
        p.updates += 1;
        *p.histogram.entry(ops).or_default() += 1;
        p.max_update_ops = p.max_update_ops.max(ops);
        p.peak_stored_words = p.peak_stored_words.max(engine.stored_words());
        if !engine.bounds_hold() {
            p.bound_failures += 1;
        }
    }
    Ok(p)
}
