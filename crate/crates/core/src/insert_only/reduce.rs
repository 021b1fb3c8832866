//! Compact and reduced-compact subgraphs, monolithic and resumable.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use crate::hash::UniversalHash;
use crate::matching::Edge;

/// `k(16k - 1)`: the size cap of a reduced compact subgraph.
pub fn window_len(k: usize) -> usize {
    k * (16 * k - 1)
}

/// Per-part rank threshold `8k`.
pub fn part_rank_cap(k: usize) -> usize {
    8 * k
}

fn part_pair(f: &UniversalHash, e: &Edge) -> (u32, u32) {
    let a = f.eval_unchecked(e.u as u64) as u32;
    let b = f.eval_unchecked(e.v as u64) as u32;
    (a.min(b), a.max(b))
}

/// For every pair of distinct parts keeps the β-maximum edge between them;
/// edges inside a part are dropped. Output is in descending β order.
pub fn compact(h: &[Edge], f: &UniversalHash) -> Vec<Edge> {
    let mut best: BTreeMap<(u32, u32), Edge> = BTreeMap::new();
    for e in h {
        let (a, b) = part_pair(f, e);
        if a == b {
            continue;
        }
        best.entry((a, b)).and_modify(|cur| *cur = (*cur).max(*e)).or_insert(*e);
    }
    let mut out: Vec<Edge> = best.into_values().collect();
    out.sort_unstable_by_key(|e| Reverse(*e));
    out
}

/// Reduced compact subgraph: of `compact(h)`, keeps edges ranked within the
/// `8k` heaviest on both of their parts, then the `k(16k-1)` heaviest of
/// those. Output is in descending β order.
pub fn red_com(h: &[Edge], f: &UniversalHash, k: usize) -> Vec<Edge> {
    let compacted = compact(h, f);
    let cap = part_rank_cap(k);
    let mut rank: HashMap<u32, usize> = HashMap::new();
    let mut out = Vec::new();
    for e in compacted {
        let (a, b) = part_pair(f, &e);
        let ra = {
            let r = rank.entry(a).or_default();
            *r += 1;
            *r
        };
        let rb = {
            let r = rank.entry(b).or_default();
            *r += 1;
            *r
        };
        if ra <= cap && rb <= cap {
            out.push(e);
        }
    }
    out.truncate(window_len(k));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SortKey {
    /// Ascending part pair, descending β within a pair.
    PairThenBeta,
    /// Descending β.
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HeapStage {
    Build { next: usize },
    Extract { end: usize },
    Done,
}

/// In-place heapsort advanced one sift iteration at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct HeapSort {
    stage: HeapStage,
    sift: Option<(usize, usize)>,
}

impl HeapSort {
    fn new(n: usize) -> Self {
        Self { stage: HeapStage::Build { next: n / 2 }, sift: None }
    }

    /// Upper bound on ticks for `n` items, including the finishing tick.
    fn max_ticks(n: usize) -> u64 {
        let depth = usize::BITS - n.leading_zeros() + 1;
        (n as u64 / 2 + n as u64 + 2) * (depth as u64 + 1) + 2
    }

    fn less(key: SortKey, edges: &[Edge], parts: &[(u32, u32)], a: usize, b: usize) -> bool {
        match key {
            SortKey::PairThenBeta => (parts[a], Reverse(edges[a])) < (parts[b], Reverse(edges[b])),
            SortKey::Beta => Reverse(edges[a]) < Reverse(edges[b]),
        }
    }

    /// One unit of work; returns true once sorted.
    fn tick(&mut self, key: SortKey, edges: &mut [Edge], parts: &mut [(u32, u32)]) -> bool {
        if let Some((pos, end)) = self.sift {
            let mut child = 2 * pos + 1;
            if child >= end {
                self.sift = None;
                return false;
            }
            if child + 1 < end && Self::less(key, edges, parts, child, child + 1) {
                child += 1;
            }
            if Self::less(key, edges, parts, pos, child) {
                edges.swap(pos, child);
                parts.swap(pos, child);
                self.sift = Some((child, end));
            } else {
                self.sift = None;
            }
            return false;
        }
        match self.stage {
            HeapStage::Build { next: 0 } => self.stage = HeapStage::Extract { end: edges.len() },
            HeapStage::Build { next } => {
                self.stage = HeapStage::Build { next: next - 1 };
                self.sift = Some((next - 1, edges.len()));
            }
            HeapStage::Extract { end } if end <= 1 => self.stage = HeapStage::Done,
            HeapStage::Extract { end } => {
                edges.swap(0, end - 1);
                parts.swap(0, end - 1);
                self.stage = HeapStage::Extract { end: end - 1 };
                self.sift = Some((0, end - 1));
            }
            HeapStage::Done => return true,
        }
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Scan { idx: usize },
    SortPairs(HeapSort),
    Dedupe { read: usize, write: usize },
    SortBeta(HeapSort),
    ResetCounts { idx: usize },
    Select { read: usize, write: usize },
    Done,
}

/// `red_com(g ∪ window)` computed in bounded slices.
///
/// The inputs are passed to every [`ReduceTask::step`] call and must not change
/// between [`ReduceTask::restart`] calls. All work happens in `work`, which
/// ends up holding the result.
#[derive(Debug, Clone)]
pub struct ReduceTask {
    k: usize,
    phase: Phase,
    work: Vec<Edge>,
    parts: Vec<(u32, u32)>,
    counts: Vec<u32>,
    ops: u64,
}

impl ReduceTask {
    pub fn new(k: usize, parts: usize) -> Self {
        let q = window_len(k);
        Self {
            k,
            phase: Phase::Scan { idx: 0 },
            work: Vec::with_capacity(2 * q),
            parts: Vec::with_capacity(2 * q),
            counts: vec![0; parts],
            ops: 0,
        }
    }

    /// Worst-case total ticks for an input of `n` edges.
    pub fn max_ops(n: usize, parts: usize) -> u64 {
        let n64 = n as u64;
        (n64 + 1) + HeapSort::max_ticks(n) + (n64 + 1) + HeapSort::max_ticks(n) + (parts as u64 + 1) + (n64 + 1) + 1
    }

    /// Resets to an empty run, keeping allocations. Constant time.
    pub fn restart(&mut self) {
        self.phase = Phase::Scan { idx: 0 };
        self.work.clear();
        self.parts.clear();
        self.ops = 0;
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    /// Ticks spent since the last restart.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// Edges held in the workspace.
    pub fn workspace_len(&self) -> usize {
        self.work.len()
    }

    /// The finished result, in descending β order.
    pub fn output(&self) -> Option<&[Edge]> {
        self.is_done().then_some(&self.work[..])
    }

    /// Swaps the finished result out, leaving `spare` (cleared) as workspace.
    pub(crate) fn take_output(&mut self, spare: &mut Vec<Edge>) {
        debug_assert!(self.is_done());
        spare.clear();
        std::mem::swap(&mut self.work, spare);
    }

    /// Runs at most `budget` ticks; returns the number spent.
    pub fn step(&mut self, budget: u64, f: &UniversalHash, g: &[Edge], window: &[Edge]) -> u64 {
        let mut spent = 0;
        while spent < budget && self.phase != Phase::Done {
            self.tick(f, g, window);
            spent += 1;
        }
        self.ops += spent;
        spent
    }

    /// Runs to completion.
    pub fn finish(&mut self, f: &UniversalHash, g: &[Edge], window: &[Edge]) -> u64 {
        self.step(u64::MAX, f, g, window)
    }

    fn tick(&mut self, f: &UniversalHash, g: &[Edge], window: &[Edge]) {
        self.phase = match self.phase {
            Phase::Scan { idx } if idx == g.len() + window.len() => {
                Phase::SortPairs(HeapSort::new(self.work.len()))
            }
            Phase::Scan { idx } => {
                let e = if idx < g.len() { g[idx] } else { window[idx - g.len()] };
                let pair = part_pair(f, &e);
                if pair.0 != pair.1 {
                    self.work.push(e);
                    self.parts.push(pair);
                }
                Phase::Scan { idx: idx + 1 }
            }
            Phase::SortPairs(mut h) => {
                if h.tick(SortKey::PairThenBeta, &mut self.work, &mut self.parts) {
                    Phase::Dedupe { read: 0, write: 0 }
                } else {
                    Phase::SortPairs(h)
                }
            }
            Phase::Dedupe { read, write } if read == self.work.len() => {
                self.work.truncate(write);
                self.parts.truncate(write);
                Phase::SortBeta(HeapSort::new(write))
            }
            Phase::Dedupe { read, write } => {
                if write == 0 || self.parts[read] != self.parts[write - 1] {
                    self.work[write] = self.work[read];
                    self.parts[write] = self.parts[read];
                    Phase::Dedupe { read: read + 1, write: write + 1 }
                } else {
                    Phase::Dedupe { read: read + 1, write }
                }
            }
            Phase::SortBeta(mut h) => {
                if h.tick(SortKey::Beta, &mut self.work, &mut self.parts) {
                    Phase::ResetCounts { idx: 0 }
                } else {
                    Phase::SortBeta(h)
                }
            }
            Phase::ResetCounts { idx } if idx == self.counts.len() => Phase::Select { read: 0, write: 0 },
            Phase::ResetCounts { idx } => {
                self.counts[idx] = 0;
                Phase::ResetCounts { idx: idx + 1 }
            }
            Phase::Select { read, write } if read == self.work.len() || write == window_len(self.k) => {
                self.work.truncate(write);
                self.parts.truncate(write);
                Phase::Done
            }
            Phase::Select { read, write } => {
                let (a, b) = self.parts[read];
                self.counts[a as usize] += 1;
                self.counts[b as usize] += 1;
                let cap = part_rank_cap(self.k) as u32;
                if self.counts[a as usize] <= cap && self.counts[b as usize] <= cap {
                    self.work[write] = self.work[read];
                    self.parts[write] = self.parts[read];
                    Phase::Select { read: read + 1, write: write + 1 }
                } else {
                    Phase::Select { read: read + 1, write }
                }
            }
            Phase::Done => Phase::Done,
        };
    }
}
