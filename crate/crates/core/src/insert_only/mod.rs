//! Maximum-weight k-matching over an insert-only edge stream.
//!
//! Each copy hashes vertices into `4k^2` parts and keeps a reduced compact
//! subgraph of the stream prefix plus the two latest windows of `q = k(16k-1)`
//! raw edges. The reduction for the next window runs in constant-size slices,
//! one per update, so every update does bounded work.

mod reduce;

use rand::Rng;

pub use reduce::{compact, part_rank_cap, red_com, window_len, ReduceTask};

use crate::error::{Error, Result};
use crate::hash::UniversalHash;
use crate::matching::{solve_exact, Edge, Matching, SmallGraph};

/// Bookkeeping ticks charged for a window rotation.
const ROTATE_OPS: u64 = 4;
/// Ticks charged for buffering the new edge.
const APPEND_OPS: u64 = 1;

/// One independent pipeline.
#[derive(Debug, Clone)]
pub struct CopyState {
    k: usize,
    q: usize,
    n: u64,
    f: UniversalHash,
    budget: u64,
    pos: u64,
    /// Reduced subgraph at the last window boundary.
    reduced: Vec<Edge>,
    /// Raw edges of the previous window; frozen input of the running task.
    prev_window: Vec<Edge>,
    /// Raw edges of the current window.
    cur_window: Vec<Edge>,
    task: ReduceTask,
    last_ops: u64,
}

impl CopyState {
    pub fn new<R: Rng + ?Sized>(n: u64, k: usize, rng: &mut R) -> Result<Self> {
        check_params(n, k)?;
        let parts = 4 * k * k;
        let f = UniversalHash::draw(n, parts as u64, rng)?;
        Ok(Self::with_hash(n, k, f))
    }

    /// Uses a given partition hash. Its range must be `4k^2` and its modulus at
    /// least `n`.
    pub fn with_hash(n: u64, k: usize, f: UniversalHash) -> Self {
        let q = window_len(k);
        let parts = 4 * k * k;
        assert_eq!(f.range(), parts as u64, "partition hash must map into 4k^2 parts");
        assert!(f.modulus() >= n, "partition hash domain too small");
        Self {
            k,
            q,
            n,
            f,
            budget: Self::slice_budget(k),
            pos: 0,
            reduced: Vec::with_capacity(q),
            prev_window: Vec::with_capacity(q),
            cur_window: Vec::with_capacity(q),
            task: ReduceTask::new(k, parts),
            last_ops: 0,
        }
    }

    /// Ticks per update granted to the reduction: the worst case over a
    /// `2q`-edge input spread across `q` updates.
    pub fn slice_budget(k: usize) -> u64 {
        let q = window_len(k) as u64;
        ReduceTask::max_ops(2 * window_len(k), 4 * k * k).div_ceil(q)
    }

    /// Largest number of ticks a single update can cost.
    pub fn max_update_ops(k: usize) -> u64 {
        Self::slice_budget(k) + ROTATE_OPS + APPEND_OPS
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn partition_hash(&self) -> &UniversalHash {
        &self.f
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn last_update_ops(&self) -> u64 {
        self.last_ops
    }

    /// The reduced subgraph from the last boundary (`G^f` at the largest
    /// multiple of `q` below the current position).
    pub fn reduced(&self) -> &[Edge] {
        &self.reduced
    }

    /// Raw edges retained after the reduced subgraph, oldest first.
    pub fn raw_windows(&self) -> (&[Edge], &[Edge]) {
        (&self.prev_window, &self.cur_window)
    }

    pub fn task(&self) -> &ReduceTask {
        &self.task
    }

    /// Edges stored by the view plus the task workspace.
    pub fn stored_edges(&self) -> usize {
        self.reduced.len() + self.prev_window.len() + self.cur_window.len() + self.task.workspace_len()
    }

    pub fn stored_words(&self) -> usize {
        // three words per edge, four for the hash, and the part counters
        3 * self.stored_edges() + 4 + 4 * self.k * self.k
    }

    /// The current candidate subgraph, the reduced part followed by the raw windows.
    pub fn view(&self) -> impl Iterator<Item = &Edge> {
        self.reduced.iter().chain(&self.prev_window).chain(&self.cur_window)
    }

    pub fn update(&mut self, e: Edge) -> Result<()> {
        if e.v as u64 >= self.n {
            return Err(Error::Domain { value: e.v as u64, bound: self.n });
        }
        let mut ops = 0;
        if self.pos > 0 && self.pos.is_multiple_of(self.q as u64) {
            self.rotate();
            ops += ROTATE_OPS;
        }
        self.pos += 1;
        ops += self.task.step(self.budget, &self.f, &self.reduced, &self.prev_window);
        self.cur_window.push(e);
        ops += APPEND_OPS;
        if self.pos.is_multiple_of(self.q as u64) {
            assert!(self.task.is_done(), "reduction did not finish within its window");
        }
        debug_assert!(self.stored_edges() <= 5 * self.q);
        self.last_ops = ops;
        Ok(())
    }

    fn rotate(&mut self) {
        self.task.take_output(&mut self.reduced);
        std::mem::swap(&mut self.prev_window, &mut self.cur_window);
        self.cur_window.clear();
        self.task.restart();
    }
}

fn check_params(n: u64, k: usize) -> Result<()> {
    if k == 0 || k as u64 > n / 2 {
        return Err(Error::param(format!("need 1 <= k <= n/2, got n={n} k={k}")));
    }
    Ok(())
}

/// Number of independent copies for failure probability `delta`.
pub fn copies_for(delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta {delta} outside (0, 1)")));
    }
    Ok(((1.0 / delta).log2().ceil() as usize).max(1))
}

#[derive(Debug, Clone)]
pub struct InsertOnlyMatcher {
    n: u64,
    k: usize,
    copies: Vec<CopyState>,
    last_ops: u64,
}

impl InsertOnlyMatcher {
    pub fn new<R: Rng + ?Sized>(n: u64, k: usize, delta: f64, rng: &mut R) -> Result<Self> {
        check_params(n, k)?;
        let count = copies_for(delta)?;
        let copies = (0..count).map(|_| CopyState::new(n, k, rng)).collect::<Result<_>>()?;
        Ok(Self { n, k, copies, last_ops: 0 })
    }

    pub fn from_copies(n: u64, k: usize, copies: Vec<CopyState>) -> Result<Self> {
        check_params(n, k)?;
        if copies.is_empty() {
            return Err(Error::param("at least one copy is required"));
        }
        Ok(Self { n, k, copies, last_ops: 0 })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn copies(&self) -> &[CopyState] {
        &self.copies
    }

    pub fn last_update_ops(&self) -> u64 {
        self.last_ops
    }

    /// Per-update tick bound over all copies.
    pub fn max_update_ops(&self) -> u64 {
        CopyState::max_update_ops(self.k) * self.copies.len() as u64
    }

    pub fn stored_words(&self) -> usize {
        self.copies.iter().map(CopyState::stored_words).sum()
    }

    pub fn update(&mut self, e: Edge) -> Result<()> {
        let mut ops = 0;
        for c in &mut self.copies {
            c.update(e)?;
            ops += c.last_update_ops();
        }
        self.last_ops = ops;
        Ok(())
    }

    /// Solves the union of all copies' candidate subgraphs exactly.
    pub fn query(&self) -> Option<Matching> {
        let edges: Vec<Edge> = self.copies.iter().flat_map(|c| c.view().copied()).collect();
        solve_exact(&SmallGraph::dedup(edges), self.k)
    }
}
