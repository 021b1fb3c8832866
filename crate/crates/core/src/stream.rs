//! Line-oriented stream files.
//!
//! ```text
//! # comment
//! H <n> <k> <precision>
//! I <u> <v> <w>
//! D <u> <v> <w>
//! Q
//! ```
//!
//! Weights are decimals with at most `precision` fractional digits and are
//! stored as integers scaled by `10^precision`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dynamic::{EdgeUpdate, UpdateOp};
use crate::error::{Error, Result};
use crate::matching::{Edge, SmallGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamModel {
    /// Insertions and deletions.
    Dynamic,
    /// Insertions only.
    InsertOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Header {
    pub n: u64,
    pub k: usize,
    pub precision: u32,
}

impl Header {
    /// `10^precision`.
    pub fn scale(&self) -> u64 {
        10u64.pow(self.precision)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Record {
    Update(EdgeUpdate),
    Query,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamFile {
    pub header: Header,
    pub records: Vec<Record>,
}

/// Largest supported precision; keeps `10^precision` well inside `u64`.
pub const MAX_PRECISION: u32 = 9;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses a non-negative decimal into an integer scaled by `10^precision`.
pub fn parse_weight(s: &str, precision: u32) -> std::result::Result<u64, String> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(format!("bad weight {s:?}"));
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("bad weight {s:?}"));
    }
    if frac.len() > precision as usize {
        return Err(format!("weight {s:?} has more than {precision} fractional digits"));
    }
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| format!("weight {s:?} too large"))? };
    let mut frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().expect("digits checked") };
    frac_val *= 10u64.pow(precision - frac.len() as u32);
    int.checked_mul(10u64.pow(precision))
        .and_then(|x| x.checked_add(frac_val))
        .ok_or_else(|| format!("weight {s:?} too large"))
}

/// Formats a scaled weight with exactly `precision` fractional digits.
pub fn format_weight(w: u64, precision: u32) -> String {
    if precision == 0 {
        return w.to_string();
    }
    let scale = 10u64.pow(precision);
    format!("{}.{:0width$}", w / scale, w % scale, width = precision as usize)
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

pub fn parse_stream(text: &str, model: StreamModel) -> Result<StreamFile> {
    let mut header: Option<Header> = None;
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let tag = toks.next().expect("non-empty line");
        match (tag, header) {
            ("H", None) => {
                let n: u64 = field(toks.next(), line, "n")?;
                let k: usize = field(toks.next(), line, "k")?;
                let precision: u32 = field(toks.next(), line, "precision")?;
                if n < 2 {
                    return Err(parse_err(line, "n must be at least 2"));
                }
                if n > Vertex::MAX as u64 + 1 {
                    return Err(parse_err(line, format!("n {n} exceeds vertex id range")));
                }
                if precision > MAX_PRECISION {
                    return Err(parse_err(line, format!("precision above {MAX_PRECISION}")));
                }
                header = Some(Header { n, k, precision });
            }
            ("H", Some(_)) => return Err(parse_err(line, "duplicate header")),
            (_, None) => return Err(parse_err(line, "record before header")),
            ("Q", Some(_)) => records.push(Record::Query),
            ("I" | "D", Some(h)) => {
                if tag == "D" && model == StreamModel::InsertOnly {
                    return Err(parse_err(line, "deletion in an insert-only stream"));
                }
                let a: u64 = field(toks.next(), line, "vertex")?;
                let b: u64 = field(toks.next(), line, "vertex")?;
                let w_tok = toks.next().ok_or_else(|| parse_err(line, "missing weight"))?;
                let w = parse_weight(w_tok, h.precision).map_err(|m| parse_err(line, m))?;
                for x in [a, b] {
                    if x >= h.n {
                        return Err(parse_err(line, format!("vertex {x} out of range (n = {})", h.n)));
                    }
                }
                if a == b {
                    return Err(parse_err(line, "self-loop"));
                }
                let op = if tag == "I" { UpdateOp::Insert } else { UpdateOp::Delete };
                let upd = EdgeUpdate::new(a as Vertex, b as Vertex, w, op).map_err(|e| parse_err(line, e.to_string()))?;
                records.push(Record::Update(upd));
            }
            (other, Some(_)) => return Err(parse_err(line, format!("unknown record {other:?}"))),
        }
        if let Some(extra) = toks.next() {
            return Err(parse_err(line, format!("trailing token {extra:?}")));
        }
    }
    let header = header.ok_or_else(|| parse_err(text.lines().count().max(1), "missing header"))?;
    if !records.contains(&Record::Query) {
        return Err(parse_err(text.lines().count().max(1), "stream has no query"));
    }
    Ok(StreamFile { header, records })
}

pub fn render_stream(file: &StreamFile) -> String {
    let h = file.header;
    let mut out = format!("H {} {} {}\n", h.n, h.k, h.precision);
    for r in &file.records {
        match r {
            Record::Query => out.push_str("Q\n"),
            Record::Update(u) => {
                let tag = match u.op {
                    UpdateOp::Insert => 'I',
                    UpdateOp::Delete => 'D',
                };
                writeln!(out, "{tag} {} {} {}", u.u, u.v, format_weight(u.w, h.precision)).expect("string write");
            }
        }
    }
    out
}

impl StreamFile {
    pub fn updates(&self) -> impl Iterator<Item = &EdgeUpdate> {
        self.records.iter().filter_map(|r| match r {
            Record::Update(u) => Some(u),
            Record::Query => None,
        })
    }

    pub fn has_deletions(&self) -> bool {
        self.updates().any(|u| u.op == UpdateOp::Delete)
    }

    /// Largest weight divided by smallest positive weight, over all updates.
    pub fn weight_spread(&self) -> Option<f64> {
        let ws = self.updates().map(|u| u.w).filter(|&w| w > 0);
        let (lo, hi) = ws.fold((u64::MAX, 0), |(lo, hi), w| (lo.min(w), hi.max(w)));
        (hi > 0).then(|| hi as f64 / lo as f64)
    }
}

/// Ways a parsed stream can violate the edge-multiset model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IllFormed {
    /// Insertion of an edge that is already present.
    DuplicateInsert { record: usize, u: Vertex, v: Vertex },
    /// Deletion of an edge that is absent.
    AbsentDelete { record: usize, u: Vertex, v: Vertex },
    /// The same vertex pair appears with two different weights.
    WeightChanged { record: usize, u: Vertex, v: Vertex, before: u64, after: u64 },
}

impl std::fmt::Display for IllFormed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IllFormed::DuplicateInsert { record, u, v } => {
                write!(f, "record {record}: edge ({u},{v}) inserted while present")
            }
            IllFormed::AbsentDelete { record, u, v } => write!(f, "record {record}: edge ({u},{v}) deleted while absent"),
            IllFormed::WeightChanged { record, u, v, before, after } => {
                write!(f, "record {record}: edge ({u},{v}) weight {after} differs from earlier {before}")
            }
        }
    }
}

/// Replays the stream as an edge set. Records are numbered from 1.
pub fn check_well_formed(file: &StreamFile) -> std::result::Result<(), IllFormed> {
    let mut live: BTreeMap<(Vertex, Vertex), bool> = BTreeMap::new();
    let mut weight: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
    for (i, r) in file.records.iter().enumerate() {
        let Record::Update(upd) = r else { continue };
        let (record, u, v) = (i + 1, upd.u, upd.v);
        if let Some(&before) = weight.get(&(u, v)) {
            if before != upd.w {
                return Err(IllFormed::WeightChanged { record, u, v, before, after: upd.w });
            }
        }
        weight.insert((u, v), upd.w);
        let present = live.entry((u, v)).or_default();
        match (upd.op, *present) {
            (UpdateOp::Insert, true) => return Err(IllFormed::DuplicateInsert { record, u, v }),
            (UpdateOp::Delete, false) => return Err(IllFormed::AbsentDelete { record, u, v }),
            (UpdateOp::Insert, false) => *present = true,
            (UpdateOp::Delete, true) => *present = false,
        }
    }
    Ok(())
}

/// Current edge set under replay.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LiveGraph {
    edges: BTreeMap<(Vertex, Vertex), u64>,
}

impl LiveGraph {
    pub fn apply(&mut self, upd: &EdgeUpdate) {
        match upd.op {
            UpdateOp::Insert => {
                self.edges.insert((upd.u, upd.v), upd.w);
            }
            UpdateOp::Delete => {
                self.edges.remove(&(upd.u, upd.v));
            }
        }
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<u64> {
        self.edges.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.edges.iter().map(|(&(u, v), &w)| Edge { w, u, v }).collect()
    }

    pub fn graph(&self) -> SmallGraph {
        SmallGraph::new(self.edges()).expect("map keys are distinct pairs")
    }
}

/// The live graph at every `Q` record, in order.
pub fn query_snapshots(file: &StreamFile) -> Vec<LiveGraph> {
    let mut live = LiveGraph::default();
    let mut out = Vec::new();
    for r in &file.records {
        match r {
            Record::Update(u) => live.apply(u),
            Record::Query => out.push(live.clone()),
        }
    }
    out
}
