//! Exhaustive and constructive checks of the separation properties of a
//! [`HashScheme`]. These enumerate the universe, so callers keep it small.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::HashScheme;

/// Universe sizes up to this bound are enumerated to cross-check witnesses.
const VERIFY_UNIVERSE_LIMIT: u64 = 1 << 20;

/// Preimage sets `T_i = { x : i in G(x) }` for every index with a nonempty preimage.
pub fn collect_preimages(scheme: &HashScheme) -> BTreeMap<u64, Vec<u64>> {
    let mut out: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut buf = Vec::new();
    for x in 0..scheme.params().universe {
        scheme.relation_into(x, &mut buf).expect("x is inside the universe");
        for &i in &buf {
            out.entry(i).or_default().push(x);
        }
    }
    out
}

/// Outcome of trying to separate a `k`-subset with the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    /// Every part holds at most `13 ln k` elements of the subset.
    pub part_sizes_ok: bool,
    /// Every part's family contains a member injective on that part's elements.
    pub perfect_per_part: bool,
    /// One index per element, from the first injective member of its part.
    pub witness: Option<Vec<u64>>,
    /// Result of checking the witness against the enumerated preimages, when
    /// the universe is small enough to enumerate.
    pub verified: Option<bool>,
}

pub fn separation_witness(subset: &[u64], scheme: &HashScheme) -> SeparationReport {
    let p = scheme.params();
    let mut parts: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &x in subset {
        parts.entry(scheme.part_of(x)).or_default().push(x);
    }
    let limit = p.part_size_limit();
    let part_sizes_ok = parts.values().all(|s| s.len() as u64 <= limit);

    let mut witness = Vec::with_capacity(subset.len());
    let mut perfect_per_part = true;
    for (&j, members) in &parts {
        let family = &scheme.families()[j as usize];
        let first_perfect = family.iter().position(|h| {
            let mut seen = HashSet::with_capacity(members.len());
            members.iter().all(|&x| seen.insert(h.eval_unchecked(x)))
        });
        match first_perfect {
            Some(i) => {
                for &x in members {
                    witness.push(j * p.d2 as u64 * p.d3 + i as u64 * p.d3 + family[i].eval_unchecked(x));
                }
            }
            None => {
                perfect_per_part = false;
                break;
            }
        }
    }
    if !perfect_per_part {
        return SeparationReport { part_sizes_ok, perfect_per_part, witness: None, verified: None };
    }
    let verified = (p.universe <= VERIFY_UNIVERSE_LIMIT).then(|| verify_witness(subset, &witness, scheme));
    SeparationReport { part_sizes_ok, perfect_per_part, witness: Some(witness), verified }
}

/// Checks that the preimages of `indices` are pairwise disjoint, each meets
/// `subset` in exactly one element, and together they cover `subset`.
fn verify_witness(subset: &[u64], indices: &[u64], scheme: &HashScheme) -> bool {
    let wanted: HashSet<u64> = indices.iter().copied().collect();
    if wanted.len() != indices.len() {
        return false;
    }
    let mut owner: HashMap<u64, u64> = HashMap::new();
    let mut preimages: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut buf = Vec::new();
    for x in 0..scheme.params().universe {
        scheme.relation_into(x, &mut buf).expect("x is inside the universe");
        for &i in buf.iter().filter(|i| wanted.contains(i)) {
            if owner.insert(x, i).is_some() {
                // x lies in two witness preimages
                return false;
            }
            preimages.entry(i).or_default().push(x);
        }
    }
    let members: HashSet<u64> = subset.iter().copied().collect();
    let covered = subset.iter().all(|x| owner.contains_key(x));
    let single_hit = indices.iter().all(|i| {
        preimages.get(i).map_or(0, |t| t.iter().filter(|x| members.contains(x)).count()) == 1
    });
    covered && single_hit
}

/// Violation counts for the two interval properties of the relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntervalReport {
    /// Pairs of distinct indices in one block `I_q` whose preimages intersect.
    pub same_block: u64,
    /// Keys whose indices leave their part's super-block `I'_t`, or indices
    /// from different super-blocks whose preimages intersect.
    pub cross_part: u64,
}

impl IntervalReport {
    pub fn is_clean(&self) -> bool {
        self.same_block == 0 && self.cross_part == 0
    }
}

/// Exhaustively checks, over the whole universe, that preimages of distinct
/// indices inside one `d3`-block are disjoint, and that every key's indices
/// stay inside the `d2*d3`-block of its part.
pub fn check_interval_properties(scheme: &HashScheme) -> IntervalReport {
    let p = scheme.params();
    let block = p.d3;
    let super_block = p.d2 as u64 * p.d3;
    let preimages = collect_preimages(scheme);
    let mut report = IntervalReport::default();

    // (A): within one block the preimages must be pairwise disjoint
    let mut by_block: BTreeMap<u64, Vec<&Vec<u64>>> = BTreeMap::new();
    for (i, t) in &preimages {
        by_block.entry(i / block).or_default().push(t);
    }
    for sets in by_block.values() {
        report.same_block += count_intersecting_pairs(sets);
    }

    // (B): G(U_t) inside I'_t, and preimages from distinct super-blocks disjoint
    for (i, t) in &preimages {
        for &x in t {
            if scheme.part_of(x) != i / super_block {
                report.cross_part += 1;
            }
        }
    }
    let mut by_super: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for (i, t) in &preimages {
        by_super.entry(i / super_block).or_default().extend(t.iter().copied());
    }
    let unions: Vec<&BTreeSet<u64>> = by_super.values().collect();
    for a in 0..unions.len() {
        for b in (a + 1)..unions.len() {
            report.cross_part += unions[a].intersection(unions[b]).count() as u64;
        }
    }
    report
}

fn count_intersecting_pairs(sets: &[&Vec<u64>]) -> u64 {
    let mut count = 0;
    for a in 0..sets.len() {
        let sa: HashSet<u64> = sets[a].iter().copied().collect();
        for b in sets.iter().skip(a + 1) {
            if b.iter().any(|x| sa.contains(x)) {
                count += 1;
            }
        }
    }
    count
}
