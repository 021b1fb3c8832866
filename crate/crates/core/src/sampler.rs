//! Linear-sketch l0-sampler: geometric subsampling levels, each holding a
//! verified one-sparse recovery sketch, repeated `ceil(log2(1/delta))` times.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hash::UniversalHash;

/// The Mersenne prime 2^61 - 1, modulus of the fingerprints and of the
/// subsampling hashes.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[inline]
pub(crate) fn reduce_m61(x: u128) -> u64 {
    let lo = (x as u64) & MERSENNE_61;
    let hi = (x >> 61) as u64;
    // hi < 2^67 / 2^61 after one fold for products of values < 2^61
    let mut s = lo + (hi & MERSENNE_61) + (hi >> 61);
    while s >= MERSENNE_61 {
        s -= MERSENNE_61;
    }
    s
}

#[inline]
fn mul_m61(a: u64, b: u64) -> u64 {
    reduce_m61(a as u128 * b as u128)
}

fn pow_m61(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_m61(acc, base);
        }
        base = mul_m61(base, base);
        exp >>= 1;
    }
    acc
}

fn signed_to_m61(c: i64) -> u64 {
    let m = c.unsigned_abs() % MERSENNE_61;
    if c < 0 && m != 0 {
        MERSENNE_61 - m
    } else {
        m
    }
}

/// Counters `(sum c, sum c*id, sum c*z^id mod P)` over the coordinates fed to it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OneSparseSketch {
    phi: i64,
    iota: i128,
    tau: u64,
}

impl OneSparseSketch {
    pub fn phi(&self) -> i64 {
        self.phi
    }

    pub fn iota(&self) -> i128 {
        self.iota
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn is_zero(&self) -> bool {
        self.phi == 0 && self.iota == 0 && self.tau == 0
    }

    /// `z_pow_id` must be `z^id mod P` for this sketch's evaluation point.
    #[inline]
    pub fn update(&mut self, id: u64, delta: i64, z_pow_id: u64) {
        self.phi += delta;
        self.iota += delta as i128 * id as i128;
        self.tau = reduce_m61(self.tau as u128 + mul_m61(signed_to_m61(delta), z_pow_id) as u128);
    }

    /// The single nonzero coordinate, if the counters pass the one-sparse test.
    pub fn recover(&self, z: u64, domain: u64) -> Option<u64> {
        if self.phi == 0 || self.iota % self.phi as i128 != 0 {
            return None;
        }
        let id = self.iota / self.phi as i128;
        if id < 0 || id >= domain as i128 {
            return None;
        }
        let id = id as u64;
        (mul_m61(signed_to_m61(self.phi), pow_m61(z, id)) == self.tau).then_some(id)
    }
}

/// Result of querying an [`L0Sampler`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleOutcome {
    Sampled(u64),
    /// Every counter is zero: the sketched vector is zero.
    Empty,
    /// The vector is nonzero but no level isolated a single coordinate.
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Repetition {
    subsample: UniversalHash,
    z: u64,
    /// Levels `0..cells.len()`; higher levels are all-zero and not stored.
    cells: Vec<OneSparseSketch>,
}

impl Repetition {
    /// Deepest level admitting `id`. Level `l` admits keys hashing below
    /// `2^(61 - l)`, so admission has rate about `2^-l` and is nested.
    #[inline]
    fn top_level(&self, id: u64, levels: u32) -> usize {
        let h = self.subsample.eval_unchecked(id);
        let bits = 64 - h.leading_zeros();
        (61 - bits).min(levels - 1) as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct L0Sampler {
    domain: u64,
    delta: f64,
    levels: u32,
    reps: Vec<Repetition>,
}

impl L0Sampler {
    pub fn new<R: Rng + ?Sized>(domain: u64, delta: f64, rng: &mut R) -> Result<Self> {
        if domain == 0 || domain >= MERSENNE_61 {
            return Err(Error::param(format!("sampler domain {domain} outside [1, 2^61 - 1)")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param(format!("sampler delta {delta} outside (0, 1)")));
        }
        let reps = Self::repetitions_for(delta);
        let levels = Self::levels_for(domain);
        let reps = (0..reps)
            .map(|_| Repetition {
                subsample: UniversalHash::draw_with_prime(MERSENNE_61, MERSENNE_61, rng),
                z: rng.gen_range(1..MERSENNE_61),
                cells: Vec::new(),
            })
            .collect();
        Ok(Self { domain, delta, levels, reps })
    }

    /// `ceil(log2(1/delta))`, at least one.
    pub fn repetitions_for(delta: f64) -> usize {
        ((1.0 / delta).log2().ceil() as usize).max(1)
    }

    /// `ceil(log2 N) + 1`.
    pub fn levels_for(domain: u64) -> u32 {
        let ceil_log = if domain <= 1 { 0 } else { 64 - (domain - 1).leading_zeros() };
        ceil_log + 1
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn repetitions(&self) -> usize {
        self.reps.len()
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Counters of the full sketch: three per level per repetition.
    pub fn counter_capacity(&self) -> usize {
        self.reps.len() * self.levels as usize * 3
    }

    /// Counters currently materialized (all-zero upper levels are implicit).
    pub fn stored_counters(&self) -> usize {
        self.reps.iter().map(|r| 3 * r.cells.len()).sum()
    }

    /// Stored words including the per-repetition hash and fingerprint point.
    pub fn stored_words(&self) -> usize {
        self.stored_counters() + 3 * self.reps.len()
    }

    /// Largest number of primitive operations one update can take.
    pub fn max_update_ops(&self) -> u64 {
        self.reps.len() as u64 * (self.levels as u64 + 2)
    }

    /// Adds `delta` to coordinate `id`. Returns the primitive operations spent:
    /// one subsampling hash and one fingerprint power per repetition, plus one
    /// per sketch touched.
    pub fn update(&mut self, id: u64, delta: i64) -> Result<u64> {
        if id >= self.domain {
            return Err(Error::Domain { value: id, bound: self.domain });
        }
        let mut ops = 0;
        for rep in &mut self.reps {
            let top = rep.top_level(id, self.levels);
            let z_pow = pow_m61(rep.z, id);
            if rep.cells.len() <= top {
                rep.cells.resize(top + 1, OneSparseSketch::default());
            }
            for cell in &mut rep.cells[..=top] {
                cell.update(id, delta, z_pow);
            }
            while rep.cells.last().is_some_and(OneSparseSketch::is_zero) {
                rep.cells.pop();
            }
            ops += 2 + top as u64 + 1;
        }
        Ok(ops)
    }

    /// Non-destructive query: the first repetition holding a level that passes
    /// one-sparse verification supplies the sample.
    pub fn query(&self) -> SampleOutcome {
        if self.reps.iter().all(|r| r.cells.is_empty()) {
            return SampleOutcome::Empty;
        }
        for rep in &self.reps {
            for cell in rep.cells.iter().rev() {
                if let Some(id) = cell.recover(rep.z, self.domain) {
                    return SampleOutcome::Sampled(id);
                }
            }
        }
        SampleOutcome::Fail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn mersenne_arithmetic() {
        assert_eq!(reduce_m61(MERSENNE_61 as u128), 0);
        assert_eq!(mul_m61(MERSENNE_61 - 1, MERSENNE_61 - 1), 1);
        assert_eq!(pow_m61(3, 0), 1);
        assert_eq!(pow_m61(2, 61), 1);
        assert_eq!(signed_to_m61(-1), MERSENNE_61 - 1);
        let mut r = rng(0);
        for _ in 0..1000 {
            let a = r.gen_range(0..MERSENNE_61);
            let b = r.gen_range(0..MERSENNE_61);
            assert_eq!(mul_m61(a, b) as u128, (a as u128 * b as u128) % MERSENNE_61 as u128);
        }
    }

    #[test]
    fn shape_follows_domain_and_delta() {
        let s = L0Sampler::new(1, 0.5, &mut rng(1)).unwrap();
        assert_eq!(s.levels(), 1);
        assert_eq!(s.repetitions(), 1);
        let s = L0Sampler::new(1 << 20, 1.0 / 1024.0, &mut rng(1)).unwrap();
        assert_eq!((s.repetitions(), s.levels()), (10, 21));
        assert_eq!(s.counter_capacity(), 630);
        assert_eq!(s.stored_counters(), 0);
        assert!(L0Sampler::new(0, 0.5, &mut rng(1)).is_err());
        assert!(L0Sampler::new(8, 1.0, &mut rng(1)).is_err());
    }

    #[test]
    fn single_coordinate_is_always_recovered() {
        for seed in 0..200 {
            let mut s = L0Sampler::new(1225, 0.05, &mut rng(seed)).unwrap();
            s.update(5, 1).unwrap();
            assert_eq!(s.query(), SampleOutcome::Sampled(5));
        }
    }

    #[test]
    fn insert_then_delete_restores_fresh_state() {
        let fresh = L0Sampler::new(1000, 0.01, &mut rng(3)).unwrap();
        let mut s = fresh.clone();
        s.update(5, 1).unwrap();
        s.update(5, -1).unwrap();
        assert_eq!(s, fresh);
        assert_eq!(s.query(), SampleOutcome::Empty);
    }

    #[test]
    fn double_insert_counts_twice_at_level_zero() {
        let mut s = L0Sampler::new(100, 0.25, &mut rng(4)).unwrap();
        s.update(5, 1).unwrap();
        s.update(5, 1).unwrap();
        for rep in &s.reps {
            assert_eq!(rep.cells[0].phi(), 2);
            assert!(rep.cells.iter().all(|c| c.phi() == 2));
        }
        assert_eq!(s.query(), SampleOutcome::Sampled(5));
    }

    #[test]
    fn out_of_range_id_is_rejected() {
        let mut s = L0Sampler::new(10, 0.25, &mut rng(4)).unwrap();
        assert_eq!(s.update(10, 1), Err(Error::Domain { value: 10, bound: 10 }));
    }

    #[test]
    fn one_sparse_sketch_counters() {
        let z = 12345;
        let mut c = OneSparseSketch::default();
        assert!(c.is_zero());
        c.update(7, 3, pow_m61(z, 7));
        assert_eq!((c.phi(), c.iota()), (3, 21));
        assert_eq!(c.tau(), mul_m61(3, pow_m61(z, 7)));
        assert_eq!(c.recover(z, 10), Some(7));
        assert_eq!(c.recover(z, 7), None);
        c.update(2, 1, pow_m61(z, 2));
        assert_eq!(c.recover(z, 10), None);
    }

    #[test]
    fn update_order_does_not_matter() {
        let base = L0Sampler::new(500, 0.01, &mut rng(8)).unwrap();
        let ups: Vec<(u64, i64)> = vec![(3, 1), (17, 1), (400, 1), (3, -1), (99, 1), (17, 1)];
        let mut a = base.clone();
        for &(id, d) in &ups {
            a.update(id, d).unwrap();
        }
        let mut b = base.clone();
        for &(id, d) in ups.iter().rev() {
            b.update(id, d).unwrap();
        }
        assert_eq!(a, b);
        assert_eq!(a.query(), b.query());
    }

    #[test]
    fn update_ops_bounded() {
        let mut s = L0Sampler::new(1225, 0.001, &mut rng(2)).unwrap();
        for id in 0..1225 {
            assert!(s.update(id, 1).unwrap() <= s.max_update_ops());
        }
    }
}
