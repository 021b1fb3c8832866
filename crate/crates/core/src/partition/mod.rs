//! Partition the universe with a kappa-wise independent hash, then give each
//! part its own small family of universal hashes. The relation built on top
//! maps every key to `d2` indices, one per family member, laid out so that
//! keys from different parts (or separated by some member) never share an
//! index.

mod lnbound;
mod witness;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hash::{KWiseHash, UniversalHash};

pub use lnbound::{ceil_c_ln, cmp_exp_with_pow, log2_ceil_k_over_ln_k};
pub use witness::{
    check_interval_properties, collect_preimages, separation_witness, IntervalReport, SeparationReport,
};

/// Derived sizes of a partition scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeParams {
    pub universe: u64,
    /// Subset size the scheme is tuned for (after clamping `k = 1` to 2).
    pub k: u64,
    /// Bits per key: `2^(u-1) < universe <= 2^u`.
    pub u: u32,
    /// Bits per part label: `2^(d-1) < k / ln k <= 2^d`.
    pub d: u32,
    /// Number of parts, `2^d`.
    pub d1: u64,
    /// Members per family, `ceil(8 ln k)`.
    pub d2: usize,
    /// Range of each member, `ceil(13 ln k)^2`.
    pub d3: u64,
    /// Independence of the partition hash, `ceil(12 ln k)`.
    pub kappa: usize,
}

impl SchemeParams {
    pub fn new(universe: u64, k: u64) -> Result<Self> {
        if universe <= 1 {
            return Err(Error::param(format!("universe size must exceed 1, got {universe}")));
        }
        if k == 0 {
            return Err(Error::param("subset size k must be >= 1"));
        }
        // ln 1 = 0 degenerates every formula, so k = 1 uses the k = 2 sizes
        let k = k.max(2);
        let u = 64 - (universe - 1).leading_zeros();
        let d = log2_ceil_k_over_ln_k(k);
        let d13 = ceil_c_ln(13, k);
        Ok(Self {
            universe,
            k,
            u,
            d,
            d1: 1u64 << d,
            d2: ceil_c_ln(8, k) as usize,
            d3: d13 * d13,
            kappa: ceil_c_ln(12, k) as usize,
        })
    }

    /// Size of the index range, `d1 * d2 * d3`.
    pub fn index_range(&self) -> u64 {
        self.d1 * self.d2 as u64 * self.d3
    }

    /// Largest part size the analysis tolerates: `|S_j| <= 13 ln k`.
    pub fn part_size_limit(&self) -> u64 {
        ceil_c_ln(13, self.k) - 1
    }
}

/// The partition hash `f` together with the per-part families `F_0 .. F_{d1-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashScheme {
    params: SchemeParams,
    f: KWiseHash,
    families: Vec<Vec<UniversalHash>>,
}

impl HashScheme {
    pub fn build<R: Rng + ?Sized>(universe: u64, k: u64, rng: &mut R) -> Result<Self> {
        let params = SchemeParams::new(universe, k)?;
        let f = KWiseHash::draw(params.kappa, params.u, params.d, rng)?;
        let families = (0..params.d1)
            .map(|_| {
                (0..params.d2)
                    .map(|_| UniversalHash::draw(universe, params.d3, rng))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, f, families })
    }

    /// Assembles a scheme from explicit parts; used to pin down hand-built cases.
    pub fn from_parts(params: SchemeParams, f: KWiseHash, families: Vec<Vec<UniversalHash>>) -> Result<Self> {
        if f.in_bits() != params.u || f.out_bits() != params.d {
            return Err(Error::param("partition hash widths do not match the parameters"));
        }
        if families.len() as u64 != params.d1 || families.iter().any(|fam| fam.len() != params.d2) {
            return Err(Error::param("need d1 families of d2 members each"));
        }
        if families.iter().flatten().any(|h| h.range() != params.d3 || h.modulus() < params.universe) {
            return Err(Error::param("family member has the wrong range or domain"));
        }
        Ok(Self { params, f, families })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn partition_hash(&self) -> &KWiseHash {
        &self.f
    }

    pub fn families(&self) -> &[Vec<UniversalHash>] {
        &self.families
    }

    /// Part label `j` of key `x`.
    pub fn part_of(&self, x: u64) -> u64 {
        self.f.eval(x)
    }

    /// The `d2` indices associated with `x`, in family order.
    pub fn relation(&self, x: u64) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(self.params.d2);
        self.relation_into(x, &mut out)?;
        Ok(out)
    }

    /// Like [`relation`](Self::relation) but reuses `out`.
    pub fn relation_into(&self, x: u64, out: &mut Vec<u64>) -> Result<()> {
        if x >= self.params.universe {
            return Err(Error::Domain { value: x, bound: self.params.universe });
        }
        out.clear();
        let j = self.part_of(x);
        let d2 = self.params.d2 as u64;
        let d3 = self.params.d3;
        let base = j * d2 * d3;
        for (i, h) in self.families[j as usize].iter().enumerate() {
            out.push(base + i as u64 * d3 + h.eval_unchecked(x));
        }
        Ok(())
    }

    /// Stored machine words: kappa coefficients plus two per family member.
    pub fn stored_words(&self) -> usize {
        self.f.kappa() + 2 * self.families.iter().map(Vec::len).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parameters_for_small_cases() {
        let p = SchemeParams::new(16, 2).unwrap();
        assert_eq!((p.u, p.d, p.d1, p.d2, p.d3), (4, 2, 4, 6, 100));
        assert_eq!(p.kappa, 9);
        assert_eq!(p.index_range(), 2400);

        let p = SchemeParams::new(1024, 8).unwrap();
        assert_eq!((p.u, p.d, p.d1, p.d2, p.d3), (10, 2, 4, 17, 784));
        assert_eq!(p.kappa, 25);

        assert_eq!(SchemeParams::new(2, 2).unwrap().u, 1);
        assert_eq!(SchemeParams::new(1025, 2).unwrap().u, 11);
        assert_eq!(SchemeParams::new(4096, 8).unwrap().part_size_limit(), 27);
    }

    #[test]
    fn k_one_is_clamped_and_bad_inputs_rejected() {
        assert_eq!(SchemeParams::new(16, 1).unwrap(), SchemeParams::new(16, 2).unwrap());
        assert!(SchemeParams::new(1, 2).is_err());
        assert!(SchemeParams::new(16, 0).is_err());
    }

    #[test]
    fn build_shapes_and_determinism() {
        let s1 = HashScheme::build(16, 2, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let s2 = HashScheme::build(16, 2, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.families().len(), 4);
        assert!(s1.families().iter().all(|f| f.len() == 6));
        assert_eq!(s1.partition_hash().kappa(), 9);
        for x in 0..16 {
            assert_eq!(s1.relation(x).unwrap(), s2.relation(x).unwrap());
        }
    }

    #[test]
    fn relation_values_sit_in_their_intervals() {
        let s = HashScheme::build(1000, 5, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let p = *s.params();
        for x in 0..1000 {
            let g = s.relation(x).unwrap();
            assert_eq!(g.len(), p.d2);
            let j = s.part_of(x);
            for (i, &v) in g.iter().enumerate() {
                let lo = j * p.d2 as u64 * p.d3 + i as u64 * p.d3;
                assert!(lo <= v && v < lo + p.d3);
                assert!(v < p.index_range());
            }
        }
        assert!(s.relation(1000).is_err());
    }

    #[test]
    fn zero_offsets_and_extreme_coordinates() {
        let params = SchemeParams::new(16, 2).unwrap();
        // f == 0 everywhere and every member sends x = 0 to 0 (b = 0)
        let f = KWiseHash::from_coeffs(vec![0; params.kappa], params.u, params.d).unwrap();
        let fams = (0..4)
            .map(|_| (0..6).map(|_| UniversalHash::from_parts(17, 1, 0, 100).unwrap()).collect())
            .collect();
        let s = HashScheme::from_parts(params, f, fams).unwrap();
        assert_eq!(s.relation(0).unwrap(), vec![0, 100, 200, 300, 400, 500]);

        // part 3 via a constant polynomial 0b11, member 6 hits 99
        let mut coeffs = vec![0; params.kappa];
        coeffs[0] = 3;
        let f = KWiseHash::from_coeffs(coeffs, params.u, params.d).unwrap();
        let fams = (0..4)
            .map(|_| (0..6).map(|_| UniversalHash::from_parts(101, 1, 99, 100).unwrap()).collect())
            .collect();
        let s = HashScheme::from_parts(params, f, fams).unwrap();
        assert_eq!(*s.relation(0).unwrap().last().unwrap(), 2399);
        assert_eq!(params.index_range() - 1, 2399);
    }
}
