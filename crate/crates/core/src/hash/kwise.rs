use rand::Rng;

use super::gf2::Gf2Field;
use crate::error::{Error, Result};

/// A random polynomial of degree < kappa over GF(2^w), read as a map from
/// `in_bits`-bit strings to `out_bits`-bit strings.
///
/// Inputs are zero-extended to `w` bits and the output keeps the `out_bits`
/// low-order bits of the field value, which preserves exact kappa-wise
/// independence of the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KWiseHash {
    field: Gf2Field,
    in_bits: u32,
    out_bits: u32,
    coeffs: Vec<u64>,
}

impl KWiseHash {
    pub fn draw<R: Rng + ?Sized>(kappa: usize, in_bits: u32, out_bits: u32, rng: &mut R) -> Result<Self> {
        let field = Self::check(kappa, in_bits, out_bits)?;
        let coeffs = (0..kappa).map(|_| rng.gen::<u64>() & field.mask()).collect();
        Ok(Self { field, in_bits, out_bits, coeffs })
    }

    /// Builds the member with the given coefficients `a_0, ..., a_{kappa-1}`.
    pub fn from_coeffs(coeffs: Vec<u64>, in_bits: u32, out_bits: u32) -> Result<Self> {
        let field = Self::check(coeffs.len(), in_bits, out_bits)?;
        if coeffs.iter().any(|&c| c & !field.mask() != 0) {
            return Err(Error::param("coefficient wider than the field"));
        }
        Ok(Self { field, in_bits, out_bits, coeffs })
    }

    fn check(kappa: usize, in_bits: u32, out_bits: u32) -> Result<Gf2Field> {
        if kappa == 0 {
            return Err(Error::param("kappa must be >= 1"));
        }
        if out_bits == 0 || in_bits > 64 || out_bits > 64 {
            return Err(Error::param(format!(
                "unsupported widths in_bits={in_bits} out_bits={out_bits}"
            )));
        }
        Ok(Gf2Field::new(in_bits.max(out_bits)).expect("width in 1..=64"))
    }

    pub fn kappa(&self) -> usize {
        self.coeffs.len()
    }

    pub fn in_bits(&self) -> u32 {
        self.in_bits
    }

    pub fn out_bits(&self) -> u32 {
        self.out_bits
    }

    pub fn field_width(&self) -> u32 {
        self.field.width()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Horner evaluation. Panics if `x` has bits above `in_bits`.
    pub fn eval(&self, x: u64) -> u64 {
        assert!(
            self.in_bits == 64 || x >> self.in_bits == 0,
            "key {x} wider than {} bits",
            self.in_bits
        );
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = self.field.mul(acc, x) ^ c;
        }
        let out_mask = if self.out_bits == 64 { u64::MAX } else { (1u64 << self.out_bits) - 1 };
        acc & out_mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_polynomial_maps_to_low_bits_of_a0() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = KWiseHash::draw(1, 10, 3, &mut rng).unwrap();
        let want = h.coeffs()[0] & 0b111;
        assert!((0..1024).all(|x| h.eval(x) == want));
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let h = KWiseHash::from_coeffs(vec![0; 5], 12, 7).unwrap();
        assert!((0..4096).all(|x| h.eval(x) == 0));
    }

    #[test]
    fn zero_key_gives_a0() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = KWiseHash::draw(6, 20, 9, &mut rng).unwrap();
        assert_eq!(h.eval(0), h.coeffs()[0] & 0x1ff);
    }

    #[test]
    fn draw_is_seed_deterministic_and_stores_kappa_elements() {
        let h1 = KWiseHash::draw(25, 12, 2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let h2 = KWiseHash::draw(25, 12, 2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.coeffs().len(), 25);
        assert_eq!(h1.field_width(), 12);
    }

    #[test]
    fn bad_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(KWiseHash::draw(0, 4, 2, &mut rng).is_err());
        assert!(KWiseHash::draw(2, 4, 0, &mut rng).is_err());
        assert!(KWiseHash::draw(2, 65, 2, &mut rng).is_err());
        assert!(KWiseHash::from_coeffs(vec![16], 4, 2).is_err());
    }

    /// Counts, over the whole family, how often each joint output tuple occurs
    /// for the given keys, and checks every tuple occurs equally often.
    fn assert_exactly_independent(kappa: usize, w: u32, d: u32, keys: &[u64]) {
        let size = 1u64 << w;
        let family = size.pow(kappa as u32);
        let mut counts = std::collections::HashMap::<Vec<u64>, u64>::new();
        for code in 0..family {
            let coeffs = (0..kappa).map(|i| (code / size.pow(i as u32)) % size).collect();
            let h = KWiseHash::from_coeffs(coeffs, w, d).unwrap();
            *counts.entry(keys.iter().map(|&x| h.eval(x)).collect()).or_default() += 1;
        }
        let tuples = 1u64 << (d as usize * keys.len());
        assert_eq!(counts.len() as u64, tuples, "kappa={kappa} w={w} d={d} keys={keys:?}");
        assert!(counts.values().all(|&c| c * tuples == family));
    }

    #[test]
    fn pairwise_independence_w4_d2() {
        // 2^8 coefficient pairs; each target pair hit exactly 16 times
        for x1 in 0..16 {
            for x2 in (x1 + 1)..16 {
                assert_exactly_independent(2, 4, 2, &[x1, x2]);
            }
        }
    }

    #[test]
    fn exhaustive_independence_small_configurations() {
        for w in 1..=4u32 {
            for kappa in 1..=3usize {
                if (w as usize) * kappa > 12 {
                    continue;
                }
                for d in 1..=w {
                    let n = 1u64 << w;
                    let keys: Vec<u64> = (0..n).collect();
                    for combo in combinations(&keys, kappa.min(n as usize)) {
                        assert_exactly_independent(kappa, w, d, &combo);
                    }
                }
            }
        }
    }

    fn combinations(items: &[u64], k: usize) -> Vec<Vec<u64>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = vec![];
        for (i, &x) in items.iter().enumerate() {
            for mut rest in combinations(&items[i + 1..], k - 1) {
                rest.insert(0, x);
                out.push(rest);
            }
        }
        out
    }
}
