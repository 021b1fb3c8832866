use rand::Rng;

use super::prime::{is_prime, next_prime};
use crate::error::{Error, Result};

/// A member `x -> ((a*x + b) mod p) mod r` of the Carter-Wegman universal family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UniversalHash {
    p: u64,
    a: u64,
    b: u64,
    r: u64,
}

impl UniversalHash {
    /// Draws a uniform member of the family on `[domain_size]` with range `[r]`,
    /// using the smallest prime `p >= domain_size`.
    pub fn draw<R: Rng + ?Sized>(domain_size: u64, r: u64, rng: &mut R) -> Result<Self> {
        if domain_size == 0 || r == 0 {
            return Err(Error::param("universal hash needs domain_size >= 1 and r >= 1"));
        }
        Ok(Self::draw_with_prime(next_prime(domain_size), r, rng))
    }

    /// Draws with a modulus already known to be prime.
    pub(crate) fn draw_with_prime<R: Rng + ?Sized>(p: u64, r: u64, rng: &mut R) -> Self {
        debug_assert!(r >= 1);
        let a = rng.gen_range(1..p);
        let b = rng.gen_range(0..p);
        Self { p, a, b, r }
    }

    /// Builds a specific member of the family, validating every parameter.
    pub fn from_parts(p: u64, a: u64, b: u64, r: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::param(format!("modulus {p} is not prime")));
        }
        if a == 0 || a >= p || b >= p || r == 0 {
            return Err(Error::param(format!(
                "need 1 <= a < p, 0 <= b < p, r >= 1 (p={p}, a={a}, b={b}, r={r})"
            )));
        }
        Ok(Self { p, a, b, r })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn multiplier(&self) -> u64 {
        self.a
    }

    pub fn offset(&self) -> u64 {
        self.b
    }

    pub fn range(&self) -> u64 {
        self.r
    }

    pub fn eval(&self, x: u64) -> Result<u64> {
        if x >= self.p {
            return Err(Error::Domain { value: x, bound: self.p });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the domain check; `x` must be below the modulus.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: u64) -> u64 {
        let t = self.a as u128 * x as u128 + self.b as u128;
        let v = if self.p == crate::sampler::MERSENNE_61 {
            crate::sampler::reduce_m61(t)
        } else {
            (t % self.p as u128) as u64
        };
        v % self.r
    }
}
