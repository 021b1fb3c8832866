//! Integer-exact comparisons of `e^n` against integer powers, used to place
//! ceilings of `c * ln k` without floating-point boundary errors.

use std::cmp::Ordering;

use num_bigint::BigUint;

/// Fixed-point bracket `[lo, hi]` of `e * 2^bits`.
fn e_bracket(bits: u64) -> (BigUint, BigUint) {
    let one = BigUint::from(1u8) << bits;
    let mut term = one.clone();
    let mut lo = one.clone();
    let mut j = 1u64;
    while term > BigUint::from(0u8) {
        term /= j;
        lo += &term;
        j += 1;
    }
    // each truncated term is short by less than 2 units, and the tail after the
    // last nonzero term is below one unit
    let hi = &lo + BigUint::from(2 * j + 6);
    (lo, hi)
}

/// Compares `e^n` with `base^exp` exactly. Both sides are irrational versus
/// integer unless `n == 0`, so `Equal` only occurs for `n == 0, base^exp == 1`.
pub fn cmp_exp_with_pow(n: u64, base: u64, exp: u64) -> Ordering {
    let target = BigUint::from(base).pow(exp as u32);
    if n == 0 {
        return BigUint::from(1u8).cmp(&target);
    }
    let mut bits = 64 + 2 * (64 - n.leading_zeros() as u64) + target.bits();
    loop {
        let (lo, hi) = e_bracket(bits);
        let mut lo_pow = lo.clone();
        let mut hi_pow = hi.clone();
        for _ in 1..n {
            lo_pow = (&lo_pow * &lo) >> bits;
            hi_pow = ((&hi_pow * &hi) >> bits) + 1u8;
        }
        let scaled = &target << bits;
        if lo_pow > scaled {
            return Ordering::Greater;
        }
        if hi_pow < scaled {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

/// `ceil(c * ln k)` for `k >= 1`.
pub fn ceil_c_ln(c: u64, k: u64) -> u64 {
    assert!(k >= 1);
    if k == 1 {
        return 0;
    }
    let approx = (c as f64 * (k as f64).ln()).floor() as u64;
    let mut n = approx.saturating_sub(2);
    // smallest n with e^n >= k^c
    while cmp_exp_with_pow(n, k, c) == Ordering::Less {
        n += 1;
    }
    n
}

/// The unique `d >= 1` with `2^(d-1) < k / ln k <= 2^d`, for `k >= 2`.
pub fn log2_ceil_k_over_ln_k(k: u64) -> u32 {
    assert!(k >= 2);
    // k / ln k <= 2^d  <=>  e^k <= k^(2^d)
    let mut d = 1u32;
    while cmp_exp_with_pow(k, k, 1u64 << d) == Ordering::Greater {
        d += 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_floating_point_away_from_boundaries() {
        for k in 2..300u64 {
            for c in [8u64, 12, 13] {
                let x = c as f64 * (k as f64).ln();
                assert_eq!(ceil_c_ln(c, k), x.ceil() as u64, "c={c} k={k}");
            }
            let ratio = k as f64 / (k as f64).ln();
            let d = log2_ceil_k_over_ln_k(k);
            assert!(2f64.powi(d as i32 - 1) < ratio && ratio <= 2f64.powi(d as i32), "k={k}");
        }
    }

    #[test]
    fn known_small_values() {
        assert_eq!(ceil_c_ln(8, 2), 6);
        assert_eq!(ceil_c_ln(13, 2), 10);
        assert_eq!(ceil_c_ln(12, 2), 9);
        assert_eq!(ceil_c_ln(8, 8), 17);
        assert_eq!(ceil_c_ln(13, 8), 28);
        assert_eq!(ceil_c_ln(12, 8), 25);
        assert_eq!(log2_ceil_k_over_ln_k(2), 2);
        assert_eq!(log2_ceil_k_over_ln_k(8), 2);
        assert_eq!(ceil_c_ln(5, 1), 0);
    }

    #[test]
    fn exp_comparisons() {
        assert_eq!(cmp_exp_with_pow(1, 2, 1), Ordering::Greater);
        assert_eq!(cmp_exp_with_pow(1, 3, 1), Ordering::Less);
        // e^10 ~ 22026.47
        assert_eq!(cmp_exp_with_pow(10, 22026, 1), Ordering::Greater);
        assert_eq!(cmp_exp_with_pow(10, 22027, 1), Ordering::Less);
        assert_eq!(cmp_exp_with_pow(0, 7, 0), Ordering::Equal);
    }
}
