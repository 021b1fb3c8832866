//! Arithmetic in GF(2^w) for 1 <= w <= 64, carry-less multiplication with a
//! fixed reduction polynomial per width.

/// Low-order coefficients of the reduction polynomial for each width `w`
/// (index `w - 1`). The leading `x^w` term is implicit. Each entry is the
/// lexicographically smallest irreducible trinomial, or pentanomial where no
/// trinomial exists.
const REDUCTION_LOW: [u64; 64] = [
    0x0, 0x3, 0x3, 0x3, 0x5, 0x3, 0x3, 0x1b, // 1..=8
    0x3, 0x9, 0x5, 0x9, 0x1b, 0x21, 0x3, 0x2b, // 9..=16
    0x9, 0x9, 0x27, 0x9, 0x5, 0x3, 0x21, 0x1b, // 17..=24
    0x9, 0x1b, 0x27, 0x3, 0x5, 0x3, 0x9, 0x8d, // 25..=32
    0x401, 0x81, 0x5, 0x201, 0x53, 0x63, 0x11, 0x39, // 33..=40
    0x9, 0x81, 0x59, 0x21, 0x1b, 0x3, 0x21, 0x2d, // 41..=48
    0x201, 0x1d, 0x4b, 0x9, 0x47, 0x201, 0x81, 0x95, // 49..=56
    0x11, 0x80001, 0x95, 0x3, 0x27, 0x2000_0001, 0x3, 0x1b, // 57..=64
];

/// The field GF(2^w) with elements stored in the low `w` bits of a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2Field {
    width: u32,
}

impl Gf2Field {
    pub fn new(width: u32) -> Option<Self> {
        (1..=64).contains(&width).then_some(Self { width })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Bit mask covering one field element.
    pub fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    /// Full reduction polynomial including the `x^w` term.
    pub fn modulus(&self) -> u128 {
        (1u128 << self.width) | REDUCTION_LOW[self.width as usize - 1] as u128
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(clmul(a, b))
    }

    /// Reduces a polynomial of degree < 2w modulo the field polynomial.
    pub fn reduce(&self, mut prod: u128) -> u64 {
        let w = self.width;
        let modulus = self.modulus();
        let top = 128 - prod.leading_zeros();
        // bits w..top are cleared from the top down
        let mut bit = top;
        while bit > w {
            bit -= 1;
            if prod >> bit & 1 == 1 {
                prod ^= modulus << (bit - w);
            }
        }
        prod as u64
    }
}

/// Carry-less 64x64 -> 128 bit product.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let a = a as u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        let tz = b.trailing_zeros();
        shift += tz;
        acc ^= a << shift;
        b >>= tz;
        b >>= 1;
        shift += 1;
    }
    acc
}
