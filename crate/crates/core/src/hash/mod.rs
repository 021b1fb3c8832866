//! Hash families over finite fields: the Carter-Wegman universal family over
//! a prime field and kappa-wise independent polynomials over GF(2^w).

pub mod gf2;
pub mod kwise;
pub mod prime;
pub mod universal;

pub use gf2::Gf2Field;
pub use kwise::KWiseHash;
pub use universal::UniversalHash;
