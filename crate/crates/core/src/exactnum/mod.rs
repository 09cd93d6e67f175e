//! Exact rational arithmetic, polynomials and root moduli.

pub mod croots;
pub mod factor;
pub mod modulus;
pub mod serde_num;
pub mod poly;
pub mod rational;
pub mod sturm;
