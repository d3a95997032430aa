//! Certified conversions between explicit error bounds for the prime
//! counting functions ψ(x), θ(x) and π(x).

pub mod bounds;
pub mod conversions;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod tables_io;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    struct Arithmetic;
    #[doc = include_str!("../../../book/src/bounds.md")]
    struct Bounds;
    #[doc = include_str!("../../../book/src/conversions.md")]
    struct Conversions;
    #[doc = include_str!("../../../book/src/numerical.md")]
    struct Numerical;
    #[doc = include_str!("../../../book/src/oracle.md")]
    struct Oracle;
}
