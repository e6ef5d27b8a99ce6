//! Slime migration on cyclic integer codes, and the bijection between binary
//! necklaces with `n` black and `k` white beads and `(n, k, 0)`-codes.
//!
//! A *code* is a cyclic array of `n` nonnegative integers summing to `k`. Its
//! weighted sum `Σ j·f[j] mod n` splits the codes into `n` residue classes.
//! When `n` is prime the codes of residue `0` are in bijection with the
//! rotation classes of codes (necklaces); [`bijection::prime_bijection`]
//! constructs that bijection explicitly and [`verify`] certifies it by
//! exhaustive enumeration.

pub mod arith;
pub mod bijection;
pub mod code;
mod error;
pub mod necklace;
pub mod slime;
pub mod verify;

pub use bijection::{
    build_sigma, neck_class, prime_bijection, riwi_coprime, riwi_slime, verify_riwi, BijectionTable,
    Chooser, NeckClass, RiwiMap, RiwiReport,
};
pub use code::{enumerate_codes, Code};
pub use error::{Error, Result};
pub use necklace::{canonicalize, count_necklaces, enumerate_necklaces, BeadWord, Necklace};
pub use slime::{CyclicInterval, SlimeDecomposition};
pub use verify::{Certificate, Check, Envelope, Verdict};

