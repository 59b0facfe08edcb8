//! Lattice-based publicly verifiable secret sharing and a two-round
//! randomness beacon built on it.
//!
//! The crate is `no_std` (with `alloc`). Everything random flows through an
//! explicit [`math::Rng`], so every run replays bit-exactly from its seed.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod codec;
pub mod drng;
pub mod error;
pub mod math;
pub mod params;
pub mod pke;
pub mod proof;
pub mod pvss;
pub mod shamir;

pub use error::{Error, Result};
