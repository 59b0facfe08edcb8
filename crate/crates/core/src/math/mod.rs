//! Arithmetic substrate: modular linear algebra, Gaussian sampling, randomness.

pub mod gaussian;
pub mod modular;
pub mod rng;

pub use gaussian::{gauss_sample, GaussianParams, GaussianSampler};
pub use modular::{centered_rep, is_prime, mat_vec_mul, norm_l2, Modulus, ZVector, ZqMatrix, ZqVector};
pub use rng::Rng;
