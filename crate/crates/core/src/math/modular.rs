//! Exact modular arithmetic, integer vectors and dense matrices over `Z_q`.
//!
//! All shipped moduli stay below 2^62, so products of two reduced residues fit
//! in `u128` and every operation here is exact.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A modulus `m >= 2`, bounded so that residue products fit in `u128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    /// Exclusive upper bound on supported moduli.
    pub const LIMIT: u64 = 1 << 62;

    pub fn new(value: u64) -> Result<Self> {
        if value < 2 {
            return Err(Error::InvalidParams(alloc::format!(
                "modulus must be at least 2, got {value}"
            )));
        }
        if value >= Self::LIMIT {
            return Err(Error::InvalidParams(alloc::format!(
                "modulus {value} exceeds 2^62"
            )));
        }
        Ok(Self(value))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// Number of little-endian bytes used to store one residue.
    pub fn byte_width(self) -> usize {
        let bits = 64 - (self.0 - 1).leading_zeros() as usize;
        bits.div_ceil(8).max(1)
    }

    #[inline]
    pub fn reduce_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(self, x: i128) -> u64 {
        x.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn reduce_u128(self, x: u128) -> u64 {
        (x % self.0 as u128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm; `None` when `gcd(a, m) != 1`.
    pub fn inv(self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.0 as i128, (a % self.0) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(self.reduce_i128(t0))
    }
}

/// The representative of `x mod m` closest to zero.
///
/// Odd `m` maps into `[-(m-1)/2, (m-1)/2]`; even `m` maps into `[-m/2, m/2 - 1]`.
pub fn centered_rep(x: i64, m: Modulus) -> i64 {
    let r = m.reduce_i64(x);
    if r > (m.value() - 1) / 2 {
        r as i64 - m.value() as i64
    } else {
        r as i64
    }
}

/// An unreduced integer vector (secrets, noise, proof responses).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZVector(pub Vec<i64>);

impl ZVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Exact squared Euclidean norm.
    pub fn sq_norm(&self) -> u128 {
        self.0
            .iter()
            .map(|&x| {
                let a = x.unsigned_abs() as u128;
                a * a
            })
            .sum()
    }

    pub fn concat(parts: &[&ZVector]) -> Self {
        Self(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }
}

impl From<Vec<i64>> for ZVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

/// Euclidean norm of an integer vector.
pub fn norm_l2(x: &ZVector) -> f64 {
    libm::sqrt(x.sq_norm() as f64)
}

/// A vector with entries reduced into `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZqVector {
    entries: Vec<u64>,
    modulus: Modulus,
}

impl ZqVector {
    pub fn zeros(len: usize, modulus: Modulus) -> Self {
        Self {
            entries: vec![0; len],
            modulus,
        }
    }

    /// Builds a vector from entries that must already be reduced.
    pub fn from_reduced(entries: Vec<u64>, modulus: Modulus) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e >= modulus.value()) {
            return Err(Error::InvalidParams(alloc::format!(
                "entry {bad} not reduced mod {}",
                modulus.value()
            )));
        }
        Ok(Self { entries, modulus })
    }

    pub fn from_signed(values: &[i64], modulus: Modulus) -> Self {
        Self {
            entries: values.iter().map(|&v| modulus.reduce_i64(v)).collect(),
            modulus,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Sets one entry, reducing it.
    pub fn set(&mut self, index: usize, value: u64) {
        self.entries[index] = value % self.modulus.value();
    }

    pub fn add(&self, other: &ZqVector) -> Result<ZqVector> {
        check_dim(self.len(), other.len())?;
        let m = self.modulus;
        Ok(ZqVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| m.add(a, b))
                .collect(),
            modulus: m,
        })
    }

    /// `<self, x>` over the integers, reduced mod q.
    pub fn dot_signed(&self, x: &ZVector) -> Result<u64> {
        check_dim(self.len(), x.len())?;
        let m = self.modulus;
        let acc: u128 = self
            .entries
            .iter()
            .zip(x.as_slice())
            .map(|(&a, &b)| a as u128 * m.reduce_i64(b) as u128)
            .fold(0u128, |acc, p| (acc + p) % m.value() as u128);
        Ok(acc as u64)
    }
}

/// A dense row-major matrix over `Z_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    modulus: Modulus,
}

impl ZqMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: Modulus) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
            modulus,
        }
    }

    pub fn identity(size: usize, modulus: Modulus) -> Self {
        let mut m = Self::zeros(size, size, modulus);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_reduced(rows: usize, cols: usize, data: Vec<u64>, modulus: Modulus) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        if data.iter().any(|&e| e >= modulus.value()) {
            return Err(Error::InvalidParams("matrix entry not reduced".into()));
        }
        Ok(Self {
            rows,
            cols,
            data,
            modulus,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = value % self.modulus.value();
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> ZqMatrix {
        let mut out = ZqMatrix::zeros(self.cols, self.rows, self.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }
}

/// `A · x mod q` for an integer vector `x`.
pub fn mat_vec_mul(a: &ZqMatrix, x: &ZVector) -> Result<ZqVector> {
    check_dim(a.cols, x.len())?;
    let m = a.modulus;
    let reduced: Vec<u64> = x.as_slice().iter().map(|&v| m.reduce_i64(v)).collect();
    Ok(mat_vec_mul_reduced(a, &reduced))
}

/// `A · x mod q` where `x` is already reduced. Dimensions are the caller's
/// responsibility.
pub(crate) fn mat_vec_mul_reduced(a: &ZqMatrix, x: &[u64]) -> ZqVector {
    debug_assert_eq!(a.cols, x.len());
    let m = a.modulus;
    let cap = m.value() as u128 * m.value() as u128;
    // Each product is < m^2, so up to 2^128 / m^2 of them can be summed
    // before reducing.
    let batch = (u128::MAX / cap).min(1 << 20) as usize;
    let entries = (0..a.rows)
        .map(|r| {
            let row = a.row(r);
            let mut acc = 0u128;
            for (chunk_a, chunk_x) in row.chunks(batch).zip(x.chunks(batch)) {
                for (&ai, &xi) in chunk_a.iter().zip(chunk_x) {
                    acc += ai as u128 * xi as u128;
                }
                acc %= m.value() as u128;
            }
            acc as u64
        })
        .collect();
    ZqVector {
        entries,
        modulus: m,
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Deterministic primality test by trial division; adequate for `p < 2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn centered_rep_examples() {
        assert_eq!(centered_rep(7, q(9)), -2);
        assert_eq!(centered_rep(2, q(5)), 2);
        assert_eq!(centered_rep(13, q(5)), -2);
        // even modulus: [-m/2, m/2 - 1]
        assert_eq!(centered_rep(5, q(10)), -5);
        assert_eq!(centered_rep(4, q(10)), 4);
    }

    #[test]
    fn identity_and_zero_products() {
        let m = q(7);
        let id = ZqMatrix::identity(3, m);
        let x = ZVector(vec![1, 2, 3]);
        assert_eq!(mat_vec_mul(&id, &x).unwrap().entries(), &[1, 2, 3]);

        let zero = ZqMatrix::zeros(3, 3, q(25));
        assert_eq!(mat_vec_mul(&zero, &x).unwrap().entries(), &[0, 0, 0]);
    }

    #[test]
    fn mat_vec_mul_matches_schoolbook() {
        let m = q(25);
        let mut rng = crate::math::Rng::from_seed([3; 32]);
        let data: Vec<u64> = (0..64).map(|_| rng.uniform_below(25)).collect();
        let a = ZqMatrix::from_reduced(8, 8, data.clone(), m).unwrap();
        let x = ZVector((0..8).map(|_| rng.uniform_below(200) as i64 - 100).collect());
        let got = mat_vec_mul(&a, &x).unwrap();

        // triple loop over plain i64, reduce at the end
        for r in 0..8 {
            let mut s: i64 = 0;
            for c in 0..8 {
                s += data[r * 8 + c] as i64 * x.0[c];
            }
            assert_eq!(got.entries()[r], s.rem_euclid(25) as u64);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = ZqMatrix::zeros(2, 3, q(7));
        assert_eq!(
            mat_vec_mul(&a, &ZVector(vec![1, 2])),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_l2(&ZVector(vec![0, 0, 0])), 0.0);
        assert_eq!(norm_l2(&ZVector(vec![3, 4])), 5.0);
    }

    #[test]
    fn norm_matches_integer_sqrt_oracle() {
        let mut rng = crate::math::Rng::from_seed([9; 32]);
        for _ in 0..200 {
            let x = ZVector(
                (0..64)
                    .map(|_| rng.uniform_below(1 << 40) as i64 - (1 << 39))
                    .collect(),
            );
            // exact sum of squares, then floor sqrt by integer Newton iteration
            let s: u128 = x.0.iter().map(|&v| (v as i128 * v as i128) as u128).sum();
            let mut r = (s as f64).sqrt() as u128;
            while r * r > s {
                r -= 1;
            }
            while (r + 1) * (r + 1) <= s {
                r += 1;
            }
            // r <= sqrt(s) < r + 1 bracket, with interpolation for the fractional part
            let frac = (s - r * r) as f64 / (2 * r + 1) as f64;
            let oracle = r as f64 + frac;
            let got = norm_l2(&x);
            assert!(((got - oracle) / oracle).abs() < 2f64.powi(-40), "{got} vs {oracle}");
        }
    }

    #[test]
    fn inverse_and_byte_width() {
        let m = q(7);
        for a in 1..7 {
            assert_eq!(m.mul(a, m.inv(a).unwrap()), 1);
        }
        assert_eq!(m.inv(0), None);
        assert_eq!(q(66049).byte_width(), 3);
        assert_eq!(q(256).byte_width(), 1);
        assert_eq!(q(257).byte_width(), 2);
        assert!(is_prime(257) && is_prime(12289) && !is_prime(6) && !is_prime(1));
    }

    proptest! {
        #[test]
        fn centered_rep_is_congruent_and_small(x in -1_000_000i64..1_000_000, m in 2u64..5000) {
            let m = q(m);
            let y = centered_rep(x, m);
            prop_assert_eq!((x - y).rem_euclid(m.value() as i64), 0);
            prop_assert!(2 * y.unsigned_abs() <= m.value());
        }

        #[test]
        fn mat_vec_mul_is_linear(seed in any::<[u8; 32]>(), qv in 2u64..100_000) {
            let m = q(qv);
            let mut rng = crate::math::Rng::from_seed(seed);
            let data = (0..30).map(|_| rng.uniform_below(qv)).collect();
            let a = ZqMatrix::from_reduced(5, 6, data, m).unwrap();
            let x = ZVector((0..6).map(|_| rng.uniform_below(1000) as i64 - 500).collect());
            let y = ZVector((0..6).map(|_| rng.uniform_below(1000) as i64 - 500).collect());
            let sum = ZVector(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect());
            let lhs = mat_vec_mul(&a, &sum).unwrap();
            let rhs = mat_vec_mul(&a, &x).unwrap().add(&mat_vec_mul(&a, &y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
