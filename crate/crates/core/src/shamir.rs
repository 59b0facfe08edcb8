//! Shamir sharing over `Z_p` at evaluation points `1..=n`, Lagrange
//! reconstruction, and the parity-check matrix of the share code.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{Modulus, Rng, ZqMatrix};

/// Shares `s_1..s_n`; entry `k` belongs to evaluation point `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareVector {
    pub values: Vec<u64>,
}

impl ShareVector {
    pub fn get(&self, index: u64) -> Option<u64> {
        index
            .checked_sub(1)
            .and_then(|k| self.values.get(k as usize).copied())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Parity-check matrix `H` (`n x (n - t - 1)` over `Z_p`) whose left null
/// space is exactly the set of share vectors of degree-`t` polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityMatrix {
    pub h: ZqMatrix,
    pub n: usize,
    pub t: usize,
}

/// Horner evaluation of `coeffs[0] + coeffs[1] X + ...` at `x`.
pub fn eval_poly(coeffs: &[u64], x: u64, p: Modulus) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| p.add(p.mul(acc, x), c))
}

fn check_share_dims(n: usize, t: usize, p: Modulus) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptySet);
    }
    if t >= n {
        return Err(Error::ThresholdTooLarge { t, n });
    }
    if n as u64 >= p.value() {
        return Err(Error::FieldTooSmall { n, p: p.value() });
    }
    Ok(())
}

/// Shares `s` with a uniformly random degree-`t` polynomial. Returns the
/// shares and the coefficient list (constant term first).
pub fn sss_share(s: u64, n: usize, t: usize, p: Modulus, rng: &mut Rng) -> Result<(ShareVector, Vec<u64>)> {
    let mut coeffs = Vec::with_capacity(t + 1);
    coeffs.push(s);
    coeffs.extend((0..t).map(|_| rng.uniform_below(p.value())));
    let shares = sss_share_with_poly(&coeffs, n, p)?;
    Ok((shares, coeffs))
}

/// Evaluates a fixed polynomial at `1..=n`.
pub fn sss_share_with_poly(coeffs: &[u64], n: usize, p: Modulus) -> Result<ShareVector> {
    let t = coeffs.len().checked_sub(1).ok_or(Error::EmptySet)?;
    check_share_dims(n, t, p)?;
    if coeffs[0] >= p.value() {
        return Err(Error::SecretOutOfRange(coeffs[0]));
    }
    Ok(ShareVector {
        values: (1..=n as u64).map(|i| eval_poly(coeffs, i, p)).collect(),
    })
}

fn check_index_set<'a>(set: impl IntoIterator<Item = &'a u64>, p: Modulus) -> Result<Vec<u64>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &i in set {
        if i == 0 {
            return Err(Error::IndexZero);
        }
        if i >= p.value() {
            return Err(Error::IndexOutOfField { index: i, p: p.value() });
        }
        if !seen.insert(i) {
            return Err(Error::DuplicateIndex(i));
        }
        out.push(i);
    }
    if out.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(out)
}

/// `lambda_i = prod_{j != i} j / (j - i)` for every `i` in `set`.
pub fn lagrange_coeffs(set: &[u64], p: Modulus) -> Result<BTreeMap<u64, u64>> {
    let idx = check_index_set(set, p)?;
    let mut out = BTreeMap::new();
    for &i in &idx {
        let (mut num, mut den) = (1u64, 1u64);
        for &j in &idx {
            if j != i {
                num = p.mul(num, j);
                den = p.mul(den, p.sub(j, i));
            }
        }
        let inv = p.inv(den).ok_or(Error::DuplicateIndex(i))?;
        out.insert(i, p.mul(num, inv));
    }
    Ok(out)
}

/// `sum lambda_i s_i` over all supplied shares.
pub fn sss_combine(shares: &BTreeMap<u64, u64>, p: Modulus) -> Result<u64> {
    let idx: Vec<u64> = shares.keys().copied().collect();
    let lambdas = lagrange_coeffs(&idx, p)?;
    let mut acc = 0;
    for (i, &s) in shares {
        if s >= p.value() {
            return Err(Error::ShareOutOfRange(s));
        }
        acc = p.add(acc, p.mul(lambdas[i], s));
    }
    Ok(acc)
}

/// Column `k` holds `w_i i^k` with `w_i = prod_{j != i} (i - j)^{-1}`, the
/// dual of the evaluation code at `1..=n`.
pub fn parity_matrix(n: usize, t: usize, p: Modulus) -> Result<ParityMatrix> {
    check_share_dims(n, t, p)?;
    if t + 1 >= n {
        return Err(Error::DegenerateDims { n, t });
    }
    let cols = n - t - 1;
    let mut h = ZqMatrix::zeros(n, cols, p);
    for i in 1..=n as u64 {
        let mut den = 1u64;
        for j in 1..=n as u64 {
            if j != i {
                den = p.mul(den, p.sub(i, j));
            }
        }
        let w = p.inv(den).ok_or(Error::DuplicateIndex(i))?;
        let mut pow = w;
        for k in 0..cols {
            h.set(i as usize - 1, k, pow);
            pow = p.mul(pow, i);
        }
    }
    Ok(ParityMatrix { h, n, t })
}

/// `m^T H == 0 (mod p)`.
pub fn is_valid_share_vector(m: &[u64], h: &ParityMatrix) -> Result<bool> {
    crate::math::modular::check_dim(h.n, m.len())?;
    let p = h.h.modulus();
    Ok((0..h.h.cols()).all(|k| {
        let acc = (0..h.n).fold(0u64, |acc, i| p.add(acc, p.mul(p.reduce_i64(m[i] as i64), h.h.get(i, k))));
        acc == 0
    }))
}
