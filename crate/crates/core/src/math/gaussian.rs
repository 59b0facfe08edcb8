//! Discrete Gaussian sampling over the integers.
//!
//! Mass function `rho_sigma(x) = exp(-pi x^2 / sigma^2)`, truncated to
//! `[-tail_cut, tail_cut]`. Narrow widths use an inverse cumulative table over
//! `|x|`. Wide widths (table longer than [`CDT_MAX_LEN`]) draw from a discrete
//! Laplace proposal and accept with the Gaussian-to-Laplace ratio, rejecting
//! anything beyond the tail cut; this targets the identical truncated
//! distribution without storing a table.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use spin::Mutex;

use super::modular::ZVector;
use super::rng::Rng;
use crate::error::{Error, Result};

/// Largest table (in entries) kept for the inverse-CDT path.
pub const CDT_MAX_LEN: usize = 1 << 14;

/// Tail cut as a multiple of sigma.
pub const TAIL_FACTOR: f64 = 12.0;

const CACHE_CAP: usize = 64;

static CACHE: Mutex<BTreeMap<(u64, u64), Arc<GaussianSampler>>> = Mutex::new(BTreeMap::new());

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianParams {
    pub sigma: f64,
    pub dim: usize,
    pub tail_cut: u64,
}

impl GaussianParams {
    /// Parameters with the default tail cut `ceil(12 sigma)`.
    pub fn new(sigma: f64, dim: usize) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "gaussian width must be positive, got {sigma}"
            )));
        }
        let tail_cut = (libm::ceil(TAIL_FACTOR * sigma) as u64).max(1);
        Self::with_tail_cut(sigma, dim, tail_cut)
    }

    pub fn with_tail_cut(sigma: f64, dim: usize, tail_cut: u64) -> Result<Self> {
        let gp = Self {
            sigma,
            dim,
            tail_cut,
        };
        gp.validate()?;
        Ok(gp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "gaussian width must be positive, got {}",
                self.sigma
            )));
        }
        if self.dim == 0 {
            return Err(Error::InvalidParams("gaussian dimension must be positive".into()));
        }
        if (self.tail_cut as f64) < libm::ceil(self.sigma) {
            return Err(Error::InvalidParams("tail cut below ceil(sigma)".into()));
        }
        if self.tail_cut >= 1 << 52 {
            return Err(Error::InvalidParams("tail cut too large".into()));
        }
        Ok(())
    }
}

/// `rho_sigma(x)`.
#[inline]
pub fn rho(sigma: f64, x: f64) -> f64 {
    libm::exp(-core::f64::consts::PI * x * x / (sigma * sigma))
}

#[derive(Debug)]
enum Method {
    /// `cdt[k]` is `P(|X| <= k)` scaled to 2^64; the final entry is `u64::MAX`.
    Cdt(Vec<u64>),
    /// Laplace scale `floor(s) + 1` and variance `s^2` of the equivalent
    /// `exp(-x^2 / (2 s^2))` form.
    Laplace { scale: f64, var: f64 },
}

/// A one-dimensional sampler for fixed `(sigma, tail_cut)`.
#[derive(Debug)]
pub struct GaussianSampler {
    sigma: f64,
    tail_cut: u64,
    method: Method,
}

impl GaussianSampler {
    pub fn new(sigma: f64, tail_cut: u64) -> Self {
        let len = tail_cut as usize + 1;
        let method = if len <= CDT_MAX_LEN {
            Method::Cdt(build_cdt(sigma, tail_cut))
        } else {
            laplace_method(sigma)
        };
        Self {
            sigma,
            tail_cut,
            method,
        }
    }

    /// Shared sampler for these parameters, built on first use.
    pub fn cached(sigma: f64, tail_cut: u64) -> Arc<GaussianSampler> {
        let key = (sigma.to_bits(), tail_cut);
        let mut cache = CACHE.lock();
        if let Some(s) = cache.get(&key) {
            return s.clone();
        }
        if cache.len() >= CACHE_CAP {
            cache.clear();
        }
        let s = Arc::new(GaussianSampler::new(sigma, tail_cut));
        cache.insert(key, s.clone());
        s
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn tail_cut(&self) -> u64 {
        self.tail_cut
    }

    pub fn sample(&self, rng: &mut Rng) -> i64 {
        match &self.method {
            Method::Cdt(cdt) => {
                let u = rng.next_u64();
                let k = cdt.partition_point(|&c| c <= u) as i64;
                if k != 0 && rng.next_u64() & 1 == 1 {
                    -k
                } else {
                    k
                }
            }
            Method::Laplace { scale, var } => loop {
                let y = discrete_laplace(*scale, rng);
                let mag = y.unsigned_abs();
                if mag > self.tail_cut {
                    continue;
                }
                let d = mag as f64 - var / scale;
                if rng.uniform_f64() < libm::exp(-d * d / (2.0 * var)) {
                    return y;
                }
            },
        }
    }
}

fn laplace_method(sigma: f64) -> Method {
    let s = sigma / libm::sqrt(2.0 * core::f64::consts::PI);
    Method::Laplace {
        scale: libm::floor(s) + 1.0,
        var: s * s,
    }
}

/// `P(y) proportional to exp(-|y| / scale)`, by a signed geometric draw that
/// discards the duplicate negative zero.
fn discrete_laplace(scale: f64, rng: &mut Rng) -> i64 {
    loop {
        let u = 1.0 - rng.uniform_f64();
        let mag = libm::floor(-scale * libm::log(u));
        if mag >= (1u64 << 62) as f64 {
            continue;
        }
        let neg = rng.next_u64() & 1 == 1;
        if neg && mag == 0.0 {
            continue;
        }
        let m = mag as i64;
        return if neg { -m } else { m };
    }
}

fn build_cdt(sigma: f64, tail_cut: u64) -> Vec<u64> {
    let len = tail_cut as usize + 1;
    let weights: Vec<f64> = (0..len)
        .map(|k| {
            let r = rho(sigma, k as f64);
            if k == 0 {
                r
            } else {
                2.0 * r
            }
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let scale = 18_446_744_073_709_551_616.0; // 2^64
    let mut acc = 0.0;
    let mut cdt: Vec<u64> = weights
        .iter()
        .map(|w| {
            acc += w / total;
            let v = acc * scale;
            if v >= scale {
                u64::MAX
            } else {
                v as u64
            }
        })
        .collect();
    // Trim entries whose probability rounds to zero; the last kept entry
    // absorbs the remainder.
    while cdt.len() > 1 && cdt[cdt.len() - 2] == u64::MAX {
        cdt.pop();
    }
    *cdt.last_mut().expect("table is nonempty") = u64::MAX;
    cdt
}

/// Draws a `dim`-length vector with independent coordinates from the
/// truncated discrete Gaussian.
pub fn gauss_sample(gp: &GaussianParams, rng: &mut Rng) -> Result<ZVector> {
    gp.validate()?;
    let sampler = GaussianSampler::cached(gp.sigma, gp.tail_cut);
    Ok(ZVector((0..gp.dim).map(|_| sampler.sample(rng)).collect()))
}

/// A single coordinate with the default tail cut.
pub fn gauss_sample_scalar(sigma: f64, rng: &mut Rng) -> Result<i64> {
    Ok(gauss_sample(&GaussianParams::new(sigma, 1)?, rng)?.0[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    /// Normalized `rho` over the tail-cut support, by direct summation.
    fn support_pmf(sigma: f64, tail: i64) -> Vec<f64> {
        let w: Vec<f64> = (-tail..=tail).map(|x| (-core::f64::consts::PI * (x * x) as f64 / (sigma * sigma)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    #[test]
    fn narrow_width_is_all_zero() {
        let gp = GaussianParams::new(0.0001, 4).unwrap();
        let mut rng = Rng::from_u64(1);
        for _ in 0..100 {
            assert_eq!(gauss_sample(&gp, &mut rng).unwrap().0, [0, 0, 0, 0]);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(GaussianParams::new(0.0, 3).is_err());
        assert!(GaussianParams::new(-1.0, 3).is_err());
        assert!(GaussianParams::new(1.0, 0).is_err());
        assert!(GaussianParams::with_tail_cut(5.0, 1, 4).is_err());
    }

    #[test]
    fn mean_and_variance_at_sigma_three() {
        let sigma = 3.0;
        let gp = GaussianParams::new(sigma, 100_000).unwrap();
        let mut rng = Rng::from_u64(11);
        let x = gauss_sample(&gp, &mut rng).unwrap();
        let n = x.len() as f64;
        let mean = x.0.iter().map(|&v| v as f64).sum::<f64>() / n;
        assert!(mean.abs() < 3.0 * (sigma / n.sqrt()), "mean {mean}");

        let tail = gp.tail_cut as i64;
        let pmf = support_pmf(sigma, tail);
        let exact_var: f64 = (-tail..=tail).zip(&pmf).map(|(k, p)| (k * k) as f64 * p).sum();
        let var = x.0.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((var - exact_var).abs() < 0.1 * exact_var, "var {var} vs {exact_var}");
        assert!(x.0.iter().all(|v| v.unsigned_abs() <= gp.tail_cut));
    }

    fn chi_square_against_support(sampler: &GaussianSampler, draws: usize, seed: u64) -> f64 {
        let tail = sampler.tail_cut() as i64;
        let pmf = support_pmf(sampler.sigma(), tail);
        let mut counts = alloc::vec![0u64; pmf.len()];
        let mut rng = Rng::from_u64(seed);
        for _ in 0..draws {
            let x = sampler.sample(&mut rng);
            counts[(x + tail) as usize] += 1;
        }
        // pool bins with expected count < 5 into one
        let (mut stat, mut pooled_obs, mut pooled_exp, mut bins) = (0.0, 0.0, 0.0, 0usize);
        for (c, p) in counts.iter().zip(&pmf) {
            let e = p * draws as f64;
            if e < 5.0 {
                pooled_obs += *c as f64;
                pooled_exp += e;
            } else {
                stat += (*c as f64 - e).powi(2) / e;
                bins += 1;
            }
        }
        if pooled_exp > 0.0 {
            stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
            bins += 1;
        }
        let dist = ChiSquared::new((bins - 1) as f64).unwrap();
        1.0 - dist.cdf(stat)
    }

    #[test]
    fn cdt_matches_rho_table() {
        let s = GaussianSampler::new(3.0, 36);
        let p = chi_square_against_support(&s, 1_000_000, 5);
        assert!(p > 0.001, "p-value {p}");
    }

    #[test]
    fn laplace_path_matches_rho_table() {
        let s = GaussianSampler {
            sigma: 3.0,
            tail_cut: 36,
            method: laplace_method(3.0),
        };
        let p = chi_square_against_support(&s, 200_000, 6);
        assert!(p > 0.001, "p-value {p}");
    }

    #[test]
    fn wide_widths_use_laplace_and_stay_in_support() {
        let gp = GaussianParams::new(5000.0, 2000).unwrap();
        let sampler = GaussianSampler::cached(gp.sigma, gp.tail_cut);
        assert!(matches!(sampler.method, Method::Laplace { .. }));
        let mut rng = Rng::from_u64(8);
        let x = gauss_sample(&gp, &mut rng).unwrap();
        let var = x.0.iter().map(|&v| (v as f64).powi(2)).sum::<f64>() / x.len() as f64;
        let expected = 5000.0f64.powi(2) / (2.0 * core::f64::consts::PI);
        assert!((var / expected - 1.0).abs() < 0.15, "{var} vs {expected}");
    }
}
