//! Public system parameters and the decryption noise budget.

use alloc::format;

use crate::codec::{CodecContext, Decode, DecodeError, DecodeResult, Decoder, Encode, Encoder};
use crate::error::{Error, Result};
use crate::math::{is_prime, Modulus};

/// Relative tolerance when checking a supplied `beta` against its formula.
pub const BETA_TOLERANCE: f64 = 1.0 / (1u64 << 20) as f64;

/// Multiplier on `sqrt(u) * r_enc` bounding the encryption randomness norm.
/// Encryption resamples `r` until it meets this bound, so the budget below is
/// a hard guarantee rather than a tail estimate.
pub const ENC_TAIL_FACTOR: f64 = 2.0;

/// Largest supported share field.
pub const MAX_P: u64 = 1 << 31;

/// All public numeric parameters of one deployment.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub p: Modulus,
    pub q: Modulus,
    /// LWE sample count: columns of `A`, length of public keys.
    pub u: usize,
    /// LWE secret dimension: rows of `A`, length of secret keys.
    pub v: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Width of the encryption randomness `r`.
    pub r_enc: f64,
    pub n: usize,
    pub t: usize,
    pub lambda_sec: u32,
    /// Proof repetitions; each halves the soundness error.
    pub rep: usize,
}

/// `sqrt(u) * ln(u) * (alpha + 1/(2q))`.
pub fn beta_formula(u: usize, alpha: f64, q: u64) -> f64 {
    libm::sqrt(u as f64) * libm::log(u as f64) * (alpha + 1.0 / (2.0 * q as f64))
}

impl SystemParams {
    /// Builds a parameter set from `alpha * q`, deriving `q = p^2` and `beta`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p: u64,
        u: usize,
        v: usize,
        alpha_q: f64,
        r_enc: f64,
        n: usize,
        t: usize,
        lambda_sec: u32,
        rep: usize,
    ) -> Result<Self> {
        if p >= MAX_P {
            return Err(Error::InvalidParams(format!("p = {p} exceeds 2^31")));
        }
        let pm = Modulus::new(p)?;
        let q = Modulus::new(p * p)?;
        let alpha = alpha_q / q.value() as f64;
        let sp = Self {
            p: pm,
            q,
            u,
            v,
            alpha,
            beta: beta_formula(u, alpha, q.value()),
            r_enc,
            n,
            t,
            lambda_sec,
            rep,
        };
        sp.check()?;
        Ok(sp)
    }

    /// Same numeric set with a different participant count and threshold.
    pub fn with_committee(&self, n: usize, t: usize) -> Result<Self> {
        let sp = Self { n, t, ..self.clone() };
        sp.check()?;
        Ok(sp)
    }

    /// Structural invariants: prime `p`, `q = p^2`, `t < n/2`, positive widths.
    pub fn check(&self) -> Result<()> {
        let p = self.p.value();
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if p >= MAX_P {
            return Err(Error::InvalidParams(format!("p = {p} exceeds 2^31")));
        }
        if self.q.value() != p * p {
            return Err(Error::InvalidParams(format!(
                "q = {} must equal p^2 = {}",
                self.q.value(),
                p * p
            )));
        }
        if self.u < 2 || self.v < 1 {
            return Err(Error::InvalidParams("need u >= 2 and v >= 1".into()));
        }
        for (name, x) in [("alpha", self.alpha), ("beta", self.beta), ("r_enc", self.r_enc)] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive")));
            }
        }
        if self.n == 0 || 2 * self.t >= self.n {
            return Err(Error::InvalidParams(format!(
                "need t < n/2, got n = {}, t = {}",
                self.n, self.t
            )));
        }
        if self.n as u64 >= p {
            return Err(Error::FieldTooSmall { n: self.n, p });
        }
        if self.rep == 0 {
            return Err(Error::InvalidParams("rep must be positive".into()));
        }
        if !self.beta_matches_formula() {
            return Err(Error::InvalidParams("beta does not match its formula".into()));
        }
        Ok(())
    }

    pub fn beta_matches_formula(&self) -> bool {
        let expect = beta_formula(self.u, self.alpha, self.q.value());
        libm::fabs(self.beta - expect) <= BETA_TOLERANCE * expect
    }

    #[inline]
    pub fn alpha_q(&self) -> f64 {
        self.alpha * self.q.value() as f64
    }

    #[inline]
    pub fn beta_q(&self) -> f64 {
        self.beta * self.q.value() as f64
    }

    /// Norm bound enforced on key secrets: `sqrt(v) * alpha q`.
    pub fn sk_bound(&self) -> f64 {
        libm::sqrt(self.v as f64) * self.alpha_q()
    }

    /// Norm bound enforced on key noise: `sqrt(u) * alpha q`.
    pub fn key_noise_bound(&self) -> f64 {
        libm::sqrt(self.u as f64) * self.alpha_q()
    }

    /// Norm bound enforced on encryption randomness.
    pub fn enc_rand_bound(&self) -> f64 {
        ENC_TAIL_FACTOR * libm::sqrt(self.u as f64) * self.r_enc
    }

    /// Largest absolute value of the scalar encryption noise (its tail cut).
    pub fn enc_noise_cut(&self) -> u64 {
        libm::ceil(crate::math::gaussian::TAIL_FACTOR * self.beta_q()) as u64
    }

    pub fn codec_context(&self) -> CodecContext {
        CodecContext {
            q: self.q,
            p: self.p,
        }
    }
}

impl Encode for SystemParams {
    fn encode(&self, enc: &mut Encoder) {
        enc.u64(self.p.value());
        enc.u64(self.q.value());
        enc.u64(self.u as u64);
        enc.u64(self.v as u64);
        enc.f64(self.alpha);
        enc.f64(self.beta);
        enc.f64(self.r_enc);
        enc.u64(self.n as u64);
        enc.u64(self.t as u64);
        enc.u64(self.lambda_sec as u64);
        enc.u64(self.rep as u64);
    }
}

impl SystemParams {
    /// Decodes parameters without any prior context.
    pub fn decode_standalone(dec: &mut Decoder<'_>) -> DecodeResult<Self> {
        let p = dec.u64()?;
        let q = dec.u64()?;
        let small = |x: u64| -> DecodeResult<usize> {
            if x > u32::MAX as u64 {
                Err(DecodeError::OutOfRange("parameter"))
            } else {
                Ok(x as usize)
            }
        };
        let u = small(dec.u64()?)?;
        let v = small(dec.u64()?)?;
        let alpha = dec.f64()?;
        let beta = dec.f64()?;
        let r_enc = dec.f64()?;
        let n = small(dec.u64()?)?;
        let t = small(dec.u64()?)?;
        let lambda_sec = small(dec.u64()?)? as u32;
        let rep = small(dec.u64()?)?;
        let sp = Self {
            p: Modulus::new(p).map_err(|_| DecodeError::OutOfRange("p"))?,
            q: Modulus::new(q).map_err(|_| DecodeError::OutOfRange("q"))?,
            u,
            v,
            alpha,
            beta,
            r_enc,
            n,
            t,
            lambda_sec,
            rep,
        };
        sp.check().map_err(|_| DecodeError::Malformed("invalid parameters"))?;
        Ok(sp)
    }
}

impl Decode for SystemParams {
    fn decode(dec: &mut Decoder<'_>, _: &CodecContext) -> DecodeResult<Self> {
        Self::decode_standalone(dec)
    }
}

/// Worst-case decryption noise against the `p/2` budget.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseBudgetReport {
    /// `sqrt(u) * alpha q`: largest key-noise norm keygen accepts.
    pub key_noise_norm: f64,
    /// `2 sqrt(u) r_enc`: largest randomness norm encryption accepts.
    pub enc_rand_norm: f64,
    /// `ceil(12 beta q)`: tail cut of the scalar encryption noise.
    pub enc_noise_cut: u64,
    /// `key_noise_norm * enc_rand_norm + enc_noise_cut`.
    pub noise_bound: f64,
    /// `p / 2`.
    pub budget: f64,
    /// `budget / noise_bound`.
    pub margin: f64,
    pub beta_formula_ok: bool,
    pub pass: bool,
}

/// Evaluates the decryption noise bound `|e_key . r + e_enc|` (by
/// Cauchy-Schwarz and the enforced norm bounds) against `p/2`.
pub fn validate_params(sp: &SystemParams) -> NoiseBudgetReport {
    let key_noise_norm = sp.key_noise_bound();
    let enc_rand_norm = sp.enc_rand_bound();
    let enc_noise_cut = sp.enc_noise_cut();
    let noise_bound = key_noise_norm * enc_rand_norm + enc_noise_cut as f64;
    let budget = sp.p.value() as f64 / 2.0;
    let beta_formula_ok = sp.beta_matches_formula();
    NoiseBudgetReport {
        key_noise_norm,
        enc_rand_norm,
        enc_noise_cut,
        noise_bound,
        budget,
        margin: budget / noise_bound,
        beta_formula_ok,
        pass: beta_formula_ok && noise_bound < budget,
    }
}
