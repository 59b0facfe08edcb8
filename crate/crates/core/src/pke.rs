//! LWE public-key encryption over `Z_q` with `q = p^2` and messages in `Z_p`.
//!
//! A message rides in the high digit: `c2 = <b, r> + e + p m`. Decryption
//! recovers `d = f + p m` with small `f`, and returns `f` because the
//! decryption proof needs it as a witness.

use crate::codec::{CodecContext, Decode, DecodeResult, Decoder, Encode, Encoder};
use crate::error::{Error, Result};
use crate::math::gaussian::{gauss_sample, GaussianParams};
use crate::math::modular::check_dim;
use crate::math::{centered_rep, mat_vec_mul, norm_l2, Rng, ZVector, ZqMatrix, ZqVector};
use crate::params::SystemParams;

pub const KEYGEN_RETRY_CAP: usize = 100;
pub const ENC_RETRY_CAP: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PkeKeyPair {
    pub pk_b: ZqVector,
    pub sk_s: ZVector,
    pub noise_e: ZVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ciphertext {
    pub c1: ZqVector,
    pub c2: u64,
}

/// Encryption randomness, kept by the sender as a proof witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncRandomness {
    pub r: ZVector,
    pub e: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecryptionWitness {
    pub message: u64,
    pub f: i64,
}

/// Uniform `v x u` matrix over `Z_q`.
pub fn pke_setup(sp: &SystemParams, rng: &mut Rng) -> Result<ZqMatrix> {
    sp.check()?;
    let q = sp.q.value();
    let data = (0..sp.v * sp.u).map(|_| rng.uniform_below(q)).collect();
    ZqMatrix::from_reduced(sp.v, sp.u, data, sp.q)
}

fn check_matrix(a: &ZqMatrix, sp: &SystemParams) -> Result<()> {
    check_dim(sp.v, a.rows())?;
    check_dim(sp.u, a.cols())
}

/// `s^T A + e^T`, as a length-`u` vector.
pub fn public_key_of(a: &ZqMatrix, s: &ZVector, e: &ZVector) -> Result<ZqVector> {
    mat_vec_mul(&a.transpose(), s)?.add(&ZqVector::from_signed(e.as_slice(), a.modulus()))
}

/// Gaussian secret and noise of width `alpha q`, resampled until both meet
/// their norm bounds.
pub fn pke_keygen(a: &ZqMatrix, sp: &SystemParams, rng: &mut Rng) -> Result<PkeKeyPair> {
    check_matrix(a, sp)?;
    let gs = GaussianParams::new(sp.alpha_q(), sp.v)?;
    let ge = GaussianParams::new(sp.alpha_q(), sp.u)?;
    for _ in 0..KEYGEN_RETRY_CAP {
        let s = gauss_sample(&gs, rng)?;
        let e = gauss_sample(&ge, rng)?;
        if norm_l2(&s) < sp.sk_bound() && norm_l2(&e) < sp.key_noise_bound() {
            let pk_b = public_key_of(a, &s, &e)?;
            return Ok(PkeKeyPair {
                pk_b,
                sk_s: s,
                noise_e: e,
            });
        }
    }
    Err(Error::RetryExhausted("key generation norm bounds"))
}

/// Encrypts `m` and returns the randomness used.
pub fn pke_encrypt(
    a: &ZqMatrix,
    pk_b: &ZqVector,
    m: u64,
    sp: &SystemParams,
    rng: &mut Rng,
) -> Result<(Ciphertext, EncRandomness)> {
    if m >= sp.p.value() {
        return Err(Error::MessageOutOfRange(m));
    }
    let gr = GaussianParams::new(sp.r_enc, sp.u)?;
    let ge = GaussianParams::new(sp.beta_q(), 1)?;
    for _ in 0..ENC_RETRY_CAP {
        let r = gauss_sample(&gr, rng)?;
        if norm_l2(&r) > sp.enc_rand_bound() {
            continue;
        }
        let e = gauss_sample(&ge, rng)?.0[0];
        let rand = EncRandomness { r, e };
        let ct = pke_encrypt_with(a, pk_b, m, &rand, sp)?;
        return Ok((ct, rand));
    }
    Err(Error::RetryExhausted("encryption randomness norm bound"))
}

/// Deterministic encryption under explicit randomness.
pub fn pke_encrypt_with(
    a: &ZqMatrix,
    pk_b: &ZqVector,
    m: u64,
    rand: &EncRandomness,
    sp: &SystemParams,
) -> Result<Ciphertext> {
    check_matrix(a, sp)?;
    check_dim(sp.u, pk_b.len())?;
    if m >= sp.p.value() {
        return Err(Error::MessageOutOfRange(m));
    }
    let q = sp.q;
    let c1 = mat_vec_mul(a, &rand.r)?;
    let br = pk_b.dot_signed(&rand.r)?;
    let pm = q.mul(sp.p.value(), m);
    let c2 = q.add(q.add(br, q.reduce_i64(rand.e)), pm);
    Ok(Ciphertext { c1, c2 })
}

/// Splits `d = c2 - <s, c1>` into `f + p m` with `|f| <= (p-1)/2`.
pub fn pke_decrypt(sk_s: &ZVector, ct: &Ciphertext, sp: &SystemParams) -> Result<DecryptionWitness> {
    check_dim(sp.v, sk_s.len())?;
    check_dim(sp.v, ct.c1.len())?;
    let q = sp.q;
    let d = q.sub(ct.c2 % q.value(), ct.c1.dot_signed(sk_s)?);
    Ok(split_noise(d, sp))
}

/// `d -> (m, f)` with `d = f + p m (mod q)`.
pub fn split_noise(d: u64, sp: &SystemParams) -> DecryptionWitness {
    let p = sp.p.value() as i64;
    let f = centered_rep((d % sp.p.value()) as i64, sp.p);
    let message = ((d as i64 - f) / p).rem_euclid(p) as u64;
    DecryptionWitness { message, f }
}

impl Encode for Ciphertext {
    fn encode(&self, enc: &mut Encoder) {
        enc.put(&self.c1);
        enc.residue(self.c2, self.c1.modulus());
    }
}

impl Decode for Ciphertext {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        let c1 = ZqVector::decode(dec, cx)?;
        let c2 = dec.residue(cx.q)?;
        Ok(Self { c1, c2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::fixtures::{small, stat31, toy};
    use alloc::collections::BTreeSet;

    fn p5() -> SystemParams {
        SystemParams::new(5, 2, 2, 0.1, 0.5, 3, 1, 128, 40).unwrap()
    }

    #[test]
    fn setup_validates_and_is_deterministic() {
        let sp = toy(4, 1);
        let a1 = pke_setup(&sp, &mut Rng::from_u64(1)).unwrap();
        let a2 = pke_setup(&sp, &mut Rng::from_u64(1)).unwrap();
        assert_eq!(a1, a2);
        assert_eq!((a1.rows(), a1.cols()), (32, 4));
        assert_eq!(p5().q.value(), 25);
        let mut bad = p5();
        bad.p = crate::math::Modulus::new(6).unwrap();
        bad.q = crate::math::Modulus::new(36).unwrap();
        assert!(pke_setup(&bad, &mut Rng::from_u64(1)).is_err());
    }

    #[test]
    fn zero_noise_encryption() {
        let sp = p5();
        let a = pke_setup(&sp, &mut Rng::from_u64(2)).unwrap();
        let b = ZqVector::from_reduced(alloc::vec![7, 11], sp.q).unwrap();
        let rand = EncRandomness {
            r: ZVector::zeros(2),
            e: 0,
        };
        let ct = pke_encrypt_with(&a, &b, 3, &rand, &sp).unwrap();
        assert_eq!(ct.c1.entries(), &[0, 0]);
        assert_eq!(ct.c2, 15);
        assert_eq!(
            pke_encrypt_with(&a, &b, 5, &rand, &sp),
            Err(Error::MessageOutOfRange(5))
        );
    }

    #[test]
    fn decryption_formula_by_hand() {
        let sp = p5();
        assert_eq!(split_noise(17, &sp), DecryptionWitness { message: 3, f: 2 });
        assert_eq!(split_noise(13, &sp), DecryptionWitness { message: 3, f: -2 });
        for m in 0..5 {
            assert_eq!(split_noise(5 * m, &sp), DecryptionWitness { message: m, f: 0 });
        }
        // wrap-around: d = q - 1 is f = -1 on message 0
        assert_eq!(split_noise(24, &sp), DecryptionWitness { message: 0, f: -1 });
    }

    #[test]
    fn keygen_satisfies_invariants() {
        let sp = toy(4, 1);
        let a = pke_setup(&sp, &mut Rng::from_u64(3)).unwrap();
        let mut rng = Rng::from_u64(4);
        let mut seen = BTreeSet::new();
        for _ in 0..1000 {
            let kp = pke_keygen(&a, &sp, &mut rng).unwrap();
            assert!(norm_l2(&kp.sk_s) < sp.sk_bound());
            assert!(norm_l2(&kp.noise_e) < sp.key_noise_bound());
            // b - s^T A == e^T, recomputed entry by entry
            for j in 0..sp.u {
                let mut acc: i64 = 0;
                for i in 0..sp.v {
                    acc += a.get(i, j) as i64 * kp.sk_s.0[i];
                }
                let lhs = (kp.pk_b.entries()[j] as i64 - acc).rem_euclid(sp.q.value() as i64);
                assert_eq!(lhs, kp.noise_e.0[j].rem_euclid(sp.q.value() as i64));
            }
            assert!(seen.insert(kp.pk_b.entries().to_vec()), "repeated public key");
        }
    }

    #[test]
    fn keygen_first_attempt_rate() {
        // Acceptance oracle: sample norms directly with the same widths and
        // count how often the first draw already meets both bounds.
        let sp = toy(4, 1);
        let mut rng = Rng::from_u64(5);
        let gs = GaussianParams::new(sp.alpha_q(), sp.v).unwrap();
        let ge = GaussianParams::new(sp.alpha_q(), sp.u).unwrap();
        let accepted = (0..1000)
            .filter(|_| {
                let s = gauss_sample(&gs, &mut rng).unwrap();
                let e = gauss_sample(&ge, &mut rng).unwrap();
                norm_l2(&s) < sp.sk_bound() && norm_l2(&e) < sp.key_noise_bound()
            })
            .count();
        assert!(accepted >= 990, "{accepted}");
    }

    fn round_trip_all(sp: &SystemParams, trials: usize, seed: u64) {
        let mut rng = Rng::from_u64(seed);
        let a = pke_setup(sp, &mut rng).unwrap();
        let kp = pke_keygen(&a, sp, &mut rng).unwrap();
        let p = sp.p.value();
        for i in 0..trials {
            let m = if (i as u64) < p { i as u64 } else { rng.uniform_below(p) };
            let (ct, _) = pke_encrypt(&a, &kp.pk_b, m, sp, &mut rng).unwrap();
            let w = pke_decrypt(&kp.sk_s, &ct, sp).unwrap();
            assert_eq!(w.message, m);
            assert!(2 * w.f.unsigned_abs() < p);
            // witness identity: c2 - s^T c1 == f + p m (mod q)
            let q = sp.q.value() as i128;
            let st_c1: i128 = kp.sk_s.0.iter().zip(ct.c1.entries()).map(|(&s, &c)| s as i128 * c as i128).sum();
            let lhs = (ct.c2 as i128 - st_c1).rem_euclid(q);
            let rhs = (w.f as i128 + p as i128 * m as i128).rem_euclid(q);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn round_trip_toy_exhaustive_and_random() {
        round_trip_all(&toy(4, 1), 2000, 6);
    }

    #[test]
    fn round_trip_small() {
        round_trip_all(&small(4, 1), 500, 7);
    }

    #[test]
    fn round_trip_stat31() {
        round_trip_all(&stat31(4, 1), 2000, 8);
    }

    #[test]
    fn ciphertext_encoding_round_trip() {
        let sp = toy(4, 1);
        let mut rng = Rng::from_u64(9);
        let a = pke_setup(&sp, &mut rng).unwrap();
        let kp = pke_keygen(&a, &sp, &mut rng).unwrap();
        let (ct, _) = pke_encrypt(&a, &kp.pk_b, 100, &sp, &mut rng).unwrap();
        let b = ct.to_bytes();
        assert_eq!(b.len(), 8 + 32 * 3 + 3);
        assert_eq!(Ciphertext::from_bytes(&b, &sp.codec_context()).unwrap(), ct);
    }
}
