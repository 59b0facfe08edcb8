//! Publicly verifiable secret sharing: Shamir shares encrypted under LWE keys,
//! with proofs of well-formed keys, sharings and decryptions.
//!
//! Every prove/verify call takes a `label` naming its context (participant
//! ids, epoch). Labels are part of the proved statement, so a proof is only
//! valid in the context it was produced for.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::codec::{CodecContext, Decode, DecodeResult, Decoder, Encode, Encoder};
use crate::error::{Error, Result};
use crate::math::{Rng, ZqMatrix, ZqVector};
use crate::params::{validate_params, NoiseBudgetReport, SystemParams};
use crate::pke::{pke_decrypt, pke_encrypt, pke_keygen, pke_setup, Ciphertext, PkeKeyPair};
use crate::proof::relations::{dec_witness, key_witness, share_witness};
use crate::proof::{
    build_dec_statement, build_key_statement, build_share_statement, proof_setup, Proof, ProofBackend, ProofCrs,
    RelationId, SigmaFs,
};
use crate::shamir::{parity_matrix, sss_combine, sss_share, ShareVector};

pub mod games;

/// `A`, one CRS per relation, and the parameters they were built for.
#[derive(Clone, Debug, PartialEq)]
pub struct PvssPublicParams {
    pub params: SystemParams,
    pub setup_seed: [u8; 32],
    pub a_mat: ZqMatrix,
    pub crs0: ProofCrs,
    pub crs1: ProofCrs,
    pub crs2: ProofCrs,
    pub backend: SigmaFs,
    pub noise_report: NoiseBudgetReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KeyAnnouncement {
    pub pk_b: ZqVector,
    pub proof0: Proof,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SharingTranscript {
    pub dealer: u64,
    pub ciphertexts: Vec<Ciphertext>,
    pub proof1: Proof,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecryptionShare {
    pub holder: u64,
    pub share: u64,
    pub proof2: Proof,
}

/// Refuses parameter sets whose decryption noise can reach `p/2`.
pub fn pvss_setup(params: &SystemParams, seed: &[u8; 32]) -> Result<PvssPublicParams> {
    params.check()?;
    let noise_report = validate_params(params);
    if !noise_report.pass {
        return Err(Error::InvalidParams(alloc::format!(
            "decryption noise bound {:.1} is not below p/2 = {:.1}",
            noise_report.noise_bound,
            noise_report.budget
        )));
    }
    let mut rng = Rng::derive(seed, 0, 0, "pke-setup");
    let a_mat = pke_setup(params, &mut rng)?;
    Ok(PvssPublicParams {
        params: params.clone(),
        setup_seed: *seed,
        a_mat,
        crs0: proof_setup(RelationId::Key, seed),
        crs1: proof_setup(RelationId::Share, seed),
        crs2: proof_setup(RelationId::Dec, seed),
        backend: SigmaFs::new(params.rep),
        noise_report,
    })
}

pub fn pvss_keygen(pp: &PvssPublicParams, label: &[u8], rng: &mut Rng) -> Result<(KeyAnnouncement, PkeKeyPair)> {
    let kp = pke_keygen(&pp.a_mat, &pp.params, rng)?;
    let stmt = build_key_statement(&pp.a_mat, &kp.pk_b, &pp.params, label)?;
    let proof0 = pp.backend.prove(&pp.crs0, &stmt, &key_witness(&kp), rng)?;
    Ok((
        KeyAnnouncement {
            pk_b: kp.pk_b.clone(),
            proof0,
        },
        kp,
    ))
}

pub fn pvss_keyver(pp: &PvssPublicParams, label: &[u8], ka: &KeyAnnouncement) -> bool {
    match build_key_statement(&pp.a_mat, &ka.pk_b, &pp.params, label) {
        Ok(stmt) => pp.backend.verify(&pp.crs0, &stmt, &ka.proof0),
        Err(_) => false,
    }
}

/// Shares `s` among the holders of `pks` (Shamir points `1..=pks.len()`).
/// Returns the public transcript and the plaintext shares.
pub fn pvss_share(
    pp: &PvssPublicParams,
    dealer: u64,
    pks: &[ZqVector],
    s: u64,
    t: usize,
    label: &[u8],
    rng: &mut Rng,
) -> Result<(SharingTranscript, ShareVector)> {
    let sp = &pp.params;
    if s >= sp.p.value() {
        return Err(Error::SecretOutOfRange(s));
    }
    let n = pks.len();
    let (shares, _) = sss_share(s, n, t, sp.p, rng)?;
    let tr = share_values(pp, dealer, pks, &shares.values, t, label, rng)?;
    Ok((tr, shares))
}

/// Encrypts and proves a given share vector. Used by [`pvss_share`], and by
/// test adversaries that need to prove non-standard sharings.
pub fn share_values(
    pp: &PvssPublicParams,
    dealer: u64,
    pks: &[ZqVector],
    shares: &[u64],
    t: usize,
    label: &[u8],
    rng: &mut Rng,
) -> Result<SharingTranscript> {
    let sp = &pp.params;
    let n = pks.len();
    let mut ciphertexts = Vec::with_capacity(n);
    let mut rands = Vec::with_capacity(n);
    for (pk, &m) in pks.iter().zip(shares) {
        let (ct, r) = pke_encrypt(&pp.a_mat, pk, m, sp, rng)?;
        ciphertexts.push(ct);
        rands.push(r);
    }
    let stmt = share_statement(pp, pks, &ciphertexts, t, label)?;
    let proof1 = pp.backend.prove(&pp.crs1, &stmt, &share_witness(&rands, shares, sp), rng)?;
    Ok(SharingTranscript {
        dealer,
        ciphertexts,
        proof1,
    })
}

fn share_statement(
    pp: &PvssPublicParams,
    pks: &[ZqVector],
    cts: &[Ciphertext],
    t: usize,
    label: &[u8],
) -> Result<crate::proof::LinearStatement> {
    let n = pks.len();
    let h = if t + 1 < n {
        Some(parity_matrix(n, t, pp.params.p)?)
    } else {
        None
    };
    build_share_statement(&pp.a_mat, pks, cts, h.as_ref(), t, &pp.params, label)
}

pub fn pvss_sharever(pp: &PvssPublicParams, pks: &[ZqVector], t: usize, label: &[u8], tr: &SharingTranscript) -> bool {
    if tr.ciphertexts.len() != pks.len() {
        return false;
    }
    match share_statement(pp, pks, &tr.ciphertexts, t, label) {
        Ok(stmt) => pp.backend.verify(&pp.crs1, &stmt, &tr.proof1),
        Err(_) => false,
    }
}

pub fn pvss_dec(
    pp: &PvssPublicParams,
    holder: u64,
    kp: &PkeKeyPair,
    ct: &Ciphertext,
    label: &[u8],
    rng: &mut Rng,
) -> Result<DecryptionShare> {
    let dw = pke_decrypt(&kp.sk_s, ct, &pp.params)?;
    let stmt = build_dec_statement(&pp.a_mat, &kp.pk_b, ct, dw.message, &pp.params, label)?;
    let proof2 = pp.backend.prove(&pp.crs2, &stmt, &dec_witness(kp, &dw), rng)?;
    Ok(DecryptionShare {
        holder,
        share: dw.message,
        proof2,
    })
}

pub fn pvss_decver(pp: &PvssPublicParams, pk_b: &ZqVector, ct: &Ciphertext, label: &[u8], ds: &DecryptionShare) -> bool {
    match build_dec_statement(&pp.a_mat, pk_b, ct, ds.share, &pp.params, label) {
        Ok(stmt) => pp.backend.verify(&pp.crs2, &stmt, &ds.proof2),
        Err(_) => false,
    }
}

/// `None` (no output) when at most `t` shares are supplied; otherwise
/// interpolates from the `t + 1` lowest indices.
pub fn pvss_combine(pp: &PvssPublicParams, t: usize, shares: &BTreeMap<u64, u64>) -> Option<u64> {
    if shares.len() <= t {
        return None;
    }
    let subset: BTreeMap<u64, u64> = shares.iter().take(t + 1).map(|(&i, &s)| (i, s)).collect();
    sss_combine(&subset, pp.params.p).ok()
}

/// Decodes a received message and runs `check` on it. Bytes that do not
/// decode are a rejection, not an error.
pub fn verify_encoded<T: Decode>(bytes: &[u8], cx: &CodecContext, check: impl FnOnce(&T) -> bool) -> bool {
    T::from_bytes(bytes, cx).is_ok_and(|msg| check(&msg))
}

/// Binding labels for the three relations.
pub mod labels {
    use super::*;

    pub fn key(dealer: u64, holder: u64) -> Vec<u8> {
        let mut e = Encoder::new();
        e.str("key");
        e.u64(dealer);
        e.u64(holder);
        e.into_bytes()
    }

    pub fn share(epoch: u64, dealer: u64) -> Vec<u8> {
        let mut e = Encoder::new();
        e.str("share");
        e.u64(epoch);
        e.u64(dealer);
        e.into_bytes()
    }

    pub fn dec(epoch: u64, dealer: u64, holder: u64) -> Vec<u8> {
        let mut e = Encoder::new();
        e.str("dec");
        e.u64(epoch);
        e.u64(dealer);
        e.u64(holder);
        e.into_bytes()
    }
}

impl Encode for KeyAnnouncement {
    fn encode(&self, enc: &mut Encoder) {
        enc.put(&self.pk_b);
        enc.put(&self.proof0);
    }
}

impl Decode for KeyAnnouncement {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        Ok(Self {
            pk_b: dec.get(cx)?,
            proof0: dec.get(cx)?,
        })
    }
}

impl Encode for SharingTranscript {
    fn encode(&self, enc: &mut Encoder) {
        enc.u64(self.dealer);
        enc.seq(&self.ciphertexts);
        enc.put(&self.proof1);
    }
}

impl Decode for SharingTranscript {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        Ok(Self {
            dealer: dec.u64()?,
            ciphertexts: dec.seq(cx)?,
            proof1: dec.get(cx)?,
        })
    }
}

impl Encode for DecryptionShare {
    fn encode(&self, enc: &mut Encoder) {
        enc.u64(self.holder);
        enc.u64(self.share);
        enc.put(&self.proof2);
    }
}

impl Decode for DecryptionShare {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        Ok(Self {
            holder: dec.u64()?,
            share: dec.u64()?,
            proof2: dec.get(cx)?,
        })
    }
}
