//! The three protocol relations as linear statements.
//!
//! Each builder takes a caller-chosen `label` (participant ids, epoch) that is
//! folded into the statement's domain tag, so a proof made for one context
//! never verifies in another.

use alloc::vec::Vec;

use super::{LinearStatement, SigmaFs};
use crate::codec::Encoder;
use crate::error::{Error, Result};
use crate::math::modular::check_dim;
use crate::math::{ZVector, ZqMatrix, ZqVector};
use crate::params::SystemParams;
use crate::pke::{Ciphertext, DecryptionWitness, EncRandomness, PkeKeyPair};
use crate::shamir::ParityMatrix;

fn tag(relation: &str, label: &[u8], extra: &[u64]) -> Vec<u8> {
    let mut e = Encoder::new();
    e.str("lbcn/relation/v1");
    e.str(relation);
    e.bytes(label);
    for &x in extra {
        e.u64(x);
    }
    e.into_bytes()
}

fn statement(m: ZqMatrix, target: ZqVector, bound: f64, sp: &SystemParams, domain_tag: Vec<u8>) -> Result<LinearStatement> {
    let slack = SigmaFs::slack_for(sp.rep, m.cols());
    LinearStatement::new(m, target, bound, slack, domain_tag)
}

/// Honest key witness norm bound `sqrt(v + u) * alpha q * sqrt(2)`.
pub fn key_bound(sp: &SystemParams) -> f64 {
    libm::sqrt((sp.v + sp.u) as f64) * sp.alpha_q() * core::f64::consts::SQRT_2
}

/// `[A^T | I_u] (s; e) = b`.
pub fn build_key_statement(a: &ZqMatrix, pk_b: &ZqVector, sp: &SystemParams, label: &[u8]) -> Result<LinearStatement> {
    check_dim(sp.v, a.rows())?;
    check_dim(sp.u, a.cols())?;
    check_dim(sp.u, pk_b.len())?;
    let (u, v) = (sp.u, sp.v);
    let mut m = ZqMatrix::zeros(u, v + u, sp.q);
    for j in 0..u {
        for i in 0..v {
            m.set(j, i, a.get(i, j));
        }
        m.set(j, v + j, 1);
    }
    statement(m, pk_b.clone(), key_bound(sp), sp, tag("key", label, &[]))
}

pub fn key_witness(kp: &PkeKeyPair) -> ZVector {
    ZVector::concat(&[&kp.sk_s, &kp.noise_e])
}

/// Honest sharing witness bound: per share, randomness norm
/// `2 sqrt(u) r_enc`, noise `ceil(12 beta q)`, centered message `(p-1)/2`.
pub fn share_bound(sp: &SystemParams, n: usize) -> f64 {
    let r = sp.enc_rand_bound();
    let e = sp.enc_noise_cut() as f64;
    let m = ((sp.p.value() - 1) / 2) as f64;
    libm::sqrt(n as f64 * (r * r + e * e + m * m))
}

/// Witness `(r_1..r_n; e_1..e_n; m_1..m_n)` with rows
/// `c1_i = A r_i`, `c2_i = <b_i, r_i> + e_i + p m_i`, and the parity rows
/// `sum_i m_i p H[i][k] = 0 (mod q)`, which lift `m^T H = 0 (mod p)`.
pub fn build_share_statement(
    a: &ZqMatrix,
    pks: &[ZqVector],
    cts: &[Ciphertext],
    h: Option<&ParityMatrix>,
    t: usize,
    sp: &SystemParams,
    label: &[u8],
) -> Result<LinearStatement> {
    let n = pks.len();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    check_dim(n, cts.len())?;
    check_dim(sp.v, a.rows())?;
    check_dim(sp.u, a.cols())?;
    let cols = n.checked_sub(t + 1).ok_or(Error::ThresholdTooLarge { t, n })?;
    match h {
        Some(h) => {
            check_dim(n, h.n)?;
            check_dim(cols, h.h.cols())?;
        }
        None => check_dim(0, cols)?,
    }
    let (u, v, q, p) = (sp.u, sp.v, sp.q, sp.p.value());
    let rows = n * (v + 1) + cols;
    let width = n * (u + 2);
    let (e_off, m_off) = (n * u, n * u + n);
    let mut m = ZqMatrix::zeros(rows, width, q);
    let mut target = ZqVector::zeros(rows, q);
    for (i, (pk, ct)) in pks.iter().zip(cts).enumerate() {
        check_dim(u, pk.len())?;
        check_dim(v, ct.c1.len())?;
        for r in 0..v {
            for c in 0..u {
                m.set(i * v + r, i * u + c, a.get(r, c));
            }
            target.set(i * v + r, ct.c1.entries()[r]);
        }
        let row = n * v + i;
        for c in 0..u {
            m.set(row, i * u + c, pk.entries()[c]);
        }
        m.set(row, e_off + i, 1);
        m.set(row, m_off + i, p);
        target.set(row, ct.c2);
    }
    if let Some(h) = h {
        for k in 0..cols {
            for i in 0..n {
                m.set(n * (v + 1) + k, m_off + i, q.mul(p, h.h.get(i, k)));
            }
        }
    }
    statement(m, target, share_bound(sp, n), sp, tag("share", label, &[n as u64, t as u64]))
}

/// Stacks the sharing witness; messages are centered so the norm stays near
/// `(p-1)/2` per share.
pub fn share_witness(rands: &[EncRandomness], shares: &[u64], sp: &SystemParams) -> ZVector {
    let mut w: Vec<i64> = Vec::with_capacity(rands.len() * (sp.u + 2));
    for r in rands {
        w.extend_from_slice(r.r.as_slice());
    }
    w.extend(rands.iter().map(|r| r.e));
    w.extend(shares.iter().map(|&s| crate::math::centered_rep(s as i64, sp.p)));
    ZVector(w)
}

/// Honest decryption witness bound `sqrt((v + u) (alpha q)^2 + ((p-1)/2)^2)`.
pub fn dec_bound(sp: &SystemParams) -> f64 {
    let aq = sp.alpha_q();
    let f = ((sp.p.value() - 1) / 2) as f64;
    libm::sqrt((sp.v + sp.u) as f64 * aq * aq + f * f)
}

/// Rows `[A^T | I_u | 0] (s; e; f) = b` and
/// `[c1^T | 0 | 1] (s; e; f) = c2 - p * share`.
pub fn build_dec_statement(
    a: &ZqMatrix,
    pk_b: &ZqVector,
    ct: &Ciphertext,
    share: u64,
    sp: &SystemParams,
    label: &[u8],
) -> Result<LinearStatement> {
    if share >= sp.p.value() {
        return Err(Error::ShareOutOfRange(share));
    }
    check_dim(sp.v, a.rows())?;
    check_dim(sp.u, a.cols())?;
    check_dim(sp.u, pk_b.len())?;
    check_dim(sp.v, ct.c1.len())?;
    let (u, v, q) = (sp.u, sp.v, sp.q);
    let mut m = ZqMatrix::zeros(u + 1, v + u + 1, q);
    let mut target = ZqVector::zeros(u + 1, q);
    for j in 0..u {
        for i in 0..v {
            m.set(j, i, a.get(i, j));
        }
        m.set(j, v + j, 1);
        target.set(j, pk_b.entries()[j]);
    }
    for i in 0..v {
        m.set(u, i, ct.c1.entries()[i]);
    }
    m.set(u, v + u, 1);
    target.set(u, q.sub(ct.c2 % q.value(), q.mul(sp.p.value(), share)));
    statement(m, target, dec_bound(sp), sp, tag("dec", label, &[]))
}

pub fn dec_witness(kp: &PkeKeyPair, dw: &DecryptionWitness) -> ZVector {
    let mut w = key_witness(kp);
    w.0.push(dw.f);
    w
}
