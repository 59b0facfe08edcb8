//! Proofs of short preimages for linear relations over `Z_q`.
//!
//! Every relation the protocol proves (well-formed keys, well-formed sharings,
//! correct decryptions) compiles to a [`LinearStatement`]: knowledge of a
//! short integer `w` with `M w = target (mod q)`. Backends implement
//! [`ProofBackend`]; the reference backend is [`SigmaFs`].

use alloc::vec::Vec;

use sha2::{Digest, Sha256};

use crate::codec::{CodecContext, Decode, DecodeError, DecodeResult, Decoder, Encode, Encoder};
use crate::error::{Error, Result};
use crate::math::{mat_vec_mul, Rng, ZVector, ZqMatrix, ZqVector};

pub mod relations;
pub mod sigma;

pub use relations::{build_dec_statement, build_key_statement, build_share_statement};
pub use sigma::SigmaFs;

/// Which of the three protocol relations a CRS serves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationId {
    Key = 0,
    Share = 1,
    Dec = 2,
}

impl RelationId {
    pub const ALL: [RelationId; 3] = [RelationId::Key, RelationId::Share, RelationId::Dec];

    pub fn name(self) -> &'static str {
        match self {
            RelationId::Key => "key",
            RelationId::Share => "share",
            RelationId::Dec => "dec",
        }
    }
}

/// `M w = target (mod q)` with `||w|| <= bound_zk` for honest provers;
/// verification only guarantees the relaxed bound `bound_zk * slack`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearStatement {
    pub m_mat: ZqMatrix,
    pub target: ZqVector,
    pub bound_zk: f64,
    pub slack: f64,
    pub domain_tag: Vec<u8>,
}

impl LinearStatement {
    pub fn new(m_mat: ZqMatrix, target: ZqVector, bound_zk: f64, slack: f64, domain_tag: Vec<u8>) -> Result<Self> {
        crate::math::modular::check_dim(m_mat.rows(), target.len())?;
        if m_mat.modulus() != target.modulus() {
            return Err(Error::InvalidParams("statement moduli differ".into()));
        }
        if !(bound_zk.is_finite() && bound_zk > 0.0) {
            return Err(Error::InvalidParams("bound_zk must be positive".into()));
        }
        if !(slack.is_finite() && slack >= 1.0) {
            return Err(Error::InvalidParams("slack must be at least 1".into()));
        }
        Ok(Self {
            m_mat,
            target,
            bound_zk,
            slack,
            domain_tag,
        })
    }

    /// Witness length.
    pub fn witness_dim(&self) -> usize {
        self.m_mat.cols()
    }

    /// The relaxed bound enforced on every accepted response.
    pub fn verify_bound(&self) -> f64 {
        self.bound_zk * self.slack
    }

    /// Relation check: `M w = target` and `||w|| <= bound_zk`.
    pub fn check_witness(&self, w: &ZVector) -> Result<()> {
        let mw = mat_vec_mul(&self.m_mat, w)?;
        if mw != self.target {
            return Err(Error::WitnessInvalid("linear relation does not hold"));
        }
        if (w.sq_norm() as f64) > self.bound_zk * self.bound_zk {
            return Err(Error::WitnessInvalid("witness norm exceeds bound"));
        }
        Ok(())
    }

    /// SHA-256 of the canonical encoding.
    pub fn digest(&self) -> [u8; 32] {
        Sha256::digest(self.to_bytes()).into()
    }
}

impl Encode for LinearStatement {
    fn encode(&self, enc: &mut Encoder) {
        enc.bytes(&self.domain_tag);
        enc.put(&self.m_mat);
        enc.put(&self.target);
        enc.f64(self.bound_zk);
        enc.f64(self.slack);
    }
}

/// Common reference string, one per relation, derived from the setup seed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofCrs {
    pub relation: RelationId,
    pub crs_bytes: [u8; 32],
}

/// Deterministic per-relation CRS.
pub fn proof_setup(relation: RelationId, seed: &[u8; 32]) -> ProofCrs {
    let mut h = Sha256::new();
    h.update(b"lbcn/crs/v1");
    h.update(seed);
    h.update([relation as u8]);
    ProofCrs {
        relation,
        crs_bytes: h.finalize().into(),
    }
}

/// A `rep`-fold transcript: commitments `a_k`, challenge bits `c_k`,
/// responses `z_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Proof {
    pub rep: usize,
    pub commitments: Vec<ZqVector>,
    /// Challenge bits packed little-endian within each byte; unused high bits
    /// of the last byte are zero.
    pub challenges: Vec<u8>,
    pub responses: Vec<ZVector>,
}

impl Proof {
    pub fn challenge(&self, k: usize) -> bool {
        challenge_bit(&self.challenges, k)
    }
}

#[inline]
pub(crate) fn challenge_bit(bits: &[u8], k: usize) -> bool {
    bits[k / 8] >> (k % 8) & 1 == 1
}

impl Encode for Proof {
    fn encode(&self, enc: &mut Encoder) {
        enc.u64(self.rep as u64);
        enc.seq(&self.commitments);
        enc.bytes(&self.challenges);
        enc.seq(&self.responses);
    }
}

impl Decode for Proof {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        let rep = dec.u64()?;
        let commitments: Vec<ZqVector> = dec.seq(cx)?;
        let challenges = dec.bytes()?.to_vec();
        let responses: Vec<ZVector> = dec.seq(cx)?;
        if commitments.len() as u64 != rep || responses.len() as u64 != rep {
            return Err(DecodeError::Malformed("proof repetition counts differ"));
        }
        let rep = rep as usize;
        if challenges.len() != rep.div_ceil(8) {
            return Err(DecodeError::Malformed("challenge length"));
        }
        if rep % 8 != 0 && challenges.last().is_some_and(|&b| b >> (rep % 8) != 0) {
            return Err(DecodeError::Malformed("challenge padding"));
        }
        Ok(Self {
            rep,
            commitments,
            challenges,
            responses,
        })
    }
}

/// A non-interactive proof system for [`LinearStatement`]s.
pub trait ProofBackend {
    /// Identifier recorded in parameter files and transcripts.
    fn id(&self) -> &'static str;

    fn prove(&self, crs: &ProofCrs, stmt: &LinearStatement, witness: &ZVector, rng: &mut Rng) -> Result<Proof>;

    /// Total: malformed proofs are rejected, never an error.
    fn verify(&self, crs: &ProofCrs, stmt: &LinearStatement, proof: &Proof) -> bool;
}
