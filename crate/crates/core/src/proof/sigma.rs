//! Reference backend: a binary-challenge Sigma protocol for short preimages,
//! repeated `rep` times and made non-interactive by hashing the transcript.
//!
//! Per repetition the prover masks with `y <- D_sigma`, commits `a = M y`,
//! and answers `z = y + c w`. Responses are released only after one joint
//! rejection-sampling decision over all repetitions; a rejection restarts the
//! whole proof with fresh masks, so the prover never chooses among challenge
//! sets for the same commitments.

use alloc::vec::Vec;

use sha2::{Digest, Sha256};

use super::{challenge_bit, LinearStatement, Proof, ProofBackend, ProofCrs};
use crate::codec::Encode;
use crate::error::{Error, Result};
use crate::math::gaussian::{GaussianParams, GaussianSampler};
use crate::math::modular::mat_vec_mul_reduced;
use crate::math::{mat_vec_mul, Rng, ZVector, ZqVector};

pub const BACKEND_ID: &str = "sigma-fs";

/// Masking width as a multiple of `sqrt(rep) * bound_zk`.
pub const MASK_FACTOR: f64 = 11.0;

/// Cap on whole-proof restarts.
pub const PROVE_ATTEMPTS: usize = 1000;

const CHALLENGE_DOMAIN: &[u8] = b"lbcn/sigma-fs/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaFs {
    pub rep: usize,
}

impl SigmaFs {
    pub fn new(rep: usize) -> Self {
        Self { rep }
    }

    /// Masking width for a statement.
    pub fn sigma_mask(&self, stmt: &LinearStatement) -> f64 {
        MASK_FACTOR * libm::sqrt(self.rep as f64) * stmt.bound_zk
    }

    /// The slack a statement must carry so that its relaxed bound equals
    /// `sigma_mask * sqrt(2 w)`.
    pub fn slack_for(rep: usize, witness_dim: usize) -> f64 {
        MASK_FACTOR * libm::sqrt(rep as f64) * libm::sqrt(2.0 * witness_dim as f64)
    }

    /// Challenge bits from the transcript: CRS, relation, statement digest and
    /// every commitment in repetition order.
    pub fn derive_challenges(&self, crs: &ProofCrs, stmt: &LinearStatement, commitments: &[ZqVector]) -> Vec<u8> {
        self.challenges_from_digest(crs, &stmt.digest(), commitments)
    }

    fn challenges_from_digest(&self, crs: &ProofCrs, stmt_digest: &[u8; 32], commitments: &[ZqVector]) -> Vec<u8> {
        let mut h = Sha256::new();
        h.update(CHALLENGE_DOMAIN);
        h.update(crs.crs_bytes);
        h.update([crs.relation as u8]);
        h.update(stmt_digest);
        h.update((commitments.len() as u64).to_le_bytes());
        for a in commitments {
            h.update(a.to_bytes());
        }
        let seed: [u8; 32] = h.finalize().into();

        let nbytes = self.rep.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        let mut block = 0u64;
        while out.len() < nbytes {
            let mut hb = Sha256::new();
            hb.update(seed);
            hb.update(block.to_le_bytes());
            let d: [u8; 32] = hb.finalize().into();
            let take = (nbytes - out.len()).min(32);
            out.extend_from_slice(&d[..take]);
            block += 1;
        }
        if self.rep % 8 != 0 {
            let last = out.last_mut().expect("rep is positive");
            *last &= (1u8 << (self.rep % 8)) - 1;
        }
        out
    }

    fn statement_consistent(&self, stmt: &LinearStatement) -> bool {
        let expect = Self::slack_for(self.rep, stmt.witness_dim());
        libm::fabs(stmt.slack - expect) <= 1e-9 * expect
    }
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

impl ProofBackend for SigmaFs {
    fn id(&self) -> &'static str {
        BACKEND_ID
    }

    fn prove(&self, crs: &ProofCrs, stmt: &LinearStatement, witness: &ZVector, rng: &mut Rng) -> Result<Proof> {
        if self.rep == 0 {
            return Err(Error::InvalidParams("rep must be positive".into()));
        }
        if !self.statement_consistent(stmt) {
            return Err(Error::InvalidParams("statement slack does not match backend".into()));
        }
        stmt.check_witness(witness)?;

        let dim = stmt.witness_dim();
        let sigma = self.sigma_mask(stmt);
        let gp = GaussianParams::new(sigma, dim)?;
        let sampler = GaussianSampler::cached(gp.sigma, gp.tail_cut);
        let q = stmt.m_mat.modulus();
        let w = witness.as_slice();
        let w_sq = witness.sq_norm() as f64;
        let max_sq = stmt.verify_bound() * stmt.verify_bound();
        let scale = core::f64::consts::PI / (sigma * sigma);
        let digest = stmt.digest();

        for _ in 0..PROVE_ATTEMPTS {
            let masks: Vec<Vec<i64>> = (0..self.rep)
                .map(|_| (0..dim).map(|_| sampler.sample(rng)).collect())
                .collect();
            let commitments: Vec<ZqVector> = masks
                .iter()
                .map(|y| {
                    let reduced: Vec<u64> = y.iter().map(|&v| q.reduce_i64(v)).collect();
                    mat_vec_mul_reduced(&stmt.m_mat, &reduced)
                })
                .collect();
            let challenges = self.challenges_from_digest(crs, &digest, &commitments);

            let mut exponent = 0.0;
            let mut too_long = false;
            let responses: Vec<ZVector> = masks
                .into_iter()
                .enumerate()
                .map(|(k, mut y)| {
                    if challenge_bit(&challenges, k) {
                        for (yi, &wi) in y.iter_mut().zip(w) {
                            *yi += wi;
                        }
                        // log of D(z) / D(z - w) for this repetition
                        exponent += scale * (w_sq - 2.0 * dot(&y, w) as f64);
                    }
                    let z = ZVector(y);
                    too_long |= z.sq_norm() as f64 > max_sq;
                    z
                })
                .collect();
            if too_long {
                continue;
            }
            // accept with probability min(1, exp(exponent) / e)
            if exponent < 1.0 && rng.uniform_f64() >= libm::exp(exponent - 1.0) {
                continue;
            }
            return Ok(Proof {
                rep: self.rep,
                commitments,
                challenges,
                responses,
            });
        }
        Err(Error::RetryExhausted("rejection sampling in proof generation"))
    }

    fn verify(&self, crs: &ProofCrs, stmt: &LinearStatement, proof: &Proof) -> bool {
        let q = stmt.m_mat.modulus();
        let dim = stmt.witness_dim();
        if proof.rep != self.rep
            || proof.commitments.len() != self.rep
            || proof.responses.len() != self.rep
            || proof.challenges.len() != self.rep.div_ceil(8)
            || !self.statement_consistent(stmt)
        {
            return false;
        }
        if proof
            .commitments
            .iter()
            .any(|a| a.len() != stmt.target.len() || a.modulus() != q)
            || proof.responses.iter().any(|z| z.len() != dim)
        {
            return false;
        }
        if self.derive_challenges(crs, stmt, &proof.commitments) != proof.challenges {
            return false;
        }
        let max_sq = stmt.verify_bound() * stmt.verify_bound();
        proof
            .commitments
            .iter()
            .zip(&proof.responses)
            .enumerate()
            .all(|(k, (a, z))| {
                if z.sq_norm() as f64 > max_sq {
                    return false;
                }
                let Ok(mz) = mat_vec_mul(&stmt.m_mat, z) else {
                    return false;
                };
                let expect = if challenge_bit(&proof.challenges, k) {
                    match a.add(&stmt.target) {
                        Ok(v) => v,
                        Err(_) => return false,
                    }
                } else {
                    a.clone()
                };
                mz == expect
            })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{proof_setup, RelationId};
    use super::*;
    use crate::math::{Modulus, ZqMatrix};
    use alloc::vec;

    fn toy_statement(bound: f64, rep: usize) -> LinearStatement {
        // x + y = 3 (mod 97)
        let q = Modulus::new(97).unwrap();
        let m = ZqMatrix::from_reduced(1, 2, vec![1, 1], q).unwrap();
        let t = ZqVector::from_reduced(vec![3], q).unwrap();
        LinearStatement::new(m, t, bound, SigmaFs::slack_for(rep, 2), b"test".to_vec()).unwrap()
    }

    #[test]
    fn honest_round_trip_and_tamper() {
        let be = SigmaFs::new(40);
        let crs = proof_setup(RelationId::Key, &[1; 32]);
        let stmt = toy_statement(5.0, 40);
        let mut rng = Rng::from_u64(1);
        let w = ZVector(vec![2, 1]);
        let pf = be.prove(&crs, &stmt, &w, &mut rng).unwrap();
        assert!(be.verify(&crs, &stmt, &pf));

        let mut bad = pf.clone();
        bad.responses[0].0[0] += 1;
        assert!(!be.verify(&crs, &stmt, &bad));

        let mut bad = pf.clone();
        bad.challenges[0] ^= 1;
        assert!(!be.verify(&crs, &stmt, &bad));

        let other = proof_setup(RelationId::Dec, &[1; 32]);
        assert!(!be.verify(&other, &stmt, &pf));
        assert!(!SigmaFs::new(41).verify(&crs, &stmt, &pf));
    }

    #[test]
    fn zero_witness_responses_are_masks() {
        let be = SigmaFs::new(40);
        let crs = proof_setup(RelationId::Key, &[1; 32]);
        let q = Modulus::new(97).unwrap();
        let m = ZqMatrix::from_reduced(1, 2, vec![1, 1], q).unwrap();
        let stmt = LinearStatement::new(m, ZqVector::zeros(1, q), 1.0, SigmaFs::slack_for(40, 2), vec![]).unwrap();
        let pf = be.prove(&crs, &stmt, &ZVector::zeros(2), &mut Rng::from_u64(2)).unwrap();
        assert!(be.verify(&crs, &stmt, &pf));
        for (a, z) in pf.commitments.iter().zip(&pf.responses) {
            assert_eq!(mat_vec_mul(&stmt.m_mat, z).unwrap(), *a);
        }
    }

    #[test]
    fn invalid_witness_refused() {
        let be = SigmaFs::new(40);
        let crs = proof_setup(RelationId::Key, &[1; 32]);
        let stmt = toy_statement(5.0, 40);
        let mut rng = Rng::from_u64(3);
        assert!(be.prove(&crs, &stmt, &ZVector(vec![1, 1]), &mut rng).is_err());
        // satisfies the equation but has norm 10 = 2 * bound
        assert!(matches!(
            be.prove(&crs, &stmt, &ZVector(vec![-3, 6 + 97]), &mut rng),
            Err(Error::WitnessInvalid(_))
        ));
    }

    #[test]
    fn challenges_have_zero_padding() {
        let be = SigmaFs::new(13);
        let crs = proof_setup(RelationId::Key, &[1; 32]);
        let stmt = toy_statement(5.0, 13);
        for seed in 0..20u8 {
            let c = be.derive_challenges(&crs, &stmt, &[ZqVector::from_reduced(vec![seed as u64], Modulus::new(97).unwrap()).unwrap()]);
            assert_eq!(c.len(), 2);
            assert_eq!(c[1] >> 5, 0);
        }
    }
}
