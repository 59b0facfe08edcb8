//! Single-field mutations of an epoch record, for exercising the verifier.
//!
//! Every mutation leaves the record decodable but inconsistent, so public
//! verification must reject it.

use alloc::vec::Vec;

use super::EpochRecord;
use crate::math::Rng;
use crate::params::SystemParams;
use crate::proof::Proof;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mutation {
    OmegaShifted,
    OmegaErased,
    SecretShifted,
    SecretRemoved,
    RevealShareShifted,
    RevealProofTampered,
    RevealSpliced,
    ShareSetShrunk,
    ShareSetExtended,
    QualPrimeDropped,
    CiphertextTampered,
    SharingProofTampered,
    SharingsSwapped,
    EpochShifted,
    DirectoryDigestFlipped,
}

impl Mutation {
    pub const ALL: [Mutation; 15] = [
        Mutation::OmegaShifted,
        Mutation::OmegaErased,
        Mutation::SecretShifted,
        Mutation::SecretRemoved,
        Mutation::RevealShareShifted,
        Mutation::RevealProofTampered,
        Mutation::RevealSpliced,
        Mutation::ShareSetShrunk,
        Mutation::ShareSetExtended,
        Mutation::QualPrimeDropped,
        Mutation::CiphertextTampered,
        Mutation::SharingProofTampered,
        Mutation::SharingsSwapped,
        Mutation::EpochShifted,
        Mutation::DirectoryDigestFlipped,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::OmegaShifted => "omega-shifted",
            Mutation::OmegaErased => "omega-erased",
            Mutation::SecretShifted => "secret-shifted",
            Mutation::SecretRemoved => "secret-removed",
            Mutation::RevealShareShifted => "reveal-share-shifted",
            Mutation::RevealProofTampered => "reveal-proof-tampered",
            Mutation::RevealSpliced => "reveal-spliced",
            Mutation::ShareSetShrunk => "share-set-shrunk",
            Mutation::ShareSetExtended => "share-set-extended",
            Mutation::QualPrimeDropped => "qual-prime-dropped",
            Mutation::CiphertextTampered => "ciphertext-tampered",
            Mutation::SharingProofTampered => "sharing-proof-tampered",
            Mutation::SharingsSwapped => "sharings-swapped",
            Mutation::EpochShifted => "epoch-shifted",
            Mutation::DirectoryDigestFlipped => "directory-digest-flipped",
        }
    }
}

fn pick<T: Copy>(items: &[T], rng: &mut Rng) -> Option<T> {
    if items.is_empty() {
        None
    } else {
        Some(items[rng.uniform_below(items.len() as u64) as usize])
    }
}

fn tamper_proof(proof: &mut Proof, rng: &mut Rng) {
    let k = rng.uniform_below(proof.responses.len() as u64) as usize;
    let z = &mut proof.responses[k].0;
    let i = rng.uniform_below(z.len() as u64) as usize;
    z[i] += 1 + rng.uniform_below(3) as i64;
}

/// Applies `m` at a randomly chosen position. Returns `None` when the record
/// has nothing for the mutation to act on (for example no reveals).
pub fn apply(rec: &EpochRecord, m: Mutation, sp: &SystemParams, rng: &mut Rng) -> Option<EpochRecord> {
    let p = sp.p;
    let q = sp.q;
    let mut r = rec.clone();
    let dealers: Vec<u64> = r.qual_prime.iter().copied().collect();
    let reveal_keys: Vec<(u64, u64)> = r.reveals.keys().copied().collect();
    match m {
        Mutation::OmegaShifted => {
            r.omega = Some(r.omega.map_or(0, |w| p.add(w, 1 + rng.uniform_below(p.value() - 1))));
        }
        Mutation::OmegaErased => {
            r.omega = match r.omega {
                Some(_) => None,
                None => Some(rng.uniform_below(p.value())),
            };
        }
        Mutation::SecretShifted => {
            let keys: Vec<u64> = r.secrets.keys().copied().collect();
            let i = pick(&keys, rng)?;
            let s = r.secrets.get_mut(&i)?;
            *s = p.add(*s, 1 + rng.uniform_below(p.value() - 1));
        }
        Mutation::SecretRemoved => {
            let keys: Vec<u64> = r.secrets.keys().copied().collect();
            r.secrets.remove(&pick(&keys, rng)?);
        }
        Mutation::RevealShareShifted => {
            let ds = r.reveals.get_mut(&pick(&reveal_keys, rng)?)?;
            ds.share = p.add(ds.share, 1 + rng.uniform_below(p.value() - 1));
        }
        Mutation::RevealProofTampered => {
            let ds = r.reveals.get_mut(&pick(&reveal_keys, rng)?)?;
            tamper_proof(&mut ds.proof2, rng);
        }
        Mutation::RevealSpliced => {
            let (i, j) = pick(&reveal_keys, rng)?;
            let donors: Vec<(u64, u64)> = reveal_keys.iter().copied().filter(|&(d, h)| h == j && d != i).collect();
            let donor = match pick(&donors, rng) {
                Some(k) => k,
                None => pick(&reveal_keys.iter().copied().filter(|&k| k != (i, j)).collect::<Vec<_>>(), rng)?,
            };
            let replacement = r.reveals[&donor].clone();
            r.reveals.insert((i, j), replacement);
        }
        Mutation::ShareSetShrunk => {
            let (i, j) = pick(&reveal_keys, rng)?;
            r.share_sets.get_mut(&i)?.remove(&j);
        }
        Mutation::ShareSetExtended => {
            let i = pick(&dealers, rng)?;
            let set = r.share_sets.get_mut(&i)?;
            let fresh = reveal_keys.iter().map(|&(_, h)| h).chain(dealers.iter().copied()).max().unwrap_or(0) + 1;
            set.insert(fresh);
        }
        Mutation::QualPrimeDropped => {
            r.qual_prime.remove(&pick(&dealers, rng)?);
        }
        Mutation::CiphertextTampered => {
            let tr = r.sharings.get_mut(&pick(&dealers, rng)?)?;
            let k = rng.uniform_below(tr.ciphertexts.len() as u64) as usize;
            let ct = &mut tr.ciphertexts[k];
            ct.c2 = q.add(ct.c2, 1 + rng.uniform_below(q.value() - 1));
        }
        Mutation::SharingProofTampered => {
            let tr = r.sharings.get_mut(&pick(&dealers, rng)?)?;
            tamper_proof(&mut tr.proof1, rng);
        }
        Mutation::SharingsSwapped => {
            if dealers.len() < 2 {
                let tr = r.sharings.get_mut(&dealers[0])?;
                tr.dealer += 1;
            } else {
                let a = rng.uniform_below(dealers.len() as u64) as usize;
                let b = (a + 1 + rng.uniform_below(dealers.len() as u64 - 1) as usize) % dealers.len();
                let ta = r.sharings.remove(&dealers[a])?;
                let tb = r.sharings.remove(&dealers[b])?;
                r.sharings.insert(dealers[a], tb);
                r.sharings.insert(dealers[b], ta);
            }
        }
        Mutation::EpochShifted => {
            r.epoch += 1 + rng.uniform_below(1000);
        }
        Mutation::DirectoryDigestFlipped => {
            let bit = rng.uniform_below(256) as usize;
            r.directory_digest[bit / 8] ^= 1 << (bit % 8);
        }
    }
    Some(r)
}
