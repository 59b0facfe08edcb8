//! Corrupt-party behaviour. Every corrupt party first computes its honest
//! message for the round, then the strategy rewrites or withholds it. The
//! adversary is rushing: it acts after all honest messages of the round are
//! posted and may read them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use lbcn_core::codec::Encode;
use lbcn_core::math::Rng;
use lbcn_core::params::SystemParams;
use lbcn_core::proof::Proof;
use lbcn_core::pvss::{DecryptionShare, KeyAnnouncement, SharingTranscript};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    /// Follows the protocol.
    Honest,
    /// Shares honestly, never reveals.
    HonestButSilent,
    /// Tampers one key proof during Init, so it never qualifies.
    BadKeyProof,
    /// Tampers its sharing proof.
    BadShareProof,
    /// Reveals share plus one with the proof of the true share.
    WrongShareValue,
    /// Replaces its first ciphertext with an honest dealer's first ciphertext.
    SpliceTranscripts,
    /// Waits for every honest reveal, then reveals only if the low bit of the
    /// resulting output is zero.
    LastRevealWithhold,
    /// Odd epochs: a ciphertext residue equal to `q`. Even epochs: reveals
    /// share plus `p`.
    OverflowClaims,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown adversary strategy {0:?}")]
pub struct UnknownStrategy(pub String);

impl Strategy {
    pub const ALL: [Strategy; 8] = [
        Strategy::Honest,
        Strategy::HonestButSilent,
        Strategy::BadKeyProof,
        Strategy::BadShareProof,
        Strategy::WrongShareValue,
        Strategy::SpliceTranscripts,
        Strategy::LastRevealWithhold,
        Strategy::OverflowClaims,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Honest => "honest",
            Strategy::HonestButSilent => "honest-but-silent",
            Strategy::BadKeyProof => "bad-key-proof",
            Strategy::BadShareProof => "bad-share-proof",
            Strategy::WrongShareValue => "wrong-share-value",
            Strategy::SpliceTranscripts => "splice-transcripts",
            Strategy::LastRevealWithhold => "last-reveal-withhold",
            Strategy::OverflowClaims => "overflow-claims",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "withhold-reveals" {
            return Ok(Strategy::HonestButSilent);
        }
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| UnknownStrategy(s.to_string()))
    }
}

fn tamper_proof(proof: &mut Proof, rng: &mut Rng) {
    let k = rng.uniform_below(proof.responses.len() as u64) as usize;
    let z = &mut proof.responses[k].0;
    let i = rng.uniform_below(z.len() as u64) as usize;
    z[i] += 1;
}

/// Init message: `dealer -> announcement` for every dealer.
pub fn init_message(strategy: Strategy, mut anns: BTreeMap<u64, KeyAnnouncement>, rng: &mut Rng) -> Option<Vec<u8>> {
    if strategy == Strategy::BadKeyProof {
        if let Some(ka) = anns.values_mut().next() {
            tamper_proof(&mut ka.proof0, rng);
        }
    }
    Some(anns.to_bytes())
}

/// Encoding of `tr` with the first ciphertext's `c2` set to `q`, which no
/// decoder accepts.
fn overflowing_sharing(tr: &SharingTranscript, sp: &SystemParams) -> Vec<u8> {
    let mut bytes = tr.to_bytes();
    let w = sp.q.byte_width();
    // dealer, ciphertext count, c1 length, c1 entries
    let at = 8 + 8 + 8 + tr.ciphertexts[0].c1.len() * w;
    bytes[at..at + w].copy_from_slice(&sp.q.value().to_le_bytes()[..w]);
    bytes
}

/// Round-1 message. `honest` holds the sharings honest dealers posted this
/// round.
pub fn share_message(
    strategy: Strategy,
    epoch: u64,
    mut tr: SharingTranscript,
    honest: &BTreeMap<u64, SharingTranscript>,
    sp: &SystemParams,
    rng: &mut Rng,
) -> Option<Vec<u8>> {
    match strategy {
        Strategy::BadShareProof => tamper_proof(&mut tr.proof1, rng),
        Strategy::SpliceTranscripts => match honest.values().next() {
            Some(donor) => tr.ciphertexts[0] = donor.ciphertexts[0].clone(),
            None => tr.ciphertexts[0].c2 = sp.q.add(tr.ciphertexts[0].c2, 1),
        },
        Strategy::OverflowClaims if epoch % 2 == 1 => return Some(overflowing_sharing(&tr, sp)),
        _ => {}
    }
    Some(tr.to_bytes())
}

/// Round-2 message. `prospective_output` is the output the epoch would have
/// if this party revealed honestly, computed from the reveals posted so far.
pub fn reveal_message(
    strategy: Strategy,
    epoch: u64,
    mut reveals: BTreeMap<u64, DecryptionShare>,
    prospective_output: impl FnOnce(&BTreeMap<u64, DecryptionShare>) -> Option<u64>,
    sp: &SystemParams,
) -> Option<Vec<u8>> {
    if reveals.is_empty() {
        return None;
    }
    let p = sp.p;
    match strategy {
        Strategy::HonestButSilent => return None,
        Strategy::WrongShareValue => {
            for ds in reveals.values_mut() {
                ds.share = p.add(ds.share, 1);
            }
        }
        Strategy::OverflowClaims if epoch % 2 == 0 => {
            for ds in reveals.values_mut() {
                ds.share += p.value();
            }
        }
        Strategy::LastRevealWithhold => {
            if prospective_output(&reveals).is_some_and(|w| w & 1 == 1) {
                return None;
            }
        }
        _ => {}
    }
    Some(reveals.to_bytes())
}
