//! Executable correctness and verifiability games.
//!
//! Each game runs one complete interaction between honest parties and a
//! scripted adversary and returns the game's output bit. The correctness game
//! should always output `true`; in the verifiability game `true` means the
//! adversary got a relation-violating message accepted.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::*;
use crate::math::gaussian::{GaussianParams, GaussianSampler};
use crate::math::{mat_vec_mul, ZVector};
use crate::pke::pke_decrypt;
use crate::proof::sigma::MASK_FACTOR;
use crate::shamir::{eval_poly, is_valid_share_vector};

/// Dealer id used for the single sharing in a standalone game.
const GAME_EPOCH: u64 = 0;

fn setup(params: &SystemParams, seed: u64) -> Result<(PvssPublicParams, Rng)> {
    let master = crate::math::rng::expand_seed(seed);
    let pp = pvss_setup(params, &master)?;
    Ok((pp, Rng::derive(&master, 0, 0, "game")))
}

/// Whether `shares` (points `1..=n`) lie in the degree-`t` share code.
pub fn in_share_language(shares: &[u64], t: usize, p: crate::math::Modulus) -> bool {
    let n = shares.len();
    if t + 1 >= n {
        return shares.iter().all(|&s| s < p.value());
    }
    match parity_matrix(n, t, p) {
        Ok(h) => is_valid_share_vector(shares, &h).unwrap_or(false),
        Err(_) => false,
    }
}

/// Every subset of `shares` with more than `t` members interpolates to `s`.
pub fn all_subsets_agree(shares: &BTreeMap<u64, u64>, t: usize, s: u64, p: crate::math::Modulus) -> bool {
    let entries: Vec<(u64, u64)> = shares.iter().map(|(&i, &v)| (i, v)).collect();
    let k = entries.len();
    (0u64..1 << k).all(|mask| {
        if (mask.count_ones() as usize) <= t {
            return true;
        }
        let sub: BTreeMap<u64, u64> = (0..k)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| entries[b])
            .collect();
        sss_combine(&sub, p) == Ok(s)
    })
}

/// Correctness game with `n` parties and threshold `t`. The adversary picks
/// `t` corrupt parties; each one independently announces a bad key proof,
/// reveals a wrong share, withholds its reveal, or behaves honestly.
pub fn correctness_game(params: &SystemParams, n: usize, t: usize, seed: u64) -> Result<bool> {
    let (pp, mut rng) = setup(params, seed)?;
    let p = params.p;

    let mut ids: Vec<u64> = (1..=n as u64).collect();
    for i in (1..ids.len()).rev() {
        ids.swap(i, rng.uniform_below(i as u64 + 1) as usize);
    }
    let corrupt: BTreeSet<u64> = ids[..t].iter().copied().collect();
    if corrupt.len() > t {
        return Ok(false);
    }
    let behaviour: BTreeMap<u64, u64> = corrupt.iter().map(|&i| (i, rng.uniform_below(4))).collect();

    let mut anns = BTreeMap::new();
    let mut keys = BTreeMap::new();
    for i in 1..=n as u64 {
        let label = labels::key(GAME_EPOCH, i);
        let (mut ka, kp) = pvss_keygen(&pp, &label, &mut rng)?;
        if behaviour.get(&i) == Some(&0) {
            ka.proof0.responses[0].0[0] += 1;
        }
        anns.insert(i, ka);
        keys.insert(i, kp);
    }
    for i in (1..=n as u64).filter(|i| !corrupt.contains(i)) {
        if !pvss_keyver(&pp, &labels::key(GAME_EPOCH, i), &anns[&i]) {
            return Ok(false);
        }
    }
    let g: Vec<u64> = (1..=n as u64)
        .filter(|&i| pvss_keyver(&pp, &labels::key(GAME_EPOCH, i), &anns[&i]))
        .collect();
    let pks: Vec<ZqVector> = g.iter().map(|i| anns[i].pk_b.clone()).collect();

    let s = rng.uniform_below(p.value());
    let share_label = labels::share(GAME_EPOCH, 0);
    let (tr, _) = pvss_share(&pp, 0, &pks, s, t, &share_label, &mut rng)?;
    if !pvss_sharever(&pp, &pks, t, &share_label, &tr) {
        return Ok(false);
    }

    let mut verified = BTreeMap::new();
    for (pos, &i) in g.iter().enumerate() {
        let label = labels::dec(GAME_EPOCH, 0, i);
        let ct = &tr.ciphertexts[pos];
        let mut ds = pvss_dec(&pp, i, &keys[&i], ct, &label, &mut rng)?;
        match behaviour.get(&i) {
            Some(1) => ds.share = (ds.share + 1) % p.value(),
            Some(2) => continue,
            _ => {}
        }
        let ok = pvss_decver(&pp, &anns[&i].pk_b, ct, &label, &ds);
        if !ok && !corrupt.contains(&i) {
            return Ok(false);
        }
        if ok {
            verified.insert(pos as u64 + 1, ds.share);
        }
    }
    if verified.len() < t + 1 {
        return Ok(false);
    }
    Ok(all_subsets_agree(&verified, t, s, p))
}

/// The cheating strategies exercised against the verifiability game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cheat {
    /// Honest key, proof responses replaced by random vectors.
    BadKeyProof,
    /// Uniformly random public key carrying another party's proof.
    RandomKeyCopiedProof,
    /// Another party's announcement replayed in the corrupt party's slot.
    ReplayedKeyAnnouncement,
    /// First ciphertext from one sharing, the rest and the proof from another.
    SplicedSharing,
    /// Two ciphertexts swapped after proving.
    ReorderedCiphertexts,
    /// Degree `t + 1` sharing proved under threshold `t + 1`, claimed for `t`.
    WrongThreshold,
    /// One ciphertext shifted by `p`, which adds one to its share.
    TamperedCiphertext,
    /// Ciphertexts of a non-codeword carrying the proof of an honest sharing.
    ForeignSharingProof,
    /// Reveal of share plus one with the honest proof.
    WrongShareValue,
    /// Reveal and proof for a different ciphertext under the same label.
    ReplayedDecryptionProof,
    /// Wrong share with a simulated proof whose challenges were chosen freely.
    ForgedChallenges,
    /// Share plus `p`, congruent but outside `Z_p`.
    OutOfRangeShare,
}

impl Cheat {
    pub const ALL: [Cheat; 12] = [
        Cheat::BadKeyProof,
        Cheat::RandomKeyCopiedProof,
        Cheat::ReplayedKeyAnnouncement,
        Cheat::SplicedSharing,
        Cheat::ReorderedCiphertexts,
        Cheat::WrongThreshold,
        Cheat::TamperedCiphertext,
        Cheat::ForeignSharingProof,
        Cheat::WrongShareValue,
        Cheat::ReplayedDecryptionProof,
        Cheat::ForgedChallenges,
        Cheat::OutOfRangeShare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Cheat::BadKeyProof => "bad-key-proof",
            Cheat::RandomKeyCopiedProof => "random-key-copied-proof",
            Cheat::ReplayedKeyAnnouncement => "replayed-key-announcement",
            Cheat::SplicedSharing => "spliced-sharing",
            Cheat::ReorderedCiphertexts => "reordered-ciphertexts",
            Cheat::WrongThreshold => "wrong-threshold",
            Cheat::TamperedCiphertext => "tampered-ciphertext",
            Cheat::ForeignSharingProof => "foreign-sharing-proof",
            Cheat::WrongShareValue => "wrong-share-value",
            Cheat::ReplayedDecryptionProof => "replayed-decryption-proof",
            Cheat::ForgedChallenges => "forged-challenges",
            Cheat::OutOfRangeShare => "out-of-range-share",
        }
    }

    fn phase(self) -> u8 {
        match self {
            Cheat::BadKeyProof | Cheat::RandomKeyCopiedProof | Cheat::ReplayedKeyAnnouncement => 0,
            Cheat::SplicedSharing
            | Cheat::ReorderedCiphertexts
            | Cheat::WrongThreshold
            | Cheat::TamperedCiphertext
            | Cheat::ForeignSharingProof => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheatOutcome {
    /// The verification the cheat targets returned reject.
    pub rejected: bool,
    /// The game's output bit: an accepted message violated its relation.
    pub game_output: bool,
}

/// Parties `1..=n` with `n = 4`, `t = 1`; party 4 is corrupt and is both the
/// dealer and a share holder.
pub fn verifiability_game(params: &SystemParams, cheat: Cheat, seed: u64) -> Result<CheatOutcome> {
    const N: u64 = 4;
    const T: usize = 1;
    const BAD: u64 = N;
    let (pp, mut rng) = setup(params, seed)?;
    let p = params.p;
    let q = params.q;

    // Keys. `key_in_language` records ground truth for the corrupt key.
    let mut anns = BTreeMap::new();
    let mut keys = BTreeMap::new();
    for i in 1..=N {
        let (ka, kp) = pvss_keygen(&pp, &labels::key(GAME_EPOCH, i), &mut rng)?;
        anns.insert(i, ka);
        keys.insert(i, kp);
    }
    let mut key_in_language = true;
    match cheat {
        Cheat::BadKeyProof => {
            let dim = params.u + params.v;
            let ka = anns.get_mut(&BAD).expect("party exists");
            for z in ka.proof0.responses.iter_mut() {
                *z = ZVector((0..dim).map(|_| rng.uniform_below(1 << 20) as i64 - (1 << 19)).collect());
            }
        }
        Cheat::RandomKeyCopiedProof => {
            let pk = (0..params.u).map(|_| rng.uniform_below(q.value())).collect();
            let proof0 = anns[&(BAD - 1)].proof0.clone();
            anns.insert(
                BAD,
                KeyAnnouncement {
                    pk_b: ZqVector::from_reduced(pk, q)?,
                    proof0,
                },
            );
            key_in_language = false;
        }
        Cheat::ReplayedKeyAnnouncement => {
            let replay = anns[&(BAD - 1)].clone();
            anns.insert(BAD, replay);
        }
        _ => {}
    }
    let keyver: BTreeMap<u64, bool> = (1..=N)
        .map(|i| (i, pvss_keyver(&pp, &labels::key(GAME_EPOCH, i), &anns[&i])))
        .collect();
    let g: Vec<u64> = (1..=N).filter(|i| keyver[i]).collect();
    let bad_in_g = keyver[&BAD];
    let pks: Vec<ZqVector> = g.iter().map(|i| anns[i].pk_b.clone()).collect();
    let n = g.len();
    let t = T.min(n.saturating_sub(1));

    // Sharing by the corrupt dealer.
    let share_label = labels::share(GAME_EPOCH, BAD);
    let honest = |rng: &mut Rng| pvss_share(&pp, BAD, &pks, rng.uniform_below(p.value()), t, &share_label, rng);
    let tr = match cheat {
        Cheat::SplicedSharing => {
            let (a, _) = honest(&mut rng)?;
            let (mut b, _) = honest(&mut rng)?;
            b.ciphertexts[0] = a.ciphertexts[0].clone();
            b
        }
        Cheat::ReorderedCiphertexts => {
            let (mut a, _) = honest(&mut rng)?;
            a.ciphertexts.swap(0, 1);
            a
        }
        Cheat::WrongThreshold => {
            let mut coeffs: Vec<u64> = (0..t + 2).map(|_| rng.uniform_below(p.value())).collect();
            coeffs[t + 1] = 1 + rng.uniform_below(p.value() - 1);
            let shares: Vec<u64> = (1..=n as u64).map(|x| eval_poly(&coeffs, x, p)).collect();
            share_values(&pp, BAD, &pks, &shares, t + 1, &share_label, &mut rng)?
        }
        Cheat::TamperedCiphertext => {
            let (mut a, _) = honest(&mut rng)?;
            let c = &mut a.ciphertexts[2];
            c.c2 = q.add(c.c2, p.value());
            a
        }
        Cheat::ForeignSharingProof => {
            let (honest_tr, sv) = honest(&mut rng)?;
            let mut bad = sv.values.clone();
            bad[1] = p.add(bad[1], 1);
            let mut fresh = Vec::with_capacity(n);
            for (pk, &m) in pks.iter().zip(&bad) {
                fresh.push(crate::pke::pke_encrypt(&pp.a_mat, pk, m, params, &mut rng)?.0);
            }
            SharingTranscript {
                dealer: BAD,
                ciphertexts: fresh,
                proof1: honest_tr.proof1,
            }
        }
        _ => honest(&mut rng)?.0,
    };
    let share_ok = pvss_sharever(&pp, &pks, t, &share_label, &tr);

    // Ground-truth shares under the unique secret keys.
    let true_shares: Vec<u64> = g
        .iter()
        .zip(&tr.ciphertexts)
        .map(|(i, ct)| pke_decrypt(&keys[i].sk_s, ct, params).map(|w| w.message))
        .collect::<Result<_>>()?;

    // Reveals. Honest parties always reveal; the corrupt holder may cheat.
    let mut honest_dec_failed = false;
    let mut bad_reveal_accepted_wrong = false;
    let mut targeted_dec_ok = true;
    for (pos, &i) in g.iter().enumerate() {
        let label = labels::dec(GAME_EPOCH, BAD, i);
        let ct = &tr.ciphertexts[pos];
        let ds = pvss_dec(&pp, i, &keys[&i], ct, &label, &mut rng)?;
        if i != BAD {
            honest_dec_failed |= !pvss_decver(&pp, &anns[&i].pk_b, ct, &label, &ds);
            continue;
        }
        let claimed = match cheat {
            Cheat::WrongShareValue => DecryptionShare {
                share: p.add(ds.share, 1),
                ..ds
            },
            Cheat::ReplayedDecryptionProof => {
                let other = crate::pke::pke_encrypt(&pp.a_mat, &keys[&i].pk_b, rng.uniform_below(p.value()), params, &mut rng)?.0;
                pvss_dec(&pp, i, &keys[&i], &other, &label, &mut rng)?
            }
            Cheat::ForgedChallenges => {
                let share = p.add(ds.share, 1);
                let stmt = crate::proof::build_dec_statement(&pp.a_mat, &keys[&i].pk_b, ct, share, params, &label)?;
                DecryptionShare {
                    holder: i,
                    share,
                    proof2: simulate_proof(&pp, &stmt, &mut rng)?,
                }
            }
            Cheat::OutOfRangeShare => DecryptionShare {
                share: ds.share + p.value(),
                ..ds
            },
            _ => ds,
        };
        let ok = pvss_decver(&pp, &anns[&i].pk_b, ct, &label, &claimed);
        targeted_dec_ok = ok;
        bad_reveal_accepted_wrong = ok && claimed.share != true_shares[pos];
    }

    let rejected = match cheat.phase() {
        0 => !bad_in_g,
        1 => !share_ok,
        _ => !targeted_dec_ok,
    };
    let game_output = (bad_in_g && !key_in_language)
        || (share_ok && !in_share_language(&true_shares, t, p))
        || bad_reveal_accepted_wrong
        || honest_dec_failed;
    Ok(CheatOutcome { rejected, game_output })
}

/// A transcript in the shape of an honest proof, built backwards from freely
/// chosen challenges: `a_k = M z_k - c_k target`.
fn simulate_proof(pp: &PvssPublicParams, stmt: &crate::proof::LinearStatement, rng: &mut Rng) -> Result<Proof> {
    let rep = pp.backend.rep;
    let sigma = MASK_FACTOR * libm::sqrt(rep as f64) * stmt.bound_zk;
    let gp = GaussianParams::new(sigma, stmt.witness_dim())?;
    let sampler = GaussianSampler::cached(gp.sigma, gp.tail_cut);
    let mut challenges = alloc::vec![0u8; rep.div_ceil(8)];
    rng.fill_bytes(&mut challenges);
    if rep % 8 != 0 {
        *challenges.last_mut().expect("rep is positive") &= (1u8 << (rep % 8)) - 1;
    }
    let mut commitments = Vec::with_capacity(rep);
    let mut responses = Vec::with_capacity(rep);
    for k in 0..rep {
        let z = ZVector((0..stmt.witness_dim()).map(|_| sampler.sample(rng)).collect());
        let mz = mat_vec_mul(&stmt.m_mat, &z)?;
        let a = if crate::proof::challenge_bit(&challenges, k) {
            let neg = ZqVector::from_reduced(stmt.target.entries().iter().map(|&x| stmt.target.modulus().neg(x)).collect(), stmt.target.modulus())?;
            mz.add(&neg)?
        } else {
            mz
        };
        commitments.push(a);
        responses.push(z);
    }
    Ok(Proof {
        rep,
        commitments,
        challenges,
        responses,
    })
}
