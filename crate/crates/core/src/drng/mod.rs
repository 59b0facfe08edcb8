//! Epoch-based randomness beacon over the PVSS.
//!
//! Init: every participant, as a share holder, generates one key pair per
//! dealer and announces the public halves with proofs. Participants whose
//! announcements all verify form `QUAL`, renumbered `1..=n'` in ascending
//! order of original id.
//!
//! Each epoch has two broadcast rounds. Round 1: every qualified dealer shares
//! a fresh secret; dealers whose sharing verifies form `QUAL'`. Round 2: every
//! holder in `QUAL'` decrypts and proves its share of each `QUAL'` sharing.
//! Finalize is a pure function of the broadcast messages: each dealer's
//! secret is interpolated from the `t + 1` lowest verified reveals and the
//! output is their sum, or `None` if some secret cannot be reconstructed.
//!
//! Original ids name participants everywhere (labels, maps, records); the
//! qualified ids are only used as Shamir evaluation points.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use sha2::{Digest, Sha256};

use crate::codec::{CodecContext, Decode, DecodeError, DecodeResult, Decoder, Encode, Encoder};
use crate::error::{Error, Result};
use crate::math::{Modulus, Rng, ZqVector};
use crate::params::SystemParams;
use crate::pke::PkeKeyPair;
use crate::pvss::{
    labels, pvss_combine, pvss_dec, pvss_decver, pvss_keygen, pvss_keyver, pvss_setup, pvss_share, pvss_sharever,
    DecryptionShare, KeyAnnouncement, PvssPublicParams, SharingTranscript,
};

pub mod tamper;

/// Epoch numbering starts here.
pub const FIRST_EPOCH: u64 = 1;

const DIRECTORY_DOMAIN: &[u8] = b"lbcn/directory/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Idle,
    Shared,
    Revealed,
    Done,
}

/// Public outcome of Init, plus any dealers that joined later.
///
/// `holders` are the participants that passed Init; they hold keys for every
/// dealer. `qual` lists every qualified dealer: the holders followed by
/// joiners, all ascending. A joiner deals but holds no keys, so the key tuples
/// of earlier dealers never change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicDirectory {
    pub t: usize,
    pub qual: Vec<u64>,
    pub holders: Vec<u64>,
    pub renumbering: BTreeMap<u64, u64>,
    /// `(dealer, holder) -> announcement` for every dealer in `qual` and
    /// holder in `holders`.
    pub announcements: BTreeMap<(u64, u64), KeyAnnouncement>,
}

impl PublicDirectory {
    fn assemble(t: usize, qual: Vec<u64>, holders: Vec<u64>, announcements: BTreeMap<(u64, u64), KeyAnnouncement>) -> Self {
        let renumbering = qual.iter().enumerate().map(|(k, &id)| (id, k as u64 + 1)).collect();
        Self {
            t,
            qual,
            holders,
            renumbering,
            announcements,
        }
    }

    /// Number of share holders, `n'`.
    pub fn n_holders(&self) -> usize {
        self.holders.len()
    }

    pub fn is_dealer(&self, id: u64) -> bool {
        self.renumbering.contains_key(&id)
    }

    pub fn is_holder(&self, id: u64) -> bool {
        self.holders.binary_search(&id).is_ok()
    }

    /// Shamir evaluation point of a holder.
    pub fn share_index(&self, holder: u64) -> Option<u64> {
        if self.is_holder(holder) {
            self.renumbering.get(&holder).copied()
        } else {
            None
        }
    }

    /// `pk_i = (pk_ij)` over the holders, in holder order.
    pub fn dealer_keys(&self, dealer: u64) -> Option<Vec<ZqVector>> {
        self.holders
            .iter()
            .map(|&j| self.announcements.get(&(dealer, j)).map(|ka| ka.pk_b.clone()))
            .collect()
    }

    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(DIRECTORY_DOMAIN);
        h.update(self.to_bytes());
        h.finalize().into()
    }
}

/// One participant's private state.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticipantState {
    pub id_original: u64,
    pub id_qual: Option<u64>,
    /// `dealer -> (pk_ij, sk_ij)` for the keys this participant holds.
    pub my_keys: BTreeMap<u64, PkeKeyPair>,
    pub qual: Vec<u64>,
    pub qual_prime: BTreeSet<u64>,
    pub phase: Phase,
    pub epoch: u64,
    secret: Option<u64>,
}

impl ParticipantState {
    pub fn new(id: u64) -> Self {
        Self {
            id_original: id,
            id_qual: None,
            my_keys: BTreeMap::new(),
            qual: Vec::new(),
            qual_prime: BTreeSet::new(),
            phase: Phase::Idle,
            epoch: FIRST_EPOCH,
            secret: None,
        }
    }

    /// Adopts the directory's `QUAL` and this participant's qualified id.
    pub fn sync_directory(&mut self, dir: &PublicDirectory) {
        self.qual = dir.qual.clone();
        self.id_qual = dir.renumbering.get(&self.id_original).copied();
    }

    /// The secret shared this epoch, if round 1 has run.
    pub fn secret(&self) -> Option<u64> {
        self.secret
    }

    fn expect_phase(&self, expected: Phase) -> Result<()> {
        if self.phase != expected {
            return Err(Error::WrongPhase {
                expected,
                got: self.phase,
            });
        }
        Ok(())
    }

    /// Moves from a finished epoch to the next one. `QUAL` is untouched.
    pub fn next_epoch(&mut self) -> Result<()> {
        self.expect_phase(Phase::Done)?;
        self.phase = Phase::Idle;
        self.epoch += 1;
        self.qual_prime.clear();
        self.secret = None;
        Ok(())
    }
}

/// Everything published in one epoch, restricted to what verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpochRecord {
    pub epoch: u64,
    pub qual_prime: BTreeSet<u64>,
    pub sharings: BTreeMap<u64, SharingTranscript>,
    /// `(dealer, holder) -> reveal` for every holder in the dealer's share set.
    pub reveals: BTreeMap<(u64, u64), DecryptionShare>,
    /// Dealer -> holders whose reveal verified.
    pub share_sets: BTreeMap<u64, BTreeSet<u64>>,
    /// Dealer -> reconstructed secret, for dealers with at least `t + 1`
    /// verified reveals.
    pub secrets: BTreeMap<u64, u64>,
    pub omega: Option<u64>,
    /// Binds the record to the directory holding the key proofs.
    pub directory_digest: [u8; 32],
}

pub fn drng_setup(params: &SystemParams, seed: &[u8; 32]) -> Result<PvssPublicParams> {
    pvss_setup(params, seed)
}

/// Holder `holder` generates its key for each dealer in `dealers`.
pub fn init_keygen(
    crs: &PvssPublicParams,
    holder: u64,
    dealers: &[u64],
    rng: &mut Rng,
) -> Result<(BTreeMap<u64, KeyAnnouncement>, BTreeMap<u64, PkeKeyPair>)> {
    let mut anns = BTreeMap::new();
    let mut keys = BTreeMap::new();
    for &dealer in dealers {
        let (ka, kp) = pvss_keygen(crs, &labels::key(dealer, holder), rng)?;
        anns.insert(dealer, ka);
        keys.insert(dealer, kp);
    }
    Ok((anns, keys))
}

/// `QUAL` from the broadcast announcements: participants all of whose
/// announcements (one per participant as dealer) are present and verify.
pub fn qualify(
    crs: &PvssPublicParams,
    participants: &[u64],
    announcements: &BTreeMap<(u64, u64), KeyAnnouncement>,
    t: usize,
) -> Result<PublicDirectory> {
    let mut ids = participants.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let qual: Vec<u64> = ids
        .iter()
        .copied()
        .filter(|&holder| {
            ids.iter().all(|&dealer| {
                announcements
                    .get(&(dealer, holder))
                    .is_some_and(|ka| pvss_keyver(crs, &labels::key(dealer, holder), ka))
            })
        })
        .collect();
    if qual.len() < t + 1 {
        return Err(Error::QualTooSmall {
            qual: qual.len(),
            needed: t + 1,
        });
    }
    let kept = announcements
        .iter()
        .filter(|((d, h), _)| qual.binary_search(d).is_ok() && qual.binary_search(h).is_ok())
        .map(|(&k, v)| (k, v.clone()))
        .collect();
    Ok(PublicDirectory::assemble(t, qual.clone(), qual, kept))
}

/// Init with every participant honest: key generation, cross-verification,
/// renumbering. Returns the directory and each qualified participant's state.
pub fn drng_init(
    crs: &PvssPublicParams,
    participants: &[u64],
    t: usize,
    rng: &mut Rng,
) -> Result<(PublicDirectory, BTreeMap<u64, ParticipantState>)> {
    let mut announcements = BTreeMap::new();
    let mut states = BTreeMap::new();
    for &holder in participants {
        let (anns, keys) = init_keygen(crs, holder, participants, rng)?;
        for (dealer, ka) in anns {
            announcements.insert((dealer, holder), ka);
        }
        let mut st = ParticipantState::new(holder);
        st.my_keys = keys;
        states.insert(holder, st);
    }
    let dir = qualify(crs, participants, &announcements, check_threshold(t, participants.len())?)?;
    let states = states
        .into_iter()
        .filter(|(id, _)| dir.is_dealer(*id))
        .map(|(id, mut st)| {
            st.sync_directory(&dir);
            (id, st)
        })
        .collect();
    Ok((dir, states))
}

fn check_threshold(t: usize, n: usize) -> Result<usize> {
    if t >= n {
        return Err(Error::ThresholdTooLarge { t, n });
    }
    Ok(t)
}

/// Round 1: sample `s_i` and share it under this dealer's key tuple.
pub fn drng_randgen_round1(
    state: &mut ParticipantState,
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    rng: &mut Rng,
) -> Result<SharingTranscript> {
    state.expect_phase(Phase::Idle)?;
    let me = state.id_original;
    if state.id_qual.is_none() || !dir.is_dealer(me) {
        return Err(Error::NotQualified(me));
    }
    let pks = dir.dealer_keys(me).ok_or(Error::NotQualified(me))?;
    let s = rng.uniform_below(crs.params.p.value());
    let (tr, _) = pvss_share(crs, me, &pks, s, dir.t, &labels::share(state.epoch, me), rng)?;
    state.secret = Some(s);
    state.phase = Phase::Shared;
    Ok(tr)
}

/// Whether dealer `dealer`'s broadcast sharing verifies.
pub fn sharing_verifies(crs: &PvssPublicParams, dir: &PublicDirectory, epoch: u64, dealer: u64, tr: &SharingTranscript) -> bool {
    if tr.dealer != dealer {
        return false;
    }
    match dir.dealer_keys(dealer) {
        Some(pks) => pvss_sharever(crs, &pks, dir.t, &labels::share(epoch, dealer), tr),
        None => false,
    }
}

/// `QUAL'`: qualified dealers whose sharing verifies.
pub fn compute_qual_prime(
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    epoch: u64,
    received: &BTreeMap<u64, SharingTranscript>,
) -> BTreeSet<u64> {
    received
        .iter()
        .filter(|(&i, tr)| dir.is_dealer(i) && sharing_verifies(crs, dir, epoch, i, tr))
        .map(|(&i, _)| i)
        .collect()
}

/// Round 2: fix `QUAL'` from the received sharings, then (if this
/// participant is a holder in `QUAL'`) decrypt and prove its share of each.
pub fn drng_randgen_round2(
    state: &mut ParticipantState,
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    received: &BTreeMap<u64, SharingTranscript>,
    rng: &mut Rng,
) -> Result<BTreeMap<u64, DecryptionShare>> {
    state.expect_phase(Phase::Shared)?;
    let qual_prime = compute_qual_prime(crs, dir, state.epoch, received);
    round2_with_qual_prime(state, crs, dir, received, qual_prime, rng)
}

/// Round 2 with `QUAL'` already computed from the same broadcast data. Every
/// honest participant derives the same set, so a simulator may verify once.
pub fn round2_with_qual_prime(
    state: &mut ParticipantState,
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    received: &BTreeMap<u64, SharingTranscript>,
    qual_prime: BTreeSet<u64>,
    rng: &mut Rng,
) -> Result<BTreeMap<u64, DecryptionShare>> {
    state.expect_phase(Phase::Shared)?;
    let me = state.id_original;
    let mut out = BTreeMap::new();
    if let Some(pos) = dir.share_index(me).filter(|_| qual_prime.contains(&me)) {
        for &dealer in &qual_prime {
            let tr = &received[&dealer];
            let kp = state.my_keys.get(&dealer).ok_or(Error::NotQualified(dealer))?;
            let ct = &tr.ciphertexts[pos as usize - 1];
            let ds = pvss_dec(crs, me, kp, ct, &labels::dec(state.epoch, dealer, me), rng)?;
            out.insert(dealer, ds);
        }
    }
    state.qual_prime = qual_prime;
    state.phase = Phase::Revealed;
    Ok(out)
}

/// Whether holder `holder`'s reveal for dealer `dealer` verifies.
pub fn reveal_verifies(
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    epoch: u64,
    dealer: u64,
    holder: u64,
    tr: &SharingTranscript,
    ds: &DecryptionShare,
) -> bool {
    let Some(pos) = dir.share_index(holder) else {
        return false;
    };
    let (Some(ka), Some(ct)) = (dir.announcements.get(&(dealer, holder)), tr.ciphertexts.get(pos as usize - 1)) else {
        return false;
    };
    ds.holder == holder && pvss_decver(crs, &ka.pk_b, ct, &labels::dec(epoch, dealer, holder), ds)
}

/// Reconstructs a dealer's secret from the lowest `t + 1` holders of its
/// share set, by Shamir evaluation point.
fn reconstruct(
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    dealer: u64,
    set: &BTreeSet<u64>,
    reveals: &BTreeMap<(u64, u64), DecryptionShare>,
) -> Option<u64> {
    let shares: BTreeMap<u64, u64> = set
        .iter()
        .filter_map(|&j| Some((dir.share_index(j)?, reveals.get(&(dealer, j))?.share)))
        .collect();
    if shares.len() != set.len() {
        return None;
    }
    pvss_combine(crs, dir.t, &shares)
}

/// `sum s_i mod p`.
pub fn output_sum(secrets: impl IntoIterator<Item = u64>, p: Modulus) -> u64 {
    secrets.into_iter().fold(0, |acc, s| p.add(acc, s))
}

/// Assembles the epoch record from the broadcast messages. Deterministic, so
/// every honest participant obtains the same record.
pub fn drng_finalize(
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    epoch: u64,
    sharings: &BTreeMap<u64, SharingTranscript>,
    reveals: &BTreeMap<(u64, u64), DecryptionShare>,
) -> EpochRecord {
    let qual_prime = compute_qual_prime(crs, dir, epoch, sharings);
    finalize_with_qual_prime(crs, dir, epoch, sharings, reveals, qual_prime)
}

pub fn finalize_with_qual_prime(
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    epoch: u64,
    sharings: &BTreeMap<u64, SharingTranscript>,
    reveals: &BTreeMap<(u64, u64), DecryptionShare>,
    qual_prime: BTreeSet<u64>,
) -> EpochRecord {
    let p = crs.params.p;
    let mut kept_sharings = BTreeMap::new();
    let mut kept_reveals = BTreeMap::new();
    let mut share_sets = BTreeMap::new();
    let mut secrets = BTreeMap::new();
    for &i in &qual_prime {
        let tr = &sharings[&i];
        kept_sharings.insert(i, tr.clone());
        let set: BTreeSet<u64> = dir
            .holders
            .iter()
            .copied()
            .filter(|j| qual_prime.contains(j))
            .filter(|&j| {
                reveals
                    .get(&(i, j))
                    .is_some_and(|ds| reveal_verifies(crs, dir, epoch, i, j, tr, ds))
            })
            .collect();
        for &j in &set {
            kept_reveals.insert((i, j), reveals[&(i, j)].clone());
        }
        if let Some(s) = reconstruct(crs, dir, i, &set, &kept_reveals) {
            secrets.insert(i, s);
        }
        share_sets.insert(i, set);
    }
    let omega = (secrets.len() == qual_prime.len()).then(|| output_sum(secrets.values().copied(), p));
    EpochRecord {
        epoch,
        qual_prime,
        sharings: kept_sharings,
        reveals: kept_reveals,
        share_sets,
        secrets,
        omega,
        directory_digest: dir.digest(),
    }
}

/// Participant-side finalize: requires round 2 to have run.
pub fn participant_finalize(
    state: &mut ParticipantState,
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    sharings: &BTreeMap<u64, SharingTranscript>,
    reveals: &BTreeMap<(u64, u64), DecryptionShare>,
) -> Result<EpochRecord> {
    state.expect_phase(Phase::Revealed)?;
    let rec = finalize_with_qual_prime(crs, dir, state.epoch, sharings, reveals, state.qual_prime.clone());
    state.phase = Phase::Done;
    Ok(rec)
}

/// Closes the epoch with a record finalized from the same broadcast data
/// elsewhere (finalize is deterministic, so the result is identical).
pub fn adopt_record(state: &mut ParticipantState, rec: &EpochRecord) -> Result<()> {
    state.expect_phase(Phase::Revealed)?;
    if rec.epoch != state.epoch {
        return Err(Error::InvalidParams(alloc::format!(
            "record for epoch {} offered in epoch {}",
            rec.epoch, state.epoch
        )));
    }
    state.phase = Phase::Done;
    Ok(())
}

/// Structural checks on the directory plus every key proof.
pub fn verify_directory(crs: &PvssPublicParams, dir: &PublicDirectory) -> bool {
    directory_well_formed(dir)
        && dir
            .announcements
            .iter()
            .all(|(&(d, h), ka)| pvss_keyver(crs, &labels::key(d, h), ka))
}

fn directory_well_formed(dir: &PublicDirectory) -> bool {
    let ascending = |v: &[u64]| v.windows(2).all(|w| w[0] < w[1]);
    let nh = dir.holders.len();
    ascending(&dir.qual)
        && nh > dir.t
        && dir.qual.len() >= nh
        && dir.qual[..nh] == dir.holders[..]
        && dir.announcements.len() == dir.qual.len() * nh
        && dir
            .qual
            .iter()
            .all(|&d| dir.holders.iter().all(|&h| dir.announcements.contains_key(&(d, h))))
}

/// Public verification of one epoch against an already verified directory.
pub fn verify_record(crs: &PvssPublicParams, dir: &PublicDirectory, rec: &EpochRecord) -> bool {
    let p = crs.params.p;
    if rec.directory_digest != dir.digest() {
        return false;
    }
    if !rec.qual_prime.iter().all(|&i| dir.is_dealer(i))
        || !rec.sharings.keys().eq(rec.qual_prime.iter())
        || !rec.share_sets.keys().eq(rec.qual_prime.iter())
    {
        return false;
    }
    let expected_reveals = rec
        .share_sets
        .iter()
        .flat_map(|(&i, set)| set.iter().map(move |&j| (i, j)));
    if !rec.reveals.keys().copied().eq(expected_reveals) {
        return false;
    }
    for &i in &rec.qual_prime {
        let tr = &rec.sharings[&i];
        if !sharing_verifies(crs, dir, rec.epoch, i, tr) {
            return false;
        }
        let set = &rec.share_sets[&i];
        for &j in set {
            if !rec.qual_prime.contains(&j) || !reveal_verifies(crs, dir, rec.epoch, i, j, tr, &rec.reveals[&(i, j)]) {
                return false;
            }
        }
        let recomputed = reconstruct(crs, dir, i, set, &rec.reveals);
        if recomputed != rec.secrets.get(&i).copied() {
            return false;
        }
    }
    if rec.secrets.keys().any(|i| !rec.qual_prime.contains(i)) {
        return false;
    }
    let expect = (rec.secrets.len() == rec.qual_prime.len()).then(|| output_sum(rec.secrets.values().copied(), p));
    rec.omega == expect
}

/// Full public verification: the key proofs, the sharings of `QUAL'`, every
/// reveal in each share set, every reconstruction, and the output sum.
pub fn drng_ver(crs: &PvssPublicParams, dir: &PublicDirectory, rec: &EpochRecord) -> bool {
    verify_directory(crs, dir) && verify_record(crs, dir, rec)
}

/// Holder-side part of a join: a key for the new dealer.
pub fn join_keygen(crs: &PvssPublicParams, holder: u64, joiner: u64, rng: &mut Rng) -> Result<(KeyAnnouncement, PkeKeyPair)> {
    pvss_keygen(crs, &labels::key(joiner, holder), rng)
}

/// Adds dealer `joiner` with the key tuple announced by the holders. The
/// joiner's id must exceed every existing id, so renumbering leaves earlier
/// ids untouched. Fails, leaving `dir` as it was, if any holder's
/// announcement is missing or does not verify.
pub fn drng_join(
    crs: &PvssPublicParams,
    dir: &PublicDirectory,
    joiner: u64,
    announcements: &BTreeMap<u64, KeyAnnouncement>,
) -> Result<PublicDirectory> {
    if dir.qual.last().is_some_and(|&last| joiner <= last) {
        return Err(Error::InvalidParticipant(joiner));
    }
    if announcements.len() != dir.holders.len() {
        return Err(Error::NotQualified(joiner));
    }
    let mut merged = dir.announcements.clone();
    for &h in &dir.holders {
        let ka = announcements.get(&h).ok_or(Error::NotQualified(joiner))?;
        if !pvss_keyver(crs, &labels::key(joiner, h), ka) {
            return Err(Error::NotQualified(joiner));
        }
        merged.insert((joiner, h), ka.clone());
    }
    let mut qual = dir.qual.clone();
    qual.push(joiner);
    Ok(PublicDirectory::assemble(dir.t, qual, dir.holders.clone(), merged))
}

impl Encode for PublicDirectory {
    fn encode(&self, enc: &mut Encoder) {
        enc.u64(self.t as u64);
        enc.seq(&self.qual);
        enc.u64(self.holders.len() as u64);
        enc.put(&self.announcements);
    }
}

impl Decode for PublicDirectory {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        let t = dec.u64()? as usize;
        let qual: Vec<u64> = dec.seq(cx)?;
        let nh = dec.u64()?;
        if nh > qual.len() as u64 {
            return Err(DecodeError::Malformed("more holders than dealers"));
        }
        let holders = qual[..nh as usize].to_vec();
        let announcements = dec.get(cx)?;
        let dir = PublicDirectory::assemble(t, qual, holders, announcements);
        if !directory_well_formed(&dir) {
            return Err(DecodeError::Malformed("directory"));
        }
        Ok(dir)
    }
}

impl Encode for EpochRecord {
    fn encode(&self, enc: &mut Encoder) {
        enc.u64(self.epoch);
        enc.put(&self.qual_prime);
        enc.put(&self.sharings);
        enc.put(&self.reveals);
        enc.put(&self.share_sets);
        enc.put(&self.secrets);
        enc.option(&self.omega);
        enc.raw(&self.directory_digest);
    }
}

impl Decode for EpochRecord {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        let epoch = dec.u64()?;
        let qual_prime = dec.get(cx)?;
        let sharings = dec.get(cx)?;
        let reveals = dec.get(cx)?;
        let share_sets = dec.get(cx)?;
        let secrets: BTreeMap<u64, u64> = dec.get(cx)?;
        if secrets.values().any(|&s| s >= cx.p.value()) {
            return Err(DecodeError::OutOfRange("secret"));
        }
        let omega: Option<u64> = dec.option(cx)?;
        if omega.is_some_and(|w| w >= cx.p.value()) {
            return Err(DecodeError::OutOfRange("output"));
        }
        Ok(Self {
            epoch,
            qual_prime,
            sharings,
            reveals,
            share_sets,
            secrets,
            omega,
            directory_digest: dec.array()?,
        })
    }
}
