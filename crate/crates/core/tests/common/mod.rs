#![allow(dead_code)]

use lbcn_core::params::SystemParams;

pub fn toy(n: usize, t: usize) -> SystemParams {
    SystemParams::new(257, 4, 32, 1.5, 2.0, n, t, 128, 40).unwrap()
}

pub fn small(n: usize, t: usize) -> SystemParams {
    SystemParams::new(12289, 32, 32, 8.0, 4.0, n, t, 128, 64).unwrap()
}

pub fn stat31(n: usize, t: usize) -> SystemParams {
    SystemParams::new(31, 2, 4, 0.5, 1.0, n, t, 128, 40).unwrap()
}

use std::collections::{BTreeMap, BTreeSet};

use lbcn_core::drng::*;
use lbcn_core::math::rng::expand_seed;
use lbcn_core::math::Rng;
use lbcn_core::pvss::{DecryptionShare, PvssPublicParams, SharingTranscript};

pub struct Net {
    pub crs: PvssPublicParams,
    pub dir: PublicDirectory,
    pub states: BTreeMap<u64, ParticipantState>,
    pub rng: Rng,
}

pub fn network(sp: &SystemParams, n: u64, t: usize, seed: u64) -> Net {
    let crs = drng_setup(sp, &expand_seed(seed)).unwrap();
    let mut rng = Rng::from_u64(seed ^ 0x5eed);
    let ids: Vec<u64> = (1..=n).collect();
    let (dir, states) = drng_init(&crs, &ids, t, &mut rng).unwrap();
    Net { crs, dir, states, rng }
}

/// Broadcast messages of one epoch, before finalize.
pub struct Round {
    pub sharings: BTreeMap<u64, SharingTranscript>,
    pub reveals: BTreeMap<(u64, u64), DecryptionShare>,
}

impl Net {
    pub fn epoch(&self) -> u64 {
        self.states.values().next().unwrap().epoch
    }

    /// Runs both rounds with every participant honest except that reveals
    /// from `silent` are dropped.
    pub fn rounds(&mut self, silent: &BTreeSet<u64>) -> Round {
        let mut sharings = BTreeMap::new();
        for (&id, st) in self.states.iter_mut() {
            sharings.insert(id, drng_randgen_round1(st, &self.crs, &self.dir, &mut self.rng).unwrap());
        }
        let mut reveals = BTreeMap::new();
        for (&id, st) in self.states.iter_mut() {
            let out = drng_randgen_round2(st, &self.crs, &self.dir, &sharings, &mut self.rng).unwrap();
            if !silent.contains(&id) {
                for (dealer, ds) in out {
                    reveals.insert((dealer, id), ds);
                }
            }
        }
        Round { sharings, reveals }
    }

    /// Finalizes at every participant, checks they agree, and advances.
    pub fn finish(&mut self, round: &Round) -> EpochRecord {
        let mut rec: Option<EpochRecord> = None;
        for st in self.states.values_mut() {
            let r = participant_finalize(st, &self.crs, &self.dir, &round.sharings, &round.reveals).unwrap();
            if let Some(prev) = &rec {
                assert_eq!(prev, &r);
            }
            rec = Some(r);
            st.next_epoch().unwrap();
        }
        rec.unwrap()
    }

    pub fn run_epoch(&mut self) -> (EpochRecord, BTreeMap<u64, u64>) {
        let round = self.rounds(&BTreeSet::new());
        let secrets = self.states.iter().map(|(&i, st)| (i, st.secret().unwrap())).collect();
        (self.finish(&round), secrets)
    }
}

/// Lagrange interpolation at zero over Z_p, written independently of the
/// library: plain i128 arithmetic and Fermat inversion.
pub fn lagrange_oracle(points: &[(u64, u64)], p: u64) -> u64 {
    let pw = |mut b: i128, mut e: u64| {
        let mut r = 1i128;
        b = b.rem_euclid(p as i128);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as i128;
            }
            b = b * b % p as i128;
            e >>= 1;
        }
        r
    };
    let mut acc = 0i128;
    for (k, &(xk, yk)) in points.iter().enumerate() {
        let mut num = 1i128;
        let mut den = 1i128;
        for (m, &(xm, _)) in points.iter().enumerate() {
            if m != k {
                num = num * (-(xm as i128)).rem_euclid(p as i128) % p as i128;
                den = den * (xk as i128 - xm as i128).rem_euclid(p as i128) % p as i128;
            }
        }
        acc = (acc + yk as i128 * num % p as i128 * pw(den, p - 2)) % p as i128;
    }
    acc.rem_euclid(p as i128) as u64
}

/// Every size-`k` subset of `items`.
pub fn subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let n = items.len();
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|b| m >> b & 1 == 1).map(|b| items[b]).collect())
        .collect()
}
