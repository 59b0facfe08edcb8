//! Deterministic lockstep simulation of Init followed by randomness epochs.
//!
//! Each participant draws from its own stream derived from the master seed,
//! its id, the epoch and the purpose, so a run is fixed by its seed whatever
//! the execution order, and corrupt parties draw exactly what they would
//! draw if honest. Every honest participant derives `QUAL'` and the epoch
//! record from the same broadcast data, so the simulator computes both once
//! and every participant adopts the result.

pub mod adversary;
pub mod bus;
pub mod metrics;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use lbcn_core::codec::{CodecContext, Decode, Encode};
use lbcn_core::drng::{
    adopt_record, compute_qual_prime, drng_randgen_round1, drng_setup, finalize_with_qual_prime, init_keygen, qualify,
    round2_with_qual_prime, EpochRecord, ParticipantState, PublicDirectory, FIRST_EPOCH,
};
use lbcn_core::math::Rng;
use lbcn_core::params::SystemParams;
use lbcn_core::pvss::{DecryptionShare, KeyAnnouncement, PvssPublicParams, SharingTranscript};
use rayon::prelude::*;

pub use adversary::{Strategy, UnknownStrategy};
pub use bus::{BroadcastBus, BusError, Message};
pub use metrics::{Metrics, SimPhase};

use crate::transcript::TranscriptFile;

pub const DEFAULT_DELTA_MS: u64 = 100;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Protocol(#[from] lbcn_core::Error),
    #[error(transparent)]
    Bus(#[from] BusError),
}

/// Participants are `1..=n`; `corrupted` follow `strategy`, the rest are
/// honest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkConfig {
    pub n: usize,
    pub t: usize,
    pub delta_ms: u64,
    pub corrupted: BTreeSet<u64>,
    pub strategy: Strategy,
    pub seed: [u8; 32],
}

impl NetworkConfig {
    pub fn honest(n: usize, t: usize, seed: [u8; 32]) -> Self {
        Self {
            n,
            t,
            delta_ms: DEFAULT_DELTA_MS,
            corrupted: BTreeSet::new(),
            strategy: Strategy::Honest,
            seed,
        }
    }

    pub fn with_adversary(mut self, corrupted: impl IntoIterator<Item = u64>, strategy: Strategy) -> Self {
        self.corrupted = corrupted.into_iter().collect();
        self.strategy = strategy;
        self
    }

    pub fn ids(&self) -> Vec<u64> {
        (1..=self.n as u64).collect()
    }

    /// Corrupt ids must name participants. More than `t` corruptions is
    /// allowed, for experiments past the threshold.
    pub fn validate(&self) -> Result<(), SimError> {
        if let Some(&bad) = self.corrupted.iter().find(|&&id| id == 0 || id > self.n as u64) {
            return Err(SimError::Config(format!("corrupt id {bad} is not in 1..={}", self.n)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecMode {
    /// Participants act one after another.
    #[default]
    Sequential,
    /// Participants compute their messages concurrently; messages still reach
    /// the bus in id order.
    Parallel,
}

fn run_all<I: Send, T: Send>(mode: ExecMode, items: Vec<I>, f: impl Fn(I) -> T + Sync) -> Vec<(T, Duration)> {
    let timed = |item: I| {
        let start = Instant::now();
        let out = f(item);
        (out, start.elapsed())
    };
    match mode {
        ExecMode::Sequential => items.into_iter().map(timed).collect(),
        ExecMode::Parallel => items.into_par_iter().map(timed).collect(),
    }
}

/// Average of per-participant durations.
fn per_node(durations: &[Duration]) -> Duration {
    let total: Duration = durations.iter().sum();
    total / durations.len().max(1) as u32
}

fn adversary_rng(seed: &[u8; 32], id: u64, epoch: u64) -> Rng {
    Rng::derive(seed, id, epoch, "adversary")
}

fn decode_sharings(msgs: &[Message], cx: &CodecContext) -> BTreeMap<u64, SharingTranscript> {
    msgs.iter()
        .filter_map(|m| Some((m.sender, SharingTranscript::from_bytes(&m.payload, cx).ok()?)))
        .collect()
}

/// `(dealer, holder) -> reveal`, taking the holder from the sender.
fn decode_reveals(msgs: &[Message], cx: &CodecContext) -> BTreeMap<(u64, u64), DecryptionShare> {
    let mut out = BTreeMap::new();
    for m in msgs {
        if let Ok(map) = BTreeMap::<u64, DecryptionShare>::from_bytes(&m.payload, cx) {
            out.extend(map.into_iter().map(|(d, ds)| ((d, m.sender), ds)));
        }
    }
    out
}

/// A running network: Init done, epochs run on demand.
pub struct Simulation {
    config: NetworkConfig,
    mode: ExecMode,
    crs: PvssPublicParams,
    directory: PublicDirectory,
    states: BTreeMap<u64, ParticipantState>,
    metrics: Metrics,
    next_epoch: u64,
}

impl Simulation {
    /// Setup and Init. `params` supplies the numeric set; `n` and `t` come
    /// from `config`.
    pub fn start(config: &NetworkConfig, params: &SystemParams, mode: ExecMode) -> Result<Self, SimError> {
        config.validate()?;
        let sp = params
            .with_committee(config.n, config.t)
            .map_err(|e| SimError::Config(e.to_string()))?;
        let mut setup_seed = [0u8; 32];
        Rng::derive(&config.seed, 0, 0, "setup").fill_bytes(&mut setup_seed);
        let crs = drng_setup(&sp, &setup_seed).map_err(|e| SimError::Config(e.to_string()))?;
        let cx = sp.codec_context();
        let ids = config.ids();
        let mut metrics = Metrics {
            delta_ms: config.delta_ms,
            ..Metrics::default()
        };

        let mut bus = BroadcastBus::new();
        let round = bus.open_round()?;
        let outs = run_all(mode, ids.clone(), |id| {
            init_keygen(&crs, id, &ids, &mut Rng::derive(&config.seed, id, 0, "init"))
        });
        let mut durations = Vec::new();
        let mut keys = BTreeMap::new();
        let mut corrupt_msgs = Vec::new();
        for (&id, (res, d)) in ids.iter().zip(outs) {
            let (anns, kps) = res?;
            durations.push(d);
            keys.insert(id, kps);
            if config.corrupted.contains(&id) {
                corrupt_msgs.push((id, anns));
            } else {
                bus.post(id, anns.to_bytes())?;
            }
        }
        for (id, anns) in corrupt_msgs {
            if let Some(msg) = adversary::init_message(config.strategy, anns, &mut adversary_rng(&config.seed, id, 0)) {
                bus.post(id, msg)?;
            }
        }
        bus.close_round()?;
        metrics.add_bytes(SimPhase::Init, bus.bytes_in_round(round));

        let start = Instant::now();
        let mut announcements = BTreeMap::new();
        for m in bus.delivered(round)? {
            if let Ok(anns) = BTreeMap::<u64, KeyAnnouncement>::from_bytes(&m.payload, &cx) {
                announcements.extend(anns.into_iter().map(|(d, ka)| ((d, m.sender), ka)));
            }
        }
        let directory = qualify(&crs, &ids, &announcements, config.t)?;
        metrics.add_compute(SimPhase::Init, per_node(&durations) + start.elapsed());
        metrics.init_rounds = bus.rounds();

        let states = directory
            .holders
            .iter()
            .map(|&id| {
                let mut st = ParticipantState::new(id);
                st.my_keys = keys.remove(&id).unwrap_or_default();
                st.sync_directory(&directory);
                (id, st)
            })
            .collect();
        Ok(Self {
            config: config.clone(),
            mode,
            crs,
            directory,
            states,
            metrics,
            next_epoch: FIRST_EPOCH,
        })
    }

    pub fn crs(&self) -> &PvssPublicParams {
        &self.crs
    }

    pub fn directory(&self) -> &PublicDirectory {
        &self.directory
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn states(&self) -> &BTreeMap<u64, ParticipantState> {
        &self.states
    }

    /// Runs both rounds of the next epoch and returns its record.
    pub fn run_epoch(&mut self) -> Result<EpochRecord, SimError> {
        let Self {
            config,
            mode,
            crs,
            directory: dir,
            states,
            metrics,
            next_epoch,
        } = self;
        let epoch = *next_epoch;
        let sp = &crs.params;
        let cx = sp.codec_context();
        let seed = &config.seed;
        let mut bus = BroadcastBus::new();

        let r1 = bus.open_round()?;
        let parties: Vec<(u64, &mut ParticipantState)> = states.iter_mut().map(|(&id, st)| (id, st)).collect();
        let outs = run_all(*mode, parties, |(id, st)| {
            let tr = drng_randgen_round1(st, crs, dir, &mut Rng::derive(seed, id, epoch, "round1"));
            (id, tr)
        });
        let mut durations = Vec::new();
        let mut honest_view = BTreeMap::new();
        let mut corrupt_msgs = Vec::new();
        for ((id, res), d) in outs {
            let tr = res?;
            durations.push(d);
            if config.corrupted.contains(&id) {
                corrupt_msgs.push((id, tr));
            } else {
                bus.post(id, tr.to_bytes())?;
                honest_view.insert(id, tr);
            }
        }
        for (id, tr) in corrupt_msgs {
            let mut rng = adversary_rng(seed, id, epoch);
            if let Some(msg) = adversary::share_message(config.strategy, epoch, tr, &honest_view, sp, &mut rng) {
                bus.post(id, msg)?;
            }
        }
        bus.close_round()?;
        metrics.add_bytes(SimPhase::Share, bus.bytes_in_round(r1));
        let start = Instant::now();
        let received = decode_sharings(bus.delivered(r1)?, &cx);
        let qual_prime = compute_qual_prime(crs, dir, epoch, &received);
        metrics.add_compute(SimPhase::Share, per_node(&durations) + start.elapsed());

        let r2 = bus.open_round()?;
        let parties: Vec<(u64, &mut ParticipantState)> = states.iter_mut().map(|(&id, st)| (id, st)).collect();
        let outs = run_all(*mode, parties, |(id, st)| {
            let mut rng = Rng::derive(seed, id, epoch, "round2");
            (id, round2_with_qual_prime(st, crs, dir, &received, qual_prime.clone(), &mut rng))
        });
        let mut durations = Vec::new();
        let mut corrupt_msgs = Vec::new();
        for ((id, res), d) in outs {
            let reveals = res?;
            durations.push(d);
            if config.corrupted.contains(&id) {
                corrupt_msgs.push((id, reveals));
            } else if !reveals.is_empty() {
                bus.post(id, reveals.to_bytes())?;
            }
        }
        for (id, reveals) in corrupt_msgs {
            let prospective = |mine: &BTreeMap<u64, DecryptionShare>| {
                let mut all = decode_reveals(bus.rushing_view().unwrap_or(&[]), &cx);
                all.extend(mine.iter().map(|(&d, ds)| ((d, id), ds.clone())));
                finalize_with_qual_prime(crs, dir, epoch, &received, &all, qual_prime.clone()).omega
            };
            if let Some(msg) = adversary::reveal_message(config.strategy, epoch, reveals, prospective, sp) {
                bus.post(id, msg)?;
            }
        }
        bus.close_round()?;
        metrics.add_bytes(SimPhase::Reveal, bus.bytes_in_round(r2));
        let start = Instant::now();
        let reveals = decode_reveals(bus.delivered(r2)?, &cx);
        let rec = finalize_with_qual_prime(crs, dir, epoch, &received, &reveals, qual_prime);
        metrics.add_compute(SimPhase::Reveal, per_node(&durations) + start.elapsed());

        for st in states.values_mut() {
            adopt_record(st, &rec)?;
            st.next_epoch()?;
        }
        metrics.epochs += 1;
        metrics.rounds_per_epoch = metrics.rounds_per_epoch.max(bus.rounds());
        metrics.wallclock_model_ms = metrics.rounds_per_epoch as u64 * metrics.delta_ms;
        *next_epoch += 1;
        Ok(rec)
    }
}

/// Result of a complete run.
#[derive(Clone, Debug)]
pub struct SimOutcome {
    pub crs: PvssPublicParams,
    pub directory: PublicDirectory,
    pub records: Vec<EpochRecord>,
    pub metrics: Metrics,
}

impl SimOutcome {
    pub fn transcript(&self) -> TranscriptFile {
        TranscriptFile::new(
            self.crs.params.clone(),
            self.crs.setup_seed,
            self.directory.clone(),
            self.records.clone(),
        )
    }
}

/// Init, then `epochs` epochs, single-threaded.
pub fn sim_run(config: &NetworkConfig, params: &SystemParams, epochs: u64) -> Result<SimOutcome, SimError> {
    sim_run_mode(config, params, epochs, ExecMode::Sequential)
}

pub fn sim_run_mode(
    config: &NetworkConfig,
    params: &SystemParams,
    epochs: u64,
    mode: ExecMode,
) -> Result<SimOutcome, SimError> {
    let mut sim = Simulation::start(config, params, mode)?;
    let records = (0..epochs).map(|_| sim.run_epoch()).collect::<Result<Vec<_>, _>>()?;
    Ok(SimOutcome {
        crs: sim.crs,
        directory: sim.directory,
        records,
        metrics: sim.metrics,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub t: usize,
    pub metrics: Metrics,
    /// `bytes(n) / bytes(n / 2)` when `n / 2` was also measured.
    pub ratio: Option<f64>,
}

/// Runs Init plus `epochs` honest epochs for each `n` and reports the
/// broadcast volume.
pub fn measure_scaling(
    params: &SystemParams,
    n_list: &[usize],
    t_rule: impl Fn(usize) -> usize,
    seed: [u8; 32],
    epochs: u64,
    mode: ExecMode,
) -> Result<Vec<ScalingRow>, SimError> {
    if !n_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(SimError::Config("n list must be strictly ascending".into()));
    }
    let mut rows: Vec<ScalingRow> = Vec::new();
    for &n in n_list {
        let t = t_rule(n);
        let out = sim_run_mode(&NetworkConfig::honest(n, t, seed), params, epochs, mode)?;
        let ratio = rows
            .iter()
            .find(|r| n % 2 == 0 && r.n == n / 2)
            .map(|r| out.metrics.bytes_total as f64 / r.metrics.bytes_total as f64);
        rows.push(ScalingRow {
            n,
            t,
            metrics: out.metrics,
            ratio,
        });
    }
    Ok(rows)
}

/// Largest threshold below `n / 2`.
pub fn max_threshold(n: usize) -> usize {
    n.saturating_sub(1) / 2
}

/// Tab-separated table with a header line.
pub fn scaling_table(rows: &[ScalingRow]) -> String {
    let mut out = String::from(
        "n\tt\trounds\tbytes_init\tbytes_share\tbytes_reveal\tbytes_total\tratio_vs_half_n\tcompute_ms_per_node\n",
    );
    for r in rows {
        let m = &r.metrics;
        let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.3}"));
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
            r.n,
            r.t,
            m.rounds_per_epoch,
            m.bytes(SimPhase::Init),
            m.bytes(SimPhase::Share),
            m.bytes(SimPhase::Reveal),
            m.bytes_total,
            ratio,
            m.compute_total().as_secs_f64() * 1e3,
        );
    }
    out
}
