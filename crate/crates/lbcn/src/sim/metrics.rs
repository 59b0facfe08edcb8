//! Round, byte and compute accounting.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimPhase {
    Init,
    Share,
    Reveal,
}

impl SimPhase {
    pub const ALL: [SimPhase; 3] = [SimPhase::Init, SimPhase::Share, SimPhase::Reveal];

    pub fn name(self) -> &'static str {
        match self {
            SimPhase::Init => "init",
            SimPhase::Share => "share",
            SimPhase::Reveal => "reveal",
        }
    }
}

impl fmt::Display for SimPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metrics {
    pub epochs: u64,
    /// Broadcast rounds used by Init.
    pub init_rounds: usize,
    /// Broadcast rounds per epoch; the largest seen if epochs differ.
    pub rounds_per_epoch: usize,
    /// Payload bytes broadcast over the whole run.
    pub bytes_total: u64,
    pub bytes_by_phase: BTreeMap<SimPhase, u64>,
    pub delta_ms: u64,
    /// `rounds_per_epoch * delta_ms`.
    pub wallclock_model_ms: u64,
    /// Compute one participant spends per phase over the whole run: its own
    /// message generation (averaged over participants) plus checking every
    /// message it receives.
    pub compute_per_node: BTreeMap<SimPhase, Duration>,
}

impl Metrics {
    pub(crate) fn add_bytes(&mut self, phase: SimPhase, bytes: u64) {
        *self.bytes_by_phase.entry(phase).or_default() += bytes;
        self.bytes_total += bytes;
    }

    pub(crate) fn add_compute(&mut self, phase: SimPhase, d: Duration) {
        *self.compute_per_node.entry(phase).or_default() += d;
    }

    pub fn bytes(&self, phase: SimPhase) -> u64 {
        self.bytes_by_phase.get(&phase).copied().unwrap_or(0)
    }

    pub fn compute(&self, phase: SimPhase) -> Duration {
        self.compute_per_node.get(&phase).copied().unwrap_or_default()
    }

    pub fn compute_total(&self) -> Duration {
        self.compute_per_node.values().sum()
    }
}
