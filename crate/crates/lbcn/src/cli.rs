//! Command-line front end. Every command returns its exit code: 0 success,
//! 1 verification failure, 2 usage, configuration or decode error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lbcn_core::drng::{verify_directory, verify_record};
use lbcn_core::math::rng::expand_seed;
use lbcn_core::params::SystemParams;
use lbcn_core::pvss::pvss_setup;

use crate::config::ParamConfig;
use crate::sim::{measure_scaling, max_threshold, scaling_table, ExecMode, NetworkConfig, SimPhase, Simulation, Strategy};
use crate::stats::uniformity;
use crate::transcript::TranscriptFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "lbcn", version, about = "Lattice PVSS randomness beacon: simulate, verify, analyse")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run Init and a number of epochs, write the transcript file.
    Simulate(SimulateArgs),
    /// Publicly verify every epoch of a transcript file.
    Verify {
        file: PathBuf,
    },
    /// Uniformity tests on the outputs of a transcript file.
    Stats {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = StatsTest::All)]
        test: StatsTest,
    },
    /// Communication and compute scaling over committee sizes.
    Bench(BenchArgs),
    /// Noise-budget report for every parameter set.
    ParamsValidate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Init only: write a transcript file holding the directory and no epochs.
    KeygenCeremony(CommitteeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommitteeArgs {
    /// Parameter set name.
    #[arg(long, default_value = "toy")]
    pub params: String,
    /// Parameter file; the shipped sets are used when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Accept parameter sets that fail the noise budget.
    #[arg(long)]
    pub allow_invalid: bool,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Strategy of the corrupt participants.
    #[arg(long, default_value = "honest")]
    pub adversary: String,
    /// Comma-separated corrupt participant ids.
    #[arg(long, value_delimiter = ',')]
    pub corrupt: Vec<u64>,
    /// Model latency per round, in milliseconds.
    #[arg(long, default_value_t = crate::sim::DEFAULT_DELTA_MS)]
    pub delta_ms: u64,
    /// Worker threads; above 1 participants compute concurrently.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub committee: CommitteeArgs,
    #[arg(long, default_value_t = 1)]
    pub epochs: u64,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[arg(long, default_value = "toy")]
    pub params: String,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub allow_invalid: bool,
    /// Comma-separated committee sizes, ascending; t is the largest value
    /// below n/2.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub epochs: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Also write the table to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StatsTest {
    Gof,
    Serial,
    All,
}

struct Failure(i32, String);

type CmdResult = Result<i32, Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

fn load_config(path: Option<&Path>) -> Result<ParamConfig, Failure> {
    match path {
        Some(p) => ParamConfig::load(p).map_err(usage),
        None => Ok(ParamConfig::shipped()),
    }
}

/// Runs `f` on a pool of `threads` workers in parallel mode, or inline in
/// sequential mode when `threads <= 1`.
fn with_mode<T: Send>(threads: usize, f: impl FnOnce(ExecMode) -> T + Send) -> Result<T, Failure> {
    if threads <= 1 {
        return Ok(f(ExecMode::Sequential));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(usage)?;
    Ok(pool.install(|| f(ExecMode::Parallel)))
}

fn network_config(a: &CommitteeArgs) -> Result<(NetworkConfig, SystemParams), Failure> {
    let cfg = load_config(a.config.as_deref())?;
    let sp = cfg.resolve(&a.params, a.n, a.t, a.allow_invalid).map_err(usage)?;
    let strategy: Strategy = a.adversary.parse().map_err(usage)?;
    let net = NetworkConfig {
        delta_ms: a.delta_ms,
        ..NetworkConfig::honest(a.n, a.t, expand_seed(a.seed))
    }
    .with_adversary(a.corrupt.iter().copied(), strategy);
    net.validate().map_err(usage)?;
    Ok((net, sp))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// Runs Init and `epochs` epochs and returns the transcript bytes.
pub fn simulate_bytes(a: &CommitteeArgs, epochs: u64, out: &mut dyn Write) -> Result<Vec<u8>, String> {
    run_simulation(a, epochs, out).map_err(|Failure(_, msg)| msg)
}

fn run_simulation(a: &CommitteeArgs, epochs: u64, out: &mut dyn Write) -> Result<Vec<u8>, Failure> {
    let (net, sp) = network_config(a)?;
    let result = with_mode(a.threads, |mode| -> Result<_, crate::sim::SimError> {
        let mut sim = Simulation::start(&net, &sp, mode)?;
        let records = (0..epochs).map(|_| sim.run_epoch()).collect::<Result<Vec<_>, _>>()?;
        Ok((sim.crs().clone(), sim.directory().clone(), records, sim.metrics().clone()))
    })?;
    let (crs, dir, records, metrics) = result.map_err(usage)?;
    let _ = writeln!(out, "qualified: {:?}", dir.qual);
    for rec in &records {
        match rec.omega {
            Some(w) => {
                let _ = writeln!(out, "epoch {}: omega = {w}", rec.epoch);
            }
            None => {
                let _ = writeln!(out, "epoch {}: omega = none (some secret unrecoverable)", rec.epoch);
            }
        }
    }
    let _ = writeln!(
        out,
        "rounds/epoch {}  bytes {} (init {}, share {}, reveal {})  model time/epoch {} ms",
        metrics.rounds_per_epoch,
        metrics.bytes_total,
        metrics.bytes(SimPhase::Init),
        metrics.bytes(SimPhase::Share),
        metrics.bytes(SimPhase::Reveal),
        metrics.wallclock_model_ms,
    );
    Ok(TranscriptFile::new(crs.params, crs.setup_seed, dir, records).encode())
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> CmdResult {
    let bytes = run_simulation(&a.committee, a.epochs, out)?;
    write_file(&a.committee.out, &bytes)?;
    Ok(EXIT_OK)
}

fn cmd_keygen(a: &CommitteeArgs, out: &mut dyn Write) -> CmdResult {
    let bytes = run_simulation(a, 0, out)?;
    write_file(&a.out, &bytes)?;
    Ok(EXIT_OK)
}

/// Public verification of a transcript file, using only its contents.
pub fn verify_bytes(bytes: &[u8], out: &mut dyn Write) -> i32 {
    match verify_inner(bytes, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(out, "error: {msg}");
            code
        }
    }
}

fn verify_inner(bytes: &[u8], out: &mut dyn Write) -> CmdResult {
    let file = TranscriptFile::decode(bytes).map_err(|e| usage(format!("decode: {e}")))?;
    let crs = pvss_setup(&file.params, &file.setup_seed).map_err(|e| usage(format!("setup: {e}")))?;
    if !verify_directory(&crs, &file.directory) {
        let _ = writeln!(out, "directory: REJECTED");
        return Ok(EXIT_REJECTED);
    }
    let _ = writeln!(out, "directory: ok ({} qualified)", file.directory.qual.len());
    let mut rejected = Vec::new();
    for rec in &file.records {
        let ok = verify_record(&crs, &file.directory, rec);
        let _ = writeln!(out, "epoch {}: {}", rec.epoch, if ok { "ok" } else { "REJECTED" });
        if !ok {
            rejected.push(rec.epoch);
        }
    }
    if rejected.is_empty() {
        let _ = writeln!(out, "verified {} epochs", file.records.len());
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(out, "rejected epochs: {rejected:?}");
        Ok(EXIT_REJECTED)
    }
}

fn cmd_stats(file: &Path, test: StatsTest, out: &mut dyn Write) -> CmdResult {
    let bytes = read_file(file)?;
    let tf = TranscriptFile::decode(&bytes).map_err(|e| usage(format!("decode: {e}")))?;
    let values: Vec<u64> = tf.records.iter().filter_map(|r| r.omega).collect();
    let skipped = tf.records.len() - values.len();
    let report = uniformity(&values, tf.params.p.value()).map_err(usage)?;
    let _ = writeln!(out, "samples {}  (epochs without output: {skipped})", report.samples);
    if test != StatsTest::Serial {
        let g = report.gof;
        let _ = writeln!(out, "gof     chi2 {:.3}  dof {}  p-value {:.6e}", g.statistic, g.dof, g.p_value);
    }
    if test != StatsTest::Gof {
        let s = report.serial;
        let _ = writeln!(out, "serial  chi2 {:.3}  dof {}  p-value {:.6e}", s.statistic, s.dof, s.p_value);
    }
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = load_config(a.config.as_deref())?;
    let set = cfg.get(&a.params).map_err(usage)?;
    let &first = a.n_list.first().ok_or_else(|| usage("empty n list"))?;
    // validates the numeric set once; each row re-checks its own committee
    cfg.resolve(&a.params, first, max_threshold(first), a.allow_invalid).map_err(usage)?;
    let sp = set.system(first, max_threshold(first)).map_err(usage)?;
    let seed = expand_seed(a.seed);
    let rows = with_mode(a.threads, |mode| measure_scaling(&sp, &a.n_list, max_threshold, seed, a.epochs, mode))?
        .map_err(usage)?;
    let table = scaling_table(&rows);
    let _ = write!(out, "{table}");
    if let Some(path) = &a.out {
        write_file(path, table.as_bytes())?;
    }
    Ok(EXIT_OK)
}

fn cmd_params_validate(config: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let cfg = load_config(config)?;
    let reports = cfg.reports().map_err(usage)?;
    let _ = writeln!(out, "set\tp\tq\tnoise_bound\tbudget\tmargin\tpass");
    let mut all_pass = true;
    for (name, r) in &reports {
        let set = cfg.get(name).map_err(usage)?;
        let _ = writeln!(
            out,
            "{name}\t{}\t{}\t{:.2}\t{:.1}\t{:.3}\t{}",
            set.p,
            set.p * set.p,
            r.noise_bound,
            r.budget,
            r.margin,
            r.pass
        );
        all_pass &= r.pass;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_REJECTED })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Verify { file } => read_file(file).map(|bytes| verify_bytes(&bytes, out)),
        Command::Stats { file, test } => cmd_stats(file, *test, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::ParamsValidate { config } => cmd_params_validate(config.as_deref(), out),
        Command::KeygenCeremony(a) => cmd_keygen(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
