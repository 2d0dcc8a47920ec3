//! The `escapeflow` experiment driver.
//!
//! Each run writes `config.json` (the canonical configuration and its
//! digest) next to its outputs, so `replay` can rebuild everything from the
//! directory alone and compare the bytes.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{
    divergence_probe, equivalence_check, escape_report, escape_run, fixation_stats_iid,
    iid_control_probe, light_cone_check, Verdict,
};
use crate::closed_form::run_closed_form;
use crate::dynamics::{Process, SinkLinks, StopRule};
use crate::error::{Error, Result};
use crate::field::ResourceField;
use crate::forest::{
    build_msf, build_scaled_msf, cycle_rule_violations, layer_embed, minimum_spanning_forest,
    orient_components, sample_weights, stats, verify_property_ii, Forest, ForestJson, RootPolicy,
    ShiftMode,
};
use crate::init::{initial_field, IidDistribution, InitSpec, ValueMode};
use crate::lattice::{LatticeSpec, Topology, Vertex};
use crate::output::{digest, write_peel_csv, write_pgm, write_trace_csv};
use crate::quantity::Quantity;
use crate::seeds::{self, streams};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "ESCAPEFLOW_THREADS";

const CONFIG_FILE: &str = "config.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Planar minimum spanning tree on the lattice itself.
    Msf2d,
    /// One planar minimum spanning tree per layer (dimension >= 3).
    Layered,
    /// Planar tree on the half-size box, scaled by 2 and shifted.
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Msf,
    Closedform,
    Lightcone,
    Conservation,
    Fixation,
    Escape,
    Divergence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub construction: Construction,
    pub root_policy: RootPolicy,
    pub shift: ShiftMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Task {
    Simulate,
    Forest,
    ClosedForm,
    Verify { suite: Suite, seeds: u64 },
}

/// Everything that determines a run's outputs. The output directory is
/// deliberately not part of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub task: Task,
    pub lattice: LatticeSpec,
    pub init: InitSpec,
    pub forest: ForestConfig,
    pub seed: u64,
    pub budget: u64,
    pub stop: StopRule,
    /// Write a PGM snapshot every this many steps; 0 disables snapshots.
    pub snapshot_every: u64,
    pub value_mode: ValueMode,
}

impl RunConfig {
    pub fn digest(&self) -> Result<String> {
        digest(self)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "escapeflow",
    version,
    about = "Richest-neighbour clustering on finite lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the raw dynamics and write a trace.
    Simulate(RunArgs),
    /// Build, verify and serialize a forest.
    Forest(RunArgs),
    /// Peel the forest and run parent forwarding from descendant counts.
    ClosedForm(RunArgs),
    /// Run a named verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Number of consecutive seeds starting at --seed.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Re-run a saved run directory and compare outputs byte for byte.
    Replay {
        dir: PathBuf,
        /// Where to write the re-run (default: a fresh temporary directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Side length of a cubic lattice.
    #[arg(long, required_unless_present = "sides")]
    size: Option<usize>,
    /// Explicit side lengths, comma separated (overrides --size and --dim).
    #[arg(long, value_delimiter = ',')]
    sides: Option<Vec<usize>>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value = "box-sink")]
    topology: String,
    /// descendants | iid-uniform | iid-exponential | iid-integer | file
    #[arg(long, default_value = "descendants")]
    init: String,
    #[arg(long)]
    low: Option<f64>,
    #[arg(long)]
    high: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
    /// CSV input for --init file.
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "scaled")]
    construction: Construction,
    #[arg(long, default_value = "nearest-boundary")]
    root_policy: String,
    /// `random` or a comma-separated 0/1 vector.
    #[arg(long, default_value = "random")]
    shift: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of steps (default: 10 x the largest side).
    #[arg(long)]
    budget: Option<u64>,
    /// fixation | empty | budget (default: empty with a sink, else fixation).
    #[arg(long)]
    stop: Option<String>,
    #[arg(long, default_value_t = 0)]
    snapshot_every: u64,
    /// exact-integer | float (default follows --init).
    #[arg(long)]
    value_mode: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn to_config(&self, task: Task) -> Result<RunConfig> {
        let topology: Topology = self.topology.parse()?;
        let sides = match (&self.sides, self.size) {
            (Some(s), _) => s.clone(),
            (None, Some(l)) => vec![l; self.dim],
            (None, None) => {
                return Err(Error::Config("one of --size or --sides is required".into()))
            }
        };
        let lattice =
            LatticeSpec::new(sides, topology).map_err(|e| Error::Config(e.to_string()))?;
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| Error::Config(format!("--init {} needs --{flag}", self.init)))
        };
        let init = match self.init.as_str() {
            "descendants" => InitSpec::Descendants,
            "iid-uniform" => InitSpec::Iid(IidDistribution::Uniform {
                low: self.low.unwrap_or(0.0),
                high: self.high.unwrap_or(1.0),
            }),
            "iid-exponential" => InitSpec::Iid(IidDistribution::Exponential {
                rate: self.rate.unwrap_or(1.0),
            }),
            "iid-integer" => {
                let low = need(self.low, "low")?;
                let high = need(self.high, "high")?;
                if low.fract() != 0.0 || high.fract() != 0.0 {
                    return Err(Error::Config(
                        "--low/--high must be integers for iid-integer".into(),
                    ));
                }
                InitSpec::Iid(IidDistribution::Integer {
                    low: low as i64,
                    high: high as i64,
                })
            }
            "file" => InitSpec::File {
                path: self
                    .path
                    .clone()
                    .ok_or_else(|| Error::Config("--init file needs --path".into()))?,
            },
            other => return Err(Error::Config(format!("unknown init kind `{other}`"))),
        };
        if let InitSpec::Iid(d) = &init {
            d.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        let value_mode = match self.value_mode.as_deref() {
            Some("exact-integer") => ValueMode::ExactInteger,
            Some("float") => ValueMode::Float,
            Some(other) => return Err(Error::Config(format!("unknown value mode `{other}`"))),
            None => match init {
                InitSpec::Iid(
                    IidDistribution::Uniform { .. } | IidDistribution::Exponential { .. },
                ) => ValueMode::Float,
                _ => ValueMode::ExactInteger,
            },
        };
        let shift = match self.shift.as_str() {
            "random" => ShiftMode::Random,
            s => ShiftMode::Fixed(
                s.split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Config(format!("bad --shift `{s}`: {e}")))?,
            ),
        };
        let stop = match &self.stop {
            Some(s) => s.parse()?,
            None if topology == Topology::BoxSink => StopRule::Empty,
            None => StopRule::Fixation,
        };
        let largest = *lattice.sides().iter().max().expect("non-empty") as u64;
        Ok(RunConfig {
            task,
            lattice,
            init,
            forest: ForestConfig {
                construction: self.construction,
                root_policy: self.root_policy.parse()?,
                shift,
            },
            seed: self.seed,
            budget: self.budget.unwrap_or(10 * largest),
            stop,
            snapshot_every: self.snapshot_every,
            value_mode,
        })
    }
}

/// Parses `argv` (program name first), runs, and returns the exit code:
/// 0 success, 1 verification failure, 2 usage or configuration error.
pub fn main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match dispatch(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("escapeflow: {e}");
            2
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // fails harmlessly if a pool was already installed in this process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn dispatch(command: Command) -> Result<bool> {
    let (cfg, out) = match command {
        Command::Simulate(a) => (a.to_config(Task::Simulate)?, a.out),
        Command::Forest(a) => (a.to_config(Task::Forest)?, a.out),
        Command::ClosedForm(a) => (a.to_config(Task::ClosedForm)?, a.out),
        Command::Verify { suite, seeds, run } => {
            (run.to_config(Task::Verify { suite, seeds })?, run.out)
        }
        Command::Replay { dir, out } => {
            let out = match out {
                Some(o) => o,
                None => {
                    std::env::temp_dir().join(format!("escapeflow-replay-{}", std::process::id()))
                }
            };
            let report = replay(&dir, &out)?;
            for diff in &report.differing {
                eprintln!("differs: {diff}");
            }
            emit(&serde_json::to_value(&report)?)?;
            return Ok(report.identical);
        }
    };
    let run = execute(&cfg, out.as_deref())?;
    emit(&run.report)?;
    Ok(run.passed)
}

/// What a run reports back: the summary printed by the CLI, and whether
/// the verification it performs passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub passed: bool,
    pub report: serde_json::Value,
}

/// Runs a configuration, writing outputs under `out` when given.
pub fn execute(cfg: &RunConfig, out: Option<&Path>) -> Result<Execution> {
    let digest = cfg.digest()?;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let doc = json!({ "config_digest": digest, "config": cfg });
        fs::write(
            dir.join(CONFIG_FILE),
            serde_json::to_string_pretty(&doc)? + "\n",
        )?;
    }
    match cfg.task {
        Task::Simulate => match cfg.value_mode {
            ValueMode::ExactInteger => simulate::<BigUint>(cfg, &digest, out),
            ValueMode::Float => simulate::<f64>(cfg, &digest, out),
        },
        Task::Forest => forest_task(cfg, &digest, out),
        Task::ClosedForm => closed_form_task(cfg, &digest, out),
        Task::Verify { suite, seeds } => verify_task(cfg, suite, seeds, &digest, out),
    }
}

/// The forest a configuration asks for, on `cfg.lattice`.
pub fn build_forest(cfg: &RunConfig) -> Result<(Forest, Option<Vertex>)> {
    let spec = &cfg.lattice;
    let weights_seed = seeds::substream(cfg.seed, streams::WEIGHTS);
    match cfg.forest.construction {
        Construction::Scaled => {
            if spec.sides().iter().any(|l| l % 2 == 1 || *l < 4) {
                return Err(Error::Config(
                    "scaled forests need even sides of at least 4".into(),
                ));
            }
            let base = LatticeSpec::new(
                spec.sides().iter().map(|l| l / 2).collect::<Vec<_>>(),
                Topology::BoxZero,
            )?;
            let (f, w) = build_scaled_msf(
                &base,
                cfg.seed,
                cfg.forest.root_policy,
                &cfg.forest.shift,
                spec.topology(),
            )?;
            Ok((f, Some(w)))
        }
        Construction::Msf2d => {
            if spec.dim() != 2 {
                return Err(Error::Config(
                    "msf2d needs a two-dimensional lattice".into(),
                ));
            }
            let t = build_msf(spec, &sample_weights(spec, weights_seed))?;
            Ok((orient_components(&t, cfg.forest.root_policy), None))
        }
        Construction::Layered => {
            let t = layer_embed(spec, weights_seed).map_err(|e| Error::Config(e.to_string()))?;
            Ok((orient_components(&t, cfg.forest.root_policy), None))
        }
    }
}

/// Prints one line to stdout; a closed pipe is not an error.
fn emit(value: &serde_json::Value) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string(value)?) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn write_json<T: Serialize>(dir: Option<&Path>, name: &str, value: &T) -> Result<()> {
    if let Some(dir) = dir {
        fs::write(dir.join(name), serde_json::to_string_pretty(value)? + "\n")?;
    }
    Ok(())
}

fn simulate<Q: Quantity>(cfg: &RunConfig, digest: &str, out: Option<&Path>) -> Result<Execution> {
    let forest = match cfg.init {
        InitSpec::Descendants => Some(build_forest(cfg)?.0),
        _ => None,
    };
    let initial: ResourceField<Q> = initial_field(
        &cfg.lattice,
        &cfg.init,
        forest.as_ref(),
        seeds::substream(cfg.seed, streams::INIT),
    )
    .map_err(|e| match e {
        Error::Io(_) => e,
        other => Error::Config(other.to_string()),
    })?;
    let mut process = Process::new(seeds::substream(cfg.seed, streams::TIES));
    if let (Some(f), Topology::BoxSink) = (&forest, cfg.lattice.topology()) {
        process = process.with_sinks(SinkLinks::roots_of(f));
    }
    let scale = initial.max_value().to_f64();
    let snap_dir = out.map(|d| d.join("snapshots"));
    if let (Some(dir), true) = (&snap_dir, cfg.snapshot_every > 0) {
        fs::create_dir_all(dir)?;
    }
    let trace = process.run(initial.clone(), cfg.budget, cfg.stop, |field| {
        if let (Some(dir), true) = (&snap_dir, cfg.snapshot_every > 0) {
            if field.step() % cfg.snapshot_every == 0 {
                let file = fs::File::create(dir.join(format!("step_{:06}.pgm", field.step())))?;
                write_pgm(std::io::BufWriter::new(file), digest, field, scale)?;
            }
        }
        Ok(())
    })?;
    let conserved = initial.grand_total()? == trace.final_field.grand_total()?;
    let interior = cfg.lattice.interior_indices();
    let report = json!({
        "config_digest": digest,
        "outcome": trace.outcome,
        "steps": trace.records.len() - 1,
        "ties": trace.total_ties(),
        "initial_total": initial.grand_total()?.to_string(),
        "final_total": trace.final_field.total()?.to_string(),
        "sink_total": trace.final_field.sink().to_string(),
        "conserved": conserved,
        "initial_interior_mean": initial.mean_over(&interior),
        "final_interior_mean": trace.final_field.mean_over(&interior),
    });
    if let Some(dir) = out {
        let file = fs::File::create(dir.join("trace.csv"))?;
        write_trace_csv(std::io::BufWriter::new(file), digest, &trace.records)?;
    }
    write_json(out, "report.json", &report)?;
    Ok(Execution {
        passed: true,
        report,
    })
}

fn forest_task(cfg: &RunConfig, digest: &str, out: Option<&Path>) -> Result<Execution> {
    let (f, shift) = build_forest(cfg)?;
    let ii = verify_property_ii(&f);
    let s = stats(&f);
    let mut doc = serde_json::to_value(ForestJson::from_forest(&f))?;
    doc["config_digest"] = json!(digest);
    write_json(out, "forest.json", &doc)?;
    let expects_ii = cfg.forest.construction == Construction::Scaled;
    let report = json!({
        "config_digest": digest,
        "members": f.member_count(),
        "roots": f.roots().len(),
        "max_height": s.max_height(),
        "shift": shift,
        "property_ii": ii.holds,
        "property_ii_violations": ii.violations.len(),
        "verdict": Verdict::from_bool(ii.holds || !expects_ii),
    });
    write_json(out, "verify.json", &report)?;
    Ok(Execution {
        passed: ii.holds || !expects_ii,
        report,
    })
}

fn closed_form_task(cfg: &RunConfig, digest: &str, out: Option<&Path>) -> Result<Execution> {
    let (f, _) = build_forest(cfg)?;
    let c0: ResourceField<BigUint> = crate::init::descendant_init(&f, &cfg.lattice)?;
    let initial_total = c0.grand_total()?;
    let (records, last) = run_closed_form(c0, &f)?;
    if let Some(dir) = out {
        let file = fs::File::create(dir.join("peel.csv"))?;
        write_peel_csv(std::io::BufWriter::new(file), digest, &records)?;
    }
    let flux = records.iter().all(|r| r.flux_stab);
    let drained = last.is_empty() && *last.sink() == initial_total;
    let report = json!({
        "config_digest": digest,
        "extinction_step": records.last().map(|r| r.step),
        "initial_total": initial_total.to_string(),
        "sink_total": last.sink().to_string(),
        "flux_stab": flux,
        "drained": drained,
        "verdict": Verdict::from_bool(flux && drained),
    });
    write_json(out, "report.json", &report)?;
    Ok(Execution {
        passed: flux && drained,
        report,
    })
}

fn seed_list(cfg: &RunConfig, count: u64) -> Vec<u64> {
    (0..count.max(1)).map(|i| cfg.seed + i).collect()
}

fn verify_task(
    cfg: &RunConfig,
    suite: Suite,
    count: u64,
    digest: &str,
    out: Option<&Path>,
) -> Result<Execution> {
    let seeds = seed_list(cfg, count);
    let side = cfg.lattice.sides()[0];
    let (ok, details) = match suite {
        Suite::Msf => {
            let spec = cfg.lattice.with_topology(Topology::BoxZero);
            let mut bad = 0;
            for &s in &seeds {
                let w = sample_weights(&spec, seeds::substream(s, streams::WEIGHTS));
                let kept = minimum_spanning_forest(spec.len(), w.edges(), w.weights())?;
                if kept.len() + 1 != spec.len()
                    || !cycle_rule_violations(spec.len(), w.edges(), w.weights(), &kept).is_empty()
                {
                    bad += 1;
                }
            }
            (
                bad == 0,
                json!({ "instances": seeds.len(), "failures": bad }),
            )
        }
        Suite::Closedform | Suite::Escape => {
            let reports = seeds
                .par_iter()
                .map(|&s| {
                    let mut c = cfg.clone();
                    c.seed = s;
                    c.forest.construction = Construction::Scaled;
                    c.lattice = c.lattice.with_topology(Topology::BoxSink);
                    let (f, _) = build_forest(&c)?;
                    let tie_seed = seeds::substream(s, streams::TIES);
                    Ok(if suite == Suite::Closedform {
                        serde_json::to_value(equivalence_check::<BigUint>(
                            &f, cfg.budget, tie_seed,
                        )?)?
                    } else {
                        serde_json::to_value(escape_run::<BigUint>(&f, cfg.budget, tie_seed)?)?
                    })
                })
                .collect::<Result<Vec<serde_json::Value>>>()?;
            if suite == Suite::Closedform {
                let ok = reports.iter().all(|r| r["verdict"] == "pass");
                (ok, json!({ "runs": reports }))
            } else {
                let summaries = reports
                    .into_iter()
                    .map(serde_json::from_value)
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                let agg = escape_report(&summaries);
                let ok = agg.truncated == 0 && agg.all_extinct && agg.all_in_sink && agg.strict_gap;
                (ok, serde_json::to_value(agg)?)
            }
        }
        Suite::Lightcone => {
            let r = light_cone_check(side, 4, 2, 3, cfg.seed)?;
            (r.verdict.is_pass(), serde_json::to_value(r)?)
        }
        Suite::Conservation => {
            let mut bad = 0;
            for &s in &seeds {
                for topo in [Topology::Torus, Topology::BoxZero] {
                    let spec = cfg.lattice.with_topology(topo);
                    let dist = IidDistribution::Integer { low: 0, high: 9 };
                    let c0: ResourceField<BigUint> =
                        crate::init::iid_init(&spec, &dist, seeds::substream(s, streams::INIT))?;
                    let total = c0.grand_total()?;
                    let trace = Process::new(seeds::substream(s, streams::TIES)).run(
                        c0,
                        cfg.budget,
                        StopRule::Fixation,
                        |_| Ok(()),
                    )?;
                    if trace
                        .records
                        .iter()
                        .any(|r| r.total.clone() + &r.sink != total)
                    {
                        bad += 1;
                    }
                }
            }
            (
                bad == 0,
                json!({ "runs": 2 * seeds.len(), "failures": bad }),
            )
        }
        Suite::Fixation => {
            let spec = cfg.lattice.with_topology(Topology::Torus);
            let dist = IidDistribution::Uniform {
                low: 0.0,
                high: 1.0,
            };
            let summary = fixation_stats_iid(&spec, &dist, &seeds, cfg.budget)?;
            (
                summary.fixed == summary.runs,
                serde_json::to_value(summary)?,
            )
        }
        Suite::Divergence => {
            let sides = [side / 4, side / 2, side];
            let series = divergence_probe(&sides, &seeds, cfg.forest.root_policy)?;
            let control = iid_control_probe(
                &sides,
                &seeds,
                &IidDistribution::Uniform {
                    low: 0.0,
                    high: 1.0,
                },
            )?;
            let ok = series.strictly_increasing() && control.relative_spread() <= 0.05;
            let medians = |s: &crate::analysis::DivergenceSeries| {
                s.points
                    .iter()
                    .map(|p| (p.side, p.median))
                    .collect::<Vec<_>>()
            };
            (
                ok,
                json!({
                    "descendants": medians(&series),
                    "control": medians(&control),
                    "increasing": series.strictly_increasing(),
                    "control_spread": control.relative_spread(),
                }),
            )
        }
    };
    let verdict = json!({
        "config_digest": digest,
        "suite": suite,
        "verdict": Verdict::from_bool(ok),
        "details": details,
    });
    write_json(out, "verdict.json", &verdict)?;
    Ok(Execution {
        passed: ok,
        report: verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub config_digest: String,
    pub compared: Vec<String>,
    pub differing: Vec<String>,
    pub identical: bool,
}

/// Re-runs the configuration stored in `dir` into `out` and compares every
/// file of `dir` with its counterpart.
pub fn replay(dir: &Path, out: &Path) -> Result<ReplayReport> {
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(dir.join(CONFIG_FILE))?)?;
    let cfg: RunConfig = serde_json::from_value(doc["config"].clone())
        .map_err(|e| Error::Config(format!("{}: {e}", dir.join(CONFIG_FILE).display())))?;
    let stored = doc["config_digest"]
        .as_str()
        .unwrap_or_default()
        .to_string();
    let digest = cfg.digest()?;
    if stored != digest {
        return Err(Error::Config(format!(
            "stored digest {stored} does not match config ({digest})"
        )));
    }
    if out.exists() {
        fs::remove_dir_all(out)?;
    }
    execute(&cfg, Some(out))?;
    let mut compared = Vec::new();
    let mut differing = Vec::new();
    for rel in list_files(dir)? {
        let a = fs::read(dir.join(&rel))?;
        let b = fs::read(out.join(&rel)).ok();
        if b.as_deref() != Some(&a[..]) {
            differing.push(rel.clone());
        }
        compared.push(rel);
    }
    for rel in list_files(out)? {
        if !compared.contains(&rel) {
            differing.push(rel);
        }
    }
    Ok(ReplayReport {
        config_digest: digest,
        identical: differing.is_empty(),
        compared,
        differing,
    })
}

fn list_files(root: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d)? {
            let p = entry?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).expect("under root");
                out.push(rel.to_string_lossy().replace('\\', "/"));
            }
        }
    }
    out.sort();
    Ok(out)
}
