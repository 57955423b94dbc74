//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for runtime or capacity failures, 2 for usage errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analyze::{total_variation, variance_sweep};
use crate::circuit::Flavor;
use crate::error::{Result, WalkError};
use crate::resources::{gate_count_empirical, gate_count_formula, qubit_count, resource_report, DurationTable, VolumeInputs};
use crate::simulate::{batch_experiment, run_exact, NoiseParams};
use crate::state::Distribution;
use crate::walk::{build_step, WalkSpec};

/// Probabilities at or below this are left out of emitted distributions.
const EMIT_FLOOR: f64 = 1e-15;

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Discrete-time quantum walks on N-cycles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a walk and emit its position distribution.
    Run(RunArgs),
    /// Report gate counts, qubit counts, execution time and quantum volume.
    Resources(ResourcesArgs),
    /// Emit the exact variance series against the theoretical quadratic law.
    Variance(VarianceArgs),
    /// Put both circuit flavors side by side.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Position qubits; the cycle has 2^n states.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long, default_value = "inverters")]
    pub flavor: Flavor,
    /// Starting position.
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    /// Starting coin value.
    #[arg(long, default_value_t = 0)]
    pub coin: u8,
}

impl WalkArgs {
    fn spec(&self) -> WalkSpec {
        WalkSpec::new(self.n, self.steps, self.flavor).starting_at(self.start).with_coin(self.coin)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Exact distribution from the statevector (default when --shots is absent).
    #[arg(long, conflicts_with = "shots")]
    pub exact: bool,
    /// Shots per batch.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = 1, requires = "shots")]
    pub batches: u64,
    #[arg(long, requires = "shots")]
    pub p_gate: Option<f64>,
    #[arg(long, requires = "shots")]
    pub p_meas: Option<f64>,
    #[arg(long, env = "WALK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResourcesArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long, default_value = "inverters")]
    pub flavor: Flavor,
    /// Duration table, one `gate_kind seconds` pair per line.
    #[arg(long)]
    pub durations: Option<PathBuf>,
    /// Average effective two-qubit error rate.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub machine_qubits: Option<usize>,
    /// Workspace size used for the quantum volume.
    #[arg(long)]
    pub workspace: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VarianceArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub max_steps: usize,
    #[arg(long, default_value = "inverters")]
    pub flavor: Flavor,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long)]
    pub p_gate: Option<f64>,
    #[arg(long)]
    pub p_meas: Option<f64>,
    #[arg(long, env = "WALK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// JSON document emitted by `run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub spec: WalkSpec,
    pub distribution: BTreeMap<usize, f64>,
    pub ci: BTreeMap<usize, f64>,
    pub meta: RunMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub seed: u64,
    pub shots: Option<u64>,
    pub batches: Option<u64>,
    pub flavor: Flavor,
    pub noise: Option<NoiseParams>,
    pub version: String,
}

impl RunOutput {
    pub fn to_distribution(&self) -> Distribution {
        let pairs: Vec<(usize, f64)> = self.distribution.iter().map(|(&k, &v)| (k, v)).collect();
        Distribution::from_pairs(self.spec.positions(), &pairs)
    }
}

fn noise_from(p_gate: Option<f64>, p_meas: Option<f64>) -> Result<Option<NoiseParams>> {
    match (p_gate, p_meas) {
        (None, None) => Ok(None),
        (g, m) => NoiseParams::new(g.unwrap_or(0.0), m.unwrap_or(0.0)).map(Some),
    }
}

pub fn cmd_run(args: &RunArgs) -> Result<RunOutput> {
    let spec = args.walk.spec();
    let meta = |shots, batches, noise| RunMeta {
        seed: args.seed,
        shots,
        batches,
        flavor: spec.flavor,
        noise,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    match args.shots {
        None => {
            let d = run_exact(&spec)?;
            let distribution: BTreeMap<usize, f64> = d.nonzero(EMIT_FLOOR).collect();
            let ci = distribution.keys().map(|&k| (k, 0.0)).collect();
            Ok(RunOutput { spec, distribution, ci, meta: meta(None, None, None) })
        }
        Some(shots) => {
            let noise = noise_from(args.p_gate, args.p_meas)?;
            let r = batch_experiment(&spec, args.batches, shots, noise.as_ref(), args.seed)?;
            let distribution: BTreeMap<usize, f64> = r.frequencies.nonzero(0.0).collect();
            let ci = distribution.keys().map(|&k| (k, r.half_widths[k])).collect();
            Ok(RunOutput { spec, distribution, ci, meta: meta(Some(shots), Some(args.batches), noise) })
        }
    }
}

pub fn run_output_csv(out: &RunOutput) -> String {
    let mut s = String::from("state,probability,ci_halfwidth\n");
    for (k, p) in &out.distribution {
        let _ = writeln!(s, "{k},{p},{}", out.ci.get(k).copied().unwrap_or(0.0));
    }
    s
}

/// Reads back the `state,probability,ci_halfwidth` CSV written by `run`.
pub fn parse_run_csv(text: &str, n_states: usize) -> Result<Distribution> {
    let mut lines = text.lines();
    if lines.next() != Some("state,probability,ci_halfwidth") {
        return Err(WalkError::Parameter("missing CSV header".into()));
    }
    let mut pairs = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let mut f = line.split(',');
        let (Some(k), Some(p)) = (f.next(), f.next()) else {
            return Err(WalkError::Parameter(format!("bad CSV row '{line}'")));
        };
        let k: usize = k.parse().map_err(|_| WalkError::Parameter(format!("bad state '{k}'")))?;
        let p: f64 = p.parse().map_err(|_| WalkError::Parameter(format!("bad probability '{p}'")))?;
        if k >= n_states {
            return Err(WalkError::Range(format!("state {k} outside {n_states} positions")));
        }
        pairs.push((k, p));
    }
    Ok(Distribution::from_pairs(n_states, &pairs))
}

pub fn cmd_resources(args: &ResourcesArgs) -> Result<serde_json::Value> {
    let durations = args.durations.as_ref().map(DurationTable::from_file).transpose()?;
    let volume = match (args.workspace, args.eps, args.machine_qubits) {
        (Some(workspace), Some(eps_eff), Some(machine_qubits)) => {
            Some(VolumeInputs { workspace, machine_qubits, eps_eff })
        }
        _ => None,
    };
    let report = resource_report(args.n, args.steps, args.flavor, durations.as_ref(), volume)?;
    Ok(serde_json::to_value(report).expect("report serialises"))
}

pub fn cmd_variance(args: &VarianceArgs) -> Result<String> {
    let series = variance_sweep(args.n, args.max_steps, args.flavor)?;
    let mut s = String::from("t,sigma2_sim,sigma2_theory\n");
    for (t, (sim, theory)) in series.simulated.iter().zip(&series.theoretical).enumerate() {
        let _ = writeln!(s, "{t},{sim},{theory}");
    }
    Ok(s)
}

pub fn cmd_compare(args: &CompareArgs) -> Result<serde_json::Value> {
    let noise = noise_from(args.p_gate, args.p_meas)?;
    let n_states = 1u64 << args.n;
    let mut flavors = serde_json::Map::new();
    let mut exact = Vec::new();
    let mut counts = Vec::new();
    for flavor in Flavor::ALL {
        let spec = WalkSpec::new(args.n, args.steps, flavor);
        let ideal = run_exact(&spec)?;
        let noisy_tv = match &noise {
            Some(p) => {
                let r = batch_experiment(&spec, 1, args.shots, Some(p), args.seed)?;
                Some(total_variation(&r.frequencies, &ideal))
            }
            None => None,
        };
        let formula = gate_count_formula(n_states, flavor)?;
        let empirical = gate_count_empirical(&build_step(args.n, flavor));
        counts.push(formula);
        flavors.insert(
            flavor.to_string(),
            json!({
                "formula_gate_count": formula,
                "empirical_gate_count": empirical.total,
                "empirical_by_kind": empirical.by_kind,
                "qubit_count": qubit_count(n_states, flavor)?,
                "noisy_tv": noisy_tv,
            }),
        );
        exact.push(ideal);
    }
    Ok(json!({
        "n": args.n,
        "n_states": n_states,
        "steps": args.steps,
        "flavors": flavors,
        "exact_tv_between_flavors": total_variation(&exact[0], &exact[1]),
        "gate_count_ratio": counts[1] as f64 / counts[0] as f64,
        "noise": noise,
        "shots": noise.map(|_| args.shots),
        "seed": args.seed,
    }))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

/// Runs a parsed command, writing its artifact to stdout or `--out`.
pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run(a) => {
            let out = cmd_run(a)?;
            let text = match a.format {
                Format::Json => pretty(&out),
                Format::Csv => run_output_csv(&out),
            };
            emit(&text, a.out.as_ref())
        }
        Command::Resources(a) => emit(&pretty(&cmd_resources(a)?), a.out.as_ref()),
        Command::Variance(a) => emit(&cmd_variance(a)?, a.out.as_ref()),
        Command::Compare(a) => emit(&pretty(&cmd_compare(a)?), a.out.as_ref()),
    }
}
