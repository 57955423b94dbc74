//! Gate counts, qubit counts, execution-time estimates and quantum volume.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Flavor};
use crate::error::{Result, WalkError};
use crate::walk::{build_step, WalkSpec};

/// `log₂ N`, rejecting anything that is not a power of two ≥ 2.
pub fn log2_states(n_states: u64) -> Result<u32> {
    if n_states < 2 || !n_states.is_power_of_two() {
        return Err(WalkError::Parameter(format!("N = {n_states} is not a power of two ≥ 2")));
    }
    Ok(n_states.trailing_zeros())
}

/// Closed-form per-step gate count.
///
/// Inverters: `2·Σ_{c=3}^{log N}(2c − 1) + 2·log N + 5`.
/// Rotations: `Σ_{j=3}^{log N}[2^{2−j+log N} + 10·Σ_{c=j}^{log N} 2^{c−j}] + 2·log N + 5`.
/// Both reduce to `2·log N + 5` below `N = 8`.
pub fn gate_count_formula(n_states: u64, flavor: Flavor) -> Result<u64> {
    let log_n = log2_states(n_states)? as u64;
    let base = 2 * log_n + 5;
    if log_n < 3 {
        return Ok(base);
    }
    let expansion = match flavor {
        Flavor::Inverters => 2 * (3..=log_n).map(|c| 2 * c - 1).sum::<u64>(),
        Flavor::Rotations => (3..=log_n)
            .map(|j| (1u64 << (2 + log_n - j)) + 10 * (j..=log_n).map(|c| 1u64 << (c - j)).sum::<u64>())
            .sum(),
    };
    Ok(expansion + base)
}

/// `2·log N` for inverters (`N ≥ 4`), `1 + log N` for rotations; `N = 2` needs two either way.
pub fn qubit_count(n_states: u64, flavor: Flavor) -> Result<usize> {
    let log_n = log2_states(n_states)? as usize;
    Ok(match flavor {
        Flavor::Inverters if log_n >= 2 => 2 * log_n,
        _ => log_n + 1,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateTally {
    pub by_kind: BTreeMap<String, u64>,
    pub total: u64,
    /// Gates run one after another, so depth equals the total.
    pub depth: u64,
}

pub fn gate_count_empirical(circuit: &Circuit) -> GateTally {
    let mut by_kind = BTreeMap::new();
    for g in &circuit.gates {
        *by_kind.entry(g.label()).or_insert(0) += 1;
    }
    let total = circuit.len() as u64;
    GateTally { by_kind, total, depth: total }
}

/// Per-gate durations keyed by [`crate::circuit::GateOp::label`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DurationTable(pub BTreeMap<String, f64>);

impl DurationTable {
    pub fn new(entries: BTreeMap<String, f64>) -> Result<Self> {
        if let Some((k, v)) = entries.iter().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(WalkError::Table(format!("duration for '{k}' must be ≥ 0, got {v}")));
        }
        Ok(DurationTable(entries))
    }

    /// Synthetic units: single-qubit gates 1, singly-controlled gates 2, Toffoli 6.
    pub fn synthetic() -> Self {
        let mut m = BTreeMap::new();
        for base in ["x", "h", "ry", "rz", "phase", "u3"] {
            m.insert(base.to_string(), 1.0);
            m.insert(format!("c{base}"), 2.0);
        }
        m.insert("toffoli".to_string(), 6.0);
        DurationTable(m)
    }

    /// One `gate_kind duration` pair per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [kind, value] = fields[..] else {
                return Err(WalkError::Table(format!("line {}: expected 'kind duration'", lineno + 1)));
            };
            let d: f64 = value
                .parse()
                .map_err(|_| WalkError::Table(format!("line {}: bad duration '{value}'", lineno + 1)))?;
            m.insert(kind.to_string(), d);
        }
        Self::new(m)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, kind: &str) -> Option<f64> {
        self.0.get(kind).copied()
    }
}

/// Sum of gate durations, no parallelism and no preparation or readout time.
pub fn exec_time(circuit: &Circuit, table: &DurationTable) -> Result<f64> {
    circuit.gates.iter().try_fold(0.0, |acc, g| {
        let label = g.label();
        table
            .get(&label)
            .map(|d| acc + d)
            .ok_or_else(|| WalkError::Table(format!("no duration for gate kind '{label}'")))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeInputs {
    /// Workspace size including any qubits added for connectivity.
    pub workspace: usize,
    pub machine_qubits: usize,
    /// Average effective two-qubit error rate over the workspace.
    pub eps_eff: f64,
}

/// `min(n, 1/(n·ε))²`, evaluated at the given workspace.
pub fn quantum_volume(v: &VolumeInputs) -> Result<f64> {
    if !(v.eps_eff > 0.0 && v.eps_eff < 1.0) {
        return Err(WalkError::Parameter(format!("eps_eff = {} must lie in (0, 1)", v.eps_eff)));
    }
    if v.workspace == 0 || v.workspace >= v.machine_qubits {
        return Err(WalkError::Parameter(format!(
            "workspace {} must be positive and below the machine's {} qubits",
            v.workspace, v.machine_qubits
        )));
    }
    let n = v.workspace as f64;
    Ok(n.min(1.0 / (n * v.eps_eff)).powi(2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub n_states: u64,
    pub flavor: Flavor,
    pub steps: usize,
    /// Closed-form count for one step.
    pub formula_gate_count: u64,
    pub formula_gate_count_total: u64,
    /// Tally of the constructed step circuit.
    pub empirical_per_step: GateTally,
    pub empirical_total: u64,
    pub qubit_count: usize,
    pub exec_time: Option<f64>,
    pub volume_inputs: Option<VolumeInputs>,
    pub quantum_volume: Option<f64>,
}

pub fn resource_report(
    n: usize,
    steps: usize,
    flavor: Flavor,
    durations: Option<&DurationTable>,
    volume: Option<VolumeInputs>,
) -> Result<ResourceReport> {
    WalkSpec::new(n, steps, flavor).validate()?;
    let n_states = 1u64 << n;
    let formula = gate_count_formula(n_states, flavor)?;
    let step = build_step(n, flavor);
    let tally = gate_count_empirical(&step);
    let exec = durations.map(|t| exec_time(&step, t).map(|d| d * steps as f64)).transpose()?;
    let qv = volume.as_ref().map(quantum_volume).transpose()?;
    Ok(ResourceReport {
        n_states,
        flavor,
        steps,
        formula_gate_count: formula,
        formula_gate_count_total: formula * steps as u64,
        empirical_total: tally.total * steps as u64,
        empirical_per_step: tally,
        qubit_count: qubit_count(n_states, flavor)?,
        exec_time: exec,
        volume_inputs: volume,
        quantum_volume: qv,
    })
}
