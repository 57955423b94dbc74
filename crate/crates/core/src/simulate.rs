//! Exact and shot-based walk simulation.
//!
//! Shot sampling is seeded per trajectory: shot `i` of batch `j` draws from a
//! ChaCha8 stream keyed by a SplitMix64 mix of `(seed, j, i)`. Results are
//! therefore independent of thread scheduling and batch order.
//!
//! Noise is a stochastic Pauli channel applied along each trajectory: after
//! every gate, each qubit the gate touches suffers a uniformly chosen X, Y or
//! Z with probability `p_gate`. At readout each position bit flips with
//! probability `p_meas`. This is a synthetic stand-in for hardware noise and
//! is not calibrated to any device.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Result, WalkError};
use crate::state::{Distribution, Pauli, StateVector};
use crate::walk::{build_step, build_walk, WalkSpec};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Per-gate, per-touched-qubit Pauli error probability.
    pub p_gate: f64,
    /// Per-bit readout flip probability.
    pub p_meas: f64,
}

impl NoiseParams {
    pub fn new(p_gate: f64, p_meas: f64) -> Result<Self> {
        let n = NoiseParams { p_gate, p_meas };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_gate", self.p_gate), ("p_meas", self.p_meas)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(WalkError::Parameter(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub frequencies: Distribution,
    pub shots: u64,
    /// 95% normal-approximation half-width per position.
    pub half_widths: Vec<f64>,
}

impl ExperimentResult {
    fn from_counts(counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        let t = total as f64;
        let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / t).collect();
        let half_widths = freqs.iter().map(|&p| ci_half_width(p, total)).collect();
        ExperimentResult { frequencies: Distribution(freqs), shots: total, half_widths }
    }
}

/// `1.96·√(p̂(1−p̂)/total)`.
pub fn ci_half_width(p_hat: f64, total: u64) -> f64 {
    Z95 * (p_hat * (1.0 - p_hat) / total as f64).max(0.0).sqrt()
}

/// Exact position distribution after `spec.steps` steps.
pub fn run_exact(spec: &WalkSpec) -> Result<Distribution> {
    Ok(final_state(spec)?.measure_distribution())
}

/// Statevector after the walk, including coin and ancillas.
pub fn final_state(spec: &WalkSpec) -> Result<StateVector> {
    spec.validate()?;
    let mut state = StateVector::init_with_coin(spec.layout(), spec.initial_position, spec.initial_coin)?;
    if spec.steps > 0 {
        let step = build_step(spec.n, spec.flavor);
        for _ in 0..spec.steps {
            state.apply_circuit(&step)?;
        }
    }
    Ok(state)
}

pub fn run_shots(spec: &WalkSpec, shots: u64, noise: Option<&NoiseParams>, seed: u64) -> Result<ExperimentResult> {
    batch_experiment(spec, 1, shots, noise, seed)
}

/// Pools `batches × shots_per_batch` trajectories into one frequency table.
pub fn batch_experiment(
    spec: &WalkSpec,
    batches: u64,
    shots_per_batch: u64,
    noise: Option<&NoiseParams>,
    seed: u64,
) -> Result<ExperimentResult> {
    if batches == 0 || shots_per_batch == 0 {
        return Err(WalkError::Parameter("batches and shots must both be at least 1".into()));
    }
    spec.validate()?;
    if let Some(n) = noise {
        n.validate()?;
    }
    let sampler = Sampler::new(spec, noise.copied())?;
    let n_states = spec.positions();
    let counts = (0..batches)
        .into_par_iter()
        .flat_map(|j| (0..shots_per_batch).into_par_iter().map(move |i| (j, i)))
        .fold(
            || vec![0u64; n_states],
            |mut acc, (j, i)| {
                let mut rng = trajectory_rng(seed, j, i);
                acc[sampler.sample(&mut rng)] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; n_states],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ExperimentResult::from_counts(&counts))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trajectory_rng(seed: u64, batch: u64, shot: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(splitmix64(seed) ^ batch) ^ shot);
    ChaCha8Rng::seed_from_u64(key)
}

struct Sampler {
    n_position: usize,
    p_meas: f64,
    mode: Mode,
}

enum Mode {
    /// Cumulative exact position distribution.
    Ideal(Vec<f64>),
    Noisy { initial: StateVector, circuit: Circuit, p_gate: f64 },
}

impl Sampler {
    fn new(spec: &WalkSpec, noise: Option<NoiseParams>) -> Result<Self> {
        let noise = noise.unwrap_or(NoiseParams { p_gate: 0.0, p_meas: 0.0 });
        let mode = if noise.p_gate > 0.0 {
            Mode::Noisy {
                initial: StateVector::init_with_coin(spec.layout(), spec.initial_position, spec.initial_coin)?,
                circuit: build_walk(spec)?,
                p_gate: noise.p_gate,
            }
        } else {
            let exact = run_exact(spec)?;
            let mut acc = 0.0;
            Mode::Ideal(exact.probs().iter().map(|p| {
                acc += p;
                acc
            }).collect())
        };
        Ok(Sampler { n_position: spec.n, p_meas: noise.p_meas, mode })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let mask = (1usize << self.n_position) - 1;
        let mut position = match &self.mode {
            Mode::Ideal(cdf) => {
                let r = rng.random::<f64>() * cdf.last().copied().unwrap_or(1.0);
                cdf.partition_point(|&c| c <= r).min(cdf.len() - 1)
            }
            Mode::Noisy { initial, circuit, p_gate } => {
                let mut state = initial.clone();
                for g in &circuit.gates {
                    state.apply_unchecked(g);
                    for q in g.qubits() {
                        if rng.random::<f64>() < *p_gate {
                            let pauli = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
                            state.apply_pauli(q, pauli);
                        }
                    }
                }
                state.sample(rng) & mask
            }
        };
        if self.p_meas > 0.0 {
            for b in 0..self.n_position {
                if rng.random::<f64>() < self.p_meas {
                    position ^= 1 << b;
                }
            }
        }
        position
    }
}
