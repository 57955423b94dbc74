//! Dense statevector over the walk registers.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateOp, Polarity, RegisterLayout};
use crate::error::{Result, WalkError};
use crate::gates::{Mat2, C64};

/// Largest register a [`StateVector`] will allocate.
pub const MAX_STATE_QUBITS: usize = 26;

// Below this many amplitudes the sequential kernel wins.
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn matrix(self) -> Mat2 {
        let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        match self {
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Walker at `position` with coin |0⟩ and every ancilla |0⟩.
    pub fn init(layout: RegisterLayout, position: usize) -> Result<Self> {
        Self::init_with_coin(layout, position, 0)
    }

    pub fn init_with_coin(layout: RegisterLayout, position: usize, coin: u8) -> Result<Self> {
        if layout.total_qubits() > MAX_STATE_QUBITS {
            return Err(WalkError::Capacity(format!(
                "{} qubits exceeds the statevector limit of {MAX_STATE_QUBITS}",
                layout.total_qubits()
            )));
        }
        if position >= layout.positions() {
            return Err(WalkError::Range(format!(
                "position {position} outside a {}-state cycle",
                layout.positions()
            )));
        }
        if coin > 1 {
            return Err(WalkError::Range(format!("coin value {coin} is not a bit")));
        }
        Ok(Self::basis(layout, position | (coin as usize) << layout.coin()))
    }

    /// Computational basis state `index` over the full register.
    pub fn basis(layout: RegisterLayout, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); layout.dim()];
        amplitudes[index] = C64::new(1.0, 0.0);
        StateVector { layout, amplitudes }
    }

    pub fn from_amplitudes(layout: RegisterLayout, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(WalkError::Parameter(format!(
                "expected {} amplitudes, got {}",
                layout.dim(),
                amplitudes.len()
            )));
        }
        Ok(StateVector { layout, amplitudes })
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.layout.total_qubits())?;
        self.apply_unchecked(gate);
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.layout.total_qubits() {
            return Err(WalkError::Parameter(format!(
                "circuit on {} qubits applied to a {}-qubit state",
                circuit.n_qubits(),
                self.layout.total_qubits()
            )));
        }
        circuit.validate()?;
        for g in &circuit.gates {
            self.apply_unchecked(g);
        }
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, gate: &GateOp) {
        let (mut mask, mut value) = (0usize, 0usize);
        for c in &gate.controls {
            mask |= 1 << c.qubit;
            if c.polarity == Polarity::Positive {
                value |= 1 << c.qubit;
            }
        }
        self.apply_matrix(&gate.kind.matrix2(), gate.target, mask, value);
    }

    pub fn apply_pauli(&mut self, qubit: usize, pauli: Pauli) {
        self.apply_matrix(&pauli.matrix(), qubit, 0, 0);
    }

    /// Applies `u` to `target` on every basis pair whose bits under `mask` equal `value`.
    fn apply_matrix(&mut self, u: &Mat2, target: usize, mask: usize, value: usize) {
        let stride = 1usize << target;
        let kernel = |base: usize, chunk: &mut [C64]| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if (base + k) & mask != value {
                    continue;
                }
                let (x, y) = (*a, *b);
                *a = u[0][0] * x + u[0][1] * y;
                *b = u[1][0] * x + u[1][1] * y;
            }
        };
        let block = 2 * stride;
        if self.amplitudes.len() >= PAR_THRESHOLD {
            self.amplitudes
                .par_chunks_mut(block)
                .with_min_len((PAR_THRESHOLD / block).max(1))
                .enumerate()
                .for_each(|(i, chunk)| kernel(i * block, chunk));
        } else {
            self.amplitudes
                .chunks_mut(block)
                .enumerate()
                .for_each(|(i, chunk)| kernel(i * block, chunk));
        }
    }

    /// Born-rule probabilities of every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Position marginal, summing over coin and ancillas.
    pub fn measure_distribution(&self) -> Distribution {
        let n = self.layout.positions();
        let mut p = vec![0.0; n];
        for (i, a) in self.amplitudes.iter().enumerate() {
            p[i & (n - 1)] += a.norm_sqr();
        }
        Distribution(p)
    }

    /// Draws one full basis index.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let r: f64 = rng.random::<f64>() * self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            acc += p;
            last = i;
            if r < acc {
                return i;
            }
        }
        last
    }
}

/// Probabilities indexed by cycle position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution(pub Vec<f64>);

impl Distribution {
    pub fn point_mass(n_states: usize, position: usize) -> Self {
        let mut p = vec![0.0; n_states];
        p[position] = 1.0;
        Distribution(p)
    }

    pub fn uniform(n_states: usize) -> Self {
        Distribution(vec![1.0 / n_states as f64; n_states])
    }

    /// Builds a distribution on `n_states` positions from sparse `(position, probability)` pairs.
    pub fn from_pairs(n_states: usize, pairs: &[(usize, f64)]) -> Self {
        let mut p = vec![0.0; n_states];
        for &(k, v) in pairs {
            p[k] += v;
        }
        Distribution(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, position: usize) -> f64 {
        self.0.get(position).copied().unwrap_or(0.0)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Positions with probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &p)| p > tol).map(|(i, _)| i).collect()
    }

    /// Most likely position; lowest index wins ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.0.iter().enumerate() {
            if p > self.0[best] {
                best = i;
            }
        }
        best
    }

    pub fn nonzero(&self, tol: f64) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.iter().copied().enumerate().filter(move |&(_, p)| p > tol)
    }
}
