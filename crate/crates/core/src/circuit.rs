//! Register layout, gate operations and circuits.
//!
//! Qubit 0 is the least-significant bit of a basis-state index. The position
//! register occupies qubits `0..n`, the coin is qubit `n`, and ancillas follow
//! from `n + 1`. A basis index therefore reads `(ancilla | coin | position)`
//! from most to least significant bits.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::gates::{GateKind, C64};
use crate::state::StateVector;

/// Largest circuit accepted by [`circuit_unitary`].
pub const MAX_UNITARY_QUBITS: usize = 12;

/// How multi-controlled inverters are realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Toffoli ladders over an ancilla register.
    Inverters,
    /// Ancilla-free networks of controlled rotations.
    Rotations,
}

impl Flavor {
    pub const ALL: [Flavor; 2] = [Flavor::Inverters, Flavor::Rotations];

    pub fn as_str(&self) -> &'static str {
        match self {
            Flavor::Inverters => "inverters",
            Flavor::Rotations => "rotations",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inverters" | "c" => Ok(Flavor::Inverters),
            "rotations" | "r" => Ok(Flavor::Rotations),
            other => Err(WalkError::Parameter(format!("unknown flavor '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub n_position: usize,
    pub n_ancilla: usize,
}

impl RegisterLayout {
    pub fn new(n_position: usize, n_ancilla: usize) -> Self {
        RegisterLayout { n_position, n_ancilla }
    }

    /// Layout for an `n`-qubit position register under the given flavor.
    pub fn for_walk(n: usize, flavor: Flavor) -> Self {
        let n_ancilla = match flavor {
            Flavor::Inverters if n >= 2 => n - 1,
            _ => 0,
        };
        RegisterLayout::new(n, n_ancilla)
    }

    pub fn total_qubits(&self) -> usize {
        self.n_position + 1 + self.n_ancilla
    }

    pub fn coin(&self) -> usize {
        self.n_position
    }

    pub fn position_qubits(&self) -> std::ops::Range<usize> {
        0..self.n_position
    }

    pub fn ancillas(&self) -> Vec<usize> {
        (self.n_position + 1..self.total_qubits()).collect()
    }

    pub fn positions(&self) -> usize {
        1 << self.n_position
    }

    pub fn dim(&self) -> usize {
        1 << self.total_qubits()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    /// Fires on |1⟩.
    Positive,
    /// Fires on |0⟩.
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Control { qubit, polarity: Polarity::Positive }
    }

    pub fn neg(qubit: usize) -> Self {
        Control { qubit, polarity: Polarity::Negative }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl GateOp {
    pub fn new(kind: GateKind, target: usize) -> Self {
        GateOp { kind, target, controls: Vec::new() }
    }

    pub fn controlled(kind: GateKind, control: usize, target: usize) -> Self {
        GateOp { kind, target, controls: vec![Control::pos(control)] }
    }

    pub fn x(target: usize) -> Self {
        GateOp::new(GateKind::X, target)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        GateOp::controlled(GateKind::X, control, target)
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        GateOp { kind: GateKind::Toffoli, target, controls: vec![Control::pos(c1), Control::pos(c2)] }
    }

    /// An X on `target` conditioned on every control; abstract when more than two.
    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        GateOp { kind: GateKind::X, target, controls }
    }

    pub fn with_control(mut self, control: Control) -> Self {
        self.controls.push(control);
        self
    }

    /// Target plus controls.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.target).chain(self.controls.iter().map(|c| c.qubit))
    }

    pub fn is_uncontrolled_x_on(&self, qubit: usize) -> bool {
        self.kind == GateKind::X && self.controls.is_empty() && self.target == qubit
    }

    /// Tally key: the base name, prefixed with `c` for one control and `c{k}` for more.
    pub fn label(&self) -> String {
        let base = self.kind.name();
        match (self.kind, self.controls.len()) {
            (GateKind::Toffoli, _) => base.to_string(),
            (_, 0) => base.to_string(),
            (_, 1) => format!("c{base}"),
            (_, k) => format!("c{k}{base}"),
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(WalkError::Range(format!("qubit {q} outside a {n_qubits}-qubit register")));
            }
        }
        if self.controls.iter().any(|c| c.qubit == self.target) {
            return Err(WalkError::Parameter(format!("target {} is also a control", self.target)));
        }
        for (i, c) in self.controls.iter().enumerate() {
            if self.controls[..i].iter().any(|d| d.qubit == c.qubit) {
                return Err(WalkError::Parameter(format!("control {} repeated", c.qubit)));
            }
        }
        if self.kind == GateKind::Toffoli
            && (self.controls.len() != 2 || self.controls.iter().any(|c| c.polarity != Polarity::Positive))
        {
            return Err(WalkError::Parameter("toffoli takes exactly two positive controls".into()));
        }
        Ok(())
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} q{}", self.kind, self.target)?;
        for c in &self.controls {
            let mark = if c.polarity == Polarity::Positive { "" } else { "!" };
            write!(f, " {mark}c{}", c.qubit)?;
        }
        Ok(())
    }
}

/// Ordered gate list over a register layout. Gates run strictly in sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub layout: RegisterLayout,
    pub gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Circuit { layout, gates: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.layout.total_qubits()
    }

    pub fn push(&mut self, gate: GateOp) -> Result<()> {
        gate.validate(self.n_qubits())?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = GateOp>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends another circuit's gates; layouts must match.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.layout != self.layout {
            return Err(WalkError::Parameter("appending circuits with different layouts".into()));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.validate(self.n_qubits()))
    }
}

/// Dense unitary of the whole circuit, built column by column.
pub fn circuit_unitary(circuit: &Circuit) -> Result<DMatrix<C64>> {
    let n = circuit.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(WalkError::Capacity(format!(
            "{n} qubits exceeds the dense-unitary limit of {MAX_UNITARY_QUBITS}"
        )));
    }
    circuit.validate()?;
    let dim = 1usize << n;
    let columns: Vec<Vec<C64>> = (0..dim)
        .into_par_iter()
        .map(|col| {
            let mut state = StateVector::basis(circuit.layout, col);
            for g in &circuit.gates {
                state.apply_unchecked(g);
            }
            state.into_amplitudes()
        })
        .collect();
    Ok(DMatrix::from_fn(dim, dim, |r, c| columns[c][r]))
}
