//! Realisations of the multi-controlled inverter `∧_m(X)`.
//!
//! Two routes are provided. [`mcx_ancilla`] computes the AND of the controls
//! into a chain of ancillas with Toffolis, fires a CNOT onto the target and
//! uncomputes. [`mcx_rotations`] uses no ancillas: one control is peeled off
//! and the gate becomes
//!
//! ```text
//!   C(last→t) · ∧_{m-1}(X)(rest→t) · B(last→t) · ∧_{m-1}(X)(rest→t) · A(last→t) · phase(controls)
//! ```
//!
//! with `A·B·C = I` and `Φ·A·X·B·X·C = X`. The leftover phase `e^{iδ}` on the
//! all-ones control subspace is itself a multi-controlled diagonal gate and is
//! expanded by the same factorisation. Recursion stops at two controls, where
//! a Toffoli is used as is.

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Circuit, Control, Flavor, GateOp, Polarity};
use crate::error::{Result, WalkError};
use crate::gates::{mat2_identity, mat2_mul, GateKind, Mat2};

/// `W = e^{iδ}·A·X·B·X·C` with `A·B·C = I`.
///
/// Each factor list is in circuit order: the first entry is applied first,
/// so `A = [Ry(π/2), Rz(π/2)]` denotes the matrix `Rz(π/2)·Ry(π/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbcDecomposition {
    pub phase: f64,
    pub a: Vec<GateKind>,
    pub b: Vec<GateKind>,
    pub c: Vec<GateKind>,
}

impl AbcDecomposition {
    fn product(factors: &[GateKind]) -> Mat2 {
        factors.iter().fold(mat2_identity(), |acc, k| mat2_mul(&k.matrix2(), &acc))
    }

    pub fn a_matrix(&self) -> Mat2 {
        Self::product(&self.a)
    }

    pub fn b_matrix(&self) -> Mat2 {
        Self::product(&self.b)
    }

    pub fn c_matrix(&self) -> Mat2 {
        Self::product(&self.c)
    }

    /// `A·B·C`.
    pub fn abc(&self) -> Mat2 {
        mat2_mul(&self.a_matrix(), &mat2_mul(&self.b_matrix(), &self.c_matrix()))
    }

    /// `Φ(δ)·A·X·B·X·C`, which should reproduce the decomposed gate.
    pub fn reconstruct(&self) -> Mat2 {
        let x = GateKind::X.matrix2();
        let axbxc = mat2_mul(
            &self.a_matrix(),
            &mat2_mul(&x, &mat2_mul(&self.b_matrix(), &mat2_mul(&x, &self.c_matrix()))),
        );
        mat2_mul(&GateKind::Phase(self.phase).matrix2(), &axbxc)
    }
}

/// The factorisation of X: `A = Rz(π/2)·Ry(π/2)`, `B = Ry(-π/2)`, `C = Rz(-π/2)`, `δ = π/2`.
///
/// Without the phase, `A·X·B·X·C = -i·X`.
pub fn abc_for_x() -> AbcDecomposition {
    AbcDecomposition {
        phase: FRAC_PI_2,
        a: vec![GateKind::Ry(FRAC_PI_2), GateKind::Rz(FRAC_PI_2)],
        b: vec![GateKind::Ry(-FRAC_PI_2)],
        c: vec![GateKind::Rz(-FRAC_PI_2)],
    }
}

/// Factorisation of `diag(1, e^{iδ}) = e^{iδ/2}·Rz(-δ)`.
pub fn abc_for_phase_shift(delta: f64) -> AbcDecomposition {
    AbcDecomposition {
        phase: delta / 2.0,
        a: vec![GateKind::Rz(-delta / 2.0)],
        b: vec![GateKind::Rz(delta / 2.0)],
        c: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McxRequest {
    pub controls: Vec<Control>,
    pub target: usize,
    /// Workspace for the ancilla route, assumed |0⟩ on entry. Ignored by the rotation route.
    pub ancillas: Vec<usize>,
}

impl McxRequest {
    pub fn new(controls: Vec<Control>, target: usize) -> Self {
        McxRequest { controls, target, ancillas: Vec::new() }
    }

    /// All-positive controls on the given qubits.
    pub fn positive(controls: &[usize], target: usize) -> Self {
        Self::new(controls.iter().copied().map(Control::pos).collect(), target)
    }

    pub fn with_ancillas(mut self, ancillas: Vec<usize>) -> Self {
        self.ancillas = ancillas;
        self
    }

    pub fn m(&self) -> usize {
        self.controls.len()
    }
}

/// Pushes an X on `qubit`, cancelling it against an identical X just before.
fn push_x(out: &mut Vec<GateOp>, qubit: usize) {
    if out.last().is_some_and(|g| g.is_uncontrolled_x_on(qubit)) {
        out.pop();
    } else {
        out.push(GateOp::x(qubit));
    }
}

fn negated(controls: &[Control]) -> Vec<usize> {
    controls.iter().filter(|c| c.polarity == Polarity::Negative).map(|c| c.qubit).collect()
}

/// Wraps a positive-control expansion in X gates on every negative control.
fn with_polarity(
    out: &mut Vec<GateOp>,
    controls: &[Control],
    body: impl FnOnce(&mut Vec<GateOp>, &[usize]),
) {
    let flip = negated(controls);
    for &q in &flip {
        push_x(out, q);
    }
    let qubits: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
    body(out, &qubits);
    for &q in &flip {
        push_x(out, q);
    }
}

fn basic_mcx(controls: &[usize], target: usize) -> GateOp {
    match *controls {
        [] => GateOp::x(target),
        [c] => GateOp::cx(c, target),
        [c1, c2] => GateOp::toffoli(c1, c2, target),
        _ => GateOp::mcx(controls.iter().copied().map(Control::pos).collect(), target),
    }
}

fn check_request(req: &McxRequest) -> Result<()> {
    if req.controls.is_empty() {
        return Err(WalkError::Parameter("a multi-controlled inverter needs at least one control".into()));
    }
    Ok(())
}

/// Ancilla-chain realisation. For `m ≥ 3` this takes `m - 1` ancillas and
/// emits `2m - 1` Toffoli-class gates, plus X pairs for negative controls.
pub fn mcx_ancilla(req: &McxRequest) -> Result<Vec<GateOp>> {
    check_request(req)?;
    let m = req.m();
    if m >= 3 && req.ancillas.len() < m - 1 {
        return Err(WalkError::Capacity(format!(
            "{m} controls need {} ancillas, {} available",
            m - 1,
            req.ancillas.len()
        )));
    }
    let mut out = Vec::new();
    with_polarity(&mut out, &req.controls, |out, controls| {
        ancilla_chain(out, controls, req.target, &req.ancillas)
    });
    Ok(out)
}

fn ancilla_chain(out: &mut Vec<GateOp>, controls: &[usize], target: usize, ancillas: &[usize]) {
    let m = controls.len();
    if m <= 2 {
        out.push(basic_mcx(controls, target));
        return;
    }
    let mut compute = Vec::with_capacity(m - 1);
    compute.push(GateOp::toffoli(controls[0], controls[1], ancillas[0]));
    for k in 2..m {
        compute.push(GateOp::toffoli(controls[k], ancillas[k - 2], ancillas[k - 1]));
    }
    out.extend(compute.iter().cloned());
    out.push(GateOp::cx(ancillas[m - 2], target));
    out.extend(compute.into_iter().rev());
}

/// Ancilla-free realisation. Exact on the full `2^{m+1}` space.
pub fn mcx_rotations(req: &McxRequest) -> Result<Vec<GateOp>> {
    check_request(req)?;
    let mut out = Vec::new();
    with_polarity(&mut out, &req.controls, |out, controls| rotation_mcx(out, controls, req.target));
    Ok(out)
}

fn rotation_mcx(out: &mut Vec<GateOp>, controls: &[usize], target: usize) {
    if controls.len() <= 2 {
        out.push(basic_mcx(controls, target));
    } else {
        controlled_abc(out, &abc_for_x(), controls, target);
    }
}

/// `∧_k(W)` for the `W` described by `abc`, with `k = controls.len() ≥ 1`.
fn controlled_abc(out: &mut Vec<GateOp>, abc: &AbcDecomposition, controls: &[usize], target: usize) {
    let (&last, rest) = controls.split_last().expect("at least one control");
    let singly = |out: &mut Vec<GateOp>, factors: &[GateKind]| {
        out.extend(factors.iter().map(|&k| GateOp::controlled(k, last, target)));
    };
    singly(out, &abc.c);
    rotation_mcx(out, rest, target);
    singly(out, &abc.b);
    rotation_mcx(out, rest, target);
    singly(out, &abc.a);
    if abc.phase != 0.0 {
        all_ones_phase(out, controls, abc.phase, target);
    }
}

/// Phase `e^{iδ}` on the subspace where every qubit in `qubits` is |1⟩.
/// `spare` is any qubit outside `qubits`, used as the nominal target of a
/// controlled global phase.
fn all_ones_phase(out: &mut Vec<GateOp>, qubits: &[usize], delta: f64, spare: usize) {
    match *qubits {
        [] => {}
        [q] => out.push(GateOp::controlled(GateKind::Phase(delta), q, spare)),
        [q0, q1] => out.push(GateOp::controlled(GateKind::U3(0.0, 0.0, delta), q0, q1)),
        _ => {
            let (&last, rest) = qubits.split_last().unwrap();
            controlled_abc(out, &abc_for_phase_shift(delta), rest, last);
        }
    }
}

/// Replaces every X with three or more controls by the flavor's realisation
/// and canonicalises two-control X into Toffoli. Negative controls on
/// inverters become X sandwiches; adjacent X pairs from neighbouring
/// sandwiches cancel.
pub fn expand_circuit(circuit: &Circuit, flavor: Flavor) -> Result<Circuit> {
    circuit.validate()?;
    let ancillas = circuit.layout.ancillas();
    let mut out: Vec<GateOp> = Vec::with_capacity(circuit.len());
    for g in &circuit.gates {
        if g.kind != GateKind::X || g.controls.is_empty() {
            out.push(g.clone());
            continue;
        }
        let req = McxRequest::new(g.controls.clone(), g.target).with_ancillas(
            ancillas.iter().copied().filter(|a| !g.qubits().any(|q| q == *a)).collect(),
        );
        let fragment = match flavor {
            Flavor::Inverters => mcx_ancilla(&req)?,
            Flavor::Rotations => mcx_rotations(&req)?,
        };
        for f in fragment {
            if f.controls.is_empty() && f.kind == GateKind::X {
                push_x(&mut out, f.target);
            } else {
                out.push(f);
            }
        }
    }
    Ok(Circuit { layout: circuit.layout, gates: out })
}
