//! Coined walk circuits on an `N = 2^n` cycle.
//!
//! One step is `U = S·(I⊗H)`: a Hadamard on the coin followed by the shift
//! `S = S⁻⊗|0⟩⟨0| + S⁺⊗|1⟩⟨1|`. The increment `S⁺` is the cascade
//! `∧_n(X), ∧_{n-1}(X), …, ∧_1(X)` with the coin in every control set; the
//! decrement is the same cascade with every control negated.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Control, Flavor, GateOp, RegisterLayout};
use crate::decompose::expand_circuit;
use crate::error::{Result, WalkError};
use crate::gates::{GateKind, C64};

/// Largest position register accepted by [`reference_step_unitary`].
pub const MAX_REFERENCE_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkSpec {
    /// Position qubits; the cycle has `2^n` states.
    pub n: usize,
    pub steps: usize,
    pub flavor: Flavor,
    pub initial_position: usize,
    /// Coin value the walker starts with.
    #[serde(default)]
    pub initial_coin: u8,
}

impl WalkSpec {
    pub fn new(n: usize, steps: usize, flavor: Flavor) -> Self {
        WalkSpec { n, steps, flavor, initial_position: 0, initial_coin: 0 }
    }

    pub fn starting_at(mut self, position: usize) -> Self {
        self.initial_position = position;
        self
    }

    pub fn with_coin(mut self, coin: u8) -> Self {
        self.initial_coin = coin;
        self
    }

    pub fn positions(&self) -> usize {
        1 << self.n
    }

    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::for_walk(self.n, self.flavor)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(WalkError::Parameter("the position register needs at least one qubit".into()));
        }
        if self.n >= usize::BITS as usize - 1 {
            return Err(WalkError::Capacity(format!("n = {} is too large", self.n)));
        }
        if self.initial_position >= self.positions() {
            return Err(WalkError::Range(format!(
                "initial position {} outside a {}-state cycle",
                self.initial_position,
                self.positions()
            )));
        }
        if self.initial_coin > 1 {
            return Err(WalkError::Range(format!("coin value {} is not a bit", self.initial_coin)));
        }
        Ok(())
    }
}

/// Abstract cascade: `∧_{k+1}(X)` onto position bit `k`, from the top bit down.
fn cascade(layout: RegisterLayout, negative: bool) -> Vec<GateOp> {
    let ctl = |q| if negative { Control::neg(q) } else { Control::pos(q) };
    (0..layout.n_position)
        .rev()
        .map(|k| {
            let mut controls = vec![ctl(layout.coin())];
            controls.extend((0..k).map(ctl));
            GateOp::mcx(controls, k)
        })
        .collect()
}

fn expanded(layout: RegisterLayout, gates: Vec<GateOp>, flavor: Flavor) -> Circuit {
    let abstract_circuit = Circuit { layout, gates };
    // for_walk sizes the ancilla register for the widest gate in the cascade
    expand_circuit(&abstract_circuit, flavor).expect("walk layout fits its own cascade")
}

/// `|x⟩|1⟩ → |x+1⟩|1⟩`, identity on coin |0⟩.
pub fn build_increment(n: usize, flavor: Flavor) -> Circuit {
    let layout = RegisterLayout::for_walk(n, flavor);
    expanded(layout, cascade(layout, false), flavor)
}

/// `|x⟩|0⟩ → |x-1⟩|0⟩`, identity on coin |1⟩.
pub fn build_decrement(n: usize, flavor: Flavor) -> Circuit {
    let layout = RegisterLayout::for_walk(n, flavor);
    expanded(layout, cascade(layout, true), flavor)
}

/// Coin flip, then increment, then decrement. The two shift fragments act on
/// disjoint coin sectors and commute.
pub fn build_step(n: usize, flavor: Flavor) -> Circuit {
    let layout = RegisterLayout::for_walk(n, flavor);
    let mut gates = vec![GateOp::new(GateKind::H, layout.coin())];
    gates.extend(cascade(layout, false));
    gates.extend(cascade(layout, true));
    expanded(layout, gates, flavor)
}

/// `spec.steps` copies of the step circuit. State preparation is left to the simulator.
pub fn build_walk(spec: &WalkSpec) -> Result<Circuit> {
    spec.validate()?;
    let step = build_step(spec.n, spec.flavor);
    let mut circuit = Circuit::new(step.layout);
    for _ in 0..spec.steps {
        circuit.gates.extend(step.gates.iter().cloned());
    }
    Ok(circuit)
}

/// `S·(I⊗H)` on the `2^{n+1}`-dimensional position⊗coin space, built from
/// explicit cyclic permutation matrices. Index layout is `coin·N + x`.
pub fn reference_step_unitary(n: usize) -> Result<DMatrix<C64>> {
    if n == 0 || n > MAX_REFERENCE_N {
        return Err(WalkError::Capacity(format!(
            "reference unitary supports 1 ≤ n ≤ {MAX_REFERENCE_N}, got {n}"
        )));
    }
    let big_n = 1usize << n;
    let (plus, minus) = shift_permutations(n);
    let dim = 2 * big_n;
    let one = C64::new(1.0, 0.0);
    let mut shift = DMatrix::<C64>::zeros(dim, dim);
    for x in 0..big_n {
        for y in 0..big_n {
            // coin 0 block carries S⁻, coin 1 block carries S⁺
            shift[(y, x)] = minus[(y, x)];
            shift[(big_n + y, big_n + x)] = plus[(y, x)];
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut coin = DMatrix::<C64>::zeros(dim, dim);
    for x in 0..big_n {
        coin[(x, x)] = one * h;
        coin[(x, big_n + x)] = one * h;
        coin[(big_n + x, x)] = one * h;
        coin[(big_n + x, big_n + x)] = -one * h;
    }
    Ok(shift * coin)
}

/// `(S⁺, S⁻)` as `N×N` cyclic permutation matrices.
pub fn shift_permutations(n: usize) -> (DMatrix<C64>, DMatrix<C64>) {
    let big_n = 1usize << n;
    let one = C64::new(1.0, 0.0);
    let mut plus = DMatrix::<C64>::zeros(big_n, big_n);
    let mut minus = DMatrix::<C64>::zeros(big_n, big_n);
    for x in 0..big_n {
        plus[((x + 1) % big_n, x)] = one;
        minus[((x + big_n - 1) % big_n, x)] = one;
    }
    (plus, minus)
}

/// Block of `u` on basis states whose index is below `dim`, i.e. with every
/// ancilla at |0⟩. Fails if that block leaks into the rest of the space.
pub fn ancilla_free_block(u: &DMatrix<C64>, dim: usize, tol: f64) -> Result<DMatrix<C64>> {
    for c in 0..dim {
        for r in dim..u.nrows() {
            if u[(r, c)].norm() > tol {
                return Err(WalkError::Parameter(format!(
                    "ancilla-|0⟩ block leaks: entry ({r},{c}) = {}",
                    u[(r, c)]
                )));
            }
        }
    }
    Ok(u.view((0, 0), (dim, dim)).into_owned())
}
