use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;

use qwalk::gates::{is_unitary, max_abs_diff};
use qwalk::{circuit_unitary, Circuit, Control, GateKind, GateOp, RegisterLayout, StateVector};

fn kind() -> impl Strategy<Value = GateKind> {
    let angle = -6.3..6.3f64;
    prop_oneof![
        Just(GateKind::X),
        Just(GateKind::H),
        angle.clone().prop_map(GateKind::Ry),
        angle.clone().prop_map(GateKind::Rz),
        angle.clone().prop_map(GateKind::Phase),
        (angle.clone(), angle.clone(), angle).prop_map(|(a, b, c)| GateKind::U3(a, b, c)),
    ]
}

/// A gate on `n` qubits with up to two controls of either polarity.
fn gate(n: usize) -> impl Strategy<Value = GateOp> {
    (kind(), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), 0usize..3, any::<[bool; 2]>()).prop_map(
        move |(k, qubits, nc, neg)| {
            let nc = nc.min(n - 1);
            let mut g = GateOp::new(k, qubits[0]);
            for i in 0..nc {
                let q = qubits[1 + i];
                g = g.with_control(if neg[i] { Control::neg(q) } else { Control::pos(q) });
            }
            g
        },
    )
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (2usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(gate(n), 0..=50).prop_map(move |gates| {
            let mut c = Circuit::new(RegisterLayout::new(n - 1, 0));
            c.extend(gates).unwrap();
            c
        })
    })
}

fn random_state(layout: RegisterLayout, seed: u64) -> StateVector {
    let dim = layout.dim();
    let amps: Vec<Complex64> = (0..dim)
        .map(|i| {
            let x = ((i as u64 + 1).wrapping_mul(seed | 1).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 11) as f64;
            Complex64::from_polar(1.0, x * 1e-9)
        })
        .collect();
    let norm = (dim as f64).sqrt();
    StateVector::from_amplitudes(layout, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_preserved(c in circuit(), seed in any::<u64>()) {
        let mut s = random_state(c.layout, seed);
        s.apply_circuit(&c).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn circuit_unitary_is_unitary(c in circuit()) {
        prop_assert!(is_unitary(&circuit_unitary(&c).unwrap(), 1e-10));
    }

    #[test]
    fn gatewise_application_matches_unitary(c in circuit(), seed in any::<u64>()) {
        let u = circuit_unitary(&c).unwrap();
        let s0 = random_state(c.layout, seed);
        let want = &u * DVector::from_column_slice(s0.amplitudes());
        let mut s = s0.clone();
        for g in &c.gates {
            s.apply_gate(g).unwrap();
        }
        let got = DVector::from_column_slice(s.amplitudes());
        prop_assert!((got - want).camax() < 1e-10);
    }

    #[test]
    fn negative_control_is_x_conjugation(k in kind(), target in 0usize..4, control in 0usize..4) {
        prop_assume!(target != control);
        let layout = RegisterLayout::new(3, 0);
        let mut neg = Circuit::new(layout);
        neg.push(GateOp::new(k, target).with_control(Control::neg(control))).unwrap();
        let mut sandwich = Circuit::new(layout);
        sandwich.push(GateOp::x(control)).unwrap();
        sandwich.push(GateOp::controlled(k, control, target)).unwrap();
        sandwich.push(GateOp::x(control)).unwrap();
        prop_assert!(max_abs_diff(&circuit_unitary(&neg).unwrap(), &circuit_unitary(&sandwich).unwrap()) < 1e-12);
    }
}
