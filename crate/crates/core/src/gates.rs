//! Named gates and their matrices.
//!
//! Angles are radians throughout. `Rz` follows the convention
//! `diag(e^{iφ/2}, e^{-iφ/2})`, which is the mirror image of the more common
//! `diag(e^{-iφ/2}, e^{iφ/2})`; the ABC factorisation of X in
//! [`crate::decompose`] is written against this convention.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, WalkError};

pub type C64 = Complex64;

/// A 2×2 complex matrix, row-major.
pub type Mat2 = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    Ry(f64),
    Rz(f64),
    /// Global phase `e^{iδ}·I`. Only meaningful once controlled.
    Phase(f64),
    U3(f64, f64, f64),
    Toffoli,
}

impl GateKind {
    /// Builds a kind from its lowercase name and parameter list, checking arity.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let want = match name {
            "x" | "h" | "toffoli" => 0,
            "ry" | "rz" | "phase" => 1,
            "u3" => 3,
            other => return Err(WalkError::Parameter(format!("unknown gate kind '{other}'"))),
        };
        if params.len() != want {
            return Err(WalkError::Parameter(format!(
                "gate '{name}' takes {want} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(match name {
            "x" => GateKind::X,
            "h" => GateKind::H,
            "toffoli" => GateKind::Toffoli,
            "ry" => GateKind::Ry(params[0]),
            "rz" => GateKind::Rz(params[0]),
            "phase" => GateKind::Phase(params[0]),
            _ => GateKind::U3(params[0], params[1], params[2]),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::Phase(_) => "phase",
            GateKind::U3(..) => "u3",
            GateKind::Toffoli => "toffoli",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::Ry(t) | GateKind::Rz(t) | GateKind::Phase(t) => vec![t],
            GateKind::U3(t, p, l) => vec![t, p, l],
            _ => Vec::new(),
        }
    }

    /// The 2×2 action on the target qubit. For `Toffoli` this is X; the two
    /// controls live on the [`crate::circuit::GateOp`].
    pub fn matrix2(&self) -> Mat2 {
        match *self {
            GateKind::X | GateKind::Toffoli => [[ZERO, ONE], [ONE, ZERO]],
            GateKind::H => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            GateKind::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]
            }
            GateKind::Rz(phi) => [
                [C64::from_polar(1.0, phi / 2.0), ZERO],
                [ZERO, C64::from_polar(1.0, -phi / 2.0)],
            ],
            GateKind::Phase(delta) => {
                let p = C64::from_polar(1.0, delta);
                [[p, ZERO], [ZERO, p]]
            }
            GateKind::U3(theta, phi, lambda) => {
                let (s, c) = (theta / 2.0).sin_cos();
                [
                    [C64::new(c, 0.0), -C64::from_polar(s, lambda)],
                    [C64::from_polar(s, phi), C64::from_polar(c, lambda + phi)],
                ]
            }
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            write!(f, "{}", self.name())
        } else {
            let p: Vec<String> = params.iter().map(|v| format!("{v}")).collect();
            write!(f, "{}({})", self.name(), p.join(","))
        }
    }
}

/// A gate kind together with its full matrix (2×2, or 8×8 for Toffoli).
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    pub kind: GateKind,
    pub matrix: DMatrix<C64>,
}

impl GateMatrix {
    pub fn new(kind: GateKind) -> Self {
        let matrix = match kind {
            // controls on qubits 1 and 2, target qubit 0 (qubit 0 = least significant bit)
            GateKind::Toffoli => {
                let mut m = DMatrix::<C64>::identity(8, 8);
                m[(6, 6)] = ZERO;
                m[(7, 7)] = ZERO;
                m[(6, 7)] = ONE;
                m[(7, 6)] = ONE;
                m
            }
            _ => mat2_to_dmatrix(&kind.matrix2()),
        };
        GateMatrix { kind, matrix }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        is_unitary(&self.matrix, tol)
    }
}

/// Looks up a gate by name and parameters and returns its matrix.
pub fn matrix_of(name: &str, params: &[f64]) -> Result<GateMatrix> {
    GateKind::from_name(name, params).map(GateMatrix::new)
}

pub fn hadamard_coin() -> GateMatrix {
    GateMatrix::new(GateKind::H)
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn mat2_identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mat2_max_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

pub fn mat2_to_dmatrix(m: &Mat2) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |i, j| m[i][j])
}

pub fn is_unitary(m: &DMatrix<C64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let prod = m * m.adjoint();
    let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
    max_abs_diff(&prod, &id) <= tol
}

/// Largest entrywise modulus of `a - b`. Matrices must share a shape.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: &Mat2, b: &Mat2) -> bool {
        mat2_max_diff(a, b) < 1e-12
    }

    #[test]
    fn ry_half_pi() {
        let m = matrix_of("ry", &[PI / 2.0]).unwrap();
        let s = FRAC_1_SQRT_2;
        let want = [[C64::new(s, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(s, 0.0)]];
        assert!(close(&m.kind.matrix2(), &want));
    }

    #[test]
    fn phase_zero_is_identity() {
        let m = matrix_of("phase", &[0.0]).unwrap();
        assert!(close(&m.kind.matrix2(), &mat2_identity()));
    }

    #[test]
    fn u3_with_zero_phases_is_ry() {
        for i in 0..=16 {
            let theta = -2.0 * PI + i as f64 * PI / 4.0;
            assert!(close(&GateKind::U3(theta, 0.0, 0.0).matrix2(), &GateKind::Ry(theta).matrix2()));
        }
    }

    #[test]
    fn rz_follows_positive_upper_convention() {
        let m = GateKind::Rz(PI / 2.0).matrix2();
        assert!((m[0][0] - C64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        assert!((m[1][1] - C64::from_polar(1.0, -PI / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn hadamard_is_involution() {
        let h = hadamard_coin().kind.matrix2();
        assert!(close(&mat2_mul(&h, &h), &mat2_identity()));
        // H|1> = (|0> - |1>)/sqrt2
        assert!((h[0][1].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((h[1][1].re + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn toffoli_swaps_top_pair() {
        let t = matrix_of("toffoli", &[]).unwrap();
        assert!(t.is_unitary(1e-12));
        assert_eq!(t.matrix[(6, 7)], ONE);
        assert_eq!(t.matrix[(7, 6)], ONE);
        assert_eq!(t.matrix[(5, 5)], ONE);
    }

    #[test]
    fn wrong_arity_is_rejected() {
        assert!(matches!(matrix_of("ry", &[]), Err(WalkError::Parameter(_))));
        assert!(matches!(matrix_of("u3", &[1.0]), Err(WalkError::Parameter(_))));
        assert!(matches!(matrix_of("x", &[1.0]), Err(WalkError::Parameter(_))));
        assert!(matrix_of("swap", &[]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_kind() -> impl Strategy<Value = GateKind> {
            let a = -10.0..10.0f64;
            prop_oneof![
                Just(GateKind::X),
                Just(GateKind::H),
                a.clone().prop_map(GateKind::Ry),
                a.clone().prop_map(GateKind::Rz),
                a.clone().prop_map(GateKind::Phase),
                (a.clone(), a.clone(), a).prop_map(|(t, p, l)| GateKind::U3(t, p, l)),
            ]
        }

        proptest! {
            #[test]
            fn all_matrices_unitary(k in any_kind()) {
                prop_assert!(GateMatrix::new(k).is_unitary(1e-12));
            }

            #[test]
            fn rotations_are_additive(a in -6.0..6.0f64, b in -6.0..6.0f64) {
                let rz = mat2_mul(&GateKind::Rz(a).matrix2(), &GateKind::Rz(b).matrix2());
                prop_assert!(mat2_max_diff(&rz, &GateKind::Rz(a + b).matrix2()) < 1e-12);
                let ry = mat2_mul(&GateKind::Ry(a).matrix2(), &GateKind::Ry(b).matrix2());
                prop_assert!(mat2_max_diff(&ry, &GateKind::Ry(a + b).matrix2()) < 1e-12);
            }
        }
    }
}
