use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The supported gate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    Cx,
    Cz,
    Cp,
    Rzz,
}

impl GateKind {
    pub const ALL: [GateKind; 15] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Cp,
        GateKind::Rzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Cp => "cp",
            GateKind::Rzz => "rzz",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz | GateKind::Cp | GateKind::Rzz => 2,
            _ => 1,
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Cp | GateKind::Rzz => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or(())
    }
}

/// A gate application: kind, angles in radians, and 0-based qubit operands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub qubits: Vec<usize>,
}

impl Gate {
    /// Builds a gate, panicking on arity or parameter mismatch. Intended for
    /// generators and tests where the inputs are literals.
    pub fn new(kind: GateKind, params: &[f64], qubits: &[usize]) -> Self {
        assert_eq!(qubits.len(), kind.arity(), "arity mismatch for {kind}");
        assert_eq!(params.len(), kind.num_params(), "param mismatch for {kind}");
        if kind.arity() == 2 {
            assert_ne!(qubits[0], qubits[1], "duplicate operand for {kind}");
        }
        Gate {
            kind,
            params: params.to_vec(),
            qubits: qubits.to_vec(),
        }
    }

    pub fn one(kind: GateKind, q: usize) -> Self {
        Gate::new(kind, &[], &[q])
    }

    pub fn rot(kind: GateKind, theta: f64, q: usize) -> Self {
        Gate::new(kind, &[theta], &[q])
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        Gate::new(kind, &[], &[a, b])
    }

    pub fn two_rot(kind: GateKind, theta: f64, a: usize, b: usize) -> Self {
        Gate::new(kind, &[theta], &[a, b])
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits.len() == 2
    }

    /// Unitary matrix in row-major order: 2x2 for single-qubit gates, 4x4 for
    /// two-qubit gates with the first operand as the more significant bit.
    pub fn matrix(&self) -> Vec<Complex64> {
        gate_matrix(self)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Unitary of a gate (see [`Gate::matrix`] for the layout).
pub fn gate_matrix(g: &Gate) -> Vec<Complex64> {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let p = |i: usize| g.params[i];
    match g.kind {
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            vec![h, h, h, -h]
        }
        GateKind::X => vec![zero, one, one, zero],
        GateKind::Y => vec![zero, c(0.0, -1.0), c(0.0, 1.0), zero],
        GateKind::Z => vec![one, zero, zero, -one],
        GateKind::S => vec![one, zero, zero, c(0.0, 1.0)],
        GateKind::Sdg => vec![one, zero, zero, c(0.0, -1.0)],
        GateKind::T => vec![one, zero, zero, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
        GateKind::Tdg => vec![one, zero, zero, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)],
        GateKind::Rx => {
            let (s, co) = (p(0) / 2.0).sin_cos();
            vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]
        }
        GateKind::Ry => {
            let (s, co) = (p(0) / 2.0).sin_cos();
            vec![c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
        }
        GateKind::Rz => {
            let half = p(0) / 2.0;
            vec![
                Complex64::from_polar(1.0, -half),
                zero,
                zero,
                Complex64::from_polar(1.0, half),
            ]
        }
        GateKind::Cx => permutation4(&[0, 1, 3, 2]),
        GateKind::Cz => diag4([one, one, one, -one]),
        GateKind::Cp => diag4([one, one, one, Complex64::from_polar(1.0, p(0))]),
        GateKind::Rzz => {
            let a = Complex64::from_polar(1.0, -p(0) / 2.0);
            let b = Complex64::from_polar(1.0, p(0) / 2.0);
            diag4([a, b, b, a])
        }
    }
}

fn diag4(d: [Complex64; 4]) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); 16];
    for (i, v) in d.into_iter().enumerate() {
        m[i * 4 + i] = v;
    }
    m
}

/// Row `r` has its 1 at column `perm[r]`.
fn permutation4(perm: &[usize; 4]) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); 16];
    for (r, &col) in perm.iter().enumerate() {
        m[r * 4 + col] = Complex64::new(1.0, 0.0);
    }
    m
}
