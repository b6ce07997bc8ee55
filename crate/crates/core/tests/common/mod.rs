#![allow(dead_code)]

use qcut::{Circuit, Gate, GateKind};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ONE_QUBIT: [GateKind; 11] = [
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
];
const TWO_QUBIT: [GateKind; 4] = [GateKind::Cx, GateKind::Cz, GateKind::Cp, GateKind::Rzz];

/// Seeded circuit over the whole gate set. Two-qubit gates mostly act on
/// nearby qubits so that cuts stay few.
pub fn random_circuit(n: usize, num_gates: usize, two_qubit_fraction: f64, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::one(GateKind::H, q));
    }
    for _ in 0..num_gates {
        if rng.random_bool(two_qubit_fraction) {
            let kind = *TWO_QUBIT.choose(&mut rng).unwrap();
            let a = rng.random_range(0..n);
            let near: Vec<usize> = (a.saturating_sub(2)..(a + 3).min(n)).filter(|&b| b != a).collect();
            let b = *near.choose(&mut rng).unwrap();
            let g = if kind.num_params() == 1 {
                Gate::two_rot(kind, rng.random_range(-3.0..3.0), a, b)
            } else {
                Gate::two(kind, a, b)
            };
            c.push(g);
        } else {
            let kind = *ONE_QUBIT.choose(&mut rng).unwrap();
            let q = rng.random_range(0..n);
            let g = if kind.num_params() == 1 {
                Gate::rot(kind, rng.random_range(-3.0..3.0), q)
            } else {
                Gate::one(kind, q)
            };
            c.push(g);
        }
    }
    c
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
