//! Dense statevector simulation, shot sampling, and conversion of subcircuit
//! variant outputs into subcircuit tensors.

mod attribution;
mod shots;

use num_complex::Complex64;

pub use attribution::{run_subcircuit, SimMode, SubcircuitTensor, BASES};
pub use shots::{default_shots, sample_shots};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

pub const DEFAULT_QUBIT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    pub fn apply(&mut self, g: &Gate) {
        let m = g.matrix();
        match *g.qubits.as_slice() {
            [q] => self.apply_1q(q, [m[0], m[1], m[2], m[3]]),
            [a, b] => self.apply_2q(a, b, &m),
            _ => unreachable!("gates act on one or two qubits"),
        }
    }

    fn apply_1q(&mut self, q: usize, m: [Complex64; 4]) {
        let bit = self.bit(q);
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for i in base..base + bit {
                let (x, y) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0] * x + m[1] * y;
                self.amps[i | bit] = m[2] * x + m[3] * y;
            }
            base += bit << 1;
        }
    }

    fn apply_2q(&mut self, a: usize, b: usize, m: &[Complex64]) {
        let (ba, bb) = (self.bit(a), self.bit(b));
        let diagonal = (0..4).all(|r| (0..4).all(|c| r == c || m[r * 4 + c] == Complex64::new(0.0, 0.0)));
        for i in 0..self.amps.len() {
            if i & (ba | bb) != 0 {
                continue;
            }
            let idx = [i, i | bb, i | ba, i | ba | bb];
            if diagonal {
                for (k, &j) in idx.iter().enumerate() {
                    self.amps[j] *= m[k * 5];
                }
                continue;
            }
            let v = idx.map(|j| self.amps[j]);
            for (r, &j) in idx.iter().enumerate() {
                self.amps[j] = (0..4).map(|c| m[r * 4 + c] * v[c]).sum();
            }
        }
    }
}

/// Runs `c` from `|0...0>` under the default qubit cap.
pub fn simulate(c: &Circuit) -> Result<StateVector> {
    simulate_capped(c, DEFAULT_QUBIT_CAP)
}

pub fn simulate_capped(c: &Circuit, cap: usize) -> Result<StateVector> {
    if c.num_qubits() > cap {
        return Err(Error::SimulatorCap {
            width: c.num_qubits(),
            cap,
        });
    }
    let mut sv = StateVector::zero(c.num_qubits());
    for g in c.gates() {
        sv.apply(g);
    }
    Ok(sv)
}

/// Output distribution of `c`, indexed with qubit 0 as the most significant bit.
pub fn probabilities(c: &Circuit) -> Result<Vec<f64>> {
    Ok(simulate(c)?.probabilities())
}
