//! Pauli-basis attribution.
//!
//! Each subcircuit is run in every measurement/initialization variant. The
//! variant distributions are combined into a real tensor with one 4-valued
//! axis per incident cut (bases I, X, Y, Z in that order) and a trailing
//! output axis over the subcircuit's final-output qubits.
//!
//! Upstream cut, basis B: `Tr(rho B)` attributed outcome by outcome. I sums
//! outcomes; Z, X and Y weight outcome 0 by +1 and outcome 1 by -1 under the
//! Z, X and Y measurement settings respectively.
//!
//! Downstream cut: the Pauli operator fed into the wire is expanded over the
//! four preparable states,
//! `I = |0> + |1>`, `Z = |0> - |1>`, `X = 2|+> - |0> - |1>`,
//! `Y = 2|+i> - |0> - |1>` (as projectors). The `1/2` per cut is left to the
//! reconstruction.

use ndarray::{ArrayD, IxDyn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::shots::{default_shots, sample_with};
use super::simulate_capped;
use crate::cutter::{variant_circuit, InitState, MeasSetting, Subcircuit};
use crate::error::{Error, Result};

/// Basis labels in axis order.
pub const BASES: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Downstream expansion coefficients: row = basis (I, X, Y, Z), column =
/// prepared state (|0>, |1>, |+>, |+i>).
const PREP_COEFFS: [[f64; 4]; 4] = [
    [1.0, 1.0, 0.0, 0.0],
    [-1.0, -1.0, 2.0, 0.0],
    [-1.0, -1.0, 0.0, 2.0],
    [1.0, -1.0, 0.0, 0.0],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum SimMode {
    Exact,
    /// `count = None` uses [`default_shots`] per subcircuit width.
    Shots { count: Option<u64>, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubcircuitTensor {
    pub subcircuit: usize,
    /// Cut edge ids of the leading axes, ascending.
    pub edges: Vec<usize>,
    /// Shape `[4; edges.len()] ++ [2^o]`.
    pub data: ArrayD<f64>,
}

impl SubcircuitTensor {
    pub fn out_dim(&self) -> usize {
        *self.data.shape().last().unwrap()
    }

    /// Output-axis slice with every cut axis fixed to basis `I`.
    pub fn identity_slice(&self) -> Vec<f64> {
        let mut view = self.data.view();
        for _ in 0..self.edges.len() {
            view = view.index_axis_move(ndarray::Axis(0), 0);
        }
        view.iter().copied().collect()
    }
}

fn meas_for_basis(b: usize) -> (MeasSetting, bool) {
    match BASES[b] {
        'I' => (MeasSetting::Z, false),
        'X' => (MeasSetting::X, true),
        'Y' => (MeasSetting::Y, true),
        _ => (MeasSetting::Z, true),
    }
}

/// Simulates every variant of `s` and assembles its tensor.
pub fn run_subcircuit(s: &Subcircuit, mode: SimMode, qubit_cap: usize) -> Result<SubcircuitTensor> {
    let (u, d, o, w) = (s.u(), s.d(), s.o(), s.width);
    if w > qubit_cap {
        return Err(Error::SimulatorCap { width: w, cap: qubit_cap });
    }
    if u + o != w {
        return Err(Error::NetworkMismatch(format!(
            "subcircuit {} has {w} qubits but {u} upstream cuts and {o} outputs",
            s.id
        )));
    }
    if let SimMode::Shots { count: Some(0), .. } = mode {
        return Err(Error::InvalidDistribution("shots must be >= 1".into()));
    }

    let up_bits: Vec<usize> = s.upstream_cuts.iter().map(|&(q, _)| w - 1 - q).collect();
    let out_bits: Vec<usize> = s.output_map.iter().map(|&(q, _)| w - 1 - q).collect();
    let (n_up, n_out) = (1usize << u, 1usize << o);

    let n_meas = 3usize.pow(u as u32);
    let n_init = 4usize.pow(d as u32);
    let decode = |mut mi: usize, mut ii: usize| {
        let mut init = vec![InitState::Zero; d];
        for slot in init.iter_mut().rev() {
            *slot = InitState::ALL[ii % 4];
            ii /= 4;
        }
        let mut meas = vec![MeasSetting::Z; u];
        for slot in meas.iter_mut().rev() {
            *slot = MeasSetting::ALL[mi % 3];
            mi /= 3;
        }
        (meas, init)
    };

    // Per variant: signed marginals R[sign mask][output], where bit k of the
    // sign mask (first upstream cut most significant) selects a +-1 weight on
    // that cut's outcome.
    let reduced: Vec<Vec<f64>> = (0..n_meas * n_init)
        .into_par_iter()
        .map(|vi| -> Result<Vec<f64>> {
            let (meas, init) = decode(vi / n_init, vi % n_init);
            let circuit = variant_circuit(s, &meas, &init);
            let mut probs = simulate_capped(&circuit, qubit_cap)?.probabilities();
            if let SimMode::Shots { count, seed } = mode {
                let shots = count.unwrap_or_else(|| default_shots(w));
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(((s.id as u64) << 32) | vi as u64);
                let total: f64 = probs.iter().sum();
                probs.iter_mut().for_each(|p| *p /= total);
                probs = sample_with(&probs, shots, &mut rng)?;
            }
            let mut r = vec![0.0; n_up * n_out];
            for (idx, &p) in probs.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let mut ub = 0;
                for &b in &up_bits {
                    ub = (ub << 1) | ((idx >> b) & 1);
                }
                let mut ob = 0;
                for &b in &out_bits {
                    ob = (ob << 1) | ((idx >> b) & 1);
                }
                r[ub * n_out + ob] += p;
            }
            // Walsh-Hadamard over the upstream bits.
            let mut h = 1;
            while h < n_up {
                for block in (0..n_up).step_by(h * 2) {
                    for a in block..block + h {
                        for ob in 0..n_out {
                            let (x, y) = (r[a * n_out + ob], r[(a + h) * n_out + ob]);
                            r[a * n_out + ob] = x + y;
                            r[(a + h) * n_out + ob] = x - y;
                        }
                    }
                }
                h *= 2;
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;

    // Layout [up bases..., init states..., out]; fill from the variants.
    let mut shape = vec![4usize; u + d];
    shape.push(n_out);
    let n_up_bases = 4usize.pow(u as u32);
    let mut flat = vec![0.0; n_up_bases * n_init * n_out];
    for bi in 0..n_up_bases {
        let mut mi = 0;
        let mut mask = 0;
        let mut rest = bi;
        let mut digits = vec![0usize; u];
        for slot in digits.iter_mut().rev() {
            *slot = rest % 4;
            rest /= 4;
        }
        for &b in &digits {
            let (m, signed) = meas_for_basis(b);
            mi = mi * 3 + MeasSetting::ALL.iter().position(|&x| x == m).unwrap();
            mask = (mask << 1) | signed as usize;
        }
        for ii in 0..n_init {
            let r = &reduced[mi * n_init + ii];
            let dst = (bi * n_init + ii) * n_out;
            flat[dst..dst + n_out].copy_from_slice(&r[mask * n_out..(mask + 1) * n_out]);
        }
    }
    let mut data = ArrayD::from_shape_vec(IxDyn(&shape), flat).expect("shape matches");

    // Prepared states -> Pauli bases, one downstream axis at a time.
    for k in 0..d {
        let axis = ndarray::Axis(u + k);
        let mut next = ArrayD::zeros(data.raw_dim());
        for (basis, coeffs) in PREP_COEFFS.iter().enumerate() {
            let mut dst = next.index_axis_mut(axis, basis);
            for (state, &c) in coeffs.iter().enumerate() {
                if c != 0.0 {
                    dst.scaled_add(c, &data.index_axis(axis, state));
                }
            }
        }
        data = next;
    }

    // Reorder cut axes by ascending edge id.
    let axis_edges: Vec<usize> = s
        .upstream_cuts
        .iter()
        .chain(&s.downstream_cuts)
        .map(|&(_, e)| e)
        .collect();
    let mut order: Vec<usize> = (0..u + d).collect();
    order.sort_by_key(|&a| axis_edges[a]);
    let edges: Vec<usize> = order.iter().map(|&a| axis_edges[a]).collect();
    order.push(u + d);
    let data = data.permuted_axes(IxDyn(&order)).as_standard_layout().into_owned();

    Ok(SubcircuitTensor {
        subcircuit: s.id,
        edges,
        data,
    })
}
