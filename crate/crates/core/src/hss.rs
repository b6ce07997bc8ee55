//! Heavy state selection.
//!
//! Each subcircuit output state is scored by the L2 norm of its tensor entries
//! across every basis assignment of the incident cut edges. Each subcircuit
//! keeps its heaviest state, then states are added from a global descending
//! stream while the composite count stays under the budget.

use ndarray::Axis;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::SubcircuitTensor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    /// Retained local output states per subcircuit, in selection order.
    pub states: Vec<Vec<usize>>,
    /// Norms of the retained states, parallel to `states`.
    pub norms: Vec<Vec<f64>>,
    /// Budget on the number of composite states.
    pub budget: u64,
    /// Number of composite states, the product of the list lengths.
    pub size: u64,
}

impl Selection {
    pub fn m(&self) -> usize {
        self.states.len()
    }

    /// Local state lists sorted ascending, the layout the contraction consumes.
    pub fn sorted_states(&self) -> Vec<Vec<usize>> {
        self.states
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect()
    }
}

/// L2 norm of every output state of `t` over all cut-basis assignments.
pub fn state_norms(t: &SubcircuitTensor) -> Vec<f64> {
    let out_axis = Axis(t.data.ndim() - 1);
    (0..t.out_dim())
        .into_par_iter()
        .map(|i| t.data.index_axis(out_axis, i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect()
}

pub fn select_heavy_states(tensors: &[SubcircuitTensor], budget: u64) -> Result<Selection> {
    let norms: Vec<Vec<f64>> = tensors.iter().map(state_norms).collect();
    select_from_norms(&norms, budget)
}

/// The selection loop on precomputed norms, indexed `[subcircuit][state]`.
pub fn select_from_norms(norms: &[Vec<f64>], budget: u64) -> Result<Selection> {
    let m = norms.len();
    if m == 0 || budget < m as u64 {
        return Err(Error::Selection(format!(
            "budget {budget} leaves no room for one state in each of {m} subcircuits"
        )));
    }
    if let Some(j) = norms.iter().position(|n| n.is_empty()) {
        return Err(Error::Selection(format!("subcircuit {j} has no output states")));
    }
    let mut states: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut kept: Vec<Vec<f64>> = vec![Vec::new(); m];
    for (j, n) in norms.iter().enumerate() {
        // First maximum wins, so ties go to the smaller state.
        let i = (0..n.len()).fold(0, |best, i| if n[i] > n[best] { i } else { best });
        states[j].push(i);
        kept[j].push(n[i]);
    }

    let mut stream: Vec<(f64, usize, usize)> = norms
        .iter()
        .enumerate()
        .flat_map(|(j, n)| n.iter().enumerate().map(move |(i, &v)| (v, j, i)))
        .filter(|&(_, j, i)| states[j][0] != i)
        .collect();
    stream.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let product = |s: &[Vec<usize>]| s.iter().map(|x| x.len() as u64).product::<u64>();
    let mut stream = stream.into_iter();
    while product(&states) < budget {
        let Some((v, j, i)) = stream.next() else {
            break;
        };
        states[j].push(i);
        kept[j].push(v);
    }
    let size = product(&states);
    Ok(Selection {
        states,
        norms: kept,
        budget,
        size,
    })
}
