use ndarray::{Axis, IxDyn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::order::ContractionTree;
use super::slicing::SlicePlan;
use super::{AxisLabel, LabeledTensor, TensorNetwork};
use crate::error::{Error, Result};

/// Reconstructed (quasi-)probabilities over global bitstrings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructedDistribution {
    pub num_qubits: usize,
    /// Global basis states, qubit 0 as the most significant bit.
    pub states: Vec<u64>,
    pub values: Vec<f64>,
    /// The `1/2^E` factor already applied to `values`.
    pub normalization: f64,
    /// True when every one of the `2^n` states was reconstructed.
    pub full: bool,
}

impl ReconstructedDistribution {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Dense vector over all `2^n` states; states not reconstructed are 0.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; 1usize << self.num_qubits];
        for (&s, &v) in self.states.iter().zip(&self.values) {
            out[s as usize] = v;
        }
        out
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// The `k` largest entries, ties to the smaller state.
    pub fn top_k(&self, k: usize) -> Vec<(u64, f64)> {
        let mut v: Vec<(u64, f64)> = self.states.iter().copied().zip(self.values.iter().copied()).collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        v.truncate(k);
        v
    }

    pub fn bitstring(&self, state: u64) -> String {
        format!("{:0width$b}", state, width = self.num_qubits)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractOutput {
    pub distribution: ReconstructedDistribution,
    /// Largest tensor materialized in any slice, in elements.
    pub peak_elements: usize,
    pub num_slices: usize,
}

/// Contracts the network along `tree`, summing over sliced edge values in
/// row-major order (first sliced edge most significant). `selection`, when
/// given, lists the retained local output states per tensor.
pub fn contract(
    net: &TensorNetwork,
    tree: &ContractionTree,
    slices: &SlicePlan,
    selection: Option<&[Vec<usize>]>,
    memory_cap: Option<usize>,
) -> Result<ContractOutput> {
    if tree.m != net.m() {
        return Err(Error::NetworkMismatch(format!(
            "tree over {} tensors for a {}-tensor network",
            tree.m,
            net.m()
        )));
    }
    let inputs = restrict(net, selection)?;
    let sliced = slices.edges();
    if let Some(&e) = sliced.iter().find(|&&e| e >= net.num_edges()) {
        return Err(Error::NetworkMismatch(format!("sliced edge {e} not in network")));
    }
    let num_slices = slices.num_slices();
    let cap = memory_cap.unwrap_or(usize::MAX);

    let run = |assignment: usize| -> Result<(LabeledTensor, usize)> {
        let mut tensors: Vec<LabeledTensor> = inputs.clone();
        for (k, &e) in sliced.iter().enumerate() {
            let value = assignment >> (2 * (sliced.len() - 1 - k)) & 3;
            for t in tensors.iter_mut() {
                *t = t.fix(e, value);
            }
        }
        let mut peak = tensors.iter().map(LabeledTensor::len).max().unwrap_or(0);
        check(peak, cap)?;
        let mut nodes: Vec<Option<LabeledTensor>> = tensors.into_iter().map(Some).collect();
        for s in &tree.steps {
            let a = nodes[s.left].take().expect("tree uses each node once");
            let b = nodes[s.right].take().expect("tree uses each node once");
            let c = a.contract_with(&b);
            peak = peak.max(c.len());
            check(peak, cap)?;
            nodes.push(Some(c));
        }
        Ok((nodes[tree.root()].take().expect("root"), peak))
    };

    // Batches of slices run in parallel; the sum follows slice order.
    let batch = rayon::current_num_threads().max(1) * 2;
    let mut acc: Option<LabeledTensor> = None;
    let mut peak = 0;
    let mut start = 0;
    while start < num_slices {
        let end = (start + batch).min(num_slices);
        let results: Vec<Result<(LabeledTensor, usize)>> = (start..end).into_par_iter().map(run).collect();
        for r in results {
            let (t, p) = r?;
            peak = peak.max(p);
            match acc.as_mut() {
                None => acc = Some(t),
                Some(a) => {
                    debug_assert_eq!(a.labels, t.labels);
                    a.data += &t.data;
                }
            }
        }
        start = end;
    }
    let result = acc.expect("at least one slice");
    let distribution = assemble(net, result, selection)?;
    Ok(ContractOutput {
        distribution,
        peak_elements: peak,
        num_slices,
    })
}

fn check(peak: usize, cap: usize) -> Result<()> {
    if peak > cap {
        return Err(Error::MemoryCap {
            cap,
            reason: format!("a {peak}-element tensor was materialized"),
        });
    }
    Ok(())
}

fn restrict(net: &TensorNetwork, selection: Option<&[Vec<usize>]>) -> Result<Vec<LabeledTensor>> {
    let Some(sel) = selection else {
        return Ok(net.tensors.clone());
    };
    if sel.len() != net.m() {
        return Err(Error::Selection(format!(
            "{} state lists for {} tensors",
            sel.len(),
            net.m()
        )));
    }
    net.tensors
        .iter()
        .zip(sel)
        .map(|(t, keep)| {
            let ax = t.labels.len() - 1;
            let dim = t.data.shape()[ax];
            if keep.is_empty() || keep.iter().any(|&i| i >= dim) {
                return Err(Error::Selection(format!(
                    "state list {keep:?} invalid for an output axis of size {dim}"
                )));
            }
            Ok(LabeledTensor {
                labels: t.labels.clone(),
                data: t.data.select(Axis(ax), keep),
            })
        })
        .collect()
}

/// Orders the result axes by tensor, applies `1/2^E`, and maps composite
/// indices to global bitstrings.
fn assemble(
    net: &TensorNetwork,
    result: LabeledTensor,
    selection: Option<&[Vec<usize>]>,
) -> Result<ReconstructedDistribution> {
    let m = net.m();
    let perm: Vec<usize> = (0..m)
        .map(|j| {
            result
                .labels
                .iter()
                .position(|&l| l == AxisLabel::Out(j))
                .ok_or_else(|| Error::NetworkMismatch(format!("output axis {j} missing from result")))
        })
        .collect::<Result<_>>()?;
    if result.labels.len() != m {
        return Err(Error::NetworkMismatch("uncontracted cut edge in result".into()));
    }
    let data = result.data.permuted_axes(IxDyn(&perm));
    let dims: Vec<usize> = data.shape().to_vec();
    let normalization = 0.5f64.powi(net.num_edges() as i32);
    let n = net.num_qubits;

    let local_states = |j: usize, k: usize| -> usize {
        match selection {
            Some(sel) => sel[j][k],
            None => k,
        }
    };
    // Global bit pattern contributed by local state `s` of tensor `j`.
    let spread = |j: usize, s: usize| -> u64 {
        let qubits = &net.output_qubits[j];
        let o = qubits.len();
        qubits.iter().enumerate().fold(0u64, |acc, (k, &q)| {
            if s >> (o - 1 - k) & 1 == 1 {
                acc | 1u64 << (n - 1 - q)
            } else {
                acc
            }
        })
    };

    let total: usize = dims.iter().product();
    let mut states = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    for (idx, v) in data.indexed_iter() {
        let mut g = 0u64;
        for j in 0..m {
            g |= spread(j, local_states(j, idx[j]));
        }
        states.push(g);
        values.push(v * normalization);
    }
    let full = selection.is_none() || dims.iter().product::<usize>() == 1usize << n;
    Ok(ReconstructedDistribution {
        num_qubits: n,
        states,
        values,
        normalization,
        full,
    })
}
