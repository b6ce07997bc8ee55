//! Tensor-network reconstruction.
//!
//! Subcircuit tensors become the nodes of a network whose shared indices are
//! the cut edges (dimension 4 each). Contracting the network in any pairwise
//! order yields the full-circuit distribution up to the global `1/2^|E|`.

mod contract;
pub mod io;
mod order;
mod slicing;

use ndarray::{ArrayD, Axis, IxDyn};

pub use contract::{contract, ContractOutput, ReconstructedDistribution};
pub use order::{
    find_order, k_max, per_state_cost, prior_cost, ContractionTree, Nested, NetworkShape, Step,
    DEFAULT_RESTARTS,
};
pub use slicing::{peak_elements, slice_network, SlicePlan};

use crate::cutter::CutPlan;
use crate::error::{Error, Result};
use crate::sim::SubcircuitTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxisLabel {
    Cut(usize),
    Out(usize),
}

/// Dense tensor with one label per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTensor {
    pub labels: Vec<AxisLabel>,
    pub data: ArrayD<f64>,
}

impl LabeledTensor {
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Fixes a cut index to one value, dropping the axis. No-op when the
    /// tensor lacks the edge.
    pub fn fix(&self, edge: usize, value: usize) -> LabeledTensor {
        match self.labels.iter().position(|&l| l == AxisLabel::Cut(edge)) {
            Some(ax) => {
                let mut labels = self.labels.clone();
                labels.remove(ax);
                LabeledTensor {
                    labels,
                    data: self.data.index_axis(Axis(ax), value).to_owned(),
                }
            }
            None => self.clone(),
        }
    }

    /// Pairwise contraction over shared cut labels. Result axes are the
    /// free axes of `self` followed by the free axes of `other`.
    pub fn contract_with(&self, other: &LabeledTensor) -> LabeledTensor {
        let shared: Vec<AxisLabel> = self
            .labels
            .iter()
            .copied()
            .filter(|l| matches!(l, AxisLabel::Cut(_)) && other.labels.contains(l))
            .collect();
        let pos = |t: &LabeledTensor, l: &AxisLabel| t.labels.iter().position(|x| x == l).unwrap();
        let free_a: Vec<usize> = (0..self.labels.len())
            .filter(|&i| !shared.contains(&self.labels[i]))
            .collect();
        let free_b: Vec<usize> = (0..other.labels.len())
            .filter(|&i| !shared.contains(&other.labels[i]))
            .collect();
        let shared_a: Vec<usize> = shared.iter().map(|l| pos(self, l)).collect();
        let shared_b: Vec<usize> = shared.iter().map(|l| pos(other, l)).collect();

        let dims_a: Vec<usize> = free_a.iter().map(|&i| self.data.shape()[i]).collect();
        let dims_b: Vec<usize> = free_b.iter().map(|&i| other.data.shape()[i]).collect();
        let fa: usize = dims_a.iter().product();
        let fb: usize = dims_b.iter().product();
        let s: usize = shared_a.iter().map(|&i| self.data.shape()[i]).product();

        let perm_a: Vec<usize> = free_a.iter().chain(&shared_a).copied().collect();
        let perm_b: Vec<usize> = shared_b.iter().chain(&free_b).copied().collect();
        let a2 = self
            .data
            .view()
            .permuted_axes(IxDyn(&perm_a))
            .as_standard_layout()
            .into_owned()
            .into_shape_with_order((fa, s))
            .expect("contiguous");
        let b2 = other
            .data
            .view()
            .permuted_axes(IxDyn(&perm_b))
            .as_standard_layout()
            .into_owned()
            .into_shape_with_order((s, fb))
            .expect("contiguous");
        let c = a2.dot(&b2);
        let mut dims = dims_a;
        dims.extend(dims_b);
        let labels = free_a
            .iter()
            .map(|&i| self.labels[i])
            .chain(free_b.iter().map(|&i| other.labels[i]))
            .collect();
        LabeledTensor {
            labels,
            data: c.into_shape_with_order(IxDyn(&dims)).expect("size matches"),
        }
    }
}

/// Subcircuit tensors wired together by the cut edges of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorNetwork {
    pub num_qubits: usize,
    pub tensors: Vec<LabeledTensor>,
    /// Endpoint tensors of every cut edge, indexed by edge id.
    pub edges: Vec<(usize, usize)>,
    /// Per tensor, the original qubits of its output axis, most significant first.
    pub output_qubits: Vec<Vec<usize>>,
}

impl TensorNetwork {
    pub fn m(&self) -> usize {
        self.tensors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn shape(&self) -> NetworkShape {
        NetworkShape {
            edges: self.edges.clone(),
            out_dims: self
                .tensors
                .iter()
                .map(|t| *t.data.shape().last().unwrap())
                .collect(),
        }
    }
}

pub fn build_network(plan: &CutPlan, tensors: &[SubcircuitTensor]) -> Result<TensorNetwork> {
    if tensors.len() != plan.m() {
        return Err(Error::NetworkMismatch(format!(
            "{} tensors for {} subcircuits",
            tensors.len(),
            plan.m()
        )));
    }
    let mut out = Vec::with_capacity(plan.m());
    for (s, t) in plan.subcircuits.iter().zip(tensors) {
        let expected = s.incident_edges();
        if t.subcircuit != s.id || t.edges != expected {
            return Err(Error::NetworkMismatch(format!(
                "tensor for subcircuit {} has edges {:?}, plan expects {:?}",
                s.id, t.edges, expected
            )));
        }
        let mut shape = vec![4usize; expected.len()];
        shape.push(1 << s.o());
        if t.data.shape() != shape.as_slice() {
            return Err(Error::NetworkMismatch(format!(
                "tensor for subcircuit {} has shape {:?}, expected {:?}",
                s.id,
                t.data.shape(),
                shape
            )));
        }
        let mut labels: Vec<AxisLabel> = expected.iter().map(|&e| AxisLabel::Cut(e)).collect();
        labels.push(AxisLabel::Out(s.id));
        out.push(LabeledTensor {
            labels,
            data: t.data.clone(),
        });
    }
    Ok(TensorNetwork {
        num_qubits: plan.num_qubits,
        tensors: out,
        edges: plan
            .cut_edges
            .iter()
            .map(|e| (e.upstream.subcircuit, e.downstream.subcircuit))
            .collect(),
        output_qubits: plan
            .subcircuits
            .iter()
            .map(|s| s.output_map.iter().map(|&(_, q)| q).collect())
            .collect(),
    })
}
