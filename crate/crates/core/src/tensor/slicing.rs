//! Cut-edge slicing under a memory cap.
//!
//! Fixing an edge to each of its four values splits one network into four
//! smaller ones whose results add up to the original.

use serde::{Deserialize, Serialize};

use super::order::{ContractionTree, NetworkShape};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicePlan {
    /// Edges sliced to bring the input tensors under the cap.
    pub level1: Vec<usize>,
    /// Edges sliced to bring intermediate tensors under the cap.
    pub level2: Vec<usize>,
}

impl SlicePlan {
    pub fn is_empty(&self) -> bool {
        self.level1.is_empty() && self.level2.is_empty()
    }

    /// All sliced edges, level 1 first.
    pub fn edges(&self) -> Vec<usize> {
        self.level1.iter().chain(&self.level2).copied().collect()
    }

    pub fn num_slices(&self) -> usize {
        1usize << (2 * (self.level1.len() + self.level2.len()))
    }
}

fn tensor_elements(open_edges: usize, out: f64) -> f64 {
    4f64.powi(open_edges as i32) * out
}

/// Largest element count among the input tensors when `sliced` edges are fixed.
fn input_peak(shape: &NetworkShape, sliced: &[usize]) -> f64 {
    (0..shape.m())
        .map(|t| {
            let open = shape.incident(t).iter().filter(|e| !sliced.contains(e)).count();
            tensor_elements(open, shape.out_dims[t] as f64)
        })
        .fold(0.0, f64::max)
}

/// Largest element count among input and intermediate tensors when
/// contracting along `tree` with `sliced` edges fixed.
pub fn peak_elements(shape: &NetworkShape, tree: &ContractionTree, sliced: &[usize]) -> f64 {
    let leaves = tree.leaves();
    let mut peak = input_peak(shape, sliced);
    for (k, s) in tree.steps.iter().enumerate() {
        let open = s.outer.iter().filter(|e| !sliced.contains(e)).count();
        let out: f64 = leaves[tree.m + k].iter().map(|&t| shape.out_dims[t] as f64).product();
        peak = peak.max(tensor_elements(open, out));
    }
    peak
}

/// Greedily slices the edge that most reduces the peak (ties to the smaller
/// edge id) until the peak fits in `cap` elements. Input tensors are handled
/// first, then intermediates.
pub fn slice_network(shape: &NetworkShape, tree: &ContractionTree, cap: usize) -> Result<SlicePlan> {
    let cap = cap as f64;
    let mut plan = SlicePlan::default();
    let mut sliced: Vec<usize> = Vec::new();

    let pick = |sliced: &[usize], measure: &dyn Fn(&[usize]) -> f64| -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for e in 0..shape.num_edges() {
            if sliced.contains(&e) {
                continue;
            }
            let mut trial = sliced.to_vec();
            trial.push(e);
            let p = measure(&trial);
            if best.is_none_or(|(bp, _)| p < bp) {
                best = Some((p, e));
            }
        }
        best.map(|(_, e)| e)
    };

    while input_peak(shape, &sliced) > cap {
        let Some(e) = pick(&sliced, &|s| input_peak(shape, s)) else {
            break;
        };
        sliced.push(e);
        plan.level1.push(e);
    }
    while peak_elements(shape, tree, &sliced) > cap {
        let Some(e) = pick(&sliced, &|s| peak_elements(shape, tree, s)) else {
            break;
        };
        sliced.push(e);
        plan.level2.push(e);
    }
    let peak = peak_elements(shape, tree, &sliced);
    if peak > cap {
        return Err(Error::MemoryCap {
            cap: cap as usize,
            reason: format!("peak of {peak} elements remains with every cut edge sliced"),
        });
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::super::order::tests::four_tensor_shape;
    use super::super::order::{find_order, Nested};
    use super::*;

    #[test]
    fn generous_cap_needs_no_slices() {
        let shape = four_tensor_shape();
        let tree = ContractionTree::from_nested(&shape, &Nested::chain(4)).unwrap();
        assert_eq!(peak_elements(&shape, &tree, &[]), 64.0);
        assert!(slice_network(&shape, &tree, 64).unwrap().is_empty());
    }

    #[test]
    fn tight_cap_slices_most_reducing_edge() {
        let shape = four_tensor_shape();
        let tree = ContractionTree::from_nested(&shape, &Nested::chain(4)).unwrap();
        // Tensor 1 carries three edges (64 elements), so a cap of 63 forces a level-1 slice.
        let plan = slice_network(&shape, &tree, 16 * 4 - 1).unwrap();
        assert_eq!(plan.level1, vec![0]);
        assert_eq!(plan.num_slices(), 4);
        assert!(peak_elements(&shape, &tree, &plan.edges()) <= 63.0);
    }

    #[test]
    fn small_cap_bounds_every_tensor() {
        let shape = four_tensor_shape();
        let tree = find_order(&shape, 0, 0).unwrap();
        let plan = slice_network(&shape, &tree, 4).unwrap();
        assert!(peak_elements(&shape, &tree, &plan.edges()) <= 4.0);
        assert_eq!(plan.num_slices(), 1 << (2 * plan.edges().len()));
    }

    #[test]
    fn unreachable_cap_errors() {
        let shape = NetworkShape {
            edges: vec![(0, 1)],
            out_dims: vec![8, 8],
        };
        let tree = find_order(&shape, 0, 0).unwrap();
        assert!(matches!(slice_network(&shape, &tree, 32), Err(Error::MemoryCap { .. })));
        assert!(slice_network(&shape, &tree, 64).is_ok());
    }
}
