//! Pairwise contraction orders and their per-state multiplication cost.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 64;

/// Networks this small are ordered exactly by subset dynamic programming.
const EXACT_LIMIT: usize = 10;

/// Topology of a tensor network: which tensors each edge joins and the size
/// of each tensor's output axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkShape {
    pub edges: Vec<(usize, usize)>,
    pub out_dims: Vec<usize>,
}

impl NetworkShape {
    pub fn m(&self) -> usize {
        self.out_dims.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Shape with the given edges and unit output axes.
    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Self {
        NetworkShape {
            edges: edges.to_vec(),
            out_dims: vec![1; m],
        }
    }

    pub fn incident(&self, t: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == t || b == t)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let m = self.m();
        if m <= 1 {
            return true;
        }
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == t {
                    b
                } else if b == t {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Nested {
    Leaf(usize),
    Pair(Box<Nested>, Box<Nested>),
}

impl Nested {
    pub fn pair(a: Nested, b: Nested) -> Nested {
        Nested::Pair(Box::new(a), Box::new(b))
    }

    /// Left-to-right chain `((0,1),2),...`.
    pub fn chain(m: usize) -> Nested {
        (1..m).fold(Nested::Leaf(0), |acc, t| Nested::pair(acc, Nested::Leaf(t)))
    }
}

/// One pairwise contraction. Leaves are nodes `0..m`; step `k` creates node `m + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub left: usize,
    pub right: usize,
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
    pub cost: f64,
}

impl Step {
    pub fn num_edges(&self) -> usize {
        self.inner.len() + self.outer.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionTree {
    pub m: usize,
    pub steps: Vec<Step>,
}

impl ContractionTree {
    /// Builds a tree from a sequence of node pairs, validating that every
    /// node is consumed exactly once.
    pub fn from_pairs(shape: &NetworkShape, pairs: &[(usize, usize)]) -> Result<Self> {
        let m = shape.m();
        if pairs.len() + 1 != m.max(1) {
            return Err(Error::NetworkMismatch(format!(
                "{} steps for {m} tensors",
                pairs.len()
            )));
        }
        let mut open: Vec<Option<BTreeSet<usize>>> = (0..m).map(|t| Some(shape.incident(t))).collect();
        let mut steps = Vec::with_capacity(pairs.len());
        for &(l, r) in pairs {
            if l == r || l >= open.len() || r >= open.len() {
                return Err(Error::NetworkMismatch(format!("bad step ({l}, {r})")));
            }
            let (a, b) = match (open[l].take(), open[r].take()) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::NetworkMismatch(format!("node reused in ({l}, {r})"))),
            };
            let step = make_step(l, r, &a, &b);
            open.push(Some(a.symmetric_difference(&b).copied().collect()));
            steps.push(step);
        }
        Ok(ContractionTree { m, steps })
    }

    pub fn from_nested(shape: &NetworkShape, nested: &Nested) -> Result<Self> {
        fn walk(n: &Nested, m: usize, pairs: &mut Vec<(usize, usize)>) -> Result<usize> {
            match n {
                Nested::Leaf(t) if *t < m => Ok(*t),
                Nested::Leaf(t) => Err(Error::NetworkMismatch(format!("leaf {t} out of range"))),
                Nested::Pair(a, b) => {
                    let l = walk(a, m, pairs)?;
                    let r = walk(b, m, pairs)?;
                    pairs.push((l, r));
                    Ok(m + pairs.len() - 1)
                }
            }
        }
        let mut pairs = Vec::new();
        walk(nested, shape.m(), &mut pairs)?;
        Self::from_pairs(shape, &pairs)
    }

    pub fn to_nested(&self) -> Nested {
        fn build(t: &ContractionTree, node: usize) -> Nested {
            if node < t.m {
                Nested::Leaf(node)
            } else {
                let s = &t.steps[node - t.m];
                Nested::pair(build(t, s.left), build(t, s.right))
            }
        }
        build(self, self.root())
    }

    pub fn root(&self) -> usize {
        if self.steps.is_empty() {
            0
        } else {
            self.m + self.steps.len() - 1
        }
    }

    /// Leaves under every node, indexed by node id.
    pub fn leaves(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.m).map(|t| vec![t]).collect();
        for s in &self.steps {
            let mut v = out[s.left].clone();
            v.extend(&out[s.right]);
            out.push(v);
        }
        out
    }
}

fn make_step(left: usize, right: usize, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Step {
    let inner: Vec<usize> = a.intersection(b).copied().collect();
    let outer: Vec<usize> = a.symmetric_difference(b).copied().collect();
    let cost = 4f64.powi((inner.len() + outer.len()) as i32);
    Step {
        left,
        right,
        inner,
        outer,
        cost,
    }
}

/// Multiplications needed per reconstructed state.
pub fn per_state_cost(tree: &ContractionTree) -> f64 {
    tree.steps.iter().map(|s| s.cost).fold(0.0, |a, c| a + c)
}

/// Largest number of cut edges touched by one step.
pub fn k_max(tree: &ContractionTree) -> usize {
    tree.steps.iter().map(Step::num_edges).max().unwrap_or(0)
}

/// Cost of reconstructing one state by summing all `4^E` Kronecker terms.
pub fn prior_cost(num_edges: usize, m: usize) -> f64 {
    4f64.powi(num_edges as i32) * m.saturating_sub(1) as f64
}

/// Searches for a cheap contraction order. Candidates are the left-to-right
/// chain, the deterministic greedy order, `restarts` noisy greedy orders, and
/// for small networks the exact optimum. The cheapest wins, ties broken by
/// smaller `K_max`, then by candidate order.
pub fn find_order(shape: &NetworkShape, restarts: usize, seed: u64) -> Result<ContractionTree> {
    let m = shape.m();
    for &(a, b) in &shape.edges {
        if a >= m || b >= m || a == b {
            return Err(Error::NetworkMismatch(format!("edge ({a}, {b}) in a {m}-tensor network")));
        }
    }
    if m <= 1 {
        return ContractionTree::from_pairs(shape, &[]);
    }
    let mut best = ContractionTree::from_nested(shape, &Nested::chain(m))?;
    let mut consider = |t: ContractionTree| {
        let key = (per_state_cost(&t), k_max(&t));
        if key < (per_state_cost(&best), k_max(&best)) {
            best = t;
        }
    };
    consider(greedy(shape, None)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let temperature = rng.random_range(0.05..1.0);
        consider(greedy(shape, Some((&mut rng, temperature)))?);
    }
    if m <= EXACT_LIMIT {
        consider(exact(shape)?);
    }
    Ok(best)
}

/// Greedy pairing. Without noise the key is (step cost, resulting outer
/// count, pair ids); with noise, Gumbel perturbation of the log cost.
fn greedy(shape: &NetworkShape, mut noise: Option<(&mut ChaCha8Rng, f64)>) -> Result<ContractionTree> {
    let m = shape.m();
    let mut open: Vec<Option<BTreeSet<usize>>> = (0..m).map(|t| Some(shape.incident(t))).collect();
    let mut pairs = Vec::with_capacity(m - 1);
    for _ in 1..m {
        let active: Vec<usize> = (0..open.len()).filter(|&i| open[i].is_some()).collect();
        let mut candidates = Vec::new();
        for (x, &i) in active.iter().enumerate() {
            for &j in &active[x + 1..] {
                let (a, b) = (open[i].as_ref().unwrap(), open[j].as_ref().unwrap());
                let shared = a.intersection(b).count();
                if shared > 0 {
                    let union = a.len() + b.len() - shared;
                    candidates.push((union, union - shared, i, j));
                }
            }
        }
        if candidates.is_empty() {
            // Disconnected remainder: outer products between components.
            for (x, &i) in active.iter().enumerate() {
                for &j in &active[x + 1..] {
                    let union = open[i].as_ref().unwrap().len() + open[j].as_ref().unwrap().len();
                    candidates.push((union, union, i, j));
                }
            }
        }
        let &(_, _, i, j) = match noise.as_mut() {
            None => candidates.iter().min().unwrap(),
            Some((rng, temp)) => {
                let scored: Vec<f64> = candidates
                    .iter()
                    .map(|&(union, outer, _, _)| {
                        let u: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
                        union as f64 + 0.01 * outer as f64 - *temp * (-u.ln()).ln()
                    })
                    .collect();
                let k = (0..candidates.len())
                    .min_by(|&x, &y| scored[x].total_cmp(&scored[y]))
                    .unwrap();
                &candidates[k]
            }
        };
        let a = open[i].take().unwrap();
        let b = open[j].take().unwrap();
        open.push(Some(a.symmetric_difference(&b).copied().collect()));
        pairs.push((i, j));
    }
    ContractionTree::from_pairs(shape, &pairs)
}

/// Optimal order by dynamic programming over tensor subsets, minimizing
/// (cost, K_max) lexicographically at each subset.
fn exact(shape: &NetworkShape) -> Result<ContractionTree> {
    let m = shape.m();
    let full = (1usize << m) - 1;
    let mut edge_mask = vec![0u64; 1 << m];
    for s in 1..=full {
        let mut mask = 0u64;
        for (e, &(a, b)) in shape.edges.iter().enumerate() {
            let (ia, ib) = (s >> a & 1 == 1, s >> b & 1 == 1);
            if ia != ib {
                mask |= 1 << e;
            }
        }
        edge_mask[s] = mask;
    }
    let mut best: Vec<(f64, u32, usize)> = vec![(f64::INFINITY, u32::MAX, 0); 1 << m];
    for t in 0..m {
        best[1 << t] = (0.0, 0, 0);
    }
    for s in 1..=full {
        if s.count_ones() < 2 {
            continue;
        }
        let low = s & s.wrapping_neg();
        // Enumerate splits with the lowest member on the left to halve the work.
        let rest = s ^ low;
        let mut sub = rest;
        loop {
            let left = low | sub;
            if left != s {
                let right = s ^ left;
                let (cl, kl, _) = best[left];
                let (cr, kr, _) = best[right];
                let k = (edge_mask[left] | edge_mask[right]).count_ones();
                let cost = cl + cr + 4f64.powi(k as i32);
                let kk = k.max(kl).max(kr);
                if (cost, kk) < (best[s].0, best[s].1) {
                    best[s] = (cost, kk, left);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    fn build(best: &[(f64, u32, usize)], s: usize) -> Nested {
        if s.count_ones() == 1 {
            return Nested::Leaf(s.trailing_zeros() as usize);
        }
        let left = best[s].2;
        Nested::pair(build(best, left), build(best, s ^ left))
    }
    ContractionTree::from_nested(shape, &build(&best, full))
}
