//! Greedy graph growing over the two-qubit gate DAG.
//!
//! Every vertex starts in its own partition. Adjacent partitions are merged
//! one pair at a time, always taking the cheapest feasible merge, until no
//! merge with cost `<= q_max` is left. A merge is infeasible when the trial
//! partition exceeds the qubit or gate budget of the target QPU; exceeding the
//! contraction-edge threshold only adds an exponential penalty.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dag::CutDag;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinderConfig {
    /// Max qubits per subcircuit.
    pub w_max: usize,
    /// Max two-qubit gates per subcircuit.
    pub s_max: usize,
    /// Contraction-edge threshold.
    pub k_t: usize,
    /// Merging-cost cutoff.
    pub q_max: f64,
    /// Weights of the width, size and contraction terms.
    pub weights: [f64; 3],
}

impl FinderConfig {
    pub fn new(w_max: usize, s_max: usize) -> Self {
        FinderConfig {
            w_max,
            s_max,
            k_t: 10,
            q_max: 1e4,
            weights: [1.0; 3],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.w_max < 2 {
            return Err(Error::Infeasible(format!(
                "w_max={} cannot hold a single two-qubit gate",
                self.w_max
            )));
        }
        if self.s_max == 0 || self.k_t == 0 || !(self.q_max > 0.0) {
            return Err(Error::Config("s_max, k_t and q_max must be positive".into()));
        }
        if self.weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::Config("merge weights must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionStats {
    /// Wire segments (maximal same-partition runs) summed over qubits.
    pub w: usize,
    /// Two-qubit gates.
    pub s: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MergeCost {
    Feasible(f64),
    Infeasible,
}

impl MergeCost {
    pub fn value(self) -> Option<f64> {
        match self {
            MergeCost::Feasible(q) => Some(q),
            MergeCost::Infeasible => None,
        }
    }
}

/// Partition ids are the smallest vertex id ever merged into the partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionState {
    assignment: Vec<usize>,
    members: BTreeMap<usize, Vec<usize>>,
    stats: BTreeMap<usize, PartitionStats>,
    /// Crossing-segment counts between partitions, stored symmetrically.
    adjacency: BTreeMap<usize, BTreeMap<usize, usize>>,
}

impl PartitionState {
    pub fn singletons(dag: &CutDag) -> Self {
        let nv = dag.num_vertices();
        let mut adjacency: BTreeMap<usize, BTreeMap<usize, usize>> =
            (0..nv).map(|v| (v, BTreeMap::new())).collect();
        for (_, a, b) in dag.gate_segments() {
            *adjacency.get_mut(&a).unwrap().entry(b).or_default() += 1;
            *adjacency.get_mut(&b).unwrap().entry(a).or_default() += 1;
        }
        PartitionState {
            assignment: (0..nv).collect(),
            members: (0..nv).map(|v| (v, vec![v])).collect(),
            stats: (0..nv).map(|v| (v, PartitionStats { w: 2, s: 1 })).collect(),
            adjacency,
        }
    }

    /// Builds a state from an explicit vertex -> label assignment.
    pub fn from_assignment(dag: &CutDag, labels: &[usize]) -> Result<Self> {
        if labels.len() != dag.num_vertices() {
            return Err(Error::UnassignedVertex(labels.len().min(dag.num_vertices())));
        }
        let mut state = PartitionState::singletons(dag);
        let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            match rep.get(&l) {
                Some(&r) => {
                    let (a, b) = (state.assignment[r], state.assignment[v]);
                    if a != b {
                        state.merge(a, b);
                    }
                }
                None => {
                    rep.insert(l, v);
                }
            }
        }
        Ok(state)
    }

    pub fn num_partitions(&self) -> usize {
        self.members.len()
    }

    pub fn partition_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.keys().copied()
    }

    pub fn partition_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn members(&self, pid: usize) -> &[usize] {
        &self.members[&pid]
    }

    pub fn cached_stats(&self, pid: usize) -> PartitionStats {
        self.stats[&pid]
    }

    pub fn neighbors(&self, pid: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency[&pid].iter().map(|(&p, &c)| (p, c))
    }

    /// Crossing segments between two partitions.
    pub fn shared_edges(&self, a: usize, b: usize) -> usize {
        self.adjacency[&a].get(&b).copied().unwrap_or(0)
    }

    /// Crossing segments incident to a partition.
    pub fn incident_edges(&self, pid: usize) -> usize {
        self.adjacency[&pid].values().sum()
    }

    pub fn num_cuts(&self) -> usize {
        self.adjacency.keys().map(|&p| self.incident_edges(p)).sum::<usize>() / 2
    }

    /// Merges `b` into `a` (or `a` into `b`); the survivor keeps the smaller id.
    fn merge(&mut self, a: usize, b: usize) -> usize {
        let (keep, gone) = (a.min(b), a.max(b));
        let shared = self.shared_edges(keep, gone);
        let gone_members = self.members.remove(&gone).unwrap();
        for &v in &gone_members {
            self.assignment[v] = keep;
        }
        self.members.get_mut(&keep).unwrap().extend(gone_members);
        self.members.get_mut(&keep).unwrap().sort_unstable();

        let gs = self.stats.remove(&gone).unwrap();
        let ks = self.stats.get_mut(&keep).unwrap();
        ks.w = ks.w + gs.w - shared;
        ks.s += gs.s;

        let gone_adj = self.adjacency.remove(&gone).unwrap();
        self.adjacency.get_mut(&keep).unwrap().remove(&gone);
        for (p, c) in gone_adj {
            if p == keep {
                continue;
            }
            let row = self.adjacency.get_mut(&p).unwrap();
            row.remove(&gone);
            *row.entry(keep).or_default() += c;
            *self.adjacency.get_mut(&keep).unwrap().entry(p).or_default() += c;
        }
        keep
    }
}

/// From-scratch `(w, s)` of one partition.
pub fn partition_stats(dag: &CutDag, state: &PartitionState, pid: usize) -> PartitionStats {
    let mut w = 0;
    for q in 0..dag.num_qubits() {
        let mut inside = false;
        for &v in dag.wire(q) {
            let here = state.partition_of(v) == pid;
            if here && !inside {
                w += 1;
            }
            inside = here;
        }
    }
    PartitionStats {
        w,
        s: state.members(pid).len(),
    }
}

/// Cut edges touched by a hypothetical pairwise contraction of `a` and `b`:
/// the shared (inner) edges plus every edge from either side to third parties.
pub fn contraction_edge_count(state: &PartitionState, a: usize, b: usize) -> usize {
    state.incident_edges(a) + state.incident_edges(b) - state.shared_edges(a, b)
}

/// Penalty for one metric against its threshold: `x/T` up to the threshold,
/// `4^(x-T) + 1` beyond it.
fn classical_term(k: usize, k_t: usize) -> f64 {
    if k <= k_t {
        k as f64 / k_t as f64
    } else {
        4f64.powi((k - k_t) as i32) + 1.0
    }
}

/// Trial-merge cost of the partitions joined by `(a, b)`. Pure: the state is
/// only read.
pub fn merging_cost(state: &PartitionState, a: usize, b: usize, cfg: &FinderConfig) -> MergeCost {
    let (sa, sb) = (state.cached_stats(a), state.cached_stats(b));
    let shared = state.shared_edges(a, b);
    let w_trial = sa.w + sb.w - shared;
    let s_trial = sa.s + sb.s;
    if w_trial > cfg.w_max || s_trial > cfg.s_max {
        return MergeCost::Infeasible;
    }
    let k_trial = trial_k(state, a, b);
    MergeCost::Feasible(merge_q(w_trial, s_trial, k_trial, cfg))
}

pub(crate) fn merge_q(w: usize, s: usize, k: usize, cfg: &FinderConfig) -> f64 {
    cfg.weights[0] * w as f64 / cfg.w_max as f64
        + cfg.weights[1] * s as f64 / cfg.s_max as f64
        + cfg.weights[2] * classical_term(k, cfg.k_t)
}

/// Max contraction-edge count between the merged trial partition and each of
/// its neighbors.
fn trial_k(state: &PartitionState, a: usize, b: usize) -> usize {
    let merged_incident =
        state.incident_edges(a) + state.incident_edges(b) - 2 * state.shared_edges(a, b);
    let neighbors: BTreeSet<usize> = state
        .neighbors(a)
        .chain(state.neighbors(b))
        .map(|(p, _)| p)
        .filter(|&p| p != a && p != b)
        .collect();
    neighbors
        .into_iter()
        .map(|c| {
            let between = state.shared_edges(a, c) + state.shared_edges(b, c);
            merged_incident + state.incident_edges(c) - between
        })
        .max()
        .unwrap_or(0)
}

/// Runs greedy graph growing to completion.
pub fn find_cuts(dag: &CutDag, cfg: &FinderConfig) -> Result<PartitionState> {
    cfg.validate()?;
    let mut state = PartitionState::singletons(dag);
    let mut costs: BTreeMap<(usize, usize), MergeCost> = BTreeMap::new();
    for a in state.partition_ids().collect::<Vec<_>>() {
        for (b, _) in state.neighbors(a).collect::<Vec<_>>() {
            if a < b {
                costs.insert((a, b), merging_cost(&state, a, b, cfg));
            }
        }
    }

    loop {
        let best = costs
            .iter()
            .filter_map(|(&pair, c)| c.value().map(|q| (q, pair)))
            .filter(|&(q, _)| q <= cfg.q_max)
            .min_by(|x, y| x.0.total_cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        let Some((_, (a, b))) = best else { break };

        let keep = state.merge(a, b);
        let gone = a.max(b);
        costs.retain(|&(x, y), _| x != gone && y != gone);

        // The merged partition's incident counts changed, which shifts the
        // contraction-edge counts of every pair within two hops of it.
        let mut touched: BTreeSet<usize> = BTreeSet::from([keep]);
        touched.extend(state.neighbors(keep).map(|(p, _)| p));
        let mut pairs = BTreeSet::new();
        for &p in &touched {
            for (r, _) in state.neighbors(p) {
                pairs.insert((p.min(r), p.max(r)));
            }
        }
        for (x, y) in pairs {
            costs.insert((x, y), merging_cost(&state, x, y, cfg));
        }
    }
    Ok(state)
}

/// Largest contraction-edge count over neighboring partition pairs.
pub fn max_neighbor_k(state: &PartitionState) -> usize {
    state
        .partition_ids()
        .flat_map(|a| {
            state
                .neighbors(a)
                .filter(move |&(b, _)| a < b)
                .map(move |(b, _)| contraction_edge_count(state, a, b))
        })
        .max()
        .unwrap_or(0)
}
