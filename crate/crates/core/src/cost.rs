//! Runtime estimates for the hybrid workflow and quality metrics for
//! heavy-state reconstruction.

use serde::{Deserialize, Serialize};

use crate::cutter::{CutPlan, Subcircuit};
use crate::error::{Error, Result};
use crate::tensor::{per_state_cost, prior_cost, ContractionTree, ReconstructedDistribution, SlicePlan};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModelConfig {
    /// Seconds per gate layer.
    pub t_g: f64,
    /// Seconds per measurement.
    pub t_m: f64,
    /// Classical backend throughput, operations per second.
    pub flops: f64,
    pub num_qpus: usize,
}

impl Default for CostModelConfig {
    fn default() -> Self {
        CostModelConfig {
            t_g: 1e-7,
            t_m: 1e-6,
            flops: 1e12,
            num_qpus: 10,
        }
    }
}

impl CostModelConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.t_g) || !ok(self.t_m) || !ok(self.flops) || self.num_qpus == 0 {
            return Err(Error::Config(format!(
                "cost model parameters must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

/// QPU seconds for one subcircuit: every variant, `2^w` shots each.
pub fn subcircuit_runtime(u: usize, d: usize, w: usize, t: usize, cfg: &CostModelConfig) -> f64 {
    3f64.powi(u as i32) * 4f64.powi(d as i32) * 2f64.powi(w as i32) * (t as f64 * cfg.t_g + cfg.t_m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QpuRuntime {
    pub serial: f64,
    /// `serial / num_qpus`.
    pub parallel: f64,
}

pub fn qpu_runtime(plan: &CutPlan, cfg: &CostModelConfig) -> QpuRuntime {
    let serial: f64 = plan
        .subcircuits
        .iter()
        .map(|s| subcircuit_runtime(s.u(), s.d(), s.width, s.depth, cfg))
        .fold(0.0, |a, t| a + t);
    QpuRuntime {
        serial,
        parallel: serial / cfg.num_qpus as f64,
    }
}

pub fn classical_runtime(c_tn: f64, cfg: &CostModelConfig) -> f64 {
    c_tn / cfg.flops
}

/// Multiplications to reconstruct `states` states along `tree`. Slicing adds
/// the redundant per-slice work plus one addition per state per extra slice.
pub fn contraction_cost(tree: &ContractionTree, slices: &SlicePlan, states: f64) -> f64 {
    let base = per_state_cost(tree);
    if slices.is_empty() {
        return base * states;
    }
    let sliced = slices.edges();
    let per_slice: f64 = tree
        .steps
        .iter()
        .map(|s| {
            let open = s.inner.iter().chain(&s.outer).filter(|e| !sliced.contains(e)).count();
            4f64.powi(open as i32)
        })
        .fold(0.0, |a, c| a + c);
    let n = slices.num_slices() as f64;
    let overhead = (n * per_slice - base).max(0.0) + (n - 1.0);
    (base + overhead) * states
}

/// `prior * states / c_tn`, or 1 when nothing is contracted.
pub fn advantage(prior: f64, states: f64, c_tn: f64) -> f64 {
    if c_tn > 0.0 {
        prior * states / c_tn
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcircuitCost {
    pub u: usize,
    pub d: usize,
    pub w: usize,
    pub t: usize,
}

impl From<&Subcircuit> for SubcircuitCost {
    fn from(s: &Subcircuit) -> Self {
        SubcircuitCost {
            u: s.u(),
            d: s.d(),
            w: s.width,
            t: s.depth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub schema: u32,
    /// QPU seconds with subcircuits spread over `num_qpus` devices.
    pub t_qpu: f64,
    pub t_qpu_serial: f64,
    pub t_classical: f64,
    /// `t_qpu + t_classical`.
    pub t_total: f64,
    pub c_tn: f64,
    pub per_state_cost: f64,
    pub states: f64,
    /// Per-state cost of the direct Kronecker-sum reconstruction.
    pub prior_cost: f64,
    /// `prior_cost * states / c_tn`; 1 when nothing is contracted.
    pub advantage: f64,
    pub subcircuits: Vec<SubcircuitCost>,
    pub config: CostModelConfig,
}

pub fn total_runtime(
    plan: &CutPlan,
    tree: &ContractionTree,
    slices: &SlicePlan,
    states: f64,
    cfg: &CostModelConfig,
) -> Result<CostReport> {
    cfg.validate()?;
    if tree.m != plan.m() {
        return Err(Error::NetworkMismatch(format!(
            "tree over {} tensors for {} subcircuits",
            tree.m,
            plan.m()
        )));
    }
    let qpu = qpu_runtime(plan, cfg);
    let c_tn = contraction_cost(tree, slices, states);
    let t_classical = classical_runtime(c_tn, cfg);
    let prior = prior_cost(plan.num_cuts(), plan.m());
    Ok(CostReport {
        schema: SCHEMA_VERSION,
        t_qpu: qpu.parallel,
        t_qpu_serial: qpu.serial,
        t_classical,
        t_total: qpu.parallel + t_classical,
        c_tn,
        per_state_cost: per_state_cost(tree),
        states,
        prior_cost: prior,
        advantage: advantage(prior, states, c_tn),
        subcircuits: plan.subcircuits.iter().map(SubcircuitCost::from).collect(),
        config: *cfg,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema: u32,
    /// True probability mass of the reconstructed states.
    pub p_hss: f64,
    /// Sum of the reconstructed values themselves.
    pub p_hss_reconstructed: f64,
    /// Mass of the `|HSS|` heaviest states of the true distribution.
    pub p_hss_max: f64,
    pub r_p_hss: f64,
    pub hss_size: u64,
    /// `|HSS| / 2^n`.
    pub r_size: f64,
    /// `p_hss / r_size`.
    pub eta_hss: f64,
    pub mse: f64,
}

/// Mean squared error over equal-length vectors.
pub fn mse(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "mse needs equal lengths");
    if a.is_empty() {
        return 0.0;
    }
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64
}

pub fn hss_metrics(recon: &ReconstructedDistribution, truth: &[f64]) -> Result<MetricsReport> {
    let n = recon.num_qubits;
    let space = 1usize << n;
    if truth.len() != space {
        return Err(Error::InvalidDistribution(format!(
            "ground truth has {} entries for {n} qubits",
            truth.len()
        )));
    }
    let size = recon.len();
    if size > space {
        return Err(Error::Selection(format!("|HSS| = {size} exceeds 2^{n}")));
    }
    let p_hss: f64 = recon.states.iter().map(|&s| truth[s as usize]).sum();
    let mut sorted = truth.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let p_hss_max: f64 = sorted[..size].iter().sum();
    let r_size = size as f64 / space as f64;
    Ok(MetricsReport {
        schema: SCHEMA_VERSION,
        p_hss,
        p_hss_reconstructed: recon.total(),
        p_hss_max,
        r_p_hss: if p_hss_max > 0.0 { p_hss / p_hss_max } else { 0.0 },
        hss_size: size as u64,
        r_size,
        eta_hss: p_hss / r_size,
        mse: mse(&recon.to_dense(), truth),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{NetworkShape, Nested};

    fn distribution(n: usize, states: Vec<u64>, values: Vec<f64>) -> ReconstructedDistribution {
        let full = states.len() == 1 << n;
        ReconstructedDistribution {
            num_qubits: n,
            states,
            values,
            normalization: 1.0,
            full,
        }
    }

    #[test]
    fn single_term_substitution() {
        let t = subcircuit_runtime(1, 0, 3, 2, &CostModelConfig::default());
        assert!((t - 2.88e-5).abs() < 1e-18);
    }

    #[test]
    fn classical_is_division() {
        let cfg = CostModelConfig::default();
        assert!((classical_runtime(144e6, &cfg) - 1.44e-4).abs() < 1e-18);
        assert_eq!(classical_runtime(0.0, &cfg), 0.0);
    }

    #[test]
    fn slicing_overhead_is_nonnegative() {
        let shape = NetworkShape::from_edges(4, &[(0, 1), (1, 2), (1, 3), (2, 3)]);
        let tree = ContractionTree::from_nested(&shape, &Nested::chain(4)).unwrap();
        assert_eq!(contraction_cost(&tree, &SlicePlan::default(), 1.0), 144.0);
        let plan = SlicePlan {
            level1: vec![0],
            level2: vec![],
        };
        // Steps touch {0,1,2}, {1,2,3}, {2,3}: 4 * (16 + 64 + 16) = 384, plus 3 additions.
        assert_eq!(contraction_cost(&tree, &plan, 1.0), 384.0 + 3.0);
    }

    #[test]
    fn full_exact_reconstruction_metrics() {
        let truth = vec![0.25, 0.25, 0.5, 0.0];
        let r = distribution(2, vec![0, 1, 2, 3], truth.clone());
        let m = hss_metrics(&r, &truth).unwrap();
        assert_eq!(m.p_hss, 1.0);
        assert_eq!(m.eta_hss, 1.0);
        assert_eq!(m.mse, 0.0);
        assert_eq!(m.r_p_hss, 1.0);
    }

    #[test]
    fn uniform_truth_gives_unit_ratio() {
        let truth = vec![0.125; 8];
        for states in [vec![3], vec![0, 5, 6], vec![1, 2, 4, 7]] {
            let vals = vec![0.125; states.len()];
            let m = hss_metrics(&distribution(3, states, vals), &truth).unwrap();
            assert!((m.r_p_hss - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn eta_for_two_states_of_twenty_qubits() {
        let n = 20;
        let mut truth = vec![0.0; 1 << n];
        truth[0] = 0.5;
        truth[(1 << n) - 1] = 0.5;
        let r = distribution(n, vec![0, (1 << n) - 1], vec![0.5, 0.5]);
        let m = hss_metrics(&r, &truth).unwrap();
        assert_eq!(m.eta_hss, 524288.0);
        assert_eq!(m.p_hss_max, 1.0);
    }

    #[test]
    fn mse_basics() {
        let a = [0.1, 0.2, 0.7];
        let b = [0.2, 0.2, 0.6];
        assert_eq!(mse(&a, &a), 0.0);
        assert_eq!(mse(&a, &b), mse(&b, &a));
        assert!((mse(&a, &b) - 0.02 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn config_must_be_positive() {
        let mut cfg = CostModelConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.flops = 0.0;
        assert!(cfg.validate().is_err());
    }
}
