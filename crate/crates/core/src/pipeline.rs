//! End-to-end workflows: cut, estimate, run and verify.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circuit::Circuit;
use crate::cost::{
    contraction_cost, hss_metrics, total_runtime, CostModelConfig, CostReport, MetricsReport,
    SCHEMA_VERSION,
};
use crate::cutter::{extract_subcircuits, CutPlan};
use crate::dag::{build_dag, CutDag};
use crate::error::{Error, Result};
use crate::finder::{find_cuts, FinderConfig, PartitionState};
use crate::hss::{select_heavy_states, Selection};
use crate::sim::{probabilities, run_subcircuit, SimMode, SubcircuitTensor, DEFAULT_QUBIT_CAP};
use crate::tensor::{
    build_network, contract, find_order, k_max, per_state_cost, slice_network, ContractOutput,
    ContractionTree, Nested, SlicePlan, DEFAULT_RESTARTS,
};

/// Circuits up to this width get an embedded oracle comparison in `run`.
pub const ORACLE_QUBIT_LIMIT: usize = 20;
/// L-infinity tolerance of `verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-8;
/// Default cap on elements of any materialized tensor (1 GiB of f64).
pub const DEFAULT_MEMORY_CAP: usize = 1 << 27;

/// Hex SHA-256 of the input bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone)]
pub struct CutResult {
    pub dag: CutDag,
    pub partition: PartitionState,
    pub plan: CutPlan,
}

/// Finds cuts for `c` and extracts the subcircuits.
pub fn cut(c: &Circuit, cfg: &FinderConfig) -> Result<CutResult> {
    cfg.validate()?;
    let dag = build_dag(c);
    let partition = find_cuts(&dag, cfg)?;
    let plan = extract_subcircuits(c, &dag, &partition)?;
    plan.check_constraints(cfg.w_max, cfg.s_max)?;
    Ok(CutResult { dag, partition, plan })
}

/// Rebuilds a plan from the partitions of a cut-plan report.
pub fn cut_from_report(c: &Circuit, report: &CutPlanReport) -> Result<CutResult> {
    if report.num_qubits != c.num_qubits() {
        return Err(Error::Config(format!(
            "plan is for {} qubits, circuit has {}",
            report.num_qubits,
            c.num_qubits()
        )));
    }
    let dag = build_dag(c);
    let mut owner = vec![usize::MAX; c.len()];
    for (k, p) in report.partitions.iter().enumerate() {
        for &g in &p.gate_indices {
            if g >= c.len() {
                return Err(Error::Config(format!("gate index {g} outside the circuit")));
            }
            owner[g] = k;
        }
    }
    let labels: Vec<usize> = (0..dag.num_vertices())
        .map(|v| match owner[dag.gate_index(v)] {
            usize::MAX => Err(Error::UnassignedVertex(v)),
            k => Ok(k),
        })
        .collect::<Result<_>>()?;
    let partition = PartitionState::from_assignment(&dag, &labels)?;
    let plan = extract_subcircuits(c, &dag, &partition)?;
    Ok(CutResult { dag, partition, plan })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub id: usize,
    pub gate_indices: Vec<usize>,
    pub w: usize,
    pub s: usize,
    pub u: usize,
    pub d: usize,
    pub o: usize,
    pub depth: usize,
    pub total_gates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub id: usize,
    pub qubit: usize,
    pub from_gate: usize,
    pub to_gate: usize,
    pub upstream: (usize, usize),
    pub downstream: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutPlanReport {
    pub schema: u32,
    pub num_qubits: usize,
    pub m: usize,
    pub num_cuts: usize,
    pub partitions: Vec<PartitionReport>,
    pub cuts: Vec<CutReport>,
    pub config: FinderConfig,
}

impl CutPlanReport {
    pub fn new(plan: &CutPlan, cfg: &FinderConfig) -> Self {
        CutPlanReport {
            schema: SCHEMA_VERSION,
            num_qubits: plan.num_qubits,
            m: plan.m(),
            num_cuts: plan.num_cuts(),
            partitions: plan
                .subcircuits
                .iter()
                .map(|s| PartitionReport {
                    id: s.id,
                    gate_indices: s.gate_indices.clone(),
                    w: s.width,
                    s: s.size,
                    u: s.u(),
                    d: s.d(),
                    o: s.o(),
                    depth: s.depth,
                    total_gates: s.gate_indices.len(),
                })
                .collect(),
            cuts: plan
                .cut_edges
                .iter()
                .map(|e| CutReport {
                    id: e.id,
                    qubit: e.origin_qubit,
                    from_gate: e.from_gate,
                    to_gate: e.to_gate,
                    upstream: (e.upstream.subcircuit, e.upstream.local_qubit),
                    downstream: (e.downstream.subcircuit, e.downstream.local_qubit),
                })
                .collect(),
            config: *cfg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub finder: FinderConfig,
    pub mode: SimMode,
    /// Heavy-state budget; `None` reconstructs every state.
    pub hss_budget: Option<u64>,
    pub order_restarts: usize,
    pub order_seed: u64,
    pub memory_cap: usize,
    pub qubit_cap: usize,
    pub cost: CostModelConfig,
    pub top_k: usize,
}

impl RunConfig {
    pub fn new(finder: FinderConfig) -> Self {
        RunConfig {
            finder,
            mode: SimMode::Exact,
            hss_budget: None,
            order_restarts: DEFAULT_RESTARTS,
            order_seed: 0,
            memory_cap: DEFAULT_MEMORY_CAP,
            qubit_cap: DEFAULT_QUBIT_CAP,
            cost: CostModelConfig::default(),
            top_k: 16,
        }
    }
}

/// Number of states a reconstruction produces: `2^n` or the HSS budget.
pub fn reconstructed_states(num_qubits: usize, hss_budget: Option<u64>) -> f64 {
    let full = 2f64.powi(num_qubits as i32);
    hss_budget.map_or(full, |b| (b as f64).min(full))
}

/// Cost estimate without simulating anything.
pub fn estimate(plan: &CutPlan, cfg: &RunConfig) -> Result<(ContractionTree, SlicePlan, CostReport)> {
    let shape = crate::tensor::NetworkShape {
        edges: plan
            .cut_edges
            .iter()
            .map(|e| (e.upstream.subcircuit, e.downstream.subcircuit))
            .collect(),
        out_dims: plan
            .subcircuits
            .iter()
            .map(|s| {
                let full = 1usize.checked_shl(s.o() as u32).unwrap_or(usize::MAX);
                cfg.hss_budget.map_or(full, |b| full.min(b as usize))
            })
            .collect(),
    };
    let tree = find_order(&shape, cfg.order_restarts, cfg.order_seed)?;
    let slices = slice_network(&shape, &tree, cfg.memory_cap).unwrap_or_default();
    let states = reconstructed_states(plan.num_qubits, cfg.hss_budget);
    let report = total_runtime(plan, &tree, &slices, states, &cfg.cost)?;
    Ok((tree, slices, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub linf: f64,
    pub l1: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares a full reconstruction against the uncut distribution.
pub fn compare(reconstructed: &[f64], truth: &[f64]) -> Verification {
    let linf = reconstructed
        .iter()
        .zip(truth)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let l1 = reconstructed.iter().zip(truth).map(|(a, b)| (a - b).abs()).sum();
    Verification {
        linf,
        l1,
        tolerance: VERIFY_TOLERANCE,
        passed: linf <= VERIFY_TOLERANCE,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub tree: Nested,
    pub step_costs: Vec<f64>,
    pub k_max: usize,
    pub per_state_cost: f64,
    pub slices: SlicePlan,
    pub num_slices: usize,
    pub peak_elements: usize,
    pub c_tn: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub cut: CutResult,
    pub tensors: Vec<SubcircuitTensor>,
    pub tree: ContractionTree,
    pub slices: SlicePlan,
    pub selection: Option<Selection>,
    pub contraction: ContractOutput,
    pub cost: CostReport,
    /// Uncut distribution, when the circuit is small enough to simulate.
    pub truth: Option<Vec<f64>>,
}

impl RunOutput {
    pub fn contraction_report(&self) -> ContractionReport {
        ContractionReport {
            tree: self.tree.to_nested(),
            step_costs: self.tree.steps.iter().map(|s| s.cost).collect(),
            k_max: k_max(&self.tree),
            per_state_cost: per_state_cost(&self.tree),
            slices: self.slices.clone(),
            num_slices: self.contraction.num_slices,
            peak_elements: self.contraction.peak_elements,
            c_tn: self.cost.c_tn,
        }
    }

    pub fn metrics(&self) -> Result<Option<MetricsReport>> {
        match &self.truth {
            Some(t) => Ok(Some(hss_metrics(&self.contraction.distribution, t)?)),
            None => Ok(None),
        }
    }

    /// Oracle comparison of a full reconstruction.
    pub fn verification(&self) -> Option<Verification> {
        let truth = self.truth.as_ref()?;
        if !self.contraction.distribution.full {
            return None;
        }
        Some(compare(&self.contraction.distribution.to_dense(), truth))
    }
}

/// Simulates every subcircuit of an existing plan and reconstructs.
pub fn run_plan(c: &Circuit, cut: CutResult, cfg: &RunConfig) -> Result<RunOutput> {
    let tensors: Vec<SubcircuitTensor> = cut
        .plan
        .subcircuits
        .iter()
        .map(|s| run_subcircuit(s, cfg.mode, cfg.qubit_cap))
        .collect::<Result<_>>()?;
    let net = build_network(&cut.plan, &tensors)?;
    let selection = match cfg.hss_budget {
        Some(b) => Some(select_heavy_states(&tensors, b)?),
        None => None,
    };
    let sel_states = selection.as_ref().map(Selection::sorted_states);
    let mut shape = net.shape();
    if let Some(s) = &sel_states {
        shape.out_dims = s.iter().map(Vec::len).collect();
    }
    let tree = find_order(&shape, cfg.order_restarts, cfg.order_seed)?;
    let slices = slice_network(&shape, &tree, cfg.memory_cap)?;
    let contraction = contract(&net, &tree, &slices, sel_states.as_deref(), Some(cfg.memory_cap))?;
    let states = contraction.distribution.len() as f64;
    let cost = total_runtime(&cut.plan, &tree, &slices, states, &cfg.cost)?;
    debug_assert_eq!(cost.c_tn, contraction_cost(&tree, &slices, states));
    let truth = if c.num_qubits() <= ORACLE_QUBIT_LIMIT {
        Some(probabilities(c)?)
    } else {
        None
    };
    Ok(RunOutput {
        cut,
        tensors,
        tree,
        slices,
        selection,
        contraction,
        cost,
        truth,
    })
}

/// Cuts, simulates and reconstructs `c`.
pub fn run(c: &Circuit, cfg: &RunConfig) -> Result<RunOutput> {
    let cut = cut(c, &cfg.finder)?;
    run_plan(c, cut, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSummary {
    pub num_qubits: usize,
    pub m: usize,
    pub num_cuts: usize,
    pub max_width: usize,
    pub max_size: usize,
}

impl PlanSummary {
    pub fn new(plan: &CutPlan) -> Self {
        PlanSummary {
            num_qubits: plan.num_qubits,
            m: plan.m(),
            num_cuts: plan.num_cuts(),
            max_width: plan.subcircuits.iter().map(|s| s.width).max().unwrap_or(0),
            max_size: plan.subcircuits.iter().map(|s| s.size).max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopState {
    pub state: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub input_digest: String,
    pub config: RunConfig,
    pub plan: PlanSummary,
    pub contraction: ContractionReport,
    pub hss: Option<Selection>,
    pub cost: CostReport,
    pub metrics: Option<MetricsReport>,
    pub verification: Option<Verification>,
    pub top_states: Vec<TopState>,
}

impl RunReport {
    pub fn new(out: &RunOutput, cfg: &RunConfig, input_digest: String) -> Result<Self> {
        let d = &out.contraction.distribution;
        Ok(RunReport {
            schema: SCHEMA_VERSION,
            input_digest,
            config: cfg.clone(),
            plan: PlanSummary::new(&out.cut.plan),
            contraction: out.contraction_report(),
            hss: out.selection.clone(),
            cost: out.cost.clone(),
            metrics: out.metrics()?,
            verification: out.verification(),
            top_states: d
                .top_k(cfg.top_k)
                .into_iter()
                .map(|(s, v)| TopState {
                    state: d.bitstring(s),
                    value: v,
                })
                .collect(),
        })
    }
}

/// Exact full reconstruction compared against the uncut simulation.
pub fn verify(c: &Circuit, cut: CutResult, cfg: &RunConfig) -> Result<Verification> {
    let mut cfg = cfg.clone();
    cfg.mode = SimMode::Exact;
    cfg.hss_budget = None;
    if c.num_qubits() > cfg.qubit_cap {
        return Err(Error::SimulatorCap {
            width: c.num_qubits(),
            cap: cfg.qubit_cap,
        });
    }
    let out = run_plan(c, cut, &cfg)?;
    let truth = match out.truth {
        Some(ref t) => t.clone(),
        None => probabilities(c)?,
    };
    Ok(compare(&out.contraction.distribution.to_dense(), &truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gen_benchmark, parse_circuit, BenchmarkKind, BenchmarkParams};

    #[test]
    fn ghz_three_with_two_qubit_budget() {
        let c = gen_benchmark(BenchmarkKind::Ghz, 3, 0, &BenchmarkParams::default()).unwrap();
        let mut cfg = RunConfig::new(FinderConfig::new(2, 1));
        cfg.hss_budget = Some(4);
        let out = run(&c, &cfg).unwrap();
        assert_eq!(out.cut.plan.m(), 2);
        assert_eq!(out.cut.plan.num_cuts(), 1);
        let report = RunReport::new(&out, &cfg, digest(b"x")).unwrap();
        assert_eq!(report.top_states[0].state, "000");
        assert_eq!(report.top_states[1].state, "111");
        assert!((report.top_states[0].value - 0.5).abs() < 1e-12);
        assert!((report.top_states[1].value - 0.5).abs() < 1e-12);
        let v = verify(&c, cut(&c, &cfg.finder).unwrap(), &cfg).unwrap();
        assert!(v.passed, "{v:?}");
    }

    #[test]
    fn plan_report_round_trips() {
        let c = gen_benchmark(BenchmarkKind::Supremacy, 12, 1, &BenchmarkParams::default()).unwrap();
        let cfg = FinderConfig::new(6, c.two_qubit_count() / 2);
        let a = cut(&c, &cfg).unwrap();
        let report = CutPlanReport::new(&a.plan, &cfg);
        let json = serde_json::to_string(&report).unwrap();
        let back: CutPlanReport = serde_json::from_str(&json).unwrap();
        let b = cut_from_report(&c, &back).unwrap();
        assert_eq!(a.plan, b.plan);
    }

    #[test]
    fn uncut_circuit_has_no_classical_cost() {
        let c = parse_circuit("qubits 3\nh 0\ncx 0 1\ncx 1 2").unwrap();
        let cfg = RunConfig::new(FinderConfig::new(3, 10));
        let r = cut(&c, &cfg.finder).unwrap();
        assert_eq!(r.plan.num_cuts(), 0);
        let (_, _, cost) = estimate(&r.plan, &cfg).unwrap();
        assert_eq!(cost.t_classical, 0.0);
        assert_eq!(cost.t_total, cost.t_qpu);
    }

    #[test]
    fn infeasible_width() {
        let c = parse_circuit("qubits 2\ncx 0 1").unwrap();
        assert!(matches!(cut(&c, &FinderConfig::new(1, 1)), Err(Error::Infeasible(_))));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
