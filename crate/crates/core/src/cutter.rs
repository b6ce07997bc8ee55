//! Turns a gate partition into executable subcircuits.

use serde::Serialize;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::dag::CutDag;
use crate::error::{Error, Result};
use crate::finder::PartitionState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CutEnd {
    pub subcircuit: usize,
    pub local_qubit: usize,
}

/// One severed wire segment. Its tensor index always has dimension 4.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutEdge {
    pub id: usize,
    pub origin_qubit: usize,
    /// Circuit gate index of the last gate before the cut.
    pub from_gate: usize,
    /// Circuit gate index of the first gate after the cut.
    pub to_gate: usize,
    pub upstream: CutEnd,
    pub downstream: CutEnd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subcircuit {
    pub id: usize,
    #[serde(skip)]
    pub circuit: Circuit,
    /// Indices of the original circuit's gates, in program order.
    pub gate_indices: Vec<usize>,
    /// `(local qubit, cut edge id)` measured at the end, ordered by edge id.
    pub upstream_cuts: Vec<(usize, usize)>,
    /// `(local qubit, cut edge id)` initialized at the start, ordered by edge id.
    pub downstream_cuts: Vec<(usize, usize)>,
    /// `(local qubit, original qubit)` for qubits carrying a final output,
    /// ordered by local qubit. The first entry is the most significant bit
    /// of the output axis.
    pub output_map: Vec<(usize, usize)>,
    /// `(original qubit, run index)` of every local qubit.
    pub local_origin: Vec<(usize, usize)>,
    pub width: usize,
    pub depth: usize,
    /// Two-qubit gates.
    pub size: usize,
}

impl Subcircuit {
    pub fn u(&self) -> usize {
        self.upstream_cuts.len()
    }

    pub fn d(&self) -> usize {
        self.downstream_cuts.len()
    }

    pub fn o(&self) -> usize {
        self.output_map.len()
    }

    /// Incident cut edges in tensor axis order (ascending edge id).
    pub fn incident_edges(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self
            .upstream_cuts
            .iter()
            .chain(&self.downstream_cuts)
            .map(|&(_, id)| id)
            .collect();
        e.sort_unstable();
        e
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutPlan {
    pub num_qubits: usize,
    pub subcircuits: Vec<Subcircuit>,
    pub cut_edges: Vec<CutEdge>,
}

impl CutPlan {
    pub fn m(&self) -> usize {
        self.subcircuits.len()
    }

    pub fn num_cuts(&self) -> usize {
        self.cut_edges.len()
    }

    /// Checks every subcircuit against width and two-qubit gate budgets.
    pub fn check_constraints(&self, w_max: usize, s_max: usize) -> Result<()> {
        for s in &self.subcircuits {
            if s.width == 0 || s.width > w_max || s.size > s_max {
                return Err(Error::Infeasible(format!(
                    "subcircuit {} has w={} s={} (limits w_max={w_max}, s_max={s_max})",
                    s.id, s.width, s.size
                )));
            }
        }
        Ok(())
    }
}

/// Splits `c` along the partition in `state`.
pub fn extract_subcircuits(c: &Circuit, dag: &CutDag, state: &PartitionState) -> Result<CutPlan> {
    let n = c.num_qubits();
    if state.assignment().len() != dag.num_vertices() {
        return Err(Error::UnassignedVertex(state.assignment().len()));
    }
    // Partition ids are min vertex ids, so ascending id is first-gate order.
    let pids: Vec<usize> = state.partition_ids().collect();
    let m = pids.len().max(1);
    let sub_of_vertex: Vec<usize> = (0..dag.num_vertices())
        .map(|v| pids.binary_search(&state.partition_of(v)).unwrap())
        .collect();

    let mut vertex_of_gate = vec![None; c.len()];
    for v in 0..dag.num_vertices() {
        vertex_of_gate[dag.gate_index(v)] = Some(v);
    }

    // Per qubit, gate indices in program order.
    let mut qubit_gates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (gi, g) in c.gates().iter().enumerate() {
        for &q in &g.qubits {
            qubit_gates[q].push(gi);
        }
    }

    // Subcircuit of each gate. Two-qubit gates follow the partition; a
    // single-qubit gate joins the nearest preceding two-qubit gate on its
    // wire, else the nearest following one.
    let mut sub_of_gate: Vec<Option<usize>> = vec![None; c.len()];
    let mut idle = Vec::new();
    for q in 0..n {
        let wire = &qubit_gates[q];
        let two_q: Vec<(usize, usize)> = wire
            .iter()
            .enumerate()
            .filter_map(|(pos, &gi)| vertex_of_gate[gi].map(|v| (pos, sub_of_vertex[v])))
            .collect();
        if two_q.is_empty() {
            idle.push(q);
            continue;
        }
        let mut current = two_q[0].1;
        for &gi in wire {
            if let Some(v) = vertex_of_gate[gi] {
                current = sub_of_vertex[v];
            }
            if !c.gates()[gi].is_two_qubit() {
                sub_of_gate[gi] = Some(current);
            } else {
                sub_of_gate[gi] = Some(sub_of_vertex[vertex_of_gate[gi].unwrap()]);
            }
        }
    }

    // Runs: maximal stretches of one wire inside one subcircuit.
    struct Run {
        sub: usize,
        gates: Vec<usize>,
    }
    let mut runs: Vec<Vec<Run>> = (0..n).map(|_| Vec::new()).collect();
    for q in 0..n {
        for &gi in &qubit_gates[q] {
            let Some(s) = sub_of_gate[gi] else { continue };
            match runs[q].last_mut() {
                Some(r) if r.sub == s => r.gates.push(gi),
                _ => runs[q].push(Run { sub: s, gates: vec![gi] }),
            }
        }
    }

    // Idle wires (no two-qubit gate) ride along with the narrowest subcircuit.
    let mut widths = vec![0usize; m];
    for q in 0..n {
        for r in &runs[q] {
            widths[r.sub] += 1;
        }
    }
    for &q in &idle {
        let target = (0..m).min_by_key(|&s| (widths[s], s)).unwrap();
        widths[target] += 1;
        for &gi in &qubit_gates[q] {
            sub_of_gate[gi] = Some(target);
        }
        runs[q].push(Run {
            sub: target,
            gates: qubit_gates[q].clone(),
        });
    }

    // Local qubit numbering: (origin qubit, run index) ascending.
    let mut local_origin: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    let mut local_of_run: Vec<Vec<usize>> = vec![Vec::new(); n];
    for q in 0..n {
        for (ri, r) in runs[q].iter().enumerate() {
            local_of_run[q].push(local_origin[r.sub].len());
            local_origin[r.sub].push((q, ri));
        }
    }

    let mut cut_edges = Vec::new();
    let mut upstream: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    let mut downstream: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    let mut outputs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for q in 0..n {
        for (ri, pair) in runs[q].windows(2).enumerate() {
            let id = cut_edges.len();
            let up = CutEnd {
                subcircuit: pair[0].sub,
                local_qubit: local_of_run[q][ri],
            };
            let down = CutEnd {
                subcircuit: pair[1].sub,
                local_qubit: local_of_run[q][ri + 1],
            };
            upstream[up.subcircuit].push((up.local_qubit, id));
            downstream[down.subcircuit].push((down.local_qubit, id));
            cut_edges.push(CutEdge {
                id,
                origin_qubit: q,
                from_gate: *pair[0].gates.last().unwrap(),
                to_gate: pair[1].gates[0],
                upstream: up,
                downstream: down,
            });
        }
        let last = runs[q].len() - 1;
        outputs[runs[q][last].sub].push((local_of_run[q][last], q));
    }

    let mut subcircuits = Vec::with_capacity(m);
    for s in 0..m {
        let width = local_origin[s].len();
        // global qubit + run -> local qubit, resolved gate by gate
        let mut run_cursor = vec![0usize; n];
        let mut local_circuit = Circuit::new(width.max(1));
        let mut gate_indices = Vec::new();
        for (gi, g) in c.gates().iter().enumerate() {
            // advance run cursors on every wire this gate touches
            let mut locals = Vec::with_capacity(g.qubits.len());
            for &q in &g.qubits {
                while runs[q][run_cursor[q]].gates.last().copied().unwrap_or(usize::MAX) < gi {
                    run_cursor[q] += 1;
                }
                locals.push(local_of_run[q][run_cursor[q]]);
            }
            if sub_of_gate[gi] != Some(s) {
                continue;
            }
            gate_indices.push(gi);
            local_circuit.push(Gate {
                kind: g.kind,
                params: g.params.clone(),
                qubits: locals,
            });
        }
        let mut up = std::mem::take(&mut upstream[s]);
        let mut down = std::mem::take(&mut downstream[s]);
        up.sort_by_key(|&(_, id)| id);
        down.sort_by_key(|&(_, id)| id);
        let mut out = std::mem::take(&mut outputs[s]);
        out.sort_unstable();
        subcircuits.push(Subcircuit {
            id: s,
            size: local_circuit.two_qubit_count(),
            depth: local_circuit.depth(),
            circuit: local_circuit,
            gate_indices,
            upstream_cuts: up,
            downstream_cuts: down,
            output_map: out,
            local_origin: std::mem::take(&mut local_origin[s]),
            width,
        });
    }

    Ok(CutPlan {
        num_qubits: n,
        subcircuits,
        cut_edges,
    })
}

/// Upstream measurement setting. `Z` serves both the I and Z bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MeasSetting {
    Z,
    X,
    Y,
}

impl MeasSetting {
    pub const ALL: [MeasSetting; 3] = [MeasSetting::Z, MeasSetting::X, MeasSetting::Y];
}

/// Downstream initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InitState {
    Zero,
    One,
    Plus,
    PlusI,
}

impl InitState {
    pub const ALL: [InitState; 4] = [InitState::Zero, InitState::One, InitState::Plus, InitState::PlusI];
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    /// One setting per upstream cut, in `upstream_cuts` order.
    pub meas: Vec<MeasSetting>,
    /// One state per downstream cut, in `downstream_cuts` order.
    pub init: Vec<InitState>,
    pub circuit: Circuit,
}

/// Index of a variant in [`enumerate_variants`] order.
pub fn variant_index(meas: &[MeasSetting], init: &[InitState]) -> usize {
    let mut idx = 0;
    for m in meas {
        idx = idx * 3 + MeasSetting::ALL.iter().position(|x| x == m).unwrap();
    }
    for i in init {
        idx = idx * 4 + InitState::ALL.iter().position(|x| x == i).unwrap();
    }
    idx
}

/// Builds the circuit for one measurement/initialization setting.
pub fn variant_circuit(s: &Subcircuit, meas: &[MeasSetting], init: &[InitState]) -> Circuit {
    let mut c = Circuit::new(s.circuit.num_qubits());
    for (&(q, _), st) in s.downstream_cuts.iter().zip(init) {
        match st {
            InitState::Zero => {}
            InitState::One => c.push(Gate::one(GateKind::X, q)),
            InitState::Plus => c.push(Gate::one(GateKind::H, q)),
            InitState::PlusI => {
                c.push(Gate::one(GateKind::H, q));
                c.push(Gate::one(GateKind::S, q));
            }
        }
    }
    for g in s.circuit.gates() {
        c.push(g.clone());
    }
    for (&(q, _), m) in s.upstream_cuts.iter().zip(meas) {
        match m {
            MeasSetting::Z => {}
            MeasSetting::X => c.push(Gate::one(GateKind::H, q)),
            MeasSetting::Y => {
                c.push(Gate::one(GateKind::Sdg, q));
                c.push(Gate::one(GateKind::H, q));
            }
        }
    }
    c
}

/// All `3^u * 4^d` variants, row-major over (upstream settings, downstream
/// states) with the first cut most significant.
pub fn enumerate_variants(s: &Subcircuit) -> Vec<Variant> {
    let (u, d) = (s.u(), s.d());
    let total = 3usize.pow(u as u32) * 4usize.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut init = vec![InitState::Zero; d];
            for slot in init.iter_mut().rev() {
                *slot = InitState::ALL[idx % 4];
                idx /= 4;
            }
            let mut meas = vec![MeasSetting::Z; u];
            for slot in meas.iter_mut().rev() {
                *slot = MeasSetting::ALL[idx % 3];
                idx /= 3;
            }
            let circuit = variant_circuit(s, &meas, &init);
            Variant { meas, init, circuit }
        })
        .collect()
}
