//! Two-qubit gate DAG used as the cut-search substrate.
//!
//! Vertices are the circuit's two-qubit gates. Each qubit contributes a chain
//! of wire segments `input -> g1 -> ... -> gk -> output`. Terminal segments
//! always belong to the partition of their adjacent gate and are never cut.

use std::fmt::Write as _;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "vertex")]
pub enum Endpoint {
    Input,
    Gate(usize),
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WireSegment {
    pub qubit: usize,
    pub from: Endpoint,
    pub to: Endpoint,
}

impl WireSegment {
    /// Both ends are gates, so the segment is a cut candidate.
    pub fn gate_to_gate(&self) -> Option<(usize, usize)> {
        match (self.from, self.to) {
            (Endpoint::Gate(a), Endpoint::Gate(b)) => Some((a, b)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutDag {
    num_qubits: usize,
    /// Vertex id -> index into `Circuit::gates`.
    vertices: Vec<usize>,
    /// Vertex id -> its two operand qubits.
    vertex_qubits: Vec<[usize; 2]>,
    segments: Vec<WireSegment>,
    /// Per qubit, the vertex ids touching it in program order.
    wires: Vec<Vec<usize>>,
}

impl CutDag {
    pub fn build(c: &Circuit) -> Self {
        let n = c.num_qubits();
        let mut vertices = Vec::new();
        let mut vertex_qubits = Vec::new();
        let mut wires = vec![Vec::new(); n];
        for (gi, g) in c.gates().iter().enumerate() {
            if g.is_two_qubit() {
                let v = vertices.len();
                vertices.push(gi);
                vertex_qubits.push([g.qubits[0], g.qubits[1]]);
                wires[g.qubits[0]].push(v);
                wires[g.qubits[1]].push(v);
            }
        }
        let mut segments = Vec::new();
        for (q, wire) in wires.iter().enumerate() {
            let mut prev = Endpoint::Input;
            for &v in wire {
                segments.push(WireSegment {
                    qubit: q,
                    from: prev,
                    to: Endpoint::Gate(v),
                });
                prev = Endpoint::Gate(v);
            }
            segments.push(WireSegment {
                qubit: q,
                from: prev,
                to: Endpoint::Output,
            });
        }
        CutDag {
            num_qubits: n,
            vertices,
            vertex_qubits,
            segments,
            wires,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Circuit gate index of vertex `v`.
    pub fn gate_index(&self, v: usize) -> usize {
        self.vertices[v]
    }

    pub fn vertex_qubits(&self, v: usize) -> [usize; 2] {
        self.vertex_qubits[v]
    }

    pub fn segments(&self) -> &[WireSegment] {
        &self.segments
    }

    /// Vertex ids on qubit `q` in program order.
    pub fn wire(&self, q: usize) -> &[usize] {
        &self.wires[q]
    }

    /// Indices of gate-to-gate segments, the only cuttable ones.
    pub fn gate_segments(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.segments
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.gate_to_gate().map(|(a, b)| (i, a, b)))
    }

    fn check_partition(&self, partition: &[usize]) -> Result<()> {
        if partition.len() < self.vertices.len() {
            return Err(Error::UnassignedVertex(partition.len()));
        }
        if let Some(v) = partition
            .iter()
            .take(self.vertices.len())
            .position(|&p| p == usize::MAX)
        {
            return Err(Error::UnassignedVertex(v));
        }
        Ok(())
    }

    /// Segment indices whose endpoints share a partition, including all
    /// terminal segments.
    pub fn internal_segments(&self, partition: &[usize]) -> Result<Vec<usize>> {
        self.check_partition(partition)?;
        Ok(self
            .segments
            .iter()
            .enumerate()
            .filter(|(_, s)| match s.gate_to_gate() {
                Some((a, b)) => partition[a] == partition[b],
                None => true,
            })
            .map(|(i, _)| i)
            .collect())
    }

    /// Segment indices that cross partitions. These are the cuts.
    pub fn crossing_segments(&self, partition: &[usize]) -> Result<Vec<usize>> {
        self.check_partition(partition)?;
        Ok(self
            .gate_segments()
            .filter(|&(_, a, b)| partition[a] != partition[b])
            .map(|(i, _, _)| i)
            .collect())
    }

    /// Graphviz dump; vertices colored by partition when one is given.
    pub fn to_dot(&self, partition: Option<&[usize]>) -> String {
        const PALETTE: [&str; 8] = [
            "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
        ];
        let mut out = String::from("digraph cut_dag {\n  rankdir=LR;\n");
        for q in 0..self.num_qubits {
            let _ = writeln!(out, "  in{q} [label=\"q{q}\", shape=plaintext];");
            let _ = writeln!(out, "  out{q} [label=\"q{q}\", shape=plaintext];");
        }
        for v in 0..self.vertices.len() {
            let [a, b] = self.vertex_qubits[v];
            let fill = partition
                .map(|p| format!(", style=filled, fillcolor=\"{}\"", PALETTE[p[v] % PALETTE.len()]))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "  g{v} [label=\"g{} ({a},{b})\", shape=box{fill}];",
                self.vertices[v]
            );
        }
        let name = |e: Endpoint, q: usize| match e {
            Endpoint::Input => format!("in{q}"),
            Endpoint::Output => format!("out{q}"),
            Endpoint::Gate(v) => format!("g{v}"),
        };
        for s in &self.segments {
            let cut = match (partition, s.gate_to_gate()) {
                (Some(p), Some((a, b))) => p[a] != p[b],
                _ => false,
            };
            let style = if cut { " [style=dashed, color=red]" } else { "" };
            let _ = writeln!(out, "  {} -> {}{style};", name(s.from, s.qubit), name(s.to, s.qubit));
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_dag(c: &Circuit) -> CutDag {
    CutDag::build(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    #[test]
    fn ghz_three_segments() {
        let c = parse_circuit("qubits 3\nh 0\ncx 0 1\ncx 1 2").unwrap();
        let dag = build_dag(&c);
        assert_eq!(dag.num_vertices(), 2);
        assert_eq!(dag.segments().len(), 7);
        let q1: Vec<_> = dag.segments().iter().filter(|s| s.qubit == 1).collect();
        assert_eq!(q1.len(), 3);
        assert_eq!(q1[1].gate_to_gate(), Some((0, 1)));
    }

    #[test]
    fn single_qubit_only() {
        let c = parse_circuit("qubits 3\nh 0\nx 1\nrz(0.1) 2").unwrap();
        let dag = build_dag(&c);
        assert_eq!(dag.num_vertices(), 0);
        assert_eq!(dag.segments().len(), 3);
        assert!(dag
            .segments()
            .iter()
            .all(|s| s.from == Endpoint::Input && s.to == Endpoint::Output));
    }

    #[test]
    fn crossing_and_internal() {
        let c = parse_circuit("qubits 3\ncx 0 1\ncx 1 2\ncx 0 1").unwrap();
        let dag = build_dag(&c);
        let gate_segs = dag.gate_segments().count();
        assert!(dag.crossing_segments(&[0, 0, 0]).unwrap().is_empty());
        assert_eq!(dag.crossing_segments(&[0, 1, 2]).unwrap().len(), gate_segs);
        let cross = dag.crossing_segments(&[0, 1, 0]).unwrap();
        let internal = dag.internal_segments(&[0, 1, 0]).unwrap();
        assert_eq!(cross.len() + internal.len(), dag.segments().len());
        assert!(matches!(dag.crossing_segments(&[0, 1]), Err(Error::UnassignedVertex(2))));
    }

    #[test]
    fn edge_count_formula() {
        let c = parse_circuit("qubits 4\ncx 0 1\ncx 2 3\ncx 1 2\nh 0\ncx 0 3").unwrap();
        let dag = build_dag(&c);
        let expected: usize = (0..4).map(|q| dag.wire(q).len() + 1).sum();
        assert_eq!(dag.segments().len(), expected);
        assert!(dag.to_dot(Some(&[0, 0, 1, 1])).contains("style=dashed"));
    }
}
