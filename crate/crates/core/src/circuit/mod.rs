//! Circuit representation and the `.qc` text format.
//!
//! The format is line oriented: a `qubits <n>` header followed by one gate per
//! line, `<name>[(p1,p2,...)] q1 [q2]`. `#` starts a comment. Angles are
//! written with Rust's shortest round-trip float formatting, so parsing a
//! written circuit restores every angle bit-for-bit.
//!
//! Bit convention: qubit 0 is the leftmost character of a bitstring and the
//! most significant bit of a basis-state index.

mod gate;
pub mod generators;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use gate::{gate_matrix, Gate, GateKind};
pub use generators::{gen_benchmark, BenchmarkKind, BenchmarkParams};

use crate::error::{Error, ParseError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    /// Builds a circuit from a gate list, validating operands.
    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self, Error> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.try_push(g)?;
        }
        Ok(c)
    }

    pub fn try_push(&mut self, g: Gate) -> Result<(), Error> {
        if g.qubits.len() != g.kind.arity() || g.params.len() != g.kind.num_params() {
            return Err(Error::InvalidCircuit(format!("malformed gate {g:?}")));
        }
        if let Some(&q) = g.qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::InvalidCircuit(format!(
                "qubit {q} out of range for {} qubits",
                self.num_qubits
            )));
        }
        if g.qubits.len() == 2 && g.qubits[0] == g.qubits[1] {
            return Err(Error::InvalidCircuit(format!("duplicate operand in {g:?}")));
        }
        self.gates.push(g);
        Ok(())
    }

    /// Appends a gate. Panics if the gate does not fit this circuit.
    pub fn push(&mut self, g: Gate) {
        self.try_push(g).expect("invalid gate");
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Length of the greedy left-aligned layering.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let l = g.qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in &g.qubits {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }
}

/// Parses `.qc` text.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    let mut head = header.split_whitespace();
    if head.next() != Some("qubits") {
        return Err(ParseError::MissingHeader { line: hline });
    }
    let count_text = head.next().unwrap_or("");
    let num_qubits: usize = count_text
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ParseError::BadQubitCount {
            line: hline,
            text: count_text.to_string(),
        })?;
    if let Some(extra) = head.next() {
        return Err(ParseError::Malformed {
            line: hline,
            text: extra.to_string(),
        });
    }

    let mut gates = Vec::new();
    for (line, body) in lines {
        gates.push(parse_gate_line(line, body, num_qubits)?);
    }
    Ok(Circuit { num_qubits, gates })
}

fn parse_gate_line(line: usize, body: &str, num_qubits: usize) -> Result<Gate, ParseError> {
    let (head, rest) = match body.find('(') {
        Some(open) => {
            let close = body[open..]
                .find(')')
                .map(|c| c + open)
                .ok_or_else(|| ParseError::Malformed {
                    line,
                    text: body.to_string(),
                })?;
            (&body[..close + 1], &body[close + 1..])
        }
        None => match body.find(char::is_whitespace) {
            Some(sp) => (&body[..sp], &body[sp..]),
            None => (body, ""),
        },
    };

    let (name, params) = match head.find('(') {
        Some(open) => {
            let inner = &head[open + 1..head.len() - 1];
            let params = inner
                .split(',')
                .map(|p| {
                    p.trim().parse::<f64>().map_err(|_| ParseError::Malformed {
                        line,
                        text: p.trim().to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            (head[..open].trim(), params)
        }
        None => (head.trim(), Vec::new()),
    };

    let kind: GateKind = name.parse().map_err(|_| ParseError::UnknownGate {
        line,
        name: name.to_string(),
    })?;
    if params.len() != kind.num_params() {
        return Err(ParseError::ParamCount {
            line,
            name: name.to_string(),
            expected: kind.num_params(),
            found: params.len(),
        });
    }

    let qubits = rest
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| ParseError::Malformed {
                line,
                text: t.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if qubits.len() != kind.arity() {
        return Err(ParseError::Arity {
            line,
            name: name.to_string(),
            expected: kind.arity(),
            found: qubits.len(),
        });
    }
    if qubits.len() == 2 && qubits[0] == qubits[1] {
        return Err(ParseError::DuplicateOperand {
            line,
            qubit: qubits[0],
        });
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= num_qubits) {
        return Err(ParseError::QubitOutOfRange {
            line,
            qubit: q,
            num_qubits,
        });
    }
    Ok(Gate {
        kind,
        params,
        qubits,
    })
}

/// Serializes a circuit to `.qc` text (LF line endings, trailing newline).
pub fn write_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.num_qubits);
    for g in &c.gates {
        out.push_str(g.kind.name());
        if !g.params.is_empty() {
            out.push('(');
            for (i, p) in g.params.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{p:?}");
            }
            out.push(')');
        }
        for q in &g.qubits {
            let _ = write!(out, " {q}");
        }
        out.push('\n');
    }
    out
}
