//! Benchmark circuit generators.
//!
//! All generators are deterministic in `(kind, n, seed, params)`. Random draws
//! go through a ChaCha8 stream seeded from `seed`.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Circuit, Gate, GateKind};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkKind {
    Ghz,
    Wstate,
    Regular,
    Erdos,
    Aqft,
    Supremacy,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 6] = [
        BenchmarkKind::Ghz,
        BenchmarkKind::Wstate,
        BenchmarkKind::Regular,
        BenchmarkKind::Erdos,
        BenchmarkKind::Aqft,
        BenchmarkKind::Supremacy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Ghz => "ghz",
            BenchmarkKind::Wstate => "wstate",
            BenchmarkKind::Regular => "regular",
            BenchmarkKind::Erdos => "erdos",
            BenchmarkKind::Aqft => "aqft",
            BenchmarkKind::Supremacy => "supremacy",
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BenchmarkKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown benchmark kind `{s}`"))
    }
}

/// Kind-specific knobs. Unused fields are ignored by the other kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkParams {
    /// Edge probability of the `erdos` graph.
    pub erdos_p: f64,
    /// Largest controlled-phase distance kept by `aqft`. `None` picks
    /// `ceil(log2 n) + 2`.
    pub aqft_degree: Option<usize>,
    /// Number of entangling cycles of `supremacy`.
    pub supremacy_cycles: usize,
}

impl Default for BenchmarkParams {
    fn default() -> Self {
        BenchmarkParams {
            erdos_p: 0.5,
            aqft_degree: None,
            supremacy_cycles: 8,
        }
    }
}

pub fn gen_benchmark(
    kind: BenchmarkKind,
    n: usize,
    seed: u64,
    params: &BenchmarkParams,
) -> Result<Circuit, Error> {
    let unsupported = |reason: &str| Error::UnsupportedSize {
        kind: kind.name().to_string(),
        n,
        reason: reason.to_string(),
    };
    if n < 2 {
        return Err(unsupported("need at least 2 qubits"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = match kind {
        BenchmarkKind::Ghz => ghz(n),
        BenchmarkKind::Wstate => wstate(n),
        BenchmarkKind::Regular => {
            if n < 4 || n % 2 == 1 {
                return Err(unsupported("3-regular graphs need an even n >= 4"));
            }
            let edges = random_regular_graph(n, 3, &mut rng);
            qaoa(n, &edges, &mut rng)
        }
        BenchmarkKind::Erdos => {
            if !(0.0..=1.0).contains(&params.erdos_p) {
                return Err(Error::Config(format!("erdos p={} outside [0,1]", params.erdos_p)));
            }
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.random::<f64>() < params.erdos_p {
                        edges.push((a, b));
                    }
                }
            }
            qaoa(n, &edges, &mut rng)
        }
        BenchmarkKind::Aqft => {
            let degree = params
                .aqft_degree
                .unwrap_or_else(|| (n as f64).log2().ceil() as usize + 2);
            aqft(n, degree)
        }
        BenchmarkKind::Supremacy => {
            if n < 4 {
                return Err(unsupported("grid needs at least 4 qubits"));
            }
            let rows = grid_rows(n);
            if rows < 2 {
                return Err(unsupported("no rows x cols grid with both sides >= 2"));
            }
            supremacy(rows, n / rows, params.supremacy_cycles, &mut rng)
        }
    };
    Ok(c)
}

fn ghz(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    c.push(Gate::one(GateKind::H, 0));
    for q in 0..n - 1 {
        c.push(Gate::two(GateKind::Cx, q, q + 1));
    }
    c
}

/// Linear cascade: excitation starts on qubit 0 and is split off one qubit at
/// a time with a controlled-ry followed by a cx back onto the control.
fn wstate(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    c.push(Gate::one(GateKind::X, 0));
    for k in 0..n - 1 {
        let theta = 2.0 * (1.0 / (n - k) as f64).sqrt().acos();
        controlled_ry(&mut c, theta, k, k + 1);
        c.push(Gate::two(GateKind::Cx, k + 1, k));
    }
    c
}

fn controlled_ry(c: &mut Circuit, theta: f64, control: usize, target: usize) {
    c.push(Gate::rot(GateKind::Ry, theta / 2.0, target));
    c.push(Gate::two(GateKind::Cx, control, target));
    c.push(Gate::rot(GateKind::Ry, -theta / 2.0, target));
    c.push(Gate::two(GateKind::Cx, control, target));
}

fn qaoa(n: usize, edges: &[(usize, usize)], rng: &mut ChaCha8Rng) -> Circuit {
    let gamma = rng.random::<f64>() * 2.0 * PI;
    let beta = rng.random::<f64>() * PI;
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::one(GateKind::H, q));
    }
    for &(a, b) in edges {
        c.push(Gate::two_rot(GateKind::Rzz, gamma, a, b));
    }
    for q in 0..n {
        c.push(Gate::rot(GateKind::Rx, beta, q));
    }
    c
}

/// Pairing-model sampler with rejection of self-loops and multi-edges.
fn random_regular_graph(n: usize, degree: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
        stubs.shuffle(rng);
        let mut edges = BTreeSet::new();
        let ok = stubs.chunks(2).all(|p| {
            let (a, b) = (p[0].min(p[1]), p[0].max(p[1]));
            a != b && edges.insert((a, b))
        });
        if ok {
            return edges.into_iter().collect();
        }
    }
}

fn aqft(n: usize, degree: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for j in 0..n {
        c.push(Gate::one(GateKind::H, j));
        for k in j + 1..n {
            let dist = k - j;
            if dist > degree {
                break;
            }
            c.push(Gate::two_rot(GateKind::Cp, PI / (1u64 << dist) as f64, k, j));
        }
    }
    c
}

fn grid_rows(n: usize) -> usize {
    let mut r = (n as f64).sqrt().floor() as usize;
    while r > 1 && !n.is_multiple_of(r) {
        r -= 1;
    }
    r
}

/// Nearest-neighbour cz patterns on a grid: (horizontal?, edge-start parity,
/// cross-axis parity). Each pattern touches every qubit at most once.
const GRID_PATTERNS: [(bool, usize, usize); 8] = [
    (true, 0, 0),
    (true, 1, 1),
    (false, 0, 0),
    (false, 1, 1),
    (true, 0, 1),
    (true, 1, 0),
    (false, 0, 1),
    (false, 1, 0),
];

fn supremacy(rows: usize, cols: usize, cycles: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let n = rows * cols;
    let idx = |r: usize, col: usize| r * cols + col;
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::one(GateKind::H, q));
    }
    let mut previously_entangled = vec![false; n];
    for cycle in 0..cycles {
        let (horizontal, start, cross) = GRID_PATTERNS[cycle % GRID_PATTERNS.len()];
        let mut pairs = Vec::new();
        if horizontal {
            for r in (cross..rows).step_by(2) {
                for col in (start..cols.saturating_sub(1)).step_by(2) {
                    pairs.push((idx(r, col), idx(r, col + 1)));
                }
            }
        } else {
            for col in (cross..cols).step_by(2) {
                for r in (start..rows.saturating_sub(1)).step_by(2) {
                    pairs.push((idx(r, col), idx(r + 1, col)));
                }
            }
        }
        let mut active = vec![false; n];
        for &(a, b) in &pairs {
            active[a] = true;
            active[b] = true;
            c.push(Gate::two(GateKind::Cz, a, b));
        }
        for q in 0..n {
            if !active[q] && previously_entangled[q] {
                let kind = if rng.random::<bool>() { GateKind::Rx } else { GateKind::Ry };
                c.push(Gate::rot(kind, FRAC_PI_2, q));
            }
        }
        previously_entangled = active;
    }
    for q in 0..n {
        c.push(Gate::one(GateKind::H, q));
    }
    c
}
