//! Quantum circuit cutting with tensor-network reconstruction.
//!
//! A circuit too wide for the available QPUs is split at wire cuts into
//! subcircuits that each fit. Every subcircuit runs in all measurement and
//! initialization variants of its cuts, the results become tensors with one
//! 4-dimensional index per cut, and the full output distribution is recovered
//! by contracting the tensor network. Heavy state selection prunes output
//! states before contraction when only the dominant part of the distribution
//! matters.
//!
//! ```
//! use qcut::{parse_circuit, pipeline, FinderConfig};
//!
//! let c = parse_circuit("qubits 3\nh 0\ncx 0 1\ncx 1 2\n").unwrap();
//! let cfg = pipeline::RunConfig::new(FinderConfig::new(2, 1));
//! let out = pipeline::run(&c, &cfg).unwrap();
//! assert_eq!(out.cut.plan.num_cuts(), 1);
//! let p = out.contraction.distribution.to_dense();
//! assert!((p[0b000] - 0.5).abs() < 1e-12 && (p[0b111] - 0.5).abs() < 1e-12);
//! ```

pub mod circuit;
pub mod cost;
pub mod cutter;
pub mod dag;
pub mod error;
pub mod finder;
pub mod hss;
pub mod pipeline;
pub mod sim;
pub mod tensor;

pub use circuit::{
    gen_benchmark, parse_circuit, write_circuit, BenchmarkKind, BenchmarkParams, Circuit, Gate,
    GateKind,
};
pub use cutter::{extract_subcircuits, CutPlan, Subcircuit};
pub use dag::{build_dag, CutDag};
pub use error::{Error, ParseError, Result};
pub use finder::{find_cuts, FinderConfig, PartitionState};
pub use hss::{select_heavy_states, Selection};
pub use sim::{run_subcircuit, simulate, SimMode, SubcircuitTensor};
pub use tensor::{build_network, contract, find_order, slice_network, TensorNetwork};
