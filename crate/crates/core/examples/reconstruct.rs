//! Reconstruct a cut circuit's full distribution and compare with direct
//! simulation of the uncut circuit.

use qcut::pipeline::{self, RunConfig};
use qcut::{gen_benchmark, BenchmarkKind, BenchmarkParams, FinderConfig};

fn main() {
    let c = gen_benchmark(BenchmarkKind::Erdos, 10, 7, &BenchmarkParams::default()).unwrap();
    let cfg = RunConfig::new(FinderConfig::new(6, c.two_qubit_count()));
    let out = pipeline::run(&c, &cfg).unwrap();

    let plan = &out.cut.plan;
    println!("{} qubits cut into {} subcircuits with {} cuts", c.num_qubits(), plan.m(), plan.num_cuts());
    let widths: Vec<usize> = plan.subcircuits.iter().map(|s| s.width).collect();
    println!("subcircuit widths {widths:?}");

    let v = out.verification().expect("10 qubits is under the oracle limit");
    println!("max abs error {:.3e}, L1 error {:.3e}, passed {}", v.linf, v.l1, v.passed);

    let d = &out.contraction.distribution;
    println!("\nheaviest states:");
    for (state, p) in d.top_k(5) {
        println!("  {} {p:.6}", d.bitstring(state));
    }
}
