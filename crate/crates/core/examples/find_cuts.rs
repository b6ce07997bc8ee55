//! Cut a benchmark for small devices and print the partition and its DAG.

use qcut::pipeline;
use qcut::{gen_benchmark, BenchmarkKind, BenchmarkParams, FinderConfig};

fn main() {
    let c = gen_benchmark(BenchmarkKind::Regular, 12, 3, &BenchmarkParams::default()).unwrap();
    let cfg = FinderConfig::new(6, c.two_qubit_count() / 2);
    let cut = pipeline::cut(&c, &cfg).expect("regular-12 fits on 6-qubit devices");

    println!("{} subcircuits, {} cuts", cut.plan.m(), cut.plan.num_cuts());
    for (j, s) in cut.plan.subcircuits.iter().enumerate() {
        println!(
            "  sub{j}: width {:>2}, 2q gates {:>2}, upstream {}, downstream {}, outputs {}",
            s.width,
            s.size,
            s.u(),
            s.d(),
            s.o()
        );
    }
    for e in &cut.plan.cut_edges {
        println!("  cut: sub{} -> sub{}", e.upstream.subcircuit, e.downstream.subcircuit);
    }

    // Pipe into `dot -Tsvg` to see the partition.
    println!("\n{}", cut.dag.to_dot(Some(cut.partition.assignment())));
}
