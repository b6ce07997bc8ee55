//! Generate each benchmark family and print its size statistics.

use qcut::{gen_benchmark, write_circuit, BenchmarkKind, BenchmarkParams};

fn main() {
    let params = BenchmarkParams::default();
    println!("{:<10} {:>3} {:>6} {:>6} {:>6}", "kind", "n", "gates", "2q", "depth");
    for kind in BenchmarkKind::ALL {
        let c = gen_benchmark(kind, 16, 1, &params).expect("n = 16 is valid for every family");
        println!(
            "{:<10} {:>3} {:>6} {:>6} {:>6}",
            kind.to_string(),
            c.num_qubits(),
            c.len(),
            c.two_qubit_count(),
            c.depth()
        );
    }

    let ghz = gen_benchmark(BenchmarkKind::Ghz, 4, 0, &params).unwrap();
    print!("\n{}", write_circuit(&ghz));
}
