//! Finite-shot subcircuit runs: reconstruction error shrinks as shots grow.

use qcut::pipeline::{self, RunConfig};
use qcut::sim::{probabilities, SimMode};
use qcut::{gen_benchmark, BenchmarkKind, BenchmarkParams, FinderConfig};

fn main() {
    let c = gen_benchmark(BenchmarkKind::Ghz, 6, 0, &BenchmarkParams::default()).unwrap();
    let truth = probabilities(&c).unwrap();
    for shots in [1u64 << 8, 1 << 12, 1 << 16] {
        let mut cfg = RunConfig::new(FinderConfig::new(3, 4));
        cfg.mode = SimMode::Shots { count: Some(shots), seed: 11 };
        let out = pipeline::run(&c, &cfg).unwrap();
        let got = out.contraction.distribution.to_dense();
        let err = got.iter().zip(&truth).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let negative = got.iter().filter(|&&p| p < 0.0).count();
        println!("{shots:>6} shots: max abs error {err:.4}, negative entries {negative}");
    }
}
