//! Slice a network under shrinking memory caps and check every sliced
//! contraction against the unsliced one.

use qcut::pipeline;
use qcut::sim::{run_subcircuit, SimMode};
use qcut::tensor::{build_network, contract, find_order, peak_elements, slice_network, SlicePlan};
use qcut::{gen_benchmark, BenchmarkKind, BenchmarkParams, FinderConfig};

fn main() {
    let c = gen_benchmark(BenchmarkKind::Regular, 10, 5, &BenchmarkParams::default()).unwrap();
    let cut = pipeline::cut(&c, &FinderConfig::new(4, c.two_qubit_count())).unwrap();
    let tensors: Vec<_> = cut
        .plan
        .subcircuits
        .iter()
        .map(|s| run_subcircuit(s, SimMode::Exact, 24).unwrap())
        .collect();
    let net = build_network(&cut.plan, &tensors).unwrap();
    let shape = net.shape();
    let tree = find_order(&shape, 16, 0).unwrap();
    let reference = contract(&net, &tree, &SlicePlan::default(), None, None).unwrap();
    let peak = peak_elements(&shape, &tree, &[]);
    println!("{} subcircuits, {} cuts, unsliced peak {peak} elements", cut.plan.m(), cut.plan.num_cuts());

    for div in [1.0, 4.0, 16.0, 64.0] {
        let cap = (peak / div) as usize;
        let slices = match slice_network(&shape, &tree, cap) {
            Ok(s) => s,
            Err(e) => {
                println!("cap {cap:>8}: {e}");
                continue;
            }
        };
        let out = contract(&net, &tree, &slices, None, Some(cap)).unwrap();
        let err = out
            .distribution
            .values
            .iter()
            .zip(&reference.distribution.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        println!(
            "cap {cap:>8}: level1 {:?} level2 {:?}, {} sub-networks, peak {}, max diff {err:.1e}",
            slices.level1, slices.level2, out.num_slices, out.peak_elements
        );
    }
}
