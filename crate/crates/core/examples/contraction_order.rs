//! Contraction order search on a four-tensor network and on a real plan.

use qcut::pipeline;
use qcut::tensor::{
    find_order, k_max, per_state_cost, prior_cost, ContractionTree, Nested, NetworkShape,
    DEFAULT_RESTARTS,
};
use qcut::{gen_benchmark, BenchmarkKind, BenchmarkParams, FinderConfig};

fn describe(label: &str, tree: &ContractionTree) {
    println!("{label}: {}", serde_json::to_string(&tree.to_nested()).unwrap());
    for s in &tree.steps {
        println!("  inner {:?} outer {:?} cost {}", s.inner, s.outer, s.cost);
    }
    println!("  per-state cost {}, K_max {}", per_state_cost(tree), k_max(tree));
}

fn main() {
    // Tensor 1 touches three cut edges, the others two each.
    let shape = NetworkShape::from_edges(4, &[(0, 1), (1, 2), (1, 3), (2, 3)]);
    describe("left chain", &ContractionTree::from_nested(&shape, &Nested::chain(4)).unwrap());
    describe("searched", &find_order(&shape, DEFAULT_RESTARTS, 0).unwrap());
    println!("direct sum: {}\n", prior_cost(4, 4));

    let c = gen_benchmark(BenchmarkKind::Supremacy, 16, 2, &BenchmarkParams::default()).unwrap();
    let cut = pipeline::cut(&c, &FinderConfig::new(6, c.two_qubit_count())).unwrap();
    let plan = &cut.plan;
    let shape = NetworkShape {
        edges: plan.cut_edges.iter().map(|e| (e.upstream.subcircuit, e.downstream.subcircuit)).collect(),
        out_dims: plan.subcircuits.iter().map(|s| 1 << s.o()).collect(),
    };
    let tree = find_order(&shape, DEFAULT_RESTARTS, 0).unwrap();
    println!(
        "supremacy-16: m {}, E {}, searched cost {}, direct sum {}",
        plan.m(),
        plan.num_cuts(),
        per_state_cost(&tree),
        prior_cost(plan.num_cuts(), plan.m())
    );
}
