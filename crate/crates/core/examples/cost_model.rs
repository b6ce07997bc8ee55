//! Runtime estimates for cutting a benchmark at several device widths.

use qcut::pipeline::{self, RunConfig};
use qcut::{gen_benchmark, BenchmarkKind, BenchmarkParams, FinderConfig};

fn main() {
    let c = gen_benchmark(BenchmarkKind::Supremacy, 36, 0, &BenchmarkParams::default()).unwrap();
    println!(
        "{:>5} {:>3} {:>4} {:>12} {:>12} {:>12} {:>10}",
        "w_max", "m", "E", "T_QPU (s)", "T_class (s)", "T_total (s)", "advantage"
    );
    for w_max in [12, 18, 24] {
        let mut cfg = RunConfig::new(FinderConfig::new(w_max, c.two_qubit_count()));
        cfg.hss_budget = Some(1 << 16);
        let cut = match pipeline::cut(&c, &cfg.finder) {
            Ok(cut) => cut,
            Err(e) => {
                println!("{w_max:>5} {e}");
                continue;
            }
        };
        let (_, _, r) = pipeline::estimate(&cut.plan, &cfg).unwrap();
        println!(
            "{w_max:>5} {:>3} {:>4} {:>12.4e} {:>12.4e} {:>12.4e} {:>10.2}",
            cut.plan.m(),
            cut.plan.num_cuts(),
            r.t_qpu,
            r.t_classical,
            r.t_total,
            r.advantage
        );
    }
}
