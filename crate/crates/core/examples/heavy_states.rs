//! Heavy state selection: reconstruct only the dominant output states and
//! report how much probability they carry.

use qcut::pipeline::{self, RunConfig};
use qcut::{gen_benchmark, BenchmarkKind, BenchmarkParams, FinderConfig};

fn main() {
    let params = BenchmarkParams::default();
    println!("{:<8} {:>3} {:>6} {:>6} {:>9} {:>9} {:>12}", "kind", "n", "budget", "|HSS|", "P_HSS", "r_P", "eta");
    for (kind, n) in [(BenchmarkKind::Ghz, 14), (BenchmarkKind::Wstate, 14), (BenchmarkKind::Aqft, 10)] {
        let c = gen_benchmark(kind, n, 0, &params).unwrap();
        for budget in [16, 256] {
            let mut cfg = RunConfig::new(FinderConfig::new(n / 2, c.two_qubit_count() / 2));
            cfg.hss_budget = Some(budget);
            let out = pipeline::run(&c, &cfg).unwrap();
            let m = out.metrics().unwrap().expect("small enough for the oracle");
            println!(
                "{:<8} {n:>3} {budget:>6} {:>6} {:>9.6} {:>9.6} {:>12.1}",
                kind.to_string(),
                m.hss_size,
                m.p_hss,
                m.r_p_hss,
                m.eta_hss
            );
        }
    }
}
