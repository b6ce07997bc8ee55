use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qcut::circuit::{gen_benchmark, parse_circuit, write_circuit, BenchmarkKind, BenchmarkParams, Circuit};
use qcut::cost::CostModelConfig;
use qcut::cutter::enumerate_variants;
use qcut::pipeline::{self, CutPlanReport, CutResult, RunConfig, RunReport};
use qcut::sim::SimMode;
use qcut::tensor::io::write_tensor;
use qcut::tensor::{AxisLabel, LabeledTensor};
use qcut::{Error, FinderConfig};

#[derive(Parser)]
#[command(name = "qcut", version, about = "Cut, simulate and reconstruct quantum circuits")]
struct Cli {
    /// Worker threads for simulation and contraction.
    #[arg(long, global = true, env = "QCUT_THREADS")]
    threads: Option<usize>,
    /// Human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark circuit.
    Gen {
        #[arg(long)]
        kind: BenchmarkKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        erdos_p: f64,
        #[arg(long)]
        aqft_degree: Option<usize>,
        #[arg(long, default_value_t = 8)]
        cycles: usize,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find cuts and print the cut plan.
    Cut {
        circuit: PathBuf,
        #[command(flatten)]
        limits: Limits,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the gate DAG with partition colors in DOT format.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        /// Write every subcircuit variant as a `.qc` file into this directory.
        #[arg(long)]
        emit_variants: Option<PathBuf>,
    },
    /// Estimate QPU and classical runtime without simulating.
    Estimate {
        circuit: PathBuf,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        recon: Recon,
        #[command(flatten)]
        cost: CostFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cut, simulate every variant and reconstruct.
    Run {
        circuit: PathBuf,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        recon: Recon,
        #[command(flatten)]
        cost: CostFlags,
        /// Sample this many shots per variant instead of exact simulation.
        #[arg(long)]
        shots: Option<u64>,
        /// Sample with the width-dependent default shot count.
        #[arg(long, conflicts_with = "shots")]
        sampled: bool,
        #[arg(long, default_value_t = 16)]
        top_k: usize,
        /// Write subcircuit tensors into this directory.
        #[arg(long)]
        dump_tensors: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare an exact reconstruction against uncut simulation.
    Verify {
        circuit: PathBuf,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        recon: Recon,
    },
}

#[derive(Args)]
struct Limits {
    /// Max qubits per subcircuit.
    #[arg(long)]
    wmax: Option<usize>,
    /// Max two-qubit gates per subcircuit.
    #[arg(long)]
    smax: Option<usize>,
    #[arg(long, default_value_t = 10)]
    kt: usize,
    #[arg(long, default_value_t = 1e4)]
    qmax: f64,
    /// Reuse a cut plan written by `cut` instead of searching.
    #[arg(long)]
    plan: Option<PathBuf>,
}

#[derive(Args)]
struct Recon {
    /// Heavy-state budget; all states are reconstructed when omitted.
    #[arg(long)]
    hss: Option<u64>,
    /// Seed for order-search restarts and shot sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = qcut::tensor::DEFAULT_RESTARTS)]
    restarts: usize,
    /// Cap on elements of any tensor held during contraction.
    #[arg(long, default_value_t = pipeline::DEFAULT_MEMORY_CAP)]
    memory_cap: usize,
    /// Widest subcircuit the simulator accepts.
    #[arg(long, default_value_t = qcut::sim::DEFAULT_QUBIT_CAP)]
    qubit_cap: usize,
}

#[derive(Args)]
struct CostFlags {
    #[arg(long, default_value_t = 1e-7)]
    t_g: f64,
    #[arg(long, default_value_t = 1e-6)]
    t_m: f64,
    #[arg(long, default_value_t = 1e12)]
    flops: f64,
    #[arg(long, default_value_t = 10)]
    qpus: usize,
}

impl CostFlags {
    fn config(&self) -> CostModelConfig {
        CostModelConfig {
            t_g: self.t_g,
            t_m: self.t_m,
            flops: self.flops,
            num_qpus: self.qpus,
        }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verification(_) => 4,
            Failure::Lib(e) => match e {
                Error::Parse(_) | Error::Json(_) | Error::TensorFile(_) => 2,
                Error::Infeasible(_) => 3,
                Error::SimulatorCap { .. } | Error::MemoryCap { .. } | Error::UnsupportedSize { .. } => 5,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Verification(m) => f.write_str(m),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Command::Gen {
            kind,
            n,
            seed,
            erdos_p,
            aqft_degree,
            cycles,
            out,
        } => {
            let params = BenchmarkParams {
                erdos_p: *erdos_p,
                aqft_degree: *aqft_degree,
                supremacy_cycles: *cycles,
            };
            let c = gen_benchmark(*kind, *n, *seed, &params)?;
            emit_text(out.as_deref(), &write_circuit(&c))
        }
        Command::Cut {
            circuit,
            limits,
            out,
            emit_dot,
            emit_variants,
        } => {
            let (c, _) = load_circuit(circuit)?;
            let cut = obtain_cut(&c, limits)?;
            if let Some(p) = emit_dot {
                write_file(p, &cut.dag.to_dot(Some(cut.partition.assignment())))?;
            }
            if let Some(dir) = emit_variants {
                fs::create_dir_all(dir).map_err(Error::from)?;
                for s in &cut.plan.subcircuits {
                    for (k, v) in enumerate_variants(s).iter().enumerate() {
                        write_file(&dir.join(format!("sub{}_v{k}.qc", s.id)), &write_circuit(&v.circuit))?;
                    }
                }
            }
            let report = CutPlanReport::new(&cut.plan, &finder_config(limits, &c));
            if cli.pretty {
                let mut t = format!("subcircuits: {}  cuts: {}\n", report.m, report.num_cuts);
                t.push_str("  id     w     s     u     d  depth\n");
                for p in &report.partitions {
                    t.push_str(&format!(
                        "{:>4}{:>6}{:>6}{:>6}{:>6}{:>7}\n",
                        p.id, p.w, p.s, p.u, p.d, p.depth
                    ));
                }
                for e in &report.cuts {
                    t.push_str(&format!(
                        "cut {}: qubit {} between gates {} and {}\n",
                        e.id, e.qubit, e.from_gate, e.to_gate
                    ));
                }
                emit_text(out.as_deref(), &t)
            } else {
                emit_json(out.as_deref(), &report)
            }
        }
        Command::Estimate {
            circuit,
            limits,
            recon,
            cost,
            out,
        } => {
            let (c, _) = load_circuit(circuit)?;
            let cut = obtain_cut(&c, limits)?;
            let cfg = run_config(&c, limits, recon, cost.config(), SimMode::Exact, 0);
            let (_, _, report) = pipeline::estimate(&cut.plan, &cfg)?;
            if cli.pretty {
                let t = format!(
                    "T_QPU        {:.6e} s ({:.6e} s serial)\nT_classical  {:.6e} s\nT_total      {:.6e} s\nC_TN         {:.6e}\nadvantage    {:.4}\n",
                    report.t_qpu, report.t_qpu_serial, report.t_classical, report.t_total, report.c_tn, report.advantage
                );
                emit_text(out.as_deref(), &t)
            } else {
                emit_json(out.as_deref(), &report)
            }
        }
        Command::Run {
            circuit,
            limits,
            recon,
            cost,
            shots,
            sampled,
            top_k,
            dump_tensors,
            out,
        } => {
            let (c, bytes) = load_circuit(circuit)?;
            let mode = if shots.is_some() || *sampled {
                SimMode::Shots {
                    count: *shots,
                    seed: recon.seed,
                }
            } else {
                SimMode::Exact
            };
            let cut = obtain_cut(&c, limits)?;
            let cfg = run_config(&c, limits, recon, cost.config(), mode, *top_k);
            cfg.cost.validate()?;
            let result = pipeline::run_plan(&c, cut, &cfg)?;
            if let Some(dir) = dump_tensors {
                fs::create_dir_all(dir).map_err(Error::from)?;
                for t in &result.tensors {
                    let mut labels: Vec<AxisLabel> = t.edges.iter().map(|&e| AxisLabel::Cut(e)).collect();
                    labels.push(AxisLabel::Out(t.subcircuit));
                    let lt = LabeledTensor {
                        labels,
                        data: t.data.clone(),
                    };
                    let mut f = fs::File::create(dir.join(format!("sub{}.qctn", t.subcircuit))).map_err(Error::from)?;
                    write_tensor(&mut f, &lt)?;
                }
            }
            let report = RunReport::new(&result, &cfg, pipeline::digest(&bytes))?;
            if cli.pretty {
                let mut t = format!(
                    "subcircuits {}  cuts {}  K_max {}  per-state cost {}  slices {}\n",
                    report.plan.m,
                    report.plan.num_cuts,
                    report.contraction.k_max,
                    report.contraction.per_state_cost,
                    report.contraction.num_slices
                );
                if let Some(v) = &report.verification {
                    t.push_str(&format!(
                        "verify: {} (L_inf {:.3e})\n",
                        if v.passed { "pass" } else { "FAIL" },
                        v.linf
                    ));
                }
                for s in &report.top_states {
                    t.push_str(&format!("{}  {:.10}\n", s.state, s.value));
                }
                emit_text(out.as_deref(), &t)?;
            } else {
                emit_json(out.as_deref(), &report)?;
            }
            match &report.verification {
                Some(v) if !v.passed && mode == SimMode::Exact => Err(Failure::Verification(format!(
                    "reconstruction differs from simulation by {:.3e}",
                    v.linf
                ))),
                _ => Ok(()),
            }
        }
        Command::Verify { circuit, limits, recon } => {
            let (c, _) = load_circuit(circuit)?;
            let cut = obtain_cut(&c, limits)?;
            let cfg = run_config(&c, limits, recon, CostModelConfig::default(), SimMode::Exact, 0);
            let v = pipeline::verify(&c, cut, &cfg)?;
            if cli.pretty {
                emit_text(
                    None,
                    &format!(
                        "{}: L_inf {:.3e}, L1 {:.3e} (tolerance {:.0e})\n",
                        if v.passed { "pass" } else { "FAIL" },
                        v.linf,
                        v.l1,
                        v.tolerance
                    ),
                )?;
            } else {
                emit_json(None, &v)?;
            }
            if v.passed {
                Ok(())
            } else {
                Err(Failure::Verification(format!("L_inf {:.3e} exceeds {:.0e}", v.linf, v.tolerance)))
            }
        }
    }
}

fn load_circuit(path: &Path) -> std::result::Result<(Circuit, Vec<u8>), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Lib(Error::Config(format!("{} is not UTF-8", path.display()))))?;
    let c = parse_circuit(&text).map_err(Error::from)?;
    Ok((c, bytes))
}

fn finder_config(limits: &Limits, c: &Circuit) -> FinderConfig {
    let mut cfg = FinderConfig::new(
        limits.wmax.unwrap_or(c.num_qubits()),
        limits.smax.unwrap_or(c.two_qubit_count().max(1)),
    );
    cfg.k_t = limits.kt;
    cfg.q_max = limits.qmax;
    cfg
}

fn obtain_cut(c: &Circuit, limits: &Limits) -> std::result::Result<CutResult, Failure> {
    if let Some(p) = &limits.plan {
        let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
        let report: CutPlanReport = serde_json::from_str(&text).map_err(Error::from)?;
        return Ok(pipeline::cut_from_report(c, &report)?);
    }
    if limits.wmax.is_none() || limits.smax.is_none() {
        return Err(Failure::Usage("--wmax and --smax are required unless --plan is given".into()));
    }
    Ok(pipeline::cut(c, &finder_config(limits, c))?)
}

fn run_config(
    c: &Circuit,
    limits: &Limits,
    recon: &Recon,
    cost: CostModelConfig,
    mode: SimMode,
    top_k: usize,
) -> RunConfig {
    let mut cfg = RunConfig::new(finder_config(limits, c));
    cfg.mode = mode;
    cfg.hss_budget = recon.hss;
    cfg.order_restarts = recon.restarts;
    cfg.order_seed = recon.seed;
    cfg.memory_cap = recon.memory_cap;
    cfg.qubit_cap = recon.qubit_cap;
    cfg.cost = cost;
    cfg.top_k = top_k;
    cfg
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Lib(Error::Io(e)))
}

fn emit_text(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Outcome {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    emit_text(out, &s)
}
