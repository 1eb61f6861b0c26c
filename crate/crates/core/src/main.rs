use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use setupsched::bench::{run_bench, write_csv};
use setupsched::exact::SearchLimit;
use setupsched::format::{
    emit_instance, emit_json, emit_schedule, read_instance, read_schedule, write_text,
};
use setupsched::generate::{generate_instance, GenParams};
use setupsched::online::{competitive_ratio, simulate_online};
use setupsched::scalar::{parse_rational, rational_to_f64};
use setupsched::{validate_instance, verify_schedule, Algorithm, Rational, TimedInstance};

#[derive(Parser)]
#[command(
    name = "setupsched",
    version,
    about = "Makespan scheduling with class setup times"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgName {
    Greedy,
    Fptas,
    Block,
    Exact,
}

#[derive(clap::Args)]
struct SolverArgs {
    /// Block-schedule accuracy parameter (at least 2).
    #[arg(long, default_value_t = 10)]
    lambda: u32,
    /// FPTAS accuracy, decimal or fraction.
    #[arg(long, default_value = "0.25")]
    eps: String,
    /// Node limit for the exact solver.
    #[arg(long, default_value_t = SearchLimit::default().max_nodes)]
    node_limit: u64,
}

impl SolverArgs {
    fn algorithm(&self, name: AlgName) -> Result<Algorithm> {
        Ok(match name {
            AlgName::Greedy => Algorithm::Greedy,
            AlgName::Fptas => {
                let eps = parse_rational(&self.eps)
                    .with_context(|| format!("invalid --eps `{}`", self.eps))?;
                if eps <= Rational::from_integer(0) {
                    bail!("--eps must be positive");
                }
                Algorithm::Fptas { eps }
            }
            AlgName::Block => Algorithm::Block {
                lambda: self.lambda,
            },
            AlgName::Exact => Algorithm::Exact {
                limit: SearchLimit {
                    max_nodes: self.node_limit,
                },
            },
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        m: usize,
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        s: u64,
        #[arg(long, default_value_t = 1)]
        p_min: u64,
        #[arg(long, default_value_t = 10)]
        p_max: u64,
        /// Probability that a job gets a positive release time.
        #[arg(long)]
        release_density: Option<f64>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and write the schedule.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgName::Block)]
        alg: AlgName,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a schedule against an instance.
    Verify {
        instance: PathBuf,
        schedule: PathBuf,
    },
    /// Run algorithms over every *.json instance in a directory.
    Bench {
        dir: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [AlgName::Greedy, AlgName::Exact])]
        alg: Vec<AlgName>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schedule an instance with release times online.
    Simulate {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgName::Block)]
        alg: AlgName,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Errors that mean "the input is fine but the schedule is not".
struct VerificationFailed;

fn output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_text(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_gen(c: Command) -> Result<()> {
    let Command::Gen {
        seed,
        n,
        m,
        k,
        s,
        p_min,
        p_max,
        release_density,
        horizon,
        out,
    } = c
    else {
        unreachable!()
    };
    let params = GenParams {
        n,
        m,
        k,
        s,
        p_min,
        p_max,
        release_density,
        horizon,
    };
    let raw = generate_instance(seed, &params)?;
    output(out.as_deref(), &emit_instance(&raw))
}

fn cmd_solve(instance: &Path, alg: Algorithm, out: Option<&Path>) -> Result<()> {
    let inst = validate_instance(&read_instance::<u64>(instance)?)?;
    let start = Instant::now();
    let sol = alg.solve(&inst)?;
    let millis = start.elapsed().as_millis();
    let report = verify_schedule(&inst, &sol.schedule);
    if !report.feasible {
        bail!("internal error: {alg} produced an infeasible schedule");
    }
    let text = emit_schedule(&sol.schedule);
    let bound = sol
        .certified_bound
        .map(|b| format!("{:.6}", rational_to_f64(&b)))
        .unwrap_or_else(|| "-".into());
    let metrics = format!(
        "algorithm={alg} makespan={} lower_bound={} certified_bound={bound} millis={millis}{}",
        sol.makespan,
        sol.lower_bound,
        if matches!(alg, Algorithm::Exact { .. }) && !sol.proven_optimal {
            " status=upper_bound"
        } else {
            ""
        },
    );
    match out {
        Some(path) => {
            write_text(path, &text)?;
            println!("{metrics}");
        }
        None => {
            print!("{text}");
            eprintln!("{metrics}");
        }
    }
    Ok(())
}

fn cmd_verify(instance: &Path, schedule: &Path) -> Result<Result<(), VerificationFailed>> {
    let inst = validate_instance(&read_instance::<u64>(instance)?)?;
    let sched = read_schedule(schedule)?;
    let report = verify_schedule(&inst, &sched);
    if report.feasible {
        println!("feasible makespan={}", report.makespan);
        Ok(Ok(()))
    } else {
        println!("infeasible");
        for v in &report.violations {
            println!("  {v}");
        }
        Ok(Err(VerificationFailed))
    }
}

fn cmd_bench(dir: &Path, algs: &[Algorithm], limit: SearchLimit, out: Option<&Path>) -> Result<()> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut instances = Vec::with_capacity(files.len());
    for f in &files {
        let inst = validate_instance(&read_instance::<u64>(f)?)
            .with_context(|| f.display().to_string())?;
        let id = f
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        instances.push((id, inst));
    }
    let rows = run_bench(&instances, algs, limit);
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    output(out, &String::from_utf8(buf)?)
}

fn cmd_simulate(instance: &Path, alg: Algorithm, out: Option<&Path>) -> Result<()> {
    let tinst = TimedInstance::from_raw(&read_instance::<u64>(instance)?)?;
    let timeline = simulate_online(&tinst, &alg)?;
    let issues = timeline.check(&tinst);
    if !issues.is_empty() {
        bail!(
            "internal error: inconsistent timeline: {}",
            issues.join("; ")
        );
    }
    let r = competitive_ratio(&timeline, &tinst);
    let summary = format!(
        "algorithm={alg} batches={} online_makespan={} {}={} ratio={:.6}",
        timeline.batches.len(),
        r.online,
        if r.exact {
            "clairvoyant_opt"
        } else {
            "clairvoyant_lower_bound"
        },
        r.reference,
        rational_to_f64(&r.ratio),
    );
    match out {
        Some(path) => {
            write_text(path, &emit_json(&timeline))?;
            println!("{summary}");
        }
        None => {
            print!("{}", emit_json(&timeline));
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Result<(), VerificationFailed>> {
    match cli.command {
        c @ Command::Gen { .. } => cmd_gen(c)?,
        Command::Solve {
            instance,
            alg,
            solver,
            out,
        } => cmd_solve(&instance, solver.algorithm(alg)?, out.as_deref())?,
        Command::Verify { instance, schedule } => return cmd_verify(&instance, &schedule),
        Command::Bench {
            dir,
            alg,
            solver,
            out,
        } => {
            let algs = alg
                .iter()
                .map(|&a| solver.algorithm(a))
                .collect::<Result<Vec<_>>>()?;
            cmd_bench(
                &dir,
                &algs,
                SearchLimit {
                    max_nodes: solver.node_limit,
                },
                out.as_deref(),
            )?
        }
        Command::Simulate {
            instance,
            alg,
            solver,
            out,
        } => cmd_simulate(&instance, solver.algorithm(alg)?, out.as_deref())?,
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(VerificationFailed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
