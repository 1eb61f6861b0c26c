//! Benchmark rows and their CSV form.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::exact::{exact_makespan, SearchLimit};
use crate::model::{trivial_lower_bound, Instance};
use crate::schedule::verify_schedule;
use crate::solver::Algorithm;

/// Exact optima are attempted only up to this many jobs.
pub const BENCH_EXACT_MAX_JOBS: usize = 14;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance_id: String,
    pub algorithm: String,
    pub makespan: Option<u64>,
    pub lower_bound: u64,
    pub exact_opt: Option<u64>,
    /// `makespan / exact_opt`, or `makespan / lower_bound` without an optimum.
    pub ratio: Option<f64>,
    pub millis: u128,
    pub status: String,
}

/// Solves every instance with every algorithm, one row per pair. Failures
/// are recorded in `status` and do not stop the run.
pub fn run_bench(
    instances: &[(String, Instance<u64>)],
    algorithms: &[Algorithm],
    limit: SearchLimit,
) -> Vec<BenchRow> {
    let mut rows = Vec::with_capacity(instances.len() * algorithms.len());
    for (id, inst) in instances {
        let lower_bound = trivial_lower_bound(inst);
        let exact_opt = (inst.num_jobs() <= BENCH_EXACT_MAX_JOBS)
            .then(|| exact_makespan(inst, limit))
            .filter(|r| r.proven_optimal)
            .map(|r| r.makespan);
        for alg in algorithms {
            let start = Instant::now();
            let result = alg.solve(inst);
            let millis = start.elapsed().as_millis();
            let mut row = BenchRow {
                instance_id: id.clone(),
                algorithm: alg.to_string(),
                makespan: None,
                lower_bound,
                exact_opt,
                ratio: None,
                millis,
                status: String::new(),
            };
            match result {
                Ok(sol) if verify_schedule(inst, &sol.schedule).feasible => {
                    let reference = exact_opt.unwrap_or(lower_bound);
                    row.makespan = Some(sol.makespan);
                    row.ratio = Some(sol.makespan as f64 / reference as f64);
                    row.status = if matches!(alg, Algorithm::Exact { .. }) && !sol.proven_optimal {
                        "upper_bound".into()
                    } else {
                        "ok".into()
                    };
                }
                Ok(_) => row.status = "infeasible".into(),
                Err(e) => row.status = format!("error: {e}"),
            }
            rows.push(row);
        }
    }
    rows
}

#[derive(Serialize)]
struct CsvRow<'a> {
    instance_id: &'a str,
    algorithm: &'a str,
    makespan: String,
    lower_bound: u64,
    exact_opt: String,
    ratio: String,
    millis: u128,
    status: &'a str,
}

/// Writes a header and one line per row; ratios get six decimals, missing
/// values are empty.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        w.serialize(CsvRow {
            instance_id: &r.instance_id,
            algorithm: &r.algorithm,
            makespan: opt(r.makespan),
            lower_bound: r.lower_bound,
            exact_opt: opt(r.exact_opt),
            ratio: r.ratio.map(|x| format!("{x:.6}")).unwrap_or_default(),
            millis: r.millis,
            status: &r.status,
        })?;
    }
    w.flush()?;
    Ok(())
}
