//! Jobs with release times, scheduled online in batches.
//!
//! The first batch holds the jobs released earliest and starts at that
//! release. While batch `i` runs, newly released jobs are collected; when it
//! finishes at `F_i` they form batch `i + 1` and start at `F_i`. A job
//! released exactly at `F_i` joins the batch starting at `F_i`. If nothing
//! arrived, the machines idle until the next release. Each batch is solved
//! offline by one of the [`Algorithm`]s.

use serde::{Deserialize, Serialize};

use crate::exact::released_optimum;
use crate::model::{trivial_lower_bound, Instance, InstanceError, JobId, RawInstance};
use crate::scalar::{Rational, Time};
use crate::schedule::Segment;
use crate::solver::{Algorithm, SolveError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimedInstance<T> {
    pub instance: Instance<T>,
    /// Release time per job id.
    pub releases: Vec<T>,
}

impl<T: Time> TimedInstance<T> {
    pub fn new(instance: Instance<T>, releases: Vec<T>) -> Self {
        assert_eq!(instance.num_jobs(), releases.len(), "one release per job");
        Self { instance, releases }
    }

    /// Jobs missing from the release map are released at 0.
    pub fn from_raw(raw: &RawInstance<T>) -> Result<Self, InstanceError> {
        let instance = crate::model::validate_instance(raw)?;
        let mut releases = vec![T::zero(); instance.num_jobs()];
        for (&j, &r) in raw.releases.iter().flatten() {
            releases[j] = r;
        }
        Ok(Self { instance, releases })
    }

    pub fn to_raw(&self) -> RawInstance<T> {
        let mut raw = self.instance.to_raw();
        raw.releases = Some(self.releases.iter().copied().enumerate().collect());
        raw
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimedSegment<T> {
    #[serde(flatten)]
    pub segment: Segment,
    pub start: T,
    pub end: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch<T> {
    pub start: T,
    pub finish: T,
    pub jobs: Vec<JobId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timeline<T> {
    pub machines: Vec<Vec<TimedSegment<T>>>,
    pub batches: Vec<Batch<T>>,
}

impl<T: Time> Timeline<T> {
    pub fn makespan(&self) -> T {
        self.batches.last().map_or_else(T::zero, |b| b.finish)
    }

    /// Defects of the timeline against `tinst`; empty when consistent.
    pub fn check(&self, tinst: &TimedInstance<T>) -> Vec<String> {
        let inst = &tinst.instance;
        let mut issues = Vec::new();
        let mut batch_of = vec![None; inst.num_jobs()];
        for (b, batch) in self.batches.iter().enumerate() {
            for &j in &batch.jobs {
                if batch_of[j.0].replace(b).is_some() {
                    issues.push(format!("{j} appears in two batches"));
                }
            }
        }
        if let Some(j) = batch_of.iter().position(Option::is_none) {
            issues.push(format!("{} is in no batch", JobId(j)));
        }
        let mut seen = vec![false; inst.num_jobs()];
        for (i, segs) in self.machines.iter().enumerate() {
            let mut clock = T::zero();
            let mut current = None;
            for seg in segs {
                if seg.start < clock {
                    issues.push(format!(
                        "machine {i}: overlapping segments at {}",
                        seg.start
                    ));
                }
                clock = seg.end;
                match seg.segment {
                    Segment::Setup(c) => {
                        current = Some(c);
                        if seg.end - seg.start != inst.setup() {
                            issues.push(format!(
                                "machine {i}: setup of wrong length at {}",
                                seg.start
                            ));
                        }
                    }
                    Segment::Run(j) => {
                        seen[j.0] = true;
                        if current != Some(inst.class_of(j)) {
                            issues.push(format!("machine {i}: {j} runs without its setup"));
                        }
                        if seg.end - seg.start != inst.size(j) {
                            issues.push(format!("machine {i}: {j} has the wrong length"));
                        }
                        if seg.start < tinst.releases[j.0] {
                            issues.push(format!("{j} starts at {} before its release", seg.start));
                        }
                        if let Some(b) = batch_of[j.0] {
                            let batch = &self.batches[b];
                            if seg.start < batch.start || seg.end > batch.finish {
                                issues.push(format!("{j} runs outside its batch"));
                            }
                        }
                    }
                }
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            issues.push(format!("{} never runs", JobId(j)));
        }
        issues
    }
}

fn solve_batch<T: Time>(
    inst: &Instance<T>,
    jobs: &[JobId],
    start: T,
    alg: &Algorithm,
    machines: &mut [Vec<TimedSegment<T>>],
) -> Result<T, SolveError> {
    let (sub, map) = inst.restrict(jobs).expect("nonempty batch");
    let sol = alg.solve(&sub)?;
    let mut finish = start;
    for (i, segs) in sol.schedule.machines.iter().enumerate() {
        let mut clock = start;
        for seg in segs {
            let (segment, len) = match *seg {
                Segment::Setup(c) => {
                    let first = sub.class_members(c)[0];
                    (Segment::Setup(inst.class_of(map[first.0])), inst.setup())
                }
                Segment::Run(j) => (Segment::Run(map[j.0]), sub.size(j)),
            };
            machines[i].push(TimedSegment {
                segment,
                start: clock,
                end: clock + len,
            });
            clock = clock + len;
        }
        finish = finish.max(clock);
    }
    Ok(finish)
}

/// Runs the batching strategy with `alg` as the offline solver.
pub fn simulate_online<T: Time>(
    tinst: &TimedInstance<T>,
    alg: &Algorithm,
) -> Result<Timeline<T>, SolveError> {
    let inst = &tinst.instance;
    let mut order: Vec<JobId> = (0..inst.num_jobs()).map(JobId).collect();
    order.sort_by_key(|&j| (tinst.releases[j.0], j));
    let rel = |j: JobId| tinst.releases[j.0];

    let mut machines = vec![Vec::new(); inst.num_machines()];
    let mut batches = Vec::new();
    let mut next = 0usize;
    let mut now = rel(order[0]);
    while next < order.len() {
        if rel(order[next]) > now {
            now = rel(order[next]);
        }
        let end = order[next..]
            .iter()
            .position(|&j| rel(j) > now)
            .map_or(order.len(), |p| next + p);
        let mut jobs = order[next..end].to_vec();
        jobs.sort();
        next = end;
        let finish = solve_batch(inst, &jobs, now, alg, &mut machines)?;
        batches.push(Batch {
            start: now,
            finish,
            jobs,
        });
        now = finish;
    }
    Ok(Timeline { machines, batches })
}

/// Online makespan against the clairvoyant optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport<T> {
    pub online: T,
    /// Clairvoyant optimum, or a lower bound on it when `exact` is false.
    pub reference: T,
    pub exact: bool,
    pub ratio: Rational,
}

/// Compares `timeline` with the optimum that honours releases. Above the
/// size limit of [`released_optimum`] the reference is the lower bound
/// `max(T_lb, max_j r_j + s + p_j)` and the report is flagged inexact.
pub fn competitive_ratio<T: Time>(
    timeline: &Timeline<T>,
    tinst: &TimedInstance<T>,
) -> RatioReport<T> {
    let inst = &tinst.instance;
    let online = timeline.makespan();
    let (reference, exact) = match released_optimum(inst, &tinst.releases) {
        Some(opt) => (opt, true),
        None => {
            let release_bound = inst
                .jobs()
                .iter()
                .map(|j| tinst.releases[j.id.0] + inst.setup() + j.size)
                .max()
                .unwrap_or_else(T::zero);
            (trivial_lower_bound(inst).max(release_bound), false)
        }
    };
    RatioReport {
        online,
        reference,
        exact,
        ratio: Rational::new(online.wide(), reference.wide()),
    }
}
