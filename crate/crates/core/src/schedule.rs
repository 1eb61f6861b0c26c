//! Schedules and their verification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{ClassId, Instance, JobId};
use crate::scalar::Time;

/// One entry of a machine's sequence. Durations are implied by the instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Segment {
    #[serde(rename = "setup")]
    Setup(ClassId),
    #[serde(rename = "job")]
    Run(JobId),
}

/// Per-machine ordered sequence of setups and jobs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub machines: Vec<Vec<Segment>>,
}

impl Schedule {
    pub fn empty(m: usize) -> Self {
        Self {
            machines: vec![Vec::new(); m],
        }
    }

    /// Lays out a job-to-machine assignment. Jobs of one class are kept
    /// together on each machine behind a single setup; classes appear in order
    /// of their first job in the machine's list.
    pub fn from_assignment<T: Time>(inst: &Instance<T>, assignment: &[Vec<JobId>]) -> Self {
        let mut machines = Vec::with_capacity(assignment.len().max(inst.num_machines()));
        for jobs in assignment {
            let mut class_order: Vec<ClassId> = Vec::new();
            for &j in jobs {
                let c = inst.class_of(j);
                if !class_order.contains(&c) {
                    class_order.push(c);
                }
            }
            let mut segs = Vec::with_capacity(jobs.len() + class_order.len());
            for c in class_order {
                segs.push(Segment::Setup(c));
                segs.extend(
                    jobs.iter()
                        .filter(|&&j| inst.class_of(j) == c)
                        .map(|&j| Segment::Run(j)),
                );
            }
            machines.push(segs);
        }
        while machines.len() < inst.num_machines() {
            machines.push(Vec::new());
        }
        Self { machines }
    }

    /// Jobs per machine in sequence order.
    pub fn assignment(&self) -> Vec<Vec<JobId>> {
        self.machines
            .iter()
            .map(|segs| {
                segs.iter()
                    .filter_map(|s| match s {
                        Segment::Run(j) => Some(*j),
                        Segment::Setup(_) => None,
                    })
                    .collect()
            })
            .collect()
    }

    pub fn num_setups(&self) -> usize {
        self.machines
            .iter()
            .flatten()
            .filter(|s| matches!(s, Segment::Setup(_)))
            .count()
    }

    /// Drops setups that do not change the machine's configuration and
    /// setups that are not followed by any job of their class.
    pub fn normalized<T: Time>(&self, inst: &Instance<T>) -> Self {
        let machines = self
            .machines
            .iter()
            .map(|segs| {
                let mut out: Vec<Segment> = Vec::with_capacity(segs.len());
                let mut current: Option<ClassId> = None;
                let mut pending: Option<ClassId> = None;
                for &seg in segs {
                    match seg {
                        Segment::Setup(c) => pending = Some(c),
                        Segment::Run(j) => {
                            let c = inst.class_of(j);
                            if current != Some(c) || pending.is_some_and(|p| p != c) {
                                out.push(Segment::Setup(c));
                                current = Some(c);
                            }
                            pending = None;
                            out.push(Segment::Run(j));
                        }
                    }
                }
                out
            })
            .collect();
        Self { machines }
    }

    pub fn makespan<T: Time>(&self, inst: &Instance<T>) -> T {
        self.machines
            .iter()
            .map(|segs| span(inst, segs))
            .max()
            .unwrap_or_else(T::zero)
    }
}

fn span<T: Time>(inst: &Instance<T>, segs: &[Segment]) -> T {
    segs.iter()
        .map(|s| match *s {
            Segment::Setup(_) => inst.setup(),
            Segment::Run(j) if j.0 < inst.num_jobs() => inst.size(j),
            Segment::Run(_) => T::zero(),
        })
        .sum()
}

/// A defect found by [`verify_schedule`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MachineCount {
        expected: usize,
        found: usize,
    },
    UnknownJob {
        machine: usize,
        job: JobId,
    },
    UnknownClass {
        machine: usize,
        class: ClassId,
    },
    DuplicateJob(JobId),
    MissingJob(JobId),
    RunWithoutSetup {
        machine: usize,
        position: usize,
        job: JobId,
    },
    RepeatedSetup {
        machine: usize,
        position: usize,
        class: ClassId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MachineCount { expected, found } => {
                write!(f, "schedule has {found} machines, instance has {expected}")
            }
            Violation::UnknownJob { machine, job } => {
                write!(f, "machine {machine}: unknown job {job}")
            }
            Violation::UnknownClass { machine, class } => {
                write!(f, "machine {machine}: setup for unknown class {class}")
            }
            Violation::DuplicateJob(j) => write!(f, "job {j} scheduled more than once"),
            Violation::MissingJob(j) => write!(f, "job {j} is not scheduled"),
            Violation::RunWithoutSetup {
                machine,
                position,
                job,
            } => {
                write!(
                    f,
                    "machine {machine}, segment {position}: run without preceding setup ({job})"
                )
            }
            Violation::RepeatedSetup {
                machine,
                position,
                class,
            } => {
                write!(
                    f,
                    "machine {machine}, segment {position}: consecutive setups for {class}"
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport<T> {
    pub feasible: bool,
    pub makespan: T,
    pub per_machine_span: Vec<T>,
    pub violations: Vec<Violation>,
}

/// Checks a schedule against an instance. Never fails; defects are listed in
/// the report. Machine order is irrelevant to the verdict.
pub fn verify_schedule<T: Time>(inst: &Instance<T>, sched: &Schedule) -> VerifyReport<T> {
    let mut violations = Vec::new();
    if sched.machines.len() != inst.num_machines() {
        violations.push(Violation::MachineCount {
            expected: inst.num_machines(),
            found: sched.machines.len(),
        });
    }
    let mut seen = vec![0u32; inst.num_jobs()];
    for (mi, segs) in sched.machines.iter().enumerate() {
        let mut configured: Option<ClassId> = None;
        let mut prev_setup: Option<ClassId> = None;
        for (pos, &seg) in segs.iter().enumerate() {
            match seg {
                Segment::Setup(c) => {
                    if c.0 >= inst.num_classes() {
                        violations.push(Violation::UnknownClass {
                            machine: mi,
                            class: c,
                        });
                    }
                    if prev_setup == Some(c) {
                        violations.push(Violation::RepeatedSetup {
                            machine: mi,
                            position: pos,
                            class: c,
                        });
                    }
                    configured = Some(c);
                    prev_setup = Some(c);
                }
                Segment::Run(j) => {
                    prev_setup = None;
                    if j.0 >= inst.num_jobs() {
                        violations.push(Violation::UnknownJob {
                            machine: mi,
                            job: j,
                        });
                        continue;
                    }
                    seen[j.0] += 1;
                    if configured != Some(inst.class_of(j)) {
                        violations.push(Violation::RunWithoutSetup {
                            machine: mi,
                            position: pos,
                            job: j,
                        });
                    }
                }
            }
        }
    }
    for (j, &count) in seen.iter().enumerate() {
        match count {
            0 => violations.push(Violation::MissingJob(JobId(j))),
            1 => {}
            _ => violations.push(Violation::DuplicateJob(JobId(j))),
        }
    }
    let per_machine_span: Vec<T> = sched.machines.iter().map(|segs| span(inst, segs)).collect();
    VerifyReport {
        feasible: violations.is_empty(),
        makespan: per_machine_span
            .iter()
            .copied()
            .max()
            .unwrap_or_else(T::zero),
        per_machine_span,
        violations,
    }
}
