//! Problem instances: jobs with integer sizes partitioned into classes, `m`
//! identical machines and a single setup time `s` charged before each class
//! run on a machine.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Rational, Time};

/// Dense job index. Ids follow reading order of the class lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JobId(pub usize);

/// Dense class index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(pub usize);

impl fmt::Display for JobId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J{}", self.0)
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job<T> {
    pub id: JobId,
    pub size: T,
    pub class: ClassId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance has no jobs")]
    NoJobs,
    #[error("machine count must be at least 1")]
    NoMachines,
    #[error("setup time must be at least 1")]
    ZeroSetup,
    #[error("job {0} has size 0")]
    ZeroSize(JobId),
    #[error("class {0} has no jobs")]
    EmptyClass(ClassId),
    #[error("release time given for unknown job index {0}")]
    UnknownReleaseJob(usize),
}

/// Instance as it appears on disk: sizes grouped by class, plus optional
/// per-job release times keyed by flattened job index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawInstance<T> {
    pub m: usize,
    pub s: T,
    pub classes: Vec<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub releases: Option<BTreeMap<usize, T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance<T> {
    jobs: Vec<Job<T>>,
    num_machines: usize,
    setup: T,
    classes: Vec<Vec<JobId>>,
}

/// Validates a parsed instance description. Release times are checked for
/// well-formedness but not attached; see [`crate::online::TimedInstance`].
pub fn validate_instance<T: Time>(raw: &RawInstance<T>) -> Result<Instance<T>, InstanceError> {
    let inst = Instance::from_classes(raw.m, raw.s, raw.classes.clone())?;
    if let Some(releases) = &raw.releases {
        if let Some((&bad, _)) = releases.iter().find(|(&j, _)| j >= inst.num_jobs()) {
            return Err(InstanceError::UnknownReleaseJob(bad));
        }
    }
    Ok(inst)
}

impl<T: Time> Instance<T> {
    /// Builds an instance from per-class size lists. Job ids are assigned in
    /// reading order.
    pub fn from_classes(m: usize, s: T, classes: Vec<Vec<T>>) -> Result<Self, InstanceError> {
        if m == 0 {
            return Err(InstanceError::NoMachines);
        }
        if s.is_zero() {
            return Err(InstanceError::ZeroSetup);
        }
        if classes.iter().all(Vec::is_empty) {
            return Err(InstanceError::NoJobs);
        }
        let mut jobs = Vec::new();
        let mut members = Vec::with_capacity(classes.len());
        for (ci, sizes) in classes.into_iter().enumerate() {
            if sizes.is_empty() {
                return Err(InstanceError::EmptyClass(ClassId(ci)));
            }
            let mut ids = Vec::with_capacity(sizes.len());
            for size in sizes {
                let id = JobId(jobs.len());
                if size.is_zero() {
                    return Err(InstanceError::ZeroSize(id));
                }
                jobs.push(Job {
                    id,
                    size,
                    class: ClassId(ci),
                });
                ids.push(id);
            }
            members.push(ids);
        }
        Ok(Self {
            jobs,
            num_machines: m,
            setup: s,
            classes: members,
        })
    }

    /// Builds an instance from `(size, class label)` pairs. Labels are
    /// renumbered densely in order of first appearance; jobs keep their
    /// position as id.
    pub fn from_jobs(m: usize, s: T, jobs: &[(T, usize)]) -> Result<Self, InstanceError> {
        if jobs.is_empty() {
            return Err(InstanceError::NoJobs);
        }
        let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order = Vec::new();
        for &(_, label) in jobs {
            if let std::collections::btree_map::Entry::Vacant(e) = dense.entry(label) {
                e.insert(order.len());
                order.push(label);
            }
        }
        if m == 0 {
            return Err(InstanceError::NoMachines);
        }
        if s.is_zero() {
            return Err(InstanceError::ZeroSetup);
        }
        let mut classes = vec![Vec::new(); order.len()];
        let mut out = Vec::with_capacity(jobs.len());
        for (j, &(size, label)) in jobs.iter().enumerate() {
            if size.is_zero() {
                return Err(InstanceError::ZeroSize(JobId(j)));
            }
            let c = dense[&label];
            classes[c].push(JobId(j));
            out.push(Job {
                id: JobId(j),
                size,
                class: ClassId(c),
            });
        }
        Ok(Self {
            jobs: out,
            num_machines: m,
            setup: s,
            classes,
        })
    }

    pub fn jobs(&self) -> &[Job<T>] {
        &self.jobs
    }

    pub fn job(&self, id: JobId) -> &Job<T> {
        &self.jobs[id.0]
    }

    pub fn size(&self, id: JobId) -> T {
        self.jobs[id.0].size
    }

    pub fn class_of(&self, id: JobId) -> ClassId {
        self.jobs[id.0].class
    }

    /// Job ids of each class, in id order.
    pub fn classes(&self) -> &[Vec<JobId>] {
        &self.classes
    }

    pub fn class_members(&self, c: ClassId) -> &[JobId] {
        &self.classes[c.0]
    }

    pub fn num_jobs(&self) -> usize {
        self.jobs.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_machines(&self) -> usize {
        self.num_machines
    }

    pub fn setup(&self) -> T {
        self.setup
    }

    pub fn p_max(&self) -> T {
        self.jobs
            .iter()
            .map(|j| j.size)
            .max()
            .unwrap_or_else(T::zero)
    }

    pub fn total_work(&self) -> T {
        self.jobs.iter().map(|j| j.size).sum()
    }

    pub fn workload(&self, c: ClassId) -> T {
        self.classes[c.0].iter().map(|&j| self.size(j)).sum()
    }

    /// Same jobs on a different number of machines.
    pub fn with_machines(&self, m: usize) -> Result<Self, InstanceError> {
        if m == 0 {
            return Err(InstanceError::NoMachines);
        }
        Ok(Self {
            num_machines: m,
            ..self.clone()
        })
    }

    /// Restriction to a subset of jobs. Classes without any selected job are
    /// dropped; the returned map sends each new job id to the original one.
    pub fn restrict(&self, keep: &[JobId]) -> Result<(Self, Vec<JobId>), InstanceError> {
        let pairs: Vec<(T, usize)> = keep
            .iter()
            .map(|&j| (self.size(j), self.class_of(j).0))
            .collect();
        let sub = Self::from_jobs(self.num_machines, self.setup, &pairs)?;
        Ok((sub, keep.to_vec()))
    }

    /// Back to the on-disk description. Jobs are emitted per class; when the
    /// instance was built with [`Instance::from_classes`] this round-trips.
    pub fn to_raw(&self) -> RawInstance<T> {
        RawInstance {
            m: self.num_machines,
            s: self.setup,
            classes: self
                .classes
                .iter()
                .map(|ids| ids.iter().map(|&j| self.size(j)).collect())
                .collect(),
            releases: None,
        }
    }

    pub fn profile(&self) -> InstanceProfile<T> {
        let class_workloads: Vec<T> = (0..self.num_classes())
            .map(|c| self.workload(ClassId(c)))
            .collect();
        let lb = trivial_lower_bound(self);
        let max_w = class_workloads
            .iter()
            .copied()
            .max()
            .unwrap_or_else(T::zero);
        InstanceProfile {
            p_max: self.p_max(),
            total_work: self.total_work(),
            gamma: Rational::new(max_w.wide(), lb.wide()),
            class_workloads,
        }
    }
}

/// Summary statistics of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceProfile<T> {
    pub p_max: T,
    pub total_work: T,
    /// `w(C_i)` indexed by class.
    pub class_workloads: Vec<T>,
    /// Largest class workload relative to the trivial lower bound.
    pub gamma: Rational,
}

/// `max(s + p_max, ceil((k s + sum p) / m))`, never above the optimum.
pub fn trivial_lower_bound<T: Time>(inst: &Instance<T>) -> T {
    let k = T::from(inst.num_classes()).expect("class count fits in time type");
    let m = T::from(inst.num_machines()).expect("machine count fits in time type");
    let area = k * inst.setup() + inst.total_work();
    let averaged = (area + m - T::one()) / m;
    (inst.setup() + inst.p_max()).max(averaged)
}
