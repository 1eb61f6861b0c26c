//! Instance rewrites and their inverses.
//!
//! Every rewrite maps the jobs of the new instance to jobs of the previous
//! one. Placeholder jobs created for tiny classes map to nothing; their
//! rewrite carries the removed classes instead and hands them out to the
//! machines hosting placeholders when the stack is unwound.

use crate::model::Instance;
use crate::scalar::Time;

use super::{BudgetParams, JobClassification};

/// Instance in scaled integer units, as seen by the rewrite pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkInstance {
    pub sizes: Vec<i128>,
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub setup: i128,
}

impl WorkInstance {
    /// Job `i` of the result is `JobId(i)` of `inst`; classes keep their index.
    pub fn from_instance<T: Time>(inst: &Instance<T>, params: &BudgetParams) -> Self {
        Self {
            sizes: inst
                .jobs()
                .iter()
                .map(|j| params.units(j.size.wide()))
                .collect(),
            class_of: inst.jobs().iter().map(|j| j.class.0).collect(),
            classes: inst
                .classes()
                .iter()
                .map(|c| c.iter().map(|j| j.0).collect())
                .collect(),
            setup: params.setup_units(),
        }
    }

    /// Jobs numbered in reading order.
    pub fn from_classes(setup: i128, classes: Vec<Vec<i128>>) -> Self {
        let mut out = Self {
            sizes: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
            setup,
        };
        for sizes in classes {
            let c = out.classes.len();
            let mut members = Vec::new();
            for s in sizes {
                members.push(out.sizes.len());
                out.sizes.push(s);
                out.class_of.push(c);
            }
            out.classes.push(members);
        }
        out
    }

    pub fn num_jobs(&self) -> usize {
        self.sizes.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn workload(&self, c: usize) -> i128 {
        self.classes[c].iter().map(|&j| self.sizes[j]).sum()
    }

    pub fn total_work(&self) -> i128 {
        self.sizes.iter().sum()
    }

    /// Sizes per class, in class order.
    pub fn class_sizes(&self) -> Vec<Vec<i128>> {
        self.classes
            .iter()
            .map(|c| c.iter().map(|&j| self.sizes[j]).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteKind {
    IsolateHuge,
    IsolateSmallestLarge,
    GroupTinyJobs,
    ConsolidateTinyClasses,
    Round,
}

/// Tiny classes replaced by placeholder classes. On unwinding, the classes
/// are laid out in order and cut into windows of `slot` units per
/// placeholder on each machine; a class belongs to the window it starts in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TinyPool {
    /// Previous-stage jobs of each removed class, in removal order.
    pub members: Vec<Vec<usize>>,
    /// `w + s` of each removed class.
    pub lengths: Vec<i128>,
    /// Window length per placeholder, `B / lambda`.
    pub slot: i128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub kind: RewriteKind,
    /// Previous-stage jobs merged into each new job; empty for placeholders.
    pub job_parts: Vec<Vec<usize>>,
    /// Previous-stage class of each new class; `None` for placeholders.
    pub class_origin: Vec<Option<usize>>,
    pub tiny_pool: Option<TinyPool>,
}

impl Rewrite {
    fn identity(kind: RewriteKind, work: &WorkInstance) -> Self {
        Self {
            kind,
            job_parts: (0..work.num_jobs()).map(|j| vec![j]).collect(),
            class_origin: (0..work.num_classes()).map(Some).collect(),
            tiny_pool: None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.tiny_pool.is_none()
            && self
                .job_parts
                .iter()
                .enumerate()
                .all(|(i, p)| p.len() == 1 && p[0] == i)
            && self
                .class_origin
                .iter()
                .enumerate()
                .all(|(i, c)| *c == Some(i))
    }

    /// Maps a per-machine job assignment of the new stage to the previous one.
    pub fn pull_back(&self, assignment: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = assignment
            .iter()
            .map(|jobs| {
                jobs.iter()
                    .flat_map(|&j| self.job_parts[j].iter().copied())
                    .collect()
            })
            .collect();
        if let Some(pool) = &self.tiny_pool {
            let capacity: Vec<i128> = assignment
                .iter()
                .map(|jobs| {
                    jobs.iter()
                        .filter(|&&j| self.job_parts[j].is_empty())
                        .count() as i128
                        * pool.slot
                })
                .collect();
            let mut machine = 0usize;
            let mut window_end = capacity.first().copied().unwrap_or(0);
            let mut pos = 0i128;
            for (members, &len) in pool.members.iter().zip(&pool.lengths) {
                while pos >= window_end && machine + 1 < capacity.len() {
                    machine += 1;
                    window_end += capacity[machine];
                }
                out[machine].extend(members.iter().copied());
                pos += len;
            }
        }
        out
    }
}

/// Ordered record of the rewrites applied to an instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformStack {
    pub entries: Vec<Rewrite>,
}

impl TransformStack {
    pub fn push(&mut self, rewrite: Rewrite) {
        self.entries.push(rewrite);
    }

    /// Maps an assignment of the final stage's jobs back to input job
    /// indices by applying every inverse in reverse order.
    pub fn pull_back(&self, assignment: &[Vec<usize>]) -> Vec<Vec<usize>> {
        self.entries
            .iter()
            .rev()
            .fold(assignment.to_vec(), |acc, rewrite| rewrite.pull_back(&acc))
    }
}

fn isolate(work: &WorkInstance, jobs: &[usize], kind: RewriteKind) -> (WorkInstance, Rewrite) {
    if jobs.is_empty() {
        return (work.clone(), Rewrite::identity(kind, work));
    }
    let mut moved = vec![false; work.num_jobs()];
    for &j in jobs {
        moved[j] = true;
    }
    let mut classes = Vec::new();
    let mut class_origin = Vec::new();
    for (c, members) in work.classes.iter().enumerate() {
        let rest: Vec<usize> = members.iter().copied().filter(|&j| !moved[j]).collect();
        if !rest.is_empty() {
            classes.push(rest);
            class_origin.push(Some(c));
        }
    }
    for &j in jobs {
        classes.push(vec![j]);
        class_origin.push(Some(work.class_of[j]));
    }
    let mut class_of = vec![0; work.num_jobs()];
    for (c, members) in classes.iter().enumerate() {
        for &j in members {
            class_of[j] = c;
        }
    }
    let next = WorkInstance {
        sizes: work.sizes.clone(),
        class_of,
        classes,
        setup: work.setup,
    };
    let rewrite = Rewrite {
        kind,
        job_parts: (0..work.num_jobs()).map(|j| vec![j]).collect(),
        class_origin,
        tiny_pool: None,
    };
    (next, rewrite)
}

/// Moves every huge job, then the smallest large job of each class, into a
/// singleton class of its own. `work` must index jobs like the instance the
/// classification was computed on. Returns one rewrite per step.
pub fn isolate_special_jobs(
    work: &WorkInstance,
    cls: &JobClassification,
) -> (WorkInstance, Vec<Rewrite>) {
    let huge: Vec<usize> = cls.huge.iter().flatten().map(|j| j.0).collect();
    let (after_huge, first) = isolate(work, &huge, RewriteKind::IsolateHuge);
    let qs: Vec<usize> = cls.smallest_large.iter().flatten().map(|j| j.0).collect();
    let (after_q, second) = isolate(&after_huge, &qs, RewriteKind::IsolateSmallestLarge);
    (after_q, vec![first, second])
}

/// Bundles tiny jobs (`size <= tiny`) of every non-tiny class greedily into
/// jobs of size in `[tiny, 2 tiny)`. A final underweight bundle joins the
/// smallest non-tiny job of its class, or else the last full bundle, as
/// long as the result stays within `max_size`; otherwise it stays on its
/// own.
pub fn group_tiny_jobs(work: &WorkInstance, tiny: i128, max_size: i128) -> (WorkInstance, Rewrite) {
    let mut classes: Vec<Vec<(i128, Vec<usize>)>> = Vec::with_capacity(work.num_classes());
    let mut changed = false;
    for (c, members) in work.classes.iter().enumerate() {
        let mut jobs: Vec<(i128, Vec<usize>)> = Vec::new();
        if work.workload(c) <= tiny || members.iter().all(|&j| work.sizes[j] > tiny) {
            jobs.extend(members.iter().map(|&j| (work.sizes[j], vec![j])));
            classes.push(jobs);
            continue;
        }
        changed = true;
        let mut regular: Vec<(i128, Vec<usize>)> = Vec::new();
        let mut bundles: Vec<(i128, Vec<usize>)> = Vec::new();
        let mut current: (i128, Vec<usize>) = (0, Vec::new());
        for &j in members {
            let p = work.sizes[j];
            if p > tiny {
                regular.push((p, vec![j]));
                continue;
            }
            current.0 += p;
            current.1.push(j);
            if current.0 >= tiny {
                bundles.push(std::mem::take(&mut current));
            }
        }
        if !current.1.is_empty() {
            let smallest = regular
                .iter_mut()
                .enumerate()
                .filter(|(_, (p, _))| *p + current.0 <= max_size)
                .min_by_key(|(i, (p, _))| (*p, *i))
                .map(|(_, job)| job);
            let target = match smallest {
                Some(job) => Some(job),
                None => bundles
                    .last_mut()
                    .filter(|(p, _)| *p + current.0 <= max_size),
            };
            match target {
                Some(job) => {
                    job.0 += current.0;
                    job.1.extend(current.1);
                }
                None => bundles.push(current),
            }
        }
        jobs.extend(regular);
        jobs.extend(bundles);
        classes.push(jobs);
    }
    if !changed {
        return (
            work.clone(),
            Rewrite::identity(RewriteKind::GroupTinyJobs, work),
        );
    }
    let mut next = WorkInstance {
        sizes: Vec::new(),
        class_of: Vec::new(),
        classes: Vec::new(),
        setup: work.setup,
    };
    let mut job_parts = Vec::new();
    for jobs in classes {
        let c = next.classes.len();
        let mut members = Vec::new();
        for (size, parts) in jobs {
            members.push(next.sizes.len());
            next.sizes.push(size);
            next.class_of.push(c);
            job_parts.push(parts);
        }
        next.classes.push(members);
    }
    let rewrite = Rewrite {
        kind: RewriteKind::GroupTinyJobs,
        job_parts,
        class_origin: (0..work.num_classes()).map(Some).collect(),
        tiny_pool: None,
    };
    (next, rewrite)
}

/// Handles classes with workload at most `tiny`. If `tiny > s` they are
/// removed and replaced by `ceil(L / tiny)` singleton classes of size
/// `tiny - s`, `L` being the total length of the removed classes including
/// one setup each. Otherwise each tiny class is merged into a single job.
pub fn consolidate_tiny_classes(work: &WorkInstance, tiny: i128) -> (WorkInstance, Rewrite) {
    let is_tiny: Vec<bool> = (0..work.num_classes())
        .map(|c| work.workload(c) <= tiny)
        .collect();
    if !is_tiny.iter().any(|&t| t) {
        return (
            work.clone(),
            Rewrite::identity(RewriteKind::ConsolidateTinyClasses, work),
        );
    }
    let mut next = WorkInstance {
        sizes: Vec::new(),
        class_of: Vec::new(),
        classes: Vec::new(),
        setup: work.setup,
    };
    let mut job_parts: Vec<Vec<usize>> = Vec::new();
    let mut class_origin = Vec::new();
    let mut add_class =
        |jobs: Vec<(i128, Vec<usize>)>, origin: Option<usize>, next: &mut WorkInstance| {
            let c = next.classes.len();
            let mut members = Vec::new();
            for (size, parts) in jobs {
                members.push(next.sizes.len());
                next.sizes.push(size);
                next.class_of.push(c);
                job_parts.push(parts);
            }
            next.classes.push(members);
            class_origin.push(origin);
        };

    let replace = tiny > work.setup;
    let mut pool = TinyPool {
        members: Vec::new(),
        lengths: Vec::new(),
        slot: tiny,
    };
    for (c, members) in work.classes.iter().enumerate() {
        if !is_tiny[c] {
            add_class(
                members.iter().map(|&j| (work.sizes[j], vec![j])).collect(),
                Some(c),
                &mut next,
            );
        } else if replace {
            pool.members.push(members.clone());
            pool.lengths.push(work.workload(c) + work.setup);
        } else {
            add_class(
                vec![(work.workload(c), members.clone())],
                Some(c),
                &mut next,
            );
        }
    }
    let mut tiny_pool = None;
    if replace {
        let total: i128 = pool.lengths.iter().sum();
        let count = (total + tiny - 1) / tiny;
        for _ in 0..count {
            add_class(vec![(tiny - work.setup, Vec::new())], None, &mut next);
        }
        tiny_pool = Some(pool);
    }
    let rewrite = Rewrite {
        kind: RewriteKind::ConsolidateTinyClasses,
        job_parts,
        class_origin,
        tiny_pool,
    };
    (next, rewrite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::JobId;
    use crate::scalar::Rational;

    fn classification(
        huge: Vec<Vec<usize>>,
        large: Vec<Vec<usize>>,
        q: Vec<Option<usize>>,
    ) -> JobClassification {
        let ids = |v: Vec<Vec<usize>>| {
            v.into_iter()
                .map(|c| c.into_iter().map(JobId).collect())
                .collect()
        };
        JobClassification {
            huge: ids(huge),
            large: ids(large),
            smallest_large: q.into_iter().map(|o| o.map(JobId)).collect(),
            tiny_threshold: Rational::from_integer(1),
        }
    }

    #[test]
    fn isolates_huge_and_smallest_large() {
        let work = WorkInstance::from_classes(2, vec![vec![5, 4, 4]]);
        let cls = classification(vec![vec![0]], vec![vec![1, 2]], vec![Some(1)]);
        let (next, entries) = isolate_special_jobs(&work, &cls);
        assert_eq!(next.class_sizes(), vec![vec![4], vec![5], vec![4]]);
        assert_eq!(next.classes, vec![vec![2], vec![0], vec![1]]);
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].kind, RewriteKind::IsolateHuge);
        assert_eq!(entries[1].kind, RewriteKind::IsolateSmallestLarge);
        assert!(entries[1].class_origin.iter().all(|c| c.is_some()));
    }

    #[test]
    fn isolation_without_special_jobs_is_identity() {
        let work = WorkInstance::from_classes(2, vec![vec![1, 2], vec![3]]);
        let cls = classification(vec![vec![], vec![]], vec![vec![], vec![]], vec![None, None]);
        let (next, entries) = isolate_special_jobs(&work, &cls);
        assert_eq!(next, work);
        assert!(entries.iter().all(Rewrite::is_identity));
    }

    #[test]
    fn single_huge_job_class_is_relabelled() {
        let work = WorkInstance::from_classes(1, vec![vec![9]]);
        let cls = classification(vec![vec![0]], vec![vec![]], vec![None]);
        let (next, _) = isolate_special_jobs(&work, &cls);
        assert_eq!(next.class_sizes(), vec![vec![9]]);
    }

    #[test]
    fn groups_tiny_jobs_and_merges_leftover() {
        let work = WorkInstance::from_classes(1, vec![vec![2, 2, 2, 9]]);
        let (next, rw) = group_tiny_jobs(&work, 4, 100);
        let mut sizes = next.class_sizes()[0].clone();
        sizes.sort();
        assert_eq!(sizes, vec![4, 11]);
        assert_eq!(next.total_work(), work.total_work());
        let mut all: Vec<usize> = rw.job_parts.iter().flatten().copied().collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn class_without_tiny_jobs_is_unchanged() {
        let work = WorkInstance::from_classes(1, vec![vec![5, 9]]);
        let (next, rw) = group_tiny_jobs(&work, 4, 100);
        assert_eq!(next, work);
        assert!(rw.is_identity());
    }

    #[test]
    fn all_tiny_class_becomes_one_bundle() {
        let work = WorkInstance::from_classes(1, vec![vec![3, 3]]);
        let (next, _) = group_tiny_jobs(&work, 4, 100);
        assert_eq!(next.class_sizes(), vec![vec![6]]);
    }

    #[test]
    fn leftover_stays_alone_when_merging_would_overflow() {
        let work = WorkInstance::from_classes(1, vec![vec![19, 7, 7]]);
        let (next, _) = group_tiny_jobs(&work, 15, 30);
        let mut sizes = next.class_sizes()[0].clone();
        sizes.sort();
        assert_eq!(sizes, vec![14, 19]);
    }

    #[test]
    fn tiny_classes_become_placeholders() {
        // tiny threshold 5 > s = 2: lengths (2+2) + (1+2) = 7 -> 10 -> two slots of size 3
        let work = WorkInstance::from_classes(2, vec![vec![2], vec![9], vec![1]]);
        let (next, rw) = consolidate_tiny_classes(&work, 5);
        assert_eq!(next.class_sizes(), vec![vec![9], vec![3], vec![3]]);
        let pool = rw.tiny_pool.as_ref().unwrap();
        assert_eq!(pool.members, vec![vec![0], vec![2]]);
        assert_eq!(pool.lengths, vec![4, 3]);
        assert_eq!(rw.class_origin, vec![Some(1), None, None]);
    }

    #[test]
    fn tiny_classes_collapse_when_setup_dominates() {
        let work = WorkInstance::from_classes(3, vec![vec![1, 1], vec![8]]);
        let (next, rw) = consolidate_tiny_classes(&work, 2);
        assert_eq!(next.class_sizes(), vec![vec![2], vec![8]]);
        assert_eq!(rw.job_parts[0], vec![0, 1]);
    }

    #[test]
    fn no_tiny_classes_no_change() {
        let work = WorkInstance::from_classes(1, vec![vec![7], vec![8]]);
        let (next, rw) = consolidate_tiny_classes(&work, 5);
        assert_eq!(next, work);
        assert!(rw.is_identity());
    }

    #[test]
    fn placeholders_pull_back_onto_their_machines() {
        let work = WorkInstance::from_classes(2, vec![vec![2], vec![9], vec![1]]);
        let (_, rw) = consolidate_tiny_classes(&work, 5);
        // new jobs: 0 = the 9, 1 and 2 = placeholders
        // both tiny classes start inside machine 0's window of 5 units
        let back = rw.pull_back(&[vec![0, 1], vec![2]]);
        assert_eq!(back[0], vec![1, 0, 2]);
        assert!(back[1].is_empty());
        let back = rw.pull_back(&[vec![0], vec![1, 2]]);
        assert_eq!(back[0], vec![1]);
        assert_eq!(back[1], vec![0, 2]);
    }
}
