use crate::model::{Instance, JobId};
use crate::scalar::{Rational, Time};

use super::BudgetParams;

/// Huge and large jobs per class at a candidate makespan `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobClassification {
    /// `p >= T/2`, per class.
    pub huge: Vec<Vec<JobId>>,
    /// `T/2 - s < p < T/2`, per class.
    pub large: Vec<Vec<JobId>>,
    /// Smallest large job of each class; ties go to the lower id.
    pub smallest_large: Vec<Option<JobId>>,
    /// `B / lambda`: jobs and classes at or below it are tiny.
    pub tiny_threshold: Rational,
}

impl JobClassification {
    pub fn is_huge(&self, j: JobId) -> bool {
        self.huge.iter().any(|h| h.contains(&j))
    }

    pub fn is_large(&self, j: JobId) -> bool {
        self.large.iter().any(|l| l.contains(&j))
    }
}

pub fn classify_jobs<T: Time>(inst: &Instance<T>, params: &BudgetParams) -> JobClassification {
    let t = params.t;
    let s = params.setup;
    let k = inst.num_classes();
    let mut huge = vec![Vec::new(); k];
    let mut large = vec![Vec::new(); k];
    for job in inst.jobs() {
        let twice = 2 * job.size.wide();
        if twice >= t {
            huge[job.class.0].push(job.id);
        } else if twice > t - 2 * s {
            large[job.class.0].push(job.id);
        }
    }
    let smallest_large = (0..k)
        .map(|c| large[c].iter().copied().min_by_key(|&j| (inst.size(j), j)))
        .collect();
    JobClassification {
        huge,
        large,
        smallest_large,
        tiny_threshold: params.opt_bl / Rational::from_integer(params.lambda as i128),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(s: u64, t: u64, sizes: Vec<u64>) -> (Instance<u64>, JobClassification) {
        let inst = Instance::from_classes(4, s, vec![sizes]).unwrap();
        let params = BudgetParams::new(&inst, t, 10);
        let cls = classify_jobs(&inst, &params);
        (inst, cls)
    }

    #[test]
    fn thresholds_at_t10_s2() {
        let (_, cls) = classify(2, 10, vec![5, 4, 3]);
        assert!(cls.is_huge(JobId(0)));
        assert!(cls.is_large(JobId(1)) && !cls.is_huge(JobId(1)));
        assert!(!cls.is_large(JobId(2)) && !cls.is_huge(JobId(2)));
        assert_eq!(cls.smallest_large[0], Some(JobId(1)));
    }

    #[test]
    fn wide_large_interval_when_setup_is_big() {
        let (_, cls) = classify(5, 10, vec![4, 1]);
        assert!(cls.is_large(JobId(0)));
        assert!(cls.is_large(JobId(1)));
        assert_eq!(cls.smallest_large[0], Some(JobId(1)));
    }

    #[test]
    fn small_jobs_are_neither() {
        let (_, cls) = classify(2, 20, vec![8, 3, 1]);
        assert!(cls.huge[0].is_empty() && cls.large[0].is_empty());
        assert_eq!(cls.smallest_large[0], None);
    }
}
