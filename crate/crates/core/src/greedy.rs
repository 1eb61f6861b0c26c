//! Linear-time 2-approximation by cutting the class sequence into blocks.
//!
//! Classes are laid out back to back as `w(C_1), s, w(C_2), s, ..., w(C_k)`
//! and the line is cut every `T` units, `T` being the trivial lower bound.
//! Every job goes to the block in which it starts; each machine then gets a
//! fresh setup for its first class, so no machine exceeds
//! `T + s + p_max - 1 < 2T`.

use crate::model::{trivial_lower_bound, Instance, JobId};
use crate::scalar::Time;
use crate::schedule::Schedule;

/// Greedy schedule together with the bracket `[lo, hi]` containing the
/// optimum: `lo` is the trivial lower bound, `hi` the greedy makespan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyResult<T> {
    pub schedule: Schedule,
    pub lo: T,
    pub hi: T,
}

pub fn greedy_schedule<T: Time>(inst: &Instance<T>) -> GreedyResult<T> {
    let block = trivial_lower_bound(inst);
    let m = inst.num_machines();
    let mut assignment: Vec<Vec<JobId>> = vec![Vec::new(); m];
    let mut pos = T::zero();
    for (ci, members) in inst.classes().iter().enumerate() {
        if ci > 0 {
            pos = pos + inst.setup();
        }
        for &j in members {
            let machine = (pos / block).to_usize().expect("block index fits in usize");
            // total line length is (k-1)s + sum p < m T, so this never trips
            debug_assert!(machine < m);
            assignment[machine.min(m - 1)].push(j);
            pos = pos + inst.size(j);
        }
    }
    let schedule = Schedule::from_assignment(inst, &assignment);
    let hi = schedule.makespan(inst);
    GreedyResult {
        schedule,
        lo: block,
        hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ClassId;
    use crate::schedule::{verify_schedule, Segment};

    #[test]
    fn cuts_the_fixture_at_the_lower_bound() {
        let inst = Instance::from_classes(2, 2u64, vec![vec![3, 3], vec![4]]).unwrap();
        let g = greedy_schedule(&inst);
        assert_eq!((g.lo, g.hi), (7, 8));
        assert_eq!(
            g.schedule.machines,
            vec![
                vec![
                    Segment::Setup(ClassId(0)),
                    Segment::Run(JobId(0)),
                    Segment::Run(JobId(1))
                ],
                vec![Segment::Setup(ClassId(1)), Segment::Run(JobId(2))],
            ]
        );
        let r = verify_schedule(&inst, &g.schedule);
        assert!(r.feasible);
        assert_eq!(r.per_machine_span, vec![8, 6]);
    }

    #[test]
    fn single_machine_single_class_is_optimal() {
        let inst = Instance::from_classes(1, 3u64, vec![vec![4, 1, 2]]).unwrap();
        let g = greedy_schedule(&inst);
        assert_eq!(g.hi, 3 + 7);
    }

    #[test]
    fn unit_jobs_on_many_machines() {
        let inst = Instance::from_classes(6, 1u64, vec![vec![1; 5]]).unwrap();
        let g = greedy_schedule(&inst);
        assert!(verify_schedule(&inst, &g.schedule).feasible);
        assert!(g.hi < 2 * g.lo);
        assert_eq!(g.schedule.machines.len(), 6);
    }

    #[test]
    fn setups_are_bounded_by_classes_plus_machines() {
        let inst = Instance::from_classes(
            3,
            2u64,
            vec![vec![5, 1], vec![3, 3, 3], vec![7], vec![2, 2]],
        )
        .unwrap();
        let g = greedy_schedule(&inst);
        assert!(verify_schedule(&inst, &g.schedule).feasible);
        assert!(g.schedule.num_setups() < inst.num_classes() + inst.num_machines());
        for segs in &g.schedule.machines {
            if let Some(first) = segs.first() {
                assert!(matches!(first, Segment::Setup(_)));
            }
        }
        assert!(g.hi < 2 * g.lo);
    }
}
