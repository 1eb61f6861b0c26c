mod common;

use proptest::prelude::*;

use common::{brute_force_opt, brute_force_released_opt, random_instance, random_releases};
use setupsched::blocksched::{
    block_decision, block_decision_traced, configuration_space_bound, group_tiny_jobs,
    is_block_assignment, materialize_path, WorkInstance,
};
use setupsched::exact::{exact_makespan, released_optimum, SearchLimit};
use setupsched::format::{emit_schedule, parse_schedule};
use setupsched::fptas::fptas_schedule;
use setupsched::greedy::greedy_schedule;
use setupsched::model;
use setupsched::online::{simulate_online, TimedInstance};
use setupsched::{trivial_lower_bound, verify_schedule, Algorithm, Instance, Rational};

fn few_machines() -> impl Strategy<Value = Instance> {
    (any::<u64>(), 1usize..=8).prop_map(|(seed, n)| random_instance(seed, n, &[1, 2, 3], 4, 6, 12))
}

fn small() -> impl Strategy<Value = Instance> {
    (any::<u64>(), 1usize..=8)
        .prop_map(|(seed, n)| random_instance(seed, n, &[1, 2, 3, 4], 4, 6, 12))
}

proptest! {
    #[test]
    fn greedy_below_twice_the_lower_bound(inst in small()) {
        let g = greedy_schedule(&inst);
        let report = verify_schedule(&inst, &g.schedule);
        prop_assert!(report.feasible);
        prop_assert_eq!(report.makespan, g.hi);
        prop_assert!(g.hi < 2 * g.lo);
        prop_assert!(g.schedule.num_setups() < inst.num_classes() + inst.num_machines());
    }

    #[test]
    fn exact_matches_enumeration(inst in small()) {
        let r = exact_makespan(&inst, SearchLimit::default());
        prop_assert!(r.proven_optimal);
        prop_assert_eq!(r.makespan, brute_force_opt(&inst));
        prop_assert!(r.makespan >= trivial_lower_bound(&inst));
        prop_assert_eq!(verify_schedule(&inst, &r.schedule).makespan, r.makespan);
    }

    #[test]
    fn exact_ignores_class_order(inst in small()) {
        let mut raw = inst.to_raw();
        raw.classes.reverse();
        let reversed = Instance::from_classes(raw.m, raw.s, raw.classes).unwrap();
        let a = exact_makespan(&inst, SearchLimit::default()).makespan;
        let b = exact_makespan(&reversed, SearchLimit::default()).makespan;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn fptas_within_one_plus_eps(inst in few_machines(), e in 1i128..=4) {
        let eps = Rational::new(1, e);
        let r = fptas_schedule(&inst, eps);
        prop_assert!(verify_schedule(&inst, &r.schedule).feasible);
        let opt = brute_force_opt(&inst);
        prop_assert!(Rational::from_integer(r.makespan as i128) <= (Rational::from_integer(1) + eps) * Rational::from_integer(opt as i128));
    }

    #[test]
    fn block_decision_is_sound_at_the_optimum(inst in small(), lambda in prop::sample::select(vec![2u32, 3, 5, 10])) {
        let opt = brute_force_opt(&inst);
        let out = block_decision(&inst, opt, lambda).unwrap();
        prop_assert!(!out.is_no());
    }

    #[test]
    fn block_intermediate_is_a_block_schedule(inst in small(), lambda in prop::sample::select(vec![2u32, 5, 10])) {
        let opt = brute_force_opt(&inst);
        let trace = block_decision_traced(&inst, opt, lambda).unwrap();
        let (grid, table, path) = (trace.grid.unwrap(), trace.table.unwrap(), trace.path.unwrap());
        let machines = materialize_path(&path, &table, &grid);
        prop_assert!(machines.len() <= inst.num_machines());
        prop_assert!(is_block_assignment(&grid.work.classes, &machines));
        prop_assert!((trace.visited as f64) <= configuration_space_bound(&table));
        let budget = trace.params.budget_units();
        let setup = trace.params.setup_units();
        for jobs in &machines {
            let mut classes: Vec<usize> = jobs.iter().map(|&j| grid.work.class_of[j]).collect();
            classes.dedup();
            let load: i128 = jobs.iter().map(|&j| grid.work.sizes[j]).sum::<i128>() + setup * classes.len() as i128;
            prop_assert!(load <= budget);
        }
        // placeholders keep work plus setups, not bare work
        let with_setups = grid.work.total_work() + setup * grid.work.num_classes() as i128;
        let original = inst.total_work() as i128 + inst.setup() as i128 * inst.num_classes() as i128;
        prop_assert!(with_setups >= trace.params.units(original));
    }

    #[test]
    fn grouping_conserves_work(sizes in prop::collection::vec(prop::collection::vec(1i128..40, 1..8), 1..5), tiny in 1i128..20) {
        let work = WorkInstance::from_classes(3, sizes);
        let (next, rw) = group_tiny_jobs(&work, tiny, 40 * tiny);
        prop_assert_eq!(next.total_work(), work.total_work());
        let mut parts: Vec<usize> = rw.job_parts.iter().flatten().copied().collect();
        parts.sort_unstable();
        prop_assert_eq!(parts, (0..work.num_jobs()).collect::<Vec<_>>());
        for c in (0..next.num_classes()).filter(|&c| next.workload(c) > tiny) {
            let underweight = next.classes[c].iter().filter(|&&j| next.sizes[j] < tiny).count();
            prop_assert!(underweight <= 1);
        }
    }

    #[test]
    fn released_optimum_matches_enumeration(seed in any::<u64>(), n in 1usize..=6) {
        let inst = random_instance(seed, n, &[1, 2, 3], 3, 5, 9);
        let releases = random_releases(seed, inst.num_jobs(), 20);
        prop_assert_eq!(released_optimum(&inst, &releases).unwrap(), brute_force_released_opt(&inst, &releases));
    }

    #[test]
    fn online_timelines_are_consistent(seed in any::<u64>(), n in 1usize..=8) {
        let inst = random_instance(seed, n, &[1, 2, 3], 4, 5, 9);
        let releases = random_releases(seed, inst.num_jobs(), 30);
        let tinst = TimedInstance::new(inst, releases);
        for alg in [Algorithm::Greedy, Algorithm::Block { lambda: 5 }] {
            let tl = simulate_online(&tinst, &alg).unwrap();
            prop_assert!(tl.check(&tinst).is_empty(), "{:?}", tl.check(&tinst));
            for w in tl.batches.windows(2) {
                prop_assert!(w[0].finish <= w[1].start);
                for &j in &w[1].jobs {
                    prop_assert!(tinst.releases[j.0] > w[0].start && tinst.releases[j.0] <= w[1].start);
                }
            }
        }
    }

    #[test]
    fn schedule_text_round_trips(inst in small()) {
        let s = greedy_schedule(&inst).schedule;
        let text = emit_schedule(&s);
        let back = parse_schedule(&text).unwrap();
        prop_assert_eq!(emit_schedule(&back), text);
        prop_assert_eq!(verify_schedule(&inst, &back), verify_schedule(&inst, &s));
    }
}

#[test]
fn solvers_accept_u32_durations() {
    let inst = model::Instance::from_classes(2, 2u32, vec![vec![3, 3], vec![4]]).unwrap();
    for alg in [
        Algorithm::Greedy,
        Algorithm::Fptas {
            eps: Rational::new(1, 4),
        },
        Algorithm::Block { lambda: 10 },
        Algorithm::Exact {
            limit: SearchLimit::default(),
        },
    ] {
        let sol = alg.solve(&inst).unwrap();
        let report = verify_schedule(&inst, &sol.schedule);
        assert!(report.feasible);
        assert_eq!(report.makespan, sol.makespan);
        assert!(sol.makespan >= 8u32);
    }
}
