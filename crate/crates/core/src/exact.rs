//! Exact solvers for desk-sized instances.
//!
//! [`exact_makespan`] is a depth-first branch and bound over job-to-machine
//! assignments. With sequence-independent setups a machine's span is its
//! total work plus `s` times the number of distinct classes on it, so no
//! sequencing is needed.
//!
//! [`released_optimum`] handles release times with a subset dynamic program
//! and serves as the clairvoyant reference for the online simulator.

use crate::greedy::greedy_schedule;
use crate::model::{trivial_lower_bound, Instance, JobId};
use crate::scalar::Time;
use crate::schedule::Schedule;

/// Node budget for [`exact_makespan`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimit {
    pub max_nodes: u64,
}

impl Default for SearchLimit {
    fn default() -> Self {
        Self {
            max_nodes: 50_000_000,
        }
    }
}

impl SearchLimit {
    pub fn unlimited() -> Self {
        Self {
            max_nodes: u64::MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSolution<T> {
    /// Best makespan found. Equal to the optimum iff `proven_optimal`.
    pub makespan: T,
    pub schedule: Schedule,
    /// `false` when the node budget ran out; `makespan` is then an upper
    /// bound only and `lower_bound` is the best certified lower bound.
    pub proven_optimal: bool,
    pub lower_bound: T,
    pub nodes: u64,
}

struct Bnb<'a, T> {
    inst: &'a Instance<T>,
    order: Vec<JobId>,
    loads: Vec<T>,
    class_counts: Vec<Vec<u32>>,
    distinct: Vec<usize>,
    used_class: Vec<u32>,
    assign: Vec<usize>,
    best: T,
    best_assign: Option<Vec<usize>>,
    remaining_work: Vec<T>,
    nodes: u64,
    limit: u64,
    aborted: bool,
    lower: T,
}

impl<T: Time> Bnb<'_, T> {
    fn span(&self, i: usize) -> T {
        self.loads[i] + self.inst.setup() * T::from(self.distinct[i]).unwrap()
    }

    fn bound_ok(&self, depth: usize) -> bool {
        let m = T::from(self.inst.num_machines()).unwrap();
        let spans: T = (0..self.loads.len()).map(|i| self.span(i)).sum();
        let fresh = self.used_class.iter().filter(|&&c| c == 0).count();
        let area = spans + self.remaining_work[depth] + self.inst.setup() * T::from(fresh).unwrap();
        (area + m - T::one()) / m < self.best
    }

    fn dfs(&mut self, depth: usize) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        if depth == self.order.len() {
            let mk = (0..self.loads.len()).map(|i| self.span(i)).max().unwrap();
            if mk < self.best {
                self.best = mk;
                self.best_assign = Some(self.assign.clone());
            }
            return;
        }
        if self.best <= self.lower || !self.bound_ok(depth) {
            return;
        }
        let j = self.order[depth];
        let p = self.inst.size(j);
        let c = self.inst.class_of(j).0;

        let mut candidates: Vec<(T, usize)> = Vec::with_capacity(self.loads.len());
        let mut seen_empty = false;
        for i in 0..self.loads.len() {
            let empty = self.distinct[i] == 0;
            if empty {
                if seen_empty {
                    continue;
                }
                seen_empty = true;
            }
            let extra = if self.class_counts[i][c] == 0 {
                self.inst.setup()
            } else {
                T::zero()
            };
            let new_span = self.span(i) + p + extra;
            if new_span < self.best {
                candidates.push((new_span, i));
            }
        }
        candidates.sort();
        for (_, i) in candidates {
            self.loads[i] = self.loads[i] + p;
            if self.class_counts[i][c] == 0 {
                self.distinct[i] += 1;
            }
            self.class_counts[i][c] += 1;
            self.used_class[c] += 1;
            self.assign[j.0] = i;

            self.dfs(depth + 1);

            self.used_class[c] -= 1;
            self.class_counts[i][c] -= 1;
            if self.class_counts[i][c] == 0 {
                self.distinct[i] -= 1;
            }
            self.loads[i] = self.loads[i] - p;
            if self.aborted {
                return;
            }
        }
    }
}

/// Minimum makespan by exhaustive search with pruning. Seeds the incumbent
/// with the greedy schedule, so a witness is always returned.
pub fn exact_makespan<T: Time>(inst: &Instance<T>, limit: SearchLimit) -> ExactSolution<T> {
    let greedy = greedy_schedule(inst);
    let m = inst.num_machines();
    let mut order: Vec<JobId> = inst.jobs().iter().map(|j| j.id).collect();
    order.sort_by(|a, b| inst.size(*b).cmp(&inst.size(*a)).then(a.cmp(b)));
    let mut remaining_work = vec![T::zero(); order.len() + 1];
    for d in (0..order.len()).rev() {
        remaining_work[d] = remaining_work[d + 1] + inst.size(order[d]);
    }
    let lower = trivial_lower_bound(inst);
    let mut bnb = Bnb {
        inst,
        order,
        loads: vec![T::zero(); m],
        class_counts: vec![vec![0; inst.num_classes()]; m],
        distinct: vec![0; m],
        used_class: vec![0; inst.num_classes()],
        assign: vec![0; inst.num_jobs()],
        best: greedy.hi,
        best_assign: None,
        remaining_work,
        nodes: 0,
        limit: limit.max_nodes,
        aborted: false,
        lower,
    };
    bnb.dfs(0);
    let (makespan, schedule) = match bnb.best_assign {
        Some(assign) => {
            let mut per_machine: Vec<Vec<JobId>> = vec![Vec::new(); m];
            // classes ascending, jobs ascending
            let mut jobs: Vec<JobId> = inst.jobs().iter().map(|j| j.id).collect();
            jobs.sort_by_key(|&j| (inst.class_of(j), j));
            for j in jobs {
                per_machine[assign[j.0]].push(j);
            }
            let s = Schedule::from_assignment(inst, &per_machine);
            (bnb.best, s)
        }
        None => (greedy.hi, greedy.schedule),
    };
    ExactSolution {
        makespan,
        schedule,
        proven_optimal: !bnb.aborted,
        lower_bound: if bnb.aborted { lower } else { makespan },
        nodes: bnb.nodes,
    }
}

/// Largest job count accepted by [`released_optimum`].
pub const RELEASED_OPTIMUM_MAX_JOBS: usize = 12;

/// Optimal makespan when job `j` may not start before `releases[j]`. Setups
/// may run before the release of the job they prepare. Returns `None` when
/// the instance has more than [`RELEASED_OPTIMUM_MAX_JOBS`] jobs.
///
/// Single-machine costs come from a DP over (finished set, last job), the
/// machine split from a DP over subsets.
pub fn released_optimum<T: Time>(inst: &Instance<T>, releases: &[T]) -> Option<T> {
    let n = inst.num_jobs();
    if n > RELEASED_OPTIMUM_MAX_JOBS {
        return None;
    }
    assert_eq!(releases.len(), n);
    let full = (1usize << n) - 1;
    let s = inst.setup();
    let inf = T::max_value();

    // finish[mask][last]: earliest completion of `mask` on one machine ending with `last`
    let mut finish = vec![inf; (full + 1) * n];
    for j in 0..n {
        let t = (s).max(releases[j]) + inst.size(JobId(j));
        finish[(1 << j) * n + j] = t;
    }
    let mut single = vec![inf; full + 1];
    single[0] = T::zero();
    for mask in 1..=full {
        let mut best = inf;
        for last in 0..n {
            if mask & (1 << last) == 0 {
                continue;
            }
            let t = finish[mask * n + last];
            if t == inf {
                continue;
            }
            best = best.min(t);
            let last_class = inst.class_of(JobId(last));
            for next in 0..n {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let jn = JobId(next);
                let ready = if inst.class_of(jn) == last_class {
                    t
                } else {
                    t + s
                };
                let done = ready.max(releases[next]) + inst.size(jn);
                let slot = &mut finish[(mask | (1 << next)) * n + next];
                if done < *slot {
                    *slot = done;
                }
            }
        }
        single[mask] = best;
    }

    // best[mask] using the machines processed so far
    let mut best = single.clone();
    for _ in 1..inst.num_machines().min(n) {
        let mut next = best.clone();
        for mask in 1..=full {
            let mut sub = mask;
            while sub > 0 {
                let cand = best[mask ^ sub].max(single[sub]);
                if cand < next[mask] {
                    next[mask] = cand;
                }
                sub = (sub - 1) & mask;
            }
        }
        best = next;
    }
    Some(best[full])
}
