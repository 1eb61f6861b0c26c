//! Approximation scheme for a constant number of machines.
//!
//! Setup and job sizes are rounded up to multiples of `eps * T / (n + k)`
//! with `T` the trivial lower bound; all loads are then integral multiples of
//! that grid and are stored as cell counts. Jobs are enumerated class by
//! class. At the first job of a class every nonempty subset of machines may
//! be set up; each job then goes to one of the set-up machines. After every
//! step dominated partial schedules are discarded.
//!
//! Machines are identical, so states are compared up to a permutation of
//! machines: the key is the sorted list of `(load, set-up)` pairs without its
//! largest entry, and only the smallest largest load is kept per key.

use std::collections::HashMap;

use crate::model::{trivial_lower_bound, ClassId, Instance, JobId};
use crate::scalar::{div_ceil, Rational, Time};
use crate::schedule::{Schedule, Segment};

/// Sizes rounded up to a common grid, expressed in grid cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundedInstance {
    pub grid: Rational,
    pub setup_cells: u64,
    /// Cells per job, indexed by `JobId`.
    pub job_cells: Vec<u64>,
}

impl RoundedInstance {
    pub fn rounded_setup(&self) -> Rational {
        self.grid * Rational::from_integer(self.setup_cells as i128)
    }

    pub fn rounded_size(&self, j: JobId) -> Rational {
        self.grid * Rational::from_integer(self.job_cells[j.0] as i128)
    }
}

/// Rounds `s` and every `p_j` up to the next multiple of
/// `eps * t / (n + k)`. Requires `t >= 1` and `eps > 0`.
pub fn round_instance_fptas<T: Time>(inst: &Instance<T>, t: T, eps: Rational) -> RoundedInstance {
    assert!(eps > Rational::from_integer(0), "eps must be positive");
    assert!(t >= T::one());
    let parts = (inst.num_jobs() + inst.num_classes()) as i128;
    let grid = eps * Rational::from_integer(t.wide()) / Rational::from_integer(parts);
    // cells(x) = ceil(x / grid) = ceil(x * denom / numer)
    let (num, den) = (*grid.numer(), *grid.denom());
    let cells = |x: T| -> u64 { div_ceil(x.wide() * den, num) as u64 };
    RoundedInstance {
        grid,
        setup_cells: cells(inst.setup()),
        job_cells: inst.jobs().iter().map(|j| cells(j.size)).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FptasOptions {
    /// Discard dominated partial schedules after each step.
    pub pruning: bool,
}

impl Default for FptasOptions {
    fn default() -> Self {
        Self { pruning: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FptasResult<T> {
    pub schedule: Schedule,
    pub makespan: T,
    /// Optimal makespan of the rounded instance, in grid cells.
    pub rounded_makespan_cells: u64,
    pub rounded: RoundedInstance,
    /// Number of partial schedules kept after each job.
    pub states_per_step: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
struct Node {
    parent: u32,
    machine: u8,
}

#[derive(Clone, Debug)]
struct PartialState {
    loads: Vec<u64>,
    setups: u64,
    node: u32,
}

/// Runs the scheme with default options.
pub fn fptas_schedule<T: Time>(inst: &Instance<T>, eps: Rational) -> FptasResult<T> {
    fptas_schedule_with(inst, eps, FptasOptions::default())
}

pub fn fptas_schedule_with<T: Time>(
    inst: &Instance<T>,
    eps: Rational,
    opts: FptasOptions,
) -> FptasResult<T> {
    let m = inst.num_machines();
    assert!(
        m <= 16,
        "the enumeration scheme is meant for a small constant number of machines"
    );
    let t = trivial_lower_bound(inst);
    let rounded = round_instance_fptas(inst, t, eps);

    let order: Vec<JobId> = inst.classes().iter().flatten().copied().collect();
    let mut arena: Vec<Node> = vec![Node {
        parent: u32::MAX,
        machine: 0,
    }];
    let mut states = vec![PartialState {
        loads: vec![0; m],
        setups: 0,
        node: 0,
    }];
    let mut states_per_step = Vec::with_capacity(order.len());

    for (idx, &j) in order.iter().enumerate() {
        let class = inst.class_of(j);
        let opens = idx == 0 || inst.class_of(order[idx - 1]) != class;
        let continues = order
            .get(idx + 1)
            .is_some_and(|&nj| inst.class_of(nj) == class);
        let cells = rounded.job_cells[j.0];
        let mut next: Vec<PartialState> = Vec::new();
        let mut index: HashMap<(Vec<(u64, bool)>, bool), usize> = HashMap::new();

        let mut push = |loads: Vec<u64>,
                        setups: u64,
                        node: Node,
                        next: &mut Vec<PartialState>,
                        arena: &mut Vec<Node>| {
            if !opts.pruning {
                arena.push(node);
                next.push(PartialState {
                    loads,
                    setups,
                    node: (arena.len() - 1) as u32,
                });
                return;
            }
            let mut pairs: Vec<(u64, bool)> = loads
                .iter()
                .enumerate()
                .map(|(i, &l)| (l, continues && setups & (1 << i) != 0))
                .collect();
            pairs.sort_unstable();
            let (last_load, last_flag) = pairs.pop().unwrap();
            let key = (pairs, last_flag);
            match index.get(&key) {
                Some(&slot) => {
                    let kept_max = *next[slot].loads.iter().max().unwrap();
                    if last_load < kept_max {
                        arena.push(node);
                        next[slot] = PartialState {
                            loads,
                            setups,
                            node: (arena.len() - 1) as u32,
                        };
                    }
                }
                None => {
                    arena.push(node);
                    index.insert(key, next.len());
                    next.push(PartialState {
                        loads,
                        setups,
                        node: (arena.len() - 1) as u32,
                    });
                }
            }
        };

        for st in &states {
            if opens {
                for mask in 1u64..(1 << m) {
                    let mut base = st.loads.clone();
                    for (i, l) in base.iter_mut().enumerate() {
                        if mask & (1 << i) != 0 {
                            *l += rounded.setup_cells;
                        }
                    }
                    for i in (0..m).filter(|i| mask & (1 << i) != 0) {
                        let mut loads = base.clone();
                        loads[i] += cells;
                        let node = Node {
                            parent: st.node,
                            machine: i as u8,
                        };
                        push(loads, mask, node, &mut next, &mut arena);
                    }
                }
            } else {
                for i in (0..m).filter(|i| st.setups & (1 << i) != 0) {
                    let mut loads = st.loads.clone();
                    loads[i] += cells;
                    let node = Node {
                        parent: st.node,
                        machine: i as u8,
                    };
                    push(loads, st.setups, node, &mut next, &mut arena);
                }
            }
        }
        states_per_step.push(next.len());
        states = next;
    }

    let best = states
        .iter()
        .min_by_key(|s| *s.loads.iter().max().unwrap())
        .expect("at least one complete schedule");
    let rounded_makespan_cells = *best.loads.iter().max().unwrap();

    // walk back to recover machine choices
    let mut placed = vec![0usize; order.len()];
    let mut node = best.node;
    for idx in (0..order.len()).rev() {
        let n = arena[node as usize];
        placed[idx] = n.machine as usize;
        node = n.parent;
    }
    let schedule = build_schedule(inst, &order, &placed);
    let makespan = schedule.makespan(inst);
    FptasResult {
        schedule,
        makespan,
        rounded_makespan_cells,
        rounded,
        states_per_step,
    }
}

fn build_schedule<T: Time>(inst: &Instance<T>, order: &[JobId], placed: &[usize]) -> Schedule {
    let mut machines: Vec<Vec<Segment>> = vec![Vec::new(); inst.num_machines()];
    let mut last_class: Vec<Option<ClassId>> = vec![None; inst.num_machines()];
    for (&j, &i) in order.iter().zip(placed) {
        let c = inst.class_of(j);
        if last_class[i] != Some(c) {
            machines[i].push(Segment::Setup(c));
            last_class[i] = Some(c);
        }
        machines[i].push(Segment::Run(j));
    }
    Schedule { machines }
}
