//! From a configuration path back to a schedule of the input instance.

use std::collections::VecDeque;

use crate::model::{Instance, JobId};
use crate::scalar::Time;
use crate::schedule::{verify_schedule, Schedule};

use super::graph::Configuration;
use super::rounding::{ClassTypeTable, GridInstance};
use super::transform::TransformStack;
use super::BlockError;

/// Remaining jobs of the split class per compact size position.
struct OpenClass {
    remaining: Vec<VecDeque<usize>>,
}

fn jobs_by_size(class: usize, table: &ClassTypeTable, grid: &GridInstance) -> Vec<VecDeque<usize>> {
    let mut members = grid.work.classes[class].clone();
    members.sort_unstable();
    let mut out = vec![VecDeque::new(); table.sizes.len()];
    for j in members {
        let pos = table
            .sizes
            .binary_search(&grid.index[j])
            .expect("index present in table");
        out[pos].push_back(j);
    }
    out
}

/// Turns consecutive configuration differences into one job list per
/// machine of the rounded instance. Classes of a type are bound in
/// ascending order, jobs of equal size by ascending index.
pub fn materialize_path(
    path: &[Configuration],
    table: &ClassTypeTable,
    grid: &GridInstance,
) -> Vec<Vec<usize>> {
    let mut pools: Vec<VecDeque<usize>> = table
        .types
        .iter()
        .map(|t| t.classes.iter().copied().collect())
        .collect();
    let mut open: Option<OpenClass> = None;
    let mut machines = Vec::with_capacity(path.len().saturating_sub(1));

    for pair in path.windows(2) {
        let (v, w) = (&pair[0], &pair[1]);
        let mut load = Vec::new();
        let mut delta: Vec<u32> = w
            .finished
            .iter()
            .zip(&v.finished)
            .map(|(a, b)| a - b)
            .collect();
        let mut keep_open = false;

        if let (Some(sv), Some(current)) = (&v.split, open.as_mut()) {
            let continued = w.split.as_ref().is_some_and(|sw| {
                sw.ty == sv.ty && sv.progress.iter().zip(&sw.progress).all(|(a, b)| a <= b)
            });
            if continued {
                let sw = w.split.as_ref().expect("continued split");
                for (i, (a, b)) in sv.progress.iter().zip(&sw.progress).enumerate() {
                    for _ in *a..*b {
                        load.push(
                            current.remaining[i]
                                .pop_front()
                                .expect("job of split class"),
                        );
                    }
                }
                keep_open = true;
            } else {
                for queue in current.remaining.iter_mut() {
                    load.extend(queue.drain(..));
                }
                delta[sv.ty] -= 1;
            }
        }
        if !keep_open {
            open = None;
        }

        for (p, &d) in delta.iter().enumerate() {
            for _ in 0..d {
                let c = pools[p].pop_front().expect("fresh class of type");
                let mut members = grid.work.classes[c].clone();
                members.sort_unstable();
                load.extend(members);
            }
        }

        if !keep_open {
            if let Some(sw) = &w.split {
                let c = pools[sw.ty].pop_front().expect("fresh class for split");
                let mut remaining = jobs_by_size(c, table, grid);
                for (i, &u) in sw.progress.iter().enumerate() {
                    for _ in 0..u {
                        load.push(remaining[i].pop_front().expect("job of new split class"));
                    }
                }
                open = Some(OpenClass { remaining });
            }
        }
        machines.push(load);
    }
    machines
}

/// Whether every job is assigned once and, for every machine prefix, at
/// most one class has some but not all of its jobs inside the prefix.
pub fn is_block_assignment(classes: &[Vec<usize>], assignment: &[Vec<usize>]) -> bool {
    let n: usize = classes.iter().map(Vec::len).sum();
    let mut class_of = vec![usize::MAX; n];
    for (c, members) in classes.iter().enumerate() {
        for &j in members {
            if j >= n {
                return false;
            }
            class_of[j] = c;
        }
    }
    let mut seen = vec![false; n];
    let mut done = vec![0usize; classes.len()];
    let mut partial = 0usize;
    for jobs in assignment {
        for &j in jobs {
            if j >= n || seen[j] {
                return false;
            }
            seen[j] = true;
            let c = class_of[j];
            if done[c] == 0 && classes[c].len() > 1 {
                partial += 1;
            }
            done[c] += 1;
            if done[c] == classes[c].len() && classes[c].len() > 1 {
                partial -= 1;
            }
        }
        if partial > 1 {
            return false;
        }
    }
    seen.into_iter().all(|s| s)
}

/// Materialises `path`, unwinds `stack` and builds a verified schedule for
/// `inst` on its `m` machines.
pub fn reconstruct_schedule<T: Time>(
    path: &[Configuration],
    table: &ClassTypeTable,
    grid: &GridInstance,
    stack: &TransformStack,
    inst: &Instance<T>,
) -> Result<Schedule, BlockError> {
    let mut stage = materialize_path(path, table, grid);
    let m = inst.num_machines();
    if stage.len() > m {
        return Err(BlockError::Infeasible(format!(
            "path uses {} machines, only {m} available",
            stage.len()
        )));
    }
    stage.resize(m, Vec::new());
    let original = stack.pull_back(&stage);
    let assignment: Vec<Vec<JobId>> = original
        .into_iter()
        .map(|jobs| jobs.into_iter().map(JobId).collect())
        .collect();
    let schedule = Schedule::from_assignment(inst, &assignment);
    let report = verify_schedule(inst, &schedule);
    if !report.feasible {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(BlockError::Infeasible(msgs.join("; ")));
    }
    Ok(schedule)
}
