//! The relaxed decision procedure and the approximation algorithm on top.

use crate::greedy::greedy_schedule;
use crate::model::{trivial_lower_bound, Instance};
use crate::scalar::{Rational, Time};
use crate::schedule::Schedule;
use crate::search::{binary_search_makespan, DecisionOutcome, SearchError};

use super::classify::{classify_jobs, JobClassification};
use super::graph::{bfs_block_schedule, Configuration, DEFAULT_MAX_CONFIGURATIONS};
use super::reconstruct::reconstruct_schedule;
use super::rounding::{compute_class_types, round_to_grid, ClassTypeTable, GridInstance};
use super::transform::{
    consolidate_tiny_classes, group_tiny_jobs, isolate_special_jobs, Rewrite, RewriteKind,
    TransformStack, WorkInstance,
};
use super::{BlockError, BudgetParams};

/// Intermediate results of one decision call.
#[derive(Clone, Debug)]
pub struct DecisionTrace {
    pub params: BudgetParams,
    /// `None` when the call answered before classifying.
    pub classification: Option<JobClassification>,
    pub stack: TransformStack,
    pub grid: Option<GridInstance>,
    pub table: Option<ClassTypeTable>,
    pub path: Option<Vec<Configuration>>,
    pub visited: usize,
    pub outcome: DecisionOutcome,
}

/// Answers whether the block-schedule search finds a schedule for
/// candidate makespan `t`. A `No` means no schedule of makespan `t` exists.
pub fn block_decision<T: Time>(
    inst: &Instance<T>,
    t: T,
    lambda: u32,
) -> Result<DecisionOutcome, BlockError> {
    block_decision_traced(inst, t, lambda).map(|trace| trace.outcome)
}

pub fn block_decision_traced<T: Time>(
    inst: &Instance<T>,
    t: T,
    lambda: u32,
) -> Result<DecisionTrace, BlockError> {
    if lambda < 2 {
        return Err(BlockError::LambdaTooSmall(lambda));
    }
    let params = BudgetParams::new(inst, t, lambda);
    let mut trace = DecisionTrace {
        params: params.clone(),
        classification: None,
        stack: TransformStack::default(),
        grid: None,
        table: None,
        path: None,
        visited: 0,
        outcome: DecisionOutcome::No,
    };
    if t < trivial_lower_bound(inst) {
        return Ok(trace);
    }

    let work = WorkInstance::from_instance(inst, &params);
    let cls = classify_jobs(inst, &params);
    let work = if 2 * params.p_max > params.t {
        let (next, entries) = isolate_special_jobs(&work, &cls);
        entries.into_iter().for_each(|e| trace.stack.push(e));
        next
    } else {
        trace.stack.push(identity(RewriteKind::IsolateHuge, &work));
        trace
            .stack
            .push(identity(RewriteKind::IsolateSmallestLarge, &work));
        work
    };
    trace.classification = Some(cls);

    let tiny = params.tiny_units();
    let (work, rw) = group_tiny_jobs(&work, tiny, params.opt_bl_units());
    trace.stack.push(rw);
    let (work, rw) = consolidate_tiny_classes(&work, tiny);
    trace.stack.push(rw);
    let (grid, rw) = round_to_grid(&work, params.grid_units(), params.slots())?;
    trace.stack.push(rw);
    let table = compute_class_types(&grid);

    let bfs = bfs_block_schedule(
        &table,
        &params.machine_budget(),
        inst.num_machines(),
        DEFAULT_MAX_CONFIGURATIONS,
    )?;
    trace.visited = bfs.visited;
    if let Some(path) = &bfs.path {
        let schedule = reconstruct_schedule(path, &table, &grid, &trace.stack, inst)?;
        let bound = params.certified_bound();
        let makespan = schedule.makespan(inst);
        if makespan.to_rational() > bound {
            return Err(BlockError::BoundViolated {
                makespan: makespan.to_string(),
                bound: bound.to_string(),
            });
        }
        trace.outcome = DecisionOutcome::Yes {
            schedule,
            certified_bound: bound,
        };
    }
    trace.path = bfs.path;
    trace.grid = Some(grid);
    trace.table = Some(table);
    Ok(trace)
}

fn identity(kind: RewriteKind, work: &WorkInstance) -> Rewrite {
    Rewrite {
        kind,
        job_parts: (0..work.num_jobs()).map(|j| vec![j]).collect(),
        class_origin: (0..work.num_classes()).map(Some).collect(),
        tiny_pool: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSolution<T> {
    pub schedule: Schedule,
    pub makespan: T,
    /// Smallest candidate makespan answered with a schedule.
    pub threshold: T,
    pub certified_bound: Rational,
    pub probes: usize,
}

/// Binary search over `[T_lb, greedy makespan]` with [`block_decision`].
pub fn approx_schedule<T: Time>(
    inst: &Instance<T>,
    lambda: u32,
) -> Result<BlockSolution<T>, BlockError> {
    if lambda < 2 {
        return Err(BlockError::LambdaTooSmall(lambda));
    }
    let greedy = greedy_schedule(inst);
    let out = binary_search_makespan(
        inst,
        |i, t| block_decision(i, t, lambda),
        greedy.lo,
        greedy.hi,
    )
    .map_err(|e| match e {
        SearchError::Decide(e) => e,
        SearchError::NoAtUpperBound(hi) => BlockError::RejectedUpperBound(hi),
        SearchError::EmptyInterval { lo, hi } => {
            BlockError::Infeasible(format!("empty interval [{lo}, {hi}]"))
        }
    })?;
    Ok(BlockSolution {
        makespan: out.schedule.makespan(inst),
        schedule: out.schedule,
        threshold: out.threshold,
        certified_bound: out.certified_bound,
        probes: out.probes,
    })
}
