//! Relaxed decision procedure over block-schedules and the approximation
//! algorithm built on it.
//!
//! A block-schedule assigns classes to consecutive machines so that, for
//! every prefix of machines, at most one class is partially processed. For a
//! candidate makespan `T` the procedure
//!
//! 1. classifies jobs as huge (`p >= T/2`) or large (`T/2 - s < p < T/2`)
//!    and moves huge jobs and the smallest large job of each class into
//!    singleton classes,
//! 2. bundles tiny jobs (`p <= B/lambda`) of non-tiny classes,
//! 3. replaces tiny classes (`w <= B/lambda`) by uniform placeholder classes,
//! 4. rounds sizes up to multiples of `B/lambda^2`,
//! 5. groups classes into class-types and searches the configuration graph
//!    breadth-first for a path of at most `m` machines, each edge fitting the
//!    per-machine budget `(1 + eps) B`,
//! 6. unwinds the transformations to obtain a schedule for the input.
//!
//! Here `B = min(T + p_max - 1, 3T/2)` and `eps = 9/lambda + 8/lambda^2`.
//! All arithmetic runs on integers scaled by `2 lambda^2`, in which `B`, the
//! grid and the budget are integral.

mod classify;
mod decision;
mod graph;
mod reconstruct;
mod rounding;
mod transform;

use thiserror::Error;

use crate::model::Instance;
use crate::scalar::{Rational, Time};

pub use classify::{classify_jobs, JobClassification};
pub use decision::{
    approx_schedule, block_decision, block_decision_traced, BlockSolution, DecisionTrace,
};
pub use graph::{
    bfs_block_schedule, configuration_space_bound, edge_feasible, maximal_successors, successors,
    BfsOutcome, Configuration, MachineBudget, Split, DEFAULT_MAX_CONFIGURATIONS,
};
pub use reconstruct::{is_block_assignment, materialize_path, reconstruct_schedule};
pub use rounding::{compute_class_types, round_to_grid, ClassType, ClassTypeTable, GridInstance};
pub use transform::{
    consolidate_tiny_classes, group_tiny_jobs, isolate_special_jobs, Rewrite, RewriteKind,
    TinyPool, TransformStack, WorkInstance,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockError {
    #[error("lambda must be at least 2, got {0}")]
    LambdaTooSmall(u32),
    #[error("job of {units} units exceeds the largest grid index {max_index} (grid {grid} units)")]
    SizeAboveGrid {
        units: i128,
        grid: i128,
        max_index: usize,
    },
    #[error("configuration search exceeded {0} nodes")]
    SearchLimit(usize),
    #[error("reconstructed schedule is infeasible: {0}")]
    Infeasible(String),
    #[error("reconstructed makespan {makespan} exceeds the certified bound {bound}")]
    BoundViolated { makespan: String, bound: String },
    #[error("decision procedure rejected the greedy upper bound {0}")]
    RejectedUpperBound(String),
}

/// Budget quantities for one candidate makespan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetParams {
    /// Candidate makespan.
    pub t: i128,
    pub lambda: u32,
    pub setup: i128,
    /// `p_max` of the input instance.
    pub p_max: i128,
    /// `B = min(T + p_max - 1, 3T/2)`.
    pub opt_bl: Rational,
    /// `B / lambda^2`.
    pub grid: Rational,
    /// `9/lambda + 8/lambda^2`.
    pub eps_eff: Rational,
    /// `(1 + eps_eff) B`.
    pub budget: Rational,
}

impl BudgetParams {
    pub fn new<T: Time>(inst: &Instance<T>, t: T, lambda: u32) -> Self {
        let t = t.wide();
        let p_max = inst.p_max().wide();
        let l = lambda as i128;
        let opt_bl = Rational::from_integer(t + p_max - 1).min(Rational::new(3 * t, 2));
        let grid = opt_bl / Rational::from_integer(l * l);
        let eps_eff = Rational::new(9, l) + Rational::new(8, l * l);
        let budget = (Rational::from_integer(1) + eps_eff) * opt_bl;
        Self {
            t,
            lambda,
            setup: inst.setup().wide(),
            p_max,
            opt_bl,
            grid,
            eps_eff,
            budget,
        }
    }

    /// Units per time unit.
    pub fn scale(&self) -> i128 {
        2 * (self.lambda as i128).pow(2)
    }

    pub fn units(&self, time: i128) -> i128 {
        time * self.scale()
    }

    fn exact_units(&self, r: Rational) -> i128 {
        let u = r * Rational::from_integer(self.scale());
        debug_assert!(u.is_integer());
        u.to_integer()
    }

    pub fn opt_bl_units(&self) -> i128 {
        self.exact_units(self.opt_bl)
    }

    pub fn grid_units(&self) -> i128 {
        self.exact_units(self.grid)
    }

    /// `B / lambda`, the tiny threshold for jobs and classes.
    pub fn tiny_units(&self) -> i128 {
        self.exact_units(self.opt_bl / Rational::from_integer(self.lambda as i128))
    }

    pub fn budget_units(&self) -> i128 {
        self.exact_units(self.budget)
    }

    pub fn setup_units(&self) -> i128 {
        self.units(self.setup)
    }

    /// Number of grid indices, `lambda^2`.
    pub fn slots(&self) -> usize {
        (self.lambda as usize).pow(2)
    }

    /// Makespan guaranteed for any schedule this procedure returns:
    /// `budget + B/lambda + s`.
    pub fn certified_bound(&self) -> Rational {
        self.budget
            + self.opt_bl / Rational::from_integer(self.lambda as i128)
            + Rational::from_integer(self.setup)
    }

    pub fn machine_budget(&self) -> MachineBudget {
        MachineBudget {
            setup: self.setup_units(),
            budget: self.budget_units(),
        }
    }
}
