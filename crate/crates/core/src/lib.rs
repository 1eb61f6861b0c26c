//! Makespan scheduling of classed jobs on identical machines with setup
//! times.
//!
//! Jobs belong to classes; a machine pays a setup of length `s` before the
//! first job of every maximal run of one class. The crate provides
//!
//! - [`greedy`]: a linear-time 2-approximation and the `[lo, hi]` bracket,
//! - [`fptas`]: a `(1 + eps)`-approximation for a constant number of machines,
//! - [`blocksched`]: a relaxed decision procedure over block-schedules and
//!   the `(1 + eps) min{3/2 OPT, OPT + p_max - 1}` algorithm on top,
//! - [`exact`]: branch and bound for small instances,
//! - [`online`]: batching for jobs with release times,
//!
//! plus verification, file formats, instance generation and benchmarking.
//!
//! Solvers are generic over the integer [`Time`] type; the aliases below fix
//! it to `u64`.
//!
//! ```
//! use setupsched::{greedy::greedy_schedule, verify_schedule, Instance};
//!
//! let inst = Instance::from_classes(2, 2, vec![vec![3, 3], vec![4]]).unwrap();
//! let g = greedy_schedule(&inst);
//! assert_eq!((g.lo, g.hi), (7, 8));
//! assert!(verify_schedule(&inst, &g.schedule).feasible);
//! ```

pub mod bench;
pub mod blocksched;
pub mod exact;
pub mod format;
pub mod fptas;
pub mod generate;
pub mod greedy;
pub mod model;
pub mod online;
pub mod scalar;
pub mod schedule;
pub mod search;
pub mod solver;

pub use model::{trivial_lower_bound, validate_instance, ClassId, InstanceError, JobId};
pub use scalar::{Rational, Time};
pub use schedule::{verify_schedule, Schedule, Segment, Violation};
pub use solver::{Algorithm, SolveError};

pub type Instance = model::Instance<u64>;
pub type RawInstance = model::RawInstance<u64>;
pub type Job = model::Job<u64>;
pub type InstanceProfile = model::InstanceProfile<u64>;
pub type VerifyReport = schedule::VerifyReport<u64>;
pub type Solution = solver::Solution<u64>;
pub type TimedInstance = online::TimedInstance<u64>;
pub type Timeline = online::Timeline<u64>;
