//! Uniform front end over the offline solvers.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::blocksched::{approx_schedule, BlockError};
use crate::exact::{exact_makespan, SearchLimit};
use crate::fptas::fptas_schedule;
use crate::greedy::greedy_schedule;
use crate::model::{trivial_lower_bound, Instance};
use crate::scalar::{Rational, Time};
use crate::schedule::Schedule;

/// Largest machine count the enumeration scheme accepts.
pub const FPTAS_MAX_MACHINES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Greedy,
    Fptas { eps: Rational },
    Block { lambda: u32 },
    Exact { limit: SearchLimit },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("eps must be positive, got {0}")]
    NonPositiveEps(Rational),
    #[error("the enumeration scheme supports at most {FPTAS_MAX_MACHINES} machines, got {0}")]
    TooManyMachines(usize),
    #[error(transparent)]
    Block(#[from] BlockError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution<T> {
    pub schedule: Schedule,
    pub makespan: T,
    pub lower_bound: T,
    /// Makespan bound the algorithm certifies for this run, if any.
    pub certified_bound: Option<Rational>,
    /// Only `Exact` sets this, and only when its search completed.
    pub proven_optimal: bool,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Fptas { .. } => "fptas",
            Algorithm::Block { .. } => "block",
            Algorithm::Exact { .. } => "exact",
        }
    }

    /// `eps` such that the algorithm is a `(1 + eps)`-approximation of its
    /// reference bound.
    pub fn eps(&self) -> Rational {
        match *self {
            Algorithm::Greedy => Rational::from_integer(1),
            Algorithm::Fptas { eps } => eps,
            Algorithm::Block { lambda } => {
                let l = lambda as i128;
                Rational::new(9, l) + Rational::new(8, l * l)
            }
            Algorithm::Exact { .. } => Rational::from_integer(0),
        }
    }

    pub fn solve<T: Time>(&self, inst: &Instance<T>) -> Result<Solution<T>, SolveError> {
        let lower_bound = trivial_lower_bound(inst);
        match *self {
            Algorithm::Greedy => {
                let g = greedy_schedule(inst);
                let bound = Rational::from_integer(2 * lower_bound.wide() - 1);
                Ok(Solution {
                    schedule: g.schedule,
                    makespan: g.hi,
                    lower_bound,
                    certified_bound: Some(bound),
                    proven_optimal: false,
                })
            }
            Algorithm::Fptas { eps } => {
                if eps <= Rational::from_integer(0) {
                    return Err(SolveError::NonPositiveEps(eps));
                }
                if inst.num_machines() > FPTAS_MAX_MACHINES {
                    return Err(SolveError::TooManyMachines(inst.num_machines()));
                }
                let r = fptas_schedule(inst, eps);
                Ok(Solution {
                    schedule: r.schedule,
                    makespan: r.makespan,
                    lower_bound,
                    certified_bound: None,
                    proven_optimal: false,
                })
            }
            Algorithm::Block { lambda } => {
                let r = approx_schedule(inst, lambda)?;
                Ok(Solution {
                    schedule: r.schedule,
                    makespan: r.makespan,
                    lower_bound,
                    certified_bound: Some(r.certified_bound),
                    proven_optimal: false,
                })
            }
            Algorithm::Exact { limit } => {
                let r = exact_makespan(inst, limit);
                Ok(Solution {
                    schedule: r.schedule,
                    makespan: r.makespan,
                    lower_bound: r.lower_bound.max(lower_bound),
                    certified_bound: Some(r.makespan.to_rational()),
                    proven_optimal: r.proven_optimal,
                })
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Fptas { eps } => write!(f, "fptas(eps={eps})"),
            Algorithm::Block { lambda } => write!(f, "block(lambda={lambda})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Parses a bare algorithm name with default parameters
/// (`eps = 1/4`, `lambda = 10`, default node limit).
impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "fptas" => Ok(Algorithm::Fptas {
                eps: Rational::new(1, 4),
            }),
            "block" => Ok(Algorithm::Block { lambda: 10 }),
            "exact" => Ok(Algorithm::Exact {
                limit: SearchLimit::default(),
            }),
            other => Err(format!(
                "unknown algorithm `{other}` (expected greedy, fptas, block or exact)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::verify_schedule;

    #[test]
    fn every_algorithm_solves_the_fixture() {
        let inst = Instance::from_classes(2, 2u64, vec![vec![3, 3], vec![4]]).unwrap();
        for name in ["greedy", "fptas", "block", "exact"] {
            let alg: Algorithm = name.parse().unwrap();
            let sol = alg.solve(&inst).unwrap();
            assert!(verify_schedule(&inst, &sol.schedule).feasible, "{name}");
            assert!(sol.lower_bound >= 7 && sol.lower_bound <= sol.makespan);
            assert!(sol.makespan >= 8);
        }
        let exact = Algorithm::Exact {
            limit: SearchLimit::default(),
        }
        .solve(&inst)
        .unwrap();
        assert!(exact.proven_optimal);
        assert_eq!((exact.lower_bound, exact.makespan), (8, 8));
    }

    #[test]
    fn rejects_bad_parameters() {
        let inst = Instance::from_classes(2, 2u64, vec![vec![3]]).unwrap();
        assert!(Algorithm::Fptas {
            eps: Rational::from_integer(0)
        }
        .solve(&inst)
        .is_err());
        assert!(Algorithm::Block { lambda: 1 }.solve(&inst).is_err());
        assert!("simplex".parse::<Algorithm>().is_err());
    }

    #[test]
    fn eps_per_algorithm() {
        assert_eq!(
            Algorithm::Block { lambda: 10 }.eps(),
            Rational::new(98, 100)
        );
        assert_eq!(
            Algorithm::Exact {
                limit: SearchLimit::default()
            }
            .eps(),
            Rational::from_integer(0)
        );
    }
}
