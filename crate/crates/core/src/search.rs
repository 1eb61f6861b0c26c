//! Binary search over candidate makespans driven by a relaxed decision
//! procedure: given `T`, the procedure either proves `OPT > T` or returns a
//! schedule of makespan at most `alpha * T`.

use thiserror::Error;

use crate::model::Instance;
use crate::scalar::{Rational, Time};
use crate::schedule::Schedule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionOutcome {
    /// No schedule of makespan at most the probed `T` exists.
    No,
    /// A feasible schedule with makespan at most `certified_bound`.
    Yes {
        schedule: Schedule,
        certified_bound: Rational,
    },
}

impl DecisionOutcome {
    pub fn is_no(&self) -> bool {
        matches!(self, DecisionOutcome::No)
    }
}

#[derive(Debug, Error)]
pub enum SearchError<E> {
    #[error("decision procedure answered no at the upper end {0} of the search interval")]
    NoAtUpperBound(String),
    #[error("empty search interval [{lo}, {hi}]")]
    EmptyInterval { lo: String, hi: String },
    #[error(transparent)]
    Decide(E),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub schedule: Schedule,
    /// Smallest probed `T` that was answered with a schedule.
    pub threshold: T,
    pub certified_bound: Rational,
    pub probes: usize,
}

/// Bisects `[lo, hi]`. Requires `lo <= OPT <= hi`. Never assumes `decide` is
/// monotone: it narrows on the last answer and keeps the Yes-schedule with
/// the smallest certified bound. Uses at most `ceil(log2(hi - lo + 1)) + 1`
/// calls.
pub fn binary_search_makespan<T, F, E>(
    inst: &Instance<T>,
    mut decide: F,
    lo: T,
    hi: T,
) -> Result<SearchOutcome<T>, SearchError<E>>
where
    T: Time,
    F: FnMut(&Instance<T>, T) -> Result<DecisionOutcome, E>,
{
    if lo > hi {
        return Err(SearchError::EmptyInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let upper = hi;
    let (mut lo, mut hi) = (lo, hi);
    let mut best: Option<SearchOutcome<T>> = None;
    let mut probes = 0usize;
    let mut hi_probed = false;

    let record = |best: &mut Option<SearchOutcome<T>>,
                  t: T,
                  schedule: Schedule,
                  bound: Rational| {
        let better = match best {
            Some(b) => bound < b.certified_bound || (bound == b.certified_bound && t < b.threshold),
            None => true,
        };
        if better {
            *best = Some(SearchOutcome {
                schedule,
                threshold: t,
                certified_bound: bound,
                probes: 0,
            });
        }
    };

    while lo < hi {
        let mid = lo + (hi - lo) / (T::one() + T::one());
        probes += 1;
        match decide(inst, mid).map_err(SearchError::Decide)? {
            DecisionOutcome::Yes {
                schedule,
                certified_bound,
            } => {
                record(&mut best, mid, schedule, certified_bound);
                hi = mid;
                hi_probed = true;
            }
            DecisionOutcome::No => lo = mid + T::one(),
        }
    }
    if !hi_probed {
        probes += 1;
        match decide(inst, hi).map_err(SearchError::Decide)? {
            DecisionOutcome::Yes {
                schedule,
                certified_bound,
            } => record(&mut best, hi, schedule, certified_bound),
            DecisionOutcome::No => {
                if hi == upper {
                    return Err(SearchError::NoAtUpperBound(upper.to_string()));
                }
            }
        }
    }
    let mut out = best.ok_or_else(|| SearchError::NoAtUpperBound(upper.to_string()))?;
    out.probes = probes;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn yes(t: u64) -> DecisionOutcome {
        DecisionOutcome::Yes {
            schedule: Schedule::empty(1),
            certified_bound: Rational::from_integer(t as i128),
        }
    }

    fn inst() -> Instance<u64> {
        Instance::from_classes(1, 1, vec![vec![1]]).unwrap()
    }

    #[test]
    fn threshold_oracle_is_found_within_log_probes() {
        let mut calls = 0;
        let out = binary_search_makespan(
            &inst(),
            |_, t| {
                calls += 1;
                Ok::<_, Infallible>(if t >= 10 { yes(t) } else { DecisionOutcome::No })
            },
            1,
            16,
        )
        .unwrap();
        assert_eq!(out.threshold, 10);
        assert!(calls <= 5);
        assert_eq!(out.probes, calls);
    }

    #[test]
    fn degenerate_interval_probes_once() {
        let mut calls = 0;
        let out = binary_search_makespan(
            &inst(),
            |_, t| {
                calls += 1;
                Ok::<_, Infallible>(yes(t))
            },
            4,
            4,
        )
        .unwrap();
        assert_eq!((calls, out.threshold), (1, 4));
    }

    #[test]
    fn no_at_upper_bound_is_a_contract_breach() {
        let res = binary_search_makespan(
            &inst(),
            |_, _| Ok::<_, Infallible>(DecisionOutcome::No),
            3,
            9,
        );
        assert!(matches!(res, Err(SearchError::NoAtUpperBound(_))));
    }

    #[test]
    fn non_monotone_oracle_keeps_best_yes() {
        // yes only at 5 and at 9
        let out = binary_search_makespan(
            &inst(),
            |_, t| {
                Ok::<_, Infallible>(if t == 5 || t == 9 {
                    yes(t)
                } else {
                    DecisionOutcome::No
                })
            },
            1,
            9,
        )
        .unwrap();
        assert_eq!(out.threshold, 5);
    }

    #[test]
    fn probe_count_bound_holds_for_all_thresholds() {
        for lo in 1u64..6 {
            for hi in lo..30 {
                for cut in lo..=hi {
                    let mut calls = 0usize;
                    let out = binary_search_makespan(
                        &inst(),
                        |_, t| {
                            calls += 1;
                            Ok::<_, Infallible>(if t >= cut {
                                yes(t)
                            } else {
                                DecisionOutcome::No
                            })
                        },
                        lo,
                        hi,
                    )
                    .unwrap();
                    assert_eq!(out.threshold, cut);
                    let width = (hi - lo + 1) as f64;
                    assert!(
                        calls <= width.log2().ceil() as usize + 1,
                        "lo={lo} hi={hi} cut={cut}"
                    );
                }
            }
        }
    }
}
