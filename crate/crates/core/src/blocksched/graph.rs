//! Configuration graph over class-types.
//!
//! A configuration records, for the first `i` machines of a block-schedule,
//! how many classes of each type are finished and which class (by type) is
//! split across the boundary together with how many of its jobs of each
//! size are done. An edge is one more machine whose load fits the budget.
//!
//! Edge cost, with `V = (n, j, u)` and `W = (n', j', u')`:
//!
//! ```text
//! [j != j' or u != u'] * s + sum_k (u'_k - u_k) * size_k + sum_p (n'_p - n_p) * (s + W_p)
//! ```
//!
//! Besides the budget an edge needs `n' >= n`, and whenever `V`'s split class
//! is not simply continued (`j' != j` or some `u'_k < u_k`) it must be
//! finished on the new machine, i.e. `n'_j >= n_j + 1`.
//!
//! The search prunes by dominance. `A` dominates `B` if both have the same
//! split and `A` finished at least as many classes of every type, or if `A`
//! has no split and finished at least `B`'s classes plus one of the type
//! `B` is splitting. Any path from `B` can then be replayed from `A` with no
//! more edges, so only budget-maximal successors are expanded and dominated
//! discoveries are dropped.

use std::collections::{HashMap, HashSet};

use super::rounding::ClassTypeTable;
use super::BlockError;

/// Per-machine capacity in integer units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MachineBudget {
    pub setup: i128,
    pub budget: i128,
}

/// Upper limit on configurations a single search may discover.
pub const DEFAULT_MAX_CONFIGURATIONS: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    pub ty: usize,
    /// Finished jobs per compact size position of the table.
    pub progress: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub finished: Vec<u32>,
    pub split: Option<Split>,
}

impl Configuration {
    /// Builds a configuration; a split with no finished job is dropped.
    pub fn new(finished: Vec<u32>, split: Option<(usize, Vec<u32>)>) -> Self {
        let split = split
            .filter(|(_, progress)| progress.iter().any(|&u| u > 0))
            .map(|(ty, progress)| Split { ty, progress });
        Self { finished, split }
    }

    pub fn source(table: &ClassTypeTable) -> Self {
        Self {
            finished: vec![0; table.num_types()],
            split: None,
        }
    }

    pub fn target(table: &ClassTypeTable) -> Self {
        Self {
            finished: table.types.iter().map(|t| t.multiplicity).collect(),
            split: None,
        }
    }

    pub fn is_valid(&self, table: &ClassTypeTable) -> bool {
        if self.finished.len() != table.num_types() {
            return false;
        }
        if self
            .finished
            .iter()
            .zip(&table.types)
            .any(|(&n, t)| n > t.multiplicity)
        {
            return false;
        }
        match &self.split {
            None => true,
            Some(Split { ty, progress }) => {
                let Some(t) = table.types.get(*ty) else {
                    return false;
                };
                progress.len() == t.counts.len()
                    && self.finished[*ty] < t.multiplicity
                    && progress.iter().any(|&u| u > 0)
                    && progress.iter().zip(&t.counts).all(|(u, m)| u <= m)
                    && progress.iter().zip(&t.counts).any(|(u, m)| u < m)
            }
        }
    }

    fn split_work(&self, table: &ClassTypeTable) -> i128 {
        self.split
            .as_ref()
            .map_or(0, |s| table.progress_work(&s.progress))
    }
}

/// Whether `w`'s split is `v`'s split continued (same type, no progress lost).
fn continues(v: &Configuration, w: &Configuration) -> bool {
    match (&v.split, &w.split) {
        (Some(a), Some(b)) => {
            a.ty == b.ty && a.progress.iter().zip(&b.progress).all(|(x, y)| x <= y)
        }
        _ => false,
    }
}

fn edge_cost(
    v: &Configuration,
    w: &Configuration,
    table: &ClassTypeTable,
    mb: &MachineBudget,
) -> Option<i128> {
    if v == w || !w.is_valid(table) {
        return None;
    }
    if w.finished.iter().zip(&v.finished).any(|(a, b)| a < b) {
        return None;
    }
    if let Some(sv) = &v.split {
        if !continues(v, w) && w.finished[sv.ty] < v.finished[sv.ty] + 1 {
            return None;
        }
    }
    let indicator = if v.split != w.split { mb.setup } else { 0 };
    let classes: i128 = table
        .types
        .iter()
        .enumerate()
        .map(|(p, t)| (w.finished[p] - v.finished[p]) as i128 * (mb.setup + t.workload))
        .sum();
    Some(indicator + w.split_work(table) - v.split_work(table) + classes)
}

pub fn edge_feasible(
    v: &Configuration,
    w: &Configuration,
    table: &ClassTypeTable,
    mb: &MachineBudget,
) -> bool {
    edge_cost(v, w, table, mb).is_some_and(|c| c <= mb.budget)
}

/// Every `W` with `edge_feasible(v, W)`, in ascending order.
pub fn successors(
    v: &Configuration,
    table: &ClassTypeTable,
    mb: &MachineBudget,
) -> Vec<Configuration> {
    expand(v, table, mb, false)
}

/// Successors that cannot finish another class within the budget, in
/// ascending order.
pub fn maximal_successors(
    v: &Configuration,
    table: &ClassTypeTable,
    mb: &MachineBudget,
) -> Vec<Configuration> {
    expand(v, table, mb, true)
}

fn expand(
    v: &Configuration,
    table: &ClassTypeTable,
    mb: &MachineBudget,
    maximal: bool,
) -> Vec<Configuration> {
    let mut out: HashSet<Configuration> = HashSet::new();
    let v_work = v.split_work(table);

    let consider = |target: Option<Split>, out: &mut HashSet<Configuration>| {
        let candidate = Configuration {
            finished: v.finished.clone(),
            split: target,
        };
        let indicator = if v.split != candidate.split {
            mb.setup
        } else {
            0
        };
        let split_cost = indicator + candidate.split_work(table) - v_work;
        let must_finish = v
            .split
            .as_ref()
            .filter(|_| !continues(v, &candidate))
            .map(|s| s.ty);
        let lower: Vec<u32> = (0..table.num_types())
            .map(|p| u32::from(must_finish == Some(p)))
            .collect();
        let upper: Vec<i64> = table
            .types
            .iter()
            .enumerate()
            .map(|(p, t)| {
                let open = candidate.split.as_ref().is_some_and(|s| s.ty == p);
                t.multiplicity as i64 - i64::from(open) - v.finished[p] as i64
            })
            .collect();
        if lower.iter().zip(&upper).any(|(&l, &u)| l as i64 > u) {
            return;
        }
        let upper: Vec<u32> = upper.into_iter().map(|u| u as u32).collect();
        let unit: Vec<i128> = table.types.iter().map(|t| mb.setup + t.workload).collect();
        let base: i128 = lower.iter().zip(&unit).map(|(&l, &c)| l as i128 * c).sum();
        let remaining = mb.budget - split_cost - base;
        if remaining < 0 {
            return;
        }
        let mut delta = lower.clone();
        extend_finished(
            0, remaining, &mut delta, &upper, &unit, &candidate, v, maximal, out,
        );
    };

    consider(None, &mut out);
    for (p, t) in table.types.iter().enumerate() {
        let own = v.split.as_ref().is_some_and(|s| s.ty == p);
        let floor = if own {
            0
        } else {
            mb.setup
                + v.split
                    .as_ref()
                    .map_or(0, |s| mb.setup + table.types[s.ty].workload)
        };
        let mut progress = vec![0u32; t.counts.len()];
        enumerate_progress(
            0,
            0,
            floor - v_work,
            &mut progress,
            t,
            table,
            mb,
            &mut |u| {
                consider(
                    Some(Split {
                        ty: p,
                        progress: u.to_vec(),
                    }),
                    &mut out,
                )
            },
        );
    }
    let mut out: Vec<Configuration> = out.into_iter().collect();
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn extend_finished(
    p: usize,
    remaining: i128,
    delta: &mut Vec<u32>,
    upper: &[u32],
    unit: &[i128],
    candidate: &Configuration,
    v: &Configuration,
    maximal: bool,
    out: &mut HashSet<Configuration>,
) {
    if p == delta.len() {
        if maximal && (0..delta.len()).any(|q| delta[q] < upper[q] && unit[q] <= remaining) {
            return;
        }
        let finished: Vec<u32> = v
            .finished
            .iter()
            .zip(delta.iter())
            .map(|(n, d)| n + d)
            .collect();
        let w = Configuration {
            finished,
            split: candidate.split.clone(),
        };
        if &w != v {
            out.insert(w);
        }
        return;
    }
    let start = delta[p];
    let mut rem = remaining;
    loop {
        extend_finished(p + 1, rem, delta, upper, unit, candidate, v, maximal, out);
        if delta[p] >= upper[p] || rem < unit[p] {
            break;
        }
        delta[p] += 1;
        rem -= unit[p];
    }
    delta[p] = start;
}

/// Progress vectors of a partially finished class of type `t`: nonzero, not
/// complete, and cheap enough that `offset + work` stays within budget.
#[allow(clippy::too_many_arguments)]
fn enumerate_progress(
    i: usize,
    work: i128,
    offset: i128,
    progress: &mut Vec<u32>,
    t: &super::rounding::ClassType,
    table: &ClassTypeTable,
    mb: &MachineBudget,
    emit: &mut dyn FnMut(&[u32]),
) {
    if offset + work > mb.budget {
        return;
    }
    if i == progress.len() {
        let nonzero = progress.iter().any(|&u| u > 0);
        let partial = progress.iter().zip(&t.counts).any(|(u, m)| u < m);
        if nonzero && partial {
            emit(progress);
        }
        return;
    }
    let size = table.size_at(i);
    for u in 0..=t.counts[i] {
        let w = work + u as i128 * size;
        if offset + w > mb.budget {
            break;
        }
        progress[i] = u;
        enumerate_progress(i + 1, w, offset, progress, t, table, mb, emit);
    }
    progress[i] = 0;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsOutcome {
    /// Source-to-target path with at most `m` edges, if one exists.
    pub path: Option<Vec<Configuration>>,
    /// Configurations discovered during the search.
    pub visited: usize,
}

/// Breadth-first search from "nothing finished" to "everything finished"
/// using at most `m` edges.
pub fn bfs_block_schedule(
    table: &ClassTypeTable,
    mb: &MachineBudget,
    m: usize,
    max_nodes: usize,
) -> Result<BfsOutcome, BlockError> {
    let source = Configuration::source(table);
    let target = Configuration::target(table);
    if source == target {
        return Ok(BfsOutcome {
            path: Some(vec![source]),
            visited: 1,
        });
    }
    let mut nodes: Vec<(Configuration, usize)> = vec![(source.clone(), usize::MAX)];
    let mut seen = Discovered::default();
    seen.insert(&source);
    let mut frontier = vec![0usize];
    for depth in 0..m {
        let mut next = Vec::new();
        for &idx in &frontier {
            let here = nodes[idx].0.clone();
            // the target is checked directly; on the last layer nothing else matters
            let last = depth + 1 == m;
            let found = if edge_feasible(&here, &target, table, mb) {
                vec![target.clone()]
            } else if last {
                Vec::new()
            } else {
                maximal_successors(&here, table, mb)
            };
            for w in found {
                if seen.dominates(&w) {
                    continue;
                }
                let id = nodes.len();
                seen.insert(&w);
                let done = w == target;
                nodes.push((w, idx));
                if done {
                    let mut path = Vec::new();
                    let mut cur = id;
                    while cur != usize::MAX {
                        path.push(nodes[cur].0.clone());
                        cur = nodes[cur].1;
                    }
                    path.reverse();
                    return Ok(BfsOutcome {
                        path: Some(path),
                        visited: nodes.len(),
                    });
                }
                if nodes.len() > max_nodes {
                    return Err(BlockError::SearchLimit(max_nodes));
                }
                next.push(id);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(BfsOutcome {
        path: None,
        visited: nodes.len(),
    })
}

/// Finished vectors discovered so far, grouped by split.
#[derive(Default)]
struct Discovered {
    by_split: HashMap<Option<Split>, Vec<Vec<u32>>>,
}

impl Discovered {
    fn insert(&mut self, c: &Configuration) {
        self.by_split
            .entry(c.split.clone())
            .or_default()
            .push(c.finished.clone());
    }

    fn dominates(&self, c: &Configuration) -> bool {
        let covers = |split: &Option<Split>, bump: Option<usize>| {
            self.by_split.get(split).is_some_and(|group| {
                group.iter().any(|n| {
                    n.iter()
                        .zip(&c.finished)
                        .enumerate()
                        .all(|(p, (&a, &b))| a >= b + u32::from(bump == Some(p)))
                })
            })
        };
        covers(&c.split, None) || c.split.as_ref().is_some_and(|s| covers(&None, Some(s.ty)))
    }
}

/// Instance-level bound on the number of configurations:
/// `prod_p (N_p + 1) * (P + 1) * prod_k (max_p m_pk N_p + 1)`.
pub fn configuration_space_bound(table: &ClassTypeTable) -> f64 {
    let finished: f64 = table
        .types
        .iter()
        .map(|t| t.multiplicity as f64 + 1.0)
        .product();
    let progress: f64 = (0..table.sizes.len())
        .map(|k| {
            let most = table
                .types
                .iter()
                .map(|t| t.counts[k] as f64 * t.multiplicity as f64)
                .fold(0.0, f64::max);
            most + 1.0
        })
        .product();
    finished * (table.num_types() as f64 + 1.0) * progress
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_type() -> ClassTypeTable {
        ClassTypeTable::from_tuples(2, 4, &[vec![2, 0, 0, 0], vec![2, 0, 0, 0]])
    }

    fn mb(budget: i128) -> MachineBudget {
        MachineBudget { setup: 1, budget }
    }

    #[test]
    fn edge_examples() {
        let t = one_type();
        let src = Configuration::source(&t);
        let all = Configuration::new(vec![2], None);
        let half = Configuration::new(vec![1], Some((0, vec![1])));
        assert_eq!(edge_cost(&src, &all, &t, &mb(12)), Some(10));
        assert!(edge_feasible(&src, &all, &t, &mb(12)));
        assert_eq!(edge_cost(&src, &half, &t, &mb(12)), Some(8));
        assert!(edge_feasible(&src, &half, &t, &mb(12)));
        assert!(!edge_feasible(&src, &all, &t, &mb(7)));
    }

    #[test]
    fn edges_never_undo_progress() {
        let t = one_type();
        let a = Configuration::new(vec![1], None);
        let b = Configuration::new(vec![0], Some((0, vec![1])));
        assert!(!edge_feasible(&a, &b, &t, &mb(100)));
        assert!(!edge_feasible(&a, &a, &t, &mb(100)));
    }

    #[test]
    fn split_class_must_be_finished_when_abandoned() {
        let t = ClassTypeTable::from_tuples(2, 4, &[vec![2, 0, 0, 0], vec![0, 1, 0, 0]]);
        // types are ordered by tuple: type 0 = (0,1,0,0), type 1 = (2,0,0,0)
        let v = Configuration::new(vec![0, 0], Some((1, vec![1, 0])));
        let keep_open = Configuration::new(vec![1, 0], None);
        let closed = Configuration::new(vec![1, 1], None);
        assert!(!edge_feasible(&v, &keep_open, &t, &mb(100)));
        assert!(edge_feasible(&v, &closed, &t, &mb(100)));
    }

    #[test]
    fn successors_contain_the_examples() {
        let t = one_type();
        let src = Configuration::source(&t);
        let succ = successors(&src, &t, &mb(12));
        assert!(succ.contains(&Configuration::new(vec![2], None)));
        assert!(succ.contains(&Configuration::new(vec![1], Some((0, vec![1])))));
        for w in &succ {
            assert!(edge_feasible(&src, w, &t, &mb(12)));
        }
    }

    #[test]
    fn terminal_and_starved_nodes_have_no_successors() {
        let t = one_type();
        assert!(successors(&Configuration::target(&t), &t, &mb(100)).is_empty());
        // smallest progress already costs s + 2 = 3
        assert!(successors(&Configuration::source(&t), &t, &mb(2)).is_empty());
    }

    #[test]
    fn bfs_examples() {
        let t = one_type();
        let one = bfs_block_schedule(&t, &mb(12), 1, DEFAULT_MAX_CONFIGURATIONS).unwrap();
        assert_eq!(one.path.as_ref().map(Vec::len), Some(2));
        let none = bfs_block_schedule(&t, &mb(7), 1, DEFAULT_MAX_CONFIGURATIONS).unwrap();
        assert!(none.path.is_none());
        let two = bfs_block_schedule(&t, &mb(7), 2, DEFAULT_MAX_CONFIGURATIONS).unwrap();
        let path = two.path.unwrap();
        assert_eq!(path.len(), 3);
        assert_eq!(path[1], Configuration::new(vec![1], None));
    }

    #[test]
    fn normalizes_empty_split() {
        assert_eq!(Configuration::new(vec![0], Some((0, vec![0]))).split, None);
    }

    /// Shortest source-to-target distance using every successor.
    fn unpruned_distance(table: &ClassTypeTable, mb: &MachineBudget) -> Option<usize> {
        let target = Configuration::target(table);
        let mut seen = HashSet::from([Configuration::source(table)]);
        let mut layer = vec![Configuration::source(table)];
        for d in 1.. {
            let mut next = Vec::new();
            for v in &layer {
                for w in successors(v, table, mb) {
                    if w == target {
                        return Some(d);
                    }
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                return None;
            }
            layer = next;
        }
        unreachable!()
    }

    #[test]
    fn pruned_search_finds_the_same_distance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let slots = 4;
            let classes = rng.gen_range(1..=5);
            let tuples: Vec<Vec<u32>> = (0..classes)
                .map(|_| loop {
                    let t: Vec<u32> = (0..slots).map(|_| rng.gen_range(0..=2)).collect();
                    if t.iter().any(|&c| c > 0) {
                        break t;
                    }
                })
                .collect();
            let table = ClassTypeTable::from_tuples(2, slots, &tuples);
            let mb = MachineBudget {
                setup: rng.gen_range(1..=4),
                budget: rng.gen_range(6..=30),
            };
            let want = unpruned_distance(&table, &mb);
            let got = bfs_block_schedule(&table, &mb, 64, DEFAULT_MAX_CONFIGURATIONS)
                .unwrap()
                .path;
            assert_eq!(got.as_ref().map(|p| p.len() - 1), want, "{table:?} {mb:?}");
            if let Some(path) = got {
                assert!(path
                    .windows(2)
                    .all(|e| edge_feasible(&e[0], &e[1], &table, &mb)));
            }
        }
    }
}
