//! Grid rounding and class-types.

use std::collections::BTreeMap;

use super::transform::{Rewrite, RewriteKind, WorkInstance};
use super::BlockError;

/// Instance whose sizes are multiples of the grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridInstance {
    /// Same jobs and classes as the input, sizes rounded up.
    pub work: WorkInstance,
    /// Grid index `k` of each job (`size = k * grid`), `1 <= k <= slots`.
    pub index: Vec<usize>,
    pub grid: i128,
    pub slots: usize,
}

/// Rounds every size up to the next multiple of `grid`. Fails if a job would
/// need an index above `slots`.
pub fn round_to_grid(
    work: &WorkInstance,
    grid: i128,
    slots: usize,
) -> Result<(GridInstance, Rewrite), BlockError> {
    assert!(grid > 0);
    let mut index = Vec::with_capacity(work.num_jobs());
    for &size in &work.sizes {
        let k = ((size + grid - 1) / grid).max(1) as usize;
        if k > slots {
            return Err(BlockError::SizeAboveGrid {
                units: size,
                grid,
                max_index: slots,
            });
        }
        index.push(k);
    }
    let rounded = WorkInstance {
        sizes: index.iter().map(|&k| k as i128 * grid).collect(),
        class_of: work.class_of.clone(),
        classes: work.classes.clone(),
        setup: work.setup,
    };
    let rewrite = Rewrite {
        kind: RewriteKind::Round,
        job_parts: (0..work.num_jobs()).map(|j| vec![j]).collect(),
        class_origin: (0..work.num_classes()).map(Some).collect(),
        tiny_pool: None,
    };
    Ok((
        GridInstance {
            work: rounded,
            index,
            grid,
            slots,
        },
        rewrite,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassType {
    /// Job count per size in [`ClassTypeTable::sizes`].
    pub counts: Vec<u32>,
    /// Number of classes of this type, `N_p`.
    pub multiplicity: u32,
    /// Setup-free workload of one class of this type.
    pub workload: i128,
    /// Classes of this type, ascending.
    pub classes: Vec<usize>,
}

/// Class-types present in an instance. Count vectors are stored only over
/// the grid indices that occur somewhere in the instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTypeTable {
    pub types: Vec<ClassType>,
    /// Occurring grid indices, ascending.
    pub sizes: Vec<usize>,
    pub grid: i128,
    pub slots: usize,
}

impl ClassTypeTable {
    /// Builds a table from one full `slots`-long count tuple per class
    /// (entry `k - 1` counts jobs of size `k * grid`). Classes with identical
    /// tuples share a type; types are ordered by tuple.
    pub fn from_tuples(grid: i128, slots: usize, tuples: &[Vec<u32>]) -> Self {
        let mut used = vec![false; slots];
        for t in tuples {
            assert_eq!(t.len(), slots);
            for (k, &c) in t.iter().enumerate() {
                if c > 0 {
                    used[k] = true;
                }
            }
        }
        let sizes: Vec<usize> = (0..slots).filter(|&k| used[k]).map(|k| k + 1).collect();
        let mut grouped: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for (c, t) in tuples.iter().enumerate() {
            let compact: Vec<u32> = sizes.iter().map(|&k| t[k - 1]).collect();
            grouped.entry(compact).or_default().push(c);
        }
        let types = grouped
            .into_iter()
            .map(|(counts, classes)| {
                let workload = counts
                    .iter()
                    .zip(&sizes)
                    .map(|(&c, &k)| c as i128 * k as i128 * grid)
                    .sum();
                ClassType {
                    counts,
                    multiplicity: classes.len() as u32,
                    workload,
                    classes,
                }
            })
            .collect();
        Self {
            types,
            sizes,
            grid,
            slots,
        }
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    /// Size of a job at compact position `i`.
    pub fn size_at(&self, i: usize) -> i128 {
        self.sizes[i] as i128 * self.grid
    }

    /// Total size of a progress vector over compact positions.
    pub fn progress_work(&self, progress: &[u32]) -> i128 {
        progress
            .iter()
            .enumerate()
            .map(|(i, &u)| u as i128 * self.size_at(i))
            .sum()
    }

    /// Full `slots`-long tuple of type `p`.
    pub fn full_tuple(&self, p: usize) -> Vec<u32> {
        let mut t = vec![0; self.slots];
        for (i, &k) in self.sizes.iter().enumerate() {
            t[k - 1] = self.types[p].counts[i];
        }
        t
    }

    pub fn total_classes(&self) -> u32 {
        self.types.iter().map(|t| t.multiplicity).sum()
    }
}

pub fn compute_class_types(r: &GridInstance) -> ClassTypeTable {
    let tuples: Vec<Vec<u32>> = r
        .work
        .classes
        .iter()
        .map(|members| {
            let mut t = vec![0u32; r.slots];
            for &j in members {
                t[r.index[j] - 1] += 1;
            }
            t
        })
        .collect();
    ClassTypeTable::from_tuples(r.grid, r.slots, &tuples)
}
