//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::RawInstance;

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub s: u64,
    pub p_min: u64,
    pub p_max: u64,
    /// Probability that a job gets a positive release time.
    pub release_density: Option<f64>,
    /// Largest release time; defaults to `ceil((k s + n p_max) / m)`.
    pub horizon: Option<u64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("n, m, k and s must be positive")]
    NonPositive,
    #[error("k = {k} classes cannot be filled by n = {n} jobs")]
    TooManyClasses { n: usize, k: usize },
    #[error("size range [{0}, {1}] must satisfy 1 <= min <= max")]
    SizeRange(u64, u64),
    #[error("release density {0} is not in [0, 1]")]
    Density(f64),
}

/// Sizes are uniform in `[p_min, p_max]`. Job `i < k` opens class `i`, the
/// others pick a class uniformly, so no class is empty. Jobs are listed per
/// class in generation order. With a release density `d`, each job is
/// released at a uniform time in `1..=horizon` with probability `d` and at
/// 0 otherwise.
pub fn generate_instance(seed: u64, params: &GenParams) -> Result<RawInstance<u64>, GenError> {
    let GenParams {
        n,
        m,
        k,
        s,
        p_min,
        p_max,
        release_density,
        horizon,
    } = params.clone();
    if n == 0 || m == 0 || k == 0 || s == 0 {
        return Err(GenError::NonPositive);
    }
    if k > n {
        return Err(GenError::TooManyClasses { n, k });
    }
    if p_min == 0 || p_min > p_max {
        return Err(GenError::SizeRange(p_min, p_max));
    }
    if let Some(d) = release_density {
        if !(0.0..=1.0).contains(&d) {
            return Err(GenError::Density(d));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes: Vec<Vec<u64>> = vec![Vec::new(); k];
    let mut owner = Vec::with_capacity(n);
    for i in 0..n {
        let c = if i < k { i } else { rng.gen_range(0..k) };
        classes[c].push(rng.gen_range(p_min..=p_max));
        owner.push((c, classes[c].len() - 1));
    }
    let releases = release_density.map(|d| {
        let horizon = horizon
            .unwrap_or_else(|| (k as u64 * s + n as u64 * p_max).div_ceil(m as u64))
            .max(1);
        // flattened index of generation-order job i
        let offsets: Vec<usize> = classes
            .iter()
            .scan(0, |acc, c| {
                let start = *acc;
                *acc += c.len();
                Some(start)
            })
            .collect();
        owner
            .iter()
            .map(|&(c, pos)| {
                let r = if rng.gen_bool(d) {
                    rng.gen_range(1..=horizon)
                } else {
                    0
                };
                (offsets[c] + pos, r)
            })
            .collect()
    });
    Ok(RawInstance {
        m,
        s,
        classes,
        releases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;

    fn params() -> GenParams {
        GenParams {
            n: 3,
            m: 2,
            k: 2,
            s: 2,
            p_min: 3,
            p_max: 4,
            release_density: None,
            horizon: None,
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_instance(1, &params()).unwrap();
        let b = generate_instance(1, &params()).unwrap();
        assert_eq!(a, b);
        let inst = validate_instance(&a).unwrap();
        assert_eq!(inst.num_jobs(), 3);
        assert_eq!(inst.num_classes(), 2);
        assert!(inst.jobs().iter().all(|j| (3..=4).contains(&j.size)));
    }

    #[test]
    fn rejects_more_classes_than_jobs() {
        let p = GenParams { k: 4, ..params() };
        assert_eq!(
            generate_instance(1, &p),
            Err(GenError::TooManyClasses { n: 3, k: 4 })
        );
    }

    #[test]
    fn density_emits_releases_for_every_job() {
        let p = GenParams {
            n: 20,
            release_density: Some(0.5),
            ..params()
        };
        let raw = generate_instance(7, &p).unwrap();
        let releases = raw.releases.unwrap();
        assert_eq!(releases.len(), 20);
        assert!(releases.values().any(|&r| r > 0));
        assert!(releases.values().any(|&r| r == 0));
    }
}
