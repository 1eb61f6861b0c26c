//! Test-side oracles and corpora, independent of the library's solvers.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setupsched::{Instance, JobId};

/// Random instance with `n <= max_n`, `m` drawn from `machines`,
/// `k <= max_k`, `s <= max_s`, `p <= max_p`.
pub fn random_instance(
    seed: u64,
    max_n: usize,
    machines: &[usize],
    max_k: usize,
    max_s: u64,
    max_p: u64,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n);
    let m = machines[rng.gen_range(0..machines.len())];
    let k = rng.gen_range(1..=max_k.min(n));
    let s = rng.gen_range(1..=max_s);
    let mut classes = vec![Vec::new(); k];
    for i in 0..n {
        let c = if i < k { i } else { rng.gen_range(0..k) };
        classes[c].push(rng.gen_range(1..=max_p));
    }
    Instance::from_classes(m, s, classes).unwrap()
}

/// Release times in `0..=horizon`, at least one job released at 0 with
/// probability one half.
pub fn random_releases(seed: u64, n: usize, horizon: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                0
            } else {
                rng.gen_range(0..=horizon)
            }
        })
        .collect()
}

/// Visits every job-to-machine assignment up to machine relabelling
/// (restricted growth strings).
fn for_each_assignment(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    fn rec(i: usize, used: usize, m: usize, a: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == a.len() {
            f(a);
            return;
        }
        for x in 0..(used + 1).min(m) {
            a[i] = x;
            rec(i + 1, used.max(x + 1), m, a, f);
        }
    }
    let mut a = vec![0; n];
    rec(0, 0, m, &mut a, &mut f);
}

/// Optimal makespan by exhaustive enumeration: a machine's span is its work
/// plus `s` per distinct class on it.
pub fn brute_force_opt(inst: &Instance) -> u64 {
    let n = inst.num_jobs();
    let m = inst.num_machines();
    let s = inst.setup();
    let mut best = u64::MAX;
    for_each_assignment(n, m, |a| {
        let mut span = vec![0u64; m];
        let mut classes = vec![Vec::new(); m];
        for (j, &x) in a.iter().enumerate() {
            span[x] += inst.size(JobId(j));
            let c = inst.class_of(JobId(j));
            if !classes[x].contains(&c) {
                classes[x].push(c);
                span[x] += s;
            }
        }
        best = best.min(*span.iter().max().unwrap());
    });
    best
}

fn permutations(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Optimal makespan with release times: every assignment, every order per
/// machine, setups before each class change and scheduled as late as
/// possible. Meant for `n <= 6`.
pub fn brute_force_released_opt(inst: &Instance, releases: &[u64]) -> u64 {
    let n = inst.num_jobs();
    let m = inst.num_machines();
    let s = inst.setup();
    let mut best = u64::MAX;
    for_each_assignment(n, m, |a| {
        let mut makespan = 0;
        for x in 0..m {
            let mut jobs: Vec<usize> = (0..n).filter(|&j| a[j] == x).collect();
            if jobs.is_empty() {
                continue;
            }
            let mut machine_best = u64::MAX;
            permutations(&mut jobs, 0, &mut |order| {
                let mut clock = 0u64;
                let mut last = None;
                for &j in order {
                    let c = inst.class_of(JobId(j));
                    let ready = if last != Some(c) { clock + s } else { clock };
                    clock = ready.max(releases[j]) + inst.size(JobId(j));
                    last = Some(c);
                }
                machine_best = machine_best.min(clock);
            });
            makespan = makespan.max(machine_best);
        }
        best = best.min(makespan);
    });
    best
}
