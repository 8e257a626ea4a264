//! Random noiseless instances and index-set generators shared by the
//! integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::index;
use rand::Rng;
use seqmusic::problem::{gen_gaussian_sensing, gen_ground_truth, synthesize, SensingMatrix};
use seqmusic::seed::{mix, rng_from_seed};
use seqmusic::DMatrix;

/// Noiseless `B = A X` with `m = 2k - r + l + slack`, so that any `2k - r + l`
/// Gaussian columns are independent.
pub struct Noiseless {
    pub a: SensingMatrix<f64>,
    pub b: DMatrix<f64>,
    pub support: Vec<usize>,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub l: usize,
    pub m: usize,
}

impl Noiseless {
    pub fn outside(&self) -> Vec<usize> {
        (0..self.n).filter(|j| !self.support.contains(j)).collect()
    }
}

/// Small random instance with `n <= 32`, `k <= 6`, `r <= k`.
pub fn small_noiseless(seed: u64) -> Noiseless {
    let mut rng = rng_from_seed(mix(seed, 0xACCE));
    let k = rng.random_range(2..=6);
    let r = rng.random_range(1..=k);
    let l = rng.random_range(1..=r);
    let m = 2 * k - r + l + rng.random_range(0..=2);
    let n = rng.random_range(16..=32);
    let snapshots = r + rng.random_range(0..=3);
    let a = gen_gaussian_sensing(m, n, 0.0, mix(seed, 1)).unwrap();
    let gt = gen_ground_truth::<f64>(n, k, r, snapshots, 1.0, mix(seed, 2)).unwrap();
    let b = synthesize(&a, &gt, f64::INFINITY, 0).unwrap().clean;
    Noiseless {
        a,
        b,
        support: gt.support,
        n,
        k,
        r,
        l,
        m,
    }
}

/// `I` with `a` entries from `inside` and `b` from `outside`, sorted.
pub fn draw_set(
    rng: &mut impl Rng,
    inside: &[usize],
    outside: &[usize],
    a: usize,
    b: usize,
) -> Vec<usize> {
    let mut set: Vec<usize> = index::sample(rng, inside.len(), a)
        .into_iter()
        .map(|i| inside[i])
        .chain(
            index::sample(rng, outside.len(), b)
                .into_iter()
                .map(|i| outside[i]),
        )
        .collect();
    set.sort_unstable();
    set
}

/// Shapes `(|I ∩ supp|, |I \ supp|)` with `|I ∩ supp| >= min_in`,
/// `|I| <= max_len` and `|I \ supp| <= max_out`.
pub fn shapes(
    inst: &Noiseless,
    min_in: usize,
    max_len: usize,
    max_out: usize,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in min_in..=inst.k.min(max_len) {
        for b in 0..=max_out.min(max_len - a).min(inst.n - inst.k) {
            out.push((a, b));
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Every index set of the given shapes when there are at most `cap` of them;
/// otherwise `cap` seeded draws spread evenly over the shapes. The flag
/// reports whether the enumeration was exhaustive.
pub fn index_sets(
    inst: &Noiseless,
    shapes: &[(usize, usize)],
    cap: usize,
    seed: u64,
) -> (Vec<Vec<usize>>, bool) {
    let outside = inst.outside();
    let total: u128 = shapes
        .iter()
        .map(|&(a, b)| binomial(inst.k, a) * binomial(outside.len(), b))
        .sum();
    if total <= cap as u128 {
        let mut sets = Vec::new();
        for &(a, b) in shapes {
            for ins in inst.support.iter().copied().combinations(a) {
                for outs in outside.iter().copied().combinations(b) {
                    let mut set: Vec<usize> = ins.iter().chain(&outs).copied().collect();
                    set.sort_unstable();
                    sets.push(set);
                }
            }
        }
        return (sets, true);
    }
    let mut rng = rng_from_seed(seed);
    let per_shape = cap.div_ceil(shapes.len());
    let mut sets = Vec::new();
    for &(a, b) in shapes {
        let count = (binomial(inst.k, a) * binomial(outside.len(), b)).min(per_shape as u128);
        for _ in 0..count {
            sets.push(draw_set(&mut rng, &inst.support, &outside, a, b));
        }
    }
    (sets, false)
}
