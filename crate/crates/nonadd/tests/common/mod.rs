//! Shared oracles and seeded generators for the integration tests.
//!
//! The oracles here are deliberately independent of the library's
//! evaluation paths: partition enumeration is a fresh recursion, sums are
//! folded in the same canonical order the enumeration produces them.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nonadd::func::GroundFunction;
use nonadd::ground::GroundSpace;
use nonadd::setfunc::SetFunction;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dyadic random value in [0, scale) with 12 fractional bits; sums of a
/// few of these are exact in f64.
pub fn dyadic(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    (rng.gen_range(0u32..4096) as f64) / 4096.0 * scale
}

/// All partitions of the set bits of `mask` into nonempty blocks, each
/// partition listing blocks in increasing order of their minimum element.
pub fn partitions_of_mask(mask: u64) -> Vec<Vec<u64>> {
    if mask == 0 {
        return vec![vec![]];
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut out = Vec::new();
    let mut sub = rest;
    loop {
        let block = low | sub;
        for tail in partitions_of_mask(mask & !block) {
            let mut blocks = Vec::with_capacity(tail.len() + 1);
            blocks.push(block);
            blocks.extend(tail);
            out.push(blocks);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// Brute-force variation: maximum over all disjoint families inside `e`
/// (all partitions of all subsets), sums folded right-nested in canonical
/// block order so the arithmetic matches the DP expression shape.
pub fn brute_force_variation(vals: &dyn Fn(u64) -> f64, e: u64) -> f64 {
    let mut best = 0.0f64;
    let mut f = e;
    loop {
        for blocks in partitions_of_mask(f) {
            let mut sum = 0.0;
            for b in blocks.iter().rev() {
                sum = vals(*b) + sum;
            }
            if sum > best {
                best = sum;
            }
        }
        if f == 0 {
            break;
        }
        f = (f - 1) & e;
    }
    best
}

/// Random table set function on `n` points with dyadic values.
pub fn random_table(rng: &mut ChaCha8Rng, n: u32) -> SetFunction {
    let len = 1usize << n;
    let mut vals = Vec::with_capacity(len);
    vals.push(0.0);
    for _ in 1..len {
        vals.push(dyadic(rng, 1.0));
    }
    SetFunction::table(GroundSpace::finite(n).unwrap(), vals).unwrap()
}

/// Random monotone table (a capacity): the running maximum of a random
/// table along the subset order, kept dyadic so comparisons stay exact.
pub fn random_monotone_table(rng: &mut ChaCha8Rng, n: u32) -> SetFunction {
    let len = 1usize << n;
    let mut vals = vec![0.0f64; len];
    for m in 1..len {
        let mut base: f64 = dyadic(rng, 0.25);
        for s in 0..n {
            if m & (1 << s) != 0 {
                base = base.max(vals[m & !(1 << s)]);
            }
        }
        vals[m] = base.max(dyadic(rng, 1.0));
    }
    SetFunction::table(GroundSpace::finite(n).unwrap(), vals).unwrap()
}

/// Random additive set function with dyadic weights.
pub fn random_additive(rng: &mut ChaCha8Rng, n: u32) -> SetFunction {
    let w: Vec<f64> = (0..n).map(|_| dyadic(rng, 1.0)).collect();
    SetFunction::additive(GroundFunction::finite(w).unwrap()).unwrap()
}

/// Random submeasure: additive weights capped at a dyadic ceiling
/// (monotone and subadditive by construction).
pub fn random_subadditive(rng: &mut ChaCha8Rng, n: u32) -> SetFunction {
    let w: Vec<f64> = (0..n).map(|_| dyadic(rng, 1.0)).collect();
    let cap = dyadic(rng, 1.0) + 0.25;
    let len = 1usize << n;
    let mut vals = Vec::with_capacity(len);
    for m in 0..len as u64 {
        let mut s = 0.0;
        for (i, wi) in w.iter().enumerate() {
            if m & (1 << i) != 0 {
                s += wi;
            }
        }
        vals.push(s.min(cap));
    }
    SetFunction::table(GroundSpace::finite(n).unwrap(), vals).unwrap()
}

/// Random function values in [-scale, scale], dyadic.
pub fn random_function(rng: &mut ChaCha8Rng, n: u32, scale: f64) -> GroundFunction {
    let v: Vec<f64> = (0..n).map(|_| dyadic(rng, 2.0 * scale) - scale).collect();
    GroundFunction::finite(v).unwrap()
}

/// Random nonnegative function values in [0, scale], dyadic.
pub fn random_nonneg_function(rng: &mut ChaCha8Rng, n: u32, scale: f64) -> GroundFunction {
    let v: Vec<f64> = (0..n).map(|_| dyadic(rng, scale)).collect();
    GroundFunction::finite(v).unwrap()
}

/// Random strictly positive function values in (0, scale], dyadic.
pub fn random_positive_function(rng: &mut ChaCha8Rng, n: u32, scale: f64) -> GroundFunction {
    let v: Vec<f64> = (0..n).map(|_| dyadic(rng, scale) + scale / 4096.0).collect();
    GroundFunction::finite(v).unwrap()
}
