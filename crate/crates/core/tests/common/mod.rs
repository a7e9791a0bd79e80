//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use brimcalc::invariants::DirectSumModule;
use brimcalc::{Ideal, Ring};
use num_bigint::BigInt;
use proptest::prelude::*;

/// `ℓ(R/I)` by walking every exponent in the bounding box (or every semigroup
/// element below the conductor plus the largest generator).
pub fn brute_colength(i: &Ideal) -> u64 {
    let ring = i.ring();
    if i.is_unit() {
        return 0;
    }
    if let Some(s) = ring.as_semigroup() {
        let top = s.frobenius_bound() + i.generators().iter().map(|g| g[0]).max().unwrap();
        return (0..top)
            .filter(|&v| s.contains(v) && !i.contains_monomial(&[v]))
            .count() as u64;
    }
    let d = ring.dim();
    let mut bounds = vec![0u32; d];
    for g in i.generators() {
        let support: Vec<usize> = (0..d).filter(|&k| g[k] > 0).collect();
        if support.len() == 1 {
            let k = support[0];
            if bounds[k] == 0 || g[k] < bounds[k] {
                bounds[k] = g[k];
            }
        }
    }
    assert!(bounds.iter().all(|&b| b > 0), "not m-primary");
    let mut count = 0;
    let mut e = vec![0u32; d];
    loop {
        if !i.contains_monomial(&e) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == d {
                return count;
            }
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}

/// All `α ∈ N^k` with `|α| = n`, one summand at a time (no grouping of equal ideals).
pub fn naive_compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in naive_compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn product_for(m: &DirectSumModule, alpha: &[u32]) -> Ideal {
    let mut p = Ideal::unit(m.ring());
    for (ideal, &a) in m.summands().iter().zip(alpha) {
        for _ in 0..a {
            p = p.product(ideal).unwrap();
        }
    }
    p
}

/// `Σ_{|α| = n} ℓ(R / Π I_k^{α_k})`, each product built by repeated multiplication.
pub fn naive_bf(m: &DirectSumModule, n: u32) -> BigInt {
    naive_compositions(n, m.rank())
        .iter()
        .map(|a| BigInt::from(brute_colength(&product_for(m, a))))
        .sum()
}

pub fn naive_fiber(m: &DirectSumModule, n: u32) -> BigInt {
    naive_compositions(n, m.rank())
        .iter()
        .map(|a| {
            let p = product_for(m, a);
            BigInt::from(if p.is_unit() { 1 } else { p.min_gens().unwrap() })
        })
        .sum()
}

pub fn xy() -> Arc<Ring> {
    Ring::power_series(&["x", "y"]).unwrap()
}

pub fn ideal(r: &Arc<Ring>, gens: &[&[u32]]) -> Ideal {
    Ideal::new(r, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
}

/// Random m-primary monomial ideal of `k[[x_1..x_d]]` with pure powers at most `max_exp`.
pub fn primary_ideal(d: usize, max_exp: u32) -> impl Strategy<Value = Ideal> {
    let powers = proptest::collection::vec(1..=max_exp, d);
    powers
        .prop_flat_map(move |a| {
            let cells: Vec<_> = a.iter().map(|&ak| 0..ak).collect();
            (Just(a), proptest::collection::vec(cells, 0..4))
        })
        .prop_map(move |(a, extra)| {
            let ring = Ring::standard_power_series(d).unwrap();
            let mut gens: Vec<Vec<u32>> = (0..d)
                .map(|k| {
                    let mut e = vec![0; d];
                    e[k] = a[k];
                    e
                })
                .collect();
            gens.extend(extra.into_iter().filter(|e| e.iter().any(|&x| x > 0)));
            Ideal::new(&ring, gens).unwrap()
        })
}

/// Random monomial ideal (not necessarily m-primary) in two variables.
pub fn any_ideal_2() -> impl Strategy<Value = Ideal> {
    proptest::collection::vec(proptest::collection::vec(0u32..6, 2), 1..5).prop_filter_map(
        "unit ideal",
        |gens| Ideal::new(&xy(), gens).ok(),
    )
}

/// Random ideal of the semigroup ring `k[[t^7, t^15, t^17, t^33]]`.
pub fn semigroup_ideal() -> impl Strategy<Value = Ideal> {
    let ring = Ring::semigroup(&[7, 15, 17, 33]).unwrap();
    let members: Vec<u32> = (1..60).filter(|&v| ring.as_semigroup().unwrap().contains(v)).collect();
    proptest::sample::subsequence(members.clone(), 1..4)
        .prop_map(move |vals| Ideal::from_valuations(&ring, &vals).unwrap())
}
