//! Shared corpus builders and independent oracles for the integration
//! suites.
//!
//! The oracles here recompute expected values by definitions only (layer
//! cakes, exhaustive table filters), staying off the code paths they are
//! used to check.

// Each test binary uses its own slice of this module.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use conelab::cone::SemilatticeCone;
use conelab::poset::{ElemSet, FinitePoset, MonotoneMap};
use conelab::rational::ExtRat;
use conelab::valuation::{MonotoneFn, Valuation};

/// Chains, diamonds and powerset lattices: the curated corpus.
pub fn curated_lattices() -> Vec<FinitePoset> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push(FinitePoset::chain(n));
    }
    for atoms in 2..=4 {
        out.push(FinitePoset::diamond(atoms));
    }
    for atoms in 0..=3 {
        out.push(FinitePoset::powerset(atoms));
    }
    out
}

/// One hundred seeded random lattices of sizes 1 through 6.
pub fn seeded_random_lattices() -> Vec<FinitePoset> {
    (0..100u64)
        .map(|i| {
            let size = 1 + (i as usize % 6);
            conelab::random::random_lattice(size, 0x5EED_0000 + i).expect("seeded lattice")
        })
        .collect()
}

/// The whole lattice corpus as cones, filtered by carrier size.
pub fn cone_corpus(max_size: usize) -> Vec<Arc<SemilatticeCone>> {
    curated_lattices()
        .into_iter()
        .chain(seeded_random_lattices())
        .filter(|lat| lat.len() <= max_size)
        .map(|lat| Arc::new(SemilatticeCone::new(Arc::new(lat)).expect("corpus is lattices")))
        .collect()
}

/// Every valuation whose weights come from `grid`.
pub fn grid_valuations(poset: &Arc<FinitePoset>, grid: &[ExtRat]) -> Vec<Valuation> {
    let n = poset.len();
    let mut out = Vec::with_capacity(grid.len().pow(n as u32));
    let mut indices = vec![0usize; n];
    loop {
        let weights: Vec<ExtRat> = indices.iter().map(|&i| grid[i].clone()).collect();
        out.push(Valuation::from_weights(poset.clone(), weights));
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            indices[pos] += 1;
            if indices[pos] < grid.len() {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

/// The acceptance weight grid `{0, 1/2, 1, 2}`.
pub fn acceptance_grid() -> Vec<ExtRat> {
    vec![
        ExtRat::zero(),
        ExtRat::ratio(1, 2),
        ExtRat::one(),
        ExtRat::from_integer(2),
    ]
}

/// Layer-cake oracle for the integral: sums threshold increments times the
/// measures of the superlevel sets, computed here from scratch.
pub fn layer_cake_integral(v: &Valuation, h: &MonotoneFn) -> ExtRat {
    let poset = h.poset();
    let mut thresholds: Vec<ExtRat> = h
        .values()
        .iter()
        .filter(|t| t.is_finite() && t.is_positive())
        .cloned()
        .collect();
    thresholds.sort();
    thresholds.dedup();

    let mut total = ExtRat::zero();
    let mut previous = ExtRat::zero();
    for t in thresholds {
        let level: ElemSet = poset
            .elements()
            .filter(|&x| *h.value(x) >= t)
            .collect();
        let measure = v.evaluate(poset.upset(level).expect("superlevel sets are upsets"));
        let step = t.checked_sub(&previous).expect("thresholds ascend");
        total = &total + &(&step * &measure);
        previous = t;
    }
    let plateau: ElemSet = poset
        .elements()
        .filter(|&x| !h.value(x).is_finite())
        .collect();
    if !plateau.is_empty() {
        let measure = v.evaluate(poset.upset(plateau).expect("the top plateau is an upset"));
        total = &total + &(&ExtRat::infinity() * &measure);
    }
    total
}

/// All `{0, inf}`-valued tables on the cone that are strict, monotone and
/// additive over joins, each encoded as the bitmask of its zero set. This
/// is the exhaustive filter the dual-cone enumeration is checked against.
pub fn brute_force_dual_zero_sets(cone: &SemilatticeCone) -> Vec<u64> {
    let n = cone.len();
    let lattice = cone.lattice();
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let value = |x: usize| -> ExtRat {
            if mask >> x & 1 == 1 {
                ExtRat::zero()
            } else {
                ExtRat::infinity()
            }
        };
        if !value(cone.zero()).is_zero() {
            continue;
        }
        let monotone = (0..n).all(|x| {
            (0..n).all(|y| !lattice.leq(x, y) || value(x) <= value(y))
        });
        if !monotone {
            continue;
        }
        let additive = (0..n).all(|x| {
            (0..n).all(|y| value(cone.add(x, y)) == &value(x) + &value(y))
        });
        if additive {
            out.push(mask);
        }
    }
    out.sort_unstable();
    out
}

/// A random monotone map into a lattice, built by walking a linear
/// extension of the source and choosing each image inside the upper bounds
/// imposed by the images already fixed.
pub fn random_monotone_map(
    source: &Arc<FinitePoset>,
    target: &Arc<SemilatticeCone>,
    rng: &mut ChaCha8Rng,
) -> MonotoneMap {
    let mut order: Vec<usize> = source.elements().collect();
    order.sort_by_key(|&x| source.principal_downset(x).len());
    let mut table = vec![usize::MAX; source.len()];
    for &x in &order {
        let mut admissible = target.lattice().carrier();
        for y in source.elements() {
            if y != x && table[y] != usize::MAX && source.leq(y, x) {
                admissible = admissible.intersection(
                    target.lattice().principal_upset(table[y]).members(),
                );
            }
        }
        let choices: Vec<usize> = admissible.iter().collect();
        table[x] = choices[rng.random_range(0..choices.len())];
    }
    MonotoneMap::new(source.clone(), target.lattice().clone(), table)
        .expect("constructed monotone")
}

/// A random monotone function: a nonnegative combination of characteristic
/// functions of upsets, optionally with an infinite layer. Every monotone
/// function arises this way.
pub fn random_monotone_fn(
    poset: &Arc<FinitePoset>,
    rng: &mut ChaCha8Rng,
    allow_infinite: bool,
) -> MonotoneFn {
    let upsets = poset.enumerate_upsets().expect("small posets");
    let mut h = MonotoneFn::constant(poset.clone(), ExtRat::zero());
    let layers = rng.random_range(0..4);
    for _ in 0..layers {
        let u = upsets[rng.random_range(0..upsets.len())];
        let coefficient = [
            ExtRat::ratio(1, 2),
            ExtRat::one(),
            ExtRat::from_integer(2),
            ExtRat::from_integer(3),
        ][rng.random_range(0..4)]
        .clone();
        let chi = MonotoneFn::characteristic(poset.clone(), u);
        h = MonotoneFn::scale_add(&ExtRat::one(), &h, &coefficient, &chi);
    }
    if allow_infinite && rng.random_bool(0.25) {
        let u = upsets[rng.random_range(0..upsets.len())];
        let chi = MonotoneFn::characteristic(poset.clone(), u);
        h = MonotoneFn::scale_add(&ExtRat::one(), &h, &ExtRat::infinity(), &chi);
    }
    h
}
