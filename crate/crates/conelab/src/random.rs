//! Seeded random posets, lattices and valuations.
//!
//! All generators are deterministic functions of their seed: the same seed
//! always yields the same structure, bit for bit, which the reporting
//! contract depends on. The only entropy source is a ChaCha stream cipher
//! seeded from the caller's 64-bit seed.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poset::{ElemSet, FinitePoset, MAX_ELEMENTS};
use crate::rational::ExtRat;
use crate::valuation::Valuation;

/// Bound on the Dedekind-MacNeille completions considered while searching
/// for a random lattice.
const COMPLETION_BOUND: usize = 1 << 12;

/// How many candidate posets to try before giving up on a lattice size.
const LATTICE_ATTEMPTS: usize = 100_000;

/// A random poset on `size` elements named `x0..`, with cover density
/// drawn from the rng.
pub fn random_poset(size: usize, rng: &mut ChaCha8Rng) -> FinitePoset {
    assert!((1..=MAX_ELEMENTS).contains(&size));
    let names: Vec<String> = (0..size).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let density: f64 = rng.random_range(0.05..0.6);
    let mut covers = Vec::new();
    // Only pairs (i, j) with i < j may be related, so the relation is a
    // partial order by construction.
    for j in 1..size {
        for i in 0..j {
            if rng.random_bool(density) {
                covers.push((refs[i], refs[j]));
            }
        }
    }
    FinitePoset::from_covers(&refs, &covers).expect("acyclic by construction")
}

/// One-shot variant of [`random_poset`] keyed directly by a seed.
pub fn random_poset_sized(size: usize, seed: u64) -> FinitePoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_poset(size, &mut rng)
}

/// The Dedekind-MacNeille completion of a finite poset: the smallest
/// complete lattice the poset order-embeds into.
///
/// The cuts of a finite poset are exactly the intersections of principal
/// downsets (with the whole carrier as the empty intersection), so the
/// completion is computed by closing the principal downsets under pairwise
/// intersection. Cuts that are principal keep the name of their generator;
/// the rest are named `c0, c1, ...` in canonical order.
pub fn dedekind_macneille(poset: &FinitePoset, bound: usize) -> Result<FinitePoset> {
    let mut cuts: Vec<ElemSet> = vec![poset.carrier()];
    let mut queue: Vec<ElemSet> = poset.elements().map(|x| poset.principal_downset(x)).collect();
    while let Some(next) = queue.pop() {
        if cuts.contains(&next) {
            continue;
        }
        for i in 0..cuts.len() {
            let meet = cuts[i].intersection(next);
            if meet != next && !cuts.contains(&meet) && !queue.contains(&meet) {
                queue.push(meet);
            }
        }
        cuts.push(next);
        if cuts.len() > bound {
            return Err(Error::Size { bound });
        }
    }
    cuts.sort_by(|a, b| crate::poset::canonical_cmp(*a, *b));
    lattice_from_family(poset, &cuts)
}

/// Builds a poset from a family of downsets ordered by inclusion, naming
/// principal members after their generators.
fn lattice_from_family(poset: &FinitePoset, family: &[ElemSet]) -> Result<FinitePoset> {
    if family.len() > MAX_ELEMENTS {
        return Err(Error::Size { bound: MAX_ELEMENTS });
    }
    let mut names = Vec::with_capacity(family.len());
    let mut fresh = 0usize;
    for &cut in family {
        let principal = poset
            .elements()
            .find(|&x| poset.principal_downset(x) == cut);
        match principal {
            Some(x) => names.push(poset.name(x).to_string()),
            None => {
                names.push(format!("c{fresh}"));
                fresh += 1;
            }
        }
    }
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut covers = Vec::new();
    for (i, &lo) in family.iter().enumerate() {
        for (j, &hi) in family.iter().enumerate() {
            if i == j || !lo.is_subset(hi) {
                continue;
            }
            let strictly_between = family.iter().enumerate().any(|(k, &mid)| {
                k != i && k != j && lo.is_subset(mid) && mid.is_subset(hi)
            });
            if !strictly_between {
                covers.push((refs[i], refs[j]));
            }
        }
    }
    FinitePoset::from_covers(&refs, &covers)
}

/// A random lattice with exactly `size` elements, deterministic per seed.
///
/// Random posets are completed to lattices via Dedekind-MacNeille; a
/// completion larger than the target is trimmed back by growing a
/// meet-closed subset containing the top (any such subset is again a
/// lattice). Candidates are retried until one hits the requested size.
pub fn random_lattice(size: usize, seed: u64) -> Result<FinitePoset> {
    assert!(size >= 1, "a lattice has at least one element");
    if size > MAX_ELEMENTS {
        return Err(Error::Size { bound: MAX_ELEMENTS });
    }
    if size == 1 {
        return FinitePoset::from_covers(&["x0"], &[]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..LATTICE_ATTEMPTS {
        let base = random_poset(rng.random_range(2..=size), &mut rng);
        let Ok(completion) = dedekind_macneille(&base, COMPLETION_BOUND) else {
            continue;
        };
        if completion.len() == size {
            return Ok(completion);
        }
        if completion.len() < size {
            continue;
        }
        if let Some(trimmed) = trim_to_size(&completion, size, &mut rng) {
            return Ok(trimmed);
        }
    }
    Err(Error::Size { bound: size })
}

/// Grows a meet-closed subset of `lattice` containing its top until it has
/// exactly `size` elements, skipping candidates that would overshoot.
fn trim_to_size(lattice: &FinitePoset, size: usize, rng: &mut ChaCha8Rng) -> Option<FinitePoset> {
    let top = lattice.top().expect("completions have a top");
    let mut chosen = ElemSet::singleton(top);
    let mut candidates: Vec<usize> = lattice.elements().filter(|&x| x != top).collect();
    while chosen.len() < size {
        if candidates.is_empty() {
            return None;
        }
        let pick = candidates.swap_remove(rng.random_range(0..candidates.len()));
        if chosen.contains(pick) {
            continue;
        }
        // Close under meets with everything already chosen.
        let mut closure = chosen;
        let mut frontier = vec![pick];
        while let Some(x) = frontier.pop() {
            if closure.contains(x) {
                continue;
            }
            closure.insert(x);
            for y in closure.iter() {
                let m = lattice.meet(x, y).expect("lattice has meets");
                if !closure.contains(m) {
                    frontier.push(m);
                }
            }
            if closure.len() > size {
                break;
            }
        }
        if closure.len() <= size {
            chosen = closure;
        }
    }
    // Extract the induced order on the chosen elements.
    let picked: Vec<usize> = chosen.iter().collect();
    let names: Vec<&str> = picked.iter().map(|&x| lattice.name(x)).collect();
    let mut covers = Vec::new();
    for (i, &x) in picked.iter().enumerate() {
        for (j, &y) in picked.iter().enumerate() {
            if i == j || !lattice.leq(x, y) {
                continue;
            }
            let between = picked.iter().enumerate().any(|(k, &z)| {
                k != i && k != j && lattice.leq(x, z) && lattice.leq(z, y)
            });
            if !between {
                covers.push((names[i], names[j]));
            }
        }
    }
    let sub = FinitePoset::from_covers(&names, &covers).expect("induced order is a poset");
    debug_assert!(sub.is_lattice());
    Some(sub)
}

/// A random valuation with weights drawn from a small rational grid,
/// redrawn until the total mass fits under `mass_bound`.
pub fn random_valuation(
    poset: &Arc<FinitePoset>,
    seed: u64,
    mass_bound: &ExtRat,
) -> Valuation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_valuation_with(poset, &mut rng, mass_bound, false)
}

/// As [`random_valuation`], drawing from a shared rng; `allow_infinite`
/// additionally puts `inf` in the weight pool (ignoring the mass bound for
/// such draws is impossible, so `mass_bound` must then be `inf` too).
pub fn random_valuation_with(
    poset: &Arc<FinitePoset>,
    rng: &mut ChaCha8Rng,
    mass_bound: &ExtRat,
    allow_infinite: bool,
) -> Valuation {
    let grid = weight_grid(allow_infinite);
    loop {
        let weights: Vec<ExtRat> = (0..poset.len())
            .map(|_| grid[rng.random_range(0..grid.len())].clone())
            .collect();
        let v = Valuation::from_weights(poset.clone(), weights);
        if v.total_mass() <= *mass_bound {
            return v;
        }
    }
}

fn weight_grid(allow_infinite: bool) -> Vec<ExtRat> {
    let mut grid = vec![
        ExtRat::zero(),
        ExtRat::zero(),
        ExtRat::ratio(1, 3),
        ExtRat::ratio(1, 2),
        ExtRat::one(),
        ExtRat::from_integer(2),
    ];
    if allow_infinite {
        grid.push(ExtRat::infinity());
    }
    grid
}
