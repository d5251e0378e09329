//! Finite posets viewed as finite `T0` topological spaces.
//!
//! On a finite carrier the open sets of any `T0` topology are exactly the
//! upward-closed sets of its specialization order (the Alexandrov topology),
//! so a [`FinitePoset`] *is* a finite `T0` space and an [`UpSet`] *is* an
//! open set. Everything downstream (valuations, cones, powercones) works on
//! this picture.
//!
//! Elements are dense indices `0..len` with a name table; sets of elements
//! are bitmasks ([`ElemSet`]), which keeps enumeration fast and all reports
//! deterministic. The carrier size is capped at 64.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the number of upsets an enumeration may produce.
pub const DEFAULT_UPSET_BOUND: usize = 1 << 20;

/// Maximum number of elements in a carrier (sets are 64-bit masks).
pub const MAX_ELEMENTS: usize = 64;

/// A set of element indices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn full(len: usize) -> ElemSet {
        debug_assert!(len <= MAX_ELEMENTS);
        if len == MAX_ELEMENTS {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << len) - 1)
        }
    }

    pub fn singleton(x: usize) -> ElemSet {
        ElemSet(1u64 << x)
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 & (1u64 << x) != 0
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(x)
            }
        })
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

/// Canonical comparison of element sets: smaller cardinality first, then the
/// set containing the smallest distinguishing element first. This is the
/// order every enumeration in the crate reports in.
pub fn canonical_cmp(a: ElemSet, b: ElemSet) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        // Equal cardinality: compare as ascending index lists; having the
        // smallest element on which they differ sorts first.
        .then_with(|| {
            let diff = a.0 ^ b.0;
            if diff == 0 {
                std::cmp::Ordering::Equal
            } else {
                let low = diff.trailing_zeros();
                if a.0 >> low & 1 == 1 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            }
        })
}

/// A finite poset, i.e. a finite `T0` topological space presented by its
/// specialization order. `x <= y` means every open set containing `x`
/// contains `y`.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    /// `up[x]` is the principal upset of `x` (including `x`).
    up: Vec<ElemSet>,
    /// `down[x]` is the principal downset of `x`.
    down: Vec<ElemSet>,
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinitePoset({})", self.names.join(", "))
    }
}

impl FinitePoset {
    /// Builds the poset whose order is the reflexive-transitive closure of
    /// the given cover pairs `(lower, upper)`.
    pub fn from_covers(names: &[&str], covers: &[(&str, &str)]) -> Result<Self> {
        if names.len() > MAX_ELEMENTS {
            return Err(Error::Size { bound: MAX_ELEMENTS });
        }
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        for (i, n) in owned.iter().enumerate() {
            if owned[..i].contains(n) {
                return Err(Error::DuplicateName { name: n.clone() });
            }
        }
        let index = |name: &str| -> Result<usize> {
            owned
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownName { name: name.into() })
        };

        let n = owned.len();
        let mut up: Vec<ElemSet> = (0..n).map(ElemSet::singleton).collect();
        for (lo, hi) in covers {
            let (lo, hi) = (index(lo)?, index(hi)?);
            up[lo].insert(hi);
        }
        // Warshall closure on the `up` rows.
        for mid in 0..n {
            for x in 0..n {
                if up[x].contains(mid) {
                    up[x] = up[x].union(up[mid]);
                }
            }
        }
        // Antisymmetry: mutual reachability of distinct elements is a cycle.
        for x in 0..n {
            for y in x + 1..n {
                if up[x].contains(y) && up[y].contains(x) {
                    return Err(Error::Cycle {
                        name: owned[x].clone(),
                    });
                }
            }
        }
        Ok(Self::from_up_rows(owned, up))
    }

    fn from_up_rows(names: Vec<String>, up: Vec<ElemSet>) -> Self {
        let n = names.len();
        let down = (0..n)
            .map(|x| (0..n).filter(|&y| up[y].contains(x)).collect())
            .collect();
        FinitePoset { names, up, down }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.len()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownName { name: name.into() })
    }

    /// The whole carrier as a set.
    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// The way-below relation. Every finite poset is a continuous dcpo in
    /// which way-below coincides with the order (any directed set contains
    /// its supremum), so this is just [`FinitePoset::leq`].
    pub fn way_below(&self, x: usize, y: usize) -> bool {
        self.leq(x, y)
    }

    /// `{y | x <= y for some x in set}`.
    pub fn up_closure(&self, set: ElemSet) -> UpSet {
        let members = set.iter().fold(ElemSet::EMPTY, |acc, x| acc.union(self.up[x]));
        UpSet { members }
    }

    pub fn principal_upset(&self, x: usize) -> UpSet {
        UpSet {
            members: self.up[x],
        }
    }

    /// `{y | y <= x for some x in set}`.
    pub fn down_closure(&self, set: ElemSet) -> ElemSet {
        set.iter()
            .fold(ElemSet::EMPTY, |acc, x| acc.union(self.down[x]))
    }

    pub fn principal_downset(&self, x: usize) -> ElemSet {
        self.down[x]
    }

    pub fn is_upward_closed(&self, set: ElemSet) -> bool {
        set.iter().all(|x| self.up[x].is_subset(set))
    }

    /// Validates that `set` is upward closed.
    pub fn upset(&self, set: ElemSet) -> Result<UpSet> {
        for x in set.iter() {
            let missing = self.up[x].difference(set);
            if let Some(above) = missing.iter().next() {
                return Err(Error::NotUpset {
                    set: self.set_to_string(set),
                    member: self.names[x].clone(),
                    above: self.names[above].clone(),
                });
            }
        }
        Ok(UpSet { members: set })
    }

    /// Minimal elements of `set`: members with no strictly smaller member.
    pub fn minimal_elements(&self, set: ElemSet) -> ElemSet {
        set.iter()
            .filter(|&x| self.down[x].intersection(set) == ElemSet::singleton(x))
            .collect()
    }

    /// Maximal elements of `set`.
    pub fn maximal_elements(&self, set: ElemSet) -> ElemSet {
        set.iter()
            .filter(|&x| self.up[x].intersection(set) == ElemSet::singleton(x))
            .collect()
    }

    /// All upward-closed subsets in canonical order (cardinality, then
    /// smallest distinguishing element), with the default bound.
    pub fn enumerate_upsets(&self) -> Result<Vec<UpSet>> {
        self.enumerate_upsets_bounded(DEFAULT_UPSET_BOUND)
    }

    /// As [`FinitePoset::enumerate_upsets`], erroring as soon as the count
    /// would exceed `bound`.
    pub fn enumerate_upsets_bounded(&self, bound: usize) -> Result<Vec<UpSet>> {
        // Decide membership from maximal elements downwards; an element may
        // join only if everything strictly above it is already in.
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| self.up[x].len());

        let mut sets: Vec<ElemSet> = vec![ElemSet::EMPTY];
        for &x in &order {
            let strict_up = self.up[x].difference(ElemSet::singleton(x));
            let additions: Vec<ElemSet> = sets
                .iter()
                .filter(|s| strict_up.is_subset(**s))
                .map(|s| s.union(ElemSet::singleton(x)))
                .collect();
            if sets.len() + additions.len() > bound {
                return Err(Error::Size { bound });
            }
            sets.extend(additions);
        }
        sets.sort_by(|a, b| canonical_cmp(*a, *b));
        Ok(sets.into_iter().map(|members| UpSet { members }).collect())
    }

    /// Least element, if any.
    pub fn bottom(&self) -> Option<usize> {
        self.elements().find(|&x| self.up[x] == self.carrier())
    }

    /// Greatest element, if any.
    pub fn top(&self) -> Option<usize> {
        self.elements().find(|&x| self.down[x] == self.carrier())
    }

    /// Least upper bound of `x` and `y`.
    pub fn join(&self, x: usize, y: usize) -> Result<usize> {
        let ub = self.up[x].intersection(self.up[y]);
        ub.iter()
            .find(|&z| ub.is_subset(self.up[z]))
            .ok_or_else(|| Error::NoJoin {
                x: self.names[x].clone(),
                y: self.names[y].clone(),
            })
    }

    /// Greatest lower bound of `x` and `y`.
    pub fn meet(&self, x: usize, y: usize) -> Result<usize> {
        let lb = self.down[x].intersection(self.down[y]);
        lb.iter()
            .find(|&z| lb.is_subset(self.down[z]))
            .ok_or_else(|| Error::NoJoin {
                x: self.names[x].clone(),
                y: self.names[y].clone(),
            })
    }

    /// True when every pair has a join and a meet and a least element
    /// exists. (On a finite carrier this makes the poset a complete
    /// lattice.)
    pub fn is_lattice(&self) -> bool {
        self.lattice_violation().is_none()
    }

    /// The reason this poset fails to be a lattice, if it does.
    pub(crate) fn lattice_violation(&self) -> Option<String> {
        if self.is_empty() {
            return Some("the carrier is empty".into());
        }
        if self.bottom().is_none() {
            return Some("there is no least element".into());
        }
        for x in self.elements() {
            for y in self.elements().skip(x + 1) {
                if self.join(x, y).is_err() {
                    return Some(format!(
                        "`{}` and `{}` have no join",
                        self.names[x], self.names[y]
                    ));
                }
                if self.meet(x, y).is_err() {
                    return Some(format!(
                        "`{}` and `{}` have no meet",
                        self.names[x], self.names[y]
                    ));
                }
            }
        }
        None
    }

    /// Cover pairs `(lower, upper)` of the order, canonically sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.up[x].iter() {
                if y == x {
                    continue;
                }
                let between = self.up[x]
                    .intersection(self.down[y])
                    .difference(ElemSet::singleton(x))
                    .difference(ElemSet::singleton(y));
                if between.is_empty() {
                    out.push((x, y));
                }
            }
        }
        out.sort();
        out
    }

    /// Renders a set of elements as `{a,b}` using this poset's names.
    pub fn set_to_string(&self, set: ElemSet) -> String {
        let names: Vec<&str> = set.iter().map(|x| self.name(x)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// An upward-closed set of elements, i.e. an open of the finite space.
///
/// Values of this type are only produced by operations that guarantee upward
/// closure ([`FinitePoset::upset`], [`FinitePoset::up_closure`],
/// [`FinitePoset::enumerate_upsets`], ...).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct UpSet {
    members: ElemSet,
}

impl UpSet {
    pub fn members(self) -> ElemSet {
        self.members
    }

    pub fn contains(self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_empty(self) -> bool {
        self.members.is_empty()
    }

    pub fn len(self) -> usize {
        self.members.len()
    }

    /// Union of two upsets (always an upset).
    pub fn union(self, other: UpSet) -> UpSet {
        UpSet {
            members: self.members.union(other.members),
        }
    }

    /// Intersection of two upsets (always an upset).
    pub fn intersection(self, other: UpSet) -> UpSet {
        UpSet {
            members: self.members.intersection(other.members),
        }
    }
}

/// A monotone map between finite posets; monotone maps are exactly the
/// continuous maps of the matching Alexandrov spaces.
#[derive(Clone, Debug)]
pub struct MonotoneMap {
    source: Arc<FinitePoset>,
    target: Arc<FinitePoset>,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(
        source: Arc<FinitePoset>,
        target: Arc<FinitePoset>,
        table: Vec<usize>,
    ) -> Result<Self> {
        assert_eq!(table.len(), source.len(), "table must cover the source");
        for x in source.elements() {
            for y in source.elements() {
                if source.leq(x, y) && !target.leq(table[x], table[y]) {
                    return Err(Error::NotMonotone {
                        x: source.name(x).into(),
                        y: source.name(y).into(),
                        fx: target.name(table[x]).into(),
                        fy: target.name(table[y]).into(),
                    });
                }
            }
        }
        Ok(MonotoneMap {
            source,
            target,
            table,
        })
    }

    pub fn identity(poset: Arc<FinitePoset>) -> Self {
        let table = (0..poset.len()).collect();
        MonotoneMap {
            source: poset.clone(),
            target: poset,
            table,
        }
    }

    pub fn constant(source: Arc<FinitePoset>, target: Arc<FinitePoset>, value: usize) -> Self {
        let table = vec![value; source.len()];
        MonotoneMap {
            source,
            target,
            table,
        }
    }

    pub fn source(&self) -> &Arc<FinitePoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePoset> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `g . f` where `self` is `f`.
    pub fn then(&self, g: &MonotoneMap) -> MonotoneMap {
        assert_eq!(
            self.target.as_ref(),
            g.source.as_ref(),
            "composition needs matching posets"
        );
        MonotoneMap {
            source: self.source.clone(),
            target: g.target.clone(),
            table: self.table.iter().map(|&x| g.table[x]).collect(),
        }
    }

    pub fn preimage(&self, set: ElemSet) -> ElemSet {
        (0..self.table.len())
            .filter(|&x| set.contains(self.table[x]))
            .collect()
    }
}

/// Recovers a poset from a family of "open" subsets over a named carrier:
/// `x <= y` iff every given set containing `x` contains `y`.
///
/// Any subbase is accepted; closing it under unions and intersections does
/// not change the relation, so no closure is materialized.
pub fn specialization_from_opens(names: &[&str], opens: &[ElemSet]) -> Result<FinitePoset> {
    if names.len() > MAX_ELEMENTS {
        return Err(Error::Size { bound: MAX_ELEMENTS });
    }
    let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    for (i, n) in owned.iter().enumerate() {
        if owned[..i].contains(n) {
            return Err(Error::DuplicateName { name: n.clone() });
        }
    }
    let n = owned.len();
    let full = ElemSet::full(n);
    let up: Vec<ElemSet> = (0..n)
        .map(|x| {
            opens
                .iter()
                .filter(|open| open.contains(x))
                .fold(full, |acc, open| acc.intersection(*open))
        })
        .collect();
    for x in 0..n {
        for y in x + 1..n {
            if up[x].contains(y) && up[y].contains(x) {
                return Err(Error::NotT0 {
                    x: owned[x].clone(),
                    y: owned[y].clone(),
                });
            }
        }
    }
    Ok(FinitePoset::from_up_rows(owned, up))
}

// Common small carriers, used pervasively in tests and the guide.
impl FinitePoset {
    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> FinitePoset {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let covers: Vec<(&str, &str)> = (1..n).map(|i| (refs[i - 1], refs[i])).collect();
        FinitePoset::from_covers(&refs, &covers).expect("chain is a poset")
    }

    /// `n` pairwise incomparable elements `0, ..., n-1`.
    pub fn antichain(n: usize) -> FinitePoset {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        FinitePoset::from_covers(&refs, &[]).expect("antichain is a poset")
    }

    /// `bot` under `atoms` pairwise incomparable atoms under `top`.
    /// `diamond(2)` is the four-element lattice with atoms `a`, `b`.
    pub fn diamond(atoms: usize) -> FinitePoset {
        assert!((1..=24).contains(&atoms), "supported atom counts: 1..=24");
        let atom_names: Vec<String> = (0..atoms)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        let mut names: Vec<&str> = vec!["bot"];
        names.extend(atom_names.iter().map(|s| s.as_str()));
        names.push("top");
        let mut covers = Vec::new();
        for a in &atom_names {
            covers.push(("bot", a.as_str()));
            covers.push((a.as_str(), "top"));
        }
        FinitePoset::from_covers(&names, &covers).expect("diamond is a poset")
    }

    /// The lattice of all subsets of `atoms` generators, ordered by
    /// inclusion. Elements are named by their letters, with `0` for the
    /// empty set: `0, a, b, ab, ...`.
    pub fn powerset(atoms: usize) -> FinitePoset {
        assert!(atoms <= 6, "supported atom counts: 0..=6");
        let n = 1usize << atoms;
        let subset_name = |mask: usize| -> String {
            if mask == 0 {
                "0".to_string()
            } else {
                (0..atoms)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (b'a' + i as u8) as char)
                    .collect()
            }
        };
        let names: Vec<String> = (0..n).map(subset_name).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut covers = Vec::new();
        for mask in 0..n {
            for i in 0..atoms {
                if mask >> i & 1 == 0 {
                    covers.push((refs[mask], refs[mask | 1 << i]));
                }
            }
        }
        FinitePoset::from_covers(&refs, &covers).expect("powerset is a poset")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c3() -> FinitePoset {
        FinitePoset::chain(3)
    }

    fn m2() -> FinitePoset {
        FinitePoset::diamond(2)
    }

    fn set(p: &FinitePoset, names: &[&str]) -> ElemSet {
        names.iter().map(|n| p.index_of(n).unwrap()).collect()
    }

    #[test]
    fn from_covers_takes_transitive_closure() {
        let p = c3();
        assert!(p.leq(0, 2));
        assert!(p.leq(0, 0));
        assert!(!p.leq(2, 0));
    }

    #[test]
    fn diamond_fixture_has_expected_order() {
        let p = m2();
        let (bot, a, b, top) = (0, 1, 2, 3);
        assert_eq!(p.name(bot), "bot");
        assert!(p.leq(bot, top));
        assert!(p.leq(a, top));
        assert!(!p.leq(a, b) && !p.leq(b, a));
    }

    #[test]
    fn cyclic_covers_are_rejected() {
        let err = FinitePoset::from_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::Cycle { .. }));
    }

    #[test]
    fn unknown_and_duplicate_names_are_rejected() {
        assert!(matches!(
            FinitePoset::from_covers(&["a"], &[("a", "z")]),
            Err(Error::UnknownName { .. })
        ));
        assert!(matches!(
            FinitePoset::from_covers(&["a", "a"], &[]),
            Err(Error::DuplicateName { .. })
        ));
    }

    #[test]
    fn up_closure_on_fixtures() {
        let p = m2();
        assert_eq!(p.up_closure(set(&p, &["a"])).members(), set(&p, &["a", "top"]));
        assert_eq!(p.up_closure(set(&p, &["bot"])).members(), p.carrier());
        let c = c3();
        assert_eq!(c.up_closure(ElemSet::EMPTY).members(), ElemSet::EMPTY);
    }

    #[test]
    fn down_closure_on_fixtures() {
        let p = m2();
        assert_eq!(p.down_closure(set(&p, &["a"])), set(&p, &["bot", "a"]));
        assert_eq!(p.down_closure(set(&p, &["a", "b"])), set(&p, &["bot", "a", "b"]));
        let c = c3();
        assert_eq!(c.down_closure(ElemSet::singleton(2)), c.carrier());
    }

    #[test]
    fn chain_upsets_in_canonical_order() {
        let c = c3();
        let upsets = c.enumerate_upsets().unwrap();
        let got: Vec<ElemSet> = upsets.iter().map(|u| u.members()).collect();
        let expected = vec![
            ElemSet::EMPTY,
            ElemSet::singleton(2),
            set(&c, &["1", "2"]),
            c.carrier(),
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn diamond_has_six_upsets_and_antichain_all_subsets() {
        assert_eq!(m2().enumerate_upsets().unwrap().len(), 6);
        assert_eq!(FinitePoset::antichain(5).enumerate_upsets().unwrap().len(), 32);
    }

    #[test]
    fn upset_bound_is_enforced() {
        let p = FinitePoset::antichain(12);
        assert!(matches!(
            p.enumerate_upsets_bounded(1 << 10),
            Err(Error::Size { bound }) if bound == 1 << 10
        ));
    }

    #[test]
    fn way_below_is_the_order() {
        let c = c3();
        assert!(c.way_below(0, 2));
        let p = m2();
        assert!(!p.way_below(1, 2));
        for x in p.elements() {
            assert!(p.way_below(x, x));
        }
    }

    #[test]
    fn minimal_elements_on_fixtures() {
        let p = m2();
        assert_eq!(p.minimal_elements(set(&p, &["a", "b", "top"])), set(&p, &["a", "b"]));
        assert_eq!(p.minimal_elements(p.carrier()), set(&p, &["bot"]));
        assert_eq!(p.minimal_elements(ElemSet::EMPTY), ElemSet::EMPTY);
    }

    #[test]
    fn joins_and_lattice_checks() {
        let p = m2();
        let (a, b, top) = (1, 2, 3);
        assert_eq!(p.join(a, b).unwrap(), top);
        let c = c3();
        assert_eq!(c.join(0, 1).unwrap(), 1);
        assert!(matches!(
            FinitePoset::antichain(2).join(0, 1),
            Err(Error::NoJoin { .. })
        ));
        assert!(p.is_lattice());
        assert!(c.is_lattice());
        assert!(!FinitePoset::antichain(2).is_lattice());
    }

    #[test]
    fn specialization_round_trip_on_diamond() {
        let p = m2();
        let opens: Vec<ElemSet> = p
            .enumerate_upsets()
            .unwrap()
            .iter()
            .map(|u| u.members())
            .collect();
        let names: Vec<&str> = p.names().iter().map(|s| s.as_str()).collect();
        let q = specialization_from_opens(&names, &opens).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn indiscernible_points_fail_t0() {
        let err = specialization_from_opens(
            &["x", "y"],
            &[ElemSet::EMPTY, ElemSet::full(2)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotT0 { .. }));
    }

    #[test]
    fn upset_validation_reports_witness() {
        let p = m2();
        let err = p.upset(set(&p, &["a"])).unwrap_err();
        match err {
            Error::NotUpset { member, above, .. } => {
                assert_eq!(member, "a");
                assert_eq!(above, "top");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn covers_regenerate_the_order() {
        let p = FinitePoset::powerset(3);
        let covers = p.covers();
        let names: Vec<&str> = p.names().iter().map(|s| s.as_str()).collect();
        let pairs: Vec<(&str, &str)> = covers
            .iter()
            .map(|&(x, y)| (names[x], names[y]))
            .collect();
        let q = FinitePoset::from_covers(&names, &pairs).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn monotone_map_rejects_order_breakers() {
        let c = Arc::new(c3());
        let a = Arc::new(FinitePoset::antichain(2));
        // 0 <= 1 in the chain but their images are incomparable.
        let err = MonotoneMap::new(c, a, vec![0, 1, 1]).unwrap_err();
        assert!(matches!(err, Error::NotMonotone { .. }));
    }

    prop_compose! {
        fn arb_poset()(n in 1usize..7, seed in any::<u64>()) -> FinitePoset {
            crate::random::random_poset_sized(n, seed)
        }
    }

    proptest! {
        #[test]
        fn up_closure_of_minimals_recovers_every_upset(p in arb_poset()) {
            for u in p.enumerate_upsets().unwrap() {
                let mins = p.minimal_elements(u.members());
                prop_assert_eq!(p.up_closure(mins).members(), u.members());
            }
        }

        #[test]
        fn upsets_form_a_topology(p in arb_poset()) {
            let upsets = p.enumerate_upsets().unwrap();
            for u in &upsets {
                for v in &upsets {
                    prop_assert!(p.is_upward_closed(u.members().union(v.members())));
                    prop_assert!(p.is_upward_closed(u.members().intersection(v.members())));
                }
            }
        }

        #[test]
        fn specialization_of_upsets_is_identity(p in arb_poset()) {
            let opens: Vec<ElemSet> = p
                .enumerate_upsets()
                .unwrap()
                .iter()
                .map(|u| u.members())
                .collect();
            let names: Vec<&str> = p.names().iter().map(|s| s.as_str()).collect();
            prop_assert_eq!(specialization_from_opens(&names, &opens).unwrap(), p);
        }

        #[test]
        fn join_laws_on_random_lattices(seed in any::<u64>(), n in 1usize..6) {
            let lat = crate::random::random_lattice(n, seed).unwrap();
            let bot = lat.bottom().unwrap();
            for x in lat.elements() {
                prop_assert_eq!(lat.join(x, x).unwrap(), x);
                prop_assert_eq!(lat.join(x, bot).unwrap(), x);
                for y in lat.elements() {
                    let xy = lat.join(x, y).unwrap();
                    prop_assert_eq!(xy, lat.join(y, x).unwrap());
                    for z in lat.elements() {
                        prop_assert_eq!(
                            lat.join(xy, z).unwrap(),
                            lat.join(x, lat.join(y, z).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }
}
