//! The upper (Smyth) powercone of a finite semilattice cone.
//!
//! The elements are the nonempty convex compact saturated subsets of the
//! cone; on a finite lattice those are exactly the nonempty upsets (every
//! upset of a lattice is closed under joins, hence convex). The powercone
//! carries
//!
//! * addition `Q1 + Q2 = up{x1 + x2 | x1 in Q1, x2 in Q2}`, which on a
//!   semilattice cone coincides with intersection,
//! * the scalar action `a * Q = up{a*x | x in Q}`, with zero the whole
//!   carrier,
//! * the upper Vietoris topology, generated by the boxes
//!   `box U = {Q | Q is a subset of U}`, whose specialization order is
//!   reverse inclusion.
//!
//! Ordered by reverse inclusion the powercone is itself a finite lattice
//! (join is intersection, meet is union), so [`SmythCone::cone`] packages
//! it as another [`SemilatticeCone`] and the whole cone toolkit applies to
//! it recursively. That recursion is what the barycenter pipeline in
//! [`crate::barycenter`] exploits.
//!
//! A functional on the base cone lifts to the powercone by minimizing over
//! members ([`SmythCone::lift_functional`]); the lift is again linear and
//! restricts back along the unit. In the other direction,
//! [`principality_check`]
//! recognizes the principal upsets: minimizing over `Q` is additive on the
//! dual cone exactly when `Q` is an upward closure `up x`, and on failure
//! the violating pair of functionals is returned as a certificate.

use std::fmt;
use std::sync::Arc;

use crate::cone::{is_convex, GeneralFunctional, SemilatticeCone};
use crate::error::{Error, Result};
use crate::poset::{canonical_cmp, ElemSet, FinitePoset, MonotoneMap, UpSet};
use crate::rational::ExtRat;

/// Default cap on the number of powercone elements.
pub const DEFAULT_SMYTH_BOUND: usize = 1 << 16;

/// A nonempty convex upset of a semilattice cone: one element of the upper
/// powercone.
#[derive(Clone, PartialEq, Eq)]
pub struct ConvexUpset {
    cone: Arc<SemilatticeCone>,
    members: UpSet,
}

impl fmt::Debug for ConvexUpset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cone.lattice().set_to_string(self.members.members()))
    }
}

impl ConvexUpset {
    /// Wraps a nonempty upset, certifying convexity rather than assuming
    /// it.
    pub fn new(cone: Arc<SemilatticeCone>, members: UpSet) -> Self {
        assert!(!members.is_empty(), "powercone elements are nonempty");
        assert!(
            is_convex(&cone, members.members()),
            "upsets of a lattice are convex"
        );
        ConvexUpset { cone, members }
    }

    /// The upward closure of a single element.
    pub fn principal(cone: Arc<SemilatticeCone>, x: usize) -> Self {
        let members = cone.lattice().principal_upset(x);
        ConvexUpset::new(cone, members)
    }

    /// The whole carrier: the zero of the powercone.
    pub fn whole(cone: Arc<SemilatticeCone>) -> Self {
        let members = cone
            .lattice()
            .upset(cone.lattice().carrier())
            .expect("the carrier is an upset");
        ConvexUpset::new(cone, members)
    }

    pub fn cone(&self) -> &Arc<SemilatticeCone> {
        &self.cone
    }

    pub fn members(&self) -> UpSet {
        self.members
    }

    /// Powercone addition, computed from its defining formula (close the
    /// pointwise sums upwards). On a semilattice cone the result equals the
    /// intersection; both are computed and compared.
    pub fn add(&self, other: &ConvexUpset) -> ConvexUpset {
        assert_eq!(self.cone.as_ref(), other.cone.as_ref());
        let sums: ElemSet = self
            .members
            .members()
            .iter()
            .flat_map(|x| {
                other
                    .members
                    .members()
                    .iter()
                    .map(move |y| self.cone.add(x, y))
            })
            .collect();
        let closed = self.cone.lattice().up_closure(sums);
        assert_eq!(
            closed,
            self.members.intersection(other.members),
            "pointwise sums close up to the intersection"
        );
        ConvexUpset::new(self.cone.clone(), closed)
    }

    /// The powercone scalar action: closes `{a*x | x in Q}` upwards. For
    /// `a = 0` this is the whole carrier, the powercone zero.
    pub fn scale(&self, a: &ExtRat) -> ConvexUpset {
        assert!(a.is_finite(), "scalars are finite");
        let scaled: ElemSet = self
            .members
            .members()
            .iter()
            .map(|x| self.cone.scale(a, x))
            .collect();
        ConvexUpset::new(self.cone.clone(), self.cone.lattice().up_closure(scaled))
    }

    /// Membership in the basic upper Vietoris open `box U`.
    pub fn in_box(&self, u: UpSet) -> bool {
        self.members.members().is_subset(u.members())
    }
}

/// The unit of the powercone construction: `x` maps to its upward closure.
pub fn smyth_unit(cone: &Arc<SemilatticeCone>, x: usize) -> ConvexUpset {
    ConvexUpset::principal(cone.clone(), x)
}

/// The whole upper powercone of a finite semilattice cone, with its own
/// lattice and cone structure.
#[derive(Clone)]
pub struct SmythCone {
    base: Arc<SemilatticeCone>,
    /// Member sets of the powercone elements, in canonical order; index `i`
    /// here is element `i` of [`SmythCone::cone`].
    elements: Vec<ElemSet>,
    cone: Arc<SemilatticeCone>,
}

impl SmythCone {
    pub fn new(base: Arc<SemilatticeCone>) -> Result<Self> {
        Self::with_bound(base, DEFAULT_SMYTH_BOUND)
    }

    pub fn with_bound(base: Arc<SemilatticeCone>, bound: usize) -> Result<Self> {
        let mut elements: Vec<ElemSet> = base
            .lattice()
            .enumerate_upsets_bounded(bound.saturating_add(1))
            .map_err(|e| match e {
                Error::Size { .. } => Error::Size { bound },
                other => other,
            })?
            .into_iter()
            .map(|u| u.members())
            .filter(|m| !m.is_empty())
            .collect();
        if elements.len() > bound {
            return Err(Error::Size { bound });
        }
        elements.sort_by(|a, b| canonical_cmp(*a, *b));
        // Certify convexity of every element.
        for &m in &elements {
            assert!(is_convex(&base, m), "upsets of a lattice are convex");
        }

        // The powercone ordered by reverse inclusion, as a poset of its
        // own. Named by member sets.
        let names: Vec<String> = elements
            .iter()
            .map(|&m| base.lattice().set_to_string(m))
            .collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut covers = Vec::new();
        for (i, &lo) in elements.iter().enumerate() {
            for (j, &hi) in elements.iter().enumerate() {
                // lo <= hi iff lo contains hi; covers have nothing between.
                if i == j || !hi.is_subset(lo) {
                    continue;
                }
                let between = elements.iter().enumerate().any(|(k, &mid)| {
                    k != i && k != j && hi.is_subset(mid) && mid.is_subset(lo)
                });
                if !between {
                    covers.push((refs[i], refs[j]));
                }
            }
        }
        let poset = FinitePoset::from_covers(&refs, &covers)
            .expect("reverse inclusion is a partial order");
        let cone = Arc::new(SemilatticeCone::new(Arc::new(poset))?);

        let smyth = SmythCone {
            base,
            elements,
            cone,
        };
        // The derived cone operations must agree with the powercone
        // formulas: join is intersection (= addition) and the bottom is the
        // whole carrier (= zero, = scaling by 0).
        for i in 0..smyth.len() {
            for j in 0..smyth.len() {
                let via_cone = smyth.cone.add(i, j);
                let via_formula = smyth.element(i).add(&smyth.element(j));
                debug_assert_eq!(smyth.elements[via_cone], via_formula.members().members());
            }
        }
        debug_assert_eq!(
            smyth.elements[smyth.cone.zero()],
            smyth.base.lattice().carrier()
        );
        Ok(smyth)
    }

    pub fn base(&self) -> &Arc<SemilatticeCone> {
        &self.base
    }

    /// The powercone as a semilattice cone in its own right (reverse
    /// inclusion order).
    pub fn cone(&self) -> &Arc<SemilatticeCone> {
        &self.cone
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The member set of powercone element `i`.
    pub fn element_set(&self, i: usize) -> ElemSet {
        self.elements[i]
    }

    pub fn element(&self, i: usize) -> ConvexUpset {
        let members = self
            .base
            .lattice()
            .upset(self.elements[i])
            .expect("powercone elements are upsets");
        ConvexUpset::new(self.base.clone(), members)
    }

    pub fn index_of(&self, members: ElemSet) -> Option<usize> {
        self.elements.iter().position(|&m| m == members)
    }

    /// The index of `up x`.
    pub fn unit(&self, x: usize) -> usize {
        self.index_of(self.base.lattice().principal_upset(x).members())
            .expect("principal upsets are powercone elements")
    }

    /// The unit as a monotone map from the base lattice into the powercone
    /// lattice; monotone because upward closure reverses into inclusion.
    pub fn unit_map(&self) -> MonotoneMap {
        let table = (0..self.base.len()).map(|x| self.unit(x)).collect();
        MonotoneMap::new(
            self.base.lattice().clone(),
            self.cone.lattice().clone(),
            table,
        )
        .expect("the unit is monotone")
    }

    /// Lifts a functional on the base cone to the powercone by minimizing
    /// over members: `lift(L)(Q) = min over x in Q of L(x)`. The lift is
    /// linear, so the unchecked constructor is sound; the test suites
    /// certify linearity exhaustively.
    pub fn lift_functional(&self, functional: &GeneralFunctional) -> GeneralFunctional {
        assert_eq!(functional.cone().as_ref(), self.base.as_ref());
        let table = self
            .elements
            .iter()
            .map(|&m| {
                m.iter()
                    .map(|x| functional.apply(x).clone())
                    .fold(ExtRat::infinity(), ExtRat::min)
            })
            .collect();
        GeneralFunctional::new_unchecked(self.cone.clone(), table)
    }
}

/// The verdict of [`principality_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrincipalityVerdict {
    /// Minimization over the upset is additive, and the upset is the
    /// upward closure of `witness`.
    Principal { witness: usize },
    /// Additivity fails on the two functionals anchored at `lhs_anchor`
    /// and `rhs_anchor`: minimizing their sum differs from the sum of the
    /// minima.
    NotLinear {
        lhs_anchor: usize,
        rhs_anchor: usize,
        min_of_sum: ExtRat,
        sum_of_mins: ExtRat,
    },
}

impl PrincipalityVerdict {
    pub fn is_principal(&self) -> bool {
        matches!(self, PrincipalityVerdict::Principal { .. })
    }
}

/// Decides whether a nonempty upset `Q` is principal by testing whether
/// `phi(L) = min over Q of L` is additive on the dual cone.
///
/// Additivity is tested over all pairs of dual functionals; sums of dual
/// functionals anchor at the meet of the anchors, so this covers the whole
/// dual cone. Homogeneity is automatic: positive scalars fix every dual
/// functional and every minimum is `0` or `inf`, and the zero scalar sends
/// everything to the top-anchored functional, whose minimum is `0`.
pub fn principality_check(cone: &Arc<SemilatticeCone>, q: &UpSet) -> PrincipalityVerdict {
    assert!(!q.is_empty(), "powercone elements are nonempty");
    let min_over = |f: &GeneralFunctional| -> ExtRat {
        q.members()
            .iter()
            .map(|x| f.apply(x).clone())
            .fold(ExtRat::infinity(), ExtRat::min)
    };
    let duals = crate::cone::dual_cone_enumerate(cone);
    for f in &duals {
        for g in &duals {
            let sum = crate::cone::add_functionals(f, g);
            let min_of_sum = min_over(&sum);
            let sum_of_mins = &min_over(&f.as_general()) + &min_over(&g.as_general());
            if min_of_sum != sum_of_mins {
                return PrincipalityVerdict::NotLinear {
                    lhs_anchor: f.anchor(),
                    rhs_anchor: g.anchor(),
                    min_of_sum,
                    sum_of_mins,
                };
            }
        }
    }
    let minimals = cone.lattice().minimal_elements(q.members());
    let mut iter = minimals.iter();
    let witness = iter.next().expect("nonempty upsets have minimal elements");
    assert!(
        iter.next().is_none(),
        "additive minimization forces a single minimal element"
    );
    PrincipalityVerdict::Principal { witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{dual_cone_enumerate, DualFunctional};
    use crate::poset::specialization_from_opens;

    fn m2_cone() -> Arc<SemilatticeCone> {
        Arc::new(SemilatticeCone::new(Arc::new(FinitePoset::diamond(2))).unwrap())
    }

    fn c3_cone() -> Arc<SemilatticeCone> {
        Arc::new(SemilatticeCone::new(Arc::new(FinitePoset::chain(3))).unwrap())
    }

    fn elem(cone: &SemilatticeCone, name: &str) -> usize {
        cone.lattice().index_of(name).unwrap()
    }

    fn upset(cone: &Arc<SemilatticeCone>, names: &[&str]) -> UpSet {
        let set: ElemSet = names
            .iter()
            .map(|n| cone.lattice().index_of(n).unwrap())
            .collect();
        cone.lattice().upset(set).unwrap()
    }

    #[test]
    fn powercone_sizes_on_fixtures() {
        assert_eq!(SmythCone::new(m2_cone()).unwrap().len(), 5);
        assert_eq!(SmythCone::new(c3_cone()).unwrap().len(), 3);
        let point = Arc::new(SemilatticeCone::new(Arc::new(FinitePoset::chain(1))).unwrap());
        assert_eq!(SmythCone::new(point).unwrap().len(), 1);
    }

    #[test]
    fn smyth_bound_is_enforced() {
        let big = Arc::new(
            SemilatticeCone::new(Arc::new(FinitePoset::powerset(5))).unwrap(),
        );
        assert!(matches!(
            SmythCone::with_bound(big, 16),
            Err(Error::Size { bound: 16 })
        ));
    }

    #[test]
    fn addition_of_principal_upsets_meets_at_the_join() {
        let cone = m2_cone();
        let (a, b, top) = (elem(&cone, "a"), elem(&cone, "b"), elem(&cone, "top"));
        let sum = smyth_unit(&cone, a).add(&smyth_unit(&cone, b));
        assert_eq!(sum.members().members(), ElemSet::singleton(top));
    }

    #[test]
    fn scaling_by_zero_gives_the_whole_carrier() {
        let cone = m2_cone();
        let q = smyth_unit(&cone, elem(&cone, "a"));
        assert_eq!(
            q.scale(&ExtRat::zero()).members().members(),
            cone.lattice().carrier()
        );
        assert_eq!(q.scale(&ExtRat::from_integer(3)), q);
    }

    #[test]
    fn box_membership_is_containment() {
        let cone = m2_cone();
        let a_up = smyth_unit(&cone, elem(&cone, "a"));
        assert!(a_up.in_box(upset(&cone, &["a", "top"])));
        let abt = ConvexUpset::new(cone.clone(), upset(&cone, &["a", "b", "top"]));
        assert!(!abt.in_box(upset(&cone, &["a", "top"])));
        let whole = cone.lattice().upset(cone.lattice().carrier()).unwrap();
        for u in cone.lattice().enumerate_upsets().unwrap() {
            if !u.is_empty() {
                assert!(ConvexUpset::new(cone.clone(), u).in_box(whole));
            }
        }
    }

    #[test]
    fn unit_values_on_the_diamond() {
        let cone = m2_cone();
        let (bot, a, top) = (elem(&cone, "bot"), elem(&cone, "a"), elem(&cone, "top"));
        assert_eq!(
            smyth_unit(&cone, top).members().members(),
            ElemSet::singleton(top)
        );
        assert_eq!(smyth_unit(&cone, bot).members().members(), cone.lattice().carrier());
        assert_eq!(
            smyth_unit(&cone, a).members(),
            upset(&cone, &["a", "top"])
        );
    }

    #[test]
    fn unit_map_reverses_into_inclusion() {
        let smyth = SmythCone::new(m2_cone()).unwrap();
        let base = smyth.base().lattice();
        // x <= y iff up x contains up y: the unit map is monotone into the
        // reverse-inclusion order, by construction of MonotoneMap.
        let unit = smyth.unit_map();
        for x in base.elements() {
            for y in base.elements() {
                if base.leq(x, y) {
                    assert!(smyth
                        .element_set(unit.apply(y))
                        .is_subset(smyth.element_set(unit.apply(x))));
                }
            }
        }
    }

    #[test]
    fn smyth_cone_top_and_bottom() {
        let smyth = SmythCone::new(m2_cone()).unwrap();
        let cone = smyth.cone();
        let top = elem(smyth.base(), "top");
        assert_eq!(smyth.element_set(cone.zero()), smyth.base().lattice().carrier());
        assert_eq!(smyth.element_set(cone.top()), ElemSet::singleton(top));
    }

    #[test]
    fn lift_restricts_back_along_the_unit() {
        let smyth = SmythCone::new(m2_cone()).unwrap();
        for dual in dual_cone_enumerate(smyth.base()) {
            let lifted = smyth.lift_functional(&dual.as_general());
            for x in 0..smyth.base().len() {
                assert_eq!(*lifted.apply(smyth.unit(x)), dual.apply(x));
            }
        }
    }

    #[test]
    fn lift_values_on_the_diamond() {
        let smyth = SmythCone::new(m2_cone()).unwrap();
        let cone = smyth.base().clone();
        let (a, b) = (elem(&cone, "a"), elem(&cone, "b"));
        let la = DualFunctional::new(cone.clone(), a).as_general();
        let lifted = smyth.lift_functional(&la);
        assert_eq!(*lifted.apply(smyth.unit(b)), ExtRat::infinity());

        let top_anchor = DualFunctional::new(cone.clone(), elem(&cone, "top")).as_general();
        let lifted_top = smyth.lift_functional(&top_anchor);
        for q in 0..smyth.len() {
            assert_eq!(*lifted_top.apply(q), ExtRat::zero());
        }
    }

    #[test]
    fn lift_is_linear_on_the_powercone() {
        let smyth = SmythCone::new(m2_cone()).unwrap();
        for dual in dual_cone_enumerate(smyth.base()) {
            let lifted = smyth.lift_functional(&dual.as_general());
            assert!(lifted.linearity_report().passed());
        }
    }

    #[test]
    fn principality_verdicts_on_the_diamond() {
        let cone = m2_cone();
        let (a, b, bot) = (elem(&cone, "a"), elem(&cone, "b"), elem(&cone, "bot"));

        match principality_check(&cone, &upset(&cone, &["a", "b", "top"])) {
            PrincipalityVerdict::NotLinear {
                lhs_anchor,
                rhs_anchor,
                min_of_sum,
                sum_of_mins,
            } => {
                // Minimizing over {a,b,top}: both atom-anchored functionals
                // have minimum 0 there, but their sum anchors at bot and
                // its minimum is inf.
                assert_eq!(
                    {
                        let mut pair = [lhs_anchor, rhs_anchor];
                        pair.sort();
                        pair
                    },
                    [a, b]
                );
                assert_eq!(min_of_sum, ExtRat::infinity());
                assert_eq!(sum_of_mins, ExtRat::zero());
            }
            verdict => panic!("expected a non-linear verdict, got {verdict:?}"),
        }

        assert_eq!(
            principality_check(&cone, &upset(&cone, &["a", "top"])),
            PrincipalityVerdict::Principal { witness: a }
        );
        let whole = cone.lattice().upset(cone.lattice().carrier()).unwrap();
        assert_eq!(
            principality_check(&cone, &whole),
            PrincipalityVerdict::Principal { witness: bot }
        );
    }

    #[test]
    fn box_basis_specializes_to_reverse_inclusion() {
        // The specialization order of the upper Vietoris topology, computed
        // from the box basis alone, is reverse inclusion.
        let smyth = SmythCone::new(m2_cone()).unwrap();
        let base = smyth.base().lattice();
        let opens: Vec<ElemSet> = base
            .enumerate_upsets()
            .unwrap()
            .into_iter()
            .map(|u| {
                (0..smyth.len())
                    .filter(|&i| smyth.element_set(i).is_subset(u.members()))
                    .collect()
            })
            .collect();
        let names: Vec<String> = (0..smyth.len())
            .map(|i| base.set_to_string(smyth.element_set(i)))
            .collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let from_boxes = specialization_from_opens(&refs, &opens).unwrap();
        assert_eq!(&from_boxes, smyth.cone().lattice().as_ref());
    }
}
