//! Finite semilattice cones and their dual functionals.
//!
//! A cone is a commutative monoid with an action of the nonnegative
//! rationals satisfying the vector-space laws that do not mention
//! subtraction. Every finite lattice is one: addition is join, the scalar
//! action collapses to the sign (`0 * x = bot`, `a * x = x` for `a > 0`),
//! and the zero is the bottom element. [`SemilatticeCone`] materializes
//! exactly this class; arbitrary finite `(add, scale)` tables can still be
//! run through [`check_cone_axioms`] via [`ConeTable`] for experimentation,
//! but get no barycenter support.
//!
//! The dual cone of a finite semilattice cone is small and concrete: a
//! linear lower semicontinuous functional can only take the values `0` and
//! `inf` (homogeneity forces it), and its zero set must be a principal
//! downset, so the functionals are exactly the maps
//! `x |-> 0 if x <= d, inf otherwise`, one per anchor `d`
//! ([`DualFunctional`]). A point `x0` is a *barycenter* of a valuation `v`
//! when every dual functional satisfies `L(x0) = integral of L dv`;
//! [`is_barycenter`] checks that definition exhaustively, and
//! [`barycenter_support_sup`] computes the closed form: the join of the
//! support.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::{ElemSet, FinitePoset};
use crate::rational::ExtRat;
use crate::report::LawReport;
use crate::valuation::{MonotoneFn, Valuation};

/// A finite lattice viewed as a cone: `x + y = join`, `a * x = x` for
/// `a > 0`, zero is the bottom.
#[derive(Clone, PartialEq, Eq)]
pub struct SemilatticeCone {
    lattice: Arc<FinitePoset>,
    /// `join[x * n + y]`, precomputed.
    join: Vec<usize>,
    /// `meet[x * n + y]`, precomputed.
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl fmt::Debug for SemilatticeCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SemilatticeCone({:?})", self.lattice)
    }
}

impl SemilatticeCone {
    pub fn new(lattice: Arc<FinitePoset>) -> Result<Self> {
        if let Some(reason) = lattice.lattice_violation() {
            return Err(Error::NotLattice { reason });
        }
        let n = lattice.len();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                join[x * n + y] = lattice.join(x, y).expect("checked above");
                meet[x * n + y] = lattice.meet(x, y).expect("checked above");
            }
        }
        let bottom = lattice.bottom().expect("checked above");
        let top = lattice.top().expect("finite lattices have a top");
        Ok(SemilatticeCone {
            lattice,
            join,
            meet,
            bottom,
            top,
        })
    }

    pub fn lattice(&self) -> &Arc<FinitePoset> {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn zero(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Cone addition: the join.
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.join[x * self.lattice.len() + y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.lattice.len() + y]
    }

    /// The scalar action. Scalars are finite nonnegative rationals; the
    /// action only depends on whether the scalar is zero.
    pub fn scale(&self, a: &ExtRat, x: usize) -> usize {
        assert!(a.is_finite(), "scalars are finite");
        if a.is_zero() {
            self.bottom
        } else {
            x
        }
    }

    /// Join of a set of elements; the empty join is the bottom.
    pub fn join_set(&self, set: ElemSet) -> usize {
        set.iter().fold(self.bottom, |acc, x| self.add(acc, x))
    }
}

/// The minimal interface [`check_cone_axioms`] needs. Implemented both by
/// [`SemilatticeCone`] and by raw [`ConeTable`]s.
pub trait ConeOps {
    fn size(&self) -> usize;
    fn zero_elem(&self) -> usize;
    fn add_elems(&self, x: usize, y: usize) -> usize;
    fn scale_elem(&self, a: &ExtRat, x: usize) -> usize;
    fn label(&self, x: usize) -> String;
}

impl ConeOps for SemilatticeCone {
    fn size(&self) -> usize {
        self.len()
    }

    fn zero_elem(&self) -> usize {
        self.zero()
    }

    fn add_elems(&self, x: usize, y: usize) -> usize {
        self.add(x, y)
    }

    fn scale_elem(&self, a: &ExtRat, x: usize) -> usize {
        self.scale(a, x)
    }

    fn label(&self, x: usize) -> String {
        self.lattice.name(x).to_string()
    }
}

/// A user-supplied finite cone candidate: an addition table, a zero, and
/// the image of each element under any positive scalar. (A finite action
/// table can only depend on the sign of the scalar.) Nothing is validated;
/// run [`check_cone_axioms`] to find out what holds.
#[derive(Clone, Debug)]
pub struct ConeTable {
    labels: Vec<String>,
    zero: usize,
    add: Vec<usize>,
    scale_pos: Vec<usize>,
}

impl ConeTable {
    pub fn new(labels: Vec<String>, zero: usize, add: Vec<usize>, scale_pos: Vec<usize>) -> Self {
        let n = labels.len();
        assert_eq!(add.len(), n * n);
        assert_eq!(scale_pos.len(), n);
        ConeTable {
            labels,
            zero,
            add,
            scale_pos,
        }
    }

    /// The tables of a semilattice cone, as a starting point for
    /// experiments.
    pub fn from_cone(cone: &SemilatticeCone) -> Self {
        let n = cone.len();
        ConeTable {
            labels: cone.lattice.names().to_vec(),
            zero: cone.zero(),
            add: (0..n * n).map(|i| cone.add(i / n, i % n)).collect(),
            scale_pos: (0..n).collect(),
        }
    }

    /// Replaces the positive-scalar action, e.g. to corrupt it on purpose.
    pub fn with_scale_pos(mut self, scale_pos: Vec<usize>) -> Self {
        assert_eq!(scale_pos.len(), self.labels.len());
        self.scale_pos = scale_pos;
        self
    }
}

impl ConeOps for ConeTable {
    fn size(&self) -> usize {
        self.labels.len()
    }

    fn zero_elem(&self) -> usize {
        self.zero
    }

    fn add_elems(&self, x: usize, y: usize) -> usize {
        self.add[x * self.labels.len() + y]
    }

    fn scale_elem(&self, a: &ExtRat, x: usize) -> usize {
        assert!(a.is_finite(), "scalars are finite");
        if a.is_zero() {
            self.zero
        } else {
            self.scale_pos[x]
        }
    }

    fn label(&self, x: usize) -> String {
        self.labels[x].clone()
    }
}

/// Checks the six scalar laws
///
/// ```text
/// 0*x = 0        (ab)*x = a*(b*x)      1*x = x
/// a*0 = 0        a*(x+y) = a*x + a*y   (a+b)*x = a*x + b*x
/// ```
///
/// plus the commutative-monoid laws for addition, over every element (or
/// pair) and every scalar pair in `scalar_samples`. The sign patterns
/// `{0, positive}^2` are always included, which fully determines a finite
/// action.
pub fn check_cone_axioms(cone: &impl ConeOps, scalar_samples: &[(ExtRat, ExtRat)]) -> LawReport {
    let mut report = LawReport::new("cone axioms");
    let n = cone.size();
    let zero = cone.zero_elem();
    let one = ExtRat::one();

    let mut scalars: Vec<(ExtRat, ExtRat)> = vec![
        (ExtRat::zero(), ExtRat::zero()),
        (ExtRat::zero(), ExtRat::one()),
        (ExtRat::one(), ExtRat::zero()),
        (ExtRat::from_integer(2), ExtRat::from_integer(3)),
    ];
    scalars.extend(scalar_samples.iter().cloned());

    for x in 0..n {
        report.record(
            cone.scale_elem(&ExtRat::zero(), x) == zero,
            "0*x = 0",
            || format!("x = {}", cone.label(x)),
        );
        report.record(cone.scale_elem(&one, x) == x, "1*x = x", || {
            format!("x = {}", cone.label(x))
        });
        for y in 0..n {
            report.record(
                cone.add_elems(x, y) == cone.add_elems(y, x),
                "x + y = y + x",
                || format!("x = {}, y = {}", cone.label(x), cone.label(y)),
            );
            for z in 0..n {
                report.record(
                    cone.add_elems(cone.add_elems(x, y), z)
                        == cone.add_elems(x, cone.add_elems(y, z)),
                    "(x + y) + z = x + (y + z)",
                    || {
                        format!(
                            "x = {}, y = {}, z = {}",
                            cone.label(x),
                            cone.label(y),
                            cone.label(z)
                        )
                    },
                );
            }
        }
        report.record(cone.add_elems(x, zero) == x, "x + 0 = x", || {
            format!("x = {}", cone.label(x))
        });
    }

    for (a, b) in &scalars {
        report.record(
            cone.scale_elem(a, zero) == zero,
            "a*0 = 0",
            || format!("a = {a}"),
        );
        for x in 0..n {
            report.record(
                cone.scale_elem(&(a * b), x) == cone.scale_elem(a, cone.scale_elem(b, x)),
                "(ab)*x = a*(b*x)",
                || format!("a = {a}, b = {b}, x = {}", cone.label(x)),
            );
            report.record(
                cone.scale_elem(&(a + b), x)
                    == cone.add_elems(cone.scale_elem(a, x), cone.scale_elem(b, x)),
                "(a+b)*x = a*x + b*x",
                || format!("a = {a}, b = {b}, x = {}", cone.label(x)),
            );
            for y in 0..n {
                report.record(
                    cone.scale_elem(a, cone.add_elems(x, y))
                        == cone.add_elems(cone.scale_elem(a, x), cone.scale_elem(a, y)),
                    "a*(x+y) = a*x + a*y",
                    || {
                        format!(
                            "a = {a}, x = {}, y = {}",
                            cone.label(x),
                            cone.label(y)
                        )
                    },
                );
            }
        }
    }
    report
}

/// Whether `set` is convex in the cone: closed under `a*x + (1-a)*y` for
/// `a` in `[0, 1]`. In a semilattice cone the interior scalars all give
/// `x + y = join`, and the endpoints give back `x` or `y`, so convexity is
/// exactly closure under joins.
pub fn is_convex(cone: &SemilatticeCone, set: ElemSet) -> bool {
    set.iter()
        .all(|x| set.iter().all(|y| set.contains(cone.add(x, y))))
}

/// The linear functional `x |-> 0 if x <= anchor, inf otherwise`. These are
/// exactly the linear lower semicontinuous maps out of a finite semilattice
/// cone.
#[derive(Clone, PartialEq, Eq)]
pub struct DualFunctional {
    cone: Arc<SemilatticeCone>,
    anchor: usize,
}

impl fmt::Debug for DualFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L[{}]", self.cone.lattice().name(self.anchor))
    }
}

impl DualFunctional {
    pub fn new(cone: Arc<SemilatticeCone>, anchor: usize) -> Self {
        assert!(anchor < cone.len());
        DualFunctional { cone, anchor }
    }

    pub fn cone(&self) -> &Arc<SemilatticeCone> {
        &self.cone
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn apply(&self, x: usize) -> ExtRat {
        if self.cone.lattice().leq(x, self.anchor) {
            ExtRat::zero()
        } else {
            ExtRat::Infinity
        }
    }

    /// The functional as a monotone function, ready for integration.
    pub fn as_monotone_fn(&self) -> MonotoneFn {
        let lattice = self.cone.lattice().clone();
        let values = (0..lattice.len()).map(|x| self.apply(x)).collect();
        MonotoneFn::new(lattice, values).expect("dual functionals are monotone")
    }

    /// The functional as an explicit table.
    pub fn as_general(&self) -> GeneralFunctional {
        let table = (0..self.cone.len()).map(|x| self.apply(x)).collect();
        GeneralFunctional {
            cone: self.cone.clone(),
            table,
        }
    }
}

/// An arbitrary tabulated functional on a cone. [`GeneralFunctional::new`]
/// validates linearity; the unchecked constructor exists for callers that
/// hold a proof by construction (sums of dual functionals, lifts).
#[derive(Clone, PartialEq, Eq)]
pub struct GeneralFunctional {
    cone: Arc<SemilatticeCone>,
    table: Vec<ExtRat>,
}

impl fmt::Debug for GeneralFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self
            .table
            .iter()
            .enumerate()
            .map(|(x, v)| format!("{} -> {}", self.cone.lattice().name(x), v))
            .collect();
        write!(f, "[{}]", entries.join(", "))
    }
}

impl GeneralFunctional {
    /// Validates that the table is a linear lower semicontinuous
    /// functional: zero at the bottom, monotone, additive over joins, and
    /// homogeneous under the scalar action.
    pub fn new(cone: Arc<SemilatticeCone>, table: Vec<ExtRat>) -> Result<Self> {
        let candidate = GeneralFunctional { cone, table };
        let report = candidate.linearity_report();
        match report.failures.first() {
            None => Ok(candidate),
            Some(failure) => Err(Error::NotLinear {
                law: failure.law.clone(),
                witness: failure.witness.clone(),
            }),
        }
    }

    pub fn new_unchecked(cone: Arc<SemilatticeCone>, table: Vec<ExtRat>) -> Self {
        assert_eq!(table.len(), cone.len());
        GeneralFunctional { cone, table }
    }

    pub fn cone(&self) -> &Arc<SemilatticeCone> {
        &self.cone
    }

    pub fn apply(&self, x: usize) -> &ExtRat {
        &self.table[x]
    }

    pub fn table(&self) -> &[ExtRat] {
        &self.table
    }

    /// Checks every linearity law and reports each violation.
    pub fn linearity_report(&self) -> LawReport {
        let mut report = LawReport::new("functional linearity");
        let lattice = self.cone.lattice();
        report.record(
            self.table[self.cone.zero()].is_zero(),
            "L(0) = 0",
            || format!("L(0) = {}", self.table[self.cone.zero()]),
        );
        for x in 0..self.cone.len() {
            for y in 0..self.cone.len() {
                if lattice.leq(x, y) {
                    report.record(
                        self.table[x] <= self.table[y],
                        "monotonicity",
                        || {
                            format!(
                                "{} <= {} but L gives {} > {}",
                                lattice.name(x),
                                lattice.name(y),
                                self.table[x],
                                self.table[y]
                            )
                        },
                    );
                }
                report.record(
                    self.table[self.cone.add(x, y)] == &self.table[x] + &self.table[y],
                    "L(x + y) = L(x) + L(y)",
                    || {
                        format!(
                            "x = {}, y = {}: L(x+y) = {}, L(x) + L(y) = {}",
                            lattice.name(x),
                            lattice.name(y),
                            self.table[self.cone.add(x, y)],
                            &self.table[x] + &self.table[y]
                        )
                    },
                );
            }
            // Homogeneity under the sign-determined action: a > 0 needs
            // a*L(x) = L(x), i.e. L(x) in {0, inf}; a = 0 follows from
            // L(0) = 0.
            report.record(
                self.table[x].is_zero() || self.table[x] == ExtRat::Infinity,
                "L(a*x) = a*L(x)",
                || {
                    format!(
                        "x = {}: L(x) = {} is neither 0 nor inf, so 2*L(x) != L(2*x)",
                        lattice.name(x),
                        self.table[x]
                    )
                },
            );
        }
        report
    }

    /// If the table coincides with a dual functional, returns it.
    pub fn as_dual(&self) -> Option<DualFunctional> {
        (0..self.cone.len())
            .map(|d| DualFunctional::new(self.cone.clone(), d))
            .find(|dual| {
                (0..self.cone.len()).all(|x| *self.apply(x) == dual.apply(x))
            })
    }
}

/// All dual functionals of the cone: one per anchor element, in element
/// order.
pub fn dual_cone_enumerate(cone: &Arc<SemilatticeCone>) -> Vec<DualFunctional> {
    (0..cone.len())
        .map(|d| DualFunctional::new(cone.clone(), d))
        .collect()
}

/// Pointwise sum of two dual functionals. On a lattice the zero sets
/// intersect in a principal downset, so the sum is the dual functional
/// anchored at the meet of the anchors; the returned table makes no use of
/// that fact.
pub fn add_functionals(f: &DualFunctional, g: &DualFunctional) -> GeneralFunctional {
    assert_eq!(f.cone.as_ref(), g.cone.as_ref(), "functionals share a cone");
    let table = (0..f.cone.len())
        .map(|x| &f.apply(x) + &g.apply(x))
        .collect();
    GeneralFunctional {
        cone: f.cone.clone(),
        table,
    }
}

/// For `x` not above `y`, a functional separating them: the one anchored at
/// `x` gives `L(x) = 0 <= 1 < inf = L(y)`.
pub fn linear_separation_witness(
    cone: &Arc<SemilatticeCone>,
    x: usize,
    y: usize,
) -> Result<DualFunctional> {
    if cone.lattice().leq(y, x) {
        return Err(Error::NotSeparable {
            x: cone.lattice().name(x).into(),
            y: cone.lattice().name(y).into(),
        });
    }
    Ok(DualFunctional::new(cone.clone(), x))
}

/// Outcome of the definitional barycenter test.
#[derive(Clone, Debug)]
pub struct BarycenterCheck {
    pub holds: bool,
    /// The first functional violating `L(x0) = integral of L dv`, with both
    /// sides.
    pub certificate: Option<BarycenterCertificate>,
}

#[derive(Clone, Debug)]
pub struct BarycenterCertificate {
    pub functional: DualFunctional,
    pub lhs: ExtRat,
    pub rhs: ExtRat,
}

/// Tests the barycenter definition: `L(x0) = integral of L dv` for every
/// `L` in the dual cone.
pub fn is_barycenter(cone: &Arc<SemilatticeCone>, v: &Valuation, x0: usize) -> BarycenterCheck {
    assert_eq!(
        v.poset().as_ref(),
        cone.lattice().as_ref(),
        "valuation lives on the cone's lattice"
    );
    for functional in dual_cone_enumerate(cone) {
        let lhs = functional.apply(x0);
        let rhs = v.integrate(&functional.as_monotone_fn());
        if lhs != rhs {
            return BarycenterCheck {
                holds: false,
                certificate: Some(BarycenterCertificate {
                    functional,
                    lhs,
                    rhs,
                }),
            };
        }
    }
    BarycenterCheck {
        holds: true,
        certificate: None,
    }
}

/// The closed-form barycenter of a valuation on a semilattice cone: the
/// join of the elements of its support (the bottom for the zero valuation).
pub fn barycenter_support_sup(cone: &SemilatticeCone, v: &Valuation) -> usize {
    assert_eq!(
        v.poset().as_ref(),
        cone.lattice().as_ref(),
        "valuation lives on the cone's lattice"
    );
    let positive: ElemSet = cone
        .lattice()
        .elements()
        .filter(|&x| v.weight(x).is_positive())
        .collect();
    cone.join_set(positive)
}

/// Verifies that a barycenter map induces the cone structure back:
/// `beta(dirac(x) + dirac(y)) = x + y` for all pairs, and
/// `beta(a * dirac(x)) = a * x` for each sampled scalar (zero included).
pub fn induced_cone_check(
    cone: &Arc<SemilatticeCone>,
    beta: impl Fn(&Valuation) -> usize,
    scalar_samples: &[ExtRat],
) -> LawReport {
    let mut report = LawReport::new("induced cone structure");
    let lattice = cone.lattice();
    let mut scalars = vec![ExtRat::zero(), ExtRat::one(), ExtRat::from_integer(2)];
    scalars.extend(scalar_samples.iter().cloned());
    for x in 0..cone.len() {
        let dx = Valuation::dirac(lattice.clone(), x);
        for y in 0..cone.len() {
            let dy = Valuation::dirac(lattice.clone(), y);
            report.record(
                beta(&dx.add(&dy)) == cone.add(x, y),
                "beta(dirac(x) + dirac(y)) = x + y",
                || format!("x = {}, y = {}", lattice.name(x), lattice.name(y)),
            );
        }
        for a in &scalars {
            report.record(
                beta(&dx.scale(a)) == cone.scale(a, x),
                "beta(a * dirac(x)) = a * x",
                || format!("a = {a}, x = {}", lattice.name(x)),
            );
        }
    }
    report
}
