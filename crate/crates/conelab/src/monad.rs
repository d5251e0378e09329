//! The valuation monad on finite posets, and its algebras.
//!
//! On a finite poset every continuous valuation is a finite weighted sum of
//! Dirac valuations, so the monad can be handled entirely symbolically:
//!
//! * the functor sends a poset to its valuations and a monotone map to the
//!   push-forward ([`Valuation::push_forward`]);
//! * the unit sends a point to its Dirac valuation ([`unit()`]);
//! * the multiplication flattens a valuation of valuations
//!   `sum of b_j * dirac(v_j)` into `sum of b_j * v_j`
//!   ([`NestedValuation::multiply`]), which evaluates each open `U` to the
//!   integral of `v |-> v(U)`.
//!
//! [`check_monad_laws`] verifies the unit and associativity laws on seeded
//! samples in exact arithmetic, and [`check_algebra`] does the same for the
//! two Eilenberg-Moore squares of a candidate structure map
//! `valuations -> elements`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::SemilatticeCone;
use crate::poset::FinitePoset;
use crate::random::random_valuation_with;
use crate::rational::ExtRat;
use crate::report::LawReport;
use crate::valuation::Valuation;

/// The monad unit: the Dirac valuation at `x`.
pub fn unit(poset: &Arc<FinitePoset>, x: usize) -> Valuation {
    Valuation::dirac(poset.clone(), x)
}

/// A valuation on the valuations of a base poset, as a finite formal sum
/// `sum of coeff_j * dirac(inner_j)`.
#[derive(Clone, PartialEq, Eq)]
pub struct NestedValuation {
    poset: Arc<FinitePoset>,
    terms: Vec<(ExtRat, Valuation)>,
}

impl fmt::Debug for NestedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|(c, v)| format!("{c}*d[{v:?}]"))
            .collect();
        write!(f, "{}", if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}

impl NestedValuation {
    pub fn new(poset: Arc<FinitePoset>, terms: Vec<(ExtRat, Valuation)>) -> Self {
        for (_, v) in &terms {
            assert_eq!(
                v.poset().as_ref(),
                poset.as_ref(),
                "inner valuations live on the base poset"
            );
        }
        NestedValuation { poset, terms }
    }

    /// The unit one level up: `dirac(v)` as a nested valuation.
    pub fn dirac(v: &Valuation) -> Self {
        NestedValuation {
            poset: v.poset().clone(),
            terms: vec![(ExtRat::one(), v.clone())],
        }
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn terms(&self) -> &[(ExtRat, Valuation)] {
        &self.terms
    }

    /// The monad multiplication: the valuation
    /// `U |-> sum of coeff_j * inner_j(U)`, i.e. the integral of the
    /// evaluation map against this nested valuation.
    pub fn multiply(&self) -> Valuation {
        self.terms
            .iter()
            .fold(Valuation::zero(self.poset.clone()), |acc, (c, v)| {
                Valuation::scale_add(&ExtRat::one(), &acc, c, v)
            })
    }

    /// `c1*phi1 + c2*phi2` as formal sums.
    pub fn scale_add(
        c1: &ExtRat,
        phi1: &NestedValuation,
        c2: &ExtRat,
        phi2: &NestedValuation,
    ) -> NestedValuation {
        assert_eq!(phi1.poset.as_ref(), phi2.poset.as_ref());
        let mut terms = Vec::with_capacity(phi1.terms.len() + phi2.terms.len());
        for (c, v) in &phi1.terms {
            terms.push((c1 * c, v.clone()));
        }
        for (c, v) in &phi2.terms {
            terms.push((c2 * c, v.clone()));
        }
        NestedValuation {
            poset: phi1.poset.clone(),
            terms,
        }
    }

    /// Push-forward along the unit, one level down: turns a plain valuation
    /// `sum of a_i * dirac(x_i)` into the nested
    /// `sum of a_i * dirac(dirac(x_i))`.
    pub fn from_pushed_unit(v: &Valuation) -> Self {
        let poset = v.poset().clone();
        let terms = poset
            .elements()
            .filter(|&x| v.weight(x).is_positive())
            .map(|x| (v.weight(x).clone(), Valuation::dirac(poset.clone(), x)))
            .collect();
        NestedValuation { poset, terms }
    }
}

/// A triply nested valuation, for stating associativity.
#[derive(Clone, Debug)]
pub struct DoublyNestedValuation {
    poset: Arc<FinitePoset>,
    terms: Vec<(ExtRat, NestedValuation)>,
}

impl DoublyNestedValuation {
    pub fn new(poset: Arc<FinitePoset>, terms: Vec<(ExtRat, NestedValuation)>) -> Self {
        for (_, phi) in &terms {
            assert_eq!(phi.poset().as_ref(), poset.as_ref());
        }
        DoublyNestedValuation { poset, terms }
    }

    pub fn terms(&self) -> &[(ExtRat, NestedValuation)] {
        &self.terms
    }

    /// Multiplication at the outer level: mixes the nested valuations into
    /// one nested valuation (the formal sums concatenate with scaled
    /// coefficients).
    pub fn multiply_outer(&self) -> NestedValuation {
        let mut terms = Vec::new();
        for (c, phi) in &self.terms {
            for (b, v) in phi.terms() {
                terms.push((c * b, v.clone()));
            }
        }
        NestedValuation {
            poset: self.poset.clone(),
            terms,
        }
    }

    /// Push-forward of the inner multiplication: applies `multiply` under
    /// the outer formal sum.
    pub fn push_multiply(&self, multiply: &dyn Fn(&NestedValuation) -> Valuation) -> NestedValuation {
        let terms = self
            .terms
            .iter()
            .map(|(c, phi)| (c.clone(), multiply(phi)))
            .collect();
        NestedValuation {
            poset: self.poset.clone(),
            terms,
        }
    }
}

/// How many samples a seeded law check draws, and from which seed.
#[derive(Clone, Copy, Debug)]
pub struct SampleSpec {
    pub seed: u64,
    pub samples: usize,
}

impl SampleSpec {
    pub fn new(seed: u64, samples: usize) -> Self {
        SampleSpec { seed, samples }
    }
}

const MASS_BOUND: u64 = 8;

fn sample_coefficient(rng: &mut ChaCha8Rng) -> ExtRat {
    // The sampling grid for structural coefficients; infinity excluded.
    const GRID: [(u64, u64); 5] = [(0, 1), (1, 3), (1, 2), (1, 1), (2, 1)];
    let (n, d) = GRID[rng.random_range(0..GRID.len())];
    ExtRat::ratio(n, d)
}

fn sample_valuation(poset: &Arc<FinitePoset>, rng: &mut ChaCha8Rng) -> Valuation {
    random_valuation_with(poset, rng, &ExtRat::from_integer(MASS_BOUND), false)
}

fn sample_nested(poset: &Arc<FinitePoset>, rng: &mut ChaCha8Rng) -> NestedValuation {
    let width = rng.random_range(0..4);
    let terms = (0..width)
        .map(|_| (sample_coefficient(rng), sample_valuation(poset, rng)))
        .collect();
    NestedValuation::new(poset.clone(), terms)
}

fn sample_doubly_nested(poset: &Arc<FinitePoset>, rng: &mut ChaCha8Rng) -> DoublyNestedValuation {
    let width = rng.random_range(0..3);
    let terms = (0..width)
        .map(|_| (sample_coefficient(rng), sample_nested(poset, rng)))
        .collect();
    DoublyNestedValuation::new(poset.clone(), terms)
}

/// Checks the monad laws for the library's own multiplication on seeded
/// samples. All equalities are exact.
pub fn check_monad_laws(poset: &Arc<FinitePoset>, spec: &SampleSpec) -> LawReport {
    check_monad_laws_with(poset, spec, &|phi| phi.multiply())
}

/// As [`check_monad_laws`] but against a caller-supplied multiplication,
/// so that deliberately corrupted implementations can be shown to fail.
pub fn check_monad_laws_with(
    poset: &Arc<FinitePoset>,
    spec: &SampleSpec,
    multiply: &dyn Fn(&NestedValuation) -> Valuation,
) -> LawReport {
    let mut report = LawReport::new(format!("monad laws on {:?}", poset.as_ref()));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.samples {
        // Outer unit: multiplying dirac(v) gives back v.
        let v = sample_valuation(poset, &mut rng);
        report.record(
            multiply(&NestedValuation::dirac(&v)) == v,
            "multiply(dirac(v)) = v",
            || format!("v = {v:?}"),
        );

        // Inner unit: pushing v forward along the unit and multiplying
        // gives back v.
        let w = sample_valuation(poset, &mut rng);
        report.record(
            multiply(&NestedValuation::from_pushed_unit(&w)) == w,
            "multiply(push(unit)(v)) = v",
            || format!("v = {w:?}"),
        );

        // Associativity on a triply nested sample.
        let big = sample_doubly_nested(poset, &mut rng);
        let via_outer = multiply(&big.multiply_outer());
        let via_inner = multiply(&big.push_multiply(multiply));
        report.record(
            via_outer == via_inner,
            "multiply . multiply_outer = multiply . push(multiply)",
            || {
                format!(
                    "phi = {big:?}: outer route gives {via_outer:?}, inner route gives {via_inner:?}"
                )
            },
        );
    }
    report
}

/// A candidate Eilenberg-Moore structure map on a cone's lattice: a total
/// deterministic rule sending valuations to elements.
pub struct AlgebraMap {
    cone: Arc<SemilatticeCone>,
    rule: Box<dyn Fn(&Valuation) -> usize + Send + Sync>,
}

impl AlgebraMap {
    pub fn new(
        cone: Arc<SemilatticeCone>,
        rule: impl Fn(&Valuation) -> usize + Send + Sync + 'static,
    ) -> Self {
        AlgebraMap {
            cone,
            rule: Box::new(rule),
        }
    }

    /// The support-sup barycenter map, the canonical algebra on a
    /// semilattice cone.
    pub fn support_sup(cone: Arc<SemilatticeCone>) -> Self {
        let inner = cone.clone();
        AlgebraMap::new(cone, move |v| crate::cone::barycenter_support_sup(&inner, v))
    }

    pub fn cone(&self) -> &Arc<SemilatticeCone> {
        &self.cone
    }

    pub fn apply(&self, v: &Valuation) -> usize {
        (self.rule)(v)
    }
}

/// Checks the two Eilenberg-Moore squares for a candidate structure map
/// `beta` in exact arithmetic:
///
/// * unit: `beta(dirac(x)) = x` for every element (exhaustive);
/// * multiplication: `beta(multiply(phi)) = beta(push beta(phi))` on
///   seeded nested samples, where `push beta` replaces each inner valuation
///   by the point `beta` sends it to.
pub fn check_algebra(beta: &AlgebraMap, spec: &SampleSpec) -> LawReport {
    let cone = beta.cone();
    let lattice = cone.lattice();
    let mut report = LawReport::new(format!("algebra laws on {:?}", lattice.as_ref()));
    for x in lattice.elements() {
        report.record(
            beta.apply(&Valuation::dirac(lattice.clone(), x)) == x,
            "beta(dirac(x)) = x",
            || format!("x = {}", lattice.name(x)),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.samples {
        let phi = sample_nested(lattice, &mut rng);
        let via_multiply = beta.apply(&phi.multiply());
        // Push phi forward along beta: each inner valuation collapses to a
        // Dirac at its image point.
        let pushed = phi
            .terms()
            .iter()
            .fold(Valuation::zero(lattice.clone()), |acc, (c, v)| {
                let image = Valuation::dirac(lattice.clone(), beta.apply(v));
                Valuation::scale_add(&ExtRat::one(), &acc, c, &image)
            });
        let via_push = beta.apply(&pushed);
        report.record(
            via_multiply == via_push,
            "beta(multiply(phi)) = beta(push beta(phi))",
            || {
                format!(
                    "phi = {phi:?}: multiply route gives {}, push route gives {}",
                    lattice.name(via_multiply),
                    lattice.name(via_push)
                )
            },
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::MonotoneMap;

    fn m2() -> Arc<FinitePoset> {
        Arc::new(FinitePoset::diamond(2))
    }

    fn m2_cone() -> Arc<SemilatticeCone> {
        Arc::new(SemilatticeCone::new(m2()).unwrap())
    }

    #[test]
    fn unit_is_dirac() {
        let p = m2();
        let a = p.index_of("a").unwrap();
        assert_eq!(unit(&p, a), Valuation::dirac(p.clone(), a));
        let c = Arc::new(FinitePoset::chain(3));
        let u = c.upset(c.carrier()).unwrap();
        assert_eq!(unit(&c, 0).evaluate(u), ExtRat::one());
    }

    #[test]
    fn pushforward_commutes_with_unit() {
        let p = m2();
        let c = Arc::new(FinitePoset::chain(3));
        let f = MonotoneMap::new(p.clone(), c.clone(), vec![0, 1, 1, 2]).unwrap();
        for x in p.elements() {
            assert_eq!(unit(&p, x).push_forward(&f), unit(&c, f.apply(x)));
        }
    }

    #[test]
    fn pushforward_is_functorial() {
        let p = m2();
        let c = Arc::new(FinitePoset::chain(3));
        let two = Arc::new(FinitePoset::chain(2));
        let f = MonotoneMap::new(p.clone(), c.clone(), vec![0, 1, 1, 2]).unwrap();
        let g = MonotoneMap::new(c.clone(), two.clone(), vec![0, 0, 1]).unwrap();
        let a = p.index_of("a").unwrap();
        let v = Valuation::dirac(p.clone(), a)
            .add(&Valuation::dirac(p.clone(), 0).scale(&ExtRat::ratio(1, 2)));
        assert_eq!(v.push_forward(&MonotoneMap::identity(p.clone())), v);
        assert_eq!(
            v.push_forward(&f.then(&g)),
            v.push_forward(&f).push_forward(&g)
        );
        assert_eq!(v.push_forward(&f).total_mass(), v.total_mass());
    }

    #[test]
    fn multiply_mixes_the_inner_valuations() {
        let p = m2();
        let (a, b) = (p.index_of("a").unwrap(), p.index_of("b").unwrap());
        let half = ExtRat::ratio(1, 2);
        let phi = NestedValuation::new(
            p.clone(),
            vec![
                (half.clone(), Valuation::dirac(p.clone(), a)),
                (half.clone(), Valuation::dirac(p.clone(), b)),
            ],
        );
        let expected = Valuation::scale_add(
            &half,
            &Valuation::dirac(p.clone(), a),
            &half,
            &Valuation::dirac(p.clone(), b),
        );
        assert_eq!(phi.multiply(), expected);

        // dirac and zero-weight cases.
        let v = expected;
        assert_eq!(NestedValuation::dirac(&v).multiply(), v);
        let zeroed = NestedValuation::new(p.clone(), vec![(ExtRat::zero(), v.clone())]);
        assert_eq!(zeroed.multiply(), Valuation::zero(p.clone()));
    }

    #[test]
    fn multiply_is_linear_in_the_nested_argument() {
        let p = m2();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let phi1 = sample_nested(&p, &mut rng);
            let phi2 = sample_nested(&p, &mut rng);
            let c1 = sample_coefficient(&mut rng);
            let c2 = sample_coefficient(&mut rng);
            let combined = NestedValuation::scale_add(&c1, &phi1, &c2, &phi2);
            assert_eq!(
                combined.multiply(),
                Valuation::scale_add(&c1, &phi1.multiply(), &c2, &phi2.multiply())
            );
        }
    }

    #[test]
    fn monad_laws_hold_on_seeded_samples() {
        let report = check_monad_laws(&m2(), &SampleSpec::new(2024, 200));
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn corrupted_multiply_fails_associativity() {
        // Dropping the first term of the formal sum breaks the laws.
        let corrupted = |phi: &NestedValuation| -> Valuation {
            let trimmed = NestedValuation::new(
                phi.poset().clone(),
                phi.terms().iter().skip(1).cloned().collect(),
            );
            trimmed.multiply()
        };
        let report = check_monad_laws_with(&m2(), &SampleSpec::new(7, 100), &corrupted);
        assert!(!report.passed());
        assert!(report
            .failures
            .iter()
            .any(|f| f.law.contains("multiply . multiply_outer")));
    }

    #[test]
    fn support_sup_is_an_algebra() {
        let beta = AlgebraMap::support_sup(m2_cone());
        let report = check_algebra(&beta, &SampleSpec::new(5, 200));
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn constant_map_fails_the_unit_square() {
        let cone = m2_cone();
        let top = cone.top();
        let beta = AlgebraMap::new(cone.clone(), move |_| top);
        let report = check_algebra(&beta, &SampleSpec::new(5, 10));
        assert!(!report.passed());
        let failure = report
            .failures
            .iter()
            .find(|f| f.law == "beta(dirac(x)) = x")
            .expect("unit square must fail");
        assert!(failure.witness.contains("bot"));
    }
}
