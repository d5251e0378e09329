//! Continuous valuations on finite posets.
//!
//! A continuous valuation assigns to every open set a value in `ExtRat`,
//! strictly (`v({}) = 0`), monotonically, and modularly
//! (`v(U u V) + v(U n V) = v(U) + v(V)`). On a finite poset every such
//! assignment is induced by a nonnegative weight per element, with
//! `v(U) = sum of the weights inside U`, so [`Valuation`] stores the weight
//! vector and [`ValuationTable`] is the induced set-function view. The two
//! views are interconvertible: [`Valuation::to_table`] sums weights,
//! [`ValuationTable::to_weights`] inverts over principal upsets.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::{ElemSet, FinitePoset, MonotoneMap, UpSet};
use crate::rational::ExtRat;
use crate::report::LawReport;

/// A continuous valuation, stored as one weight per element.
#[derive(Clone, PartialEq, Eq)]
pub struct Valuation {
    poset: Arc<FinitePoset>,
    weights: Vec<ExtRat>,
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .poset
            .elements()
            .filter(|&x| self.weights[x].is_positive())
            .map(|x| format!("{}*d({})", self.weights[x], self.poset.name(x)))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Valuation {
    pub fn from_weights(poset: Arc<FinitePoset>, weights: Vec<ExtRat>) -> Self {
        assert_eq!(weights.len(), poset.len(), "one weight per element");
        Valuation { poset, weights }
    }

    /// The zero valuation.
    pub fn zero(poset: Arc<FinitePoset>) -> Self {
        let weights = vec![ExtRat::zero(); poset.len()];
        Valuation { poset, weights }
    }

    /// The Dirac valuation at `x`: `U |-> 1` if `x` is in `U`, else `0`.
    pub fn dirac(poset: Arc<FinitePoset>, x: usize) -> Self {
        assert!(x < poset.len(), "element out of range");
        let mut weights = vec![ExtRat::zero(); poset.len()];
        weights[x] = ExtRat::one();
        Valuation { poset, weights }
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn weights(&self) -> &[ExtRat] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> &ExtRat {
        &self.weights[x]
    }

    /// `c1*v1 + c2*v2`, weightwise.
    pub fn scale_add(c1: &ExtRat, v1: &Valuation, c2: &ExtRat, v2: &Valuation) -> Valuation {
        assert_eq!(
            v1.poset.as_ref(),
            v2.poset.as_ref(),
            "valuations live on the same poset"
        );
        let weights = v1
            .weights
            .iter()
            .zip(&v2.weights)
            .map(|(a, b)| &(c1 * a) + &(c2 * b))
            .collect();
        Valuation {
            poset: v1.poset.clone(),
            weights,
        }
    }

    pub fn add(&self, other: &Valuation) -> Valuation {
        Valuation::scale_add(&ExtRat::one(), self, &ExtRat::one(), other)
    }

    pub fn scale(&self, c: &ExtRat) -> Valuation {
        let weights = self.weights.iter().map(|w| c * w).collect();
        Valuation {
            poset: self.poset.clone(),
            weights,
        }
    }

    /// The value on an open set: the sum of the weights of its members.
    pub fn evaluate(&self, u: UpSet) -> ExtRat {
        u.members().iter().map(|x| &self.weights[x]).sum()
    }

    pub fn total_mass(&self) -> ExtRat {
        self.weights.iter().sum()
    }

    /// The induced open-set function, tabulated over all upsets in
    /// canonical order.
    pub fn to_table(&self) -> Result<ValuationTable> {
        let upsets = self.poset.enumerate_upsets()?;
        let values = upsets.iter().map(|&u| self.evaluate(u)).collect();
        Ok(ValuationTable {
            poset: self.poset.clone(),
            upsets,
            values,
        })
    }

    /// The integral of a lower semicontinuous function: the weighted sum of
    /// its values.
    pub fn integrate(&self, h: &MonotoneFn) -> ExtRat {
        assert_eq!(
            h.poset.as_ref(),
            self.poset.as_ref(),
            "integrand lives on the valuation's poset"
        );
        self.weights
            .iter()
            .zip(&h.values)
            .map(|(w, v)| w * v)
            .sum()
    }

    /// The image valuation along a monotone map: weights push forward, so
    /// the result satisfies `f[v](V) = v(f^-1(V))` on every open `V`.
    pub fn push_forward(&self, f: &MonotoneMap) -> Valuation {
        assert_eq!(
            f.source().as_ref(),
            self.poset.as_ref(),
            "map must start at the valuation's poset"
        );
        let mut weights = vec![ExtRat::zero(); f.target().len()];
        for x in self.poset.elements() {
            let y = f.apply(x);
            weights[y] = &weights[y] + &self.weights[x];
        }
        Valuation {
            poset: f.target().clone(),
            weights,
        }
    }

    /// The stochastic order: `self <= other` iff `self(U) <= other(U)` on
    /// every open `U`. Errors only if the upset enumeration overflows its
    /// bound.
    pub fn stochastic_leq(&self, other: &Valuation) -> Result<bool> {
        Ok(self.stochastic_leq_witness(other)?.is_none())
    }

    /// As [`Valuation::stochastic_leq`], returning a witnessing open on
    /// which the comparison fails.
    pub fn stochastic_leq_witness(&self, other: &Valuation) -> Result<Option<UpSet>> {
        assert_eq!(
            self.poset.as_ref(),
            other.poset.as_ref(),
            "valuations live on the same poset"
        );
        for u in self.poset.enumerate_upsets()? {
            if self.evaluate(u) > other.evaluate(u) {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }

    /// Membership in the subbasic weak-topology open `[U > r]`.
    pub fn in_subbasic_open(&self, u: UpSet, r: &ExtRat) -> bool {
        assert!(r.is_finite(), "subbasic opens use finite thresholds");
        self.evaluate(u) > *r
    }

    /// Membership in `[Q >= r]`: `v(U) >= r` for every open neighborhood
    /// `U` of `Q`. On a finite poset the smallest open containing an upset
    /// `Q` is `Q` itself, so this reduces to `v(Q) >= r`.
    pub fn in_qgeq(&self, q: UpSet, r: &ExtRat) -> bool {
        self.evaluate(q) >= *r
    }

    /// The support: the complement of the largest open with value zero,
    /// which is the downward closure of the positive-weight elements.
    pub fn support(&self) -> ElemSet {
        let positive: ElemSet = self
            .poset
            .elements()
            .filter(|&x| self.weights[x].is_positive())
            .collect();
        self.poset.down_closure(positive)
    }
}

/// A valuation presented as a function on all upsets (canonical order).
#[derive(Clone)]
pub struct ValuationTable {
    poset: Arc<FinitePoset>,
    upsets: Vec<UpSet>,
    values: Vec<ExtRat>,
}

impl ValuationTable {
    /// Tabulates `value` over all upsets of `poset`.
    pub fn from_fn(
        poset: Arc<FinitePoset>,
        value: impl Fn(UpSet) -> ExtRat,
    ) -> Result<ValuationTable> {
        let upsets = poset.enumerate_upsets()?;
        let values = upsets.iter().map(|&u| value(u)).collect();
        Ok(ValuationTable {
            poset,
            upsets,
            values,
        })
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    /// The tabulated upsets, in canonical order.
    pub fn upsets(&self) -> &[UpSet] {
        &self.upsets
    }

    pub fn value_at(&self, index: usize) -> &ExtRat {
        &self.values[index]
    }

    pub fn value_of(&self, u: UpSet) -> &ExtRat {
        let i = self
            .upsets
            .iter()
            .position(|&v| v == u)
            .expect("upset belongs to this table");
        &self.values[i]
    }

    /// Checks strictness, monotonicity and modularity over *all* pairs of
    /// upsets, reporting each violation with its witnessing pair.
    pub fn check(&self) -> LawReport {
        let mut report = LawReport::new(format!(
            "valuation table on {}",
            self.poset.set_to_string(self.poset.carrier())
        ));
        let empty_index = self
            .upsets
            .iter()
            .position(|u| u.is_empty())
            .expect("the empty set is an upset");
        report.record(
            self.values[empty_index].is_zero(),
            "strictness: v({}) = 0",
            || format!("v({{}}) = {}", self.values[empty_index]),
        );
        for i in 0..self.upsets.len() {
            for j in 0..self.upsets.len() {
                if i == j {
                    continue;
                }
                let (u, v) = (self.upsets[i], self.upsets[j]);
                if u.members().is_subset(v.members()) {
                    report.record(
                        self.values[i] <= self.values[j],
                        "monotonicity: U <= V implies v(U) <= v(V)",
                        || {
                            format!(
                                "U = {}, V = {}: v(U) = {}, v(V) = {}",
                                self.poset.set_to_string(u.members()),
                                self.poset.set_to_string(v.members()),
                                self.values[i],
                                self.values[j]
                            )
                        },
                    );
                }
                if i < j {
                    let union = self.value_of(u.union(v));
                    let inter = self.value_of(u.intersection(v));
                    report.record(
                        union + inter == &self.values[i] + &self.values[j],
                        "modularity: v(U u V) + v(U n V) = v(U) + v(V)",
                        || {
                            format!(
                                "U = {}, V = {}: {} + {} != {} + {}",
                                self.poset.set_to_string(u.members()),
                                self.poset.set_to_string(v.members()),
                                union,
                                inter,
                                self.values[i],
                                self.values[j]
                            )
                        },
                    );
                }
            }
        }
        report
    }

    /// Recovers the weight vector by inversion over principal upsets:
    /// the weight of `x` is `v(up x) - v(up x minus x)`.
    ///
    /// Defined for finite-valued tables that are induced by nonnegative
    /// weights; the recovered weights are verified against the whole table
    /// before being returned.
    pub fn to_weights(&self) -> Result<Valuation> {
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InfiniteValue {
                upset: self.poset.set_to_string(self.upsets[i].members()),
            });
        }
        let mut weights = Vec::with_capacity(self.poset.len());
        for x in self.poset.elements() {
            let up = self.poset.principal_upset(x);
            let strict = self
                .poset
                .upset(up.members().difference(ElemSet::singleton(x)))
                .expect("principal upset minus its minimum is an upset");
            let diff = self.value_of(up).checked_sub(self.value_of(strict));
            match diff {
                Some(w) => weights.push(w),
                None => {
                    return Err(Error::NegativeWeight {
                        reason: format!(
                            "the weight of `{}` would be v({}) - v({}) = {} - {} < 0",
                            self.poset.name(x),
                            self.poset.set_to_string(up.members()),
                            self.poset.set_to_string(strict.members()),
                            self.value_of(up),
                            self.value_of(strict)
                        ),
                    })
                }
            }
        }
        let valuation = Valuation::from_weights(self.poset.clone(), weights);
        // A table that is not modular can survive inversion with nonnegative
        // weights; the round trip over every upset rules that out.
        for (i, &u) in self.upsets.iter().enumerate() {
            if valuation.evaluate(u) != self.values[i] {
                return Err(Error::NegativeWeight {
                    reason: format!(
                        "no weight vector induces this table: on {} the inverted weights \
                         give {} but the table says {}",
                        self.poset.set_to_string(u.members()),
                        valuation.evaluate(u),
                        self.values[i]
                    ),
                });
            }
        }
        Ok(valuation)
    }
}

/// A monotone (equivalently, lower semicontinuous) function from a finite
/// poset to `ExtRat`; the integrands of this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneFn {
    poset: Arc<FinitePoset>,
    values: Vec<ExtRat>,
}

impl MonotoneFn {
    pub fn new(poset: Arc<FinitePoset>, values: Vec<ExtRat>) -> Result<Self> {
        assert_eq!(values.len(), poset.len(), "one value per element");
        for x in poset.elements() {
            for y in poset.elements() {
                if poset.leq(x, y) && values[x] > values[y] {
                    return Err(Error::NotMonotone {
                        x: poset.name(x).into(),
                        y: poset.name(y).into(),
                        fx: values[x].to_string(),
                        fy: values[y].to_string(),
                    });
                }
            }
        }
        Ok(MonotoneFn { poset, values })
    }

    /// The characteristic function of an open set.
    pub fn characteristic(poset: Arc<FinitePoset>, u: UpSet) -> Self {
        let values = poset
            .elements()
            .map(|x| {
                if u.contains(x) {
                    ExtRat::one()
                } else {
                    ExtRat::zero()
                }
            })
            .collect();
        MonotoneFn { poset, values }
    }

    pub fn constant(poset: Arc<FinitePoset>, value: ExtRat) -> Self {
        let values = vec![value; poset.len()];
        MonotoneFn { poset, values }
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn value(&self, x: usize) -> &ExtRat {
        &self.values[x]
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.values
    }

    /// `c1*h1 + c2*h2`, pointwise. Monotone functions are closed under
    /// nonnegative combinations.
    pub fn scale_add(c1: &ExtRat, h1: &MonotoneFn, c2: &ExtRat, h2: &MonotoneFn) -> MonotoneFn {
        assert_eq!(h1.poset.as_ref(), h2.poset.as_ref());
        let values = h1
            .values
            .iter()
            .zip(&h2.values)
            .map(|(a, b)| &(c1 * a) + &(c2 * b))
            .collect();
        MonotoneFn {
            poset: h1.poset.clone(),
            values,
        }
    }

    /// `self . f`: precomposition with a monotone map into this function's
    /// poset.
    pub fn pullback(&self, f: &MonotoneMap) -> MonotoneFn {
        assert_eq!(f.target().as_ref(), self.poset.as_ref());
        let values = (0..f.source().len())
            .map(|x| self.values[f.apply(x)].clone())
            .collect();
        MonotoneFn {
            poset: f.source().clone(),
            values,
        }
    }

    /// `{x | h(x) >= t}`; an upset because `h` is monotone.
    pub fn superlevel(&self, t: &ExtRat) -> UpSet {
        let set: ElemSet = self
            .poset
            .elements()
            .filter(|&x| self.values[x] >= *t)
            .collect();
        self.poset
            .upset(set)
            .expect("superlevel sets of monotone functions are upsets")
    }
}
