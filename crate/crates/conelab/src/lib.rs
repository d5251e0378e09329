//! Exact-arithmetic valuations and barycenters on finite semilattice cones.
//!
//! This crate makes a small corner of domain theory executable. Everything
//! is finite and exact: spaces are finite posets carrying their Alexandrov
//! topology, measures are continuous valuations with rational (or infinite)
//! weights, and cones are finite lattices under join. On that ground the
//! crate computes barycenters of valuations three independent ways and
//! checks the algebraic laws connecting them by brute force:
//!
//! * the *definitional* route tests a candidate point against every linear
//!   functional of the dual cone ([`cone::is_barycenter`]);
//! * the *closed form* takes the join of the support
//!   ([`cone::barycenter_support_sup`]);
//! * the *pipeline* pushes the valuation into the upper powercone, takes
//!   the barycenter there, and extracts the principal witness
//!   ([`barycenter::pipeline_barycenter`]).
//!
//! The three agree on every input, and the test suites verify that
//! agreement exhaustively on curated and randomized lattice corpora,
//! together with the supporting laws: modularity and inversion of
//! valuations, cone axioms, dual-cone completeness, linearity of the
//! powercone lift, principality of additive minimization, the monad laws,
//! and the Eilenberg-Moore squares of the barycenter map.
//!
//! The `conelab` command-line tool exposes the same operations over JSON
//! files; see the book under `book/` for a guided tour.

pub mod barycenter;
pub mod cone;
pub mod error;
pub mod files;
pub mod monad;
pub mod poset;
pub mod powercone;
pub mod random;
pub mod rational;
pub mod report;
pub mod valuation;

pub use error::{Error, Result};
pub use poset::{ElemSet, FinitePoset, MonotoneMap, UpSet};
pub use rational::ExtRat;
pub use report::{LawFailure, LawReport};
pub use valuation::{MonotoneFn, Valuation, ValuationTable};

pub use cone::{
    barycenter_support_sup, check_cone_axioms, dual_cone_enumerate, is_barycenter, is_convex,
    linear_separation_witness, DualFunctional, GeneralFunctional, SemilatticeCone,
};
pub use powercone::{principality_check, smyth_unit, ConvexUpset, PrincipalityVerdict, SmythCone};

pub use barycenter::{pipeline_barycenter, uniqueness_sweep, PipelineTrace};
pub use monad::{check_algebra, check_monad_laws, AlgebraMap, NestedValuation, SampleSpec};
