//! The powercone barycenter pipeline.
//!
//! Every valuation on a finite semilattice cone has a unique barycenter,
//! and it can be computed without guessing by going through the upper
//! powercone:
//!
//! 1. build the powercone `S(C)` and its own cone structure;
//! 2. push the valuation forward along the unit `x |-> up x`;
//! 3. take the barycenter of the pushed valuation *in the powercone*
//!    (support-sup there, i.e. the intersection of the supported upsets);
//! 4. the result is a principal upset `up x`, and its generator `x` is the
//!    barycenter downstairs.
//!
//! [`pipeline_barycenter`] runs those steps, returns the witness together
//! with a full [`PipelineTrace`], and cross-checks the result against both
//! the closed form ([`crate::cone::barycenter_support_sup`]) and the
//! definitional test ([`crate::cone::is_barycenter`]) before returning.
//! Step 4 failing to be principal is not a recoverable state: it would
//! falsify the construction, so it surfaces as [`Error::NonPrincipal`] and
//! the suites treat it as a hard failure.

use std::sync::Arc;

use crate::cone::{barycenter_support_sup, is_barycenter, SemilatticeCone};
use crate::error::{Error, Result};
use crate::poset::UpSet;
use crate::powercone::{principality_check, PrincipalityVerdict, SmythCone};
use crate::rational::ExtRat;
use crate::report::LawReport;
use crate::valuation::Valuation;

/// Everything the pipeline computed on the way to a barycenter.
#[derive(Clone, Debug)]
pub struct PipelineTrace {
    /// The input valuation on the base lattice.
    pub input: Valuation,
    /// Its image on the powercone lattice under the unit.
    pub pushed: Valuation,
    /// The powercone barycenter of the pushed valuation, as a member set
    /// of the base lattice.
    pub alpha_result: UpSet,
    /// The generator when `alpha_result` is principal.
    pub witness: Option<usize>,
}

impl PipelineTrace {
    /// A JSON rendering with all elements referred to by name.
    pub fn to_json(&self) -> serde_json::Value {
        let base = self.input.poset();
        let smyth = self.pushed.poset();
        let weight_map = |v: &Valuation| -> serde_json::Value {
            let mut map = serde_json::Map::new();
            for x in v.poset().elements() {
                if v.weight(x).is_positive() {
                    map.insert(
                        v.poset().name(x).to_string(),
                        serde_json::Value::String(v.weight(x).to_string()),
                    );
                }
            }
            serde_json::Value::Object(map)
        };
        let _ = smyth;
        serde_json::json!({
            "input": weight_map(&self.input),
            "pushed": weight_map(&self.pushed),
            "alpha_result": self
                .alpha_result
                .members()
                .iter()
                .map(|x| base.name(x).to_string())
                .collect::<Vec<_>>(),
            "witness": self.witness.map(|x| base.name(x).to_string()),
        })
    }
}

/// Runs the powercone pipeline on `v` and returns the barycenter with its
/// trace. The powercone is built on the fly; use
/// [`pipeline_barycenter_with`] to reuse one across many valuations.
pub fn pipeline_barycenter(
    cone: &Arc<SemilatticeCone>,
    v: &Valuation,
) -> Result<(usize, PipelineTrace)> {
    let smyth = SmythCone::new(cone.clone())?;
    pipeline_barycenter_with(&smyth, v)
}

/// As [`pipeline_barycenter`], over a prebuilt powercone.
pub fn pipeline_barycenter_with(
    smyth: &SmythCone,
    v: &Valuation,
) -> Result<(usize, PipelineTrace)> {
    let base = smyth.base();
    assert_eq!(
        v.poset().as_ref(),
        base.lattice().as_ref(),
        "valuation lives on the cone's lattice"
    );
    let pushed = v.push_forward(&smyth.unit_map());
    let alpha_index = barycenter_support_sup(smyth.cone(), &pushed);
    let alpha_result = base
        .lattice()
        .upset(smyth.element_set(alpha_index))
        .expect("powercone elements are upsets");

    let witness = match principality_check(base, &alpha_result) {
        PrincipalityVerdict::Principal { witness } => witness,
        PrincipalityVerdict::NotLinear { .. } => {
            let trace = PipelineTrace {
                input: v.clone(),
                pushed,
                alpha_result,
                witness: None,
            };
            return Err(Error::NonPrincipal {
                set: base.lattice().set_to_string(alpha_result.members()),
                trace: Box::new(trace),
            });
        }
    };

    // Cross-checks: the witness generates the powercone barycenter, passes
    // the definitional test, and agrees with the closed form.
    assert_eq!(
        base.lattice().principal_upset(witness),
        alpha_result,
        "the witness generates the powercone barycenter"
    );
    assert!(
        is_barycenter(base, v, witness).holds,
        "the pipeline result satisfies the barycenter definition"
    );
    assert_eq!(
        witness,
        barycenter_support_sup(base, v),
        "the pipeline agrees with the closed form"
    );

    let trace = PipelineTrace {
        input: v.clone(),
        pushed,
        alpha_result,
        witness: Some(witness),
    };
    Ok((witness, trace))
}

/// Pointwise check of the continuity identity for the barycenter map: for
/// each sampled valuation, its barycenter lands in `U` exactly when its
/// powercone barycenter lies in the box over `U`.
pub fn beta_continuity_check(
    cone: &Arc<SemilatticeCone>,
    u: UpSet,
    samples: &[Valuation],
) -> Result<LawReport> {
    let smyth = SmythCone::new(cone.clone())?;
    let mut report = LawReport::new(format!(
        "continuity identity at U = {}",
        cone.lattice().set_to_string(u.members())
    ));
    for v in samples {
        let (beta, trace) = pipeline_barycenter_with(&smyth, v)?;
        let in_u = u.contains(beta);
        let in_box = trace.alpha_result.members().is_subset(u.members());
        report.record(
            in_u == in_box,
            "beta(v) in U iff alpha(push(v)) in box U",
            || {
                format!(
                    "v = {v:?}: beta = {}, alpha = {}",
                    cone.lattice().name(beta),
                    cone.lattice().set_to_string(trace.alpha_result.members())
                )
            },
        );
    }
    Ok(report)
}

/// Sweeps every valuation whose weights come from `grid` and asserts that
/// exactly one element passes the definitional barycenter test, namely the
/// pipeline result. Returns the report and the number of valuations swept.
pub fn uniqueness_sweep(
    cone: &Arc<SemilatticeCone>,
    grid: &[ExtRat],
) -> Result<(LawReport, usize)> {
    assert!(!grid.is_empty(), "the weight grid must be nonempty");
    let smyth = SmythCone::new(cone.clone())?;
    let lattice = cone.lattice();
    let n = lattice.len();
    let mut report = LawReport::new(format!(
        "barycenter uniqueness over a {}-value grid on {:?}",
        grid.len(),
        lattice.as_ref()
    ));
    let mut indices = vec![0usize; n];
    let mut swept = 0usize;
    loop {
        let weights: Vec<ExtRat> = indices.iter().map(|&i| grid[i].clone()).collect();
        let v = Valuation::from_weights(lattice.clone(), weights);
        let (beta, _) = pipeline_barycenter_with(&smyth, &v)?;
        let passing: Vec<usize> = lattice
            .elements()
            .filter(|&x| is_barycenter(cone, &v, x).holds)
            .collect();
        report.record(
            passing == vec![beta],
            "exactly the pipeline result passes the definitional test",
            || {
                let names: Vec<&str> = passing.iter().map(|&x| lattice.name(x)).collect();
                format!(
                    "v = {v:?}: definitional test passes at {{{}}}, pipeline gives {}",
                    names.join(","),
                    lattice.name(beta)
                )
            },
        );
        swept += 1;

        // Next tuple in the grid product.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok((report, swept));
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinitePoset;

    fn m2_cone() -> Arc<SemilatticeCone> {
        Arc::new(SemilatticeCone::new(Arc::new(FinitePoset::diamond(2))).unwrap())
    }

    fn elem(cone: &SemilatticeCone, name: &str) -> usize {
        cone.lattice().index_of(name).unwrap()
    }

    #[test]
    fn pipeline_on_the_two_atom_valuation() {
        let cone = m2_cone();
        let lattice = cone.lattice().clone();
        let (a, b, top) = (elem(&cone, "a"), elem(&cone, "b"), elem(&cone, "top"));
        let v = Valuation::dirac(lattice.clone(), a).add(&Valuation::dirac(lattice.clone(), b));
        let smyth = SmythCone::new(cone.clone()).unwrap();
        let (beta, trace) = pipeline_barycenter_with(&smyth, &v).unwrap();
        assert_eq!(beta, top);
        // The pushed valuation puts weight 1 on up a and on up b.
        assert_eq!(trace.pushed.weight(smyth.unit(a)), &ExtRat::one());
        assert_eq!(trace.pushed.weight(smyth.unit(b)), &ExtRat::one());
        assert_eq!(trace.pushed.total_mass(), ExtRat::from_integer(2));
        // The powercone barycenter is {top}.
        assert_eq!(
            trace.alpha_result.members(),
            crate::poset::ElemSet::singleton(top)
        );
        assert_eq!(trace.witness, Some(top));
    }

    #[test]
    fn pipeline_on_diracs_returns_the_point() {
        let cone = m2_cone();
        let lattice = cone.lattice().clone();
        let smyth = SmythCone::new(cone.clone()).unwrap();
        for x in lattice.elements() {
            let (beta, trace) =
                pipeline_barycenter_with(&smyth, &Valuation::dirac(lattice.clone(), x)).unwrap();
            assert_eq!(beta, x);
            assert_eq!(trace.alpha_result, lattice.principal_upset(x));
        }
    }

    #[test]
    fn pipeline_on_positive_combinations_joins_the_points() {
        let cone = m2_cone();
        let lattice = cone.lattice().clone();
        let (a, b) = (elem(&cone, "a"), elem(&cone, "b"));
        let v = Valuation::scale_add(
            &ExtRat::ratio(1, 2),
            &Valuation::dirac(lattice.clone(), a),
            &ExtRat::from_integer(3),
            &Valuation::dirac(lattice.clone(), b),
        );
        let (beta, _) = pipeline_barycenter(&cone, &v).unwrap();
        assert_eq!(beta, cone.add(a, b));
    }

    #[test]
    fn trace_serializes_with_names() {
        let cone = m2_cone();
        let lattice = cone.lattice().clone();
        let a = elem(&cone, "a");
        let (_, trace) =
            pipeline_barycenter(&cone, &Valuation::dirac(lattice.clone(), a)).unwrap();
        let json = trace.to_json();
        assert_eq!(json["witness"], "a");
        assert_eq!(json["input"]["a"], "1");
    }

    #[test]
    fn continuity_identity_on_the_diamond() {
        let cone = m2_cone();
        let lattice = cone.lattice().clone();
        let (a, b, top) = (elem(&cone, "a"), elem(&cone, "b"), elem(&cone, "top"));
        let u = lattice.upset(crate::poset::ElemSet::singleton(top)).unwrap();
        let samples = vec![
            Valuation::dirac(lattice.clone(), a).add(&Valuation::dirac(lattice.clone(), b)),
            Valuation::dirac(lattice.clone(), a),
            Valuation::zero(lattice.clone()),
        ];
        let report = beta_continuity_check(&cone, u, &samples).unwrap();
        assert!(report.passed(), "{report}");
        // The whole carrier contains every barycenter and every box.
        let whole = lattice.upset(lattice.carrier()).unwrap();
        let report = beta_continuity_check(&cone, whole, &samples).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn uniqueness_on_the_zero_one_grid() {
        let cone = m2_cone();
        let (report, swept) =
            uniqueness_sweep(&cone, &[ExtRat::zero(), ExtRat::one()]).unwrap();
        assert_eq!(swept, 16);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn uniqueness_on_the_three_chain() {
        let cone = Arc::new(SemilatticeCone::new(Arc::new(FinitePoset::chain(3))).unwrap());
        let grid = [ExtRat::zero(), ExtRat::one(), ExtRat::from_integer(2)];
        let (report, swept) = uniqueness_sweep(&cone, &grid).unwrap();
        assert_eq!(swept, 27);
        assert!(report.passed(), "{report}");
    }
}
