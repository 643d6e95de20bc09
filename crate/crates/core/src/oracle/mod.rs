//! Exhaustive small-model checking.
//!
//! Every model within [`EnumerationBounds`] is generated, the propositions
//! are evaluated on the reference transcriptions, and, optionally, every
//! engine operation is compared with its transcription. One pass serves all
//! of these at once.

mod differential;
pub mod enumerate;
mod props;
pub mod reference;

use serde::Serialize;

pub use differential::Mismatch;
pub use enumerate::{
    enumerate_complete_models, organisation_shapes, state_spaces, EnumerationBounds, OrgShape, RankRegime, StateSpace,
};
pub use props::PropertyId;
pub use reference::RefModel;

use crate::error::EngineError;
use crate::format::RawCaseBase;
use crate::model::{CaseBase, CaseIx};
use props::{check_model, ModelContext};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub model: RawCaseBase,
    /// Case ids, in the order the property quantifies them.
    pub witnesses: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum VerdictStatus {
    Holds,
    Counterexample(Box<Counterexample>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyVerdict {
    pub property: PropertyId,
    pub hypotheses: bool,
    pub models_checked: u64,
    /// Models on which the property's hypotheses held.
    pub models_in_scope: u64,
    pub counterexamples: u64,
    pub status: VerdictStatus,
}

impl PropertyVerdict {
    pub fn holds(&self) -> bool {
        matches!(self.status, VerdictStatus::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.status {
            VerdictStatus::Counterexample(c) => Some(c),
            VerdictStatus::Holds => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Apply the property's model-level hypotheses.
    pub hypotheses: bool,
    /// Stop at the first counterexample.
    pub stop_at_first: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { hypotheses: true, stop_at_first: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialReport {
    pub models: u64,
    pub comparisons: u64,
    pub mismatched_models: u64,
    pub first: Option<(RawCaseBase, Mismatch)>,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub bounds: EnumerationBounds,
    pub models: u64,
    pub verdicts: Vec<PropertyVerdict>,
    pub differential: Option<DifferentialReport>,
}

impl SweepReport {
    pub fn verdict(&self, property: PropertyId, hypotheses: bool) -> Option<&PropertyVerdict> {
        self.verdicts
            .iter()
            .find(|v| v.property == property && v.hypotheses == hypotheses)
    }
}

/// What a sweep evaluates on each model.
#[derive(Clone, Debug)]
pub struct SweepPlan {
    /// Properties with the hypothesis setting to check them under.
    pub checks: Vec<(PropertyId, bool)>,
    pub differential: bool,
    pub stop_at_first: bool,
}

impl SweepPlan {
    /// Every property under its hypotheses, `prop_unambiguous` also without,
    /// and the differential comparison.
    pub fn full() -> Self {
        let mut checks: Vec<_> = PropertyId::ALL.iter().map(|&p| (p, true)).collect();
        checks.push((PropertyId::Unambiguous, false));
        SweepPlan { checks, differential: true, stop_at_first: false }
    }
}

struct Tally {
    verdict: PropertyVerdict,
}

/// Runs `plan` over every model within `bounds`.
pub fn sweep(bounds: &EnumerationBounds, plan: &SweepPlan) -> Result<SweepReport, EngineError> {
    bounds.check()?;
    let mut tallies: Vec<Tally> = plan
        .checks
        .iter()
        .map(|&(property, hypotheses)| Tally {
            verdict: PropertyVerdict {
                property,
                hypotheses,
                models_checked: 0,
                models_in_scope: 0,
                counterexamples: 0,
                status: VerdictStatus::Holds,
            },
        })
        .collect();
    let props: Vec<PropertyId> = plan.checks.iter().map(|c| c.0).collect();
    let need_ctx = plan.differential || ModelContext::needed_for(&props);
    let mut diff = plan.differential.then(DifferentialReport::default);
    let mut models = 0u64;

    for space in state_spaces(bounds) {
        let mut cb = space.template.clone();
        let mut r = space.reference.clone();
        let finished = enumerate::for_each_assessment(&space, bounds, |a| {
            models += 1;
            r.reassess(a.outcomes.iter().map(|o| o.value()), &a.ranks);
            let ctx = need_ctx.then(|| ModelContext::new(&r));
            let mut engine_ready = false;
            let mut stop = false;
            for t in &mut tallies {
                let v = &mut t.verdict;
                v.models_checked += 1;
                let check = check_model(v.property, &r, ctx.as_ref(), v.hypotheses);
                v.models_in_scope += u64::from(check.in_scope);
                if let Some((witnesses, detail)) = check.violation {
                    v.counterexamples += 1;
                    if v.holds() {
                        if !engine_ready {
                            cb.reassess(&a.outcomes, &a.ranks);
                            engine_ready = true;
                        }
                        v.status = VerdictStatus::Counterexample(Box::new(Counterexample {
                            model: cb.to_raw(),
                            witnesses: witnesses.iter().map(|&s| cb.id(CaseIx(s)).to_string()).collect(),
                            detail,
                        }));
                    }
                    stop |= plan.stop_at_first;
                }
            }
            if let Some(d) = diff.as_mut() {
                if !engine_ready {
                    cb.reassess(&a.outcomes, &a.ranks);
                }
                let (n, mismatch) = differential::compare_model(&cb, &r, ctx.as_ref().expect("context"));
                d.models += 1;
                d.comparisons += n;
                if let Some(m) = mismatch {
                    d.mismatched_models += 1;
                    if d.first.is_none() {
                        d.first = Some((cb.to_raw(), m));
                    }
                }
            }
            !stop
        });
        if !finished {
            break;
        }
    }
    Ok(SweepReport {
        bounds: *bounds,
        models,
        verdicts: tallies.into_iter().map(|t| t.verdict).collect(),
        differential: diff,
    })
}

/// Checks one property on every model within `bounds`.
pub fn check_property(
    property: PropertyId,
    bounds: &EnumerationBounds,
    options: CheckOptions,
) -> Result<PropertyVerdict, EngineError> {
    let plan = SweepPlan {
        checks: vec![(property, options.hypotheses)],
        differential: false,
        stop_at_first: options.stop_at_first,
    };
    Ok(sweep(bounds, &plan)?.verdicts.remove(0))
}

/// [`check_property`] by property name.
pub fn check_property_named(
    name: &str,
    bounds: &EnumerationBounds,
    options: CheckOptions,
) -> Result<PropertyVerdict, EngineError> {
    check_property(name.parse()?, bounds, options)
}

/// Evaluates `property` on a single case base, such as a dumped
/// counterexample. Returns the violation, if any, as witness ids and detail.
pub fn replay(
    property: PropertyId,
    cb: &CaseBase,
    hypotheses: bool,
) -> Result<Option<(Vec<String>, String)>, EngineError> {
    let r = RefModel::from_case_base(cb)
        .ok_or_else(|| EngineError::BoundsOutOfRange("atom universe larger than 64".into()))?;
    let missing = cb.unpolarized_facts();
    if !missing.is_empty() {
        return Err(EngineError::MissingPolarity(missing));
    }
    let ctx = ModelContext::new(&r);
    let check = check_model(property, &r, Some(&ctx), hypotheses);
    Ok(check
        .violation
        .map(|(w, d)| (w.iter().map(|&s| cb.id(CaseIx(s)).to_string()).collect(), d)))
}

/// Engine-versus-reference comparison on a single case base.
pub fn differential_check(cb: &CaseBase) -> Result<(u64, Option<Mismatch>), EngineError> {
    let r = RefModel::from_case_base(cb)
        .ok_or_else(|| EngineError::BoundsOutOfRange("atom universe larger than 64".into()))?;
    let ctx = ModelContext::new(&r);
    Ok(differential::compare_model(cb, &r, &ctx))
}
