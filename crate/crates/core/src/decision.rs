//! Decision functions for a new case.
//!
//! A decision function maps every assessed case to its own outcome and the
//! focus case to some subset of `{0, 1}`. Two members of the family ship
//! here: the naive one, which collects the outcomes of all binding
//! precedents without exception, and the temporal-hierarchical one, which
//! keeps only the latest of those decided by the highest courts.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::incuriam::IncuriamEvaluator;
use crate::model::{CaseBase, CaseIx, Party};
use crate::precedent::best_hierarchical;

/// `Best_T(X)`: members of `set` no other member is strictly later than.
pub fn best_temporal(cb: &CaseBase, set: &[CaseIx]) -> Vec<CaseIx> {
    let Some(latest) = set.iter().map(|&s| cb.rank(s)).max() else {
        return Vec::new();
    };
    set.iter().copied().filter(|&s| cb.rank(s) == latest).collect()
}

/// `Best_TH(X) = Best_T(Best_H(X))`.
pub fn best_temporal_hierarchical(cb: &CaseBase, set: &[CaseIx]) -> Vec<CaseIx> {
    best_temporal(cb, &best_hierarchical(cb, set))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Principle {
    #[serde(rename = "naive")]
    Naive,
    #[serde(rename = "th")]
    TemporalHierarchical,
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Principle::Naive => "naive",
            Principle::TemporalHierarchical => "th",
        })
    }
}

/// A member of the decision-function family: picks the precedents whose
/// outcomes make up the value at the focus case.
pub trait DecisionPrinciple {
    fn support(&self, ev: &mut IncuriamEvaluator<'_>, cb: &CaseBase, focus: CaseIx) -> Result<Vec<CaseIx>, EngineError>;
}

impl DecisionPrinciple for Principle {
    fn support(&self, ev: &mut IncuriamEvaluator<'_>, cb: &CaseBase, focus: CaseIx) -> Result<Vec<CaseIx>, EngineError> {
        let binding = ev.binding_without_exception(focus)?;
        Ok(match self {
            Principle::Naive => binding,
            Principle::TemporalHierarchical => best_temporal_hierarchical(cb, &binding),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    NoDecision,
    Unambiguous(Party),
    Ambiguous,
}

impl Classification {
    pub fn of(values: &[Party]) -> Classification {
        match values {
            [] => Classification::NoDecision,
            [o] => Classification::Unambiguous(*o),
            _ => Classification::Ambiguous,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::NoDecision => "NoDecision",
            Classification::Unambiguous(_) => "Unambiguous",
            Classification::Ambiguous => "Ambiguous",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionResult {
    pub focus: CaseIx,
    /// Ascending, without duplicates.
    pub values: Vec<Party>,
    pub classification: Classification,
    /// For each value, the supporting precedents in presentation order.
    pub support: BTreeMap<Party, Vec<CaseIx>>,
}

impl DecisionResult {
    fn from_support(cb: &CaseBase, focus: CaseIx, mut support_set: Vec<CaseIx>) -> Self {
        cb.sort_cases(&mut support_set);
        let mut support: BTreeMap<Party, Vec<CaseIx>> = BTreeMap::new();
        for s in support_set {
            if let Some(o) = cb.outcome(s).party() {
                support.entry(o).or_default().push(s);
            }
        }
        let values: Vec<Party> = support.keys().copied().collect();
        DecisionResult {
            focus,
            classification: Classification::of(&values),
            values,
            support,
        }
    }
}

/// Value of `principle` at the undecided `focus` case.
pub fn decide_with(
    ev: &mut IncuriamEvaluator<'_>,
    cb: &CaseBase,
    focus: CaseIx,
    principle: &dyn DecisionPrinciple,
) -> Result<DecisionResult, EngineError> {
    if cb.outcome(focus).is_decided() {
        return Err(EngineError::AlreadyDecided(cb.id(focus).clone()));
    }
    let support = principle.support(ev, cb, focus)?;
    Ok(DecisionResult::from_support(cb, focus, support))
}

pub fn decide(cb: &CaseBase, focus: CaseIx, principle: Principle) -> Result<DecisionResult, EngineError> {
    decide_with(&mut IncuriamEvaluator::new(cb), cb, focus, &principle)
}

/// The temporal-hierarchical principle `f₂*`.
pub fn decide_th(cb: &CaseBase, focus: CaseIx) -> Result<DecisionResult, EngineError> {
    decide(cb, focus, Principle::TemporalHierarchical)
}

pub fn decide_naive(cb: &CaseBase, focus: CaseIx) -> Result<DecisionResult, EngineError> {
    decide(cb, focus, Principle::Naive)
}

/// `f*(s)` for the decision function of `principle` focused on `focus`.
pub fn evaluate_decision_function(
    cb: &CaseBase,
    focus: CaseIx,
    s: CaseIx,
    principle: Principle,
) -> Result<Vec<Party>, EngineError> {
    if s == focus {
        return Ok(decide(cb, focus, principle)?.values);
    }
    match cb.outcome(s).party() {
        Some(o) => Ok(vec![o]),
        None => Err(EngineError::UndecidedNonFocus(cb.id(s).clone())),
    }
}
