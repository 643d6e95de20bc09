use thiserror::Error;

use crate::model::CaseId;
use crate::validate::ValidationReport;

/// Errors raised by engine operations on a well-formed case base.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("unknown case `{0}`")]
    UnknownState(String),
    #[error("unknown court `{0}`")]
    UnknownCourt(String),
    #[error("court `{court}` is not the court of case `{case}`")]
    CourtMismatch { court: String, case: CaseId },
    #[error("case `{0}` is undecided")]
    UndecidedState(CaseId),
    #[error("case `{0}` is already decided")]
    AlreadyDecided(CaseId),
    #[error("decision function evaluated at undecided non-focus case `{0}`")]
    UndecidedNonFocus(CaseId),
    #[error("a fortiori relevance needs a side for every fact; missing: {0:?}")]
    MissingPolarity(Vec<String>),
    #[error("precedent edge {from} -> {to} does not go back in time")]
    CycleDetected { from: CaseId, to: CaseId },
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("enumeration bounds out of range: {0}")]
    BoundsOutOfRange(String),
    #[error("projected model count {projected} exceeds cap {cap}")]
    BoundsTooLarge { projected: u128, cap: u128 },
}

/// Construction of a [`crate::CaseBase`] failed validation.
#[derive(Debug, Error, Clone)]
#[error("case base failed validation:\n{0}")]
pub struct ModelError(pub ValidationReport);
