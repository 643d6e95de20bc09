//! Temporal-jurisdictional classifier models for case bases.
//!
//! A case base holds decided and undecided cases, each tied to one court of
//! a hierarchical organisation and ranked in time. The engine computes
//! relevance, binding precedents, overruled and per-incuriam decisions, and
//! resolves conflicting precedents for a new case by preferring the most
//! recent decisions of the highest courts.
//!
//! ```
//! use stare_core::{decide_th, CaseBase, Classification, Party, RawCaseBase};
//!
//! let raw: RawCaseBase = serde_json::from_str(r#"{
//!   "facts": [{"id": "p", "side": "plaintiff"}, {"id": "d", "side": "defendant"}],
//!   "courts": [{"id": "top", "self_bound": true}, {"id": "low", "parent": "top"}],
//!   "cases": [
//!     {"id": "a", "facts": ["p"], "court": "top", "outcome": 1, "time": 1},
//!     {"id": "new", "facts": ["p", "d"], "court": "low", "overrule_license": true}
//!   ]
//! }"#).unwrap();
//! let cb = CaseBase::from_raw(&raw).unwrap();
//! let d = decide_th(&cb, cb.lookup("new").unwrap()).unwrap();
//! assert_eq!(d.classification, Classification::NoDecision);
//! # let _ = Party::Plaintiff;
//! ```

pub mod decision;
pub mod error;
pub mod facts;
pub mod format;
pub mod incuriam;
pub mod model;
pub mod oracle;
pub mod organisation;
pub mod precedent;
pub mod relevance;
pub mod validate;

pub use decision::{
    best_temporal, best_temporal_hierarchical, decide, decide_naive, decide_th, decide_with,
    evaluate_decision_function, Classification, DecisionPrinciple, DecisionResult, Principle,
};
pub use error::{EngineError, ModelError};
pub use facts::FactSet;
pub use format::{CourtRef, RawCase, RawCaseBase, RawCourt, RawFact, RawRelevance};
pub use incuriam::{
    binding_without_exception, build_precedent_graph, is_per_incuriam, IncuriamEvaluator, IncuriamMark,
    PrecedentGraph,
};
pub use model::{
    temporal_compare, temporal_compare_ids, CaseBase, CaseId, CaseIx, CaseState, Fact, FactId, Outcome, Party,
    Rank, RelevanceConfig, RelevanceMode, TemporalOrder,
};
pub use organisation::{Court, CourtId, CourtIx, CourtSpec, Organisation, OrganisationError};
pub use precedent::{
    best_hierarchical, binding_not_overruled, has_overruling_power, is_binding_precedent,
    is_supporting_precedent, overruled_before, overrules, precedents_of, PrecedentAssertion,
};
pub use relevance::{afortiori_relevant, is_relevant, relevant_set};
pub use validate::{
    completeness_gap, is_complete, validate_model, CompletenessGap, Issue, IssueKind, Severity,
    ValidationReport,
};
