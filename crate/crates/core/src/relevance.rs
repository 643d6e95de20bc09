//! The relevance relation `R`.
//!
//! Two modes exist. In a fortiori mode relevance is computed on demand from
//! the fact sets; in explicit mode it is whatever edge list the case base
//! was given, with no properties assumed.

use crate::error::EngineError;
use crate::model::{CaseBase, CaseIx, Relevance};

/// A fortiori relevance: an assessed `s` with outcome `o` is relevant for
/// `t` when `t` has at least the `o`-favouring facts of `s` and no
/// `ō`-favouring facts beyond those of `s`.
pub fn afortiori_relevant(cb: &CaseBase, s: CaseIx, t: CaseIx) -> Result<bool, EngineError> {
    let missing = cb.unpolarized_facts();
    if !missing.is_empty() {
        return Err(EngineError::MissingPolarity(missing));
    }
    Ok(afortiori(cb, s, t))
}

#[inline]
fn afortiori(cb: &CaseBase, s: CaseIx, t: CaseIx) -> bool {
    let Some(o) = cb.outcome(s).party() else {
        return false;
    };
    let (fs, ft) = (&cb.case(s).facts, &cb.case(t).facts);
    fs.is_subset_within(ft, cb.facts_favouring(o)) && ft.is_subset_within(fs, cb.facts_favouring(o.opposite()))
}

/// `s R t` under the case base's configured relevance.
#[inline]
pub fn is_relevant(cb: &CaseBase, s: CaseIx, t: CaseIx) -> bool {
    match &cb.relevance {
        Relevance::Afortiori => afortiori(cb, s, t),
        Relevance::Explicit { sources, .. } => sources[t.0].binary_search(&s).is_ok(),
    }
}

/// `R(t)`, in presentation order.
pub fn relevant_set(cb: &CaseBase, t: CaseIx) -> Vec<CaseIx> {
    let mut out: Vec<CaseIx> = relevant_sources(cb, t).filter(|&s| is_relevant(cb, s, t)).collect();
    cb.sort_cases(&mut out);
    out
}

pub(crate) type Candidates<'a> = std::iter::Copied<std::slice::Iter<'a, CaseIx>>;

/// Candidates that may be relevant for `t`: assessed cases in a fortiori mode,
/// the declared sources in explicit mode. Callers still test relevance.
pub(crate) fn relevant_sources(cb: &CaseBase, t: CaseIx) -> Candidates<'_> {
    match &cb.relevance {
        Relevance::Afortiori => cb.assessed.iter().copied(),
        Relevance::Explicit { sources, .. } => sources[t.0].iter().copied(),
    }
}

/// Assessed candidates `t` for which `s` may be relevant. In explicit mode
/// the declared targets are returned unfiltered.
pub(crate) fn relevant_assessed_targets(cb: &CaseBase, s: CaseIx) -> Candidates<'_> {
    match &cb.relevance {
        Relevance::Afortiori => cb.assessed.iter().copied(),
        Relevance::Explicit { targets, .. } => targets[s.0].iter().copied(),
    }
}
