//! Supporting and binding precedents, overruling, and the hierarchical
//! filter `Best_H`.

use crate::error::EngineError;
use crate::model::{CaseBase, CaseIx, Outcome, Party, Rank};
use crate::organisation::CourtIx;
use crate::relevance::{is_relevant, relevant_assessed_targets, relevant_sources};

/// `precedent` supports deciding `target` as `direction`; `binding` records
/// whether the precedent's court binds the target's court.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecedentAssertion {
    pub precedent: CaseIx,
    pub target: CaseIx,
    pub direction: Party,
    pub binding: bool,
}

/// `Π(s, t, o)`: `s` was decided as `o`, is relevant for `t`, and was
/// decided strictly before `t`.
#[inline]
pub fn is_supporting_precedent(cb: &CaseBase, s: CaseIx, t: CaseIx, o: Party) -> bool {
    cb.outcome(s) == Outcome::Decided(o) && cb.precedes(s, t) && is_relevant(cb, s, t)
}

/// `β(s, t)`: the direction of `s` when it is a binding precedent for `t`.
#[inline]
pub fn is_binding_precedent(cb: &CaseBase, s: CaseIx, t: CaseIx) -> Option<Party> {
    let o = cb.outcome(s).party()?;
    let binds = cb.organisation().binds(cb.court(s), cb.court(t));
    (binds && is_supporting_precedent(cb, s, t, o)).then_some(o)
}

/// All supporting precedents of `t`, in presentation order.
pub fn precedents_of(cb: &CaseBase, t: CaseIx) -> Vec<PrecedentAssertion> {
    let mut sources: Vec<CaseIx> = relevant_sources(cb, t).collect();
    cb.sort_cases(&mut sources);
    sources
        .into_iter()
        .filter_map(|s| {
            let o = cb.outcome(s).party()?;
            is_supporting_precedent(cb, s, t, o).then(|| PrecedentAssertion {
                precedent: s,
                target: t,
                direction: o,
                binding: cb.organisation().binds(cb.court(s), cb.court(t)),
            })
        })
        .collect()
}

/// `O(c', c | s')`: whether `overruling_court`, deciding `deciding_case`,
/// may overrule decisions of `court`.
pub fn has_overruling_power(
    cb: &CaseBase,
    overruling_court: CourtIx,
    court: CourtIx,
    deciding_case: CaseIx,
) -> Result<bool, EngineError> {
    if cb.court(deciding_case) != overruling_court {
        return Err(EngineError::CourtMismatch {
            court: cb.organisation().court(overruling_court).id.to_string(),
            case: cb.id(deciding_case).clone(),
        });
    }
    Ok(overruling_power(cb, deciding_case, court))
}

#[inline]
fn overruling_power(cb: &CaseBase, deciding_case: CaseIx, court: CourtIx) -> bool {
    let own = cb.court(deciding_case);
    cb.organisation().is_higher(own, court) || (own == court && cb.case(deciding_case).overrule_license)
}

/// `O(s', s)`: `later` decided against precedent `s` with power to overrule it.
#[inline]
pub fn overrules(cb: &CaseBase, later: CaseIx, s: CaseIx) -> bool {
    let Some(o) = cb.outcome(s).party() else {
        return false;
    };
    cb.outcome(later) == Outcome::Decided(o.opposite())
        && is_supporting_precedent(cb, s, later, o)
        && overruling_power(cb, later, cb.court(s))
}

/// Rank of the earliest case overruling `s`, cached per case.
fn overruled_at(cb: &CaseBase, s: CaseIx) -> Option<Rank> {
    *cb.overruled_at[s.0].get_or_init(|| {
        if !cb.outcome(s).is_decided() {
            return None;
        }
        relevant_assessed_targets(cb, s)
            .filter(|&later| overrules(cb, later, s))
            .map(|later| cb.rank(later))
            .min()
    })
}

/// `Overruled_T(s, t)`: some case overruling `s` precedes `t`.
pub fn overruled_before(cb: &CaseBase, s: CaseIx, t: CaseIx) -> bool {
    overruled_at(cb, s).is_some_and(|r| r < cb.rank(t))
}

/// `β̃_s`: binding precedents for `s` not overruled before `s`. When `s`
/// carries the overrule license, precedents of its own court are dropped.
pub fn binding_not_overruled(cb: &CaseBase, s: CaseIx) -> Vec<CaseIx> {
    let own_court = cb.court(s);
    let licensed = cb.case(s).overrule_license;
    let mut out: Vec<CaseIx> = relevant_sources(cb, s)
        .filter(|&p| {
            is_binding_precedent(cb, p, s).is_some()
                && !(licensed && cb.court(p) == own_court)
                && !overruled_before(cb, p, s)
        })
        .collect();
    cb.sort_cases(&mut out);
    out
}

/// `Best_H(X)`: members of `set` whose court is not below the court of
/// another member.
pub fn best_hierarchical(cb: &CaseBase, set: &[CaseIx]) -> Vec<CaseIx> {
    let org = cb.organisation();
    if set.len() <= 16 {
        return set
            .iter()
            .copied()
            .filter(|&s| !set.iter().any(|&x| org.is_higher(cb.court(x), cb.court(s))))
            .collect();
    }
    let mut courts: Vec<CourtIx> = set.iter().map(|&s| cb.court(s)).collect();
    courts.sort();
    courts.dedup();
    let top: Vec<CourtIx> = courts
        .iter()
        .copied()
        .filter(|&c| !courts.iter().any(|&d| org.is_higher(d, c)))
        .collect();
    set.iter().copied().filter(|&s| top.contains(&cb.court(s))).collect()
}
