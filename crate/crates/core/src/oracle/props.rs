//! The propositions, stated over the reference transcriptions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::oracle::reference::{RefModel, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    #[serde(rename = "prop1")]
    Prop1,
    #[serde(rename = "prop2")]
    Prop2,
    #[serde(rename = "prop_beta_overrule")]
    BetaOverrule,
    #[serde(rename = "prop_betatilde")]
    BetaTilde,
    #[serde(rename = "prop_incuriam_conflict")]
    IncuriamConflict,
    #[serde(rename = "prop_unambiguous")]
    Unambiguous,
}

impl PropertyId {
    pub const ALL: [PropertyId; 6] = [
        PropertyId::Prop1,
        PropertyId::Prop2,
        PropertyId::BetaOverrule,
        PropertyId::BetaTilde,
        PropertyId::IncuriamConflict,
        PropertyId::Unambiguous,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyId::Prop1 => "prop1",
            PropertyId::Prop2 => "prop2",
            PropertyId::BetaOverrule => "prop_beta_overrule",
            PropertyId::BetaTilde => "prop_betatilde",
            PropertyId::IncuriamConflict => "prop_incuriam_conflict",
            PropertyId::Unambiguous => "prop_unambiguous",
        }
    }

    /// One-line statement of the property.
    pub fn statement(self) -> &'static str {
        match self {
            PropertyId::Prop1 => "opposite precedents relevant for a common case are relevant for each other",
            PropertyId::Prop2 => "a binding precedent comes from a higher or the same court",
            PropertyId::BetaOverrule => "a binding precedent can only be overruled by its own court under license",
            PropertyId::BetaTilde => "the case cannot overrule its surviving binding precedents",
            PropertyId::IncuriamConflict => {
                "conflicting best binding precedents include a per-incuriam decision"
            }
            PropertyId::Unambiguous => "the temporal-hierarchical principle decides unambiguously",
        }
    }

    fn needs_context(self) -> bool {
        matches!(
            self,
            PropertyId::BetaTilde | PropertyId::IncuriamConflict | PropertyId::Unambiguous
        )
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyId {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| EngineError::UnknownProperty(s.to_string()))
    }
}

/// Derived data shared by several checks on one model.
pub(crate) struct ModelContext {
    /// `β̃_s` for every state.
    pub beta_tilde: Vec<Vec<State>>,
    /// Per-incuriam status, `None` for undecided states.
    pub incuriam: Vec<Option<bool>>,
    /// `β_s` for every state.
    pub beta: Vec<Vec<State>>,
}

impl ModelContext {
    pub fn new(r: &RefModel) -> Self {
        let incuriam = r.incuriam_all();
        let beta_tilde: Vec<Vec<State>> = r.states().map(|s| r.beta_tilde(s)).collect();
        let beta = r
            .states()
            .map(|s| r.without_own_incuriam(s, &beta_tilde[s], &incuriam))
            .collect();
        ModelContext { beta_tilde, incuriam, beta }
    }

    pub fn needed_for(props: &[PropertyId]) -> bool {
        props.iter().any(|p| p.needs_context())
    }
}

/// Result of one property on one model.
pub(crate) struct ModelCheck {
    pub in_scope: bool,
    pub violation: Option<(Vec<State>, String)>,
}

impl ModelCheck {
    fn holds() -> Self {
        ModelCheck { in_scope: true, violation: None }
    }

    fn out_of_scope() -> Self {
        ModelCheck { in_scope: false, violation: None }
    }

    fn from(violation: Option<(Vec<State>, String)>) -> Self {
        ModelCheck { in_scope: true, violation }
    }
}

/// Evaluates `prop` on `r`. With `hypotheses` off, model-level hypotheses
/// beyond the property's own premise are ignored. `ctx` must be present for
/// properties that need it.
pub(crate) fn check_model(
    prop: PropertyId,
    r: &RefModel,
    ctx: Option<&ModelContext>,
    hypotheses: bool,
) -> ModelCheck {
    match prop {
        PropertyId::Prop1 => ModelCheck::from(prop1(r)),
        PropertyId::Prop2 => ModelCheck::from(prop2(r)),
        PropertyId::BetaOverrule => ModelCheck::from(beta_overrule(r)),
        PropertyId::BetaTilde => ModelCheck::from(betatilde(r, ctx.expect("context"))),
        PropertyId::IncuriamConflict => {
            if hypotheses && !injective_on(r, r.assessed()) {
                return ModelCheck::out_of_scope();
            }
            ModelCheck::from(incuriam_conflict(r, ctx.expect("context")))
        }
        PropertyId::Unambiguous => unambiguous(r, ctx.expect("context"), hypotheses),
    }
}

fn injective_on(r: &RefModel, set: &[State]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|&b| r.rank(a) != r.rank(b)))
}

fn prop1(r: &RefModel) -> Option<(Vec<State>, String)> {
    for &s in r.assessed() {
        for &s1 in r.assessed() {
            if r.f(s1) == r.f(s) {
                continue;
            }
            for s2 in r.states() {
                if r.r_f(s, s2) && r.r_f(s1, s2) && !(r.r_f(s, s1) && r.r_f(s1, s)) {
                    return Some((vec![s, s1, s2], "both relevant for the third, not for each other".into()));
                }
            }
        }
    }
    None
}

fn prop2(r: &RefModel) -> Option<(Vec<State>, String)> {
    for &s in r.assessed() {
        for t in r.states() {
            let (c, c1) = (r.court(s), r.court(t));
            if r.beta(s, t).is_some() && !(r.h(c, c1) || c == c1) {
                return Some((vec![s, t], "binding precedent from a lower or unrelated court".into()));
            }
        }
    }
    None
}

fn beta_overrule(r: &RefModel) -> Option<(Vec<State>, String)> {
    for &s in r.assessed() {
        for &t in r.assessed() {
            if r.beta(s, t).is_some() && r.overrules(t, s) && !(r.court(s) == r.court(t) && r.has_license(t)) {
                return Some((vec![s, t], "binding precedent overruled without own-court license".into()));
            }
        }
    }
    None
}

fn betatilde(r: &RefModel, ctx: &ModelContext) -> Option<(Vec<State>, String)> {
    for s in r.states() {
        for &p in &ctx.beta_tilde[s] {
            if r.power(r.court(s), r.court(p), s) {
                return Some((vec![s, p], "case has power to overrule a surviving binding precedent".into()));
            }
        }
    }
    None
}

fn incuriam_conflict(r: &RefModel, ctx: &ModelContext) -> Option<(Vec<State>, String)> {
    for s in r.states() {
        let best = r.best_h(&ctx.beta[s]);
        for (i, &a) in best.iter().enumerate() {
            for &b in &best[i + 1..] {
                let inc = |x: State| ctx.incuriam[x] == Some(true);
                if r.f(a) != r.f(b) && !(inc(a) || inc(b)) {
                    return Some((vec![s, a, b], "conflicting best binding precedents, neither per incuriam".into()));
                }
            }
        }
    }
    None
}

/// The antisymmetry hypothesis is dropped when `hypotheses` is off; the
/// premise that binding precedents exist is kept.
fn unambiguous(r: &RefModel, ctx: &ModelContext, hypotheses: bool) -> ModelCheck {
    let mut in_scope = false;
    for s in r.states().filter(|&s| r.f(s).is_none()) {
        let beta = &ctx.beta[s];
        if beta.is_empty() {
            continue;
        }
        let best_h = r.best_h(beta);
        if hypotheses && !injective_on(r, &best_h) {
            continue;
        }
        in_scope = true;
        let values = r.values(&r.best_th(beta));
        if values.len() != 1 {
            let mut witnesses = vec![s];
            witnesses.extend(r.best_th(beta));
            return ModelCheck::from(Some((witnesses, format!("decision values {values:?}"))));
        }
    }
    if in_scope {
        ModelCheck::holds()
    } else {
        ModelCheck::out_of_scope()
    }
}
