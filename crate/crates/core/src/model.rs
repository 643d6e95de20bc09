//! Case states, outcomes, time ranks and the case base itself.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, ModelError};
use crate::facts::FactSet;
use crate::format::{CourtRef, RawCase, RawCaseBase, RawCourt, RawFact, RawRelevance};
use crate::organisation::{CourtIx, Organisation};
use crate::validate::{self, ValidationReport};

/// Ordinal time. Equal ranks are simultaneous.
pub type Rank = u64;

/// The two parties. As a decision direction, `Plaintiff` is the value `1`
/// and `Defendant` the value `0`; as a fact side it names whom the fact
/// favours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Defendant,
    Plaintiff,
}

impl Party {
    pub const BOTH: [Party; 2] = [Party::Defendant, Party::Plaintiff];

    pub fn opposite(self) -> Party {
        match self {
            Party::Defendant => Party::Plaintiff,
            Party::Plaintiff => Party::Defendant,
        }
    }

    pub fn value(self) -> u8 {
        match self {
            Party::Defendant => 0,
            Party::Plaintiff => 1,
        }
    }

    pub fn from_value(v: u8) -> Option<Party> {
        match v {
            0 => Some(Party::Defendant),
            1 => Some(Party::Plaintiff),
            _ => None,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Decided(Party),
    Undecided,
}

impl Outcome {
    pub fn party(self) -> Option<Party> {
        match self {
            Outcome::Decided(p) => Some(p),
            Outcome::Undecided => None,
        }
    }

    pub fn is_decided(self) -> bool {
        matches!(self, Outcome::Decided(_))
    }

    /// `None` for undecided outcomes, which have no opposite.
    pub fn opposite(self) -> Option<Outcome> {
        self.party().map(|p| Outcome::Decided(p.opposite()))
    }

    pub fn value(self) -> Option<u8> {
        self.party().map(Party::value)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Decided(p) => write!(f, "{p}"),
            Outcome::Undecided => f.write_str("?"),
        }
    }
}

macro_rules! string_id {
    ($name:ident) => {
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(id: impl AsRef<str>) -> Self {
                $name(Arc::from(id.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(CaseId);
string_id!(FactId);

/// Position of a case inside its [`CaseBase`]. Handles are only meaningful
/// for the case base that produced them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseIx(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub id: FactId,
    pub side: Option<Party>,
}

/// One state: a fact situation brought before exactly one court.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseState {
    pub id: CaseId,
    pub facts: FactSet,
    pub court: CourtIx,
    /// Whether the deciding court may overrule its own precedents here.
    pub overrule_license: bool,
    pub outcome: Outcome,
    pub time_rank: Rank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelevanceMode {
    Afortiori,
    Explicit,
}

#[derive(Clone, Debug)]
pub(crate) enum Relevance {
    Afortiori,
    Explicit {
        /// `sources[t]`: cases relevant for `t`, ascending.
        sources: Vec<Vec<CaseIx>>,
        /// `targets[s]`: cases `s` is relevant for, ascending.
        targets: Vec<Vec<CaseIx>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TemporalOrder {
    Before,
    Simultaneous,
    After,
}

/// A temporal jurisdictional classifier model: states, classification,
/// organisation, temporal preorder (as ranks) and relevance.
///
/// Immutable once built. Derived data that is expensive to recompute is
/// cached lazily behind `OnceLock`s, so a `&CaseBase` can be shared across
/// threads.
#[derive(Debug)]
pub struct CaseBase {
    pub(crate) organisation: Organisation,
    pub(crate) facts: Vec<Fact>,
    pub(crate) fact_index: HashMap<FactId, usize>,
    pub(crate) plaintiff_facts: FactSet,
    pub(crate) defendant_facts: FactSet,
    pub(crate) cases: Vec<CaseState>,
    pub(crate) case_index: HashMap<CaseId, CaseIx>,
    pub(crate) relevance: Relevance,
    pub(crate) warnings: ValidationReport,
    /// Assessed cases, ascending.
    pub(crate) assessed: Vec<CaseIx>,
    /// Earliest rank of a case overruling the given case, if any.
    pub(crate) overruled_at: Vec<OnceLock<Option<Rank>>>,
}

impl Clone for CaseBase {
    fn clone(&self) -> Self {
        CaseBase {
            organisation: self.organisation.clone(),
            facts: self.facts.clone(),
            fact_index: self.fact_index.clone(),
            plaintiff_facts: self.plaintiff_facts.clone(),
            defendant_facts: self.defendant_facts.clone(),
            cases: self.cases.clone(),
            case_index: self.case_index.clone(),
            relevance: self.relevance.clone(),
            warnings: self.warnings.clone(),
            assessed: self.assessed.clone(),
            overruled_at: fresh_cache(self.cases.len()),
        }
    }
}

pub(crate) fn fresh_cache<T>(n: usize) -> Vec<OnceLock<T>> {
    (0..n).map(|_| OnceLock::new()).collect()
}

impl CaseBase {
    /// Validates `raw` and builds the case base, or returns the report.
    pub fn from_raw(raw: &RawCaseBase) -> Result<CaseBase, ModelError> {
        let (cb, report) = validate::analyse(raw, false);
        match cb {
            Some(cb) => Ok(cb),
            None => Err(ModelError(report)),
        }
    }

    /// The wire form of this case base. Undecided cases carry explicit times.
    pub fn to_raw(&self) -> RawCaseBase {
        let org = &self.organisation;
        let relevance = match &self.relevance {
            Relevance::Afortiori => RawRelevance::Afortiori,
            Relevance::Explicit { sources, .. } => RawRelevance::Explicit {
                edges: self
                    .explicit_edges_from(sources)
                    .into_iter()
                    .map(|(a, b)| (self.id(a).to_string(), self.id(b).to_string()))
                    .collect(),
            },
        };
        RawCaseBase {
            facts: self
                .facts
                .iter()
                .map(|f| RawFact {
                    id: f.id.to_string(),
                    side: f.side,
                })
                .collect(),
            courts: org
                .specs()
                .into_iter()
                .map(|c| RawCourt {
                    id: c.id.to_string(),
                    parent: c.parent.map(|p| p.to_string()),
                    self_bound: c.self_bound,
                })
                .collect(),
            cases: self
                .cases
                .iter()
                .map(|c| RawCase {
                    id: c.id.to_string(),
                    facts: c.facts.iter().map(|f| self.facts[f].id.to_string()).collect(),
                    court: CourtRef::One(org.court(c.court).id.to_string()),
                    overrule_license: c.overrule_license,
                    outcome: c.outcome.value(),
                    time: Some(c.time_rank),
                })
                .collect(),
            relevance,
        }
    }

    fn explicit_edges_from(&self, sources: &[Vec<CaseIx>]) -> Vec<(CaseIx, CaseIx)> {
        let mut edges: Vec<(CaseIx, CaseIx)> = sources
            .iter()
            .enumerate()
            .flat_map(|(t, ss)| ss.iter().map(move |&s| (s, CaseIx(t))))
            .collect();
        edges.sort();
        edges
    }

    /// Returns a copy with the relevance relation replaced.
    ///
    /// Switching to a fortiori relevance requires every fact to carry a side.
    pub fn with_relevance(&self, config: RelevanceConfig) -> Result<CaseBase, EngineError> {
        let mut cb = self.clone();
        match config {
            RelevanceConfig::Afortiori => {
                let missing = self.unpolarized_facts();
                if !missing.is_empty() {
                    return Err(EngineError::MissingPolarity(missing));
                }
                cb.relevance = Relevance::Afortiori;
            }
            RelevanceConfig::Explicit(edges) => {
                cb.relevance = explicit_relevance(self.cases.len(), &edges);
            }
        }
        Ok(cb)
    }

    pub(crate) fn unpolarized_facts(&self) -> Vec<String> {
        self.facts
            .iter()
            .filter(|f| f.side.is_none())
            .map(|f| f.id.to_string())
            .collect()
    }

    pub fn organisation(&self) -> &Organisation {
        &self.organisation
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn fact_index(&self, id: &str) -> Option<usize> {
        self.fact_index.get(id).copied()
    }

    /// `Facts^o`: the facts favouring `party`.
    pub fn facts_favouring(&self, party: Party) -> &FactSet {
        match party {
            Party::Plaintiff => &self.plaintiff_facts,
            Party::Defendant => &self.defendant_facts,
        }
    }

    pub fn cases(&self) -> &[CaseState] {
        &self.cases
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = CaseIx> {
        (0..self.cases.len()).map(CaseIx)
    }

    pub fn case(&self, s: CaseIx) -> &CaseState {
        &self.cases[s.0]
    }

    pub fn id(&self, s: CaseIx) -> &CaseId {
        &self.cases[s.0].id
    }

    pub fn outcome(&self, s: CaseIx) -> Outcome {
        self.cases[s.0].outcome
    }

    pub fn court(&self, s: CaseIx) -> CourtIx {
        self.cases[s.0].court
    }

    pub fn rank(&self, s: CaseIx) -> Rank {
        self.cases[s.0].time_rank
    }

    pub fn lookup(&self, id: &str) -> Result<CaseIx, EngineError> {
        self.case_index
            .get(id)
            .copied()
            .ok_or_else(|| EngineError::UnknownState(id.to_string()))
    }

    pub fn relevance_mode(&self) -> RelevanceMode {
        match self.relevance {
            Relevance::Afortiori => RelevanceMode::Afortiori,
            Relevance::Explicit { .. } => RelevanceMode::Explicit,
        }
    }

    /// Explicit relevance edges `(from, to)`, or `None` in a fortiori mode.
    pub fn explicit_edges(&self) -> Option<Vec<(CaseIx, CaseIx)>> {
        match &self.relevance {
            Relevance::Afortiori => None,
            Relevance::Explicit { sources, .. } => Some(self.explicit_edges_from(sources)),
        }
    }

    /// Non-blocking diagnostics collected at construction.
    pub fn warnings(&self) -> &ValidationReport {
        &self.warnings
    }

    /// Strict temporal precedence `s <_T t`.
    #[inline]
    pub fn precedes(&self, s: CaseIx, t: CaseIx) -> bool {
        self.rank(s) < self.rank(t)
    }

    /// Deterministic presentation order: by time rank, then id.
    pub fn presentation_cmp(&self, a: CaseIx, b: CaseIx) -> Ordering {
        self.rank(a)
            .cmp(&self.rank(b))
            .then_with(|| self.id(a).cmp(self.id(b)))
    }

    pub fn sort_cases(&self, set: &mut Vec<CaseIx>) {
        set.sort_by(|&a, &b| self.presentation_cmp(a, b));
        set.dedup();
    }

    pub fn ids<'a>(&'a self, set: &'a [CaseIx]) -> impl Iterator<Item = &'a CaseId> + 'a {
        set.iter().map(move |&s| self.id(s))
    }

    /// Builds a case base from already-checked parts. Callers guarantee the
    /// invariants `analyse` would otherwise enforce.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        organisation: Organisation,
        facts: Vec<Fact>,
        cases: Vec<CaseState>,
        relevance: Relevance,
        warnings: ValidationReport,
    ) -> CaseBase {
        let fact_index = facts
            .iter()
            .enumerate()
            .map(|(i, f)| (f.id.clone(), i))
            .collect();
        let side_set = |side| {
            facts
                .iter()
                .enumerate()
                .filter(|(_, f)| f.side == Some(side))
                .map(|(i, _)| i)
                .collect::<FactSet>()
        };
        let plaintiff_facts = side_set(Party::Plaintiff);
        let defendant_facts = side_set(Party::Defendant);
        let case_index = cases
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.clone(), CaseIx(i)))
            .collect();
        let n = cases.len();
        CaseBase {
            organisation,
            facts,
            fact_index,
            plaintiff_facts,
            defendant_facts,
            cases,
            case_index,
            relevance,
            warnings,
            assessed: Vec::new(),
            overruled_at: fresh_cache(n),
        }
        .with_assessed_index()
    }

    fn with_assessed_index(mut self) -> Self {
        self.assessed = self.indices().filter(|&s| self.outcome(s).is_decided()).collect();
        self
    }

    /// Same states and organisation with new outcomes and ranks. Used by the
    /// enumerator to stamp many models out of one state space.
    pub(crate) fn reassessed(&self, outcomes: &[Outcome], ranks: &[Rank]) -> CaseBase {
        let mut cb = self.clone();
        cb.reassess(outcomes, ranks);
        cb
    }

    /// In-place form of [`CaseBase::reassessed`].
    pub(crate) fn reassess(&mut self, outcomes: &[Outcome], ranks: &[Rank]) {
        self.assessed.clear();
        for (i, ((case, &o), &r)) in self.cases.iter_mut().zip(outcomes).zip(ranks).enumerate() {
            case.outcome = o;
            case.time_rank = r;
            if o.is_decided() {
                self.assessed.push(CaseIx(i));
            }
        }
        for cell in &mut self.overruled_at {
            cell.take();
        }
    }

    /// Assessed cases, ascending.
    pub fn assessed(&self) -> &[CaseIx] {
        &self.assessed
    }
}

/// Relevance relation selectable at runtime, e.g. from a CLI override.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelevanceConfig {
    Afortiori,
    Explicit(Vec<(CaseIx, CaseIx)>),
}

pub(crate) fn explicit_relevance(n: usize, edges: &[(CaseIx, CaseIx)]) -> Relevance {
    let mut sources = vec![Vec::new(); n];
    let mut targets = vec![Vec::new(); n];
    for &(from, to) in edges {
        sources[to.0].push(from);
        targets[from.0].push(to);
    }
    for v in sources.iter_mut().chain(targets.iter_mut()) {
        v.sort();
        v.dedup();
    }
    Relevance::Explicit { sources, targets }
}

/// Compares two states under the temporal preorder `≤_T`.
pub fn temporal_compare(cb: &CaseBase, s: CaseIx, t: CaseIx) -> TemporalOrder {
    match cb.rank(s).cmp(&cb.rank(t)) {
        Ordering::Less => TemporalOrder::Before,
        Ordering::Equal => TemporalOrder::Simultaneous,
        Ordering::Greater => TemporalOrder::After,
    }
}

/// [`temporal_compare`] by case id.
pub fn temporal_compare_ids(cb: &CaseBase, s: &str, t: &str) -> Result<TemporalOrder, EngineError> {
    Ok(temporal_compare(cb, cb.lookup(s)?, cb.lookup(t)?))
}
