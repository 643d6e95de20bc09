//! Structural validation of case bases.
//!
//! [`validate_model`] never fails: every violated condition becomes an
//! [`Issue`] in the returned report. [`CaseBase::from_raw`] refuses to build
//! when the report holds errors; warnings travel with the built case base.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::facts::FactSet;
use crate::format::{RawCaseBase, RawRelevance};
use crate::model::{explicit_relevance, CaseBase, CaseId, CaseIx, CaseState, Fact, FactId, Outcome, Party, Rank, Relevance};
use crate::organisation::{CourtIx, CourtSpec, Organisation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum IssueKind {
    InvalidOrganisation { message: String },
    EmptyId { element: &'static str },
    DuplicateId { element: &'static str, id: String },
    UnknownReference { element: &'static str, id: String, case: String },
    CourtUniquenessViolation { case: String, courts: Vec<String> },
    InvalidOutcome { case: String, value: u8 },
    MissingTime { case: String },
    MissingPolarity { facts: Vec<String> },
    LicenseConditionViolation { case: String, court: String },
    TemporalCompletenessViolation { undecided: String, latest_assessed: String },
    UnknownRelevanceEndpoint { id: String },
    LicenseNeverOmitted { court: String },
    IncompleteStateSpace { missing: u128, unexpected: usize, duplicates: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub severity: Severity,
    #[serde(flatten)]
    pub kind: IssueKind,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}: ")?;
        match &self.kind {
            IssueKind::InvalidOrganisation { message } => write!(f, "invalid organisation: {message}"),
            IssueKind::EmptyId { element } => write!(f, "empty {element} id"),
            IssueKind::DuplicateId { element, id } => write!(f, "duplicate {element} `{id}`"),
            IssueKind::UnknownReference { element, id, case } => {
                write!(f, "case `{case}` references unknown {element} `{id}`")
            }
            IssueKind::CourtUniquenessViolation { case, courts } => {
                write!(f, "case `{case}` has {} courts {courts:?}, expected exactly one", courts.len())
            }
            IssueKind::InvalidOutcome { case, value } => {
                write!(f, "case `{case}` has outcome {value}, expected 0, 1 or null")
            }
            IssueKind::MissingTime { case } => write!(f, "assessed case `{case}` has no time"),
            IssueKind::MissingPolarity { facts } => {
                write!(f, "a fortiori relevance needs a side for facts {facts:?}")
            }
            IssueKind::LicenseConditionViolation { case, court } => write!(
                f,
                "case `{case}` lacks the overrule license but court `{court}` is not self-bound"
            ),
            IssueKind::TemporalCompletenessViolation { undecided, latest_assessed } => write!(
                f,
                "undecided case `{undecided}` is not strictly after assessed case `{latest_assessed}`"
            ),
            IssueKind::UnknownRelevanceEndpoint { id } => {
                write!(f, "relevance edge references unknown case `{id}`")
            }
            IssueKind::LicenseNeverOmitted { court } => write!(
                f,
                "self-bound court `{court}` carries the overrule license in every case"
            ),
            IssueKind::IncompleteStateSpace { missing, unexpected, duplicates } => write!(
                f,
                "state space is not complete: {missing} missing, {unexpected} ill-formed, {duplicates} duplicated"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    /// Empty iff the model is well-formed.
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }

    pub fn contains(&self, pred: impl Fn(&IssueKind) -> bool) -> bool {
        self.issues.iter().any(|i| pred(&i.kind))
    }

    fn error(&mut self, kind: IssueKind) {
        self.issues.push(Issue { severity: Severity::Error, kind });
    }

    fn warning(&mut self, kind: IssueKind) {
        self.issues.push(Issue { severity: Severity::Warning, kind });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for issue in &self.issues {
            writeln!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Lists every violated structural condition of `raw`.
///
/// In `complete_mode` the license condition is an error rather than a
/// warning, and the state space must be exactly the set of well-formed
/// states over the declared facts and courts.
pub fn validate_model(raw: &RawCaseBase, complete_mode: bool) -> ValidationReport {
    analyse(raw, complete_mode).1
}

pub(crate) fn analyse(raw: &RawCaseBase, complete_mode: bool) -> (Option<CaseBase>, ValidationReport) {
    let mut report = ValidationReport::default();

    let specs: Vec<CourtSpec> = raw
        .courts
        .iter()
        .map(|c| CourtSpec::new(&c.id, c.parent.as_deref(), c.self_bound))
        .collect();
    let org = match Organisation::build(&specs) {
        Ok(org) => Some(org),
        Err(e) => {
            report.error(IssueKind::InvalidOrganisation { message: e.to_string() });
            None
        }
    };

    let mut facts = Vec::with_capacity(raw.facts.len());
    let mut fact_index: HashMap<&str, usize> = HashMap::new();
    for f in &raw.facts {
        if f.id.is_empty() {
            report.error(IssueKind::EmptyId { element: "fact" });
            continue;
        }
        if fact_index.insert(&f.id, facts.len()).is_some() {
            report.error(IssueKind::DuplicateId { element: "fact", id: f.id.clone() });
            continue;
        }
        facts.push(Fact { id: FactId::new(&f.id), side: f.side });
    }
    if raw.relevance == RawRelevance::Afortiori {
        let missing: Vec<String> = facts.iter().filter(|f| f.side.is_none()).map(|f| f.id.to_string()).collect();
        if !missing.is_empty() {
            report.error(IssueKind::MissingPolarity { facts: missing });
        }
    }

    let mut seen_cases: HashSet<&str> = HashSet::new();
    let mut cases: Vec<CaseState> = Vec::with_capacity(raw.cases.len());
    let mut times: Vec<Option<Rank>> = Vec::with_capacity(raw.cases.len());
    for rc in &raw.cases {
        if rc.id.is_empty() {
            report.error(IssueKind::EmptyId { element: "case" });
        } else if !seen_cases.insert(&rc.id) {
            report.error(IssueKind::DuplicateId { element: "case", id: rc.id.clone() });
        }
        let court_ids = rc.court.ids();
        let mut court = None;
        if let Some(org) = &org {
            for cid in &court_ids {
                match org.lookup(cid) {
                    Some(c) => court = Some(c),
                    None => report.error(IssueKind::UnknownReference {
                        element: "court",
                        id: cid.to_string(),
                        case: rc.id.clone(),
                    }),
                }
            }
        }
        if court_ids.len() != 1 {
            report.error(IssueKind::CourtUniquenessViolation {
                case: rc.id.clone(),
                courts: court_ids.iter().map(|s| s.to_string()).collect(),
            });
        }
        let mut fs = FactSet::new();
        for fid in &rc.facts {
            match fact_index.get(fid.as_str()) {
                Some(&ix) => fs.insert(ix),
                None => report.error(IssueKind::UnknownReference {
                    element: "fact",
                    id: fid.clone(),
                    case: rc.id.clone(),
                }),
            }
        }
        let outcome = match rc.outcome {
            None => Outcome::Undecided,
            Some(v) => match Party::from_value(v) {
                Some(p) => Outcome::Decided(p),
                None => {
                    report.error(IssueKind::InvalidOutcome { case: rc.id.clone(), value: v });
                    Outcome::Undecided
                }
            },
        };
        if outcome.is_decided() && rc.time.is_none() {
            report.error(IssueKind::MissingTime { case: rc.id.clone() });
        }
        times.push(rc.time);
        cases.push(CaseState {
            id: CaseId::new(&rc.id),
            facts: fs.normalized(),
            court: court.unwrap_or(CourtIx(usize::MAX)),
            overrule_license: rc.overrule_license,
            outcome,
            time_rank: rc.time.unwrap_or(0),
        });
    }

    // Undecided cases without a time sit one past the latest assessed case.
    let default_undecided = cases
        .iter()
        .filter(|c| c.outcome.is_decided())
        .map(|c| c.time_rank)
        .max()
        .map_or(0, |r| r + 1);
    for (case, t) in cases.iter_mut().zip(&times) {
        if t.is_none() && !case.outcome.is_decided() {
            case.time_rank = default_undecided;
        }
    }

    let courts_resolved = org.is_some() && cases.iter().all(|c| c.court.0 != usize::MAX);
    if let (Some(org), true) = (&org, courts_resolved) {
        for c in &cases {
            if !org.is_self_bound(c.court) && !c.overrule_license {
                let kind = IssueKind::LicenseConditionViolation {
                    case: c.id.to_string(),
                    court: org.court(c.court).id.to_string(),
                };
                if complete_mode {
                    report.error(kind);
                } else {
                    report.warning(kind);
                }
            }
        }
        for court in org.indices().filter(|&c| org.is_self_bound(c)) {
            let mut at_court = cases.iter().filter(|c| c.court == court).peekable();
            if at_court.peek().is_some() && at_court.all(|c| c.overrule_license) {
                report.warning(IssueKind::LicenseNeverOmitted { court: org.court(court).id.to_string() });
            }
        }
    }

    if let Some(latest) = cases.iter().filter(|c| c.outcome.is_decided()).max_by_key(|c| c.time_rank) {
        for c in cases.iter().filter(|c| !c.outcome.is_decided()) {
            if c.time_rank <= latest.time_rank {
                report.error(IssueKind::TemporalCompletenessViolation {
                    undecided: c.id.to_string(),
                    latest_assessed: latest.id.to_string(),
                });
            }
        }
    }

    let case_pos: HashMap<&str, usize> = raw.cases.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
    let relevance = match &raw.relevance {
        RawRelevance::Afortiori => Relevance::Afortiori,
        RawRelevance::Explicit { edges } => {
            let mut resolved = Vec::with_capacity(edges.len());
            for (from, to) in edges {
                let mut endpoint = |id: &String| match case_pos.get(id.as_str()) {
                    Some(&i) => Some(CaseIx(i)),
                    None => {
                        report.error(IssueKind::UnknownRelevanceEndpoint { id: id.clone() });
                        None
                    }
                };
                if let (Some(a), Some(b)) = (endpoint(from), endpoint(to)) {
                    resolved.push((a, b));
                }
            }
            explicit_relevance(cases.len(), &resolved)
        }
    };

    let org = match org {
        Some(org) if courts_resolved => org,
        _ => return (None, report),
    };
    let warnings = ValidationReport {
        issues: report.warnings().cloned().collect(),
    };
    let cb = CaseBase::assemble(org, facts, cases, relevance, warnings);

    if complete_mode {
        let gap = completeness_gap(&cb);
        if !gap.is_complete() {
            report.error(IssueKind::IncompleteStateSpace {
                missing: gap.missing,
                unexpected: gap.unexpected,
                duplicates: gap.duplicates,
            });
        }
    }

    if report.has_errors() {
        (None, report)
    } else {
        (Some(cb), report)
    }
}

/// How far a state space is from the complete one over its facts and courts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletenessGap {
    /// Well-formed states absent from the case base (saturates at `u128::MAX`).
    pub missing: u128,
    /// States lacking the license at a court that is not self-bound.
    pub unexpected: usize,
    /// States repeating the atom set of an earlier state.
    pub duplicates: usize,
}

impl CompletenessGap {
    pub fn is_complete(&self) -> bool {
        self.missing == 0 && self.unexpected == 0 && self.duplicates == 0
    }
}

/// Compares the states against the full space of well-formed atom sets:
/// every fact subset at every court, with the license forced at courts that
/// are not self-bound and both variants at self-bound ones.
pub fn completeness_gap(cb: &CaseBase) -> CompletenessGap {
    let org = cb.organisation();
    let variants: u128 = org
        .indices()
        .map(|c| if org.is_self_bound(c) { 2 } else { 1 })
        .sum();
    let expected = 1u128
        .checked_shl(cb.facts().len() as u32)
        .filter(|_| cb.facts().len() < 127)
        .map_or(u128::MAX, |subsets| subsets.saturating_mul(variants));

    let mut seen: HashSet<(&FactSet, CourtIx, bool)> = HashSet::with_capacity(cb.len());
    let mut unexpected = 0;
    let mut duplicates = 0;
    for c in cb.cases() {
        if !seen.insert((&c.facts, c.court, c.overrule_license)) {
            duplicates += 1;
        } else if !org.is_self_bound(c.court) && !c.overrule_license {
            unexpected += 1;
        }
    }
    let valid_distinct = (seen.len() - unexpected) as u128;
    CompletenessGap {
        missing: expected.saturating_sub(valid_distinct),
        unexpected,
        duplicates,
    }
}

/// Whether the states are exactly the well-formed atom sets over the facts
/// and courts of `cb`.
pub fn is_complete(cb: &CaseBase) -> bool {
    completeness_gap(cb).is_complete()
}
