//! Exhaustive enumeration of small complete classifier models.
//!
//! Organisations are all rooted trees of up to `courts` courts with every
//! self-binding assignment, deduplicated up to court renaming. For each
//! organisation the complete state space is fixed; models then vary in which
//! states are assessed, their outcomes, and their time ranks. Undecided
//! states share the rank one past the latest assessed state.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::facts::FactSet;
use crate::model::{CaseBase, CaseId, CaseState, Fact, FactId, Outcome, Party, Rank, Relevance};
use crate::oracle::reference::RefModel;
use crate::organisation::{CourtIx, CourtSpec, Organisation};
use crate::validate::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankRegime {
    /// Assessed states carry pairwise distinct ranks.
    Injective,
    /// Every total preorder on the assessed states.
    Ties,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationBounds {
    pub plaintiff_facts: usize,
    pub defendant_facts: usize,
    pub courts: usize,
    pub assessed: usize,
    pub ranks: RankRegime,
    /// Also emit license-free states at courts that are not self-bound.
    /// Such models are well-formed but not complete.
    pub free_license: bool,
    /// Largest projected model count accepted.
    pub cap: u128,
}

impl Default for EnumerationBounds {
    fn default() -> Self {
        EnumerationBounds {
            plaintiff_facts: 2,
            defendant_facts: 1,
            courts: 3,
            assessed: 3,
            ranks: RankRegime::Ties,
            free_license: false,
            cap: 50_000_000,
        }
    }
}

pub const MAX_SIDE_FACTS: usize = 2;
pub const MAX_COURTS: usize = 3;
pub const MAX_ASSESSED: usize = 4;

impl EnumerationBounds {
    pub fn check(&self) -> Result<(), EngineError> {
        let out = |what: &str, v: usize, max: usize| {
            Err(EngineError::BoundsOutOfRange(format!("{what} = {v}, at most {max}")))
        };
        if self.plaintiff_facts > MAX_SIDE_FACTS {
            return out("plaintiff facts", self.plaintiff_facts, MAX_SIDE_FACTS);
        }
        if self.defendant_facts > MAX_SIDE_FACTS {
            return out("defendant facts", self.defendant_facts, MAX_SIDE_FACTS);
        }
        if self.courts == 0 || self.courts > MAX_COURTS {
            return Err(EngineError::BoundsOutOfRange(format!(
                "courts = {}, expected 1..={MAX_COURTS}",
                self.courts
            )));
        }
        if self.assessed > MAX_ASSESSED {
            return out("assessed states", self.assessed, MAX_ASSESSED);
        }
        let projected = self.projected_models();
        if projected > self.cap {
            return Err(EngineError::BoundsTooLarge { projected, cap: self.cap });
        }
        Ok(())
    }

    fn n_facts(&self) -> usize {
        self.plaintiff_facts + self.defendant_facts
    }

    /// Exact number of models the enumerator will emit.
    pub fn projected_models(&self) -> u128 {
        organisation_shapes(self.courts)
            .iter()
            .map(|shape| {
                let n = state_count(shape, self.n_facts(), self.free_license) as u128;
                (0..=self.assessed.min(n as usize))
                    .map(|k| binomial(n, k as u128) * (1u128 << k) * rank_patterns(k, self.ranks) as u128)
                    .sum::<u128>()
            })
            .sum()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Rank vectors for `k` assessed states, one per preorder shape.
fn rank_vectors(k: usize, regime: RankRegime) -> Vec<Vec<Rank>> {
    let mut out = Vec::new();
    let mut cur = vec![0; k];
    fn rec(i: usize, k: usize, cur: &mut Vec<Rank>, out: &mut Vec<Vec<Rank>>, regime: RankRegime) {
        if i == k {
            let mut used: Vec<Rank> = cur.clone();
            used.sort_unstable();
            used.dedup();
            let surjective = used.iter().enumerate().all(|(j, &r)| r == j as Rank);
            let ok = match regime {
                RankRegime::Injective => used.len() == k,
                RankRegime::Ties => surjective,
            };
            if ok {
                out.push(cur.clone());
            }
            return;
        }
        for r in 0..k as Rank {
            cur[i] = r;
            rec(i + 1, k, cur, out, regime);
        }
    }
    rec(0, k, &mut cur, &mut out, regime);
    out
}

fn rank_patterns(k: usize, regime: RankRegime) -> usize {
    rank_vectors(k, regime).len()
}

/// A rooted tree of courts: `parents[i] < i` for `i > 0`, and self-binding
/// flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrgShape {
    pub parents: Vec<Option<usize>>,
    pub self_bound: Vec<bool>,
}

impl OrgShape {
    fn canonical(&self) -> String {
        fn rec(shape: &OrgShape, node: usize) -> String {
            let mut kids: Vec<String> = (0..shape.parents.len())
                .filter(|&c| shape.parents[c] == Some(node))
                .map(|c| rec(shape, c))
                .collect();
            kids.sort();
            format!("({}{})", u8::from(shape.self_bound[node]), kids.concat())
        }
        rec(self, 0)
    }

    pub fn specs(&self) -> Vec<CourtSpec> {
        (0..self.parents.len())
            .map(|c| CourtSpec {
                id: crate::organisation::CourtId::new(format!("c{c}")),
                parent: self.parents[c].map(|p| crate::organisation::CourtId::new(format!("c{p}"))),
                self_bound: self.self_bound[c],
            })
            .collect()
    }
}

/// All organisation shapes with `1..=max_courts` courts, up to renaming.
pub fn organisation_shapes(max_courts: usize) -> Vec<OrgShape> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for k in 1..=max_courts {
        let mut parents = vec![None; k];
        let mut choices: Vec<usize> = vec![0; k];
        loop {
            for i in 1..k {
                parents[i] = Some(choices[i]);
            }
            for sb in 0u32..(1 << k) {
                let shape = OrgShape {
                    parents: parents.clone(),
                    self_bound: (0..k).map(|c| sb & (1 << c) != 0).collect(),
                };
                if seen.insert(shape.canonical()) {
                    out.push(shape);
                }
            }
            // Odometer over parent choices with choices[i] < i.
            let mut i = k;
            loop {
                if i <= 1 {
                    break;
                }
                i -= 1;
                if choices[i] + 1 < i {
                    choices[i] += 1;
                    for c in choices.iter_mut().skip(i + 1) {
                        *c = 0;
                    }
                    i = usize::MAX;
                    break;
                }
            }
            if i != usize::MAX {
                break;
            }
        }
    }
    out
}

fn state_count(shape: &OrgShape, n_facts: usize, free_license: bool) -> usize {
    let variants: usize = shape
        .self_bound
        .iter()
        .map(|&sb| if sb || free_license { 2 } else { 1 })
        .sum();
    variants << n_facts
}

/// One organisation with its full state space, all undecided.
#[derive(Clone, Debug)]
pub struct StateSpace {
    pub shape: OrgShape,
    pub template: CaseBase,
    pub reference: RefModel,
}

impl StateSpace {
    pub fn new(shape: &OrgShape, bounds: &EnumerationBounds) -> StateSpace {
        let org = Organisation::build(&shape.specs()).expect("enumerated shapes are valid trees");
        let mut facts = Vec::new();
        for i in 0..bounds.plaintiff_facts {
            facts.push(Fact { id: FactId::new(format!("p{i}")), side: Some(Party::Plaintiff) });
        }
        for i in 0..bounds.defendant_facts {
            facts.push(Fact { id: FactId::new(format!("d{i}")), side: Some(Party::Defendant) });
        }
        let n_facts = facts.len();
        let mut cases = Vec::new();
        for c in 0..shape.parents.len() {
            let licenses: &[bool] = if shape.self_bound[c] || bounds.free_license {
                &[false, true]
            } else {
                &[true]
            };
            for &l in licenses {
                for bits in 0u64..(1 << n_facts) {
                    let fact_names: String = (0..n_facts)
                        .filter(|i| bits & (1 << i) != 0)
                        .map(|i| facts[i].id.as_str())
                        .collect();
                    let id = format!(
                        "c{c}_{}{}",
                        if fact_names.is_empty() { "none" } else { &fact_names },
                        if l { "_l" } else { "" }
                    );
                    cases.push(CaseState {
                        id: CaseId::new(id),
                        facts: FactSet::from_bits(bits),
                        court: CourtIx(c),
                        overrule_license: l,
                        outcome: Outcome::Undecided,
                        time_rank: 0,
                    });
                }
            }
        }
        let template = CaseBase::assemble(org, facts, cases, Relevance::Afortiori, ValidationReport::default());
        let reference = RefModel::from_case_base(&template).expect("small universe");
        StateSpace { shape: shape.clone(), template, reference }
    }

    pub fn len(&self) -> usize {
        self.template.len()
    }

    pub fn is_empty(&self) -> bool {
        self.template.is_empty()
    }
}

/// Assessment of a state space: which states are decided, how, and when.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assessment {
    pub outcomes: Vec<Outcome>,
    pub ranks: Vec<Rank>,
}

impl Assessment {
    pub fn case_base(&self, space: &StateSpace) -> CaseBase {
        space.template.reassessed(&self.outcomes, &self.ranks)
    }

    pub fn reference(&self, space: &StateSpace) -> RefModel {
        space
            .reference
            .reassessed(self.outcomes.iter().map(|o| o.value()).collect(), self.ranks.clone())
    }
}

/// Calls `visit` on every assessment of `space` within `bounds`. Stops early
/// when `visit` returns `false`; returns whether the walk completed.
pub fn for_each_assessment(
    space: &StateSpace,
    bounds: &EnumerationBounds,
    mut visit: impl FnMut(&Assessment) -> bool,
) -> bool {
    let n = space.len();
    let mut a = Assessment {
        outcomes: vec![Outcome::Undecided; n],
        ranks: vec![0; n],
    };
    for k in 0..=bounds.assessed.min(n) {
        let rank_sets = rank_vectors(k, bounds.ranks);
        let undecided_rank = k as Rank;
        let mut chosen: Vec<usize> = (0..k).collect();
        loop {
            for bits in 0u32..(1 << k) {
                for rv in &rank_sets {
                    a.outcomes.fill(Outcome::Undecided);
                    a.ranks.fill(undecided_rank);
                    for (j, &s) in chosen.iter().enumerate() {
                        let party = if bits & (1 << j) != 0 { Party::Plaintiff } else { Party::Defendant };
                        a.outcomes[s] = Outcome::Decided(party);
                        a.ranks[s] = rv[j];
                    }
                    // One past the latest assessed rank.
                    let top = chosen.iter().map(|&s| a.ranks[s] + 1).max().unwrap_or(0);
                    for r in a.ranks.iter_mut().zip(&a.outcomes).filter(|(_, o)| !o.is_decided()) {
                        *r.0 = top;
                    }
                    if !visit(&a) {
                        return false;
                    }
                }
            }
            if !next_combination(&mut chosen, n) {
                break;
            }
        }
    }
    true
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Every state space for `bounds`.
pub fn state_spaces(bounds: &EnumerationBounds) -> Vec<StateSpace> {
    organisation_shapes(bounds.courts)
        .iter()
        .map(|shape| StateSpace::new(shape, bounds))
        .collect()
}

/// Streams every model within `bounds`.
pub fn enumerate_complete_models(bounds: &EnumerationBounds) -> Result<impl Iterator<Item = CaseBase>, EngineError> {
    bounds.check()?;
    let b = *bounds;
    Ok(state_spaces(bounds).into_iter().flat_map(move |space| {
        let mut models = Vec::new();
        for_each_assessment(&space, &b, |a| {
            models.push(a.case_base(&space));
            true
        });
        models
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::{is_complete, validate_model};

    fn small(plt: usize, dfd: usize, courts: usize, assessed: usize, ranks: RankRegime) -> EnumerationBounds {
        EnumerationBounds {
            plaintiff_facts: plt,
            defendant_facts: dfd,
            courts,
            assessed,
            ranks,
            free_license: false,
            cap: 10_000_000,
        }
    }

    #[test]
    fn shape_counts() {
        assert_eq!(organisation_shapes(1).len(), 2);
        assert_eq!(organisation_shapes(2).len(), 6);
        assert_eq!(organisation_shapes(3).len(), 20);
    }

    #[test]
    fn rank_pattern_counts() {
        let ties: Vec<usize> = (0..=4).map(|k| rank_patterns(k, RankRegime::Ties)).collect();
        assert_eq!(ties, [1, 1, 3, 13, 75]);
        let inj: Vec<usize> = (0..=4).map(|k| rank_patterns(k, RankRegime::Injective)).collect();
        assert_eq!(inj, [1, 1, 2, 6, 24]);
    }

    #[test]
    fn one_fact_one_court() {
        let b = small(1, 0, 1, 1, RankRegime::Injective);
        let spaces: Vec<_> = state_spaces(&b).into_iter().filter(|s| s.shape.self_bound[0]).collect();
        assert_eq!(spaces.len(), 1);
        assert_eq!(spaces[0].len(), 4);
        let mut count = 0;
        for_each_assessment(&spaces[0], &b, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 9);
    }

    #[test]
    fn zero_assessed_gives_one_model_per_shape() {
        let b = small(1, 1, 3, 0, RankRegime::Ties);
        let models: Vec<_> = enumerate_complete_models(&b).unwrap().collect();
        assert_eq!(models.len(), 20);
        assert!(models.iter().all(|m| m.cases().iter().all(|c| !c.outcome.is_decided())));
    }

    #[test]
    fn emitted_models_are_complete_and_unique() {
        let b = small(1, 1, 2, 2, RankRegime::Ties);
        let mut seen = HashSet::new();
        let mut n = 0u128;
        for m in enumerate_complete_models(&b).unwrap() {
            assert!(is_complete(&m));
            assert!(validate_model(&m.to_raw(), true).is_empty());
            let key = serde_json_free_key(&m);
            assert!(seen.insert(key), "duplicate model");
            n += 1;
        }
        assert_eq!(n, b.projected_models());
    }

    fn serde_json_free_key(m: &CaseBase) -> String {
        let courts: String = m
            .organisation()
            .courts()
            .iter()
            .map(|c| format!("{:?}{}", c.parent, c.self_bound))
            .collect();
        let cases: String = m.cases().iter().map(|c| format!("{}{}{};", c.id, c.outcome, c.time_rank)).collect();
        courts + &cases
    }

    #[test]
    fn default_projection() {
        assert_eq!(EnumerationBounds::default().projected_models(), 12_921_812);
        let inj = EnumerationBounds { ranks: RankRegime::Injective, ..Default::default() };
        assert_eq!(inj.projected_models(), 5_990_452);
    }

    #[test]
    fn bounds_errors() {
        let b = EnumerationBounds { plaintiff_facts: 3, ..Default::default() };
        assert!(matches!(b.check(), Err(EngineError::BoundsOutOfRange(_))));
        let b = EnumerationBounds { courts: 0, ..Default::default() };
        assert!(matches!(b.check(), Err(EngineError::BoundsOutOfRange(_))));
        let b = EnumerationBounds { defendant_facts: 2, assessed: 4, ..Default::default() };
        assert!(matches!(b.check(), Err(EngineError::BoundsTooLarge { .. })));
    }
}
