//! Court organisations: the hierarchy relation `H` and the binding relation `B`.
//!
//! An [`Organisation`] is a rooted tree of courts. `H(a, b)` holds when `a` is a
//! strict ancestor of `b`. Binding follows the common-law regime: every court
//! binds all courts below it, and a court binds itself only when declared
//! self-bound. Hence `H ⊆ B ⊆ H ∪ I` holds for every value of this type.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Caller-chosen court identifier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CourtId(Arc<str>);

impl CourtId {
    pub fn new(id: impl AsRef<str>) -> Self {
        CourtId(Arc::from(id.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for CourtId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for CourtId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for CourtId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for CourtId {
    fn from(s: &str) -> Self {
        CourtId::new(s)
    }
}

/// Position of a court inside its [`Organisation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CourtIx(pub usize);

/// One entry of the parent-edge ingestion form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CourtSpec {
    pub id: CourtId,
    pub parent: Option<CourtId>,
    pub self_bound: bool,
}

impl CourtSpec {
    pub fn new(id: &str, parent: Option<&str>, self_bound: bool) -> Self {
        CourtSpec {
            id: CourtId::new(id),
            parent: parent.map(CourtId::new),
            self_bound,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrganisationError {
    #[error("court id must be non-empty")]
    EmptyCourtId,
    #[error("duplicate court `{0}`")]
    DuplicateCourt(CourtId),
    #[error("more than one root court: {0:?}")]
    MultipleRoots(Vec<CourtId>),
    #[error("no root court")]
    NoRoot,
    #[error("court `{court}` names unknown parent `{parent}`")]
    UnknownParent { court: CourtId, parent: CourtId },
    #[error("parent chain of court `{0}` is cyclic")]
    CyclicParentChain(CourtId),
    #[error("relation mentions unknown court `{0}`")]
    UnknownCourt(CourtId),
    #[error("hierarchy is not irreflexive at `{0}`")]
    NotIrreflexive(CourtId),
    #[error("hierarchy is not transitive: `{0}` > `{1}` > `{2}`")]
    NotTransitive(CourtId, CourtId, CourtId),
    #[error("hierarchy is not tree-like: `{1}` and `{2}` are both above `{0}` but unrelated")]
    NotTreeLike(CourtId, CourtId, CourtId),
    #[error("no court is above every other court")]
    NoUniversalRoot,
    #[error("binding relation violates H ⊆ B ⊆ H ∪ I at (`{0}`, `{1}`)")]
    BindingRegime(CourtId, CourtId),
}

#[derive(Clone, Debug)]
pub struct Court {
    pub id: CourtId,
    pub parent: Option<CourtIx>,
    pub self_bound: bool,
}

#[derive(Clone, Debug)]
pub struct Organisation {
    courts: Vec<Court>,
    index: HashMap<CourtId, CourtIx>,
    root: CourtIx,
    /// Row-major `n × n` matrix; `higher[a * n + b]` is `H(a, b)`.
    higher: Vec<bool>,
}

impl Organisation {
    /// Builds an organisation from parent edges; `H` is the transitive closure
    /// of the child-to-parent edges, read downwards.
    pub fn build(specs: &[CourtSpec]) -> Result<Self, OrganisationError> {
        let mut index = HashMap::with_capacity(specs.len());
        for (i, spec) in specs.iter().enumerate() {
            if spec.id.as_str().is_empty() {
                return Err(OrganisationError::EmptyCourtId);
            }
            if index.insert(spec.id.clone(), CourtIx(i)).is_some() {
                return Err(OrganisationError::DuplicateCourt(spec.id.clone()));
            }
        }
        let roots: Vec<_> = specs.iter().filter(|s| s.parent.is_none()).collect();
        let root = match roots.as_slice() {
            [] => return Err(OrganisationError::NoRoot),
            [r] => index[&r.id],
            many => {
                return Err(OrganisationError::MultipleRoots(
                    many.iter().map(|s| s.id.clone()).collect(),
                ))
            }
        };
        let mut courts = Vec::with_capacity(specs.len());
        for spec in specs {
            let parent = match &spec.parent {
                None => None,
                Some(p) => Some(*index.get(p).ok_or_else(|| OrganisationError::UnknownParent {
                    court: spec.id.clone(),
                    parent: p.clone(),
                })?),
            };
            courts.push(Court {
                id: spec.id.clone(),
                parent,
                self_bound: spec.self_bound,
            });
        }

        let n = courts.len();
        let mut higher = vec![false; n * n];
        for c in 0..n {
            let mut cur = courts[c].parent;
            let mut steps = 0;
            while let Some(p) = cur {
                steps += 1;
                if steps > n || p.0 == c {
                    return Err(OrganisationError::CyclicParentChain(courts[c].id.clone()));
                }
                higher[p.0 * n + c] = true;
                cur = courts[p.0].parent;
            }
        }
        Ok(Organisation {
            courts,
            index,
            root,
            higher,
        })
    }

    /// Builds an organisation from explicit `H` and `B` relations, checking
    /// every structural clause.
    pub fn from_relations(
        court_ids: &[CourtId],
        hierarchy: &[(CourtId, CourtId)],
        binding: &[(CourtId, CourtId)],
    ) -> Result<Self, OrganisationError> {
        let mut index = HashMap::new();
        for (i, id) in court_ids.iter().enumerate() {
            if id.as_str().is_empty() {
                return Err(OrganisationError::EmptyCourtId);
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(OrganisationError::DuplicateCourt(id.clone()));
            }
        }
        let n = court_ids.len();
        if n == 0 {
            return Err(OrganisationError::NoRoot);
        }
        let lookup = |id: &CourtId| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| OrganisationError::UnknownCourt(id.clone()))
        };
        let mut h = vec![false; n * n];
        for (a, b) in hierarchy {
            h[lookup(a)? * n + lookup(b)?] = true;
        }
        let mut bind = vec![false; n * n];
        for (a, b) in binding {
            bind[lookup(a)? * n + lookup(b)?] = true;
        }
        let id = |i: usize| court_ids[i].clone();

        for c in 0..n {
            if h[c * n + c] {
                return Err(OrganisationError::NotIrreflexive(id(c)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !h[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if h[b * n + c] && !h[a * n + c] {
                        return Err(OrganisationError::NotTransitive(id(a), id(b), id(c)));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if h[k * n + i] && h[j * n + i] && j != k && !h[k * n + j] && !h[j * n + k] {
                        return Err(OrganisationError::NotTreeLike(id(i), id(j), id(k)));
                    }
                }
            }
        }
        let root = (0..n)
            .find(|&r| (0..n).all(|c| c == r || h[r * n + c]))
            .ok_or(OrganisationError::NoUniversalRoot)?;
        for a in 0..n {
            for b in 0..n {
                let in_h = h[a * n + b];
                let in_b = bind[a * n + b];
                if (in_h && !in_b) || (in_b && !in_h && a != b) {
                    return Err(OrganisationError::BindingRegime(id(a), id(b)));
                }
            }
        }

        // Ancestors are totally ordered by tree-likeness; the parent is the
        // ancestor with the most ancestors of its own.
        let depth: Vec<usize> = (0..n).map(|c| (0..n).filter(|&a| h[a * n + c]).count()).collect();
        let specs: Vec<CourtSpec> = (0..n)
            .map(|c| CourtSpec {
                id: id(c),
                parent: (0..n)
                    .filter(|&a| h[a * n + c])
                    .max_by_key(|&a| depth[a])
                    .map(id),
                self_bound: bind[c * n + c],
            })
            .collect();
        let org = Organisation::build(&specs)?;
        debug_assert_eq!(org.root, CourtIx(root));
        Ok(org)
    }

    pub fn len(&self) -> usize {
        self.courts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.courts.is_empty()
    }

    pub fn courts(&self) -> &[Court] {
        &self.courts
    }

    pub fn court(&self, c: CourtIx) -> &Court {
        &self.courts[c.0]
    }

    pub fn indices(&self) -> impl Iterator<Item = CourtIx> {
        (0..self.courts.len()).map(CourtIx)
    }

    pub fn lookup(&self, id: &str) -> Option<CourtIx> {
        self.index.get(id).copied()
    }

    pub fn root(&self) -> CourtIx {
        self.root
    }

    /// `H(a, b)`: `a` is hierarchically higher than `b`.
    #[inline]
    pub fn is_higher(&self, a: CourtIx, b: CourtIx) -> bool {
        self.higher[a.0 * self.courts.len() + b.0]
    }

    /// `B(a, b)`: `a` issues decisions binding on `b`.
    #[inline]
    pub fn binds(&self, a: CourtIx, b: CourtIx) -> bool {
        self.is_higher(a, b) || (a == b && self.courts[a.0].self_bound)
    }

    pub fn is_self_bound(&self, c: CourtIx) -> bool {
        self.courts[c.0].self_bound
    }

    pub fn hierarchy_pairs(&self) -> Vec<(CourtIx, CourtIx)> {
        self.pairs(|a, b| self.is_higher(a, b))
    }

    pub fn binding_pairs(&self) -> Vec<(CourtIx, CourtIx)> {
        self.pairs(|a, b| self.binds(a, b))
    }

    fn pairs(&self, rel: impl Fn(CourtIx, CourtIx) -> bool) -> Vec<(CourtIx, CourtIx)> {
        let mut out = Vec::new();
        for a in self.indices() {
            for b in self.indices() {
                if rel(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The parent-edge form this organisation can be rebuilt from.
    pub fn specs(&self) -> Vec<CourtSpec> {
        self.courts
            .iter()
            .map(|c| CourtSpec {
                id: c.id.clone(),
                parent: c.parent.map(|p| self.courts[p.0].id.clone()),
                self_bound: c.self_bound,
            })
            .collect()
    }
}
