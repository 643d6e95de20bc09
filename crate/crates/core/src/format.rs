//! Wire form of a case base, mirroring the JSON file layout one-to-one.
//!
//! ```json
//! {
//!   "facts":  [{"id": "p", "side": "plaintiff"}],
//!   "courts": [{"id": "c0", "parent": null, "self_bound": true}],
//!   "cases":  [{"id": "s1", "facts": ["p"], "court": "c0",
//!               "overrule_license": false, "outcome": 1, "time": 1}],
//!   "relevance": {"mode": "afortiori"}
//! }
//! ```
//!
//! Values of these types are unchecked; see [`crate::validate_model`].

use serde::{Deserialize, Serialize};

use crate::model::Party;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCaseBase {
    pub facts: Vec<RawFact>,
    pub courts: Vec<RawCourt>,
    #[serde(default)]
    pub cases: Vec<RawCase>,
    #[serde(default)]
    pub relevance: RawRelevance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFact {
    pub id: String,
    #[serde(default)]
    pub side: Option<Party>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCourt {
    pub id: String,
    #[serde(default)]
    pub parent: Option<String>,
    #[serde(default)]
    pub self_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCase {
    pub id: String,
    #[serde(default)]
    pub facts: Vec<String>,
    pub court: CourtRef,
    #[serde(default)]
    pub overrule_license: bool,
    /// `1` plaintiff wins, `0` defendant wins, `null` undecided.
    #[serde(default)]
    pub outcome: Option<u8>,
    /// Ordinal time rank. May be omitted for undecided cases, which then
    /// default to one past the latest assessed case.
    #[serde(default)]
    pub time: Option<u64>,
}

/// The court atoms of a case. Files normally carry a single id; a list is
/// accepted so that raw atom sets with zero or several courts can be
/// represented and rejected by validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CourtRef {
    One(String),
    Many(Vec<String>),
}

impl CourtRef {
    pub fn ids(&self) -> Vec<&str> {
        match self {
            CourtRef::One(c) => vec![c.as_str()],
            CourtRef::Many(cs) => cs.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum RawRelevance {
    #[default]
    Afortiori,
    Explicit {
        #[serde(default)]
        edges: Vec<(String, String)>,
    },
}
