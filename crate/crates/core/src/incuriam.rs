//! Per-incuriam evaluation over the binding-precedent graph.
//!
//! The graph rooted at a case `s` links every node `n` to the members of
//! `Best_H(β̃_n)`. Edges always point strictly back in time, so the graph is
//! a DAG and marks can be settled bottom-up in ascending time rank.
//!
//! A case `n` decided as `o` is per incuriam iff some successor `s'` decided
//! as `ō` is *effective* for `n` (not per incuriam, or from a strictly higher
//! court) and no effective successor decided as `o` is at least as recent as
//! `s'`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::EngineError;
use crate::model::{CaseBase, CaseIx};
use crate::precedent::{best_hierarchical, binding_not_overruled};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IncuriamMark {
    pub incuriam: bool,
    /// The opposite-outcome successor that made the case per incuriam.
    pub witness: Option<CaseIx>,
}

#[derive(Clone, Debug)]
pub struct PrecedentGraph {
    pub focus: CaseIx,
    /// Presentation order (time rank, then id).
    pub nodes: Vec<CaseIx>,
    /// `(from, to)` with `to ∈ Best_H(β̃_from)`, sorted.
    pub edges: Vec<(CaseIx, CaseIx)>,
    /// Marks for every assessed node.
    pub marks: HashMap<CaseIx, IncuriamMark>,
}

impl PrecedentGraph {
    pub fn successors(&self, n: CaseIx) -> impl Iterator<Item = CaseIx> + '_ {
        self.edges.iter().filter(move |(a, _)| *a == n).map(|&(_, b)| b)
    }

    /// Graphviz rendering; nodes are labelled `id [outcome@court, rank]`.
    pub fn to_dot(&self, cb: &CaseBase) -> String {
        let mut out = String::from("digraph precedents {\n");
        for &n in &self.nodes {
            let case = cb.case(n);
            let court = &cb.organisation().court(case.court).id;
            let style = match self.marks.get(&n) {
                Some(m) if m.incuriam => ", style=dashed",
                _ => "",
            };
            let _ = writeln!(
                out,
                "  \"{id}\" [label=\"{id} [{o}@{court}, {r}]\"{style}];",
                id = case.id,
                o = case.outcome,
                r = case.time_rank,
            );
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [style=solid];", cb.id(a), cb.id(b));
        }
        out.push_str("}\n");
        out
    }
}

/// Memoizing evaluator. `β̃` sets, successor sets and marks are shared
/// across every query made through the same evaluator.
pub struct IncuriamEvaluator<'a> {
    cb: &'a CaseBase,
    beta_tilde: Vec<Option<Vec<CaseIx>>>,
    successors: Vec<Option<Vec<CaseIx>>>,
    marks: Vec<Option<IncuriamMark>>,
    /// Epoch stamps for graph walks.
    visited: Vec<u32>,
    epoch: u32,
}

impl<'a> IncuriamEvaluator<'a> {
    pub fn new(cb: &'a CaseBase) -> Self {
        IncuriamEvaluator {
            cb,
            beta_tilde: vec![None; cb.len()],
            successors: vec![None; cb.len()],
            marks: vec![None; cb.len()],
            visited: vec![0; cb.len()],
            epoch: 0,
        }
    }

    /// Cached [`binding_not_overruled`].
    pub fn binding_not_overruled(&mut self, n: CaseIx) -> &[CaseIx] {
        let cb = self.cb;
        self.beta_tilde[n.0].get_or_insert_with(|| binding_not_overruled(cb, n))
    }

    /// `Best_H(β̃_n)`, the out-neighbours of `n`.
    pub fn successors(&mut self, n: CaseIx) -> Result<&[CaseIx], EngineError> {
        if self.successors[n.0].is_none() {
            let cb = self.cb;
            let succ = best_hierarchical(cb, self.binding_not_overruled(n));
            if let Some(&bad) = succ.iter().find(|&&m| !cb.precedes(m, n)) {
                return Err(EngineError::CycleDetected {
                    from: cb.id(n).clone(),
                    to: cb.id(bad).clone(),
                });
            }
            self.successors[n.0] = Some(succ);
        }
        Ok(self.successors[n.0].as_deref().expect("just filled"))
    }

    fn reachable(&mut self, root: CaseIx, skip_marked: bool) -> Result<Vec<CaseIx>, EngineError> {
        self.epoch += 1;
        self.visited[root.0] = self.epoch;
        let mut seen = vec![root];
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            for i in 0..self.successors(n)?.len() {
                let m = self.successors[n.0].as_ref().expect("filled")[i];
                if skip_marked && self.marks[m.0].is_some() {
                    continue;
                }
                if self.visited[m.0] != self.epoch {
                    self.visited[m.0] = self.epoch;
                    seen.push(m);
                    stack.push(m);
                }
            }
        }
        Ok(seen)
    }

    /// Per-incuriam mark of an assessed case.
    pub fn mark(&mut self, s: CaseIx) -> Result<IncuriamMark, EngineError> {
        if !self.cb.outcome(s).is_decided() {
            return Err(EngineError::UndecidedState(self.cb.id(s).clone()));
        }
        if let Some(m) = self.marks[s.0] {
            return Ok(m);
        }
        // Marked nodes have all their descendants marked, so the walk can
        // stop at them.
        let mut pending = self.reachable(s, true)?;
        pending.sort_by_key(|&n| self.cb.rank(n));
        for n in pending {
            if self.cb.outcome(n).is_decided() {
                self.marks[n.0] = Some(self.settle(n));
            }
        }
        Ok(self.marks[s.0].expect("settled"))
    }

    pub fn is_per_incuriam(&mut self, s: CaseIx) -> Result<bool, EngineError> {
        Ok(self.mark(s)?.incuriam)
    }

    /// Computes the mark of `n` from the settled marks of its successors.
    fn settle(&self, n: CaseIx) -> IncuriamMark {
        let cb = self.cb;
        let org = cb.organisation();
        let own = cb.outcome(n);
        let court = cb.court(n);
        let succ = self.successors[n.0].as_ref().expect("successors computed");
        let effective = |x: CaseIx| {
            !self.marks[x.0].expect("successor settled").incuriam || org.is_higher(cb.court(x), court)
        };
        let witness = succ.iter().copied().find(|&against| {
            cb.outcome(against) != own
                && effective(against)
                && !succ.iter().any(|&with| {
                    cb.outcome(with) == own && cb.rank(against) <= cb.rank(with) && effective(with)
                })
        });
        IncuriamMark {
            incuriam: witness.is_some(),
            witness,
        }
    }

    /// `β_s`: `β̃_s` without same-court precedents decided per incuriam.
    pub fn binding_without_exception(&mut self, s: CaseIx) -> Result<Vec<CaseIx>, EngineError> {
        let court = self.cb.court(s);
        self.binding_not_overruled(s);
        let candidates = self.beta_tilde[s.0].take().expect("just filled");
        let mut out = Vec::with_capacity(candidates.len());
        let mut result = Ok(());
        for &p in &candidates {
            if self.cb.court(p) == court {
                match self.is_per_incuriam(p) {
                    Ok(true) => continue,
                    Ok(false) => {}
                    Err(e) => {
                        result = Err(e);
                        break;
                    }
                }
            }
            out.push(p);
        }
        self.beta_tilde[s.0] = Some(candidates);
        result.map(|()| out)
    }

    /// The graph rooted at `s` with marks for all assessed nodes.
    pub fn graph(&mut self, s: CaseIx) -> Result<PrecedentGraph, EngineError> {
        let mut nodes = self.reachable(s, false)?;
        let mut marks = HashMap::new();
        for &n in &nodes {
            if self.cb.outcome(n).is_decided() {
                marks.insert(n, self.mark(n)?);
            }
        }
        let mut edges: Vec<(CaseIx, CaseIx)> = nodes
            .iter()
            .flat_map(|&n| {
                self.successors[n.0]
                    .as_ref()
                    .expect("reached")
                    .iter()
                    .map(move |&m| (n, m))
            })
            .collect();
        edges.sort_by(|a, b| {
            self.cb
                .presentation_cmp(a.0, b.0)
                .then_with(|| self.cb.presentation_cmp(a.1, b.1))
        });
        self.cb.sort_cases(&mut nodes);
        Ok(PrecedentGraph {
            focus: s,
            nodes,
            edges,
            marks,
        })
    }
}

pub fn build_precedent_graph(cb: &CaseBase, s: CaseIx) -> Result<PrecedentGraph, EngineError> {
    IncuriamEvaluator::new(cb).graph(s)
}

pub fn is_per_incuriam(cb: &CaseBase, s: CaseIx) -> Result<bool, EngineError> {
    IncuriamEvaluator::new(cb).is_per_incuriam(s)
}

pub fn binding_without_exception(cb: &CaseBase, s: CaseIx) -> Result<Vec<CaseIx>, EngineError> {
    IncuriamEvaluator::new(cb).binding_without_exception(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::tests::running_example;

    fn fixture() -> CaseBase {
        CaseBase::from_raw(&running_example()).unwrap()
    }

    fn ix(cb: &CaseBase, id: &str) -> CaseIx {
        cb.lookup(id).unwrap()
    }

    fn edge_names(cb: &CaseBase, g: &PrecedentGraph) -> Vec<(String, String)> {
        g.edges.iter().map(|&(a, b)| (cb.id(a).to_string(), cb.id(b).to_string())).collect()
    }

    fn pairs(p: &[(&str, &str)]) -> Vec<(String, String)> {
        p.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn graphs() {
        let cb = fixture();
        let g = build_precedent_graph(&cb, ix(&cb, "s5")).unwrap();
        assert_eq!(cb.ids(&g.nodes).map(|i| i.as_str()).collect::<Vec<_>>(), ["s3", "s4", "s5"]);
        assert_eq!(edge_names(&cb, &g), pairs(&[("s4", "s3"), ("s5", "s4")]));

        let g = build_precedent_graph(&cb, ix(&cb, "s1")).unwrap();
        assert_eq!(g.nodes, vec![ix(&cb, "s1")]);
        assert!(g.edges.is_empty());

        let g = build_precedent_graph(&cb, ix(&cb, "s_star")).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(
            edge_names(&cb, &g),
            pairs(&[("s4", "s3"), ("s5", "s4"), ("s_star", "s4"), ("s_star", "s5")])
        );
        assert!(!g.marks.contains_key(&ix(&cb, "s_star")));
        assert!(g.marks[&ix(&cb, "s4")].incuriam);
        assert!(g.to_dot(&cb).contains("\"s4\" [label=\"s4 [1@c1, 4]\", style=dashed];"));
    }

    #[test]
    fn incuriam_marks() {
        let cb = fixture();
        let inc = |id: &str| is_per_incuriam(&cb, ix(&cb, id)).unwrap();
        assert!(inc("s4"));
        assert!(!inc("s5"));
        assert!(!inc("s1"));
        assert!(!inc("s2"));
        assert!(!inc("s3"));
        let mut ev = IncuriamEvaluator::new(&cb);
        assert_eq!(ev.mark(ix(&cb, "s4")).unwrap().witness, Some(ix(&cb, "s3")));
        assert!(matches!(
            ev.mark(ix(&cb, "s_star")),
            Err(EngineError::UndecidedState(_))
        ));
    }

    #[test]
    fn without_exception() {
        let cb = fixture();
        let b = |id: &str| binding_without_exception(&cb, ix(&cb, id)).unwrap();
        assert_eq!(b("s_star"), vec![ix(&cb, "s4"), ix(&cb, "s5")]);
        assert!(b("s5").is_empty());
        assert!(b("s1").is_empty());
        assert!(b("s3").is_empty());
    }

    #[test]
    fn memo_order_does_not_matter() {
        let cb = fixture();
        let mut fwd = IncuriamEvaluator::new(&cb);
        let mut rev = IncuriamEvaluator::new(&cb);
        let assessed: Vec<_> = cb.indices().filter(|&s| cb.outcome(s).is_decided()).collect();
        let a: Vec<_> = assessed.iter().map(|&s| fwd.mark(s).unwrap()).collect();
        let mut b: Vec<_> = assessed.iter().rev().map(|&s| rev.mark(s).unwrap()).collect();
        b.reverse();
        assert_eq!(a, b);
    }
}
