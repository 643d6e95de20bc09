//! Engine against reference, operation by operation.

use crate::decision::{best_temporal, best_temporal_hierarchical, decide_with, Principle};
use crate::error::EngineError;
use crate::incuriam::IncuriamEvaluator;
use crate::model::{CaseBase, CaseIx};
use crate::oracle::props::ModelContext;
use crate::oracle::reference::{RefModel, State};
use crate::organisation::CourtIx;
use crate::precedent::{
    best_hierarchical, has_overruling_power, is_binding_precedent, overruled_before, overrules, precedents_of,
};
use crate::relevance::relevant_set;

/// First disagreement found on a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub operation: &'static str,
    pub input: String,
    pub engine: String,
    pub reference: String,
}

struct Cmp<'a> {
    cb: &'a CaseBase,
    comparisons: u64,
    first: Option<Mismatch>,
}

impl Cmp<'_> {
    fn record(&mut self, op: &'static str, input: String, engine: String, reference: String) {
        if self.first.is_none() {
            self.first = Some(Mismatch { operation: op, input, engine, reference });
        }
    }

    fn name(&self, s: State) -> String {
        self.cb.id(CaseIx(s)).to_string()
    }

    fn pair(&self, a: State, b: State) -> String {
        format!("({}, {})", self.name(a), self.name(b))
    }

    fn value<T: PartialEq + std::fmt::Debug>(&mut self, op: &'static str, input: impl FnOnce(&Self) -> String, engine: T, reference: T) {
        self.comparisons += 1;
        if engine != reference {
            let input = input(self);
            self.record(op, input, format!("{engine:?}"), format!("{reference:?}"));
        }
    }

    /// Compares an engine set, in any order, with an ascending reference set.
    fn set(&mut self, op: &'static str, t: State, engine: Result<Vec<CaseIx>, EngineError>, reference: &[State]) {
        self.comparisons += 1;
        let mut engine = engine;
        let same = match &mut engine {
            Ok(set) => {
                set.sort_unstable();
                set.len() == reference.len() && set.iter().zip(reference).all(|(a, &b)| a.0 == b)
            }
            Err(_) => false,
        };
        if !same {
            let engine = match engine {
                Ok(set) => format!("{:?}", self.cb.ids(&set).collect::<Vec<_>>()),
                Err(e) => e.to_string(),
            };
            let reference = format!("{:?}", reference.iter().map(|&s| self.name(s)).collect::<Vec<_>>());
            let input = self.name(t);
            self.record(op, input, engine, reference);
        }
    }
}

fn as_ix(set: &[State]) -> Vec<CaseIx> {
    set.iter().map(|&s| CaseIx(s)).collect()
}

/// Compares every engine operation with its transcription on one model.
/// Returns the number of comparisons and the first mismatch.
pub(crate) fn compare_model(cb: &CaseBase, r: &RefModel, ctx: &ModelContext) -> (u64, Option<Mismatch>) {
    let mut c = Cmp { cb, comparisons: 0, first: None };
    let n = cb.len();
    let mut ev = IncuriamEvaluator::new(cb);
    let n_courts = cb.organisation().len();

    for &s in r.assessed() {
        let si = CaseIx(s);
        for court in 0..n_courts {
            let engine = has_overruling_power(cb, cb.court(si), CourtIx(court), si).ok();
            let reference = Some(r.power(r.court(s), court, s));
            c.value("has_overruling_power", |c| format!("{} over c{court}", c.name(s)), engine, reference);
        }
        for &x in r.assessed() {
            c.value("overrules", |c| c.pair(x, s), overrules(cb, CaseIx(x), si), r.overrules(x, s));
        }
        for t in 0..n {
            let ti = CaseIx(t);
            c.value("overruled_before", |c| c.pair(s, t), overruled_before(cb, si, ti), r.overruled_t(s, t));
            let engine = is_binding_precedent(cb, si, ti).map(|o| o.value());
            c.value("is_binding_precedent", |c| c.pair(s, t), engine, r.beta(s, t));
        }
        c.value("is_per_incuriam", |c| c.name(s), ev.is_per_incuriam(si).ok(), ctx.incuriam[s]);
    }

    for t in 0..n {
        let ti = CaseIx(t);
        c.set("relevant_set", t, Ok(relevant_set(cb, ti)), &r.relevant_for(t));

        let mut engine: Vec<(State, u8, bool)> = precedents_of(cb, ti)
            .into_iter()
            .map(|a| (a.precedent.0, a.direction.value(), a.binding))
            .collect();
        engine.sort_unstable();
        let mut reference = Vec::new();
        for &s in r.assessed() {
            for o in [0, 1] {
                if r.pi(s, t, o) {
                    reference.push((s, o, r.b(r.court(s), r.court(t))));
                }
            }
        }
        c.value("precedents_of", |c| c.name(t), engine, reference);

        let bt = &ctx.beta_tilde[t];
        c.set("binding_not_overruled", t, Ok(ev.binding_not_overruled(ti).to_vec()), bt);
        if bt.is_empty() {
            c.set("best_hierarchical", t, Ok(best_hierarchical(cb, &[])), &[]);
            c.set("successors", t, ev.successors(ti).map(<[CaseIx]>::to_vec), &[]);
        } else {
            let best_h = r.best_h(bt);
            c.set("best_hierarchical", t, Ok(best_hierarchical(cb, &as_ix(bt))), &best_h);
            c.set("successors", t, ev.successors(ti).map(<[CaseIx]>::to_vec), &best_h);
            let engine = ev.graph(ti).map(|g| {
                let mut edges: Vec<(State, State)> = g.edges.iter().map(|&(a, b)| (a.0, b.0)).collect();
                edges.sort_unstable();
                let mut nodes: Vec<State> = g.nodes.iter().map(|s| s.0).collect();
                nodes.sort_unstable();
                (nodes, edges)
            });
            c.value("build_precedent_graph", |c| c.name(t), engine.ok(), Some(r.graph(t)));
        }

        let beta = &ctx.beta[t];
        c.set("binding_without_exception", t, ev.binding_without_exception(ti), beta);
        let beta_ix = as_ix(beta);
        c.set("best_temporal", t, Ok(best_temporal(cb, &beta_ix)), &r.best_t(beta));
        let best_th = r.best_th(beta);
        c.set("best_temporal_hierarchical", t, Ok(best_temporal_hierarchical(cb, &beta_ix)), &best_th);

        if r.f(t).is_none() {
            for (principle, op, reference) in [
                (Principle::TemporalHierarchical, "decide_th", r.values(&best_th)),
                (Principle::Naive, "decide_naive", r.values(beta)),
            ] {
                let engine = decide_with(&mut ev, cb, ti, &principle)
                    .map(|d| d.values.iter().map(|v| v.value()).collect::<Vec<u8>>())
                    .ok();
                c.value(op, |c| c.name(t), engine, Some(reference));
            }
        }
    }
    (c.comparisons, c.first)
}
