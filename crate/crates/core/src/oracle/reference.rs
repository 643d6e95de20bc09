//! Direct transcriptions of the definitions, used as the independent side
//! of differential checks.
//!
//! A state is an atom bitmask (facts, then courts, then the license atom).
//! The hierarchy is re-derived from parent edges, nothing is memoized, and
//! quantifiers range over the whole state space. Only the primitive data of
//! a [`CaseBase`] is read: fact sides, fact sets, courts, licenses, outcomes,
//! ranks, parent edges, self-binding flags and explicit relevance edges.

use crate::model::{CaseBase, Party, RelevanceMode};

pub type State = usize;

#[derive(Clone, Debug)]
pub struct RefModel {
    n_courts: usize,
    plaintiff_mask: u64,
    defendant_mask: u64,
    court_shift: u32,
    license_bit: u64,
    /// `higher[a][b]` is `H(a, b)`.
    higher: Vec<Vec<bool>>,
    self_bound: Vec<bool>,
    atoms: Vec<u64>,
    outcome: Vec<Option<u8>>,
    rank: Vec<u64>,
    /// States with a defined outcome; the domain of every quantifier that
    /// requires `f` to be defined.
    assessed: Vec<State>,
    /// `None` in a fortiori mode; otherwise `edges[t]` lists `s` with `s R t`.
    explicit: Option<Vec<Vec<State>>>,
}

impl RefModel {
    /// `None` when the atom universe does not fit in 64 bits.
    pub fn from_case_base(cb: &CaseBase) -> Option<RefModel> {
        let n_facts = cb.facts().len();
        let courts = cb.organisation().courts();
        let n_courts = courts.len();
        if n_facts + n_courts + 1 > 64 {
            return None;
        }
        let mut plaintiff_mask = 0;
        let mut defendant_mask = 0;
        for (i, f) in cb.facts().iter().enumerate() {
            match f.side {
                Some(Party::Plaintiff) => plaintiff_mask |= 1 << i,
                Some(Party::Defendant) => defendant_mask |= 1 << i,
                None => {}
            }
        }
        let court_shift = n_facts as u32;
        let license_bit = 1u64 << (n_facts + n_courts);

        // H from the transitive closure of parent edges.
        let mut higher = vec![vec![false; n_courts]; n_courts];
        for (c, court) in courts.iter().enumerate() {
            let mut cur = court.parent;
            while let Some(p) = cur {
                higher[p.0][c] = true;
                cur = courts[p.0].parent;
            }
        }
        let self_bound = courts.iter().map(|c| c.self_bound).collect();

        let mut atoms = Vec::with_capacity(cb.len());
        let mut outcome = Vec::with_capacity(cb.len());
        let mut rank = Vec::with_capacity(cb.len());
        for c in cb.cases() {
            let mut a = 0u64;
            for f in c.facts.iter() {
                a |= 1 << f;
            }
            a |= 1 << (court_shift as usize + c.court.0);
            if c.overrule_license {
                a |= license_bit;
            }
            atoms.push(a);
            outcome.push(c.outcome.value());
            rank.push(c.time_rank);
        }
        let explicit = match cb.relevance_mode() {
            RelevanceMode::Afortiori => None,
            RelevanceMode::Explicit => {
                let mut edges = vec![Vec::new(); cb.len()];
                for (s, t) in cb.explicit_edges().unwrap_or_default() {
                    edges[t.0].push(s.0);
                }
                Some(edges)
            }
        };
        Some(RefModel {
            n_courts,
            plaintiff_mask,
            defendant_mask,
            court_shift,
            license_bit,
            higher,
            self_bound,
            atoms,
            assessed: assessed_of(&outcome),
            outcome,
            rank,
            explicit,
        })
    }

    /// Same states with new outcomes and ranks.
    pub fn reassessed(&self, outcome: Vec<Option<u8>>, rank: Vec<u64>) -> RefModel {
        RefModel {
            assessed: assessed_of(&outcome),
            outcome,
            rank,
            ..self.clone()
        }
    }

    /// In-place form of [`RefModel::reassessed`].
    pub fn reassess(&mut self, outcome: impl IntoIterator<Item = Option<u8>>, rank: &[u64]) {
        self.outcome.clear();
        self.outcome.extend(outcome);
        self.rank.clear();
        self.rank.extend_from_slice(rank);
        self.assessed = assessed_of(&self.outcome);
    }

    pub fn assessed(&self) -> &[State] {
        &self.assessed
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn states(&self) -> std::ops::Range<State> {
        0..self.atoms.len()
    }

    pub fn f(&self, s: State) -> Option<u8> {
        self.outcome[s]
    }

    pub fn rank(&self, s: State) -> u64 {
        self.rank[s]
    }

    pub fn has_license(&self, s: State) -> bool {
        self.atoms[s] & self.license_bit != 0
    }

    /// The unique court atom of `s`.
    pub fn court(&self, s: State) -> usize {
        (0..self.n_courts)
            .find(|&c| self.atoms[s] & (1 << (self.court_shift as usize + c)) != 0)
            .expect("state without court")
    }

    pub fn h(&self, a: usize, b: usize) -> bool {
        self.higher[a][b]
    }

    pub fn b(&self, a: usize, b: usize) -> bool {
        self.higher[a][b] || (a == b && self.self_bound[a])
    }

    pub fn le_t(&self, s: State, t: State) -> bool {
        self.rank[s] <= self.rank[t]
    }

    pub fn lt_t(&self, s: State, t: State) -> bool {
        self.le_t(s, t) && !self.le_t(t, s)
    }

    fn facts_of(&self, o: u8) -> u64 {
        if o == 1 {
            self.plaintiff_mask
        } else {
            self.defendant_mask
        }
    }

    /// `s R_F t`.
    pub fn r_f(&self, s: State, t: State) -> bool {
        let Some(o) = self.f(s) else { return false };
        let (fo, fbar) = (self.facts_of(o), self.facts_of(1 - o));
        let (a, b) = (self.atoms[s], self.atoms[t]);
        (a & fo) & !(b & fo) == 0 && (b & fbar) & !(a & fbar) == 0
    }

    /// `s R t` under the model's relevance.
    pub fn r(&self, s: State, t: State) -> bool {
        match &self.explicit {
            None => self.r_f(s, t),
            Some(edges) => edges[t].contains(&s),
        }
    }

    /// `{s | s R t}`, ascending. Under a fortiori relevance only assessed
    /// states can be relevant, so only they are tried.
    pub fn relevant_for(&self, t: State) -> Vec<State> {
        match &self.explicit {
            None => self.assessed.iter().copied().filter(|&s| self.r_f(s, t)).collect(),
            Some(_) => self.states().filter(|&s| self.r(s, t)).collect(),
        }
    }

    /// `Π(s, t, o)`.
    pub fn pi(&self, s: State, t: State, o: u8) -> bool {
        self.f(s) == Some(o) && self.r(s, t) && self.lt_t(s, t)
    }

    /// `β(s, t, o)`.
    pub fn beta_o(&self, s: State, t: State, o: u8) -> bool {
        self.pi(s, t, o) && self.b(self.court(s), self.court(t))
    }

    /// `β(s, t)`: the direction, if any.
    pub fn beta(&self, s: State, t: State) -> Option<u8> {
        [0, 1].into_iter().find(|&o| self.beta_o(s, t, o))
    }

    /// `O(c', c | s')`.
    pub fn power(&self, c_new: usize, c: usize, s_new: State) -> bool {
        self.h(c_new, c) || (c_new == c && self.has_license(s_new))
    }

    /// `O(s', s)`.
    pub fn overrules(&self, s_new: State, s: State) -> bool {
        [0u8, 1].into_iter().any(|o| {
            self.f(s) == Some(o)
                && self.f(s_new) == Some(1 - o)
                && self.pi(s, s_new, o)
                && self.power(self.court(s_new), self.court(s), s_new)
        })
    }

    /// `Overruled_T(s, t)`.
    pub fn overruled_t(&self, s: State, t: State) -> bool {
        self.f(s).is_some() && self.assessed.iter().any(|&x| self.overrules(x, s) && self.lt_t(x, t))
    }

    /// `β̃_s`.
    pub fn beta_tilde(&self, s: State) -> Vec<State> {
        self.assessed
            .iter()
            .copied()
            .filter(|&p| {
                self.beta(p, s).is_some()
                    && !self.overruled_t(p, s)
                    && (!self.has_license(s) || self.court(s) != self.court(p))
            })
            .collect()
    }

    /// `Best_H(X)`.
    pub fn best_h(&self, set: &[State]) -> Vec<State> {
        set.iter()
            .copied()
            .filter(|&s| !set.iter().any(|&x| self.h(self.court(x), self.court(s))))
            .collect()
    }

    /// `Best_T(X)`.
    pub fn best_t(&self, set: &[State]) -> Vec<State> {
        set.iter()
            .copied()
            .filter(|&s| set.iter().all(|&x| self.le_t(x, s)))
            .collect()
    }

    pub fn best_th(&self, set: &[State]) -> Vec<State> {
        self.best_t(&self.best_h(set))
    }

    /// `G = ⋃ G_n` rooted at `s`: nodes and edges, each sorted. Each round
    /// adds the `Best_H(β̃_n)` edges of every node so far; the out-edges of a
    /// node are computed once.
    pub fn graph(&self, s: State) -> (Vec<State>, Vec<(State, State)>) {
        let mut out_edges: Vec<(State, Vec<State>)> = Vec::new();
        let mut nodes = vec![s];
        let mut edges: Vec<(State, State)> = Vec::new();
        loop {
            let mut next_nodes = nodes.clone();
            let mut next_edges = edges.clone();
            for &n in &nodes {
                let succ = match out_edges.iter().find(|(m, _)| *m == n) {
                    Some((_, succ)) => succ.clone(),
                    None => {
                        let succ = self.best_h(&self.beta_tilde(n));
                        out_edges.push((n, succ.clone()));
                        succ
                    }
                };
                for m in succ {
                    next_nodes.push(m);
                    next_edges.push((n, m));
                }
            }
            next_nodes.sort_unstable();
            next_nodes.dedup();
            next_edges.sort_unstable();
            next_edges.dedup();
            if next_nodes == nodes && next_edges == edges {
                return (nodes, edges);
            }
            nodes = next_nodes;
            edges = next_edges;
        }
    }

    /// `Incuriam(s)`, recursing through fresh graphs without memoization.
    pub fn incuriam(&self, s: State) -> bool {
        let Some(o) = self.f(s) else {
            panic!("incuriam is undefined for undecided states");
        };
        let (_, edges) = self.graph(s);
        let adjacent: Vec<State> = edges.iter().filter(|(a, _)| *a == s).map(|&(_, b)| b).collect();
        let c = self.court(s);
        let implied = |x: State| !self.incuriam(x) || self.h(self.court(x), c);
        adjacent.iter().any(|&against| {
            self.f(against) != Some(o)
                && implied(against)
                && !adjacent
                    .iter()
                    .any(|&with| self.f(with) == Some(o) && self.le_t(against, with) && implied(with))
        })
    }

    /// Per-incuriam status of every assessed state, `None` for undecided ones.
    pub fn incuriam_all(&self) -> Vec<Option<bool>> {
        self.states()
            .map(|s| self.f(s).map(|_| self.incuriam(s)))
            .collect()
    }

    /// `β_s`, given the per-incuriam status of assessed states.
    pub fn beta_s(&self, s: State, incuriam: &[Option<bool>]) -> Vec<State> {
        self.without_own_incuriam(s, &self.beta_tilde(s), incuriam)
    }

    /// Members of `set` not decided per incuriam by the court of `s`.
    pub fn without_own_incuriam(&self, s: State, set: &[State], incuriam: &[Option<bool>]) -> Vec<State> {
        set.iter()
            .copied()
            .filter(|&p| !(self.court(p) == self.court(s) && incuriam[p] == Some(true)))
            .collect()
    }

    /// `f₂*(s*)`, as sorted outcome values.
    pub fn decide_th(&self, focus: State, incuriam: &[Option<bool>]) -> Vec<u8> {
        self.values(&self.best_th(&self.beta_s(focus, incuriam)))
    }

    /// The naive decision function at `focus`.
    pub fn decide_naive(&self, focus: State, incuriam: &[Option<bool>]) -> Vec<u8> {
        self.values(&self.beta_s(focus, incuriam))
    }

    /// Outcome values of `set`, sorted.
    pub fn values(&self, set: &[State]) -> Vec<u8> {
        let mut v: Vec<u8> = set.iter().filter_map(|&s| self.f(s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn assessed_of(outcome: &[Option<u8>]) -> Vec<State> {
    (0..outcome.len()).filter(|&s| outcome[s].is_some()).collect()
}
