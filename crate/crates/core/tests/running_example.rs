use std::time::Instant;

use stare_core::{
    best_hierarchical, best_temporal_hierarchical, binding_not_overruled, binding_without_exception,
    build_precedent_graph, decide_naive, decide_th, is_binding_precedent, is_per_incuriam, overruled_before,
    overrules, relevant_set, CaseBase, CaseIx, Classification, Party, RawCaseBase,
};

fn fixture() -> CaseBase {
    let text = include_str!("../../../fixtures/running_example.json");
    let raw: RawCaseBase = serde_json::from_str(text).unwrap();
    CaseBase::from_raw(&raw).unwrap()
}

fn ids(cb: &CaseBase, set: &[CaseIx]) -> Vec<String> {
    let mut v: Vec<String> = cb.ids(set).map(|i| i.to_string()).collect();
    v.sort();
    v
}

fn ix(cb: &CaseBase, id: &str) -> CaseIx {
    cb.lookup(id).unwrap()
}

#[test]
fn relevance_of_new_case() {
    let cb = fixture();
    assert_eq!(ids(&cb, &relevant_set(&cb, ix(&cb, "s_star"))), ["s1", "s4", "s5"]);
}

#[test]
fn relevance_matches_subset_check() {
    let cb = fixture();
    let names = ["s1", "s2", "s3", "s4", "s5"];
    let facts = |id: &str| -> Vec<&str> {
        match id {
            "s1" | "s4" => vec!["p", "t", "v"],
            "s2" | "s3" => vec!["p", "r", "t", "v"],
            _ => vec!["p", "t", "q"],
        }
    };
    let plaintiff = ["p", "q", "r"];
    for s in names {
        for t in names {
            let winner_plaintiff = matches!(s, "s1" | "s2" | "s4");
            let (fs, ft) = (facts(s), facts(t));
            let pro = |f: &str| plaintiff.contains(&f) == winner_plaintiff;
            let expected = fs.iter().filter(|f| pro(f)).all(|f| ft.contains(f))
                && ft.iter().filter(|f| !pro(f)).all(|f| fs.contains(f));
            let got = relevant_set(&cb, ix(&cb, t)).contains(&ix(&cb, s));
            assert_eq!(got, expected, "{s} relevant for {t}");
        }
    }
}

#[test]
fn binding_and_overruling() {
    let cb = fixture();
    let (s1, s2, s3, star) = (ix(&cb, "s1"), ix(&cb, "s2"), ix(&cb, "s3"), ix(&cb, "s_star"));
    assert_eq!(is_binding_precedent(&cb, s1, s3), Some(Party::Plaintiff));
    assert_eq!(is_binding_precedent(&cb, s2, s3), None);
    assert!(overrules(&cb, s3, s1));
    assert!(overrules(&cb, s3, s2));
    assert!(overruled_before(&cb, s1, star));
    assert_eq!(ids(&cb, &binding_not_overruled(&cb, star)), ["s4", "s5"]);
}

#[test]
fn incuriam_marks() {
    let cb = fixture();
    let marks: Vec<bool> = ["s1", "s2", "s3", "s4", "s5"]
        .iter()
        .map(|id| is_per_incuriam(&cb, ix(&cb, id)).unwrap())
        .collect();
    assert_eq!(marks, [false, false, false, true, false]);
    assert_eq!(ids(&cb, &binding_without_exception(&cb, ix(&cb, "s5")).unwrap()), Vec::<String>::new());
}

#[test]
fn graph_of_new_case() {
    let cb = fixture();
    let g = build_precedent_graph(&cb, ix(&cb, "s_star")).unwrap();
    assert_eq!(ids(&cb, &g.nodes), ["s3", "s4", "s5", "s_star"]);
    let mut edges: Vec<(String, String)> =
        g.edges.iter().map(|&(a, b)| (cb.id(a).to_string(), cb.id(b).to_string())).collect();
    edges.sort();
    let expected = [("s4", "s3"), ("s5", "s4"), ("s_star", "s4"), ("s_star", "s5")];
    assert_eq!(edges, expected.map(|(a, b)| (a.to_string(), b.to_string())));
}

#[test]
fn decisions() {
    let start = Instant::now();
    let cb = fixture();
    let star = ix(&cb, "s_star");
    let beta = binding_without_exception(&cb, star).unwrap();
    assert_eq!(ids(&cb, &beta), ["s4", "s5"]);
    assert_eq!(ids(&cb, &best_hierarchical(&cb, &beta)), ["s4", "s5"]);
    assert_eq!(ids(&cb, &best_temporal_hierarchical(&cb, &beta)), ["s5"]);

    let th = decide_th(&cb, star).unwrap();
    assert_eq!(th.values, [Party::Defendant]);
    assert_eq!(th.classification, Classification::Unambiguous(Party::Defendant));
    let naive = decide_naive(&cb, star).unwrap();
    assert_eq!(naive.values, [Party::Defendant, Party::Plaintiff]);
    assert_eq!(naive.classification, Classification::Ambiguous);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn simultaneous_conflict_is_ambiguous() {
    let text = include_str!("../../../fixtures/running_example.json");
    let mut raw: RawCaseBase = serde_json::from_str(text).unwrap();
    raw.cases[4].time = Some(4);
    let cb = CaseBase::from_raw(&raw).unwrap();
    let d = decide_th(&cb, ix(&cb, "s_star")).unwrap();
    assert_eq!(d.classification, Classification::Ambiguous);
}

#[test]
fn round_trip() {
    let cb = fixture();
    let raw = cb.to_raw();
    let again = CaseBase::from_raw(&serde_json::from_str(&serde_json::to_string(&raw).unwrap()).unwrap()).unwrap();
    assert_eq!(again.to_raw(), raw);
}
