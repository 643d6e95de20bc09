//! One line per acceptance criterion; exits non-zero if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use stare_core::oracle::{check_property, sweep, CheckOptions, EnumerationBounds, PropertyId, SweepPlan};
use stare_core::{
    best_hierarchical, best_temporal_hierarchical, binding_not_overruled, binding_without_exception,
    build_precedent_graph, decide_naive, decide_th, is_binding_precedent, is_per_incuriam, overruled_before,
    overrules, relevant_set, CaseBase, CaseIx, Classification, CourtId, CourtIx, CourtRef, CourtSpec, Organisation,
    Party, RawCase, RawCaseBase, RawCourt, RawFact, RawRelevance,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn fixture_path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/running_example.json")
}

fn names(cb: &CaseBase, set: &[CaseIx]) -> Vec<String> {
    let mut v: Vec<String> = cb.ids(set).map(|i| i.to_string()).collect();
    v.sort();
    v
}

fn fixture_reproduction() -> Check {
    let start = Instant::now();
    let cb = stare_cli::load(&fixture_path()).map_err(|e| e.to_string())?;
    let ix = |id: &str| cb.lookup(id).unwrap();
    let star = ix("s_star");
    let expect_set = |what: &str, got: Vec<String>, want: &[&str]| {
        ensure(got == want, || format!("{what} = {got:?}, expected {want:?}"))
    };
    expect_set("relevant(s_star)", names(&cb, &relevant_set(&cb, star)), &["s1", "s4", "s5"])?;
    ensure(is_binding_precedent(&cb, ix("s1"), ix("s3")).is_some(), || "s1 not binding for s3".into())?;
    ensure(is_binding_precedent(&cb, ix("s2"), ix("s3")).is_none(), || "s2 binding for s3".into())?;
    ensure(overrules(&cb, ix("s3"), ix("s1")), || "s3 does not overrule s1".into())?;
    ensure(overrules(&cb, ix("s3"), ix("s2")), || "s3 does not overrule s2".into())?;
    ensure(overruled_before(&cb, ix("s1"), star), || "s1 not overruled before s_star".into())?;
    expect_set("binding_not_overruled(s_star)", names(&cb, &binding_not_overruled(&cb, star)), &["s4", "s5"])?;
    let inc = |id| is_per_incuriam(&cb, ix(id)).map_err(|e| e.to_string());
    ensure(inc("s4")? && !inc("s5")?, || "incuriam marks of s4/s5 wrong".into())?;
    let beta = binding_without_exception(&cb, star).map_err(|e| e.to_string())?;
    expect_set("binding_without_exception(s_star)", names(&cb, &beta), &["s4", "s5"])?;
    expect_set("best_th", names(&cb, &best_temporal_hierarchical(&cb, &beta)), &["s5"])?;
    let th = decide_th(&cb, star).map_err(|e| e.to_string())?;
    ensure(th.classification == Classification::Unambiguous(Party::Defendant), || format!("th: {th:?}"))?;
    let naive = decide_naive(&cb, star).map_err(|e| e.to_string())?;
    ensure(
        naive.values == [Party::Defendant, Party::Plaintiff] && naive.classification == Classification::Ambiguous,
        || format!("naive: {naive:?}"),
    )?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("all values reproduced in {elapsed:?}"))
}

fn proposition_suite() -> Check {
    let bounds = EnumerationBounds::default();
    let plan = SweepPlan {
        checks: PropertyId::ALL.iter().map(|&p| (p, true)).collect(),
        differential: false,
        stop_at_first: false,
    };
    let start = Instant::now();
    let report = sweep(&bounds, &plan).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut summary = Vec::new();
    for v in &report.verdicts {
        ensure(v.holds(), || format!("{} fails: {:?}", v.property, v.counterexample()))?;
        summary.push(format!("{} {}", v.property, v.models_in_scope));
    }
    ensure(elapsed <= Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!("{} models in {elapsed:.1?}; in scope: {}", report.models, summary.join(", ")))
}

fn hypothesis_necessity() -> Check {
    let options = CheckOptions { hypotheses: false, stop_at_first: true };
    let verdict = check_property(PropertyId::Unambiguous, &EnumerationBounds::default(), options)
        .map_err(|e| e.to_string())?;
    let cex = verdict.counterexample().ok_or("no counterexample without the hypothesis")?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("prop_unambiguous.json");
    std::fs::write(&file, serde_json::to_string_pretty(&cex.model).unwrap()).map_err(|e| e.to_string())?;
    let focus = &cex.witnesses[0];
    let out = Command::new(env!("CARGO_BIN_EXE_stare"))
        .args(["decide", file.to_str().unwrap(), "--case", focus])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let class = &report["payload"]["classification"];
    ensure(class == "Ambiguous", || format!("replay classified {class}"))?;
    Ok(format!("counterexample at {focus} ({}) replays to Ambiguous", cex.detail))
}

fn differential() -> Check {
    let plan = SweepPlan { checks: Vec::new(), differential: true, stop_at_first: false };
    let start = Instant::now();
    let report = sweep(&EnumerationBounds::default(), &plan).map_err(|e| e.to_string())?;
    let d = report.differential.expect("differential requested");
    ensure(d.mismatched_models == 0, || format!("{} mismatched models, first {:?}", d.mismatched_models, d.first))?;
    Ok(format!("{} models, {} comparisons, 0 mismatches in {:.1?}", d.models, d.comparisons, start.elapsed()))
}

fn random_specs(rng: &mut ChaCha8Rng, n: usize) -> Vec<CourtSpec> {
    (0..n)
        .map(|i| {
            let parent = (i > 0).then(|| format!("c{}", rng.gen_range(0..i)));
            CourtSpec::new(&format!("c{i}"), parent.as_deref(), rng.gen_bool(0.5))
        })
        .collect()
}

fn organisation_ok(org: &Organisation) -> Result<(), String> {
    let courts: Vec<CourtIx> = org.indices().collect();
    for &a in &courts {
        ensure(!org.is_higher(a, a), || "not irreflexive".into())?;
        ensure(a == org.root() || org.is_higher(org.root(), a), || "root not above all".into())?;
        for &b in &courts {
            let (h, bind) = (org.is_higher(a, b), org.binds(a, b));
            ensure((!h || bind) && (!bind || h || a == b), || "SD violated".into())?;
            for &c in &courts {
                ensure(!(org.is_higher(a, b) && org.is_higher(b, c)) || org.is_higher(a, c), || "not transitive".into())?;
                let above = org.is_higher(b, a) && org.is_higher(c, a) && b != c;
                ensure(!above || org.is_higher(b, c) || org.is_higher(c, b), || "not tree-like".into())?;
            }
        }
    }
    let ids: Vec<CourtId> = org.courts().iter().map(|c| c.id.clone()).collect();
    let pair = |(a, b): (CourtIx, CourtIx)| (ids[a.0].clone(), ids[b.0].clone());
    let h: Vec<_> = org.hierarchy_pairs().into_iter().map(pair).collect();
    let b: Vec<_> = org.binding_pairs().into_iter().map(pair).collect();
    Organisation::from_relations(&ids, &h, &b).map_err(|e| e.to_string())?;
    Ok(())
}

const FACTS: [(&str, Party); 5] = [
    ("p0", Party::Plaintiff),
    ("p1", Party::Plaintiff),
    ("p2", Party::Plaintiff),
    ("d0", Party::Defendant),
    ("d1", Party::Defendant),
];

fn raw_courts(specs: &[CourtSpec]) -> Vec<RawCourt> {
    specs
        .iter()
        .map(|s| RawCourt {
            id: s.id.to_string(),
            parent: s.parent.as_ref().map(|p| p.to_string()),
            self_bound: s.self_bound,
        })
        .collect()
}

fn random_case_base(rng: &mut ChaCha8Rng) -> RawCaseBase {
    let n_courts = rng.gen_range(1..=6);
    let specs = random_specs(rng, n_courts);
    let cases = (0..rng.gen_range(1..=12))
        .map(|i| {
            let outcome = rng.gen_bool(0.75).then(|| rng.gen_range(0..2u8));
            RawCase {
                id: format!("s{i}"),
                facts: FACTS.iter().filter(|_| rng.gen_bool(0.5)).map(|f| f.0.to_string()).collect(),
                court: CourtRef::One(format!("c{}", rng.gen_range(0..n_courts))),
                overrule_license: rng.gen_bool(0.3),
                outcome,
                time: outcome.map(|_| rng.gen_range(1..6)),
            }
        })
        .collect();
    RawCaseBase {
        facts: FACTS.iter().map(|&(id, side)| RawFact { id: id.into(), side: Some(side) }).collect(),
        courts: raw_courts(&specs),
        cases,
        relevance: RawRelevance::Afortiori,
    }
}

fn subset(a: &[CaseIx], b: &[CaseIx]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn case_base_ok(cb: &CaseBase) -> Result<(), String> {
    let err = |e: stare_core::EngineError| e.to_string();
    for s in cb.indices() {
        let tilde = binding_not_overruled(cb, s);
        let beta = binding_without_exception(cb, s).map_err(err)?;
        ensure(subset(&beta, &tilde), || "beta not within beta-tilde".into())?;
        let h = best_hierarchical(cb, &beta);
        let th = best_temporal_hierarchical(cb, &beta);
        ensure(subset(&th, &h) && subset(&h, &beta), || "Best_TH ⊆ Best_H ⊆ X violated".into())?;
        let g = build_precedent_graph(cb, s).map_err(err)?;
        ensure(g.edges.iter().all(|&(a, b)| cb.rank(b) < cb.rank(a)), || "graph edge not backwards in time".into())?;
        if !cb.outcome(s).is_decided() {
            let th = decide_th(cb, s).map_err(err)?;
            let naive = decide_naive(cb, s).map_err(err)?;
            ensure(th.values.iter().all(|v| naive.values.contains(v)), || "decide_th not within naive".into())?;
        }
    }
    Ok(())
}

fn structural_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..1000 {
        let n = rng.gen_range(1..=12);
        let org = Organisation::build(&random_specs(&mut rng, n)).map_err(|e| format!("organisation {i}: {e}"))?;
        organisation_ok(&org).map_err(|e| format!("organisation {i}: {e}"))?;
    }
    for i in 0..1000 {
        let raw = random_case_base(&mut rng);
        let cb = CaseBase::from_raw(&raw).map_err(|e| format!("case base {i}: {e}"))?;
        case_base_ok(&cb).map_err(|e| format!("case base {i}: {e}"))?;
    }
    Ok("1000 organisations and 1000 case bases".into())
}

/// 10,000 cases over a 10-court hierarchy; each case is relevant for a few
/// later cases, and the final case is undecided.
fn large_case_base(rng: &mut ChaCha8Rng) -> RawCaseBase {
    const N: usize = 10_000;
    let specs = random_specs(rng, 10);
    let mut edges = Vec::new();
    for t in 1..N {
        for _ in 0..rng.gen_range(1..=4) {
            let s = rng.gen_range(t.saturating_sub(500)..t);
            edges.push((format!("s{s}"), format!("s{t}")));
        }
    }
    for _ in 0..200 {
        edges.push((format!("s{}", rng.gen_range(N - 2000..N - 1)), format!("s{}", N - 1)));
    }
    edges.sort();
    edges.dedup();
    let cases = (0..N)
        .map(|i| {
            let last = i == N - 1;
            RawCase {
                id: format!("s{i}"),
                facts: Vec::new(),
                court: CourtRef::One(format!("c{}", if last { 9 } else { rng.gen_range(0..10) })),
                overrule_license: rng.gen_bool(0.1),
                outcome: (!last).then(|| rng.gen_range(0..2u8)),
                time: Some(i as u64 / 3 + 1),
            }
        })
        .collect();
    RawCaseBase {
        facts: Vec::new(),
        courts: raw_courts(&specs),
        cases,
        relevance: RawRelevance::Explicit { edges },
    }
}

fn engineering_target() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("large.json");
    std::fs::write(&file, serde_json::to_string(&large_case_base(&mut rng)).unwrap()).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_stare"))
        .args(["decide", file.to_str().unwrap(), "--case", "s9999"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("decide returned {} in {elapsed:.2?}", report["payload"]["classification"]))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("fixture reproduction", fixture_reproduction),
        ("proposition suite", proposition_suite),
        ("hypothesis necessity", hypothesis_necessity),
        ("differential testing", differential),
        ("structural invariants", structural_invariants),
        ("engineering target", engineering_target),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
