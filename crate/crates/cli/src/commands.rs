use std::path::Path;

use serde_json::{json, Value};
use stare_core::oracle::{
    check_property, sweep, CheckOptions, EnumerationBounds, PropertyId, PropertyVerdict, RankRegime, SweepPlan,
};
use stare_core::{
    binding_not_overruled, completeness_gap, decide, precedents_of, relevant_set, validate_model, CaseBase, CaseIx,
    IncuriamEvaluator, Principle, RelevanceConfig, RelevanceMode,
};

use crate::{load, parse_raw, read, CheckArgs, Cli, CliError, Command, Format, PrincipleArg, RanksArg, RelevanceOverride, Report};

/// Runs the command and returns its report with the exit status.
pub fn execute(cli: &Cli) -> Result<(Report, u8), CliError> {
    if cli.format == Format::Dot && !matches!(cli.command, Command::Explain(_)) {
        return Err(CliError::Usage("dot output is only available for `explain`".into()));
    }
    match &cli.command {
        Command::Validate { file, complete } => validate(file, *complete),
        Command::Relevance { file, case } => {
            let cb = open(file, cli)?;
            let targets = match case {
                Some(id) => vec![cb.lookup(id)?],
                None => cb.indices().collect(),
            };
            let rows: Vec<Value> = targets
                .into_iter()
                .map(|t| json!({"case": cb.id(t).as_str(), "relevant": names(&cb, &relevant_set(&cb, t))}))
                .collect();
            let command = json!({"verb": "relevance", "file": file, "case": case});
            ok(command, json!({"relevance": rows}), &cb)
        }
        Command::Precedents(args) => {
            let cb = open(&args.file, cli)?;
            let t = cb.lookup(&args.case)?;
            let precedents: Vec<Value> = precedents_of(&cb, t)
                .into_iter()
                .map(|a| {
                    json!({
                        "precedent": cb.id(a.precedent).as_str(),
                        "direction": a.direction.value(),
                        "binding": a.binding,
                        "overruled": stare_core::overruled_before(&cb, a.precedent, t),
                    })
                })
                .collect();
            let mut ev = IncuriamEvaluator::new(&cb);
            let binding = ev.binding_without_exception(t)?;
            let mut binding_sorted = binding.clone();
            cb.sort_cases(&mut binding_sorted);
            let payload = json!({
                "case": args.case,
                "precedents": precedents,
                "binding_not_overruled": names(&cb, &binding_not_overruled(&cb, t)),
                "binding_without_exception": names(&cb, &binding_sorted),
            });
            ok(json!({"verb": "precedents", "file": args.file, "case": args.case}), payload, &cb)
        }
        Command::Incuriam { file, case } => {
            let cb = open(file, cli)?;
            let targets: Vec<CaseIx> = match case {
                Some(id) => vec![cb.lookup(id)?],
                None => {
                    let mut v: Vec<CaseIx> = cb.indices().filter(|&s| cb.outcome(s).is_decided()).collect();
                    cb.sort_cases(&mut v);
                    v
                }
            };
            let mut ev = IncuriamEvaluator::new(&cb);
            let mut marks = Vec::new();
            for s in targets {
                let m = ev.mark(s)?;
                marks.push(json!({
                    "case": cb.id(s).as_str(),
                    "incuriam": m.incuriam,
                    "witness": m.witness.map(|w| cb.id(w).to_string()),
                }));
            }
            ok(json!({"verb": "incuriam", "file": file, "case": case}), json!({"marks": marks}), &cb)
        }
        Command::Explain(args) => {
            let cb = open(&args.file, cli)?;
            let s = cb.lookup(&args.case)?;
            let graph = IncuriamEvaluator::new(&cb).graph(s)?;
            let nodes: Vec<Value> = graph
                .nodes
                .iter()
                .map(|&n| {
                    let case = cb.case(n);
                    json!({
                        "id": case.id.as_str(),
                        "outcome": case.outcome.value(),
                        "court": cb.organisation().court(case.court).id.as_str(),
                        "rank": case.time_rank,
                        "incuriam": graph.marks.get(&n).map(|m| m.incuriam),
                    })
                })
                .collect();
            let edges: Vec<Value> = graph
                .edges
                .iter()
                .map(|&(a, b)| json!([cb.id(a).as_str(), cb.id(b).as_str()]))
                .collect();
            let mut payload = json!({"focus": args.case, "nodes": nodes, "edges": edges});
            if cli.format == Format::Dot {
                payload["dot"] = Value::String(graph.to_dot(&cb));
            }
            ok(json!({"verb": "explain", "file": args.file, "case": args.case}), payload, &cb)
        }
        Command::Decide { target, principle } => {
            let cb = open(&target.file, cli)?;
            let focus = cb.lookup(&target.case)?;
            let p = match principle {
                PrincipleArg::Th => Principle::TemporalHierarchical,
                PrincipleArg::Naive => Principle::Naive,
            };
            let d = decide(&cb, focus, p)?;
            let support: serde_json::Map<String, Value> = d
                .support
                .iter()
                .map(|(o, cases)| (o.value().to_string(), json!(names(&cb, cases))))
                .collect();
            let payload = json!({
                "case": target.case,
                "principle": p.to_string(),
                "values": d.values.iter().map(|v| v.value()).collect::<Vec<_>>(),
                "classification": d.classification.label(),
                "support": support,
            });
            let command = json!({"verb": "decide", "file": target.file, "case": target.case, "principle": principle});
            ok(command, payload, &cb)
        }
        Command::CheckProps(args) => check_props(args),
    }
}

fn ok(command: Value, payload: Value, cb: &CaseBase) -> Result<(Report, u8), CliError> {
    Ok((
        Report {
            command,
            payload,
            diagnostics: cb.warnings().warnings().map(|w| w.to_string()).collect(),
        },
        0,
    ))
}

fn names(cb: &CaseBase, set: &[CaseIx]) -> Vec<String> {
    cb.ids(set).map(|i| i.to_string()).collect()
}

fn open(file: &Path, cli: &Cli) -> Result<CaseBase, CliError> {
    let cb = load(file)?;
    match cli.relevance {
        None => Ok(cb),
        Some(RelevanceOverride::Afortiori) => Ok(cb.with_relevance(RelevanceConfig::Afortiori)?),
        Some(RelevanceOverride::Explicit) => match cb.relevance_mode() {
            RelevanceMode::Explicit => Ok(cb),
            RelevanceMode::Afortiori => Err(CliError::Usage(
                "explicit relevance requested but the file declares no relevance edges".into(),
            )),
        },
    }
}

fn validate(file: &Path, complete: bool) -> Result<(Report, u8), CliError> {
    let raw = parse_raw(&read(file)?)?;
    let report = validate_model(&raw, complete);
    let mut payload = json!({
        "valid": !report.has_errors(),
        "cases": raw.cases.len(),
        "issues": report.errors().map(|i| i.to_string()).collect::<Vec<_>>(),
    });
    if !report.has_errors() {
        let cb = CaseBase::from_raw(&raw).map_err(|e| CliError::ValidationFailed(e.0))?;
        let gap = completeness_gap(&cb);
        payload["complete"] = json!(gap.is_complete());
    }
    let status = if report.has_errors() { 2 } else { 0 };
    Ok((
        Report {
            command: json!({"verb": "validate", "file": file, "complete": complete}),
            payload,
            diagnostics: report.warnings().map(|w| w.to_string()).collect(),
        },
        status,
    ))
}

fn check_props(args: &CheckArgs) -> Result<(Report, u8), CliError> {
    let defaults = EnumerationBounds::default();
    let bounds = EnumerationBounds {
        plaintiff_facts: args.plt,
        defendant_facts: args.dfd,
        courts: args.courts,
        assessed: args.assessed,
        ranks: match args.ranks {
            RanksArg::Injective => RankRegime::Injective,
            RanksArg::Ties => RankRegime::Ties,
        },
        free_license: args.free_license,
        cap: args.cap.unwrap_or(defaults.cap),
    };
    let hypotheses = !args.no_hypotheses;
    let verdicts: Vec<PropertyVerdict> = match &args.property {
        Some(name) => {
            let property: PropertyId = name.parse()?;
            vec![check_property(property, &bounds, CheckOptions { hypotheses, stop_at_first: true })?]
        }
        None => {
            let plan = SweepPlan {
                checks: PropertyId::ALL.iter().map(|&p| (p, hypotheses)).collect(),
                differential: false,
                stop_at_first: false,
            };
            sweep(&bounds, &plan)?.verdicts
        }
    };

    let mut rows = Vec::new();
    let mut failed = false;
    for v in &verdicts {
        let mut row = json!({
            "property": v.property.as_str(),
            "statement": v.property.statement(),
            "hypotheses": v.hypotheses,
            "models_checked": v.models_checked,
            "models_in_scope": v.models_in_scope,
            "status": if v.holds() { "holds" } else { "counterexample" },
        });
        if let Some(c) = v.counterexample() {
            failed = true;
            row["witnesses"] = json!(c.witnesses);
            row["detail"] = json!(c.detail);
            if let Some(dir) = &args.dump {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
                let path = dir.join(format!("{}.json", v.property));
                let text = serde_json::to_string_pretty(&c.model).expect("case bases serialize");
                std::fs::write(&path, text + "\n").map_err(|source| CliError::Io { path: path.clone(), source })?;
                row["dump"] = json!(path);
                if v.property == PropertyId::Unambiguous {
                    row["replay"] = json!(replay_hint(&path, &c.witnesses));
                }
            }
        }
        rows.push(row);
    }
    let report = Report {
        command: json!({
            "verb": "check-props",
            "property": args.property,
            "plt": args.plt,
            "dfd": args.dfd,
            "courts": args.courts,
            "assessed": args.assessed,
            "ranks": args.ranks,
            "hypotheses": hypotheses,
            "free_license": args.free_license,
        }),
        payload: json!({"verdicts": rows}),
        diagnostics: Vec::new(),
    };
    Ok((report, u8::from(failed)))
}

fn replay_hint(path: &Path, witnesses: &[String]) -> String {
    match witnesses.first() {
        Some(focus) => format!("stare decide {} --case {focus}", path.display()),
        None => String::new(),
    }
}
